#include "thermorate/rates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "thermorate/detail/double_double.hpp"
#include "thermorate/detail/resum.hpp"
#include "thermorate/meijer_g.hpp"
#include "thermorate/pfq.hpp"
#include "thermorate/special.hpp"

namespace thermorate {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kSqrtPi = 1.7724538509055160272981674833411;

struct Eval {
    SeriesValue sv;
    bool double_pole = false;
};

bool near_half_integer_collision(double nu) {
    double two_nu = 2.0 * nu;
    return std::abs(two_nu - std::round(two_nu)) < kCollisionTolerance;
}

// Gamma(1+nu); exact factorial product for integer nu (so the trivial
// z = 0 cases come out bit-exact).
double gamma_one_plus(double nu) {
    double r = std::round(nu);
    if (std::abs(nu - r) < kPoleTolerance && r >= 0.0 && r <= 170.0) {
        double f = 1.0;
        for (int i = 2; i <= int(r); ++i) f *= i;
        return f;
    }
    return ln_gamma(1.0 + nu).value();
}

int residue_depth(double x, int ladders, double b_max) {
    double d = 36.0 + 4.0 * std::pow(std::max(x, 0.0), 1.0 / std::max(1, ladders));
    return int(std::ceil(d + std::max(b_max, 0.0)));
}

// pi^{-1/2} G(3,0;0,3)[x | 0, 1/2, 1+nu]; nu is pre-rounded to the exact
// collision when applicable.
SeriesValue g303_over_sqrt_pi(double x, double nu, const Limits& limits) {
    GSpec spec;
    spec.m = spec.q = 3;
    spec.b = {0.0, 0.5, 1.0 + nu};
    int depth = residue_depth(x, 3, 1.0 + std::abs(nu));
    SeriesValue g = detail::residue_series(
        {{0.0, 1.0, true}, {0.5, 1.0, true}, {1.0 + nu, 1.0, true}}, x, depth,
        limits, true);
    return g.scale(1.0 / kSqrtPi);
}

// Generic-nu three-term 0F2 representation of J1.
SeriesValue j1_generic(double z, double nu, const Limits& limits) {
    double x = -z * z / 4.0;
    double lq = std::log(z * z / 4.0);

    SeriesValue f1 = pfq({{}, {0.5, -nu}, x}, limits);
    SeriesValue f2 = pfq({{}, {1.5, 0.5 - nu}, x}, limits);
    SeriesValue f3 = pfq({{}, {nu + 2.0, nu + 1.5}, x}, limits);

    SignedLogGamma g1 = ln_gamma(1.0 + nu);
    SignedLogGamma g2 = ln_gamma(nu + 0.5);

    // Gamma(-1-nu) Gamma(-1/2-nu) = -2 pi^2 / (sin(2 pi nu) Gamma(2+nu)
    // Gamma(3/2+nu)).  Forming -1-nu directly would round the distance to
    // the nearest collision and blow the 1/eps prefactor; the reflected
    // form reduces the angle exactly.
    double s2 = sin_pi(2.0 * nu);
    SignedLogGamma g3a = ln_gamma(2.0 + nu);
    SignedLogGamma g3b = ln_gamma(1.5 + nu);
    double log_pair = std::log(2.0) + 2.0 * std::log(kPi) -
                      std::log(std::abs(s2)) - g3a.log_abs - g3b.log_abs;
    int pair_sign = -(s2 > 0 ? 1 : -1) * g3a.sign * g3b.sign;

    double p1 = g1.sign * std::exp(g1.log_abs);
    double p2 = -2.0 * g2.sign * std::exp(g2.log_abs + 0.5 * lq);
    double p3 = pair_sign *
                std::exp(log_pair - std::log(kSqrtPi) + (1.0 + nu) * lq);

    double t1 = p1 * f1.value;
    double t2 = p2 * f2.value;
    double t3 = p3 * f3.value;

    detail::dd sum(t1);
    sum += t2;
    sum += t3;

    SeriesValue out;
    out.value = double(sum);
    out.terms = f1.terms + f2.terms + f3.terms;
    double max_term = std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
    out.abs_err = std::abs(p1) * f1.abs_err + std::abs(p2) * f2.abs_err +
                  std::abs(p3) * f3.abs_err +
                  4.0 * std::numeric_limits<double>::epsilon() * max_term;
    if (!f1.reliable() || !f2.reliable() || !f3.reliable() ||
        max_term > kCancellationRatio * std::abs(out.value) ||
        out.abs_err > 0.1 * std::abs(out.value)) {
        out.abs_err = std::numeric_limits<double>::infinity();
    }
    return out;
}

Eval j1_core(double z, double nu, const Limits& limits) {
    if (z < 0.0) throw std::domain_error("j1_closed: need z >= 0");
    if (z == 0.0) {
        if (nu <= -1.0)
            throw std::domain_error("j1_closed: integral diverges for z = 0, nu <= -1");
        double v = gamma_one_plus(nu);
        return {{v, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(v), 1},
                false};
    }
    if (near_half_integer_collision(nu)) {
        double nur = std::round(2.0 * nu) / 2.0;
        return {g303_over_sqrt_pi(z * z / 4.0, nur, limits), true};
    }
    return {j1_generic(z, nu, limits), false};
}

// Int_0^d y^nu exp(-a y - z/sqrt(y)) dy; Eq.-(28)-style outer series over
// the G(3,0;1,3) inner values.  For a*d big enough that the complement of
// the full-range integral is below double precision, returns the full-range
// value instead (the outer series would need ~exp(a d) cancellation).
struct CutoffEval {
    SeriesValue sv;
    bool double_pole = false;
    bool switched_to_full_range = false;
};

Eval j1_scaled(double z, double a, double nu, const Limits& limits) {
    // Int_0^inf y^nu exp(-a y - z/sqrt(y)) dy = a^{-(nu+1)} J1(z sqrt(a), nu)
    Eval e = j1_core(z * std::sqrt(a), nu, limits);
    e.sv.scale(std::pow(a, -(nu + 1.0)));
    return e;
}

CutoffEval cutoff_core(double z, double d, double a, double nu,
                       const Limits& limits) {
    if (!(d > 0.0)) throw std::domain_error("j2_closed: need d > 0");
    if (z < 0.0) throw std::domain_error("j2_closed: need z >= 0");
    CutoffEval out;

    if (z == 0.0) {
        if (nu <= -1.0 && near_nonpositive_integer(nu + 1.0))
            throw std::domain_error("j2_closed: nu is a negative integer at z = 0");
        if (nu < -1.0)
            throw std::domain_error("j2_closed: integral diverges for z = 0, nu < -1");
        // d^{nu+1} sum_r (-a d)^r / (r! (nu+r+1))
        detail::dd sum(0.0);
        double coef = 1.0;
        double max_term = 0.0;
        double next_term = 0.0;
        int small = 0;
        int r = 0;
        for (; r < limits.series_max_terms; ++r) {
            double term = coef / (nu + r + 1.0);
            sum += term;
            max_term = std::max(max_term, std::abs(term));
            coef *= -a * d / (r + 1.0);
            next_term = std::abs(coef / (nu + r + 2.0));
            if (next_term <= 1e-15 * std::abs(double(sum)) + 1e-300) {
                if (++small >= 3) break;
            } else {
                small = 0;
            }
        }
        if (small < 3)
            throw ConvergenceError("j2_closed: z = 0 series did not converge");
        double scale = std::pow(d, nu + 1.0);
        out.sv.value = scale * double(sum);
        out.sv.terms = r;
        out.sv.abs_err =
            scale * (10.0 * next_term +
                     4.0 * std::numeric_limits<double>::epsilon() * max_term);
        if (max_term > kCancellationRatio * std::abs(double(sum)))
            out.sv.abs_err = std::numeric_limits<double>::infinity();
        return out;
    }

    // Full-range switch: complement Int_d^inf y^nu e^{-a y - ...} dy is
    // bounded by 2 d^nu e^{-a d} / a (upper incomplete gamma tail).
    Eval full = j1_scaled(z, a, nu, limits);
    if (a * d > 2.0 * (std::abs(nu) + 2.0)) {
        double log_tail = nu * std::log(d) - a * d + std::log(2.0 / a);
        double tail = std::exp(log_tail);
        if (tail <= 1e-14 * std::abs(full.sv.value)) {
            out.sv = full.sv;
            out.sv.abs_err += tail;
            out.double_pole = full.double_pole;
            out.switched_to_full_range = true;
            return out;
        }
    }

    double x = z * z / (4.0 * d);
    detail::dd sum(0.0);
    double coef = 1.0;  // (-a d)^r / r!
    double max_term = 0.0;
    double err_acc = 0.0;
    double neglected = 0.0;
    int small = 0;
    int r = 0;
    int terms = 0;
    for (; r < limits.outer_max_terms; ++r) {
        double u = nu + r + 1.0;
        SeriesValue g = detail::residue_series(
            {{u, 1.0, true},
             {0.0, 1.0, true},
             {0.5, 1.0, true},
             {u + 1.0, 1.0, false}},
            x, residue_depth(x, 3, std::abs(u) + 1.0), limits, true);
        if (near_half_integer_collision(u)) out.double_pole = true;
        double term = coef * g.value;
        sum += term;
        terms += g.terms;
        err_acc += std::abs(coef) * g.abs_err;
        max_term = std::max(max_term, std::abs(term));
        coef *= -a * d / (r + 1.0);
        if (std::abs(term) <= 1e-15 * std::abs(double(sum)) + 1e-300) {
            neglected = std::max(neglected, std::abs(term));
            if (++small >= 3) break;
        } else {
            small = 0;
            neglected = 0.0;
        }
    }
    if (small < 3)
        throw ConvergenceError("j2_closed: outer series hit the term ceiling (" +
                               std::to_string(limits.outer_max_terms) + ")");

    double scale = std::pow(d, nu + 1.0) / kSqrtPi;
    out.sv.value = scale * double(sum);
    out.sv.terms = terms;
    out.sv.abs_err =
        scale * (err_acc + 10.0 * neglected +
                 4.0 * std::numeric_limits<double>::epsilon() * max_term);
    if (max_term > kCancellationRatio * std::abs(double(sum)) ||
        out.sv.abs_err > 0.1 * std::abs(out.sv.value))
        out.sv.abs_err = std::numeric_limits<double>::infinity();
    return out;
}

// Depletion with delta > 1: swap the roles of exp(-y) and exp(-b y^delta).
// Substituting w = b y^delta turns each term into the generalized-H integral
// Int w^{rho_j - 1} exp(-w - zt w^{-gt}) dw with gt = 1/(2 delta), summed
// over the expansion of exp(-y).
Eval j4_steep(double z, double delta, double b, double nu,
              const Limits& limits) {
    double gt = 1.0 / (2.0 * delta);
    double zt = z * std::pow(b, gt);
    long double log_b = logl((long double)b);
    long double delta_ld = (long double)delta;

    detail::dd sum(0.0);
    double max_term = 0.0;
    double err_acc = 0.0;
    double neglected = 0.0;
    long double log_fact = 0.0L;  // log j!
    int small = 0;
    int terms = 0;
    int j = 0;
    for (; j < limits.outer_max_terms; ++j) {
        long double rho_j = ((long double)nu + j + 1.0L) / delta_ld;
        if (j > 0) log_fact += logl((long double)j);
        double coef_mag =
            double(expl(-log_fact - rho_j * log_b) / delta_ld);
        double coef = (j % 2 == 0 ? 1.0 : -1.0) * coef_mag;

        SeriesValue inner;
        if (zt == 0.0) {
            SignedLogGamma g = ln_gamma(double(rho_j));
            inner = {g.value(),
                     4.0 * std::numeric_limits<double>::epsilon() *
                         std::exp(g.log_abs),
                     1};
        } else {
            double arg = std::pow(zt, 1.0 / gt);
            inner = detail::residue_series(
                {{rho_j, 1.0, true}, {0.0L, 1.0 / gt, true}}, arg,
                residue_depth(arg, 2, double(rho_j)), limits, true);
            inner.scale(1.0 / gt);
        }
        double term = coef * inner.value;
        sum += term;
        terms += inner.terms;
        err_acc += coef_mag * inner.abs_err;
        max_term = std::max(max_term, std::abs(term));
        if (std::abs(term) <= 1e-15 * std::abs(double(sum)) + 1e-300) {
            neglected = std::max(neglected, std::abs(term));
            if (++small >= 3) break;
        } else {
            small = 0;
            neglected = 0.0;
        }
    }
    if (small < 3)
        throw ConvergenceError("j4_closed: steep-depletion series hit the term ceiling");

    SeriesValue out;
    out.value = double(sum);
    out.terms = terms;
    out.abs_err = err_acc + 10.0 * neglected +
                  4.0 * std::numeric_limits<double>::epsilon() * max_term;
    if (max_term > kCancellationRatio * std::abs(out.value) ||
        out.abs_err > 0.1 * std::abs(out.value))
        out.abs_err = std::numeric_limits<double>::infinity();
    return {out, false};
}

}  // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::series: return "series";
        case Method::double_pole_series: return "double_pole_series";
        case Method::asymptotic_switchover: return "asymptotic_switchover";
    }
    return "series";
}

SeriesValue j1_closed(double z, double nu, const Limits& limits) {
    return j1_core(z, nu, limits).sv;
}

SeriesValue j2_closed(double z, double d, double nu, const Limits& limits) {
    return cutoff_core(z, d, 1.0, nu, limits).sv;
}

SeriesValue j3_closed(double z, double t, int nu, const Limits& limits) {
    if (nu < 0) throw std::domain_error("j3_closed: nu must be a nonnegative integer");
    if (t < 0.0) throw std::domain_error("j3_closed: need t >= 0");
    if (z < 0.0) throw std::domain_error("j3_closed: need z >= 0");
    if (t == 0.0) return j1_closed(z, nu, limits);
    if (z == 0.0) {
        double v = gamma_one_plus(nu);
        return {v, 4.0 * std::numeric_limits<double>::epsilon() * v, 1};
    }

    // J3 = e^t sum_r C(nu,r) (-t)^r [J1(z, nu-r) - J2(z, t, nu-r)]
    detail::dd sum(0.0);
    double err_acc = 0.0;
    double max_term = 0.0;
    int terms = 0;
    double binom = 1.0;
    double tpow = 1.0;
    for (int r = 0; r <= nu; ++r) {
        Eval full = j1_core(z, double(nu - r), limits);
        CutoffEval cut = cutoff_core(z, t, 1.0, double(nu - r), limits);
        double coef = binom * tpow;
        double term = coef * (full.sv.value - cut.sv.value);
        sum += term;
        err_acc += std::abs(coef) * (full.sv.abs_err + cut.sv.abs_err);
        max_term = std::max(max_term, std::abs(term));
        terms += full.sv.terms + cut.sv.terms;
        if (!full.sv.reliable() || !cut.sv.reliable())
            err_acc = std::numeric_limits<double>::infinity();
        binom *= double(nu - r) / double(r + 1);
        tpow *= -t;
    }
    double et = std::exp(t);
    SeriesValue out;
    out.value = et * double(sum);
    out.terms = terms;
    out.abs_err = et * (err_acc +
                        4.0 * std::numeric_limits<double>::epsilon() * max_term);
    if (max_term > kCancellationRatio * std::abs(double(sum)) ||
        out.abs_err > 0.1 * std::abs(out.value))
        out.abs_err = std::numeric_limits<double>::infinity();
    return out;
}

SeriesValue j4_closed(double z, double delta, double b, double nu,
                      const Limits& limits) {
    if (!(delta > 0.0)) throw std::domain_error("j4_closed: need delta > 0");
    if (b < 0.0) throw std::domain_error("j4_closed: need b >= 0");
    if (z < 0.0) throw std::domain_error("j4_closed: need z >= 0");
    if (b == 0.0) return j1_closed(z, nu, limits);
    if (std::abs(delta - 1.0) < 1e-12) {
        // exp(-y - b y) folds into a rescaled J1 exactly.
        SeriesValue v = j1_closed(z * std::sqrt(1.0 + b), nu, limits);
        return v.scale(std::pow(1.0 + b, -(nu + 1.0)));
    }
    if (delta > 1.0) {
        return j4_steep(z, delta, b, nu, limits).sv;
    }

    // delta < 1: expand exp(-b y^delta); term k is J1 at exponent nu + k*delta.
    detail::dd sum(0.0);
    double coef = 1.0;
    double err_acc = 0.0;
    double max_term = 0.0;
    double neglected = 0.0;
    int small = 0;
    int terms = 0;
    int k = 0;
    for (; k < limits.outer_max_terms; ++k) {
        Eval inner = j1_core(z, nu + k * delta, limits);
        double term = coef * inner.sv.value;
        sum += term;
        terms += inner.sv.terms;
        err_acc += std::abs(coef) * inner.sv.abs_err;
        max_term = std::max(max_term, std::abs(term));
        coef *= -b / (k + 1.0);
        if (std::abs(term) <= 1e-15 * std::abs(double(sum)) + 1e-300) {
            neglected = std::max(neglected, std::abs(term));
            if (++small >= 3) break;
        } else {
            small = 0;
            neglected = 0.0;
        }
    }
    if (small < 3)
        throw ConvergenceError("j4_closed: depletion series hit the term ceiling");

    SeriesValue out;
    out.value = double(sum);
    out.terms = terms;
    out.abs_err = err_acc + 10.0 * neglected +
                  4.0 * std::numeric_limits<double>::epsilon() * max_term;
    if (max_term > kCancellationRatio * std::abs(out.value) ||
        out.abs_err > 0.1 * std::abs(out.value))
        out.abs_err = std::numeric_limits<double>::infinity();
    return out;
}

SeriesValue resonant_closed(double q, double a, double b, double g, int nu,
                            int n, int m, const Limits& limits) {
    if (q < 0.0 || a <= 0.0 || g == 0.0)
        throw std::domain_error("resonant_closed: need q >= 0, a > 0, g != 0");
    if (nu < 0) throw std::domain_error("resonant_closed: nu must be >= 0");
    if (n < 1 || m < 1 || n > 12 || m > 12)
        throw std::domain_error("resonant_closed: need 1 <= n, m <= 12");

    double nu_star = std::cbrt(q * q * a / 4.0);
    double cond = (b - nu_star / a) * (b - nu_star / a) / (g * g);
    if (cond >= 1.0) {
        throw DivergenceError(
            "resonant_closed: validity condition fails, (b - nu*/a)^2/g^2 = " +
            std::to_string(cond));
    }

    // Inner moments Int t^{nu+k1} e^{-a t - q t^{-n/m}} dt.  For q = 0 they
    // are plain gamma factors, computed in double-double so the divergent
    // outer blocks stay exact enough for the transforms.
    int kmax = 40;
    std::vector<detail::dd> inner(2 * kmax + 1);
    int inner_terms = 0;
    if (q == 0.0) {
        // Gamma(nu+k1+1) / a^{nu+k1+1}
        detail::dd v = detail::dd(1.0);
        for (int i = 1; i <= nu; ++i) v *= double(i);
        detail::dd apow(std::pow(a, -(nu + 1.0)));
        detail::dd ainv = detail::dd(1.0) / detail::dd(a);
        v *= apow;
        for (int k1 = 0; k1 <= 2 * kmax; ++k1) {
            inner[k1] = v;
            v *= double(nu + k1 + 1);
            v *= ainv;
        }
        inner_terms = 2 * kmax + 1;
    } else {
        for (int k1 = 0; k1 <= 2 * kmax; ++k1) {
            SeriesValue sv =
                rate_general(q, a, -double(nu + k1) / n, n, m, limits);
            inner[k1] = detail::dd(sv.value / a);
            inner_terms += sv.terms;
        }
    }

    // Blocks T_k = (-1)^k / g^{2(k+1)} sum_{k1<=2k} C(2k,k1) (-1)^{k1}
    //              b^{2k-k1} inner(k1)
    std::vector<detail::dd> blocks;
    detail::dd g2 = detail::dd(g) * detail::dd(g);
    detail::dd g2pow = detail::dd(1.0) / g2;
    bool plain_converged = false;
    detail::dd plain_sum(0.0);
    int small = 0;
    for (int k = 0; k <= kmax; ++k) {
        detail::dd s(0.0);
        if (b == 0.0) {
            s = inner[2 * k];  // only k1 = 2k survives
        } else {
            detail::dd binom(1.0);
            detail::dd bp(1.0);  // b^{2k-k1}, built from b^{2k} downward
            for (int i = 0; i < 2 * k; ++i) bp *= b;
            for (int k1 = 0; k1 <= 2 * k; ++k1) {
                detail::dd term = binom * bp * inner[k1];
                if (k1 % 2 != 0) term = -term;
                s += term;
                binom = binom * double(2 * k - k1) / double(k1 + 1);
                bp = bp / detail::dd(b);
            }
        }
        detail::dd block = s * g2pow;
        if (k % 2 != 0) block = -block;
        blocks.push_back(block);
        g2pow = g2pow / g2;
        if (std::abs(double(block)) > 1e280) break;  // overflow guard

        plain_sum += block;
        if (detail::abs(block) <=
            1e-15 * std::abs(double(plain_sum)) + 1e-300) {
            if (++small >= 3) {
                plain_converged = true;
                break;
            }
        } else {
            small = 0;
        }
    }

    SeriesValue out;
    if (plain_converged) {
        out.value = double(plain_sum);
        out.abs_err = 10.0 * detail::abs(blocks.back());
        out.terms = inner_terms + int(blocks.size());
        return out;
    }

    auto res = detail::resum_alternating(blocks);
    out.value = res.value;
    out.abs_err = res.abs_err;
    out.terms = inner_terms + int(blocks.size());
    if (!std::isfinite(res.abs_err) || res.abs_err > std::abs(res.value)) {
        out.abs_err = std::numeric_limits<double>::infinity();
    }
    return out;
}

SeriesValue rate_general(double z, double p, double rho, int n, int m,
                         const Limits& limits) {
    if (p <= 0.0 || z < 0.0)
        throw std::domain_error("rate_general: need p > 0, z >= 0");
    if (n < 1 || m < 1 || n > 12 || m > 12)
        throw std::domain_error("rate_general: need 1 <= n, m <= 12");
    if (z == 0.0) {
        double arg = 1.0 - n * rho;
        if (arg <= 0.0)
            throw std::domain_error("rate_general: diverges at z = 0 for n*rho >= 1");
        SignedLogGamma g = ln_gamma(arg);
        double v = std::exp(g.log_abs + n * rho * std::log(p));
        return {v, 4.0 * std::numeric_limits<double>::epsilon() * v, 1};
    }

    HSpec h;
    h.lower = {{0.0, Rational(long(m), 1)}, {1.0 - n * rho, Rational(long(n), 1)}};
    HToGResult red = h_to_g(h);
    double zh = std::exp(m * std::log(z) + n * std::log(p));
    double arg = red.map_argument(zh);

    std::vector<detail::GammaFactor> factors;
    double b_max = 0.0;
    for (double bj : red.gspec.b) {
        factors.push_back({bj, 1.0, true});
        b_max = std::max(b_max, std::abs(bj));
    }
    SeriesValue gval = detail::residue_series(
        factors, arg, residue_depth(arg, int(factors.size()), b_max), limits,
        true);
    double scale = double(m) * std::exp(n * rho * std::log(p) + red.log_prefactor);
    return gval.scale(scale);
}

SeriesValue rate_general_h(double z, double p, double rho, Rational gamma,
                           const Limits& limits) {
    if (p <= 0.0 || z < 0.0)
        throw std::domain_error("rate_general_h: need p > 0, z >= 0");
    if (gamma.num <= 0 || gamma.den <= 0)
        throw std::domain_error("rate_general_h: gamma must be positive");
    double gv = gamma.value();
    if (z == 0.0) {
        if (rho <= 0.0)
            throw std::domain_error("rate_general_h: diverges at z = 0 for rho <= 0");
        SignedLogGamma g = ln_gamma(rho);
        double v = std::exp(g.log_abs - rho * std::log(p));
        return {v, 4.0 * std::numeric_limits<double>::epsilon() * v, 1};
    }

    HSpec h;
    h.lower = {{rho, Rational(1, 1)}, {0.0, gamma.inverse()}};
    HToGResult red = h_to_g(h);
    double zh = p * std::pow(z, 1.0 / gv);
    double arg = red.map_argument(zh);

    std::vector<detail::GammaFactor> factors;
    double b_max = 0.0;
    for (double bj : red.gspec.b) {
        factors.push_back({bj, 1.0, true});
        b_max = std::max(b_max, std::abs(bj));
    }
    SeriesValue gval = detail::residue_series(
        factors, arg, residue_depth(arg, int(factors.size()), b_max), limits,
        true);
    double scale = std::exp(red.log_prefactor - std::log(gv) - rho * std::log(p));
    return gval.scale(scale);
}

SeriesValue asym(const RateQuery& query) {
    auto j1_line = [](double z, double nu) {
        double w = z * z / 4.0;
        return 2.0 * std::sqrt(kPi / 3.0) *
               std::pow(w, (2.0 * nu + 1.0) / 6.0) *
               std::exp(-3.0 * std::cbrt(w));
    };
    SeriesValue out;
    out.terms = 1;
    if (const auto* r = std::get_if<NonResonant>(&query)) {
        out.value = j1_line(r->z, r->nu);
    } else if (const auto* r = std::get_if<CutOff>(&query)) {
        double x = r->z * r->z / (4.0 * r->d);
        out.value = std::pow(r->d, r->nu + 1.0) / std::sqrt(x) *
                    std::exp(-r->d - 2.0 * std::sqrt(x));
    } else if (const auto* r = std::get_if<Screened>(&query)) {
        double w = r->z * r->z / 4.0;
        out.value = 2.0 * std::sqrt(kPi / 3.0) * std::pow(w, 1.0 / 6.0) *
                    std::pow(std::cbrt(w) - r->t, double(r->nu)) *
                    std::exp(r->t - 3.0 * std::cbrt(w));
    } else if (const auto* r = std::get_if<Depleted>(&query)) {
        double w = r->z * r->z / 4.0;
        out.value = j1_line(r->z, r->nu) *
                    std::exp(-r->b * std::pow(w, r->delta / 3.0));
    } else {
        throw std::domain_error("asym: no asymptotic line for family " +
                                family_name(query));
    }
    out.abs_err = 0.0;  // formula evaluation; accuracy is O(z^{-2/3}) by contract
    return out;
}

bool has_asym(const RateQuery& query) {
    return std::holds_alternative<NonResonant>(query) ||
           std::holds_alternative<CutOff>(query) ||
           std::holds_alternative<Screened>(query) ||
           std::holds_alternative<Depleted>(query);
}

RateResult closed_rate(const RateQuery& query, const Limits& limits) {
    RateResult out;
    if (const auto* r = std::get_if<NonResonant>(&query)) {
        Eval e = j1_core(r->z, r->nu, limits);
        out.value = e.sv;
        out.method = e.double_pole ? Method::double_pole_series : Method::series;
    } else if (const auto* r = std::get_if<CutOff>(&query)) {
        CutoffEval e = cutoff_core(r->z, r->d, 1.0, r->nu, limits);
        out.value = e.sv;
        out.method =
            e.double_pole ? Method::double_pole_series : Method::series;
    } else if (const auto* r = std::get_if<Screened>(&query)) {
        out.value = j3_closed(r->z, r->t, r->nu, limits);
        // integer exponents put the shifted ladders on top of the 0-ladder
        out.method = r->z > 0.0 ? Method::double_pole_series : Method::series;
    } else if (const auto* r = std::get_if<Depleted>(&query)) {
        out.value = j4_closed(r->z, r->delta, r->b, r->nu, limits);
        out.method = Method::series;
    } else if (const auto* r = std::get_if<Resonant>(&query)) {
        out.value = resonant_closed(r->q, r->a, r->b, r->g, r->nu, r->n, r->m,
                                    limits);
        out.method = Method::series;
    } else if (const auto* r = std::get_if<GeneralMB>(&query)) {
        out.value = rate_general(r->z, r->p, r->rho, r->n, r->m, limits);
        out.method = Method::series;
    } else {
        const auto& rh = std::get<GeneralH>(query);
        out.value = rate_general_h(rh.z, rh.p, rh.rho, rh.gamma, limits);
        out.method = Method::series;
    }
    return out;
}

RateResult evaluate_rate(const RateQuery& query, const Limits& limits) {
    RateResult res = closed_rate(query, limits);
    if (!res.value.reliable() && has_asym(query)) {
        SeriesValue av = asym(query);
        av.abs_err = 0.05 * std::abs(av.value);  // percent-scale regime accuracy
        return {av, Method::asymptotic_switchover};
    }
    return res;
}

double cancellation_wall(const RateQuery& prototype, double z_max,
                         const Limits& limits) {
    auto with_z = [&prototype](double z) {
        RateQuery q = prototype;
        std::visit([z](auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Resonant>) r.q = z;
            else r.z = z;
        }, q);
        return q;
    };
    auto unreliable_at = [&](double z) {
        try {
            return !closed_rate(with_z(z), limits).value.reliable();
        } catch (const ConvergenceError&) {
            return true;
        }
    };

    double lo = 1.0;
    if (unreliable_at(lo)) return lo;
    double hi = lo;
    while (hi < z_max) {
        hi *= 2.0;
        if (unreliable_at(hi)) break;
    }
    if (hi >= z_max && !unreliable_at(z_max))
        return std::numeric_limits<double>::infinity();
    lo = hi / 2.0;
    while (hi / lo > 1.01) {
        double mid = std::sqrt(lo * hi);
        if (unreliable_at(mid)) hi = mid;
        else lo = mid;
    }
    return hi;
}

}  // namespace thermorate
