#include "thermorate/meijer_g.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "thermorate/detail/adaptive.hpp"
#include "thermorate/detail/double_double.hpp"
#include "thermorate/special.hpp"

namespace thermorate {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kLog2Pi = 1.8378770664093454835606594728112;

struct LadderHit {
    int factor;  // index into the factor list
    long rung;   // k: offset + coeff*s0 == -k
};

struct PoleSite {
    double s0 = 0.0;
    int order = 0;
    std::vector<LadderHit> num_hits;
    std::vector<LadderHit> den_zeros;
};

// All candidate pole locations of the numerator factors above -depth,
// classified by net order after denominator-zero cancellation.  Ladder
// points closer than the collision tolerance are merged into one site.
std::vector<PoleSite> classify_poles(
    const std::vector<detail::GammaFactor>& factors, double depth) {
    struct Candidate {
        double s0;
        LadderHit hit;
    };
    std::vector<Candidate> candidates;
    for (int fi = 0; fi < int(factors.size()); ++fi) {
        const auto& f = factors[fi];
        if (!f.numerator) continue;
        for (long k = 0;; ++k) {
            double s0 = -double(f.offset + (long double)k) / f.coeff;
            if (s0 <= -depth) break;
            candidates.push_back({s0, {fi, k}});
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& x, const Candidate& y) { return x.s0 > y.s0; });

    std::vector<PoleSite> sites;
    std::size_t i = 0;
    while (i < candidates.size()) {
        std::size_t j = i + 1;
        while (j < candidates.size() &&
               candidates[j].s0 > candidates[j - 1].s0 - kCollisionTolerance) {
            ++j;
        }
        PoleSite site;
        double acc = 0.0;
        for (std::size_t t = i; t < j; ++t) {
            acc += candidates[t].s0;
            site.num_hits.push_back(candidates[t].hit);
        }
        site.s0 = acc / double(j - i);
        for (int fi = 0; fi < int(factors.size()); ++fi) {
            const auto& f = factors[fi];
            if (f.numerator) continue;
            double w = double(f.offset + (long double)(f.coeff * site.s0));
            double r = std::round(w);
            if (r <= 0.0 && std::abs(w - r) < kCollisionTolerance * (1.0 + f.coeff)) {
                site.den_zeros.push_back({fi, long(-r)});
            }
        }
        site.order = int(site.num_hits.size()) - int(site.den_zeros.size());
        sites.push_back(std::move(site));
        i = j;
    }
    return sites;
}

// The residue terms cancel across the interleaved ladders by up to ~1e8;
// computing each term in extended (80-bit) precision keeps the surviving
// digits well inside the 1e-6 oracle-equivalence budget.

struct SignedLogGammaL {
    long double log_abs;
    int sign;
};

// lgammal is accurate to a couple of ulps; the sign alternates between
// consecutive negative integers.
SignedLogGammaL ln_gamma_ld(long double x) {
    long double lg = lgammal(x);
    int sign = 1;
    if (x < 0.0L) {
        long long f = (long long)floorl(x);
        sign = (f & 1) ? -1 : 1;
    }
    return {lg, sign};
}

long double sin_pi_ld(long double x) {
    long double r = remainderl(x, 2.0L);  // exact reduction to [-1, 1]
    if (r > 0.5L) r = 1.0L - r;
    else if (r < -0.5L) r = -1.0L - r;
    return sinl((long double)kPi * r);
}

long double cos_pi_ld(long double x) { return sin_pi_ld(0.5L - x); }

// digamma in long double: recurrence up to 13, then the Bernoulli series.
long double digamma_ld(long double x) {
    static const long double kAsym[] = {
        1.0L / 12.0L,        -1.0L / 120.0L,      1.0L / 252.0L,
        -1.0L / 240.0L,      1.0L / 132.0L,       -691.0L / 32760.0L,
        1.0L / 12.0L,        -3617.0L / 8160.0L,  43867.0L / 14364.0L,
        -174611.0L / 6600.0L,
    };
    if (x < 0.5L) {
        return digamma_ld(1.0L - x) -
               (long double)kPi * cos_pi_ld(x) / sin_pi_ld(x);
    }
    long double acc = 0.0L;
    while (x < 13.0L) {
        acc -= 1.0L / x;
        x += 1.0L;
    }
    long double inv2 = 1.0L / (x * x);
    long double series = 0.0L, p = inv2;
    for (long double coeff : kAsym) {
        series += coeff * p;
        p *= inv2;
    }
    return acc + logl(x) - 0.5L / x - series;
}

struct ResidueTerm {
    long double value = 0.0L;
    double log_scale = 0.0;  // |log| magnitude entering the exp; drives noise
    bool overflow = false;
};

// Residue of phi(s) z^{-s} at the given site.  For order 1 the local
// expansion gives C * z^{-s0}; for order 2, C * z^{-s0} * (D - ln z), where
// C collects the leading coefficients of the singular factors and the values
// of the regular ones, and D their first-order log-derivatives.
ResidueTerm residue_at(const std::vector<detail::GammaFactor>& factors,
                       const PoleSite& site, long double log_z) {
    long double log_c = 0.0L;
    int sign = 1;
    long double d_coeff = 0.0L;
    const bool second_order = site.order == 2;

    // Lattice-exact pole location: reconstructed from the reference hit so
    // the other factors' arguments come out as extended-precision offset
    // differences, not as sums with a rounded site location.
    const LadderHit& ref = site.num_hits.front();
    const auto& rf = factors[ref.factor];
    long double s0 = -(rf.offset + (long double)ref.rung) / (long double)rf.coeff;

    auto singular = [&](int fi) {
        for (const auto& h : site.num_hits)
            if (h.factor == fi) return std::pair{true, h.rung};
        for (const auto& h : site.den_zeros)
            if (h.factor == fi) return std::pair{true, h.rung};
        return std::pair{false, long(0)};
    };

    for (int fi = 0; fi < int(factors.size()); ++fi) {
        const auto& f = factors[fi];
        auto [sing, rung] = singular(fi);
        int dir = f.numerator ? 1 : -1;
        if (sing) {
            // Gamma near -k: (-1)^k/k! / (coeff*(s-s0)) * (1 + psi(k+1)*coeff*(s-s0)).
            long double lf = lgammal((long double)rung + 1.0L);
            log_c += dir * (-lf - logl((long double)f.coeff));
            if (rung % 2 != 0) sign = -sign;
            if (second_order)
                d_coeff += dir * f.coeff * digamma_ld((long double)rung + 1.0L);
        } else {
            long double arg = f.offset + (long double)f.coeff * s0;
            SignedLogGammaL g = ln_gamma_ld(arg);
            log_c += dir * g.log_abs;
            if (g.sign < 0) sign = -sign;
            if (second_order) d_coeff += dir * f.coeff * digamma_ld(arg);
        }
    }

    long double log_mag = log_c - s0 * log_z;
    ResidueTerm out;
    out.log_scale = double(fabsl(log_c) + fabsl(s0 * log_z));
    if (log_mag > 700.0L) {
        out.overflow = true;
        out.value = sign * std::numeric_limits<long double>::infinity();
        return out;
    }
    out.value = sign * expl(log_mag);
    if (second_order) out.value *= d_coeff - log_z;
    return out;
}

// Complex log-gamma via the same Lanczos approximation; shifted up by
// recurrence when Re(w) < 0.5.  Only used on contours that stay away from
// the poles, so no reflection is needed.
std::complex<double> complex_ln_gamma(std::complex<double> w) {
    constexpr double kLanczos7[9] = {
        0.99999999999980993227684700473478,
        676.520368121885098567009190444019,
        -1259.13921672240287047156078755283,
        771.3234287776530788486528258894,
        -176.61502916214059906584551354,
        12.507343278686904814458936853,
        -0.13857109526572011689554707,
        9.984369578019570859563e-6,
        1.50563273514931155834e-7,
    };
    std::complex<double> shift = 0.0;
    while (w.real() < 0.5) {
        shift -= std::log(w);
        w += 1.0;
    }
    std::complex<double> x = w - 1.0;
    std::complex<double> ag = kLanczos7[0];
    for (int k = 1; k <= 8; ++k) ag += kLanczos7[k] / (x + double(k));
    std::complex<double> t = x + 7.5;
    return (x + 0.5) * std::log(t) - t + 0.91893853320467274178 + std::log(ag) +
           shift;
}

std::vector<detail::GammaFactor> unit_factors(const GSpec& spec) {
    std::vector<detail::GammaFactor> factors;
    for (int j = 0; j < spec.m; ++j)
        factors.push_back({spec.b[j], 1.0, true});
    for (int j = spec.n; j < spec.p; ++j)
        factors.push_back({spec.a[j], 1.0, false});
    return factors;
}

}  // namespace

void GSpec::validate() const {
    if (m < 0 || n < 0 || p < 0 || q < 0 || m > q || n > p)
        throw std::domain_error("GSpec: need 0 <= m <= q and 0 <= n <= p");
    if (int(a.size()) != p || int(b.size()) != q)
        throw std::domain_error("GSpec: parameter list lengths must match p, q");
}

Rational::Rational(long n, long d) : num(n), den(d) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long g = std::gcd(std::abs(num), den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::from_double(double x, long max_den) {
    for (long d = 1; d <= max_den; ++d) {
        double n = std::round(x * double(d));
        if (std::abs(x - n / double(d)) < 1e-9 && std::abs(n) < 1e15) {
            return Rational(long(n), d);
        }
    }
    throw std::domain_error(
        "Rational: " + std::to_string(x) +
        " is not a rational with denominator <= " + std::to_string(max_den));
}

PoleSet enumerate_poles(const GSpec& spec, int depth) {
    spec.validate();
    if (spec.n != 0 || spec.m != spec.q)
        throw std::domain_error("enumerate_poles: only the n = 0, m = q class is supported");
    if (depth < 1) throw std::domain_error("enumerate_poles: depth must be >= 1");

    auto factors = unit_factors(spec);
    PoleSet out;
    for (const auto& site : classify_poles(factors, double(depth))) {
        if (site.order <= 0) continue;
        if (site.order > 2)
            throw MultiplicityError("enumerate_poles: pole of order " +
                                    std::to_string(site.order) + " at s = " +
                                    std::to_string(site.s0));
        Pole p;
        p.location = site.s0;
        p.order = site.order;
        for (const auto& h : site.num_hits) p.sources.push_back(h.factor);
        out.push_back(std::move(p));
    }
    return out;
}

namespace detail {

SeriesValue residue_series(const std::vector<GammaFactor>& factors, double z,
                           int depth, const Limits& limits, bool grow_depth) {
    if (!(z > 0.0)) throw std::domain_error("residue_series: need z > 0");
    long double log_z = logl((long double)z);

    if (factors.size() == 1 && factors.front().numerator) {
        // Single gamma ladder: the residue sum telescopes to an exact
        // exponential, (1/beta) z^{b/beta} exp(-z^{1/beta}).
        const auto& f = factors.front();
        long double w = expl(log_z / (long double)f.coeff);
        double v = double(
            expl((long double)f.offset * log_z / (long double)f.coeff - w) /
            (long double)f.coeff);
        return {v, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(v), 1};
    }

    constexpr double eps_rel = 1e-15;
    constexpr double eps_abs = 1e-300;

    int current_depth = depth;
    for (int attempt = 0;; ++attempt) {
        auto sites = classify_poles(factors, double(current_depth));

        long double sum = 0.0L;
        double max_term = 0.0;
        double neglected = 0.0;
        double noise_floor = 0.0;  // accumulated exp(log) rounding per term
        int consecutive_small = 0;
        int used = 0;
        bool converged = false;
        bool overflow = false;

        for (const auto& site : sites) {
            if (site.order <= 0) continue;
            if (site.order > 2)
                throw MultiplicityError("residue_series: pole of order " +
                                        std::to_string(site.order) + " at s = " +
                                        std::to_string(site.s0));
            ResidueTerm term = residue_at(factors, site, log_z);
            if (term.overflow) {
                overflow = true;
                break;
            }
            sum += term.value;
            ++used;
            double mag = double(fabsl(term.value));
            max_term = std::max(max_term, mag);
            noise_floor += std::numeric_limits<long double>::epsilon() *
                           (term.log_scale + 4.0) * mag;
            if (mag <= eps_rel * std::abs(double(sum)) + eps_abs) {
                neglected = std::max(neglected, mag);
                if (++consecutive_small >= 3) {
                    converged = true;
                    break;
                }
            } else {
                consecutive_small = 0;
                neglected = 0.0;
            }
        }

        if (overflow) {
            return {double(sum), std::numeric_limits<double>::infinity(), used};
        }
        if (!converged && grow_depth &&
            2 * used <= limits.series_max_terms && attempt < 6) {
            current_depth *= 2;
            continue;
        }
        if (!converged && grow_depth) {
            throw ConvergenceError("residue_series: no convergence after " +
                                   std::to_string(used) + " residues");
        }

        SeriesValue out;
        out.value = double(sum);
        out.terms = used;
        out.abs_err = 10.0 * neglected + noise_floor;
        if (!converged) {
            // Depth was fixed by the caller; bound the tail by the last term.
            double tail = sites.empty() ? 0.0 : max_term;
            if (used > 0) {
                // recompute magnitude of the deepest contributing residue
                ResidueTerm last{};
                for (auto it = sites.rbegin(); it != sites.rend(); ++it) {
                    if (it->order >= 1 && it->order <= 2) {
                        last = residue_at(factors, *it, log_z);
                        break;
                    }
                }
                tail = double(fabsl(last.value));
            }
            out.abs_err += 10.0 * tail;
        }
        if (max_term > kCancellationRatio * std::abs(out.value) ||
            out.abs_err > 0.1 * std::abs(out.value)) {
            out.abs_err = std::numeric_limits<double>::infinity();
        }
        return out;
    }
}

}  // namespace detail

SeriesValue g_series(const GSpec& spec, double z, int depth,
                     const Limits& limits) {
    spec.validate();
    if (spec.n != 0 || spec.p > 1 || spec.m != spec.q)
        throw std::domain_error(
            "g_series: closed forms cover the n = 0, p <= 1, m = q class only");
    if (!(z > 0.0)) throw std::domain_error("g_series: need z > 0");
    return detail::residue_series(unit_factors(spec), z, depth, limits, false);
}

SeriesValue g_contour(const GSpec& spec, double z) {
    spec.validate();
    if (!(z > 0.0)) throw std::domain_error("g_contour: need z > 0");
    // Integrand growth exponent: each net numerator gamma contributes
    // exp(-pi|t|/2) decay along the vertical line.
    int net = 2 * (spec.m + spec.n) - spec.p - spec.q;
    if (net <= 0)
        throw ContourError("g_contour: integrand does not decay on a vertical line");

    double left = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < spec.m; ++j) left = std::max(left, -spec.b[j]);
    double right = std::numeric_limits<double>::infinity();
    for (int j = 0; j < spec.n; ++j) right = std::min(right, 1.0 - spec.a[j]);
    if (left >= right)
        throw ContourError("g_contour: no separating abscissa exists");
    double c;
    if (std::isinf(right)) c = std::isinf(left) ? 0.5 : left + 0.5;
    else if (std::isinf(left)) c = right - 0.5;
    else c = 0.5 * (left + right);

    auto log_phi = [&spec](std::complex<double> s) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < spec.m; ++j) acc += complex_ln_gamma(spec.b[j] + s);
        for (int j = 0; j < spec.n; ++j) acc += complex_ln_gamma(1.0 - spec.a[j] - s);
        for (int j = spec.m; j < spec.q; ++j)
            acc -= complex_ln_gamma(1.0 - spec.b[j] - s);
        for (int j = spec.n; j < spec.p; ++j)
            acc -= complex_ln_gamma(spec.a[j] + s);
        return acc;
    };

    double log_z = std::log(z);
    auto envelope = [&](double t) {
        return std::exp(log_phi({c, t}).real() - c * log_z);
    };

    double ref = envelope(0.0);
    double T = 8.0;
    while (T < 4096.0 && envelope(T) > 1e-16 * (ref + 1e-300)) T *= 2.0;

    auto integrand = [&](double t) {
        std::complex<double> val =
            std::exp(log_phi({c, t}) - std::complex<double>(c, t) * log_z);
        return val.real();
    };

    std::vector<detail::Segment> segs;
    segs.push_back({integrand, 0.0, T});
    auto res = detail::adaptive_integrate(segs, 1e-12, 1e-300, 400'000);

    double kappa = 0.5 * kPi * net;
    double tail = envelope(T) / kappa;

    SeriesValue out;
    out.value = res.value / kPi;
    // Quadrature estimate, truncation tail, and the rounding floor of
    // accumulating the oscillatory panels.
    out.abs_err = (res.abs_err + tail) / kPi +
                  std::numeric_limits<double>::epsilon() * ref * T;
    out.terms = int(std::min<long>(res.evaluations, INT32_MAX));
    return out;
}

double HToGResult::prefactor() const { return std::exp(log_prefactor); }

double HToGResult::map_argument(double z) const {
    return std::exp(log_arg_scale + double(arg_power) * std::log(z));
}

HToGResult h_to_g(const HSpec& h) {
    long L = 1;
    for (const auto& p : h.lower) L = std::lcm(L, p.coeff.den);
    for (const auto& p : h.upper) L = std::lcm(L, p.coeff.den);
    if (L > 12)
        throw std::domain_error("h_to_g: common denominator exceeds 12");

    HToGResult out;
    out.arg_power = L;
    out.log_prefactor = std::log(double(L));  // from the substitution s = L s'

    auto expand = [&](const HParam& p, bool numerator) {
        long M = p.coeff.num * (L / p.coeff.den);
        if (M < 1 || M > 64)
            throw std::domain_error("h_to_g: expansion order out of range");
        // Gamma(c + M s') = (2 pi)^{(1-M)/2} M^{c - 1/2} M^{M s'}
        //                   * prod_k Gamma(s' + (c+k)/M)
        double lp = 0.5 * (1.0 - double(M)) * kLog2Pi +
                    (p.c - 0.5) * std::log(double(M));
        double la = double(M) * std::log(double(M));
        if (numerator) {
            out.log_prefactor += lp;
            out.log_arg_scale -= la;
            for (long k = 0; k < M; ++k)
                out.gspec.b.push_back((p.c + double(k)) / double(M));
        } else {
            out.log_prefactor -= lp;
            out.log_arg_scale += la;
            for (long k = 0; k < M; ++k)
                out.gspec.a.push_back((p.c + double(k)) / double(M));
        }
    };

    for (const auto& p : h.lower) expand(p, true);
    for (const auto& p : h.upper) expand(p, false);

    out.gspec.n = 0;
    out.gspec.m = int(out.gspec.b.size());
    out.gspec.q = out.gspec.m;
    out.gspec.p = int(out.gspec.a.size());
    out.gspec.validate();
    return out;
}

}  // namespace thermorate
