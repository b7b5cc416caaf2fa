#include "thermorate/quadrature.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include "thermorate/detail/adaptive.hpp"

namespace thermorate {

namespace {

using Integrand = std::function<double(double)>;

// Mode of y + z*y^(-n/m) (the Gamow-peak location for the n=1, m=2 family,
// scaled by the decay rate a where needed).
double peak_location(double z, double a, double n_over_m) {
    if (z <= 0.0) return 0.0;
    return std::pow(n_over_m * z / a, 1.0 / (1.0 + n_over_m));
}

// Builds segments covering [0, upper] plus a mapped tail when upper is
// infinite.  Knots must be increasing and positive.
std::vector<detail::Segment> build_segments(const Integrand& f,
                                            std::vector<double> knots,
                                            double upper, bool sqrt_sub) {
    std::vector<detail::Segment> segs;
    double lo = 0.0;
    if (!knots.empty()) {
        double first = knots.front();
        if (sqrt_sub) {
            // y = u^2 on [0, first]
            double su = std::sqrt(first);
            segs.push_back({[f](double u) { return f(u * u) * 2.0 * u; }, 0.0, su});
        } else {
            segs.push_back({f, 0.0, first});
        }
        lo = first;
        for (std::size_t i = 1; i < knots.size(); ++i) {
            if (knots[i] > lo) {
                segs.push_back({f, lo, knots[i]});
                lo = knots[i];
            }
        }
    }
    if (std::isinf(upper)) {
        // y = lo + w/(1-w), w in [0,1)
        double c = lo;
        segs.push_back({[f, c](double w) {
                            double om = 1.0 - w;
                            double y = c + w / om;
                            return f(y) / (om * om);
                        },
                        0.0, 1.0});
    } else if (upper > lo) {
        segs.push_back({f, lo, upper});
    }
    return segs;
}

struct Problem {
    Integrand f;
    std::vector<double> knots;  // increasing interior knots, first one > 0
    double upper = std::numeric_limits<double>::infinity();
    bool want_sqrt_sub = false;
};

Problem make_problem(const RateQuery& query) {
    Problem pr;
    if (const auto* r = std::get_if<NonResonant>(&query)) {
        double z = r->z, nu = r->nu;
        if (z < 0.0) throw std::domain_error("quad_rate: need z >= 0");
        if (z == 0.0 && nu <= -1.0)
            throw std::domain_error("quad_rate: integral diverges at the origin");
        pr.f = [z, nu](double y) {
            if (y <= 0.0) return 0.0;
            return std::exp(nu * std::log(y) - y - (z > 0.0 ? z / std::sqrt(y) : 0.0));
        };
        double c = std::max({peak_location(z, 1.0, 0.5), nu, 0.5});
        pr.knots = {c, 8.0 * c + 8.0};
        pr.want_sqrt_sub = z > 0.0;
    } else if (const auto* r = std::get_if<CutOff>(&query)) {
        double z = r->z, d = r->d, nu = r->nu;
        if (z < 0.0 || d <= 0.0) throw std::domain_error("quad_rate: need z >= 0, d > 0");
        if (z == 0.0 && nu <= -1.0)
            throw std::domain_error("quad_rate: integral diverges at the origin");
        pr.f = [z, nu](double y) {
            if (y <= 0.0) return 0.0;
            return std::exp(nu * std::log(y) - y - (z > 0.0 ? z / std::sqrt(y) : 0.0));
        };
        double c = std::max(peak_location(z, 1.0, 0.5), 0.5);
        pr.upper = d;
        if (c < d) pr.knots = {c};
        else pr.knots = {0.5 * d};
        pr.want_sqrt_sub = z > 0.0;
    } else if (const auto* r = std::get_if<Screened>(&query)) {
        double z = r->z, t = r->t;
        int nu = r->nu;
        if (z < 0.0 || t < 0.0 || nu < 0)
            throw std::domain_error("quad_rate: need z >= 0, t >= 0, nu >= 0");
        pr.f = [z, t, nu](double y) {
            if (y < 0.0) return 0.0;
            double screen = z > 0.0 ? z / std::sqrt(y + t) : 0.0;
            return (y > 0.0 ? std::pow(y, nu) : (nu == 0 ? 1.0 : 0.0)) *
                   std::exp(-y - screen);
        };
        double c = std::max({peak_location(z, 1.0, 0.5), double(nu), 0.5});
        pr.knots = {c, 8.0 * c + 8.0};
        pr.want_sqrt_sub = z > 0.0 && t == 0.0;
    } else if (const auto* r = std::get_if<Depleted>(&query)) {
        double z = r->z, delta = r->delta, b = r->b, nu = r->nu;
        if (z < 0.0 || delta <= 0.0 || b < 0.0)
            throw std::domain_error("quad_rate: need z >= 0, delta > 0, b >= 0");
        if (z == 0.0 && nu <= -1.0)
            throw std::domain_error("quad_rate: integral diverges at the origin");
        pr.f = [z, delta, b, nu](double y) {
            if (y <= 0.0) return 0.0;
            return std::exp(nu * std::log(y) - y - b * std::pow(y, delta) -
                            (z > 0.0 ? z / std::sqrt(y) : 0.0));
        };
        double c = std::max({peak_location(z, 1.0, 0.5), nu, 0.5});
        pr.knots = {c, 8.0 * c + 8.0};
        pr.want_sqrt_sub = z > 0.0;
    } else if (const auto* r = std::get_if<Resonant>(&query)) {
        double q = r->q, a = r->a, b = r->b, g = r->g;
        int nu = r->nu, n = r->n, m = r->m;
        if (q < 0.0 || a <= 0.0 || g == 0.0 || nu < 0 || n < 1 || m < 1)
            throw std::domain_error("quad_rate: invalid resonant parameters");
        double nm = double(n) / double(m);
        pr.f = [q, a, b, g, nu, nm](double t) {
            if (t <= 0.0) return 0.0;
            double lorentz = (b - t) * (b - t) + g * g;
            return std::exp(nu * std::log(t) - a * t -
                            (q > 0.0 ? q * std::pow(t, -nm) : 0.0)) /
                   lorentz;
        };
        double c = std::max({peak_location(q, a, nm), double(nu) / a, 0.5});
        std::vector<double> k;
        for (double x : {b - 2.0 * std::abs(g), b, b + 2.0 * std::abs(g), c,
                         8.0 * c + 8.0 * std::abs(g) + 8.0}) {
            if (x > 0.0) k.push_back(x);
        }
        std::sort(k.begin(), k.end());
        pr.knots = k;
        pr.want_sqrt_sub = q > 0.0;
    } else if (const auto* r = std::get_if<GeneralMB>(&query)) {
        double z = r->z, p = r->p, rho = r->rho;
        int n = r->n, m = r->m;
        if (z < 0.0 || p <= 0.0 || n < 1 || m < 1)
            throw std::domain_error("quad_rate: invalid general parameters");
        if (z == 0.0 && n * rho >= 1.0)
            throw std::domain_error("quad_rate: integral diverges at the origin");
        double nm = double(n) / double(m);
        double power = -double(n) * rho;
        pr.f = [z, p, power, nm](double t) {
            if (t <= 0.0) return 0.0;
            return p * std::exp(power * std::log(t) - p * t -
                                (z > 0.0 ? z * std::pow(t, -nm) : 0.0));
        };
        double c = std::max({peak_location(z, p, nm), power / p, 0.5});
        pr.knots = {c, 8.0 * c + 8.0};
        pr.want_sqrt_sub = z > 0.0;
    } else {
        const auto& rh = std::get<GeneralH>(query);
        double z = rh.z, p = rh.p, rho = rh.rho, gamma = rh.gamma.value();
        if (z < 0.0 || p <= 0.0 || gamma <= 0.0)
            throw std::domain_error("quad_rate: invalid general parameters");
        if (z == 0.0 && rho <= 0.0)
            throw std::domain_error("quad_rate: integral diverges at the origin");
        pr.f = [z, p, rho, gamma](double t) {
            if (t <= 0.0) return 0.0;
            return std::exp((rho - 1.0) * std::log(t) - p * t -
                            (z > 0.0 ? z * std::pow(t, -gamma) : 0.0));
        };
        double c = std::max({peak_location(z, p, gamma), (rho - 1.0) / p, 0.5});
        pr.knots = {c, 8.0 * c + 8.0};
        pr.want_sqrt_sub = z > 0.0;
    }
    return pr;
}

}  // namespace

QuadResult quad_rate(const RateQuery& query, double tol,
                     const QuadOptions& options) {
    if (tol < 1e-12) throw std::domain_error("quad_rate: tol must be >= 1e-12");
    Problem pr = make_problem(query);
    auto segs = build_segments(pr.f, pr.knots, pr.upper,
                               pr.want_sqrt_sub && options.sqrt_substitution);
    auto res = detail::adaptive_integrate(segs, tol, 1e-305,
                                          options.max_evaluations);
    QuadResult out{res.value, res.abs_err, res.evaluations};
    if (!res.converged) {
        throw BudgetError("quad_rate: evaluation budget exhausted", out);
    }
    return out;
}

std::string family_name(const RateQuery& query) {
    struct Visitor {
        std::string operator()(const NonResonant&) const { return "nonresonant"; }
        std::string operator()(const CutOff&) const { return "cutoff"; }
        std::string operator()(const Screened&) const { return "screened"; }
        std::string operator()(const Depleted&) const { return "depleted"; }
        std::string operator()(const Resonant&) const { return "resonant"; }
        std::string operator()(const GeneralMB&) const { return "general"; }
        std::string operator()(const GeneralH&) const { return "generalh"; }
    };
    return std::visit(Visitor{}, query);
}

}  // namespace thermorate
