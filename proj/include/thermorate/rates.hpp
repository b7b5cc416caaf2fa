#ifndef THERMORATE_RATES_HPP
#define THERMORATE_RATES_HPP

#include "thermorate/rate_query.hpp"
#include "thermorate/types.hpp"

namespace thermorate {

/// How a rate value was obtained.
enum class Method {
    series,                 // hypergeometric / simple-pole residue series
    double_pole_series,     // psi/log residue branch was involved
    asymptotic_switchover,  // series unreliable, large-z formula served
};

const char* method_name(Method m);

/// Non-resonant rate J1(z, nu).  Generic nu uses the three-term 0F2 sum;
/// nu within 1e-10 of an integer or half-integer switches to the
/// double-pole residue branch of the G-function.
SeriesValue j1_closed(double z, double nu, const Limits& limits = {});

/// Cut-off rate J2(z, d, nu): outer (-d)^r/r! series over G(3,0;1,3) values.
SeriesValue j2_closed(double z, double d, double nu, const Limits& limits = {});

/// Screened rate J3(z, t, nu), nu a nonnegative integer: binomial
/// combination of full-range and cut-off pieces at shifted exponents.
SeriesValue j3_closed(double z, double t, int nu, const Limits& limits = {});

/// Depleted rate J4(z, delta, b, nu): depletion factor expanded for
/// delta < 1 (shifted-exponent J1 series); for delta > 1 the roles of the
/// two exponential factors are swapped, which keeps the expansion
/// convergent.  delta == 1 folds into J1 exactly.
SeriesValue j4_closed(double z, double delta, double b, double nu,
                      const Limits& limits = {});

/// Resonant rate: the Lorentzian-denominator double series, resummed with
/// Levin-type transforms (the expansion is asymptotic).  Throws
/// DivergenceError when (b - nu*/a)^2 / g^2 >= 1 with nu* = (q^2 a/4)^(1/3).
SeriesValue resonant_closed(double q, double a, double b, double g, int nu,
                            int n, int m, const Limits& limits = {});

/// I(z; p, n, m) of the general Mellin-Barnes family, via the H -> G
/// reduction and the residue series.
SeriesValue rate_general(double z, double p, double rho, int n, int m,
                         const Limits& limits = {});

/// Generalized integral with rational exponent gamma = n/m.
SeriesValue rate_general_h(double z, double p, double rho, Rational gamma,
                           const Limits& limits = {});

/// Large-z asymptotic value for the four J-families; meaningless for small
/// z by contract (no guard).  Other families raise std::domain_error.
SeriesValue asym(const RateQuery& query);

/// True when the family has a large-z asymptotic formula.
bool has_asym(const RateQuery& query);

struct RateResult {
    SeriesValue value;
    Method method = Method::series;
};

/// Closed-form dispatch for any family.
RateResult closed_rate(const RateQuery& query, const Limits& limits = {});

/// Closed form with automatic asymptotic fallback: when the series flags
/// the cancellation sentinel and the family has an asymptotic line, that
/// value is served with Method::asymptotic_switchover.
RateResult evaluate_rate(const RateQuery& query, const Limits& limits = {});

/// Smallest z (within 1% bisection) at which the closed form of the given
/// family goes unreliable at working precision; scans up to z_max.
/// Returns +infinity when the series survives the whole range.
double cancellation_wall(const RateQuery& prototype, double z_max = 1e4,
                         const Limits& limits = {});

}  // namespace thermorate

#endif
