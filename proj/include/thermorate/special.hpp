#ifndef THERMORATE_SPECIAL_HPP
#define THERMORATE_SPECIAL_HPP

#include <vector>

#include "thermorate/types.hpp"

namespace thermorate {

/// log|Gamma(x)| plus the sign of Gamma(x), so that
/// sign * exp(log_abs) == Gamma(x) for any non-pole real x.
struct SignedLogGamma {
    double log_abs = 0.0;
    int sign = 1;

    double value() const;
};

/// Throws PoleError when x is within 1e-12 of a nonpositive integer.
/// Relative accuracy better than 1e-13 for |x| <= 50.
SignedLogGamma ln_gamma(double x);

/// Gamma(x) as a plain value (overflows past x ~ 171.6).
double gamma_value(double x);

/// Digamma psi(x) = d/dx log Gamma(x); same pole contract as ln_gamma,
/// relative accuracy better than 1e-12 for |x| <= 50.
double digamma(double x);

/// Gauss multiplication split of Gamma(m*s):
///   Gamma(m*s) = two_pi_power * m_power * prod_k Gamma(shifts[k]),
/// shifts = { s, s+1/m, ..., s+(m-1)/m },
/// two_pi_power = (2*pi)^((1-m)/2),  m_power = m^(m*s - 1/2).
struct MultiplicationSplit {
    std::vector<double> shifts;
    double two_pi_power = 1.0;
    double m_power = 1.0;
};

MultiplicationSplit multiplication_split(int m, double s);

/// sin(pi*x) / cos(pi*x) with argument reduction done exactly in x,
/// so they stay accurate near integers and half-integers.
double sin_pi(double x);
double cos_pi(double x);

/// True when x is within tol of a nonpositive integer (a Gamma pole).
bool near_nonpositive_integer(double x, double tol = kPoleTolerance);

}  // namespace thermorate

#endif
