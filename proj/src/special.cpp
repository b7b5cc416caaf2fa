#include "thermorate/special.hpp"

#include <cmath>
#include <string>

namespace thermorate {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kLogRootTwoPi = 0.91893853320467274178032973640562;
constexpr double kLogPi = 1.1447298858494001741434273513531;

// Lanczos g=7, kmax=8 coefficients (Godfrey/GSL set); relative accuracy
// of the resulting log-gamma is a few ulps for x >= 0.5.
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

// Requires x >= 0.5.
double lanczos_ln_gamma(double x) {
    x -= 1.0;
    double ag = kLanczos7[0];
    for (int k = 1; k <= 8; ++k) ag += kLanczos7[k] / (x + k);
    double term1 = (x + 0.5) * std::log((x + 7.5) / M_E);
    double term2 = kLogRootTwoPi + std::log(ag);
    return term1 + (term2 - 7.0);
}

// B_{2n}/(2n) for the digamma asymptotic series.
constexpr double kDigammaAsym[] = {
    1.0 / 12.0,      // B2/2
    -1.0 / 120.0,    // B4/4
    1.0 / 252.0,     // B6/6
    -1.0 / 240.0,    // B8/8
    1.0 / 132.0,     // B10/10
    -691.0 / 32760.0,  // B12/12
    1.0 / 12.0,      // B14/14
    -3617.0 / 8160.0,  // B16/16
};

// psi(x) for x >= 8 via the asymptotic series.
double digamma_asymptotic(double x) {
    double inv2 = 1.0 / (x * x);
    double series = 0.0;
    double p = inv2;
    for (double c : kDigammaAsym) {
        series += c * p;
        p *= inv2;
    }
    return std::log(x) - 0.5 / x - series;
}

}  // namespace

double SignedLogGamma::value() const { return sign * std::exp(log_abs); }

bool near_nonpositive_integer(double x, double tol) {
    if (x > 0.5) return false;
    double r = std::round(x);
    return r <= 0.0 && std::abs(x - r) < tol;
}

double sin_pi(double x) {
    double r = std::remainder(x, 2.0);  // r in [-1, 1], exact
    if (r > 0.5) r = 1.0 - r;
    else if (r < -0.5) r = -1.0 - r;
    return std::sin(kPi * r);
}

double cos_pi(double x) {
    return sin_pi(0.5 - x);
}

SignedLogGamma ln_gamma(double x) {
    if (near_nonpositive_integer(x)) {
        throw PoleError("ln_gamma: pole at x = " + std::to_string(x));
    }
    if (x >= 0.5) {
        return {lanczos_ln_gamma(x), 1};
    }
    // Reflection: Gamma(x) = pi / (sin(pi x) * Gamma(1-x)); Gamma(1-x) > 0 here.
    double s = sin_pi(x);
    return {kLogPi - std::log(std::abs(s)) - lanczos_ln_gamma(1.0 - x),
            s > 0.0 ? 1 : -1};
}

double gamma_value(double x) {
    SignedLogGamma g = ln_gamma(x);
    return g.value();
}

double digamma(double x) {
    if (near_nonpositive_integer(x)) {
        throw PoleError("digamma: pole at x = " + std::to_string(x));
    }
    if (x < 0.5) {
        // psi(x) = psi(1-x) - pi*cot(pi*x)
        return digamma(1.0 - x) - kPi * cos_pi(x) / sin_pi(x);
    }
    double acc = 0.0;
    while (x < 8.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    return acc + digamma_asymptotic(x);
}

MultiplicationSplit multiplication_split(int m, double s) {
    if (m < 1) throw std::domain_error("multiplication_split: m must be >= 1");
    if (near_nonpositive_integer(m * s)) {
        throw PoleError("multiplication_split: Gamma(m*s) pole at m*s = " +
                        std::to_string(m * s));
    }
    MultiplicationSplit out;
    out.shifts.reserve(m);
    for (int k = 0; k < m; ++k) out.shifts.push_back(s + double(k) / m);
    if (m > 1) {
        out.two_pi_power = std::pow(2.0 * kPi, 0.5 * (1 - m));
        out.m_power = std::pow(double(m), m * s - 0.5);
    }
    return out;
}

}  // namespace thermorate
