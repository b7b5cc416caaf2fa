#ifndef THERMORATE_RATE_QUERY_HPP
#define THERMORATE_RATE_QUERY_HPP

#include <string>
#include <variant>

#include "thermorate/meijer_g.hpp"

namespace thermorate {

// The five reaction-rate families plus the two generalized integrals.
// All integrands live on (0, inf) in the integration variable y (t).

/// J1(z, nu) = Int y^nu exp(-y - z/sqrt(y)) dy
struct NonResonant {
    double z = 0.0;
    double nu = 0.0;
};

/// J2(z, d, nu) = Int_0^d y^nu exp(-y - z/sqrt(y)) dy
struct CutOff {
    double z = 0.0;
    double d = 1.0;
    double nu = 0.0;
};

/// J3(z, t, nu) = Int y^nu exp(-y - z/sqrt(y+t)) dy, nu a nonnegative integer
struct Screened {
    double z = 0.0;
    double t = 0.0;
    int nu = 0;
};

/// J4(z, delta, b, nu) = Int y^nu exp(-y - b y^delta - z/sqrt(y)) dy
struct Depleted {
    double z = 0.0;
    double delta = 1.0;
    double b = 0.0;
    double nu = 0.0;
};

/// R(q, a, b, g) = Int t^nu exp(-a t - q t^(-n/m)) / ((b-t)^2 + g^2) dt
struct Resonant {
    double q = 0.0;
    double a = 1.0;
    double b = 0.0;
    double g = 1.0;
    int nu = 0;
    int n = 1;
    int m = 2;
};

/// I(z; p, n, m) = p Int exp(-p t) t^(-n rho) exp(-z t^(-n/m)) dt
struct GeneralMB {
    double z = 0.0;
    double p = 1.0;
    double rho = 0.0;
    int n = 1;
    int m = 2;
};

/// I = Int t^(rho-1) exp(-p t - z t^(-gamma)) dt, gamma rational
struct GeneralH {
    double z = 0.0;
    double p = 1.0;
    double rho = 1.0;
    Rational gamma{1, 2};
};

using RateQuery = std::variant<NonResonant, CutOff, Screened, Depleted,
                               Resonant, GeneralMB, GeneralH>;

/// Lower-case family name as used by the CLI ("nonresonant", "cutoff", ...).
std::string family_name(const RateQuery& query);

}  // namespace thermorate

#endif
