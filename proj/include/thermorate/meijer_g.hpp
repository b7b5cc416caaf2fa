#ifndef THERMORATE_MEIJER_G_HPP
#define THERMORATE_MEIJER_G_HPP

#include <cstdint>
#include <numeric>
#include <vector>

#include "thermorate/types.hpp"

namespace thermorate {

/// Meijer G-function orders and parameters.  The Mellin-Barnes integrand is
/// the usual ratio of gamma products with unit coefficients,
///   phi(s) = prod_{j<=m} G(b_j+s) prod_{j<=n} G(1-a_j-s)
///          / (prod_{j>m} G(1-b_j-s) prod_{j>n} G(a_j+s)),
/// and G(z) = (1/2*pi*i) Int phi(s) z^{-s} ds.
struct GSpec {
    int m = 0, n = 0, p = 0, q = 0;
    std::vector<double> a;  // length p
    std::vector<double> b;  // length q

    void validate() const;
};

/// Reduced positive rational, used for the H-function coefficients.
struct Rational {
    long num = 0;
    long den = 1;

    Rational() = default;
    Rational(long n, long d);

    double value() const { return double(num) / double(den); }
    Rational inverse() const { return Rational(den, num); }

    /// Nearest rational with denominator <= max_den; throws std::domain_error
    /// when x is not within 1e-9 of any such rational ("irrational" input).
    static Rational from_double(double x, long max_den = 12);
};

/// Fox H-function spec with rational coefficients: pairs (c_j, coeff_j) so
/// the integrand carries Gamma(c_j + coeff_j * s) factors.  Only the n = 0
/// class (no right-pole gamma group) is needed or supported here.
struct HParam {
    double c = 0.0;
    Rational coeff;
};

struct HSpec {
    std::vector<HParam> upper;  // denominator factors (a-side)
    std::vector<HParam> lower;  // numerator factors (b-side)
};

/// One pole of the integrand: location, net order (1 or 2), and the indices
/// of the b-parameters whose ladders collide there.
struct Pole {
    double location = 0.0;
    int order = 1;
    std::vector<int> sources;
};

using PoleSet = std::vector<Pole>;

/// All poles of prod_j Gamma(b_j + s) with location > -depth, in strictly
/// decreasing order.  Ladder points cancelled by denominator zeros are
/// omitted; a net order >= 3 raises MultiplicityError.  Requires n == 0.
PoleSet enumerate_poles(const GSpec& spec, int depth);

/// Residue-series evaluation of G(z) over the poles above -depth, for the
/// n = 0, p <= 1 closed-form class.  Simple poles contribute
/// C * z^{-s0}; order-2 poles contribute C * z^{-s0} * (D - ln z) where D
/// collects digamma values of the colliding ladders (the psi/log branch).
SeriesValue g_series(const GSpec& spec, double z, int depth,
                     const Limits& limits = {});

/// Numeric Mellin-Barnes contour integration of the same integrand along a
/// vertical line placed right of every pole of the Gamma(b_j+s) group (and
/// left of the Gamma(1-a_j-s) ladders when n > 0).  Independent of the
/// residue path; used as its oracle.
SeriesValue g_contour(const GSpec& spec, double z);

/// Result of reducing an H-function to a G-function with the Gauss
/// multiplication formula: H[z] = prefactor * G[gspec](arg_scale * z^arg_power).
struct HToGResult {
    double log_prefactor = 0.0;
    GSpec gspec;
    long arg_power = 1;
    double log_arg_scale = 0.0;

    double prefactor() const;
    double map_argument(double z) const;
};

HToGResult h_to_g(const HSpec& h);

namespace detail {

/// Gamma(offset + coeff * s); coeff > 0.  numerator == false puts the factor
/// in the denominator of the integrand.  The offset is carried in extended
/// precision: pole arguments are differences of offsets, and the residue
/// cancellation across ladders amplifies any rounding in them.
struct GammaFactor {
    long double offset = 0.0L;
    double coeff = 1.0;
    bool numerator = true;
};

/// Residue series for a general two-sided gamma-product integrand
/// prod Gamma(offset_j + coeff_j s)^{+-1} z^{-s} with positive coefficients.
/// `grow_depth` keeps doubling the enumeration depth until the series
/// stopping rule fires (subject to limits.series_max_terms).
SeriesValue residue_series(const std::vector<GammaFactor>& factors, double z,
                           int depth, const Limits& limits,
                           bool grow_depth = false);

}  // namespace detail

}  // namespace thermorate

#endif
