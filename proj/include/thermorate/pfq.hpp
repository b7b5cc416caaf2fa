#ifndef THERMORATE_PFQ_HPP
#define THERMORATE_PFQ_HPP

#include <vector>

#include "thermorate/types.hpp"

namespace thermorate {

/// Generalized hypergeometric series pFq(upper; lower; x).  Restricted to
/// p <= q, where the series is entire in x.
struct PfqSpec {
    std::vector<double> upper;
    std::vector<double> lower;
    double x = 0.0;
};

/// Sums the defining power series with the term recursion
///   term_{k+1} = term_k * prod(upper+k)/prod(lower+k) * x/(k+1),
/// accumulating in compensated (double-double) precision.  Stops once
/// |term| <= 1e-15*|sum| + 1e-300 holds for three consecutive terms;
/// abs_err is 10x the last such term plus the cancellation floor.  When
/// the largest intermediate term exceeds 1e15 * |result| the value is
/// flagged unreliable (abs_err = +infinity).
SeriesValue pfq(const PfqSpec& spec, const Limits& limits = {});

}  // namespace thermorate

#endif
