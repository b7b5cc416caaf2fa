#include "thermorate/pfq.hpp"

#include <cmath>
#include <string>

#include "thermorate/detail/double_double.hpp"
#include "thermorate/special.hpp"

namespace thermorate {

SeriesValue pfq(const PfqSpec& spec, const Limits& limits) {
    if (spec.upper.size() > spec.lower.size()) {
        throw std::domain_error("pfq: only p <= q is supported");
    }
    for (double b : spec.lower) {
        if (near_nonpositive_integer(b)) {
            throw PoleError("pfq: lower parameter " + std::to_string(b) +
                            " is a nonpositive integer");
        }
    }
    if (spec.x == 0.0) {
        return {1.0, 0.0, 1};
    }

    constexpr double eps_rel = 1e-15;
    constexpr double eps_abs = 1e-300;

    detail::dd sum(0.0);
    double term = 1.0;
    double max_term = 1.0;
    int consecutive_small = 0;
    int k = 0;
    for (; k < limits.series_max_terms; ++k) {
        sum += term;
        max_term = std::max(max_term, std::abs(term));

        double ratio = spec.x / (k + 1.0);
        for (double a : spec.upper) ratio *= a + k;
        for (double b : spec.lower) ratio /= b + k;
        term *= ratio;

        if (std::abs(term) <= eps_rel * std::abs(double(sum)) + eps_abs) {
            if (++consecutive_small >= 3) {
                ++k;
                break;
            }
        } else {
            consecutive_small = 0;
        }
    }
    if (consecutive_small < 3) {
        throw ConvergenceError("pfq: no convergence after " +
                               std::to_string(k) + " terms");
    }

    // `term` now holds the first neglected term.
    SeriesValue out;
    out.value = double(sum);
    out.terms = k;
    out.abs_err = 10.0 * std::abs(term) +
                  std::numeric_limits<double>::epsilon() * max_term;
    if (max_term > kCancellationRatio * std::abs(out.value)) {
        out.abs_err = std::numeric_limits<double>::infinity();
    }
    return out;
}

}  // namespace thermorate
