#ifndef THERMORATE_QUADRATURE_HPP
#define THERMORATE_QUADRATURE_HPP

#include "thermorate/rate_query.hpp"
#include "thermorate/types.hpp"

namespace thermorate {

struct QuadResult {
    double value = 0.0;
    double abs_err = 0.0;
    long evaluations = 0;
};

/// Adaptive quadrature ran out of its evaluation budget; `best` carries the
/// estimate reached so far.
class BudgetError : public std::runtime_error {
public:
    BudgetError(const std::string& what, QuadResult best_so_far)
        : std::runtime_error(what), best(best_so_far) {}
    QuadResult best;
};

struct QuadOptions {
    /// y = u^2 substitution near the origin (tames the essential-decay
    /// factor's derivatives).  Disabled only by the substitution-invariance
    /// tests.
    bool sqrt_substitution = true;
    long max_evaluations = 1'000'000;
};

/// Ground-truth adaptive quadrature of the defining integral of `query`.
/// Semi-infinite tails are mapped through y = c + w/(1-w) with c at the
/// integrand's mode estimate.  Refines until the error estimate is below
/// tol*|value| or the budget is spent (BudgetError).
QuadResult quad_rate(const RateQuery& query, double tol,
                     const QuadOptions& options = {});

}  // namespace thermorate

#endif
