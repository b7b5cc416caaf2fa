#ifndef THERMORATE_TYPES_HPP
#define THERMORATE_TYPES_HPP

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace thermorate {

/// Value of a truncated series (or residue sum) together with an absolute
/// error bound and the number of terms that were actually summed.
///
/// abs_err == +infinity is the cancellation sentinel: the magnitude of the
/// largest intermediate term exceeded 1e15 times the result, so the value
/// has lost essentially all significant digits and must not be trusted.
struct SeriesValue {
    double value = 0.0;
    double abs_err = 0.0;
    int terms = 0;

    bool reliable() const { return std::isfinite(abs_err); }

    SeriesValue& scale(double factor) {
        value *= factor;
        abs_err *= std::abs(factor);
        return *this;
    }
};

/// Term ceilings for the series evaluators.  The inner ceiling applies to
/// power/residue series, the outer one to the expansion loops wrapped
/// around them (cut-off r-series, depletion k-series, resonant k-blocks).
struct Limits {
    int series_max_terms = 10'000;
    int outer_max_terms = 500;

    /// THERMORATE_MAX_TERMS, when set to a positive integer, overrides the
    /// inner ceiling and scales the outer one down to min(value, 500).
    static Limits from_env() {
        Limits lim;
        if (const char* s = std::getenv("THERMORATE_MAX_TERMS")) {
            char* end = nullptr;
            long v = std::strtol(s, &end, 10);
            if (end != s && *end == '\0' && v > 0) {
                lim.series_max_terms = static_cast<int>(v);
                lim.outer_max_terms = static_cast<int>(std::min<long>(v, 500));
            }
        }
        return lim;
    }
};

/// Requested evaluation point sits on (or within 1e-12 of) a pole of Gamma.
class PoleError : public std::domain_error {
public:
    explicit PoleError(const std::string& what) : std::domain_error(what) {}
};

/// A series failed to satisfy its stopping rule within the term ceiling.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Three or more Gamma ladders collide: residues of order >= 3 are not
/// implemented (they never arise for the supported integral families).
class MultiplicityError : public std::runtime_error {
public:
    explicit MultiplicityError(const std::string& what) : std::runtime_error(what) {}
};

/// No vertical contour separates the left from the right poles.
class ContourError : public std::runtime_error {
public:
    explicit ContourError(const std::string& what) : std::runtime_error(what) {}
};

/// The resonant validity condition fails and the expansion diverges.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kPoleTolerance = 1e-12;
inline constexpr double kCollisionTolerance = 1e-10;
inline constexpr double kCancellationRatio = 1e15;

}  // namespace thermorate

#endif
