#ifndef THERMORATE_TABLE_HPP
#define THERMORATE_TABLE_HPP

#include <optional>
#include <string>

#include "thermorate/rate_query.hpp"
#include "thermorate/rates.hpp"

namespace thermorate {

/// One CSV record.  Optional cells render as empty fields.
struct TableRow {
    std::string family;
    std::string params;  // semicolon-separated key=value list
    std::optional<double> closed;
    std::optional<double> oracle;
    std::optional<double> rel_dev;
    std::optional<double> asym_value;
    std::optional<Method> method;

    std::string to_csv() const;
};

inline constexpr const char* kCsvHeader =
    "family,params,closed,oracle,rel_dev,asym,method_flag";

/// 17-significant-digit decimal rendering; round-trips any double and is
/// byte-stable across runs.
std::string format_double(double v);

/// "z=1;nu=0.3"-style parameter echo for a query.
std::string format_params(const RateQuery& query);

/// rel_dev = |closed - oracle| / max(|oracle|, 1e-300)
double relative_deviation(double closed, double oracle);

}  // namespace thermorate

#endif
