#include "thermorate/table.hpp"

#include <cmath>
#include <cstdio>

namespace thermorate {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double relative_deviation(double closed, double oracle) {
    return std::abs(closed - oracle) / std::max(std::abs(oracle), 1e-300);
}

std::string format_params(const RateQuery& query) {
    struct Visitor {
        std::string operator()(const NonResonant& r) const {
            return "z=" + format_double(r.z) + ";nu=" + format_double(r.nu);
        }
        std::string operator()(const CutOff& r) const {
            return "z=" + format_double(r.z) + ";d=" + format_double(r.d) +
                   ";nu=" + format_double(r.nu);
        }
        std::string operator()(const Screened& r) const {
            return "z=" + format_double(r.z) + ";t=" + format_double(r.t) +
                   ";nu=" + std::to_string(r.nu);
        }
        std::string operator()(const Depleted& r) const {
            return "z=" + format_double(r.z) + ";delta=" + format_double(r.delta) +
                   ";b=" + format_double(r.b) + ";nu=" + format_double(r.nu);
        }
        std::string operator()(const Resonant& r) const {
            return "q=" + format_double(r.q) + ";a=" + format_double(r.a) +
                   ";b=" + format_double(r.b) + ";g=" + format_double(r.g) +
                   ";nu=" + std::to_string(r.nu) + ";n=" + std::to_string(r.n) +
                   ";m=" + std::to_string(r.m);
        }
        std::string operator()(const GeneralMB& r) const {
            return "z=" + format_double(r.z) + ";p=" + format_double(r.p) +
                   ";rho=" + format_double(r.rho) + ";n=" + std::to_string(r.n) +
                   ";m=" + std::to_string(r.m);
        }
        std::string operator()(const GeneralH& r) const {
            return "z=" + format_double(r.z) + ";p=" + format_double(r.p) +
                   ";rho=" + format_double(r.rho) + ";gamma=" +
                   std::to_string(r.gamma.num) + "/" + std::to_string(r.gamma.den);
        }
    };
    return std::visit(Visitor{}, query);
}

std::string TableRow::to_csv() const {
    auto cell = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string();
    };
    std::string out = family;
    out += ',';
    out += params;
    out += ',';
    out += cell(closed);
    out += ',';
    out += cell(oracle);
    out += ',';
    out += cell(rel_dev);
    out += ',';
    out += cell(asym_value);
    out += ',';
    if (method) out += method_name(*method);
    return out;
}

}  // namespace thermorate
