#include "thermorate/cli.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "thermorate/quadrature.hpp"
#include "thermorate/rates.hpp"
#include "thermorate/table.hpp"

namespace thermorate::cli {

namespace {

struct ParamFlags {
    double z = 0.0, nu = 0.0, d = 0.0, t = 0.0, b = 0.0, delta = 0.0;
    double q = 0.0, a = 1.0, bres = 0.0, g = 1.0, p = 1.0, rho = 0.0;
    int n = 1, m = 2;
    std::string gamma = "1/2";
};

Rational parse_gamma(const std::string& text) {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        long num = std::stol(text.substr(0, slash));
        long den = std::stol(text.substr(slash + 1));
        return Rational(num, den);
    }
    return Rational::from_double(std::stod(text));
}

struct Grid {
    std::vector<double> points;
};

// start:stop:count[:log]
Grid parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 3 || parts.size() > 4)
        throw CLI::ValidationError("--z-grid", "expected start:stop:count[:log]");
    double start = std::stod(parts[0]);
    double stop = std::stod(parts[1]);
    int count = std::stoi(parts[2]);
    bool log_spaced = parts.size() == 4;
    if (log_spaced && parts[3] != "log")
        throw CLI::ValidationError("--z-grid", "unknown grid suffix " + parts[3]);
    if (count < 1) throw CLI::ValidationError("--z-grid", "count must be >= 1");
    if (log_spaced && (start <= 0.0 || stop <= 0.0))
        throw CLI::ValidationError("--z-grid", "log grid needs positive bounds");

    Grid grid;
    if (count == 1) {
        grid.points.push_back(start);
        return grid;
    }
    for (int i = 0; i < count; ++i) {
        double f = double(i) / double(count - 1);
        double v = log_spaced
                       ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                       : start + f * (stop - start);
        grid.points.push_back(v);
    }
    return grid;
}

RateQuery build_query(const std::string& family, const ParamFlags& flags,
                      const CLI::App& sub, bool sweep) {
    auto used = [&sub](const std::string& name) {
        return sub.count(name) > 0;
    };
    // In grid mode the swept argument (z, or q for resonant) comes from the
    // grid, so its flag is not required.
    auto need_z = [&] {
        if (!sweep && !used("--z")) throw CLI::RequiredError("--z");
    };
    if (family == "nonresonant") {
        need_z();
        return NonResonant{flags.z, flags.nu};
    }
    if (family == "cutoff") {
        need_z();
        if (!used("--d")) throw CLI::RequiredError("--d");
        return CutOff{flags.z, flags.d, flags.nu};
    }
    if (family == "screened") {
        need_z();
        if (!used("--t")) throw CLI::RequiredError("--t");
        return Screened{flags.z, flags.t, int(std::lround(flags.nu))};
    }
    if (family == "depleted") {
        need_z();
        if (!used("--delta")) throw CLI::RequiredError("--delta");
        if (!used("--b")) throw CLI::RequiredError("--b");
        return Depleted{flags.z, flags.delta, flags.b, flags.nu};
    }
    if (family == "resonant") {
        if (!sweep && !used("--q")) throw CLI::RequiredError("--q");
        if (!used("--g")) throw CLI::RequiredError("--g");
        return Resonant{flags.q,     flags.a, flags.bres,
                        flags.g,     int(std::lround(flags.nu)),
                        flags.n,     flags.m};
    }
    if (family == "general") {
        need_z();
        if (!used("--rho")) throw CLI::RequiredError("--rho");
        return GeneralMB{flags.z, flags.p, flags.rho, flags.n, flags.m};
    }
    if (family == "generalh") {
        need_z();
        if (!used("--rho")) throw CLI::RequiredError("--rho");
        return GeneralH{flags.z, flags.p, flags.rho, parse_gamma(flags.gamma)};
    }
    throw CLI::ValidationError("family", "unknown family " + family);
}

RateQuery with_sweep_value(const RateQuery& base, double v) {
    RateQuery q = base;
    std::visit(
        [v](auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Resonant>) r.q = v;
            else r.z = v;
        },
        q);
    return q;
}

enum class Mode { rate, table, compare, asym_cmd };

int run_mode(Mode mode, const RateQuery& base,
             const std::optional<Grid>& grid, double tol, std::ostream& out) {
    Limits limits = Limits::from_env();
    std::vector<double> points;
    if (grid) points = grid->points;
    else points.push_back(0.0);  // placeholder; single query uses base as-is

    // Buffered so a failing row leaves stdout untouched.
    std::ostringstream buffer;
    buffer << kCsvHeader << '\n';
    bool sentinel_failure = false;

    for (std::size_t i = 0; i < points.size(); ++i) {
        RateQuery q = grid ? with_sweep_value(base, points[i]) : base;
        TableRow row;
        row.family = family_name(q);
        row.params = format_params(q);

        if (mode == Mode::rate || mode == Mode::compare || mode == Mode::table) {
            RateResult res = evaluate_rate(q, limits);
            if (!res.value.reliable() &&
                res.method != Method::asymptotic_switchover) {
                sentinel_failure = true;
            }
            row.closed = res.value.value;
            row.method = res.method;
            if (mode == Mode::rate || mode == Mode::compare) {
                QuadResult oracle = quad_rate(q, tol);
                row.oracle = oracle.value;
                row.rel_dev = relative_deviation(res.value.value, oracle.value);
            }
            if ((mode == Mode::rate || mode == Mode::table) && has_asym(q)) {
                row.asym_value = asym(q).value;
            }
        } else {  // asym comparison: closed-or-oracle vs asymptotic line
            if (!has_asym(q))
                throw std::domain_error("asym: family has no asymptotic line");
            RateResult res = closed_rate(q, limits);
            double reference;
            Method flag;
            if (res.value.reliable()) {
                reference = res.value.value;
                flag = res.method;
            } else {
                reference = quad_rate(q, tol).value;
                flag = Method::asymptotic_switchover;
            }
            double a = asym(q).value;
            row.closed = reference;
            row.asym_value = a;
            row.rel_dev = relative_deviation(a, reference);
            row.method = flag;
        }
        buffer << row.to_csv() << '\n';
    }
    out << buffer.str();
    return sentinel_failure ? kExitUnreliable : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Closed-form thermonuclear reaction-rate integrals"};
    app.require_subcommand(1);

    ParamFlags flags;
    std::string family;
    std::string grid_text;
    double tol = 1e-8;

    auto add_params = [&](CLI::App* sub, bool with_grid) {
        sub->add_option("family", family,
                        "nonresonant|cutoff|screened|depleted|resonant|general|generalh")
            ->required();
        sub->add_option("--z", flags.z, "argument z of the rate integral");
        sub->add_option("--nu", flags.nu, "power-law exponent nu");
        sub->add_option("--d", flags.d, "cut-off upper limit d");
        sub->add_option("--t", flags.t, "screening shift t");
        sub->add_option("--b", flags.b, "depletion strength b");
        sub->add_option("--delta", flags.delta, "depletion exponent delta");
        sub->add_option("--q", flags.q, "resonant argument q");
        sub->add_option("--a", flags.a, "resonant decay rate a");
        sub->add_option("--bres", flags.bres, "resonance location b");
        sub->add_option("--g", flags.g, "resonance width g");
        sub->add_option("--n", flags.n, "integer order n");
        sub->add_option("--m", flags.m, "integer order m");
        sub->add_option("--p", flags.p, "exponential rate p");
        sub->add_option("--rho", flags.rho, "power exponent rho");
        sub->add_option("--gamma", flags.gamma, "rational exponent gamma (e.g. 2/3)");
        sub->add_option("--tol", tol, "oracle quadrature tolerance");
        if (with_grid) {
            sub->add_option("--z-grid", grid_text, "start:stop:count[:log]")
                ->required();
        }
    };

    CLI::App* rate_cmd = app.add_subcommand("rate", "single-point closed form");
    add_params(rate_cmd, false);
    CLI::App* table_cmd = app.add_subcommand("table", "closed-form grid sweep");
    add_params(table_cmd, true);
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "closed form vs quadrature oracle");
    add_params(compare_cmd, true);
    CLI::App* asym_cmd =
        app.add_subcommand("asym", "asymptotic line vs closed form or oracle");
    add_params(asym_cmd, true);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help goes to stdout with a success exit
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << '\n';
        return kExitParse;
    }

    try {
        Mode mode;
        CLI::App* sub;
        if (rate_cmd->parsed()) { mode = Mode::rate; sub = rate_cmd; }
        else if (table_cmd->parsed()) { mode = Mode::table; sub = table_cmd; }
        else if (compare_cmd->parsed()) { mode = Mode::compare; sub = compare_cmd; }
        else { mode = Mode::asym_cmd; sub = asym_cmd; }

        RateQuery base = build_query(family, flags, *sub, mode != Mode::rate);
        std::optional<Grid> grid;
        if (mode != Mode::rate) grid = parse_grid(grid_text);
        return run_mode(mode, base, grid, tol, out);
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const PoleError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDivergence;
    }
}

}  // namespace thermorate::cli
