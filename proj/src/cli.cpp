#include <fracflow/cli.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include <fracflow/conjugation.hpp>
#include <fracflow/error_analysis.hpp>
#include <fracflow/iterate_solver.hpp>
#include <fracflow/maps_catalog.hpp>
#include <fracflow/numeric.hpp>
#include <fracflow/schroeder.hpp>

namespace fracflow::cli
{
namespace
{

using Cell = std::variant<std::monostate, bool, long, double, std::string>;

struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::size_t failed = 0;
};

struct Options
{
    std::string map;
    std::string lambda;
    std::string t;
    std::string x;
    std::size_t order = 9;
    long depth = 5;
    bool exact = false;
    std::string format = "csv";
    std::string out;
    std::string kind = "rel";
    std::size_t kmin = 1;
};

std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (const char c : s) {
        if (c == '"') {
            q += '"';
        }
        q += c;
    }
    return q + "\"";
}

std::string cell_text(const Cell &c)
{
    return std::visit(
        [](const auto &v) -> std::string {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::monostate>) {
                return "";
            } else if constexpr (std::is_same_v<V, bool>) {
                return v ? "true" : "false";
            } else if constexpr (std::is_same_v<V, long>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<V, double>) {
                return format_double(v == 0.0 ? 0.0 : v);
            } else {
                return v;
            }
        },
        c);
}

void write_csv(const Table &table, std::ostream &os)
{
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        os << (i ? "," : "") << csv_field(table.columns[i]);
    }
    os << '\n';
    for (const auto &row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << csv_field(cell_text(row[i]));
        }
        os << '\n';
    }
}

void write_json(const Table &table, std::ostream &os)
{
    auto array = nlohmann::ordered_json::array();
    for (const auto &row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            auto &slot = obj[table.columns[i]];
            std::visit(
                [&slot](const auto &v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, std::monostate>) {
                        slot = nullptr;
                    } else if constexpr (std::is_same_v<V, double>) {
                        if (std::isfinite(v)) {
                            slot = v == 0.0 ? 0.0 : v;
                        } else {
                            slot = nullptr;
                        }
                    } else {
                        slot = v;
                    }
                },
                row[i]);
        }
        array.push_back(std::move(obj));
    }
    os << array.dump(2) << '\n';
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        parts.push_back(cur);
    }
    if (!s.empty() && s.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

std::vector<Rational> parse_t_list(const std::string &text)
{
    if (text.empty()) {
        throw usage_error("--t is required");
    }
    std::vector<Rational> ts;
    for (const auto &part : split(text, ',')) {
        ts.push_back(parse_rational(part));
    }
    return ts;
}

// lo:hi:count, both endpoints included.
std::vector<Rational> parse_grid(const std::string &text)
{
    if (text.empty()) {
        throw usage_error("--x is required");
    }
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
        throw usage_error("--x expects lo:hi:count, got '" + text + "'");
    }
    const Rational lo = parse_rational(parts[0]);
    const Rational hi = parse_rational(parts[1]);
    long count = 0;
    try {
        std::size_t used = 0;
        count = std::stol(parts[2], &used);
        if (used != parts[2].size()) {
            throw std::invalid_argument(parts[2]);
        }
    } catch (const std::exception &) {
        throw usage_error("grid count must be an integer, got '" + parts[2] + "'");
    }
    if (count < 1) {
        throw usage_error("grid count must be >= 1");
    }
    if (hi < lo) {
        throw usage_error("grid range must satisfy lo <= hi");
    }
    std::vector<Rational> xs;
    xs.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        xs.push_back(count == 1 ? lo : Rational(lo + (hi - lo) * Rational(i) / Rational(count - 1)));
    }
    return xs;
}

MapSpec<double> make_map(const Options &o)
{
    if (o.map.empty()) {
        throw usage_error("--map is required");
    }
    MapParams params;
    if (!o.lambda.empty()) {
        params.lambda = parse_rational(o.lambda);
    }
    return catalog_get<double>(o.map, params);
}

void require_order(const Options &o)
{
    if (o.order < 2) {
        throw usage_error("--N must be >= 2");
    }
}

void require_depth(const Options &o)
{
    if (o.depth < 0) {
        throw usage_error("--n must be >= 0");
    }
}

std::string describe(const domain_error &e)
{
    std::string msg = e.what();
    if (e.stage() >= 0) {
        msg += " (stage " + std::to_string(e.stage()) + ")";
    }
    msg += " (value " + format_double(e.value()) + ")";
    return msg;
}

// Evaluates one grid point; a point-level failure fills the trailing
// `error` column and leaves the value cells empty.
void add_point(Table &table, std::vector<Cell> prefix, std::size_t value_cells,
               const std::function<std::vector<Cell>()> &eval)
{
    std::vector<Cell> row = std::move(prefix);
    try {
        auto values = eval();
        row.insert(row.end(), values.begin(), values.end());
        row.emplace_back(std::monostate{});
    } catch (const domain_error &e) {
        row.resize(row.size() + value_cells);
        row.emplace_back(describe(e));
        ++table.failed;
    }
    table.rows.push_back(std::move(row));
}

Table cmd_coeffs(const Options &o)
{
    require_order(o);
    const auto map = make_map(o);
    Table table;
    if (o.exact && o.t.empty()) {
        if (map.kind() != MapKind::parabolic) {
            throw usage_error("exact t-polynomial coefficients need a parabolic map (a_1 = 1); pass --t for numeric "
                              "coefficients");
        }
        const auto flow = solve_flow_exact(exact_series_for_flow(map, o.order), o.order);
        table.columns = {"k", "c_k"};
        for (std::size_t k = 1; k <= o.order; ++k) {
            table.rows.push_back({static_cast<long>(k), flow.coeffs[k].to_string()});
        }
        return table;
    }
    const auto ts = parse_t_list(o.t);
    table.columns = {"t", "k", "c_k"};
    if (o.exact) {
        if (map.kind() != MapKind::parabolic) {
            throw usage_error("exact coefficients need a parabolic map (a_1 = 1)");
        }
        const auto series = exact_series_for_flow(map, o.order);
        for (const auto &t : ts) {
            const auto flow = solve_flow_at(series, t, o.order);
            for (std::size_t k = 1; k <= o.order; ++k) {
                table.rows.push_back({to_string(t), static_cast<long>(k), to_string(flow.coeffs[k])});
            }
        }
        return table;
    }
    const auto series = exact_series_for_flow(map, o.order);
    for (const auto &t : ts) {
        const double td = rational_to_double(t);
        const auto flow = solve_flow_numeric(series, td, o.order);
        for (std::size_t k = 1; k <= o.order; ++k) {
            table.rows.push_back({td, static_cast<long>(k), flow.coeffs[k]});
        }
    }
    return table;
}

Table cmd_iterate(const Options &o)
{
    require_order(o);
    require_depth(o);
    const auto map = make_map(o);
    const auto ts = parse_t_list(o.t);
    const auto xs = parse_grid(o.x);
    const IterateEvaluator<double> ev(map, o.order, o.depth);
    Table table;
    table.columns = {"t", "x", "value", "error"};
    for (const auto &tq : ts) {
        const double t = rational_to_double(tq);
        for (const auto &xq : xs) {
            const double x = rational_to_double(xq);
            add_point(table, {t, x}, 1, [&] { return std::vector<Cell>{ev(t, x)}; });
        }
    }
    return table;
}

Table cmd_error(const Options &o)
{
    require_order(o);
    require_depth(o);
    if (o.kind != "rel" && o.kind != "succ") {
        throw usage_error("--kind must be rel or succ");
    }
    const bool rel = o.kind == "rel";
    const auto map = make_map(o);
    if (rel && !map.has_exact_flow()) {
        throw usage_error("map '" + map.name + "' has no closed-form flow; use --kind succ");
    }
    if (!rel && o.depth < 1) {
        throw usage_error("successive differences need --n >= 1");
    }
    const auto ts = parse_t_list(o.t);
    const auto xs = parse_grid(o.x);
    const IterateEvaluator<double> ev(map, o.order, o.depth);
    const std::string kind = to_string(rel ? ErrorKind::rel_error : ErrorKind::succ_diff);
    Table table;
    table.columns = {"t", "x", "N", "n", "kind", "value", "error"};
    for (const auto &tq : ts) {
        const double t = rational_to_double(tq);
        for (const auto &xq : xs) {
            const double x = rational_to_double(xq);
            add_point(table, {t, x, static_cast<long>(o.order), o.depth, kind}, 1, [&] {
                const double v = rel ? relative_error_value(ev, t, x) : successive_difference_value(ev, t, x, o.depth);
                return std::vector<Cell>{v};
            });
        }
    }
    return table;
}

Table cmd_leading(const Options &o)
{
    require_order(o);
    require_depth(o);
    const auto map = make_map(o);
    if (map.name != "logistic" || !map.lambda || *map.lambda != 2) {
        throw usage_error("leading-error formula is for --map logistic --lambda 2");
    }
    const auto ts = parse_t_list(o.t);
    const auto xs = parse_grid(o.x);
    const IterateEvaluator<double> ev(map, o.order, o.depth);
    Table table;
    table.columns = {"t", "x", "N", "n", "leading", "exact", "delta_r", "error"};
    for (const auto &tq : ts) {
        const double t = rational_to_double(tq);
        for (const auto &xq : xs) {
            const double x = rational_to_double(xq);
            add_point(table, {t, x, static_cast<long>(o.order), o.depth}, 3, [&] {
                const double lead = leading_error_logistic2(t, x, o.order, o.depth);
                const double exact = relative_error_value(ev, t, x);
                return std::vector<Cell>{lead, exact, exact - lead};
            });
        }
    }
    return table;
}

Table cmd_schroeder(const Options &o)
{
    require_order(o);
    const auto map = make_map(o);
    Table table;
    table.columns = {"name", "k", "value"};
    if (map.kind() == MapKind::hyperbolic) {
        const auto psi = koenigs_series(map.exact_series(o.order), o.order);
        table.rows.push_back({std::string("multiplier"), std::monostate{}, to_string(psi.multiplier)});
        for (std::size_t k = 1; k <= o.order; ++k) {
            table.rows.push_back({std::string("b"), static_cast<long>(k), to_string(psi.coeffs[k])});
        }
        return table;
    }
    if (map.kind() != MapKind::parabolic) {
        throw usage_error("Schroeder construction needs a_1 > 0");
    }
    const auto flow = solve_flow_exact(exact_series_for_flow(map, o.order), o.order);
    const auto e = parabolic_psi(velocity_series(flow));
    table.rows.push_back({std::string("rho"), std::monostate{}, to_string(e.rho)});
    for (const auto &[k, c] : e.p) {
        table.rows.push_back({std::string("p"), static_cast<long>(k), to_string(c)});
    }
    return table;
}

Table cmd_radius(const Options &o)
{
    require_order(o);
    const auto map = make_map(o);
    if (map.kind() != MapKind::parabolic) {
        throw usage_error("radius diagnostic needs exact coefficients, available for parabolic maps");
    }
    const auto ts = parse_t_list(o.t);
    if (ts.size() != 1) {
        throw usage_error("radius takes a single --t");
    }
    if (o.kmin < 1 || o.kmin > o.order) {
        throw usage_error("--kmin must lie in [1, N]");
    }
    const auto flow = solve_flow_exact(exact_series_for_flow(map, o.order), o.order);
    Table table;
    table.columns = {"k", "estimate", "skipped"};
    for (const auto &p : radius_estimate(flow, ts.front(), o.kmin, o.order)) {
        table.rows.push_back(
            {static_cast<long>(p.k), p.skipped ? Cell(std::monostate{}) : Cell(p.estimate), p.skipped});
    }
    return table;
}

Table cmd_extrema(const Options &o)
{
    std::vector<double> ts;
    if (o.t.empty()) {
        for (long i = 0; i <= 10; ++i) {
            ts.push_back(rational_to_double(make_rational(i, 10)));
        }
    } else {
        for (const auto &t : parse_t_list(o.t)) {
            ts.push_back(rational_to_double(t));
        }
    }
    Table table;
    table.columns = {"t", "computed", "formula", "rel_discrepancy"};
    for (const auto &r : extrema_table(ts)) {
        table.rows.push_back({r.t, r.computed, r.formula, r.rel_discrepancy});
    }
    return table;
}

void add_common(CLI::App &sub, Options &o)
{
    sub.add_option("--map", o.map, "moebius, sine or logistic")->required();
    sub.add_option("--lambda", o.lambda, "logistic parameter (exact decimal or p/q)");
}

void add_t(CLI::App &sub, Options &o, const char *help)
{
    sub.add_option("--t", o.t, help)->allow_extra_args(false);
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    Options o;
    CLI::App app{"Continuous iterates of maps near a fixed point", "fracflow"};
    app.require_subcommand(1);
    app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", o.out, "write the table to PATH instead of standard output");
    app.fallthrough();

    auto *coeffs = app.add_subcommand("coeffs", "flow coefficients c_k");
    add_common(*coeffs, o);
    add_t(*coeffs, o, "t value(s); omit with --exact for polynomials in t");
    coeffs->add_option("--N", o.order, "series order");
    coeffs->add_flag("--exact", o.exact, "exact rational arithmetic");

    auto *iterate = app.add_subcommand("iterate", "A_{n,t}(x) over a grid");
    add_common(*iterate, o);
    add_t(*iterate, o, "t value(s)");
    iterate->add_option("--x", o.x, "lo:hi:count");
    iterate->add_option("--N", o.order, "series order");
    iterate->add_option("--n", o.depth, "conjugation depth");

    auto *error = app.add_subcommand("error", "relative errors or successive differences");
    add_common(*error, o);
    add_t(*error, o, "t value(s)");
    error->add_option("--x", o.x, "lo:hi:count");
    error->add_option("--N", o.order, "series order");
    error->add_option("--n", o.depth, "conjugation depth");
    error->add_option("--kind", o.kind, "rel (needs a closed-form flow) or succ");

    auto *leading = app.add_subcommand("leading", "leading-error approximation for logistic lambda = 2");
    add_common(*leading, o);
    add_t(*leading, o, "t value(s)");
    leading->add_option("--x", o.x, "lo:hi:count");
    leading->add_option("--N", o.order, "series order");
    leading->add_option("--n", o.depth, "conjugation depth");

    auto *schroeder = app.add_subcommand("schroeder", "Koenigs coefficients or parabolic Psi constants");
    add_common(*schroeder, o);
    schroeder->add_option("--N", o.order, "series order");

    auto *radius = app.add_subcommand("radius", "root-test radius estimates 1/|c_k(t)|^(1/k)");
    add_common(*radius, o);
    add_t(*radius, o, "t value (exact)");
    radius->add_option("--N", o.order, "largest k");
    radius->add_option("--kmin", o.kmin, "smallest k");

    auto *extrema = app.add_subcommand("extrema", "sine extrema against (pi/2)^(1 - sqrt t)");
    add_t(*extrema, o, "t value(s) in [0, 1]; default 0, 0.1, ..., 1");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return exit_ok;
        }
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        Table table;
        if (*coeffs) {
            table = cmd_coeffs(o);
        } else if (*iterate) {
            table = cmd_iterate(o);
        } else if (*error) {
            table = cmd_error(o);
        } else if (*leading) {
            table = cmd_leading(o);
        } else if (*schroeder) {
            table = cmd_schroeder(o);
        } else if (*radius) {
            table = cmd_radius(o);
        } else {
            table = cmd_extrema(o);
        }

        std::ofstream file;
        std::ostream *dest = &out;
        if (!o.out.empty()) {
            file.open(o.out, std::ios::binary);
            if (!file) {
                throw usage_error("cannot open '" + o.out + "' for writing");
            }
            dest = &file;
        }
        if (o.format == "json") {
            write_json(table, *dest);
        } else {
            write_csv(table, *dest);
        }
        dest->flush();
        if (!table.rows.empty() && table.failed == table.rows.size()) {
            err << "error: every point failed\n";
            return exit_domain;
        }
        return exit_ok;
    } catch (const usage_error &e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const domain_error &e) {
        err << "error: " << describe(e) << '\n';
        return exit_domain;
    } catch (const std::runtime_error &e) {
        err << "error: " << e.what() << '\n';
        return exit_domain;
    }
}

} // namespace fracflow::cli
