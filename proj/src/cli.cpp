#include "painleve/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include <openssl/evp.h>

#include "CLI11.hpp"

#ifndef PAINLEVE_VERSION
#define PAINLEVE_VERSION "0.0.0"
#endif

namespace painleve::cli {

using nlohmann::json;

namespace {

const std::map<std::string, EquationKind> kEquations = {
    {"p1", EquationKind::PainleveI}, {"p2", EquationKind::PainleveII}, {"toy", EquationKind::ToyModel}};

struct Options {
    std::string eq = "p1";
    std::string mode = "slope";
    std::optional<std::string> direction;
    int n = 5;
    std::optional<double> tol;
    std::optional<double> horizon;
    std::optional<std::string> format;
    std::string out;
    double y0 = 0.0;
    double slope = 0.0;
    unsigned threads = 0;
    std::string table;
    std::optional<int> order;
};

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json manifest(const std::vector<std::string>& args, const json& config, const std::string& extra_input,
              const Timer& timer) {
    json m;
    m["tool"] = "painleve";
    m["version"] = PAINLEVE_VERSION;
    m["command"] = args;
    m["config"] = config;
    m["input_hash"] = sha256_hex(config.dump() + extra_input);
    m["wall_time_s"] = timer.seconds();
    return m;
}

void emit(const Options& opts, const std::string& content, std::ostream& out) {
    if (opts.out.empty()) {
        out << content;
        return;
    }
    std::ofstream f(opts.out, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot open output file " + opts.out);
    f << content;
}

std::string fmt(double x) {
    std::ostringstream s;
    s << std::setprecision(17) << x;
    return s.str();
}

IntegrationConfig integration_config(const Options& opts, IntegrationConfig cfg) {
    if (opts.tol) {
        cfg.rel_tol = *opts.tol;
        cfg.abs_tol = *opts.tol * 1e-2;
    }
    if (opts.horizon) cfg.t_horizon = *opts.horizon;
    return cfg;
}

json integration_json(const IntegrationConfig& c, double horizon) {
    return {{"rel_tol", c.rel_tol},       {"abs_tol", c.abs_tol},
            {"pole_trigger", c.pole_trigger}, {"purity_tol", c.purity_tol},
            {"t_horizon", horizon},       {"max_poles", c.max_poles},
            {"min_step", c.min_step},     {"max_step", c.max_step},
            {"radius_fraction", c.radius_fraction}};
}

int cmd_trajectory(const Options& opts, const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err, const Timer& timer) {
    const Equation eq(kEquations.at(opts.eq));
    Direction dir = eq.kind() == EquationKind::ToyModel ? Direction::PositiveT : Direction::NegativeT;
    if (opts.direction) dir = *opts.direction == "pos" ? Direction::PositiveT : Direction::NegativeT;
    const IntegrationConfig cfg = integration_config(opts, {});
    const double horizon = cfg.t_horizon.value_or(default_horizon(eq, dir));
    const InitialData init{opts.y0, opts.slope, 0.0};

    const Trajectory traj = integrate(eq, init, dir, cfg);

    json cls;
    if (eq.kind() == EquationKind::ToyModel) {
        cls = {{"maxima", count_toy_maxima(traj)}};
    } else {
        try {
            const SolutionClass c = classify(eq, traj, dir);
            cls = {{"tag", to_string(c.tag)},
                   {"pole_count", c.pole_count},
                   {"window", {c.confidence_window.first, c.confidence_window.second}}};
        } catch (const Error& e) {
            if (e.code() != ErrorCode::AmbiguousClassification) throw;
            cls = {{"tag", "ambiguous"}, {"pole_count", traj.poles.size()}, {"reason", e.what()}};
        }
    }

    const json config = {{"command", "trajectory"},
                         {"equation", opts.eq},
                         {"direction", to_string(dir)},
                         {"y0", opts.y0},
                         {"slope", opts.slope},
                         {"integration", integration_json(cfg, horizon)}};
    const json man = manifest(args, config, "", timer);
    const bool has_branches = eq.kind() != EquationKind::ToyModel;

    std::ostringstream doc;
    if (opts.format.value_or("csv") == "json") {
        json j;
        j["manifest"] = man;
        j["equation"] = opts.eq;
        j["direction"] = to_string(dir);
        j["termination"] = to_string(traj.termination);
        j["terminal_t"] = traj.terminal_t;
        j["classification"] = cls;
        j["poles"] = json::array();
        for (const PoleEvent& p : traj.poles)
            j["poles"].push_back(
                {{"location", p.location}, {"order", p.order}, {"detour_radius", p.detour_radius}});
        j["samples"] = json::array();
        for (const State& s : traj.real_samples())
            j["samples"].push_back({s.t.real(), s.y.real(), s.yp.real()});
        doc << j.dump(2) << "\n";
    } else {
        doc << "# manifest " << man.dump() << "\n";
        doc << "# classification " << cls.dump() << "\n";
        doc << "t,y,branch_plus,branch_minus,pole_marker\n";
        const double sgn = dir == Direction::PositiveT ? 1.0 : -1.0;
        auto branches = [&](double t) -> std::string {
            if (!has_branches || t >= 0.0) return ",";
            return fmt(asymptotic_branch(eq, t, Branch::Plus)) + "," +
                   fmt(asymptotic_branch(eq, t, Branch::Minus));
        };
        std::size_t next_pole = 0;
        for (const State& s : traj.real_samples()) {
            const double t = s.t.real();
            while (next_pole < traj.poles.size() && sgn * (t - traj.poles[next_pole].location) > 0.0) {
                const double tp = traj.poles[next_pole++].location;
                doc << fmt(tp) << ",," << branches(tp) << ",1\n";
            }
            doc << fmt(t) << "," << fmt(s.y.real()) << "," << branches(t) << ",0\n";
        }
    }
    emit(opts, doc.str(), out);

    if (traj.termination == Termination::StepUnderflow) {
        err << "error: integration stalled at t=" << traj.terminal_t << " before the horizon\n";
        return Failure;
    }
    return Success;
}

SearchMode search_mode(const Options& opts, const Equation& eq) {
    if (eq.kind() == EquationKind::ToyModel) return SearchMode::toy();
    return opts.mode == "value" ? SearchMode::value(opts.slope) : SearchMode::slope(opts.y0);
}

int cmd_eigen(const Options& opts, const std::vector<std::string>& args, std::ostream& out,
              std::ostream& err, const Timer& timer) {
    const Equation eq(kEquations.at(opts.eq));
    const SearchMode mode = search_mode(opts, eq);
    SolverConfig cfg;
    if (opts.horizon) cfg.integration.t_horizon = *opts.horizon;
    cfg.threads = opts.threads;
    const double tol = opts.tol.value_or(1e-10);
    const Direction dir = search_direction(eq, mode);
    const double horizon = cfg.integration.t_horizon.value_or(default_horizon(eq, dir));

    const EigenTable table = eq.kind() == EquationKind::ToyModel
                                 ? toy_eigen_table(opts.n, tol, cfg)
                                 : eigen_table(eq, mode, opts.n, tol, cfg);

    const json config = {{"command", "eigen"},
                         {"equation", opts.eq},
                         {"mode", to_string(mode.kind)},
                         {"fixed_value", mode.fixed_value},
                         {"n", opts.n},
                         {"tol", tol},
                         {"integration", integration_json(cfg.integration, horizon)}};
    json doc = table_to_json(eq, mode, table);
    doc["manifest"] = manifest(args, config, "", timer);

    std::ostringstream text;
    if (opts.format.value_or("json") == "csv") {
        text << "# manifest " << doc["manifest"].dump() << "\n";
        text << "index,value,bracket_width,pole_count\n";
        for (const EigenvalueRecord& r : table.records)
            text << r.index << "," << fmt(r.value) << "," << fmt(r.bracket_width) << ","
                 << r.pole_count << "\n";
    } else {
        text << doc.dump(2) << "\n";
    }
    emit(opts, text.str(), out);

    for (const std::string& w : table.warnings) err << "warning: " << w << "\n";
    if (table.failed_index) {
        err << "partial table: index " << *table.failed_index << " failed: " << table.failure << "\n";
        return PartialTable;
    }
    return Success;
}

struct ConstantPlan {
    std::string name;
    double exponent;
    int order;
    SubsequenceSplit split;
    double closed_form;
};

ConstantPlan plan_for(EquationKind eq, SearchKind mode, const WkbConstants& c) {
    if (eq == EquationKind::ToyModel) return {"toy_ratio", 0.5, 0, SubsequenceSplit::None, std::pow(2.0, 5.0 / 6.0)};
    if (eq == EquationKind::PainleveI)
        return mode == SearchKind::SlopeEigen
                   ? ConstantPlan{"B_I", 0.6, 5, SubsequenceSplit::None, c.b_i}
                   : ConstantPlan{"C_I", 0.4, 4, SubsequenceSplit::None, c.c_i};
    return mode == SearchKind::SlopeEigen
               ? ConstantPlan{"B_II", 2.0 / 3.0, 4, SubsequenceSplit::EvenOdd, c.b_ii}
               : ConstantPlan{"C_II", 1.0 / 3.0, 4, SubsequenceSplit::None, c.c_ii};
}

int cmd_constants(const Options& opts, const std::vector<std::string>& args, std::ostream& out,
                  std::ostream& err, const Timer& timer) {
    const WkbConstants c = closed_form_constants();
    json doc;
    doc["closed_forms"] = {{"B_I", c.b_i}, {"C_I", c.c_i}, {"B_II", c.b_ii}, {"C_II", c.c_ii}};
    std::vector<std::array<std::string, 4>> rows = {{"B_I", fmt(c.b_i), fmt(c.b_i), "0"},
                                                    {"C_I", fmt(c.c_i), fmt(c.c_i), "0"},
                                                    {"B_II", fmt(c.b_ii), fmt(c.b_ii), "0"},
                                                    {"C_II", fmt(c.c_ii), fmt(c.c_ii), "0"}};

    std::string table_bytes;
    json config = {{"command", "constants"}, {"table", opts.table}};
    if (!opts.table.empty()) {
        std::ifstream f(opts.table, std::ios::binary);
        if (!f) {
            err << "usage error: cannot read table file " << opts.table << "\n";
            return Failure;
        }
        table_bytes.assign(std::istreambuf_iterator<char>(f), {});
        json parsed;
        try {
            parsed = json::parse(table_bytes);
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::SchemaError, std::string("table is not valid JSON: ") + e.what());
        }
        const ParsedTable table = table_from_json(parsed);
        if (table.records.empty()) {
            err << "usage error: constants needs a non-empty eigenvalue table\n";
            return Failure;
        }
        ConstantPlan plan = plan_for(table.equation, table.mode, c);
        const std::size_t n = table.records.size();
        const std::size_t shortest =
            plan.split == SubsequenceSplit::EvenOdd ? (n - 1) / 2 : n;
        if (shortest < 1)
            throw Error(ErrorCode::InvalidArgument, "table too short to extrapolate");
        plan.order = std::min(opts.order.value_or(plan.order), static_cast<int>(shortest) - 1);
        config["order"] = plan.order;

        const ConstantExtraction ex =
            extract_constant(table.records, plan.exponent, plan.order, plan.split);
        json estimates = json::array();
        auto add = [&](const char* which, const RichardsonResult& r) {
            estimates.push_back({{"subsequence", which},
                                 {"order", r.order},
                                 {"estimate", r.estimate},
                                 {"stability", r.stability},
                                 {"deviation", r.estimate - plan.closed_form}});
            rows.push_back({plan.name + "[" + which + "]", fmt(r.estimate), fmt(plan.closed_form),
                            fmt(r.estimate - plan.closed_form)});
        };
        if (ex.odd_estimate) {
            add("even", ex.estimate);
            add("odd", *ex.odd_estimate);
        } else {
            add("all", ex.estimate);
        }
        doc["extrapolation"] = {{"equation", to_string(table.equation)},
                                {"mode", to_string(table.mode)},
                                {"constant", plan.name},
                                {"exponent", plan.exponent},
                                {"records", n},
                                {"closed_form", plan.closed_form},
                                {"estimates", estimates}};
    }
    doc["manifest"] = manifest(args, config, table_bytes, timer);

    std::ostringstream text;
    if (opts.format.value_or("json") == "csv") {
        text << "# manifest " << doc["manifest"].dump() << "\n";
        text << "quantity,value,closed_form,deviation\n";
        for (const auto& r : rows) text << r[0] << "," << r[1] << "," << r[2] << "," << r[3] << "\n";
    } else {
        text << doc.dump(2) << "\n";
    }
    emit(opts, text.str(), out);
    return Success;
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--eq", o.eq, "Equation")->check(CLI::IsMember({"p1", "p2", "toy"}))->capture_default_str();
    sub->add_option("--tol", o.tol, "Tolerance");
    sub->add_option("--horizon", o.horizon, "Integration horizon t");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", o.out, "Output file (default stdout)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const Timer timer;
    Options o;
    CLI::App app{"Nonlinear eigenvalues of the Painleve I and II transcendents", "painleve"};
    app.require_subcommand(1);
    app.set_version_flag("--version", PAINLEVE_VERSION);

    auto* traj = app.add_subcommand("trajectory", "Integrate one initial-value problem");
    add_common(traj, o);
    traj->add_option("--y0", o.y0, "y(0)");
    traj->add_option("--slope", o.slope, "y'(0)");
    traj->add_option("--direction", o.direction, "Integration direction")
        ->check(CLI::IsMember({"neg", "pos"}));

    auto* eigen = app.add_subcommand("eigen", "Table of critical initial conditions");
    add_common(eigen, o);
    eigen->add_option("--mode", o.mode, "Eigenvalue kind")
        ->check(CLI::IsMember({"slope", "value"}))
        ->capture_default_str();
    eigen->add_option("--n", o.n, "Number of eigenvalues")->check(CLI::Range(1, 60))->capture_default_str();
    eigen->add_option("--y0", o.y0, "Fixed y(0) in slope mode");
    eigen->add_option("--slope", o.slope, "Fixed y'(0) in value mode");
    eigen->add_option("--threads", o.threads, "Worker threads (0 = all cores)");

    auto* consts = app.add_subcommand("constants", "Closed-form constants and table extrapolation");
    consts->add_option("--table,table", o.table, "Eigenvalue table JSON written by `eigen`");
    consts->add_option("--order", o.order, "Richardson order")->check(CLI::NonNegativeNumber);
    consts->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    consts->add_option("--out", o.out, "Output file (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Success : Failure;
    }

    try {
        if (traj->parsed()) return cmd_trajectory(o, args, out, err, timer);
        if (eigen->parsed()) return cmd_eigen(o, args, out, err, timer);
        return cmd_constants(o, args, out, err, timer);
    } catch (const Error& e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return Failure;
}

json table_to_json(const Equation& eq, const SearchMode& mode, const EigenTable& table) {
    json j;
    j["equation"] = to_string(eq.kind());
    j["mode"] = to_string(mode.kind);
    j["fixed_value"] = mode.fixed_value;
    j["records"] = json::array();
    for (const EigenvalueRecord& r : table.records)
        j["records"].push_back({{"index", r.index},
                                {"value", r.value},
                                {"bracket_width", r.bracket_width},
                                {"pole_count", r.pole_count}});
    j["status"] = table.failed_index ? "partial" : "complete";
    j["failed_index"] = table.failed_index ? json(*table.failed_index) : json(nullptr);
    j["failure"] = table.failure;
    j["warnings"] = table.warnings;
    return j;
}

ParsedTable table_from_json(const json& doc) {
    auto fail = [](const std::string& what) -> ParsedTable {
        throw Error(ErrorCode::SchemaError, "table schema: " + what);
    };
    if (!doc.is_object()) return fail("top level must be an object");
    if (!doc.contains("equation") || !doc["equation"].is_string()) return fail("missing string field 'equation'");
    const auto eq = kEquations.find(doc["equation"].get<std::string>());
    if (eq == kEquations.end()) return fail("unknown equation '" + doc["equation"].get<std::string>() + "'");
    if (!doc.contains("mode") || !doc["mode"].is_string()) return fail("missing string field 'mode'");
    const std::string mode_name = doc["mode"].get<std::string>();
    SearchKind kind;
    if (mode_name == "slope") kind = SearchKind::SlopeEigen;
    else if (mode_name == "value") kind = SearchKind::ValueEigen;
    else if (mode_name == "toy") kind = SearchKind::ToyEigen;
    else return fail("unknown mode '" + mode_name + "'");
    if ((kind == SearchKind::ToyEigen) != (eq->second == EquationKind::ToyModel))
        return fail("mode '" + mode_name + "' does not match equation");
    if (!doc.contains("records") || !doc["records"].is_array()) return fail("missing array field 'records'");

    const double fixed = doc.value("fixed_value", 0.0);
    ParsedTable out{eq->second, kind, {}};
    for (const json& r : doc["records"]) {
        if (!r.is_object() || !r.contains("index") || !r["index"].is_number_integer() ||
            !r.contains("value") || !r["value"].is_number())
            return fail("each record needs an integer 'index' and a numeric 'value'");
        EigenvalueRecord rec;
        rec.index = r["index"].get<int>();
        rec.value = r["value"].get<double>();
        rec.bracket_width = r.value("bracket_width", 0.0);
        rec.pole_count = r.value("pole_count", 0);
        rec.mode = {kind, fixed};
        out.records.push_back(rec);
    }
    return out;
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error(ErrorCode::InvalidArgument, "sha256 failed");
    std::ostringstream s;
    for (unsigned int i = 0; i < len; ++i)
        s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return s.str();
}

}  // namespace painleve::cli
