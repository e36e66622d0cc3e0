// fmsilp command line: analyze, eliminate, farkas, approx, convex, certify.
#include "fmsilp/errors.hpp"
#include "fmsilp/model_io.hpp"
#include "fmsilp/report_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace fmsilp;
using ojson = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kInputError = 2, kBudget = 3 };

struct Common {
    std::string file;
    std::string mode = "exact";
    int stages = 0;
    std::string delta_max;
    std::string order = "input";
    std::string json_out;
    bool prune_support = false;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("file", c.file, "model file")->required();
    cmd->add_option("--mode", c.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
    cmd->add_option("--stages", c.stages, "number of grid stages")->check(CLI::PositiveNumber);
    cmd->add_option("--delta-max", c.delta_max, "largest delta sampled for omega");
    cmd->add_option("--order", c.order, "elimination order")->check(CLI::IsMember({"input", "minfill"}));
    cmd->add_option("--json", c.json_out, "write the report here instead of stdout");
    cmd->add_flag("--prune-support", c.prune_support, "drop rows over Chernikov's support bound");
}

struct Loaded {
    ModelFile file;
    ReportContext ctx;
    AnalysisOptions options;
};

Loaded load(const Common& c, const std::string& command)
{
    Loaded l;
    l.file = load_model_file(c.file);
    l.ctx.command = command;
    l.ctx.mode = c.mode == "float" ? NumericMode::Float : NumericMode::Exact;
    l.ctx.schedule = l.file.schedule;
    if (c.stages > 0) l.ctx.schedule.stages = c.stages;
    if (!c.delta_max.empty()) l.ctx.schedule.deltas = GridSchedule::deltas_up_to(parse_rational(c.delta_max));
    l.ctx.schedule.validate();
    l.ctx.order = c.order == "minfill" ? OrderRule::MinFill : OrderRule::Input;
    l.options.elimination.order_rule = l.ctx.order;
    l.options.elimination.prune_support = c.prune_support;
    return l;
}

const SILPModel& require_model(const Loaded& l)
{
    if (!l.file.model) throw ParseError("model file has no constraints section");
    return *l.file.model;
}

void emit(const ojson& report, const Common& c)
{
    const std::string text = report.dump(2) + "\n";
    if (c.json_out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(c.json_out);
    if (!out) throw Error("cannot write " + c.json_out);
    out << text;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

// "1,0,-2" in variable order, or "x1=1,x3=-2" with the rest zero.
std::vector<Rational> parse_vector(const std::string& text, const std::vector<std::string>& vars)
{
    auto parts = split(text, ',');
    std::vector<Rational> v(vars.size(), Rational(0));
    if (!parts.empty() && parts.front().find('=') != std::string::npos) {
        for (const auto& p : parts) {
            auto eq = p.find('=');
            if (eq == std::string::npos) throw ParseError("expected name=value in --c: " + p);
            auto it = std::find(vars.begin(), vars.end(), p.substr(0, eq));
            if (it == vars.end()) throw ParseError("unknown variable in --c: " + p.substr(0, eq));
            v[static_cast<std::size_t>(it - vars.begin())] = parse_rational(p.substr(eq + 1));
        }
        return v;
    }
    if (parts.size() != vars.size())
        throw ParseError("--c needs " + std::to_string(vars.size()) + " entries, got " +
                         std::to_string(parts.size()));
    for (std::size_t k = 0; k < parts.size(); ++k) v[k] = parse_rational(parts[k]);
    return v;
}

template <typename Scalar>
Vector<Scalar> to_vector(const std::vector<Rational>& v)
{
    Vector<Scalar> out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t k = 0; k < v.size(); ++k) out[static_cast<Eigen::Index>(k)] = ScalarTraits<Scalar>::from_rational(v[k]);
    return out;
}

template <typename Scalar>
int run_analyze(const Common& c)
{
    auto l = load(c, "analyze");
    auto report = analyze<Scalar>(require_model(l), l.ctx.schedule, l.options);
    emit(analysis_report(report, l.ctx), c);
    return kOk;
}

template <typename Scalar>
int run_eliminate(const Common& c, const std::string& vars, int stage)
{
    auto l = load(c, "eliminate");
    const auto& model = require_model(l);
    const int s = model.finite() ? 1 : (stage > 0 ? stage : l.ctx.schedule.stages);
    auto sys = instantiate_stage<Scalar>(model, l.ctx.schedule, s);
    std::vector<DerivedRow<Scalar>> rows;
    std::vector<std::size_t> clean, dirty;
    if (vars.empty()) {
        auto result = run_elimination(sys, l.options.elimination);
        rows = result.rows;
        clean = result.clean;
        dirty = result.dirty;
    } else {
        // Only the listed variables, in the listed order; one-sided ones stay as dirty.
        rows = initial_rows(sys);
        std::size_t next_id = rows.size();
        for (const auto& name : split(vars, ',')) {
            std::size_t k = model.variable_index(name);
            try {
                rows = eliminate_variable(rows, k, false, next_id, l.options.elimination);
                clean.push_back(k);
            } catch (const NotEliminable&) {
                dirty.push_back(k);
            }
        }
    }
    l.ctx.schedule.stages = s;
    emit(elimination_report(sys, rows, clean, dirty, l.ctx), c);
    return kOk;
}

template <typename Scalar>
int run_farkas(const Common& c, const std::string& ctext, const std::string& dtext)
{
    auto l = load(c, "farkas");
    const auto& model = require_model(l);
    auto cv = to_vector<Scalar>(parse_vector(ctext, model.variables));
    Scalar d = ScalarTraits<Scalar>::from_rational(parse_rational(dtext));
    auto result = is_consequence<Scalar>(model, l.ctx.schedule, cv, d, l.options);
    emit(farkas_report(result, cv, d, l.ctx), c);
    return kOk;
}

template <typename Scalar>
int run_approx(const Common& c, std::size_t n)
{
    auto l = load(c, "approx");
    const auto& model = require_model(l);
    auto seq = value_sequence<Scalar>(model, n, l.options);
    emit(approx_report(seq, enumerate_rows(model, seq.values.size()), l.ctx), c);
    return kOk;
}

template <typename Scalar>
int run_convex(const Common& c, int stage)
{
    auto l = load(c, "convex");
    if (!l.file.convex) throw ParseError("model file has no convex section");
    l.ctx.convex_stage = stage;
    auto a = analyze_convex<Scalar>(*l.file.convex, stage, l.options);
    emit(convex_report(a, l.ctx), c);
    return kOk;
}

int run_certify(const std::string& report_path, const std::string& model_path)
{
    nlohmann::json report;
    try {
        report = nlohmann::json::parse(read_text_file(report_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(report_path + ": " + e.what());
    }
    auto checks = certify(report, load_model_file(model_path));
    bool ok = true;
    for (const auto& ch : checks) {
        std::cout << (ch.ok ? "ok   " : "FAIL ") << ch.name;
        if (!ch.ok) std::cout << ": " << ch.detail;
        std::cout << "\n";
        ok = ok && ch.ok;
    }
    std::cout << checks.size() << " certificate(s), " << (ok ? "all verified" : "verification failed") << "\n";
    return ok ? kOk : kVerifyFailed;
}

template <typename F>
int dispatch(const Common& c, F&& f)
{
    return c.mode == "float" ? f(double{}) : f(Rational{});
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fourier-Motzkin duality analysis for semi-infinite linear programs"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    Common analyze_opts, elim_opts, farkas_opts, approx_opts, convex_opts;
    auto* analyze_cmd = app.add_subcommand("analyze", "full duality report");
    add_common(analyze_cmd, analyze_opts);

    std::string vars;
    int elim_stage = 0;
    auto* elim_cmd = app.add_subcommand("eliminate", "dump derived rows with multipliers");
    add_common(elim_cmd, elim_opts);
    elim_cmd->add_option("--vars", vars, "comma-separated variables to eliminate, in order");
    elim_cmd->add_option("--stage", elim_stage, "grid stage (default: last)")->check(CLI::PositiveNumber);

    std::string ctext, dtext;
    auto* farkas_cmd = app.add_subcommand("farkas", "is c.x >= d implied by the constraints?");
    add_common(farkas_cmd, farkas_opts);
    farkas_cmd->add_option("--c", ctext, "coefficients: 1,0,-2 or x1=1,x3=-2")->required();
    farkas_cmd->add_option("--d", dtext, "right-hand side")->required();

    std::size_t n = 8;
    auto* approx_cmd = app.add_subcommand("approx", "table of finite-subproblem values v(P_n)");
    add_common(approx_cmd, approx_opts);
    approx_cmd->add_option("--n", n, "number of rows")->check(CLI::PositiveNumber);

    int convex_stage = 1;
    auto* convex_cmd = app.add_subcommand("convex", "convex program via its sampled SILP");
    add_common(convex_cmd, convex_opts);
    convex_cmd->add_option("--stage", convex_stage, "sampling stage")->check(CLI::PositiveNumber);

    std::string report_path, model_path;
    auto* certify_cmd = app.add_subcommand("certify", "replay every certificate of a report");
    certify_cmd->add_option("report", report_path, "report JSON")->required();
    certify_cmd->add_option("file", model_path, "model file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (*analyze_cmd)
            return dispatch(analyze_opts, [&](auto s) { return run_analyze<decltype(s)>(analyze_opts); });
        if (*elim_cmd)
            return dispatch(elim_opts, [&](auto s) { return run_eliminate<decltype(s)>(elim_opts, vars, elim_stage); });
        if (*farkas_cmd)
            return dispatch(farkas_opts, [&](auto s) { return run_farkas<decltype(s)>(farkas_opts, ctext, dtext); });
        if (*approx_cmd)
            return dispatch(approx_opts, [&](auto s) { return run_approx<decltype(s)>(approx_opts, n); });
        if (*convex_cmd)
            return dispatch(convex_opts, [&](auto s) { return run_convex<decltype(s)>(convex_opts, convex_stage); });
        if (*certify_cmd) return run_certify(report_path, model_path);
    } catch (const RowBudgetExceeded& e) {
        std::cerr << "fmsilp: " << e.what() << " (set FMSILP_ROW_BUDGET to raise it)\n";
        return kBudget;
    } catch (const ParseError& e) {
        std::cerr << "fmsilp: " << e.what() << "\n";
        return kInputError;
    } catch (const Error& e) {
        std::cerr << "fmsilp: " << e.what() << "\n";
        return kInputError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "fmsilp: malformed report: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
