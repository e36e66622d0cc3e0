#include "fmsilp/report_io.hpp"

#include "fmsilp/errors.hpp"

#include <algorithm>
#include <map>

namespace fmsilp {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

template <typename Scalar>
std::string num(const Scalar& x)
{
    return scalar_to_string(x);
}

template <typename Scalar>
std::string num(const Extended<Scalar>& x)
{
    return x.str();
}

template <typename Scalar>
ojson multipliers(const FiniteSystem<Scalar>& sys, const Multiplier<Scalar>& u)
{
    ojson j = ojson::object();
    for (const auto& [row, value] : u.entries()) j[sys.ids.at(row).str()] = num(value);
    return j;
}

template <typename Scalar>
ojson named(const Vector<Scalar>& x, const std::vector<std::string>& names)
{
    ojson j = ojson::object();
    for (std::size_t k = 0; k < names.size(); ++k) j[names[k]] = num(Scalar(x[static_cast<Eigen::Index>(k)]));
    return j;
}

std::vector<std::string> names_of(const std::vector<std::size_t>& idx, const std::vector<std::string>& vars)
{
    std::vector<std::string> out;
    for (auto k : idx) out.push_back(vars.at(k));
    return out;
}

ojson verdict_json(const Verdict& v)
{
    ojson j;
    j["answer"] = to_string(v.answer);
    j["confidence"] = to_string(v.confidence);
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

std::string to_string(LStatus s)
{
    switch (s) {
    case LStatus::ExactMinusInfinity: return "exact_minus_infinity";
    case LStatus::Converged: return "converged";
    default: return "inconclusive";
    }
}

ojson provenance(const ReportContext& ctx)
{
    ojson j;
    j["command"] = ctx.command;
    j["mode"] = ctx.mode == NumericMode::Exact ? "exact" : "float";
    j["order"] = ctx.order == OrderRule::Input ? "input" : "minfill";
    j["schedule"] = schedule_to_json(ctx.schedule);
    j["convex_stage"] = ctx.convex_stage;
    j["tool_version"] = kToolVersion;
    return j;
}

template <typename Scalar>
ojson analysis_body(const DualityReport<Scalar>& report)
{
    ojson j;
    const auto& vars = report.stages.front().system.variables;
    j["stages"] = ojson::array();
    for (const auto& st : report.stages) {
        ojson s;
        s["stage"] = st.stage;
        s["input_rows"] = st.system.num_rows();
        s["derived_rows"] = st.result.rows.size();
        s["clean"] = names_of(st.result.clean, vars);
        s["dirty"] = names_of(st.result.dirty, vars);
        s["I1"] = st.partition.i1.size();
        s["I2"] = st.partition.i2.size();
        s["I3"] = st.partition.i3.size();
        s["I4"] = st.partition.i4.size();
        s["S"] = num(st.diag.S);
        s["delta2"] = num(st.diag.delta2);
        s["I1_max_rhs"] = num(st.diag.i1_max);
        s["omega"] = ojson::array();
        for (const auto& [delta, w] : st.diag.omega_table)
            s["omega"].push_back({{"delta", num(delta)}, {"value", num(w)}});
        s["tidy"] = st.tidy;
        j["stages"].push_back(s);
    }
    const auto& v = report.verdicts;
    ojson diag;
    diag["L"] = {{"status", to_string(report.L.status)},
                 {"value", num(report.L.value)},
                 {"lower", num(report.L.lower)},
                 {"upper", num(report.L.upper)},
                 {"tolerance", num(report.L.tolerance)}};
    diag["primal_value"] = num(v.primal_value);
    diag["primal_value_confidence"] = to_string(v.primal_value_confidence);
    diag["dual_value"] = num(v.dual_value);
    diag["dual_value_confidence"] = to_string(v.dual_value_confidence);
    diag["s_dominates_i4"] = report.s_dominates_i4;
    diag["s_diverging"] = report.s_diverging;
    diag["delta2_diverging"] = report.delta2_diverging;
    j["diagnostics"] = diag;

    ojson verdicts;
    verdicts["primal_feasible"] = verdict_json(v.primal_feasible);
    verdicts["primal_bounded"] = verdict_json(v.primal_bounded);
    verdicts["primal_solvable"] = verdict_json(v.primal_solvable);
    verdicts["dual_feasible"] = verdict_json(v.dual_feasible);
    verdicts["dual_bounded"] = verdict_json(v.dual_bounded);
    verdicts["dual_solvable"] = verdict_json(v.dual_solvable);
    verdicts["zero_gap"] = verdict_json(v.zero_gap);
    verdicts["strong_duality"] = verdict_json(v.strong_duality);
    verdicts["tidy"] = verdict_json(v.tidy);
    j["verdicts"] = verdicts;

    ojson certs = ojson::array();
    auto system_of = [&](int stage) -> const FiniteSystem<Scalar>& {
        return report.stages.at(static_cast<std::size_t>(stage - 1)).system;
    };
    if (report.dual_certificate) {
        const auto& c = *report.dual_certificate;
        certs.push_back({{"name", "dual_solution"},
                         {"type", "dual_solution"},
                         {"stage", c.stage},
                         {"multipliers", multipliers(system_of(c.stage), c.v)},
                         {"value", num(c.value)}});
    }
    if (report.infeasibility) {
        const auto& c = *report.infeasibility;
        certs.push_back({{"name", "primal_infeasibility"},
                         {"type", "infeasibility"},
                         {"stage", c.stage},
                         {"multipliers", multipliers(system_of(c.stage), c.u)},
                         {"rhs", num(c.rhs)}});
    }
    if (report.primal_witness) {
        const auto& w = *report.primal_witness;
        certs.push_back({{"name", "primal_witness"},
                         {"type", "primal_witness"},
                         {"stage", w.stage},
                         {"x", named(w.x, vars)},
                         {"z", num(w.z)},
                         {"objective", num(w.objective)}});
    }
    auto rd = regular_duality_report(report);
    ojson reg;
    reg["z_star"] = num(rd.z_star);
    reg["attained_by"] = rd.certificate ? "dual_solution" : rd.sequence.empty() ? "none" : "feasible_sequence";
    j["regular_duality"] = reg;
    if (!rd.sequence.empty()) {
        ojson entries = ojson::array();
        for (const auto& e : rd.sequence)
            entries.push_back({{"stage", e.stage},
                               {"delta", num(e.delta)},
                               {"multipliers", multipliers(system_of(e.stage), e.v)},
                               {"value", num(e.value)},
                               {"max_coeff", num(e.max_coeff)},
                               {"residual", named(e.residual, vars)}});
        certs.push_back({{"name", "feasible_sequence"}, {"type", "feasible_sequence"}, {"entries", entries}});
    }
    j["certificates"] = certs;
    j["notes"] = report.notes;
    j["invariant_violations"] = report.invariant_violations;
    return j;
}

}  // namespace

template <typename Scalar>
ojson analysis_report(const DualityReport<Scalar>& report, const ReportContext& ctx)
{
    ojson j;
    j["version"] = "1";
    j["kind"] = "analysis";
    j["provenance"] = provenance(ctx);
    j["objective"] = named(report.objective, report.stages.front().system.variables);
    auto body = analysis_body(report);
    for (auto& [k, v] : body.items()) j[k] = v;
    return j;
}

template <typename Scalar>
ojson farkas_report(const FarkasResult<Scalar>& r, const Vector<Scalar>& c, const Scalar& d,
                    const ReportContext& ctx)
{
    const auto& vars = r.systems.front().variables;
    ojson j;
    j["version"] = "1";
    j["kind"] = "farkas";
    j["provenance"] = provenance(ctx);
    j["query"] = {{"c", named(c, vars)}, {"d", num(d)}};
    j["verdict"] = to_string(r.verdict);
    j["z_star"] = num(r.z_star);
    if (!r.note.empty()) j["note"] = r.note;
    ojson certs = ojson::array();
    if (r.certificate) {
        const auto& cert = *r.certificate;
        const auto& sys = r.systems.at(static_cast<std::size_t>(cert.stage - 1));
        ojson cj;
        cj["name"] = "farkas_" + to_string(cert.kind);
        cj["type"] = "farkas_" + to_string(cert.kind);
        cj["stage"] = cert.stage;
        cj["c"] = named(c, vars);
        cj["d"] = num(d);
        switch (cert.kind) {
        case FarkasCertificateKind::ExactCone:
            cj["multipliers"] = multipliers(sys, cert.u);
            cj["lambda0"] = num(cert.lambda0);
            cj["d_prime"] = num(cert.d_prime);
            break;
        case FarkasCertificateKind::InfeasibleCone:
            cj["multipliers"] = multipliers(sys, cert.u);
            break;
        case FarkasCertificateKind::ClosureSequence: {
            cj["target"] = named(cert.target, vars);
            cj["target_value"] = num(cert.target_value);
            cj["entries"] = ojson::array();
            for (const auto& e : cert.sequence) {
                const auto& es = r.systems.at(static_cast<std::size_t>(e.stage - 1));
                cj["entries"].push_back({{"stage", e.stage},
                                         {"delta", num(e.delta)},
                                         {"multipliers", multipliers(es, e.u)},
                                         {"image", named(e.image, vars)},
                                         {"value", num(e.value)},
                                         {"gap", num(e.gap)}});
            }
            break;
        }
        }
        certs.push_back(cj);
    }
    if (r.counterexample) {
        certs.push_back({{"name", "farkas_counterexample"},
                         {"type", "farkas_counterexample"},
                         {"stage", static_cast<int>(r.systems.size())},
                         {"c", named(c, vars)},
                         {"d", num(d)},
                         {"x", named(*r.counterexample, vars)}});
    }
    j["certificates"] = certs;
    return j;
}

template <typename Scalar>
ojson approx_report(const ValueSequence<Scalar>& seq, const std::vector<RowId>& rows,
                    const ReportContext& ctx)
{
    ojson j;
    j["version"] = "1";
    j["kind"] = "approx";
    j["provenance"] = provenance(ctx);
    j["sequence"] = ojson::array();
    for (std::size_t n = 0; n < seq.values.size(); ++n)
        j["sequence"].push_back({{"n", seq.sizes[n]}, {"added_row", rows.at(n).str()}, {"value", num(seq.values[n])}});
    j["nondecreasing"] = seq.nondecreasing;
    j["diverging"] = seq.diverging;
    j["cauchy"] = seq.cauchy;
    j["limit"] = num(seq.limit);
    j["note"] = seq.note;
    j["certificates"] = ojson::array();
    return j;
}

template <typename Scalar>
ojson convex_report(const ConvexAnalysis<Scalar>& a, const ReportContext& ctx)
{
    ojson j;
    j["version"] = "1";
    j["kind"] = "convex";
    j["provenance"] = provenance(ctx);
    j["samples"] = a.samples.size();
    j["variables"] = a.model.variables;
    auto body = analysis_body(a.report);
    for (auto& [k, v] : body.items()) j[k] = v;
    ojson cj;
    if (a.slater) {
        ojson x = ojson::array();
        for (const auto& v : *a.slater) x.push_back(v.str());
        cj["slater_point"] = x;
    } else {
        cj["slater_point"] = nullptr;
    }
    cj["max_feasible_sample_f"] = num(a.max_feasible_f);
    cj["check_failures"] = a.check_failures;
    cj["notes"] = a.notes;
    if (a.lagrangian) {
        const auto& L = *a.lagrangian;
        ojson lam = ojson::array();
        for (const auto& v : L.lambda) lam.push_back(num(v));
        cj["lambda"] = lam;
        cj["sigma"] = num(L.sigma);
        cj["lagrangian_value"] = num(L.value);
        cj["x_bar"] = named(L.x_bar, a.program.variables);
        cj["weight_sum"] = num(L.weight_sum);
        cj["x_bar_feasible"] = L.x_bar_feasible;
        ojson lj;
        lj["name"] = "lagrangian";
        lj["type"] = "lagrangian";
        lj["lambda"] = lam;
        lj["value"] = num(L.value);
        j["certificates"].push_back(lj);
    }
    j["convex"] = cj;
    return j;
}

template <typename Scalar>
ojson elimination_report(const FiniteSystem<Scalar>& system, const std::vector<DerivedRow<Scalar>>& rows,
                         const std::vector<std::size_t>& clean, const std::vector<std::size_t>& dirty,
                         const ReportContext& ctx)
{
    ojson j;
    j["version"] = "1";
    j["kind"] = "elimination";
    j["provenance"] = provenance(ctx);
    j["clean"] = names_of(clean, system.variables);
    j["dirty"] = names_of(dirty, system.variables);
    j["rows"] = ojson::array();
    j["certificates"] = ojson::array();
    for (const auto& r : rows) {
        ojson rj;
        rj["id"] = r.id;
        rj["coeffs"] = named(r.row.coeffs, system.variables);
        rj["rhs"] = num(r.row.rhs);
        rj["multipliers"] = multipliers(system, r.multiplier);
        j["rows"].push_back(rj);
        ojson cj = rj;
        cj["name"] = "derived_row_" + std::to_string(r.id);
        cj["type"] = "derived_row";
        j["certificates"].push_back(cj);
    }
    return j;
}

// ---- certify ---------------------------------------------------------------

namespace {

struct Sum {
    std::vector<Rational> image, image_abs;
    Rational value{0}, value_abs{0};
};

class Replayer {
public:
    Replayer(const SILPModel& model, bool exact, GridSchedule schedule)
        : model_(model), exact_(exact), schedule_(std::move(schedule))
    {
        // Finite rows are looked up by id; this also covers sampled rows whose ids
        // name a sample point rather than a family.
        for (const auto& r : model_.rows) finite_[r.id.str()] = &r;
    }

    bool equal(const Rational& a, const Rational& b, const Rational& scale) const
    {
        if (exact_) return a == b;
        Rational diff = a > b ? Rational(a - b) : Rational(b - a);
        return diff.convert_to<double>() <= 1e-7 * std::max(1.0, scale.convert_to<double>());
    }

    Sum sum(const json& mults) const
    {
        if (!mults.is_object()) throw Error("multipliers must be an object");
        std::vector<RowId> ids;
        std::vector<Rational> u;
        for (auto it = mults.begin(); it != mults.end(); ++it) {
            ids.push_back(RowId::parse(it.key()));
            u.push_back(json_rational(it.value()));
            if (!(u.back() > 0)) throw Error("multiplier for '" + it.key() + "' is not positive");
        }
        std::vector<LinearRow<Rational>> rows;
        for (const auto& id : ids) {
            if (auto it = finite_.find(id.str()); it != finite_.end()) {
                LinearRow<Rational> r;
                r.coeffs = Vector<Rational>(static_cast<Eigen::Index>(it->second->coeffs.size()));
                for (std::size_t k = 0; k < it->second->coeffs.size(); ++k)
                    r.coeffs[static_cast<Eigen::Index>(k)] = it->second->coeffs[k];
                r.rhs = it->second->rhs;
                rows.push_back(std::move(r));
            } else {
                rows.push_back(instantiate_rows<Rational>(model_, {id}).rows.front());
            }
        }
        Sum s;
        const std::size_t n = model_.variables.size();
        s.image.assign(n, Rational(0));
        s.image_abs.assign(n, Rational(0));
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                Rational t = rows[i].coeffs[static_cast<Eigen::Index>(k)] * u[i];
                s.image[k] += t;
                s.image_abs[k] += t < 0 ? Rational(-t) : t;
            }
            Rational t = rows[i].rhs * u[i];
            s.value += t;
            s.value_abs += t < 0 ? Rational(-t) : t;
        }
        return s;
    }

    std::vector<Rational> vec(const json& j) const
    {
        if (!j.is_object()) throw Error("expected a variable map");
        std::vector<Rational> v(model_.variables.size(), Rational(0));
        for (auto it = j.begin(); it != j.end(); ++it) v[model_.variable_index(it.key())] = json_rational(it.value());
        return v;
    }

    // Empty when image == target componentwise.
    std::string image_mismatch(const Sum& s, const std::vector<Rational>& target) const
    {
        for (std::size_t k = 0; k < target.size(); ++k)
            if (!equal(s.image[k], target[k], s.image_abs[k]))
                return "sum u a^" + model_.variables[k] + " = " + s.image[k].str() + ", expected " +
                       target[k].str();
        return "";
    }

    FiniteSystem<Rational> stage_rows(int stage) const
    {
        if (model_.finite()) return instantiate_stage<Rational>(model_, schedule_, 1);
        return instantiate_stage<Rational>(model_, schedule_, stage);
    }

    // Empty when x satisfies every row of the stage.
    std::string infeasibility(const std::vector<Rational>& x, int stage) const
    {
        auto sys = stage_rows(stage);
        for (std::size_t i = 0; i < sys.num_rows(); ++i) {
            Rational lhs(0), scale(0);
            for (std::size_t k = 0; k < x.size(); ++k) {
                Rational t = sys.rows[i].coeffs[static_cast<Eigen::Index>(k)] * x[k];
                lhs += t;
                scale += t < 0 ? Rational(-t) : t;
            }
            if (lhs < sys.rows[i].rhs && !equal(lhs, sys.rows[i].rhs, scale))
                return "row " + sys.ids[i].str() + " violated: " + lhs.str() + " < " + sys.rows[i].rhs.str();
        }
        return "";
    }

    Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) const
    {
        Rational s(0);
        for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
        return s;
    }

    std::string check(const json& cert) const
    {
        const std::string type = cert.at("type").get<std::string>();
        if (type == "dual_solution") {
            auto s = sum(cert.at("multipliers"));
            if (auto m = image_mismatch(s, model_.objective); !m.empty()) return m;
            Rational value = json_rational(cert.at("value"));
            if (!equal(s.value, value, s.value_abs))
                return "sum u b = " + s.value.str() + ", stated value " + value.str();
            return "";
        }
        if (type == "infeasibility") {
            auto s = sum(cert.at("multipliers"));
            if (auto m = image_mismatch(s, std::vector<Rational>(model_.variables.size(), Rational(0))); !m.empty())
                return m;
            Rational rhs = json_rational(cert.at("rhs"));
            if (!equal(s.value, rhs, s.value_abs)) return "sum u b = " + s.value.str() + ", stated " + rhs.str();
            if (!(s.value > 0)) return "sum u b is not positive";
            return "";
        }
        if (type == "primal_witness") {
            auto x = vec(cert.at("x"));
            if (auto m = infeasibility(x, cert.at("stage").get<int>()); !m.empty()) return m;
            Rational obj = dot(model_.objective, x);
            Rational stated = json_rational(cert.at("objective"));
            if (!equal(obj, stated, Rational(1) + (obj < 0 ? Rational(-obj) : obj)))
                return "c.x = " + obj.str() + ", stated " + stated.str();
            Rational z = json_rational(cert.at("z"));
            if (obj > z && !equal(obj, z, Rational(1) + (obj < 0 ? Rational(-obj) : obj)))
                return "c.x = " + obj.str() + " exceeds z = " + z.str();
            return "";
        }
        if (type == "feasible_sequence") {
            const auto& entries = cert.at("entries");
            for (std::size_t m = 0; m < entries.size(); ++m) {
                const auto& e = entries[m];
                auto s = sum(e.at("multipliers"));
                auto res = vec(e.at("residual"));
                std::vector<Rational> target(res.size());
                for (std::size_t k = 0; k < res.size(); ++k) target[k] = model_.objective[k] + res[k];
                if (auto msg = image_mismatch(s, target); !msg.empty()) return "entry " + std::to_string(m) + ": " + msg;
                Rational value = json_rational(e.at("value"));
                if (!equal(s.value, value, s.value_abs)) return "entry " + std::to_string(m) + ": value mismatch";
                Rational mc(0);
                for (const auto& r : res) mc = std::max(mc, r < 0 ? Rational(-r) : r);
                if (!equal(mc, json_rational(e.at("max_coeff")), Rational(1)))
                    return "entry " + std::to_string(m) + ": max_coeff mismatch";
            }
            return "";
        }
        if (type == "farkas_exact_cone") {
            auto s = sum(cert.at("multipliers"));
            if (auto m = image_mismatch(s, vec(cert.at("c"))); !m.empty()) return m;
            Rational lambda0 = json_rational(cert.at("lambda0"));
            Rational d = json_rational(cert.at("d"));
            Rational dp = json_rational(cert.at("d_prime"));
            if (lambda0 < 0) return "lambda0 is negative";
            if (!equal(Rational(s.value - lambda0), dp, s.value_abs + (lambda0 < 0 ? Rational(-lambda0) : lambda0)))
                return "sum u b - lambda0 = " + Rational(s.value - lambda0).str() + ", stated " + dp.str();
            if (dp < d && !equal(dp, d, Rational(1))) return "d' is below d";
            return "";
        }
        if (type == "farkas_infeasible_cone") {
            auto s = sum(cert.at("multipliers"));
            if (auto m = image_mismatch(s, std::vector<Rational>(model_.variables.size(), Rational(0))); !m.empty())
                return m;
            if (!equal(s.value, Rational(1), s.value_abs)) return "sum u b = " + s.value.str() + ", expected 1";
            return "";
        }
        if (type == "farkas_closure_sequence") {
            const auto target = vec(cert.at("target"));
            const Rational target_value = json_rational(cert.at("target_value"));
            const auto& entries = cert.at("entries");
            if (entries.empty()) return "empty sequence";
            Rational first_gap, prev_gap;
            for (std::size_t m = 0; m < entries.size(); ++m) {
                const auto& e = entries[m];
                auto s = sum(e.at("multipliers"));
                if (auto msg = image_mismatch(s, vec(e.at("image"))); !msg.empty())
                    return "entry " + std::to_string(m) + ": " + msg;
                if (!equal(s.value, json_rational(e.at("value")), s.value_abs))
                    return "entry " + std::to_string(m) + ": value mismatch";
                if (s.value < target_value && !equal(s.value, target_value, s.value_abs))
                    return "entry " + std::to_string(m) + ": value below the target";
                Rational gap(0);
                for (std::size_t k = 0; k < target.size(); ++k) {
                    Rational t = s.image[k] - target[k];
                    gap = std::max(gap, t < 0 ? Rational(-t) : t);
                }
                if (!equal(gap, json_rational(e.at("gap")), Rational(1)))
                    return "entry " + std::to_string(m) + ": gap mismatch";
                if (m == 0) first_gap = gap;
                else if (gap > prev_gap && !equal(gap, prev_gap, Rational(1)))
                    return "gap increases at entry " + std::to_string(m);
                prev_gap = gap;
            }
            if (!(prev_gap < first_gap) && prev_gap != 0) return "gap does not decrease toward 0";
            return "";
        }
        if (type == "farkas_counterexample") {
            auto x = vec(cert.at("x"));
            if (auto m = infeasibility(x, cert.at("stage").get<int>()); !m.empty()) return m;
            Rational cx = dot(vec(cert.at("c")), x);
            Rational d = json_rational(cert.at("d"));
            if (!(cx < d)) return "c.x = " + cx.str() + " is not below d = " + d.str();
            return "";
        }
        if (type == "derived_row") {
            auto s = sum(cert.at("multipliers"));
            if (auto m = image_mismatch(s, vec(cert.at("coeffs"))); !m.empty()) return m;
            Rational rhs = json_rational(cert.at("rhs"));
            if (!equal(s.value, rhs, s.value_abs)) return "sum u b = " + s.value.str() + ", stated rhs " + rhs.str();
            return "";
        }
        if (type == "lagrangian") {
            std::vector<Rational> lambda;
            for (const auto& v : cert.at("lambda")) lambda.push_back(json_rational(v));
            if (lambda.size() + 1 != model_.variables.size()) return "lambda has the wrong length";
            for (const auto& l : lambda)
                if (l < 0) return "lambda has a negative entry";
            // L(lambda) = max over sample rows of rhs - sum coeff_i lambda_i.
            auto sys = instantiate_stage<Rational>(model_, schedule_, 1);
            bool first = true;
            Rational best(0);
            for (std::size_t i = 0; i < sys.num_rows(); ++i) {
                if (sys.ids[i].kind() != RowId::Kind::FamilyPoint) continue;
                Rational v = sys.rows[i].rhs;
                for (std::size_t p = 0; p < lambda.size(); ++p)
                    v -= sys.rows[i].coeffs[static_cast<Eigen::Index>(p + 1)] * lambda[p];
                if (first || v > best) best = v;
                first = false;
            }
            Rational stated = json_rational(cert.at("value"));
            if (!equal(best, stated, Rational(1) + (best < 0 ? Rational(-best) : best)))
                return "L(lambda) = " + best.str() + ", stated " + stated.str();
            return "";
        }
        return "unknown certificate type '" + type + "'";
    }

private:
    const SILPModel& model_;
    bool exact_;
    GridSchedule schedule_;
    std::map<std::string, const FiniteRow*> finite_;
};

}  // namespace

std::vector<CertificateCheck> certify(const json& report, const ModelFile& file)
{
    if (!report.is_object() || report.value("version", "") != "1")
        throw ParseError("report is not a version 1 JSON object");
    const json& prov = report.at("provenance");
    const bool exact = prov.at("mode").get<std::string>() == "exact";
    GridSchedule schedule;
    apply_schedule_json(prov.at("schedule"), schedule);
    const std::string kind = report.at("kind").get<std::string>();

    SILPModel model;
    if (kind == "convex") {
        if (!file.convex) throw ParseError("report is for a convex program but the model file has none");
        model = build_cp_silp(*file.convex, prov.value("convex_stage", 1));
    } else {
        if (!file.model) throw ParseError("model file has no constraints");
        model = *file.model;
    }
    Replayer replay(model, exact, schedule);

    std::vector<CertificateCheck> out;
    const auto& certs = report.at("certificates");
    for (std::size_t i = 0; i < certs.size(); ++i) {
        CertificateCheck c;
        c.name = certs[i].value("name", "certificate_" + std::to_string(i));
        try {
            c.detail = replay.check(certs[i]);
            c.ok = c.detail.empty();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = e.what();
        }
        out.push_back(std::move(c));
    }
    return out;
}

#define FMSILP_INSTANTIATE(S)                                                                     \
    template ojson analysis_report<S>(const DualityReport<S>&, const ReportContext&);             \
    template ojson farkas_report<S>(const FarkasResult<S>&, const Vector<S>&, const S&,           \
                                    const ReportContext&);                                        \
    template ojson approx_report<S>(const ValueSequence<S>&, const std::vector<RowId>&,           \
                                    const ReportContext&);                                        \
    template ojson convex_report<S>(const ConvexAnalysis<S>&, const ReportContext&);              \
    template ojson elimination_report<S>(const FiniteSystem<S>&, const std::vector<DerivedRow<S>>&, \
                                         const std::vector<std::size_t>&,                         \
                                         const std::vector<std::size_t>&, const ReportContext&);

FMSILP_INSTANTIATE(Rational)
FMSILP_INSTANTIATE(double)

}  // namespace fmsilp
