#include "fmsilp/duality.hpp"

#include <algorithm>

namespace fmsilp {

std::string to_string(Answer a)
{
    switch (a) {
    case Answer::Yes: return "yes";
    case Answer::No: return "no";
    default: return "unknown";
    }
}

std::string to_string(Confidence c)
{
    switch (c) {
    case Confidence::Exact: return "exact";
    case Confidence::Converged: return "converged";
    default: return "inconclusive";
    }
}

namespace {

Confidence worse(Confidence a, Confidence b)
{
    return static_cast<int>(a) > static_cast<int>(b) ? a : b;
}

// Drops the objective entry (row 0) and renumbers rows of the raw stage system.
template <typename Scalar>
Multiplier<Scalar> restrict_to_raw(const Multiplier<Scalar>& u)
{
    std::vector<typename Multiplier<Scalar>::Entry> entries;
    for (const auto& [row, value] : u.entries())
        if (row > 0) entries.push_back({row - 1, value});
    return Multiplier<Scalar>::from_entries(std::move(entries));
}

template <typename Scalar>
bool approx_equal(const Scalar& a, const Scalar& b, const Scalar& tol)
{
    Scalar d = a - b;
    return abs_value(d) <= tol;
}

template <typename Scalar>
bool scalars_match(const Scalar& a, const Scalar& b)
{
    if constexpr (ScalarTraits<Scalar>::exact) {
        return a == b;
    } else {
        return std::fabs(a - b) <= 1e-8 * std::max({1.0, std::fabs(a), std::fabs(b)});
    }
}

}  // namespace

template <typename Scalar>
Extended<Scalar> StageDiagnostics<Scalar>::omega(const Scalar& delta) const
{
    Extended<Scalar> best = Extended<Scalar>::neg_inf();
    for (const auto& t : i4) best = Extended<Scalar>::max(best, Extended<Scalar>(t.rhs - delta * t.weight));
    return best;
}

template <typename Scalar>
std::optional<std::size_t> StageDiagnostics<Scalar>::omega_argmax(
    const Scalar& delta, const std::vector<DerivedRow<Scalar>>& rows) const
{
    std::optional<std::size_t> arg;
    Scalar best(0);
    for (const auto& t : i4) {
        Scalar v = t.rhs - delta * t.weight;
        if (!arg || v > best || (v == best && rows[t.index].id < rows[*arg].id)) {
            arg = t.index;
            best = v;
        }
    }
    return arg;
}

template <typename Scalar>
FiniteSystem<Scalar> build_augmented(const FiniteSystem<Scalar>& stage, const Vector<Scalar>& c)
{
    if (stage.augmented) throw PreconditionViolated("system is already augmented");
    if (static_cast<std::size_t>(c.size()) != stage.num_variables())
        throw PreconditionViolated("objective length does not match the variable count");
    FiniteSystem<Scalar> aug;
    aug.variables = stage.variables;
    aug.augmented = true;
    LinearRow<Scalar> obj;
    obj.coeffs = -c;
    obj.z_coeff = Scalar(1);
    obj.rhs = Scalar(0);
    aug.add_row(RowId::objective(), std::move(obj));
    for (std::size_t i = 0; i < stage.num_rows(); ++i) {
        LinearRow<Scalar> r = stage.rows[i];
        r.z_coeff = Scalar(0);
        aug.add_row(stage.ids[i], std::move(r));
    }
    return aug;
}

template <typename Scalar>
IndexPartition partition_indices(const EliminationResult<Scalar>& result, const Tolerance& tol)
{
    if (!result.augmented) throw PreconditionViolated("partition needs an augmented elimination");
    IndexPartition p;
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto& r = result.rows[i].row;
        bool z = classify(r.z_coeff, r.scale(), tol) != 0;
        bool d = has_dirty_coefficient(result, r, tol);
        (z ? (d ? p.i4 : p.i3) : (d ? p.i2 : p.i1)).push_back(i);
    }
    return p;
}

template <typename Scalar>
StageDiagnostics<Scalar> compute_diagnostics(const EliminationResult<Scalar>& result,
                                             const IndexPartition& partition,
                                             const std::vector<Scalar>& deltas)
{
    StageDiagnostics<Scalar> d;
    auto argmax = [&](const std::vector<std::size_t>& set, auto value, Extended<Scalar>& best,
                      std::optional<std::size_t>& arg) {
        best = Extended<Scalar>::neg_inf();
        for (auto i : set) {
            Scalar v = value(i);
            Extended<Scalar> ev(v);
            if (ev > best || (best.finite() && v == best.value() &&
                              result.rows[i].id < result.rows[*arg].id)) {
                best = ev;
                arg = i;
            }
        }
    };
    argmax(partition.i3, [&](std::size_t i) { return result.rows[i].row.rhs; }, d.S, d.s_argmax);
    argmax(partition.i1, [&](std::size_t i) { return result.rows[i].row.rhs; }, d.i1_max,
           d.i1_argmax);
    argmax(
        partition.i2,
        [&](std::size_t i) {
            const auto& r = result.rows[i].row;
            return Scalar(r.rhs / dirty_weight(result, r));
        },
        d.delta2, d.delta2_argmax);
    for (auto i : partition.i4) {
        const auto& r = result.rows[i].row;
        d.i4.push_back({i, r.rhs, dirty_weight(result, r)});
    }
    for (const auto& delta : deltas) d.omega_table.push_back({delta, d.omega(delta)});
    return d;
}

template <typename Scalar>
StageAnalysis<Scalar> analyze_stage(const FiniteSystem<Scalar>& stage, const Vector<Scalar>& c,
                                    int stage_number, const std::vector<Scalar>& deltas,
                                    const AnalysisOptions& options)
{
    StageAnalysis<Scalar> a;
    a.stage = stage_number;
    a.system = stage;
    a.augmented = build_augmented(stage, c);
    a.result = run_elimination(a.augmented, options.elimination);
    a.partition = partition_indices(a.result, options.elimination.tolerance);
    a.diag = compute_diagnostics(a.result, a.partition, deltas);
    a.tidy = a.result.dirty.empty();
    return a;
}

template <typename Scalar>
LEstimate<Scalar> estimate_L(const std::vector<StageAnalysis<Scalar>>& stages,
                             const std::vector<Scalar>& deltas, bool staged,
                             const Scalar& tolerance)
{
    LEstimate<Scalar> L;
    L.tolerance = tolerance;
    L.value = L.lower = L.upper = Extended<Scalar>::neg_inf();
    if (!staged || stages.back().diag.i4.empty() || deltas.empty()) {
        L.status = LStatus::ExactMinusInfinity;
        return L;
    }
    const Scalar dmax = deltas.back();
    const auto& last = stages.back().diag;
    Extended<Scalar> w_last = last.omega(dmax);
    Extended<Scalar> w_half = last.omega(Scalar(dmax / 2));
    L.value = w_last;
    L.lower = w_last;
    L.upper = w_half;
    bool ok = stages.size() >= 2 && w_last.finite() && w_half.finite();
    if (ok) {
        Extended<Scalar> w_prev = stages[stages.size() - 2].diag.omega(dmax);
        ok = w_prev.finite() && approx_equal(w_last.value(), w_prev.value(), tolerance) &&
             approx_equal(w_last.value(), w_half.value(), tolerance);
    }
    L.status = ok ? LStatus::Converged : LStatus::Inconclusive;
    return L;
}

template <typename Scalar>
Verdicts<Scalar> render_verdicts(const DualityReport<Scalar>& report)
{
    Verdicts<Scalar> v;
    const auto& last = report.last();
    const Scalar tol = report.tolerance();
    const Confidence staged_conf = report.staged ? Confidence::Converged : Confidence::Exact;
    const Tolerance ztol{};

    std::optional<int> i1_stage;
    bool dual_feasible = false;
    for (const auto& st : report.stages) {
        if (!i1_stage && st.diag.i1_max.finite() &&
            classify(st.diag.i1_max.value(), Scalar(1), ztol) > 0)
            i1_stage = st.stage;
        if (!st.partition.i3.empty()) dual_feasible = true;
    }
    const Extended<Scalar> S = last.diag.S;
    const auto& L = report.L;

    // Primal feasibility.
    if (i1_stage) {
        v.primal_feasible = {Answer::No, Confidence::Exact,
                             "stage " + std::to_string(*i1_stage) +
                                 " has an I1 row with positive rhs"};
    } else if (report.staged && (report.s_diverging || report.delta2_diverging)) {
        v.primal_feasible = {Answer::No, Confidence::Inconclusive,
                             std::string("infeasible in the limit: ") +
                                 (report.s_diverging ? "S_s" : "delta2_s") +
                                 " diverging across stages (heuristic)"};
    } else {
        v.primal_feasible = {Answer::Yes, staged_conf,
                             report.staged ? "every stage feasible, no diverging sequence" : ""};
    }
    const bool pf = v.primal_feasible.answer == Answer::Yes;

    // Primal value.
    if (!pf) {
        v.primal_value = Extended<Scalar>::pos_inf();
        v.primal_value_confidence = v.primal_feasible.confidence;
    } else if (report.s_dominates_i4 || L.status == LStatus::ExactMinusInfinity) {
        v.primal_value = S;
        v.primal_value_confidence = staged_conf;
    } else if (L.status == LStatus::Converged) {
        v.primal_value = Extended<Scalar>::max(S, L.value);
        v.primal_value_confidence = Confidence::Converged;
    } else {
        v.primal_value = Extended<Scalar>::max(S, L.lower);
        v.primal_value_confidence = Confidence::Inconclusive;
    }

    // Primal boundedness and solvability.
    if (!pf) {
        v.primal_bounded = {Answer::Unknown, v.primal_feasible.confidence,
                            "undefined for an infeasible primal"};
        v.primal_solvable = {Answer::No, v.primal_feasible.confidence, "primal infeasible"};
    } else if (!S.is_neg_inf()) {
        v.primal_bounded = {Answer::Yes, staged_conf, "I3 is nonempty"};
    } else if (L.status == LStatus::ExactMinusInfinity) {
        v.primal_bounded = {Answer::No, staged_conf, "I3 is empty and L = -inf"};
    } else if (L.status == LStatus::Converged && L.value.finite()) {
        v.primal_bounded = {Answer::Yes, Confidence::Converged, "I3 is empty, L finite"};
    } else {
        v.primal_bounded = {Answer::Unknown, Confidence::Inconclusive, "L estimate inconclusive"};
    }
    if (pf) {
        if (v.primal_value.is_neg_inf() && v.primal_bounded.answer == Answer::No) {
            v.primal_solvable = {Answer::No, v.primal_bounded.confidence, "primal unbounded"};
        } else if (S.finite() && L.status == LStatus::ExactMinusInfinity) {
            v.primal_solvable = {Answer::Yes, staged_conf, "S > L = -inf"};
        } else if (S.finite() && L.status == LStatus::Converged && L.value.finite() &&
                   S.value() - L.value.value() > tol) {
            v.primal_solvable = {Answer::Yes, Confidence::Converged, "S > L"};
        } else if (L.status == LStatus::Converged && S.finite() && L.value.finite() &&
                   approx_equal(S.value(), L.value.value(), tol)) {
            v.primal_solvable = {Answer::Unknown, Confidence::Converged,
                                 "S = L within tolerance; both outcomes are possible"};
        } else {
            v.primal_solvable = {Answer::Unknown, Confidence::Inconclusive,
                                 "S > L not established"};
        }
    }

    // Dual side.
    const Confidence dual_no_conf = report.staged ? Confidence::Inconclusive : Confidence::Exact;
    if (dual_feasible) {
        v.dual_feasible = {Answer::Yes, Confidence::Exact, "I3 is nonempty (certificate attached)"};
    } else {
        v.dual_feasible = {Answer::No, dual_no_conf, "I3 is empty"};
    }
    bool dual_unbounded = false;
    if (!dual_feasible) {
        v.dual_bounded = {Answer::Unknown, dual_no_conf, "undefined for an infeasible dual"};
    } else if (i1_stage) {
        dual_unbounded = true;
        v.dual_bounded = {Answer::No, Confidence::Exact,
                          "I1 row with positive rhs is a dual recession direction"};
    } else if (report.staged && report.s_diverging) {
        dual_unbounded = true;
        v.dual_bounded = {Answer::No, Confidence::Inconclusive, "S_s diverging across stages"};
    } else {
        v.dual_bounded = {Answer::Yes, staged_conf, "rhs <= 0 on I1 and S finite"};
    }
    if (!dual_feasible) {
        v.dual_value = Extended<Scalar>::neg_inf();
        v.dual_value_confidence = dual_no_conf;
        v.dual_solvable = {Answer::No, dual_no_conf, "dual infeasible"};
    } else if (dual_unbounded) {
        v.dual_value = Extended<Scalar>::pos_inf();
        v.dual_value_confidence = v.dual_bounded.confidence;
        v.dual_solvable = {Answer::No, v.dual_bounded.confidence, "dual unbounded"};
    } else {
        v.dual_value = S;
        v.dual_value_confidence = staged_conf;
        if (!report.staged) {
            v.dual_solvable = {Answer::Yes, Confidence::Exact, "S attained on I3"};
        } else {
            bool stable = report.stages.size() >= 2;
            if (stable) {
                const auto& prev = report.stages[report.stages.size() - 2].diag.S;
                stable = prev.finite() && S.finite() && scalars_match(prev.value(), S.value());
            }
            if (stable)
                v.dual_solvable = {Answer::Yes, Confidence::Converged,
                                   "S_s stable over the last stages and attained"};
            else
                v.dual_solvable = {Answer::Unknown, Confidence::Inconclusive, "S_s still moving"};
        }
    }

    // Zero gap and strong duality.
    if (!pf) {
        v.zero_gap = {Answer::No, v.primal_feasible.confidence, "primal infeasible"};
    } else if (report.s_dominates_i4 || L.status == LStatus::ExactMinusInfinity) {
        v.zero_gap = {Answer::Yes, staged_conf,
                      report.s_dominates_i4 && L.status != LStatus::ExactMinusInfinity
                          ? "S >= every I4 rhs, so S >= L"
                          : "S >= L = -inf"};
    } else if (L.status == LStatus::Converged) {
        bool ok = S.finite() ? S.value() >= L.value.value() - tol : L.value.is_neg_inf();
        v.zero_gap = ok ? Verdict{Answer::Yes, Confidence::Converged, "S >= L within tolerance"}
                        : Verdict{Answer::No, Confidence::Converged, "S < L"};
    } else {
        v.zero_gap = {Answer::Unknown, Confidence::Inconclusive, "L estimate inconclusive"};
    }
    if (v.zero_gap.answer == Answer::Yes && v.primal_solvable.answer == Answer::Yes &&
        v.dual_solvable.answer == Answer::Yes) {
        v.strong_duality = {Answer::Yes,
                            worse(v.zero_gap.confidence,
                                  worse(v.primal_solvable.confidence, v.dual_solvable.confidence)),
                            ""};
    } else if (v.zero_gap.answer == Answer::No || v.primal_solvable.answer == Answer::No ||
               v.dual_solvable.answer == Answer::No) {
        v.strong_duality = {Answer::No, Confidence::Exact, "a required component fails"};
        for (const Verdict* c : {&v.zero_gap, &v.primal_solvable, &v.dual_solvable})
            if (c->answer == Answer::No) v.strong_duality.confidence = c->confidence;
    } else {
        v.strong_duality = {Answer::Unknown, Confidence::Inconclusive, "a component is unknown"};
    }
    v.tidy = last.tidy ? Verdict{Answer::Yes, staged_conf, "only z survives elimination"}
                       : Verdict{Answer::No, staged_conf,
                                 std::to_string(last.result.dirty.size()) + " dirty variable(s)"};
    return v;
}

template <typename Scalar>
DualCertificate<Scalar> extract_dual_certificate(const StageAnalysis<Scalar>& stage)
{
    if (!stage.diag.s_argmax) throw DualInfeasible("I3 is empty");
    const auto& row = stage.result.rows[*stage.diag.s_argmax];
    DualCertificate<Scalar> c;
    c.stage = stage.stage;
    c.row_id = row.id;
    c.v = restrict_to_raw(row.multiplier);
    c.value = row.row.rhs;
    return c;
}

template <typename Scalar>
PrimalWitness<Scalar> lift_primal_point(const StageAnalysis<Scalar>& stage,
                                        const std::optional<Scalar>& target, const Tolerance& tol)
{
    const auto& d = stage.diag;
    Scalar delta(0);
    if (d.delta2.finite() && d.delta2.value() > 0) delta = d.delta2.value();
    std::optional<Scalar> zt = target;
    if (!zt && d.S.finite()) zt = d.S.value();
    if (zt)
        for (const auto& t : d.i4) {
            Scalar need = (t.rhs - *zt) / t.weight;
            if (need > delta) delta = need;
        }
    if constexpr (!ScalarTraits<Scalar>::exact) delta += 1;
    Extended<Scalar> zb = Extended<Scalar>::max(d.S, d.omega(delta));
    Scalar z = zb.finite() ? zb.value() : (zt ? *zt : Scalar(0));

    auto point = sign_rule_point(stage.result, delta, tol);
    PrimalWitness<Scalar> w;
    w.stage = stage.stage;
    w.delta = delta;
    w.z = z;
    w.x = back_substitute(stage.result, point.values, z, tol);
    Vector<Scalar> c = -stage.augmented.rows[0].coeffs;
    w.objective = c.dot(w.x);
    if (!stage.system.satisfied_by(w.x, Scalar(0), tol))
        throw PreconditionViolated("lifted point violates a stage row");
    return w;
}

template <typename Scalar>
std::vector<SequenceEntry<Scalar>> extract_feasible_sequence(const DualityReport<Scalar>& report)
{
    if (report.L.status != LStatus::Converged || !report.L.value.finite())
        throw PreconditionViolated("feasible sequence needs a converged finite L estimate");
    std::vector<SequenceEntry<Scalar>> seq;
    for (const auto& st : report.stages) {
        for (const auto& delta : report.deltas) {
            auto idx = st.diag.omega_argmax(delta, st.result.rows);
            if (!idx) continue;
            const auto& row = st.result.rows[*idx];
            SequenceEntry<Scalar> e;
            e.stage = st.stage;
            e.delta = delta;
            e.row_id = row.id;
            e.v = restrict_to_raw(row.multiplier);
            e.value = row.row.rhs;
            e.residual = row.row.coeffs;
            e.max_coeff = Scalar(0);
            for (auto k : st.result.dirty) e.max_coeff = std::max(e.max_coeff, abs_value(row.row.coeffs[k]));
            seq.push_back(std::move(e));
        }
    }
    return seq;
}

template <typename Scalar>
RegularDuality<Scalar> regular_duality_report(const DualityReport<Scalar>& report)
{
    RegularDuality<Scalar> r;
    r.z_star = report.verdicts.primal_value;
    if (report.verdicts.zero_gap.answer == Answer::Yes && report.dual_certificate &&
        !report.verdicts.dual_value.is_pos_inf()) {
        r.certificate = report.dual_certificate;
    } else if (report.L.status == LStatus::Converged && report.L.value.finite()) {
        r.sequence = extract_feasible_sequence(report);
    }
    return r;
}

template <typename Scalar>
bool verify_dual_certificate(const FiniteSystem<Scalar>& system, const Vector<Scalar>& c,
                             const DualCertificate<Scalar>& cert, std::string* why)
{
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    for (const auto& [row, value] : cert.v.entries())
        if (row >= system.num_rows() || !(value > 0)) return fail("multiplier entry out of range");
    Vector<Scalar> img = system.image(cert.v);
    for (Eigen::Index k = 0; k < c.size(); ++k)
        if (!scalars_match(img[k], c[k]))
            return fail("sum of a^" + std::to_string(k + 1) + " v = " + scalar_to_string(img[k]) +
                        " but c = " + scalar_to_string(c[k]));
    Scalar value = dot(system.rhs_column(), cert.v);
    if (!scalars_match(value, cert.value))
        return fail("<b, v> = " + scalar_to_string(value) + " but the stated value is " +
                    scalar_to_string(cert.value));
    return true;
}

namespace {

template <typename Scalar>
void finish_report(DualityReport<Scalar>& report, const AnalysisOptions& options)
{
    const Tolerance& tol = options.elimination.tolerance;
    Scalar gap;
    if constexpr (ScalarTraits<Scalar>::exact)
        gap = options.exact_gap;
    else
        gap = options.float_gap;

    for (const auto& st : report.stages) {
        const auto& p = st.partition;
        if (p.i3.empty() && p.i4.empty())
            report.invariant_violations.push_back("stage " + std::to_string(st.stage) +
                                                  ": I3 and I4 both empty");
        for (const auto* set : {&p.i1, &p.i2, &p.i3, &p.i4}) {
            Scalar expect = (set == &p.i3 || set == &p.i4) ? Scalar(1) : Scalar(0);
            for (auto i : *set)
                if (!scalars_match(st.result.rows[i].multiplier.value(0), expect))
                    report.invariant_violations.push_back(
                        "stage " + std::to_string(st.stage) + ": objective multiplier of row " +
                        std::to_string(st.result.rows[i].id) + " is not " +
                        scalar_to_string(expect));
        }
        for (std::size_t m = 1; m < st.diag.omega_table.size(); ++m)
            if (st.diag.omega_table[m].second > st.diag.omega_table[m - 1].second)
                report.invariant_violations.push_back("stage " + std::to_string(st.stage) +
                                                      ": omega increases in delta");
    }
    for (std::size_t s = 1; s < report.stages.size(); ++s) {
        const auto& a = report.stages[s - 1].diag;
        const auto& b = report.stages[s].diag;
        if (b.S < a.S)
            report.invariant_violations.push_back("S decreases at stage " +
                                                  std::to_string(report.stages[s].stage));
        for (std::size_t m = 0; m < a.omega_table.size(); ++m) {
            const auto& wa = a.omega_table[m].second;
            const auto& wb = b.omega_table[m].second;
            bool drop = wb < wa;
            if constexpr (!ScalarTraits<Scalar>::exact)
                drop = drop && !(wa.finite() && wb.finite() &&
                                 scalars_match(wa.value(), wb.value()));
            if (drop)
                report.invariant_violations.push_back(
                    "omega(" + scalar_to_string(a.omega_table[m].first) + ") decreases at stage " +
                    std::to_string(report.stages[s].stage));
        }
    }

    std::vector<Extended<Scalar>> s_seq, d2_seq;
    for (const auto& st : report.stages) {
        s_seq.push_back(st.diag.S);
        d2_seq.push_back(st.diag.delta2);
    }
    if (report.staged) {
        report.s_diverging = flags_divergence(s_seq);
        report.delta2_diverging = flags_divergence(d2_seq);
    }
    report.s_dominates_i4 = true;
    for (const auto& st : report.stages) {
        if (st.diag.i4.empty()) continue;
        Extended<Scalar> top = st.diag.omega(Scalar(0));
        if (!(st.diag.S >= top)) report.s_dominates_i4 = false;
    }

    report.L = estimate_L(report.stages, report.deltas, report.staged, gap);
    report.verdicts = render_verdicts(report);

    const auto& last = report.last();
    if (!last.partition.i3.empty()) report.dual_certificate = extract_dual_certificate(last);
    for (const auto& st : report.stages) {
        if (st.diag.i1_argmax && classify(st.diag.i1_max.value(), Scalar(1), tol) > 0) {
            const auto& row = st.result.rows[*st.diag.i1_argmax];
            report.infeasibility =
                InfeasibilityCertificate<Scalar>{st.stage, row.id, restrict_to_raw(row.multiplier),
                                                 row.row.rhs};
            break;
        }
    }
    if (!report.infeasibility && !(last.diag.i1_max.finite() &&
                                   classify(last.diag.i1_max.value(), Scalar(1), tol) > 0))
        report.primal_witness = lift_primal_point(last, std::optional<Scalar>{}, tol);

    if (report.staged)
        report.notes.push_back(
            "staged verdicts describe the sampled grids; divergence flags are heuristic");
    if (report.verdicts.primal_solvable.answer == Answer::Unknown &&
        report.verdicts.zero_gap.answer == Answer::Yes)
        report.notes.push_back(
            "primal solvability is not decided when S = L; a lifted stage witness is attached");
}

template <typename Scalar>
std::vector<Scalar> convert_deltas(const std::vector<Rational>& deltas)
{
    std::vector<Scalar> out;
    for (const auto& d : deltas) out.push_back(ScalarTraits<Scalar>::from_rational(d));
    return out;
}

}  // namespace

template <typename Scalar>
DualityReport<Scalar> analyze(const SILPModel& model, const GridSchedule& schedule,
                              const AnalysisOptions& options)
{
    model.validate();
    schedule.validate();
    DualityReport<Scalar> report;
    report.staged = !model.finite();
    report.objective = objective_vector<Scalar>(model);
    report.deltas = convert_deltas<Scalar>(schedule.deltas);
    const int stages = report.staged ? schedule.stages : 1;
    for (int s = 1; s <= stages; ++s)
        report.stages.push_back(analyze_stage(instantiate_stage<Scalar>(model, schedule, s),
                                              report.objective, s, report.deltas, options));
    finish_report(report, options);
    return report;
}

template <typename Scalar>
DualityReport<Scalar> analyze_finite(const FiniteSystem<Scalar>& system, const Vector<Scalar>& c,
                                     const std::vector<Scalar>& deltas,
                                     const AnalysisOptions& options)
{
    DualityReport<Scalar> report;
    report.staged = false;
    report.objective = c;
    report.deltas = deltas;
    report.stages.push_back(analyze_stage(system, c, 1, deltas, options));
    finish_report(report, options);
    return report;
}

#define FMSILP_INSTANTIATE(S)                                                                     \
    template struct StageDiagnostics<S>;                                                          \
    template FiniteSystem<S> build_augmented<S>(const FiniteSystem<S>&, const Vector<S>&);        \
    template IndexPartition partition_indices<S>(const EliminationResult<S>&, const Tolerance&);  \
    template StageDiagnostics<S> compute_diagnostics<S>(const EliminationResult<S>&,              \
                                                        const IndexPartition&,                    \
                                                        const std::vector<S>&);                   \
    template StageAnalysis<S> analyze_stage<S>(const FiniteSystem<S>&, const Vector<S>&, int,     \
                                               const std::vector<S>&, const AnalysisOptions&);    \
    template LEstimate<S> estimate_L<S>(const std::vector<StageAnalysis<S>>&,                     \
                                        const std::vector<S>&, bool, const S&);                   \
    template Verdicts<S> render_verdicts<S>(const DualityReport<S>&);                             \
    template DualCertificate<S> extract_dual_certificate<S>(const StageAnalysis<S>&);             \
    template PrimalWitness<S> lift_primal_point<S>(const StageAnalysis<S>&,                       \
                                                   const std::optional<S>&, const Tolerance&);    \
    template std::vector<SequenceEntry<S>> extract_feasible_sequence<S>(                          \
        const DualityReport<S>&);                                                                 \
    template RegularDuality<S> regular_duality_report<S>(const DualityReport<S>&);                \
    template bool verify_dual_certificate<S>(const FiniteSystem<S>&, const Vector<S>&,            \
                                             const DualCertificate<S>&, std::string*);            \
    template DualityReport<S> analyze<S>(const SILPModel&, const GridSchedule&,                   \
                                         const AnalysisOptions&);                                 \
    template DualityReport<S> analyze_finite<S>(const FiniteSystem<S>&, const Vector<S>&,         \
                                                const std::vector<S>&, const AnalysisOptions&);

FMSILP_INSTANTIATE(Rational)
FMSILP_INSTANTIATE(double)

}  // namespace fmsilp
