#include "fmsilp/convex.hpp"

#include <algorithm>

namespace fmsilp {

void ConvexProgram::validate() const
{
    if (variables.empty()) throw PreconditionViolated("convex program has no variables");
    const std::size_t m = variables.size();
    if (box) {
        if (box->lo.size() != m || box->hi.size() != m)
            throw PreconditionViolated("box bounds do not match the variable count");
        if (box->points < 1) throw PreconditionViolated("box grid needs at least one point per axis");
        for (std::size_t j = 0; j < m; ++j)
            if (box->hi[j] < box->lo[j]) throw EmptyInterval("box axis " + variables[j] + " is empty");
    } else {
        if (points.empty()) throw PreconditionViolated("sample set is empty");
        for (const auto& p : points)
            if (p.size() != m) throw PreconditionViolated("sample point has the wrong dimension");
    }
}

std::vector<std::vector<Rational>> sample_points(const ConvexProgram& cp, int stage)
{
    cp.validate();
    if (!cp.box) return cp.points;
    const auto& box = *cp.box;
    const std::size_t m = cp.variables.size();
    const long per_axis = box.points == 1 ? 1 : (box.points - 1) * (1L << (stage - 1)) + 1;
    std::vector<std::vector<Rational>> axes(m);
    for (std::size_t j = 0; j < m; ++j) {
        if (per_axis == 1 || box.lo[j] == box.hi[j]) {
            axes[j].push_back(box.lo[j]);
            continue;
        }
        Rational step = (box.hi[j] - box.lo[j]) / (per_axis - 1);
        for (long i = 0; i < per_axis; ++i) axes[j].push_back(box.lo[j] + step * i);
    }
    // Last axis varies fastest.
    std::vector<std::vector<Rational>> out;
    std::vector<std::size_t> idx(m, 0);
    while (true) {
        std::vector<Rational> p(m);
        for (std::size_t j = 0; j < m; ++j) p[j] = axes[j][idx[j]];
        out.push_back(std::move(p));
        std::size_t j = m;
        while (j > 0) {
            --j;
            if (++idx[j] < axes[j].size()) break;
            idx[j] = 0;
            if (j == 0) return out;
        }
    }
}

namespace {

Rational eval_at(const Expression& e, const std::vector<Rational>& x)
{
    return e.evaluate<Rational>(std::span<const Rational>(x));
}

}  // namespace

SILPModel build_cp_silp(const ConvexProgram& cp, int stage)
{
    auto samples = sample_points(cp, stage);
    const std::size_t p = cp.g.size();
    std::vector<Rational> fvals;
    for (const auto& x : samples) fvals.push_back(eval_at(cp.f, x));
    Rational B = cp.cap ? *cp.cap : Rational(1 + *std::max_element(fvals.begin(), fvals.end()));

    SILPModel model;
    model.variables.push_back("sigma");
    for (std::size_t i = 1; i <= p; ++i) model.variables.push_back("lambda" + std::to_string(i));
    model.objective.assign(p + 1, Rational(0));
    model.objective[0] = 1;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        FiniteRow row;
        row.id = RowId::family_point("omega", samples[s]);
        row.coeffs.push_back(1);
        for (const auto& g : cp.g) row.coeffs.push_back(-eval_at(g, samples[s]));
        row.rhs = std::min(fvals[s], B);
        model.rows.push_back(std::move(row));
    }
    for (std::size_t i = 1; i <= p; ++i) {
        FiniteRow row;
        row.id = RowId::atom("lambda" + std::to_string(i) + "_nonneg");
        row.coeffs.assign(p + 1, Rational(0));
        row.coeffs[i] = 1;
        model.rows.push_back(std::move(row));
    }
    return model;
}

template <typename Scalar>
std::optional<std::vector<Rational>> slater_scan(const ConvexProgram& cp, int stage)
{
    for (const auto& x : sample_points(cp, stage)) {
        bool strict = true;
        for (const auto& g : cp.g) {
            Rational v = eval_at(g, x);
            if constexpr (ScalarTraits<Scalar>::exact)
                strict = strict && v > 0;
            else
                strict = strict && v.template convert_to<double>() > 1e-6;
        }
        if (strict) return x;
    }
    return std::nullopt;
}

template <typename Scalar>
LagrangianSolution<Scalar> recover_lagrangian(const ConvexAnalysis<Scalar>& a)
{
    const auto& report = a.report;
    if (!report.dual_certificate) throw DualInfeasible("no dual certificate for the CP-SILP");
    if (!report.primal_witness) throw PreconditionViolated("no primal witness for the CP-SILP");
    const std::size_t p = a.program.g.size();
    const std::size_t m = a.program.variables.size();
    const auto& w = *report.primal_witness;
    LagrangianSolution<Scalar> sol;
    sol.sigma = w.x[0];
    for (std::size_t i = 1; i <= p; ++i) sol.lambda.push_back(w.x[static_cast<Eigen::Index>(i)]);

    // L(lambda) over the same rows the SILP sees (f capped at B).
    const auto& sys = report.last().system;
    bool first = true;
    for (std::size_t r = 0; r < a.samples.size(); ++r) {
        const auto& row = sys.rows[r];
        Scalar v = row.rhs;
        for (std::size_t i = 1; i <= p; ++i) v -= row.coeffs[static_cast<Eigen::Index>(i)] * sol.lambda[i - 1];
        if (first || v > sol.value) sol.value = v;
        first = false;
    }

    sol.x_bar = Vector<Scalar>::Zero(static_cast<Eigen::Index>(m));
    for (const auto& [row, u] : report.dual_certificate->v.entries()) {
        if (row >= a.samples.size()) continue;
        sol.weight_sum += u;
        for (std::size_t j = 0; j < m; ++j)
            sol.x_bar[static_cast<Eigen::Index>(j)] += u * ScalarTraits<Scalar>::from_rational(a.samples[row][j]);
    }
    sol.x_bar_feasible = true;
    std::vector<Rational> xr;
    for (std::size_t j = 0; j < m; ++j) xr.push_back(ScalarTraits<Scalar>::to_rational(sol.x_bar[static_cast<Eigen::Index>(j)]));
    for (const auto& g : a.program.g) {
        double v = eval_at(g, xr).template convert_to<double>();
        if (v < -1e-9) sol.x_bar_feasible = false;
    }
    return sol;
}

template <typename Scalar>
ConvexAnalysis<Scalar> analyze_convex(const ConvexProgram& cp, int stage,
                                      const AnalysisOptions& options)
{
    ConvexAnalysis<Scalar> a;
    a.program = cp;
    a.stage = stage;
    a.samples = sample_points(cp, stage);
    a.model = build_cp_silp(cp, stage);
    a.report = analyze<Scalar>(a.model, GridSchedule{}, options);
    a.slater = slater_scan<Scalar>(cp, stage);

    a.max_feasible_f = Extended<Scalar>::neg_inf();
    for (const auto& x : a.samples) {
        bool feasible = true;
        for (const auto& g : cp.g) feasible = feasible && eval_at(g, x) >= 0;
        if (feasible)
            a.max_feasible_f = Extended<Scalar>::max(
                a.max_feasible_f, Extended<Scalar>(ScalarTraits<Scalar>::from_rational(eval_at(cp.f, x))));
    }

    const auto& v = a.report.verdicts;
    if (v.primal_value < v.dual_value) a.check_failures.push_back("weak duality violated");
    if (v.dual_value < a.max_feasible_f)
        a.check_failures.push_back("dual value below the best feasible sample");
    if (a.slater && v.primal_feasible.answer == Answer::Yes) {
        if (v.tidy.answer != Answer::Yes) a.check_failures.push_back("Slater point found but not tidy");
        if (v.zero_gap.answer != Answer::Yes) a.check_failures.push_back("Slater point found but no zero gap");
        if (v.dual_solvable.answer != Answer::Yes)
            a.check_failures.push_back("Slater point found but dual not solvable");
    }
    if (!a.slater) a.notes.push_back("no Slater point among the samples");
    if (a.report.dual_certificate && a.report.primal_witness) {
        a.lagrangian = recover_lagrangian(a);
        if (!(a.lagrangian->weight_sum == Scalar(1)) &&
            abs_value(Scalar(a.lagrangian->weight_sum - Scalar(1))) > Scalar(1e-9))
            a.check_failures.push_back("sample weights do not sum to 1");
    }
    return a;
}

#define FMSILP_INSTANTIATE(S)                                                                     \
    template std::optional<std::vector<Rational>> slater_scan<S>(const ConvexProgram&, int);      \
    template LagrangianSolution<S> recover_lagrangian<S>(const ConvexAnalysis<S>&);               \
    template ConvexAnalysis<S> analyze_convex<S>(const ConvexProgram&, int, const AnalysisOptions&);

FMSILP_INSTANTIATE(Rational)
FMSILP_INSTANTIATE(double)

}  // namespace fmsilp
