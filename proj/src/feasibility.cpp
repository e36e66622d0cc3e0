#include "fmsilp/feasibility.hpp"

namespace fmsilp {

template <typename Scalar>
void split_h1_h2(const EliminationResult<Scalar>& result, std::vector<std::size_t>& h1,
                 std::vector<std::size_t>& h2, const Tolerance& tol)
{
    h1.clear();
    h2.clear();
    for (std::size_t i = 0; i < result.rows.size(); ++i)
        (has_dirty_coefficient(result, result.rows[i].row, tol) ? h2 : h1).push_back(i);
}

template <typename Scalar>
Extended<Scalar> h2_ratio_sup(const EliminationResult<Scalar>& result, const Tolerance& tol)
{
    std::vector<std::size_t> h1, h2;
    split_h1_h2(result, h1, h2, tol);
    Extended<Scalar> sup = Extended<Scalar>::neg_inf();
    for (auto i : h2) {
        const auto& r = result.rows[i].row;
        sup = Extended<Scalar>::max(sup, Extended<Scalar>(r.rhs / dirty_weight(result, r)));
    }
    return sup;
}

template <typename Scalar>
XDeltaPoint<Scalar> sign_rule_point(const EliminationResult<Scalar>& result, const Scalar& delta,
                                    const Tolerance& tol)
{
    XDeltaPoint<Scalar> p;
    p.delta = delta;
    p.values = Vector<Scalar>::Zero(static_cast<Eigen::Index>(result.num_variables));
    for (auto k : result.dirty) {
        bool nonnegative = true;
        for (const auto& h : result.rows)
            if (classify(h.row.coeffs[k], h.row.scale(), tol) < 0) nonnegative = false;
        p.values[k] = nonnegative ? delta : Scalar(-delta);
    }
    return p;
}

template <typename Scalar>
XDeltaPoint<Scalar> build_xdelta(const EliminationResult<Scalar>& result, const Scalar& delta,
                                 const Tolerance& tol)
{
    if (delta < 0) throw PreconditionViolated("delta must be nonnegative");
    auto sup = h2_ratio_sup(result, tol);
    if (sup.finite() && delta < sup.value())
        throw PreconditionViolated("delta " + scalar_to_string(delta) + " is below the H2 ratio sup " +
                                   sup.str());
    auto p = sign_rule_point(result, delta, tol);
    if (!result.augmented) {
        std::vector<std::size_t> h1, h2;
        split_h1_h2(result, h1, h2, tol);
        for (auto i : h2) {
            const auto& r = result.rows[i].row;
            Scalar lhs = r.coeffs.dot(p.values);
            if (classify(Scalar(lhs - r.rhs), std::max(r.scale(), abs_value(r.rhs)), tol) < 0)
                throw PreconditionViolated("x(delta) violates an H2 row");
        }
    }
    return p;
}

template <typename Scalar>
FeasibilityVerdict<Scalar> check_feasibility(const EliminationResult<Scalar>& result,
                                             const Tolerance& tol)
{
    if (result.augmented) throw PreconditionViolated("check_feasibility expects a raw system");
    FeasibilityVerdict<Scalar> v;
    std::vector<std::size_t> h1, h2;
    split_h1_h2(result, h1, h2, tol);
    for (auto i : h1) {
        const auto& r = result.rows[i];
        if (classify(r.row.rhs, Scalar(1), tol) > 0) {
            v.status = FeasibilityStatus::Infeasible;
            v.certificate_row = r.id;
            v.certificate = r.multiplier;
            break;
        }
    }
    v.ratio_sup = h2_ratio_sup(result, tol);
    if (v.status == FeasibilityStatus::Infeasible) return v;

    Scalar delta(0);
    if (v.ratio_sup.finite() && v.ratio_sup.value() > 0) delta = v.ratio_sup.value();
    if constexpr (!ScalarTraits<Scalar>::exact) delta += 1;
    auto point = build_xdelta(result, delta, tol);
    v.witness = back_substitute(result, point.values, Scalar(0), tol);
    return v;
}

template <typename Scalar>
BoundednessVerdict check_region_bounded(const EliminationResult<Scalar>& result,
                                        const Tolerance& tol)
{
    bool all_two_sided = true;
    for (const auto& step : result.trace)
        if (step.kind != StepKind::Eliminated) all_two_sided = false;
    if (all_two_sided) return {Boundedness::Bounded, "both sign sets nonempty at every step"};
    std::vector<std::size_t> h1, h2;
    split_h1_h2(result, h1, h2, tol);
    if (!h2.empty()) return {Boundedness::Unbounded, "H2 is nonempty"};
    return {Boundedness::UnboundedOrLineality,
            "H2 is empty but a variable had a zero column; the region contains a line or an "
            "unconstrained direction"};
}

template <typename Scalar>
bool flags_divergence(const std::vector<Extended<Scalar>>& values)
{
    const std::size_t n = values.size();
    if (n >= 1 && values.back().is_pos_inf()) return true;
    if (n < 4) return false;
    for (std::size_t i = n - 4; i < n; ++i)
        if (!values[i].finite()) return false;
    bool steps = true;
    for (std::size_t i = n - 3; i < n; ++i)
        if (values[i].value() - values[i - 1].value() < Scalar(1)) steps = false;
    if (steps) return true;
    if constexpr (!ScalarTraits<Scalar>::exact) {
        for (std::size_t i = n - 3; i < n; ++i) {
            double prev = values[i - 1].value();
            if (!(prev > 0) || values[i].value() < 1.5 * prev) return false;
        }
        return true;
    }
    return false;
}

template <typename Scalar>
StagedFeasibility<Scalar> check_feasibility_staged(const SILPModel& model,
                                                   const GridSchedule& schedule,
                                                   const EliminationOptions& options)
{
    StagedFeasibility<Scalar> out;
    const int stages = model.finite() ? 1 : schedule.stages;
    for (int s = 1; s <= stages; ++s) {
        auto sys = instantiate_stage<Scalar>(model, schedule, s);
        auto result = run_elimination(sys, options);
        out.last = check_feasibility(result, options.tolerance);
        out.ratio_sups.push_back(out.last.ratio_sup);
        out.h1_violated.push_back(out.last.status == FeasibilityStatus::Infeasible);
    }
    out.diverging = flags_divergence(out.ratio_sups);
    bool h1 = false;
    for (bool b : out.h1_violated) h1 = h1 || b;
    if (h1) {
        out.status = FeasibilityStatus::Infeasible;
        out.note = "a stage has an H1 row with positive rhs";
    } else if (out.diverging) {
        out.status = FeasibilityStatus::Infeasible;
        out.note = "infeasible in the limit: H2 ratio sup diverging, last value " +
                   out.ratio_sups.back().str();
    } else {
        out.status = FeasibilityStatus::Feasible;
        out.note = model.finite() ? "feasible" : "every stage feasible, ratio sups not diverging";
    }
    return out;
}

#define FMSILP_INSTANTIATE(S)                                                                     \
    template void split_h1_h2<S>(const EliminationResult<S>&, std::vector<std::size_t>&,          \
                                 std::vector<std::size_t>&, const Tolerance&);                    \
    template Extended<S> h2_ratio_sup<S>(const EliminationResult<S>&, const Tolerance&);          \
    template XDeltaPoint<S> sign_rule_point<S>(const EliminationResult<S>&, const S&,             \
                                               const Tolerance&);                                 \
    template XDeltaPoint<S> build_xdelta<S>(const EliminationResult<S>&, const S&,                \
                                            const Tolerance&);                                    \
    template FeasibilityVerdict<S> check_feasibility<S>(const EliminationResult<S>&,              \
                                                        const Tolerance&);                        \
    template BoundednessVerdict check_region_bounded<S>(const EliminationResult<S>&,              \
                                                        const Tolerance&);                        \
    template bool flags_divergence<S>(const std::vector<Extended<S>>&);                           \
    template StagedFeasibility<S> check_feasibility_staged<S>(                                    \
        const SILPModel&, const GridSchedule&, const EliminationOptions&);

FMSILP_INSTANTIATE(Rational)
FMSILP_INSTANTIATE(double)

}  // namespace fmsilp
