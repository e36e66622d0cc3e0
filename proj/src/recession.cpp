#include "fmsilp/recession.hpp"

#include "fmsilp/feasibility.hpp"

namespace fmsilp {

std::string to_string(KNCheck k)
{
    switch (k) {
    case KNCheck::Holds: return "holds";
    case KNCheck::Fails: return "fails";
    default: return "undecided";
    }
}

template <typename Scalar>
FiniteSystem<Scalar> build_recession_system(const FiniteSystem<Scalar>& stage,
                                            const Vector<Scalar>& c)
{
    if (static_cast<std::size_t>(c.size()) != stage.num_variables())
        throw PreconditionViolated("objective length does not match the variable count");
    FiniteSystem<Scalar> h;
    h.variables = stage.variables;
    LinearRow<Scalar> obj;
    obj.coeffs = -c;
    h.add_row(RowId::objective(), std::move(obj));
    for (std::size_t i = 0; i < stage.num_rows(); ++i) {
        LinearRow<Scalar> r;
        r.coeffs = stage.rows[i].coeffs;
        h.add_row(stage.ids[i], std::move(r));
    }
    return h;
}

namespace {

// Every row >= 0 and at least one > 0.
template <typename Scalar>
bool strict_ray(const FiniteSystem<Scalar>& system, const Vector<Scalar>& r, const Tolerance& tol)
{
    bool strict = false;
    for (const auto& row : system.rows) {
        Scalar v = row.coeffs.dot(r);
        int s = classify(v, row.scale(), tol);
        if (s < 0) return false;
        if (s > 0) strict = true;
    }
    return strict;
}

}  // namespace

template <typename Scalar>
Vector<Scalar> extract_strict_ray(const FiniteSystem<Scalar>& system,
                                  const EliminationResult<Scalar>& result, const Tolerance& tol)
{
    std::vector<std::size_t> h1, h2;
    split_h1_h2(result, h1, h2, tol);
    if (h2.empty()) throw PreconditionViolated("H2 is empty; no strict ray to extract");
    for (auto k : result.dirty) {
        int sign = 0;
        for (const auto& h : result.rows) {
            int s = classify(h.row.coeffs[k], h.row.scale(), tol);
            if (s != 0) sign = (sign < 0 || s < 0) ? -1 : 1;
        }
        if (sign == 0) continue;
        Vector<Scalar> partial = Vector<Scalar>::Zero(static_cast<Eigen::Index>(result.num_variables));
        partial[k] = Scalar(sign);
        Vector<Scalar> r = back_substitute(result, partial, Scalar(0), tol);
        if (strict_ray(system, r, tol)) return r;
    }
    throw PreconditionViolated("no dirty variable produced a strict ray");
}

template <typename Scalar>
RecessionAnalysis<Scalar> analyze_recession(const FiniteSystem<Scalar>& system,
                                            const Vector<Scalar>& c,
                                            const EliminationOptions& options)
{
    for (const auto& row : system.rows)
        if (row.rhs != 0 || row.z_coeff != 0)
            throw PreconditionViolated("recession analysis expects a homogeneous system");
    RecessionAnalysis<Scalar> a;
    a.system = system;
    a.result = run_elimination(system, options);
    split_h1_h2(a.result, a.h1, a.h2, options.tolerance);
    a.zero_unique_solution =
        check_region_bounded(a.result, options.tolerance).status == Boundedness::Bounded;
    if (a.h2.empty()) {
        a.kn = KNCheck::Holds;
        a.note = "H2 is empty: every variable is clean, the system is tidy";
        return a;
    }
    a.ray = extract_strict_ray(system, a.result, options.tolerance);
    a.ray_objective = c.dot(*a.ray);
    int s = classify(a.ray_objective, Scalar(1), options.tolerance);
    a.ray_outside_N = s < 0;
    if (s == 0) {
        // r is in K and N, and some row is strict at r, so -r is not in K.
        a.kn = KNCheck::Fails;
        a.note = "strict ray with c.r = 0: K and N intersect in a set that is not a subspace";
    } else {
        a.kn = KNCheck::Undecided;
        a.note = "strict ray has c.r < 0; the primal is unbounded when feasible";
    }
    return a;
}

#define FMSILP_INSTANTIATE(S)                                                                     \
    template FiniteSystem<S> build_recession_system<S>(const FiniteSystem<S>&, const Vector<S>&); \
    template Vector<S> extract_strict_ray<S>(const FiniteSystem<S>&, const EliminationResult<S>&, \
                                             const Tolerance&);                                   \
    template RecessionAnalysis<S> analyze_recession<S>(const FiniteSystem<S>&, const Vector<S>&,  \
                                                       const EliminationOptions&);

FMSILP_INSTANTIATE(Rational)
FMSILP_INSTANTIATE(double)

}  // namespace fmsilp
