#include "fmsilp/finite_approx.hpp"

namespace fmsilp {

template <typename Scalar>
Extended<Scalar> finite_subset_value(const SILPModel& model, const std::vector<RowId>& J,
                                     const AnalysisOptions& options)
{
    auto system = instantiate_rows<Scalar>(model, J);
    std::vector<Scalar> deltas;
    for (const auto& d : GridSchedule::default_deltas(10))
        deltas.push_back(ScalarTraits<Scalar>::from_rational(d));
    auto report = analyze_finite(system, objective_vector<Scalar>(model), deltas, options);
    return report.verdicts.primal_value;
}

std::vector<RowId> enumerate_rows(const SILPModel& model, std::size_t count)
{
    std::vector<RowId> ids;
    for (const auto& f : model.families)
        if (f.domain.kind != Domain::Kind::Integer)
            throw PreconditionViolated("family '" + f.name + "' is not integer indexed");
    for (const auto& r : model.rows) {
        if (ids.size() == count) return ids;
        ids.push_back(r.id);
    }
    for (long j = 0; ids.size() < count; ++j) {
        bool any = false;
        for (const auto& f : model.families) {
            Rational t = f.domain.lo + j;
            if (f.domain.hi && t > *f.domain.hi) continue;
            any = true;
            if (ids.size() == count) break;
            ids.push_back(RowId::family_point(f.name, {t}));
        }
        if (!any) break;
    }
    return ids;
}

template <typename Scalar>
ValueSequence<Scalar> value_sequence(const SILPModel& model, std::size_t N,
                                     const AnalysisOptions& options)
{
    ValueSequence<Scalar> seq;
    auto ids = enumerate_rows(model, N);
    for (std::size_t n = 1; n <= ids.size(); ++n) {
        std::vector<RowId> prefix(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n));
        seq.sizes.push_back(n);
        seq.values.push_back(finite_subset_value<Scalar>(model, prefix, options));
    }
    for (std::size_t n = 1; n < seq.values.size(); ++n)
        if (seq.values[n] < seq.values[n - 1]) seq.nondecreasing = false;
    if (seq.values.empty()) {
        seq.limit = Extended<Scalar>::neg_inf();
        seq.note = "empty sequence";
        return seq;
    }
    seq.diverging = flags_divergence(seq.values);
    const auto& last = seq.values.back();
    if (seq.values.size() >= 2) {
        const auto& prev = seq.values[seq.values.size() - 2];
        Scalar tol;
        if constexpr (ScalarTraits<Scalar>::exact)
            tol = options.exact_gap;
        else
            tol = options.float_gap;
        seq.cauchy = last == prev ||
                     (last.finite() && prev.finite() && abs_value(Scalar(last.value() - prev.value())) <= tol);
    }
    seq.limit = seq.diverging ? Extended<Scalar>::pos_inf() : last;
    if (!seq.nondecreasing) seq.note = "sequence decreased; prefixes are not nested";
    else if (seq.diverging) seq.note = "diverging to +inf (heuristic)";
    else seq.note = seq.cauchy ? "last two values agree" : "not yet settled";
    return seq;
}

#define FMSILP_INSTANTIATE(S)                                                                     \
    template Extended<S> finite_subset_value<S>(const SILPModel&, const std::vector<RowId>&,      \
                                                const AnalysisOptions&);                          \
    template ValueSequence<S> value_sequence<S>(const SILPModel&, std::size_t,                    \
                                                const AnalysisOptions&);

FMSILP_INSTANTIATE(Rational)
FMSILP_INSTANTIATE(double)

}  // namespace fmsilp
