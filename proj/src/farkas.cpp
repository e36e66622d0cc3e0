#include "fmsilp/farkas.hpp"

#include <algorithm>

namespace fmsilp {

std::string to_string(FarkasVerdict v)
{
    switch (v) {
    case FarkasVerdict::Yes: return "yes";
    case FarkasVerdict::No: return "no";
    case FarkasVerdict::YesInLimit: return "yes_in_limit";
    default: return "yes_within_tolerance";
    }
}

std::string to_string(FarkasCertificateKind k)
{
    switch (k) {
    case FarkasCertificateKind::ExactCone: return "exact_cone";
    case FarkasCertificateKind::InfeasibleCone: return "infeasible_cone";
    default: return "closure_sequence";
    }
}

namespace {

template <typename Scalar>
bool same(const Scalar& a, const Scalar& b)
{
    if constexpr (ScalarTraits<Scalar>::exact) {
        return a == b;
    } else {
        return std::fabs(a - b) <= 1e-8 * std::max({1.0, std::fabs(a), std::fabs(b)});
    }
}

template <typename Scalar>
Scalar gap_tolerance(const AnalysisOptions& options)
{
    if constexpr (ScalarTraits<Scalar>::exact)
        return options.exact_gap;
    else
        return options.float_gap;
}

template <typename Scalar>
Scalar max_abs_diff(const Vector<Scalar>& a, const Vector<Scalar>& b)
{
    Scalar m(0);
    for (Eigen::Index k = 0; k < a.size(); ++k) m = std::max(m, abs_value(Scalar(a[k] - b[k])));
    return m;
}

template <typename Scalar>
Multiplier<Scalar> drop_objective(const Multiplier<Scalar>& u)
{
    std::vector<typename Multiplier<Scalar>::Entry> entries;
    for (const auto& [row, value] : u.entries())
        if (row > 0) entries.push_back({row - 1, value});
    return Multiplier<Scalar>::from_entries(std::move(entries));
}

template <typename Scalar>
ClosureEntry<Scalar> make_entry(const FiniteSystem<Scalar>& system, int stage, const Scalar& delta,
                                std::size_t row_id, Multiplier<Scalar> u, const Vector<Scalar>& target)
{
    ClosureEntry<Scalar> e;
    e.stage = stage;
    e.delta = delta;
    e.row_id = row_id;
    e.u = std::move(u);
    e.image = system.image(e.u);
    e.value = dot(system.rhs_column(), e.u);
    e.gap = max_abs_diff(e.image, target);
    return e;
}

template <typename Scalar>
FarkasResult<Scalar> decide(const DualityReport<Scalar>& report, const Vector<Scalar>& c,
                            const Scalar& d, const AnalysisOptions& options)
{
    FarkasResult<Scalar> out;
    out.staged = report.staged;
    for (const auto& st : report.stages) out.systems.push_back(st.system);
    out.z_star = report.verdicts.primal_value;
    const auto& last = report.last();
    const Scalar tol = gap_tolerance<Scalar>(options);
    const Vector<Scalar> zero = Vector<Scalar>::Zero(c.size());

    if (report.infeasibility) {
        const auto& inf = *report.infeasibility;
        FarkasCertificate<Scalar> cert;
        cert.kind = FarkasCertificateKind::InfeasibleCone;
        cert.stage = inf.stage;
        cert.u = inf.u.scaled(Scalar(Scalar(1) / inf.rhs));
        out.verdict = FarkasVerdict::Yes;
        out.certificate = std::move(cert);
        out.note = "constraints infeasible; every inequality is a consequence";
        return out;
    }
    if (report.verdicts.primal_feasible.answer == Answer::No) {
        // Infeasible in the limit: rows scaled to rhs 1 whose images tend to 0.
        FarkasCertificate<Scalar> cert;
        cert.kind = FarkasCertificateKind::ClosureSequence;
        cert.stage = last.stage;
        cert.target = zero;
        cert.target_value = Scalar(1);
        for (const auto& st : report.stages) {
            auto idx = report.delta2_diverging ? st.diag.delta2_argmax : st.diag.s_argmax;
            if (!idx) continue;
            const auto& row = st.result.rows[*idx];
            if (!(row.row.rhs > 0)) continue;
            cert.sequence.push_back(make_entry(st.system, st.stage, Scalar(0), row.id,
                                               drop_objective(row.multiplier).scaled(
                                                   Scalar(Scalar(1) / row.row.rhs)),
                                               zero));
        }
        out.verdict = FarkasVerdict::YesInLimit;
        out.certificate = std::move(cert);
        out.note = "constraints infeasible in the limit (heuristic divergence flag)";
        return out;
    }
    const Extended<Scalar> S = last.diag.S;
    if (S.finite() && S.value() >= d) {
        auto dual = extract_dual_certificate(last);
        FarkasCertificate<Scalar> cert;
        cert.kind = FarkasCertificateKind::ExactCone;
        cert.stage = last.stage;
        cert.u = dual.v;
        cert.lambda0 = S.value() - d;
        cert.d_prime = d;
        out.verdict = FarkasVerdict::Yes;
        out.certificate = std::move(cert);
        return out;
    }
    if (report.staged && report.L.status == LStatus::Converged && report.L.value.finite() &&
        report.L.value.value() >= d - tol) {
        FarkasCertificate<Scalar> cert;
        cert.kind = FarkasCertificateKind::ClosureSequence;
        cert.stage = last.stage;
        cert.target = c;
        // Values stay at or above L-hat; this is below d only inside the tolerance band.
        cert.target_value = std::min(d, report.L.value.value());
        for (const auto& delta : report.deltas) {
            auto idx = last.diag.omega_argmax(delta, last.result.rows);
            if (!idx) continue;
            const auto& row = last.result.rows[*idx];
            cert.sequence.push_back(
                make_entry(last.system, last.stage, delta, row.id, drop_objective(row.multiplier), c));
        }
        out.verdict = FarkasVerdict::YesInLimit;
        out.certificate = std::move(cert);
        out.note = "value reached only as a limit of the omega sequence";
        return out;
    }
    if constexpr (!ScalarTraits<Scalar>::exact) {
        if (out.z_star.finite() && out.z_star.value() >= d - tol) {
            out.verdict = FarkasVerdict::YesWithinTolerance;
            out.note = "optimal value within tolerance of d";
            return out;
        }
    }
    Scalar target = (S.finite() && S.value() > d - 1) ? Scalar((S.value() + d) / 2) : Scalar(d - 1);
    auto w = lift_primal_point(last, std::optional<Scalar>(target), options.elimination.tolerance);
    out.verdict = FarkasVerdict::No;
    out.counterexample = w.x;
    out.note = report.staged ? "counterexample is feasible for the last stage grid" : "";
    return out;
}

template <typename Scalar>
SILPModel with_objective(const SILPModel& model, const Vector<Scalar>& c)
{
    SILPModel m = model;
    m.objective.clear();
    for (Eigen::Index k = 0; k < c.size(); ++k) m.objective.push_back(ScalarTraits<Scalar>::to_rational(c[k]));
    return m;
}

}  // namespace

template <typename Scalar>
FarkasResult<Scalar> is_consequence(const SILPModel& model, const GridSchedule& schedule,
                                    const Vector<Scalar>& c, const Scalar& d,
                                    const AnalysisOptions& options)
{
    if (static_cast<std::size_t>(c.size()) != model.variables.size())
        throw PreconditionViolated("query length does not match the variable count");
    auto report = analyze<Scalar>(with_objective(model, c), schedule, options);
    return decide(report, c, d, options);
}

template <typename Scalar>
FarkasResult<Scalar> is_consequence(const FiniteSystem<Scalar>& system, const Vector<Scalar>& c,
                                    const Scalar& d, const AnalysisOptions& options)
{
    std::vector<Scalar> deltas;
    for (const auto& x : GridSchedule::default_deltas(10))
        deltas.push_back(ScalarTraits<Scalar>::from_rational(x));
    auto report = analyze_finite(system, c, deltas, options);
    return decide(report, c, d, options);
}

template <typename Scalar>
bool verify_farkas_certificate(const std::vector<FiniteSystem<Scalar>>& systems,
                               const Vector<Scalar>& c, const Scalar& d,
                               const FarkasCertificate<Scalar>& cert, std::string* why)
{
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    auto system_for = [&](int stage) -> const FiniteSystem<Scalar>* {
        if (stage < 1 || static_cast<std::size_t>(stage) > systems.size()) return nullptr;
        return &systems[static_cast<std::size_t>(stage) - 1];
    };
    auto check_multiplier = [&](const FiniteSystem<Scalar>& sys, const Multiplier<Scalar>& u) {
        for (const auto& [row, value] : u.entries())
            if (row >= sys.num_rows() || !(value > 0)) return false;
        return true;
    };

    if (cert.kind != FarkasCertificateKind::ClosureSequence) {
        const auto* sys = system_for(cert.stage);
        if (!sys) return fail("certificate stage out of range");
        if (!check_multiplier(*sys, cert.u)) return fail("multiplier entry out of range or not positive");
        Vector<Scalar> img = sys->image(cert.u);
        Scalar value = dot(sys->rhs_column(), cert.u);
        if (cert.kind == FarkasCertificateKind::InfeasibleCone) {
            for (Eigen::Index k = 0; k < img.size(); ++k)
                if (!same(img[k], Scalar(0)))
                    return fail("sum u a^" + std::to_string(k + 1) + " = " + scalar_to_string(img[k]) +
                                ", expected 0");
            if (!same(value, Scalar(1))) return fail("sum u b = " + scalar_to_string(value) + ", expected 1");
            return true;
        }
        for (Eigen::Index k = 0; k < img.size(); ++k)
            if (!same(img[k], c[k]))
                return fail("sum u a^" + std::to_string(k + 1) + " = " + scalar_to_string(img[k]) +
                            ", expected " + scalar_to_string(c[k]));
        if (cert.lambda0 < 0) return fail("lambda0 is negative");
        if (!same(Scalar(value - cert.lambda0), cert.d_prime))
            return fail("sum u b - lambda0 = " + scalar_to_string(Scalar(value - cert.lambda0)) +
                        ", stated " + scalar_to_string(cert.d_prime));
        if (cert.d_prime < d && !same(cert.d_prime, d)) return fail("d' is below d");
        return true;
    }

    if (cert.sequence.empty()) return fail("empty closure sequence");
    for (std::size_t m = 0; m < cert.sequence.size(); ++m) {
        const auto& e = cert.sequence[m];
        const auto* sys = system_for(e.stage);
        if (!sys) return fail("sequence entry stage out of range");
        if (!check_multiplier(*sys, e.u)) return fail("sequence entry " + std::to_string(m) + " has a bad multiplier");
        Vector<Scalar> img = sys->image(e.u);
        Scalar value = dot(sys->rhs_column(), e.u);
        for (Eigen::Index k = 0; k < img.size(); ++k)
            if (!same(img[k], e.image[k])) return fail("sequence entry " + std::to_string(m) + " image mismatch");
        if (!same(value, e.value)) return fail("sequence entry " + std::to_string(m) + " value mismatch");
        if (!same(max_abs_diff(img, cert.target), e.gap))
            return fail("sequence entry " + std::to_string(m) + " gap mismatch");
        if (value < cert.target_value && !same(value, cert.target_value))
            return fail("sequence entry " + std::to_string(m) + " value below the target");
        if (m > 0 && e.gap > cert.sequence[m - 1].gap && !same(e.gap, cert.sequence[m - 1].gap))
            return fail("gap increases at entry " + std::to_string(m));
    }
    const auto& first = cert.sequence.front().gap;
    const auto& lastgap = cert.sequence.back().gap;
    if (!(lastgap < first) && !same(lastgap, Scalar(0)))
        return fail("gap does not decrease toward 0");
    return true;
}

template <typename Scalar>
bool verify_counterexample(const FiniteSystem<Scalar>& system, const Vector<Scalar>& c,
                           const Scalar& d, const Vector<Scalar>& x, const Tolerance& tol)
{
    return system.satisfied_by(x, Scalar(0), tol) && c.dot(x) < d;
}

#define FMSILP_INSTANTIATE(S)                                                                     \
    template FarkasResult<S> is_consequence<S>(const SILPModel&, const GridSchedule&,             \
                                               const Vector<S>&, const S&,                        \
                                               const AnalysisOptions&);                           \
    template FarkasResult<S> is_consequence<S>(const FiniteSystem<S>&, const Vector<S>&, const S&, \
                                               const AnalysisOptions&);                           \
    template bool verify_farkas_certificate<S>(const std::vector<FiniteSystem<S>>&,               \
                                               const Vector<S>&, const S&,                        \
                                               const FarkasCertificate<S>&, std::string*);        \
    template bool verify_counterexample<S>(const FiniteSystem<S>&, const Vector<S>&, const S&,    \
                                           const Vector<S>&, const Tolerance&);

FMSILP_INSTANTIATE(Rational)
FMSILP_INSTANTIATE(double)

}  // namespace fmsilp
