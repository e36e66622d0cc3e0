#include "fmsilp/elimination.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

namespace fmsilp {

std::size_t default_row_budget()
{
    if (const char* env = std::getenv("FMSILP_ROW_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return kDefaultRowBudget;
}

template <typename Scalar>
const DerivedRow<Scalar>& EliminationResult<Scalar>::row_by_id(std::size_t id) const
{
    for (const auto& r : rows)
        if (r.id == id) return r;
    throw PreconditionViolated("no final row with id " + std::to_string(id));
}

template <typename Scalar>
std::vector<DerivedRow<Scalar>> initial_rows(const FiniteSystem<Scalar>& system)
{
    std::vector<DerivedRow<Scalar>> rows;
    rows.reserve(system.rows.size());
    for (std::size_t i = 0; i < system.rows.size(); ++i) {
        DerivedRow<Scalar> r;
        r.id = i;
        r.row = system.rows[i];
        if (!system.augmented) r.row.z_coeff = Scalar(0);
        r.multiplier = Multiplier<Scalar>::unit(i);
        r.provenance.original = true;
        r.provenance.source = i;
        rows.push_back(std::move(r));
    }
    return rows;
}

template <typename Scalar>
SignPartition classify_signs(const std::vector<DerivedRow<Scalar>>& rows, std::size_t var,
                             const Tolerance& tol)
{
    SignPartition part;
    for (const auto& r : rows) {
        int s = classify(r.row.coeffs[var], r.row.scale(), tol);
        (s > 0 ? part.plus : s < 0 ? part.minus : part.zero).push_back(r.id);
    }
    return part;
}

namespace {

template <typename Scalar>
void snap_zeros(LinearRow<Scalar>& row, const Tolerance& tol)
{
    if constexpr (!ScalarTraits<Scalar>::exact) {
        Scalar scale = row.scale();
        for (Eigen::Index k = 0; k < row.coeffs.size(); ++k)
            if (classify(row.coeffs[k], scale, tol) == 0) row.coeffs[k] = 0;
        if (classify(row.z_coeff, scale, tol) == 0) row.z_coeff = 0;
    } else {
        (void)row;
        (void)tol;
    }
}

// Rows equal up to a positive factor share a key; z rows are already normalized.
template <typename Scalar>
std::vector<Scalar> row_key(const LinearRow<Scalar>& row, bool with_rhs)
{
    Scalar factor(1);
    if (row.z_coeff == 0) {
        for (Eigen::Index k = 0; k < row.coeffs.size(); ++k) {
            if (row.coeffs[k] != 0) {
                factor = abs_value(row.coeffs[k]);
                break;
            }
        }
    }
    std::vector<Scalar> key;
    key.reserve(static_cast<std::size_t>(row.coeffs.size()) + 2);
    for (Eigen::Index k = 0; k < row.coeffs.size(); ++k) key.push_back(row.coeffs[k] / factor);
    key.push_back(row.z_coeff);
    if (with_rhs) key.push_back(row.rhs / factor);
    return key;
}

template <typename Scalar>
Scalar normalized_rhs(const LinearRow<Scalar>& row)
{
    if (row.z_coeff != 0) return row.rhs;
    for (Eigen::Index k = 0; k < row.coeffs.size(); ++k)
        if (row.coeffs[k] != 0) return row.rhs / abs_value(row.coeffs[k]);
    return row.rhs;
}

template <typename Scalar>
std::vector<DerivedRow<Scalar>> prune_dominated_rows(std::vector<DerivedRow<Scalar>> rows)
{
    std::map<std::vector<Scalar>, std::size_t> best;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto key = row_key(rows[i].row, false);
        auto [it, inserted] = best.emplace(std::move(key), i);
        if (!inserted && normalized_rhs(rows[i].row) > normalized_rhs(rows[it->second].row))
            it->second = i;
    }
    std::vector<bool> keep(rows.size(), false);
    for (const auto& [key, i] : best) keep[i] = true;
    std::vector<DerivedRow<Scalar>> out;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (keep[i]) out.push_back(std::move(rows[i]));
    return out;
}

}  // namespace

template <typename Scalar>
std::vector<DerivedRow<Scalar>> eliminate_variable(const std::vector<DerivedRow<Scalar>>& rows,
                                                   std::size_t var, bool augmented,
                                                   std::size_t& next_id,
                                                   const EliminationOptions& options,
                                                   EliminationStep<Scalar>* step)
{
    SignPartition part = classify_signs(rows, var, options.tolerance);
    if (step) {
        step->variable = var;
        step->partition = part;
    }
    if (part.plus.empty() && part.minus.empty()) {
        if (step) step->kind = StepKind::ZeroColumn;
        auto out = rows;
        for (auto& r : out) r.row.coeffs[var] = Scalar(0);
        return out;
    }
    if (part.plus.empty() || part.minus.empty())
        throw NotEliminable("variable " + std::to_string(var) + " has a one-sided column");
    if (step) step->kind = StepKind::Eliminated;

    std::vector<const DerivedRow<Scalar>*> plus, minus;
    std::vector<DerivedRow<Scalar>> out;
    std::map<std::vector<Scalar>, std::size_t> seen;
    auto admit = [&](DerivedRow<Scalar>&& r) -> std::size_t {
        if (options.merge_duplicates) {
            auto [it, inserted] = seen.emplace(row_key(r.row, true), r.id);
            if (!inserted) return it->second;
        }
        std::size_t id = r.id;
        out.push_back(std::move(r));
        if (out.size() > options.row_budget) throw RowBudgetExceeded(options.row_budget);
        return id;
    };

    for (const auto& r : rows) {
        int s = classify(r.row.coeffs[var], r.row.scale(), options.tolerance);
        if (s > 0) {
            plus.push_back(&r);
        } else if (s < 0) {
            minus.push_back(&r);
        } else {
            DerivedRow<Scalar> copy = r;
            copy.row.coeffs[var] = Scalar(0);
            admit(std::move(copy));
        }
    }
    auto by_id = [](const DerivedRow<Scalar>* a, const DerivedRow<Scalar>* b) {
        return a->id < b->id;
    };
    std::sort(plus.begin(), plus.end(), by_id);
    std::sort(minus.begin(), minus.end(), by_id);
    if (step) {
        step->bounds.clear();
        for (auto* r : plus) step->bounds.push_back(*r);
        for (auto* r : minus) step->bounds.push_back(*r);
    }

    if (out.size() + plus.size() * minus.size() > options.row_budget && !options.merge_duplicates)
        throw RowBudgetExceeded(options.row_budget);

    for (auto* p : plus) {
        const Scalar sp = Scalar(1) / p->row.coeffs[var];
        for (auto* q : minus) {
            const Scalar sq = Scalar(-1) / q->row.coeffs[var];
            DerivedRow<Scalar> r;
            r.id = next_id;
            r.row.coeffs = p->row.coeffs * sp + q->row.coeffs * sq;
            r.row.coeffs[var] = Scalar(0);
            r.row.z_coeff = p->row.z_coeff * sp + q->row.z_coeff * sq;
            r.row.rhs = p->row.rhs * sp + q->row.rhs * sq;
            r.multiplier = Multiplier<Scalar>::combine(sp, p->multiplier, sq, q->multiplier);
            r.provenance.original = false;
            r.provenance.p = p->id;
            r.provenance.q = q->id;
            r.provenance.scale_p = sp;
            r.provenance.scale_q = sq;
            snap_zeros(r.row, options.tolerance);
            Scalar z_scale(1);
            if (augmented && r.row.z_coeff > 0) {
                z_scale = r.row.z_coeff;
                r.row.coeffs /= z_scale;
                r.row.rhs /= z_scale;
                r.row.z_coeff = Scalar(1);
                r.multiplier = r.multiplier.scaled(Scalar(1) / z_scale);
                r.provenance.scale_p /= z_scale;
                r.provenance.scale_q /= z_scale;
            }
            if (options.max_support != 0 && r.multiplier.size() > options.max_support) continue;
            std::size_t child = admit(std::move(r));
            if (child == next_id) ++next_id;
            if (step) step->children.push_back({p->id, q->id, child, z_scale});
        }
    }
    if (options.prune_dominated) out = prune_dominated_rows(std::move(out));
    if (step) step->rows_after = out.size();
    return out;
}

namespace {

template <typename Scalar>
void process_variable(EliminationResult<Scalar>& result, std::vector<DerivedRow<Scalar>>& rows,
                      std::size_t var, const EliminationOptions& options)
{
    EliminationStep<Scalar> step;
    SignPartition part = classify_signs(rows, var, options.tolerance);
    if (!part.plus.empty() && !part.minus.empty()) {
        EliminationOptions opts = options;
        if (opts.prune_support) opts.max_support = result.clean.size() + 2;
        rows = eliminate_variable(rows, var, result.augmented, result.next_id, opts, &step);
        result.clean.push_back(var);
    } else if (part.plus.empty() && part.minus.empty()) {
        rows = eliminate_variable(rows, var, result.augmented, result.next_id, options, &step);
        result.clean.push_back(var);
    } else {
        step.variable = var;
        step.kind = StepKind::Dirty;
        step.partition = std::move(part);
        step.rows_after = rows.size();
        result.dirty.push_back(var);
    }
    result.trace.push_back(std::move(step));
}

template <typename Scalar>
EliminationResult<Scalar> start_result(const FiniteSystem<Scalar>& system)
{
    EliminationResult<Scalar> result;
    result.num_variables = system.num_variables();
    result.augmented = system.augmented;
    result.next_id = system.num_rows();
    return result;
}

template <typename Scalar>
void finish_result(EliminationResult<Scalar>& result, std::vector<DerivedRow<Scalar>> rows)
{
    result.rows = std::move(rows);
    result.permutation = result.clean;
    result.permutation.insert(result.permutation.end(), result.dirty.begin(), result.dirty.end());
}

}  // namespace

template <typename Scalar>
EliminationResult<Scalar> run_elimination(const FiniteSystem<Scalar>& system,
                                          const std::vector<std::size_t>& order,
                                          const EliminationOptions& options)
{
    const std::size_t n = system.num_variables();
    std::vector<bool> seen(n, false);
    if (order.size() != n) throw PreconditionViolated("order is not a permutation of the variables");
    for (auto v : order) {
        if (v >= n || seen[v]) throw PreconditionViolated("order is not a permutation of the variables");
        seen[v] = true;
    }
    auto result = start_result(system);
    auto rows = initial_rows(system);
    for (auto var : order) process_variable(result, rows, var, options);
    finish_result(result, std::move(rows));
    return result;
}

template <typename Scalar>
EliminationResult<Scalar> run_elimination(const FiniteSystem<Scalar>& system,
                                          const EliminationOptions& options)
{
    const std::size_t n = system.num_variables();
    if (options.order_rule == OrderRule::Input) {
        std::vector<std::size_t> order(n);
        for (std::size_t k = 0; k < n; ++k) order[k] = k;
        return run_elimination(system, order, options);
    }
    auto result = start_result(system);
    auto rows = initial_rows(system);
    std::vector<bool> done(n, false);
    for (std::size_t round = 0; round < n; ++round) {
        std::size_t best = n;
        long long best_score = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (done[k]) continue;
            auto part = classify_signs(rows, k, options.tolerance);
            long long pl = static_cast<long long>(part.plus.size());
            long long mi = static_cast<long long>(part.minus.size());
            long long score = pl * mi - pl - mi;
            if (best == n || score < best_score) {
                best = k;
                best_score = score;
            }
        }
        done[best] = true;
        process_variable(result, rows, best, options);
    }
    finish_result(result, std::move(rows));
    return result;
}

namespace {

template <typename Scalar>
bool close_enough(const Scalar& a, const Scalar& b, const Scalar& scale)
{
    if constexpr (ScalarTraits<Scalar>::exact) {
        (void)scale;
        return a == b;
    } else {
        return std::fabs(a - b) <= 1e-8 * std::max(1.0, scale);
    }
}

template <typename Scalar>
Scalar weighted_scale(const Vector<Scalar>& column, const Multiplier<Scalar>& u)
{
    Scalar s(0);
    for (const auto& [row, value] : u.entries()) s += abs_value(column[row]) * value;
    return s;
}

}  // namespace

template <typename Scalar>
std::vector<IdentityViolation> verify_multiplier_identities(const FiniteSystem<Scalar>& original,
                                                            const EliminationResult<Scalar>& result,
                                                            const Tolerance& /*tol*/)
{
    using Id = IdentityViolation::Identity;
    std::vector<IdentityViolation> out;
    const std::size_t n = original.num_variables();
    std::vector<Vector<Scalar>> cols;
    for (std::size_t k = 0; k < n; ++k) cols.push_back(original.column(k));
    const Vector<Scalar> b = original.rhs_column();
    const Vector<Scalar> zc = original.augmented
                                  ? original.z_column()
                                  : Vector<Scalar>(Vector<Scalar>::Zero(
                                        static_cast<Eigen::Index>(original.num_rows())));
    std::vector<bool> is_clean(n, false);
    for (auto k : result.clean) is_clean[k] = true;

    for (const auto& h : result.rows) {
        const auto& u = h.multiplier;
        for (const auto& [row, value] : u.entries())
            if (!(value > 0) || row >= original.num_rows())
                out.push_back({h.id, Id::Sign, 0, "multiplier entry not positive or out of range"});
        Scalar bt = dot(b, u);
        if (!close_enough(h.row.rhs, bt, weighted_scale(b, u)))
            out.push_back({h.id, Id::Rhs, 0,
                           "rhs " + scalar_to_string(h.row.rhs) + " != " + scalar_to_string(bt)});
        for (std::size_t k = 0; k < n; ++k) {
            Scalar ak = dot(cols[k], u);
            Scalar scale = weighted_scale(cols[k], u);
            if (is_clean[k]) {
                if (!close_enough(ak, Scalar(0), scale) || h.row.coeffs[k] != 0)
                    out.push_back({h.id, Id::CleanOrthogonality, k,
                                   "clean column sums to " + scalar_to_string(ak)});
            } else if (!close_enough(h.row.coeffs[k], ak, scale)) {
                out.push_back({h.id, Id::DirtyCoefficient, k,
                               "coefficient " + scalar_to_string(h.row.coeffs[k]) +
                                   " != " + scalar_to_string(ak)});
            }
        }
        Scalar zt = dot(zc, u);
        if (!close_enough(h.row.z_coeff, zt, weighted_scale(zc, u)))
            out.push_back({h.id, Id::ZCoefficient, n, "z coefficient mismatch"});
    }
    return out;
}

template <typename Scalar>
std::vector<DecompositionTerm<Scalar>> decompose_multiplier(
    const FiniteSystem<Scalar>& system, const Multiplier<Scalar>& u_bar, std::size_t M,
    const std::vector<std::size_t>& order, const EliminationOptions& options)
{
    EliminationOptions opts = options;
    opts.merge_duplicates = false;
    opts.prune_dominated = false;
    opts.prune_support = false;
    opts.max_support = 0;
    auto result = run_elimination(system, order, opts);
    const std::size_t n = system.num_variables();
    if (M > n || result.clean.size() > M)
        throw PreconditionViolated("M must satisfy ell - 1 <= M <= n");
    for (const auto& [row, value] : u_bar.entries())
        if (row >= system.num_rows() || !(value > 0))
            throw PreconditionViolated("u_bar must be positive on rows of the system");
    for (std::size_t i = 0; i < M; ++i) {
        std::size_t k = result.permutation[i];
        Vector<Scalar> col = system.column(k);
        Scalar s = dot(col, u_bar);
        if (!close_enough(s, Scalar(0), weighted_scale(col, u_bar)))
            throw PreconditionViolated("u_bar is not orthogonal to column " + system.variables[k]);
    }

    std::map<std::size_t, Scalar> alpha;
    for (const auto& [row, value] : u_bar.entries()) alpha[row] = value;

    for (const auto& step : result.trace) {
        if (step.kind != StepKind::Eliminated) continue;
        const std::size_t j = step.variable;
        auto coeff = [&](std::size_t id) -> Scalar {
            for (const auto& r : step.bounds)
                if (r.id == id) return r.row.coeffs[j];
            throw PreconditionViolated("trace is missing row " + std::to_string(id));
        };
        std::vector<std::pair<std::size_t, Scalar>> supply, demand;
        Scalar total_s(0), total_d(0);
        for (auto p : step.partition.plus) {
            auto it = alpha.find(p);
            if (it == alpha.end()) continue;
            supply.push_back({p, it->second * coeff(p)});
            total_s += supply.back().second;
            alpha.erase(it);
        }
        for (auto q : step.partition.minus) {
            auto it = alpha.find(q);
            if (it == alpha.end()) continue;
            demand.push_back({q, -(it->second * coeff(q))});
            total_d += demand.back().second;
            alpha.erase(it);
        }
        if (!close_enough(total_s, total_d, Scalar(abs_value(total_s) + abs_value(total_d))))
            throw PreconditionViolated("unbalanced transportation step at variable " +
                                       system.variables[j]);
        std::map<std::pair<std::size_t, std::size_t>, const PairChild<Scalar>*> child_of;
        for (const auto& c : step.children) child_of[{c.p, c.q}] = &c;
        // Northwest-corner rule.
        std::size_t a = 0, b = 0;
        while (a < supply.size() && b < demand.size()) {
            Scalar theta = supply[a].second < demand[b].second ? supply[a].second : demand[b].second;
            if (theta > 0) {
                const auto* c = child_of.at({supply[a].first, demand[b].first});
                alpha[c->child] += theta * c->z_scale;
            }
            supply[a].second -= theta;
            demand[b].second -= theta;
            bool sa = !(supply[a].second > 0), db = !(demand[b].second > 0);
            if constexpr (!ScalarTraits<Scalar>::exact) {
                double eps = 1e-12 * std::max(1.0, total_s);
                sa = supply[a].second <= eps;
                db = demand[b].second <= eps;
            }
            if (sa) ++a;
            if (db) ++b;
        }
    }

    std::vector<DecompositionTerm<Scalar>> terms;
    std::vector<typename Multiplier<Scalar>::Entry> sum;
    for (const auto& [id, lambda] : alpha) {
        if (!(lambda > 0)) continue;
        const auto& h = result.row_by_id(id);
        terms.push_back({lambda, id, h.multiplier});
        for (const auto& e : h.multiplier.entries()) sum.push_back({e.first, lambda * e.second});
    }
    if constexpr (ScalarTraits<Scalar>::exact) {
        if (!(Multiplier<Scalar>::from_entries(sum) == u_bar))
            throw PreconditionViolated("decomposition does not reproduce u_bar");
    }
    return terms;
}

template <typename Scalar>
Vector<Scalar> back_substitute(const EliminationResult<Scalar>& result,
                               const Vector<Scalar>& partial, const Scalar& z,
                               const Tolerance& tol)
{
    const auto n = static_cast<Eigen::Index>(result.num_variables);
    if (partial.size() != n) throw PreconditionViolated("partial point has the wrong length");
    Vector<Scalar> x = partial;
    for (auto k : result.clean) x[k] = Scalar(0);
    for (auto it = result.trace.rbegin(); it != result.trace.rend(); ++it) {
        const auto& step = *it;
        if (step.kind != StepKind::Eliminated) continue;
        const std::size_t j = step.variable;
        Extended<Scalar> lower = Extended<Scalar>::neg_inf();
        Extended<Scalar> upper = Extended<Scalar>::pos_inf();
        Scalar scale(0);
        x[j] = Scalar(0);
        for (const auto& r : step.bounds) {
            const Scalar& a = r.row.coeffs[j];
            Scalar rest = r.row.coeffs.dot(x) + r.row.z_coeff * z;
            Scalar bound = (r.row.rhs - rest) / a;
            scale = std::max(scale, abs_value(bound));
            if (a > 0)
                lower = Extended<Scalar>::max(lower, Extended<Scalar>(bound));
            else if (upper.is_pos_inf() || bound < upper.value())
                upper = Extended<Scalar>(bound);
        }
        if (!lower.finite() || !upper.finite())
            throw PreconditionViolated("eliminated variable without bounds in the trace");
        Scalar lo = lower.value(), hi = upper.value();
        if (lo > hi) {
            if constexpr (ScalarTraits<Scalar>::exact) {
                throw PreconditionViolated("partial point violates the projected system at " +
                                           std::to_string(j));
            } else {
                if (lo - hi > tol.abs + tol.rel * std::max(1.0, scale))
                    throw EmptyInterval("empty interval for variable " + std::to_string(j));
            }
        }
        x[j] = (lo + hi) / 2;
    }
    return x;
}

template <typename Scalar>
Scalar dirty_weight(const EliminationResult<Scalar>& result, const LinearRow<Scalar>& row)
{
    Scalar s(0);
    for (auto k : result.dirty) s += abs_value(row.coeffs[k]);
    return s;
}

template <typename Scalar>
bool has_dirty_coefficient(const EliminationResult<Scalar>& result, const LinearRow<Scalar>& row,
                           const Tolerance& tol)
{
    Scalar scale = row.scale();
    for (auto k : result.dirty)
        if (classify(row.coeffs[k], scale, tol) != 0) return true;
    return false;
}

#define FMSILP_INSTANTIATE(S)                                                                     \
    template struct EliminationResult<S>;                                                         \
    template std::vector<DerivedRow<S>> initial_rows<S>(const FiniteSystem<S>&);                  \
    template SignPartition classify_signs<S>(const std::vector<DerivedRow<S>>&, std::size_t,      \
                                             const Tolerance&);                                   \
    template std::vector<DerivedRow<S>> eliminate_variable<S>(                                    \
        const std::vector<DerivedRow<S>>&, std::size_t, bool, std::size_t&,                       \
        const EliminationOptions&, EliminationStep<S>*);                                          \
    template EliminationResult<S> run_elimination<S>(const FiniteSystem<S>&,                      \
                                                     const std::vector<std::size_t>&,             \
                                                     const EliminationOptions&);                  \
    template EliminationResult<S> run_elimination<S>(const FiniteSystem<S>&,                      \
                                                     const EliminationOptions&);                  \
    template std::vector<IdentityViolation> verify_multiplier_identities<S>(                      \
        const FiniteSystem<S>&, const EliminationResult<S>&, const Tolerance&);                   \
    template std::vector<DecompositionTerm<S>> decompose_multiplier<S>(                           \
        const FiniteSystem<S>&, const Multiplier<S>&, std::size_t,                                \
        const std::vector<std::size_t>&, const EliminationOptions&);                              \
    template Vector<S> back_substitute<S>(const EliminationResult<S>&, const Vector<S>&,          \
                                          const S&, const Tolerance&);                            \
    template S dirty_weight<S>(const EliminationResult<S>&, const LinearRow<S>&);                 \
    template bool has_dirty_coefficient<S>(const EliminationResult<S>&, const LinearRow<S>&,      \
                                           const Tolerance&);

FMSILP_INSTANTIATE(Rational)
FMSILP_INSTANTIATE(double)

}  // namespace fmsilp
