#pragma once

#include "fmsilp/errors.hpp"
#include "fmsilp/model.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fmsilp {

constexpr std::size_t kDefaultRowBudget = 200000;

// kDefaultRowBudget unless FMSILP_ROW_BUDGET holds a positive integer.
std::size_t default_row_budget();

enum class OrderRule { Input, MinFill };

struct EliminationOptions {
    std::size_t row_budget = default_row_budget();
    bool merge_duplicates = true;
    // Drops rows whose left-hand side repeats with a smaller rhs. Off by default:
    // it can move rows between I3 and I4 and so change dual-side certificates.
    bool prune_dominated = false;
    // Chernikov's rule: after k eliminations a combined row needing more than
    // k + 1 input rows is redundant and is dropped. Off by default.
    bool prune_support = false;
    // Set by run_elimination when prune_support is on; 0 means no limit.
    std::size_t max_support = 0;
    Tolerance tolerance;
    OrderRule order_rule = OrderRule::Input;
};

struct SignPartition {
    std::vector<std::size_t> plus, minus, zero;  // derived-row ids
};

template <typename Scalar>
struct Provenance {
    bool original = true;
    std::size_t source = 0;  // original row index when original
    std::size_t p = 0, q = 0;
    Scalar scale_p{0}, scale_q{0};  // the row is scale_p*row_p + scale_q*row_q
};

template <typename Scalar>
struct DerivedRow {
    std::size_t id = 0;
    LinearRow<Scalar> row;
    Multiplier<Scalar> multiplier;
    Provenance<Scalar> provenance;
};

enum class StepKind { Eliminated, Dirty, ZeroColumn };

template <typename Scalar>
struct PairChild {
    std::size_t p, q, child;
    Scalar z_scale;  // the raw aggregate was divided by this to normalize z
};

template <typename Scalar>
struct EliminationStep {
    std::size_t variable = 0;
    StepKind kind = StepKind::Eliminated;
    SignPartition partition;
    std::vector<DerivedRow<Scalar>> bounds;  // the Hplus and Hminus rows, for back-substitution
    std::vector<PairChild<Scalar>> children;
    std::size_t rows_after = 0;
};

template <typename Scalar>
struct EliminationResult {
    std::size_t num_variables = 0;
    bool augmented = false;
    std::vector<std::size_t> permutation;  // canonical order: clean first, then dirty
    std::vector<std::size_t> clean, dirty;
    std::vector<DerivedRow<Scalar>> rows;
    std::vector<EliminationStep<Scalar>> trace;
    std::size_t next_id = 0;

    // 1-based index of the first dirty variable; n + 1 when every variable is clean.
    std::size_t ell() const { return clean.size() + 1; }
    bool all_clean() const { return dirty.empty(); }
    const DerivedRow<Scalar>& row_by_id(std::size_t id) const;
};

template <typename Scalar>
std::vector<DerivedRow<Scalar>> initial_rows(const FiniteSystem<Scalar>& system);

template <typename Scalar>
SignPartition classify_signs(const std::vector<DerivedRow<Scalar>>& rows, std::size_t var,
                             const Tolerance& tol = {});

// Throws NotEliminable when exactly one of Hplus, Hminus is empty. When both are empty
// the rows are returned unchanged. `next_id` supplies fresh ids.
template <typename Scalar>
std::vector<DerivedRow<Scalar>> eliminate_variable(const std::vector<DerivedRow<Scalar>>& rows,
                                                   std::size_t var, bool augmented,
                                                   std::size_t& next_id,
                                                   const EliminationOptions& options = {},
                                                   EliminationStep<Scalar>* step = nullptr);

template <typename Scalar>
EliminationResult<Scalar> run_elimination(const FiniteSystem<Scalar>& system,
                                          const std::vector<std::size_t>& order,
                                          const EliminationOptions& options = {});

// Uses options.order_rule: input order or greedy min-fill.
template <typename Scalar>
EliminationResult<Scalar> run_elimination(const FiniteSystem<Scalar>& system,
                                          const EliminationOptions& options = {});

struct IdentityViolation {
    enum class Identity { Rhs, DirtyCoefficient, CleanOrthogonality, ZCoefficient, Sign };
    std::size_t row_id;
    Identity identity;
    std::size_t variable;
    std::string detail;
};

template <typename Scalar>
std::vector<IdentityViolation> verify_multiplier_identities(const FiniteSystem<Scalar>& original,
                                                            const EliminationResult<Scalar>& result,
                                                            const Tolerance& tol = {});

template <typename Scalar>
struct DecompositionTerm {
    Scalar lambda;
    std::size_t row_id;
    Multiplier<Scalar> multiplier;
};

// Writes u_bar as a nonnegative combination of final-row multipliers of an elimination
// run without duplicate merging. M counts variables in the run's canonical order.
template <typename Scalar>
std::vector<DecompositionTerm<Scalar>> decompose_multiplier(
    const FiniteSystem<Scalar>& system, const Multiplier<Scalar>& u_bar, std::size_t M,
    const std::vector<std::size_t>& order, const EliminationOptions& options = {});

// Values of dirty variables (entries of `partial` at dirty indices) and z are kept;
// eliminated variables are filled in walking the trace backwards.
template <typename Scalar>
Vector<Scalar> back_substitute(const EliminationResult<Scalar>& result,
                               const Vector<Scalar>& partial, const Scalar& z = Scalar(0),
                               const Tolerance& tol = {});

// Sum of |coefficient| over the dirty variables of a final row.
template <typename Scalar>
Scalar dirty_weight(const EliminationResult<Scalar>& result, const LinearRow<Scalar>& row);

template <typename Scalar>
bool has_dirty_coefficient(const EliminationResult<Scalar>& result, const LinearRow<Scalar>& row,
                           const Tolerance& tol = {});

}  // namespace fmsilp
