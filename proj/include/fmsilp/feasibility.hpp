#pragma once

#include "fmsilp/elimination.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fmsilp {

enum class FeasibilityStatus { Feasible, Infeasible };

template <typename Scalar>
struct XDeltaPoint {
    Scalar delta;
    Vector<Scalar> values;  // +-delta on dirty variables, 0 elsewhere
};

template <typename Scalar>
struct FeasibilityVerdict {
    FeasibilityStatus status = FeasibilityStatus::Feasible;
    std::optional<Vector<Scalar>> witness;
    // H1 row with positive rhs and its multiplier, when infeasible.
    std::optional<std::size_t> certificate_row;
    std::optional<Multiplier<Scalar>> certificate;
    // sup over H2 of rhs / sum |dirty coefficients|; -inf when H2 is empty.
    Extended<Scalar> ratio_sup;
};

// H1: final rows with every dirty coefficient zero; H2: the rest.
template <typename Scalar>
void split_h1_h2(const EliminationResult<Scalar>& result, std::vector<std::size_t>& h1,
                 std::vector<std::size_t>& h2, const Tolerance& tol = {});

template <typename Scalar>
Extended<Scalar> h2_ratio_sup(const EliminationResult<Scalar>& result, const Tolerance& tol = {});

template <typename Scalar>
FeasibilityVerdict<Scalar> check_feasibility(const EliminationResult<Scalar>& result,
                                             const Tolerance& tol = {});

enum class Boundedness { Bounded, Unbounded, UnboundedOrLineality };

struct BoundednessVerdict {
    Boundedness status;
    std::string note;
};

template <typename Scalar>
BoundednessVerdict check_region_bounded(const EliminationResult<Scalar>& result,
                                        const Tolerance& tol = {});

// Sign rule over the rows carrying dirty coefficients (H2, or I2 and I4 when augmented).
// Throws PreconditionViolated when delta is below the ratio sup or negative.
template <typename Scalar>
XDeltaPoint<Scalar> build_xdelta(const EliminationResult<Scalar>& result, const Scalar& delta,
                                 const Tolerance& tol = {});

// Same sign rule without the precondition check; used when z also has to be chosen.
template <typename Scalar>
XDeltaPoint<Scalar> sign_rule_point(const EliminationResult<Scalar>& result, const Scalar& delta,
                                    const Tolerance& tol = {});

// Divergence heuristic on a staged sequence: the last three steps each increase by at
// least 1 (Float mode also accepts three growth ratios of at least 1.5). Needs 4 values.
template <typename Scalar>
bool flags_divergence(const std::vector<Extended<Scalar>>& values);

template <typename Scalar>
struct StagedFeasibility {
    std::vector<Extended<Scalar>> ratio_sups;  // per stage
    std::vector<bool> h1_violated;             // per stage
    bool diverging = false;
    FeasibilityStatus status = FeasibilityStatus::Feasible;
    std::string note;
    FeasibilityVerdict<Scalar> last;
};

template <typename Scalar>
StagedFeasibility<Scalar> check_feasibility_staged(const SILPModel& model,
                                                   const GridSchedule& schedule,
                                                   const EliminationOptions& options = {});

}  // namespace fmsilp
