#pragma once

#include "fmsilp/duality.hpp"

#include <string>
#include <vector>

namespace fmsilp {

// v(J): optimal value of the LP over the rows J with the model objective.
// +inf when infeasible, -inf when unbounded.
template <typename Scalar>
Extended<Scalar> finite_subset_value(const SILPModel& model, const std::vector<RowId>& J,
                                     const AnalysisOptions& options = {});

// Finite rows first, then family points lo, lo+1, ... interleaved across families.
// Families must have integer domains.
std::vector<RowId> enumerate_rows(const SILPModel& model, std::size_t count);

template <typename Scalar>
struct ValueSequence {
    std::vector<std::size_t> sizes;  // |P_n|
    std::vector<Extended<Scalar>> values;
    bool nondecreasing = true;
    bool diverging = false;  // heuristic, see flags_divergence
    bool cauchy = false;     // last two values agree within the tolerance
    Extended<Scalar> limit;
    std::string note;
};

// v(P_1), ..., v(P_N) where P_n holds the first n enumerated rows. Stops early when a
// finite model runs out of rows.
template <typename Scalar>
ValueSequence<Scalar> value_sequence(const SILPModel& model, std::size_t N,
                                     const AnalysisOptions& options = {});

}  // namespace fmsilp
