#pragma once

#include "fmsilp/elimination.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fmsilp {

enum class KNCheck { Holds, Fails, Undecided };

std::string to_string(KNCheck k);

template <typename Scalar>
struct RecessionAnalysis {
    FiniteSystem<Scalar> system;  // homogeneous rows, objective row first
    EliminationResult<Scalar> result;
    std::vector<std::size_t> h1, h2;
    std::optional<Vector<Scalar>> ray;
    Scalar ray_objective{0};  // c.r
    bool zero_unique_solution = false;
    bool ray_outside_N = false;  // c.r < 0
    KNCheck kn = KNCheck::Undecided;
    std::string note;
};

// Rows a(i).x >= 0 for every stage row, preceded by -c.x >= 0.
template <typename Scalar>
FiniteSystem<Scalar> build_recession_system(const FiniteSystem<Scalar>& stage,
                                            const Vector<Scalar>& c);

// Throws PreconditionViolated when H2 is empty. The returned r satisfies every row of
// `system` with at least one strict inequality.
template <typename Scalar>
Vector<Scalar> extract_strict_ray(const FiniteSystem<Scalar>& system,
                                  const EliminationResult<Scalar>& result,
                                  const Tolerance& tol = {});

template <typename Scalar>
RecessionAnalysis<Scalar> analyze_recession(const FiniteSystem<Scalar>& system,
                                            const Vector<Scalar>& c,
                                            const EliminationOptions& options = {});

}  // namespace fmsilp
