#pragma once

#include "fmsilp/duality.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fmsilp {

enum class FarkasVerdict { Yes, No, YesInLimit, YesWithinTolerance };
enum class FarkasCertificateKind { ExactCone, InfeasibleCone, ClosureSequence };

std::string to_string(FarkasVerdict v);
std::string to_string(FarkasCertificateKind k);

// One multiplier of a closure sequence, indexed by rows of its stage system.
template <typename Scalar>
struct ClosureEntry {
    int stage = 1;
    Scalar delta{0};
    std::size_t row_id = 0;
    Multiplier<Scalar> u;
    Vector<Scalar> image;  // sum u(i) a(i)
    Scalar value{0};       // sum u(i) b(i)
    Scalar gap{0};         // max_k |image_k - target_k|
};

template <typename Scalar>
struct FarkasCertificate {
    FarkasCertificateKind kind = FarkasCertificateKind::ExactCone;
    int stage = 1;
    // ExactCone: sum u a = c and sum u b - lambda0 = d_prime >= d.
    // InfeasibleCone: sum u a = 0 and sum u b = 1.
    Multiplier<Scalar> u;
    Scalar lambda0{0};
    Scalar d_prime{0};
    // ClosureSequence: images approach `target` (c, or 0 for an infeasible limit).
    Vector<Scalar> target;
    Scalar target_value{0};
    std::vector<ClosureEntry<Scalar>> sequence;
};

template <typename Scalar>
struct FarkasResult {
    FarkasVerdict verdict = FarkasVerdict::No;
    std::optional<FarkasCertificate<Scalar>> certificate;
    std::optional<Vector<Scalar>> counterexample;  // feasible for the last stage, c.x < d
    Extended<Scalar> z_star;
    bool staged = false;
    std::vector<FiniteSystem<Scalar>> systems;  // stage systems, index stage - 1
    std::string note;
};

// Is c.x >= d implied by the model's constraints? The model objective is ignored.
template <typename Scalar>
FarkasResult<Scalar> is_consequence(const SILPModel& model, const GridSchedule& schedule,
                                    const Vector<Scalar>& c, const Scalar& d,
                                    const AnalysisOptions& options = {});

template <typename Scalar>
FarkasResult<Scalar> is_consequence(const FiniteSystem<Scalar>& system, const Vector<Scalar>& c,
                                    const Scalar& d, const AnalysisOptions& options = {});

// Replays a certificate by direct summation (exact in Exact mode).
template <typename Scalar>
bool verify_farkas_certificate(const std::vector<FiniteSystem<Scalar>>& systems,
                               const Vector<Scalar>& c, const Scalar& d,
                               const FarkasCertificate<Scalar>& cert, std::string* why = nullptr);

template <typename Scalar>
bool verify_counterexample(const FiniteSystem<Scalar>& system, const Vector<Scalar>& c,
                           const Scalar& d, const Vector<Scalar>& x, const Tolerance& tol = {});

}  // namespace fmsilp
