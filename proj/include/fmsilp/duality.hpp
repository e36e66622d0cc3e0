#pragma once

#include "fmsilp/elimination.hpp"
#include "fmsilp/feasibility.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fmsilp {

enum class Answer { Yes, No, Unknown };
enum class Confidence { Exact, Converged, Inconclusive };

struct Verdict {
    Answer answer = Answer::Unknown;
    Confidence confidence = Confidence::Inconclusive;
    std::string note;
};

std::string to_string(Answer a);
std::string to_string(Confidence c);

// Indices into EliminationResult::rows of the augmented run.
struct IndexPartition {
    std::vector<std::size_t> i1, i2, i3, i4;
};

template <typename Scalar>
struct I4Term {
    std::size_t index;
    Scalar rhs;
    Scalar weight;  // sum of |dirty coefficients|, positive
};

template <typename Scalar>
struct StageDiagnostics {
    Extended<Scalar> S;  // sup over I3 of rhs; the same number as delta3
    std::optional<std::size_t> s_argmax;
    Extended<Scalar> delta2;
    std::optional<std::size_t> delta2_argmax;
    Extended<Scalar> i1_max;
    std::optional<std::size_t> i1_argmax;
    std::vector<I4Term<Scalar>> i4;
    std::vector<std::pair<Scalar, Extended<Scalar>>> omega_table;

    // max over I4 of rhs - delta * weight; -inf when I4 is empty.
    Extended<Scalar> omega(const Scalar& delta) const;
    // Index of the maximizing row; ties go to the smallest derived-row id.
    std::optional<std::size_t> omega_argmax(const Scalar& delta,
                                            const std::vector<DerivedRow<Scalar>>& rows) const;
};

template <typename Scalar>
struct StageAnalysis {
    int stage = 1;
    FiniteSystem<Scalar> system;     // raw stage rows
    FiniteSystem<Scalar> augmented;  // objective row first
    EliminationResult<Scalar> result;
    IndexPartition partition;
    StageDiagnostics<Scalar> diag;
    bool tidy = false;
};

enum class LStatus { ExactMinusInfinity, Converged, Inconclusive };

template <typename Scalar>
struct LEstimate {
    LStatus status = LStatus::ExactMinusInfinity;
    Extended<Scalar> value;
    Extended<Scalar> lower, upper;
    Scalar tolerance{0};
};

// Multipliers are indexed by rows of the raw stage system (objective entry dropped).
template <typename Scalar>
struct DualCertificate {
    int stage = 1;
    std::size_t row_id = 0;
    Multiplier<Scalar> v;
    Scalar value{0};
};

template <typename Scalar>
struct PrimalWitness {
    int stage = 1;
    Vector<Scalar> x;
    Scalar z{0};
    Scalar delta{0};
    Scalar objective{0};
};

template <typename Scalar>
struct InfeasibilityCertificate {
    int stage = 1;
    std::size_t row_id = 0;
    Multiplier<Scalar> u;  // sum u a^k = 0, sum u b = rhs > 0
    Scalar rhs{0};
};

template <typename Scalar>
struct SequenceEntry {
    int stage = 1;
    Scalar delta{0};
    std::size_t row_id = 0;
    Multiplier<Scalar> v;
    Scalar value{0};      // rhs of the selected row, equal to <b, v>
    Scalar max_coeff{0};  // max |dirty coefficient|
    Vector<Scalar> residual;  // sum_i a^k(i) v(i) - c_k
};

template <typename Scalar>
struct Verdicts {
    Verdict primal_feasible, primal_bounded, primal_solvable;
    Verdict dual_feasible, dual_bounded, dual_solvable;
    Verdict zero_gap, strong_duality, tidy;
    Extended<Scalar> primal_value, dual_value;
    Confidence primal_value_confidence = Confidence::Exact;
    Confidence dual_value_confidence = Confidence::Exact;
};

struct AnalysisOptions {
    EliminationOptions elimination;
    Rational exact_gap{1, 1000};  // staged convergence tolerance in Exact mode
    double float_gap = 1e-6;      // staged convergence tolerance in Float mode
};

template <typename Scalar>
struct DualityReport {
    bool staged = false;
    Vector<Scalar> objective;
    std::vector<Scalar> deltas;
    std::vector<StageAnalysis<Scalar>> stages;
    LEstimate<Scalar> L;
    Verdicts<Scalar> verdicts;
    bool s_dominates_i4 = false;  // S_s >= every I4 rhs at every stage, so S >= L
    bool s_diverging = false;
    bool delta2_diverging = false;
    std::optional<DualCertificate<Scalar>> dual_certificate;
    std::optional<PrimalWitness<Scalar>> primal_witness;
    std::optional<InfeasibilityCertificate<Scalar>> infeasibility;
    std::vector<std::string> notes;
    std::vector<std::string> invariant_violations;

    const StageAnalysis<Scalar>& last() const { return stages.back(); }
    Scalar tolerance() const { return L.tolerance; }
};

template <typename Scalar>
FiniteSystem<Scalar> build_augmented(const FiniteSystem<Scalar>& stage, const Vector<Scalar>& c);

template <typename Scalar>
IndexPartition partition_indices(const EliminationResult<Scalar>& result, const Tolerance& tol = {});

template <typename Scalar>
StageDiagnostics<Scalar> compute_diagnostics(const EliminationResult<Scalar>& result,
                                             const IndexPartition& partition,
                                             const std::vector<Scalar>& deltas);

template <typename Scalar>
StageAnalysis<Scalar> analyze_stage(const FiniteSystem<Scalar>& stage, const Vector<Scalar>& c,
                                    int stage_number, const std::vector<Scalar>& deltas,
                                    const AnalysisOptions& options = {});

template <typename Scalar>
LEstimate<Scalar> estimate_L(const std::vector<StageAnalysis<Scalar>>& stages,
                             const std::vector<Scalar>& deltas, bool staged,
                             const Scalar& tolerance);

template <typename Scalar>
Verdicts<Scalar> render_verdicts(const DualityReport<Scalar>& report);

// Throws DualInfeasible when I3 is empty.
template <typename Scalar>
DualCertificate<Scalar> extract_dual_certificate(const StageAnalysis<Scalar>& stage);

// Lifted point from (x(delta; ell), z). With a target, z is lowered to the target when
// the target is at least S; otherwise z = max(S, omega(delta)).
template <typename Scalar>
PrimalWitness<Scalar> lift_primal_point(const StageAnalysis<Scalar>& stage,
                                        const std::optional<Scalar>& target = std::nullopt,
                                        const Tolerance& tol = {});

// One entry per (stage, delta); needs a Converged L estimate.
template <typename Scalar>
std::vector<SequenceEntry<Scalar>> extract_feasible_sequence(const DualityReport<Scalar>& report);

template <typename Scalar>
struct RegularDuality {
    Extended<Scalar> z_star;
    std::optional<DualCertificate<Scalar>> certificate;
    std::vector<SequenceEntry<Scalar>> sequence;
};

template <typename Scalar>
RegularDuality<Scalar> regular_duality_report(const DualityReport<Scalar>& report);

// Exact (or tolerance) replay of a dual certificate against a raw stage system.
template <typename Scalar>
bool verify_dual_certificate(const FiniteSystem<Scalar>& system, const Vector<Scalar>& c,
                             const DualCertificate<Scalar>& cert, std::string* why = nullptr);

template <typename Scalar>
DualityReport<Scalar> analyze(const SILPModel& model, const GridSchedule& schedule,
                              const AnalysisOptions& options = {});

// Same pipeline on an explicit finite system.
template <typename Scalar>
DualityReport<Scalar> analyze_finite(const FiniteSystem<Scalar>& system, const Vector<Scalar>& c,
                                     const std::vector<Scalar>& deltas,
                                     const AnalysisOptions& options = {});

}  // namespace fmsilp
