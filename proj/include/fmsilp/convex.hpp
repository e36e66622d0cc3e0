#pragma once

#include "fmsilp/duality.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fmsilp {

// Axis-aligned grid; stage s uses (points - 1) * 2^(s-1) + 1 points per axis.
struct BoxGrid {
    std::vector<Rational> lo, hi;
    int points = 5;

    friend bool operator==(const BoxGrid&, const BoxGrid&) = default;
};

// max f(x) s.t. g_i(x) >= 0, sampled over Omega. f and g are assumed concave; this is
// the caller's contract and is not checked.
struct ConvexProgram {
    std::vector<std::string> variables;
    Expression f;
    std::vector<Expression> g;
    std::vector<std::vector<Rational>> points;  // explicit Omega, used when box is unset
    std::optional<BoxGrid> box;
    std::optional<Rational> cap;  // default 1 + max sampled f

    void validate() const;

    friend bool operator==(const ConvexProgram&, const ConvexProgram&) = default;
};

std::vector<std::vector<Rational>> sample_points(const ConvexProgram& cp, int stage = 1);

// Variables (sigma, lambda_1..lambda_p), minimize sigma; one row per sample
// sigma - sum lambda_i g_i(x) >= min(f(x), B), then lambda_i >= 0.
SILPModel build_cp_silp(const ConvexProgram& cp, int stage = 1);

// First sample with every g_i > 0 (> 1e-6 in Float mode).
template <typename Scalar>
std::optional<std::vector<Rational>> slater_scan(const ConvexProgram& cp, int stage = 1);

template <typename Scalar>
struct LagrangianSolution {
    std::vector<Scalar> lambda;
    Scalar sigma{0};
    Scalar value{0};  // L(lambda) = max over the sample of min(f, B) + lambda.g
    Vector<Scalar> x_bar;
    Scalar weight_sum{0};      // sum of u(x) over sample rows; 1 when consistent
    bool x_bar_feasible = false;  // g_i(x_bar) >= -tol
};

template <typename Scalar>
struct ConvexAnalysis {
    ConvexProgram program;
    int stage = 1;
    std::vector<std::vector<Rational>> samples;
    SILPModel model;
    DualityReport<Scalar> report;
    std::optional<std::vector<Rational>> slater;
    std::optional<LagrangianSolution<Scalar>> lagrangian;
    Extended<Scalar> max_feasible_f;  // over samples with g >= 0
    std::vector<std::string> notes;
    std::vector<std::string> check_failures;
};

// Throws DualInfeasible without a dual certificate and PreconditionViolated without a
// primal witness.
template <typename Scalar>
LagrangianSolution<Scalar> recover_lagrangian(const ConvexAnalysis<Scalar>& analysis);

template <typename Scalar>
ConvexAnalysis<Scalar> analyze_convex(const ConvexProgram& cp, int stage = 1,
                                      const AnalysisOptions& options = {});

}  // namespace fmsilp
