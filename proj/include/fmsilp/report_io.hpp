#pragma once

#include "fmsilp/convex.hpp"
#include "fmsilp/duality.hpp"
#include "fmsilp/farkas.hpp"
#include "fmsilp/finite_approx.hpp"
#include "fmsilp/model_io.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace fmsilp {

inline constexpr const char* kToolVersion = "1.0.0";

struct ReportContext {
    std::string command;
    NumericMode mode = NumericMode::Exact;
    GridSchedule schedule;
    OrderRule order = OrderRule::Input;
    int convex_stage = 1;
};

template <typename Scalar>
nlohmann::ordered_json analysis_report(const DualityReport<Scalar>& report, const ReportContext& ctx);

template <typename Scalar>
nlohmann::ordered_json farkas_report(const FarkasResult<Scalar>& result, const Vector<Scalar>& c,
                                     const Scalar& d, const ReportContext& ctx);

template <typename Scalar>
nlohmann::ordered_json approx_report(const ValueSequence<Scalar>& seq,
                                     const std::vector<RowId>& rows, const ReportContext& ctx);

template <typename Scalar>
nlohmann::ordered_json convex_report(const ConvexAnalysis<Scalar>& analysis, const ReportContext& ctx);

// Derived rows with multipliers keyed by original row id; each row is also a
// "derived_row" certificate (sum u a = coeffs, sum u b = rhs).
template <typename Scalar>
nlohmann::ordered_json elimination_report(const FiniteSystem<Scalar>& system,
                                          const std::vector<DerivedRow<Scalar>>& rows,
                                          const std::vector<std::size_t>& clean,
                                          const std::vector<std::size_t>& dirty,
                                          const ReportContext& ctx);

struct CertificateCheck {
    std::string name;
    bool ok = false;
    std::string detail;
};

// Replays every certificate of a report against the model by direct summation over
// freshly instantiated rows; no elimination is run.
std::vector<CertificateCheck> certify(const nlohmann::json& report, const ModelFile& model);

}  // namespace fmsilp
