#include "fmsilp/convex.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

using namespace fmsilp;
using R = Rational;

namespace {

ConvexProgram slater_program(int points)
{
    ConvexProgram cp;
    cp.variables = {"x"};
    cp.f = Expression::parse("x", cp.variables);
    cp.g = {Expression::parse("1 - x", cp.variables)};
    cp.box = BoxGrid{{R(0)}, {R(2)}, points};
    return cp;
}

// L(lambda) = max over x in [0, 2] of x + lambda (1 - x) = max(2 - lambda, lambda).
R lagrangian_oracle(const R& lambda)
{
    return std::max(R(2 - lambda), lambda);
}

}  // namespace

TEST_CASE("sampled SILP rows")
{
    auto cp = slater_program(5);
    auto samples = sample_points(cp);
    REQUIRE(samples.size() == 5);
    auto m = build_cp_silp(cp);
    CHECK(m.variables.size() == 2);
    CHECK(m.objective == std::vector<R>{1, 0});
    // Default cap B = 1 + max f = 3, above every sample.
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(m.rows[i].coeffs[0] == 1);
        CHECK(m.rows[i].coeffs[1] == samples[i][0] - 1);
        CHECK(m.rows[i].rhs == samples[i][0]);
    }
    cp.cap = R(1);
    auto capped = build_cp_silp(cp);
    CHECK(capped.rows[4].rhs == 1);
    CHECK(sample_points(cp, 2).size() == 9);
}

TEST_CASE("two-sample disc program")
{
    ConvexProgram cp;
    cp.variables = {"x1", "x2"};
    cp.f = Expression::parse("0", cp.variables);
    cp.g = {Expression::parse("1 - x1^2 - x2^2", cp.variables), Expression::parse("-1 + x1", cp.variables)};
    cp.points = {{R(1), R(0)}, {R(0), R(0)}};
    auto m = build_cp_silp(cp);
    REQUIRE(m.rows.size() == 4);
    // sigma + lambda1 (x1^2 + x2^2 - 1) + lambda2 (1 - x1) >= 0 at each sample.
    CHECK(m.rows[0].coeffs == std::vector<R>{1, 0, 0});
    CHECK(m.rows[1].coeffs == std::vector<R>{1, -1, 1});
    CHECK(m.rows[0].rhs == 0);
    CHECK(m.rows[1].rhs == 0);
}

TEST_CASE("Slater scan")
{
    auto w = slater_scan<R>(slater_program(5));
    REQUIRE(w);
    CHECK((*w)[0] == 0);
    auto none = slater_scan<R>(*testing_support::load_data("convex_no_slater.json").convex);
    CHECK_FALSE(none);
    ConvexProgram empty = slater_program(5);
    empty.g.clear();
    auto first = slater_scan<R>(empty);
    REQUIRE(first);
    CHECK((*first)[0] == 0);
}

TEST_CASE("Slater example recovers lambda = 1")
{
    auto a = analyze_convex<R>(slater_program(33));
    CHECK(a.check_failures.empty());
    CHECK(a.report.verdicts.tidy.answer == Answer::Yes);
    CHECK(a.report.verdicts.zero_gap.answer == Answer::Yes);
    REQUIRE(a.lagrangian);
    CHECK(a.lagrangian->lambda[0] == 1);
    CHECK(a.lagrangian->value == lagrangian_oracle(a.lagrangian->lambda[0]));
    CHECK(a.lagrangian->value == 1);
    CHECK(a.lagrangian->x_bar[0] == 1);
    CHECK(a.lagrangian->weight_sum == 1);
    CHECK(a.lagrangian->x_bar_feasible);
}

TEST_CASE("weak duality and the sampled optimum")
{
    for (int points : {3, 5, 9}) {
        auto a = analyze_convex<R>(slater_program(points));
        const auto& v = a.report.verdicts;
        CHECK(v.primal_value >= v.dual_value);
        CHECK(v.dual_value >= a.max_feasible_f);
        CHECK(a.max_feasible_f == Extended<R>(R(1)));
    }
}

TEST_CASE("no constraints: value is the best sample")
{
    auto cp = slater_program(5);
    cp.g.clear();
    auto a = analyze_convex<R>(cp);
    REQUIRE(a.lagrangian);
    CHECK(a.lagrangian->lambda.empty());
    CHECK(a.lagrangian->value == 2);
}

TEST_CASE("float mode on the Slater example")
{
    auto a = analyze_convex<double>(slater_program(33));
    REQUIRE(a.lagrangian);
    CHECK(a.lagrangian->lambda[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(a.lagrangian->value == doctest::Approx(1.0).epsilon(1e-6));
}
