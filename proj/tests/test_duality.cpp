#include "fmsilp/duality.hpp"
#include "support/fixtures.hpp"
#include "support/random_systems.hpp"

#include <doctest.h>

using namespace fmsilp;
using R = Rational;

namespace {

DualityReport<R> two_point_stage(bool with_nonneg)
{
    auto m = testing_support::load_model("not_primal_optimal.json");
    std::vector<RowId> ids = {RowId::parse("f@1"), RowId::parse("f@2")};
    if (with_nonneg) ids.insert(ids.begin(), RowId::atom("nonneg"));
    auto sys = instantiate_rows<R>(m, ids);
    return analyze_finite<R>(sys, objective_vector<R>(m), {R(2), R(4)});
}

}  // namespace

TEST_CASE("index partition of the two-point stage")
{
    auto r = two_point_stage(true);
    const auto& p = r.last().partition;
    CHECK(p.i1.empty());
    CHECK(p.i2.empty());
    CHECK(p.i3.size() == 1);
    CHECK(p.i4.size() == 2);
    CHECK(r.last().diag.S == Extended<R>(R(0)));
    // omega(2) = max(2 - 2, 3/4 - 2/4) = 1/4
    CHECK(r.last().diag.omega(R(2)) == Extended<R>(R(1, 4)));
    REQUIRE(r.dual_certificate);
    const auto& v = r.dual_certificate->v;
    CHECK(v.size() == 1);
    CHECK(v.value(0) == 1);
    CHECK(r.dual_certificate->value == 0);
    CHECK(verify_dual_certificate(r.last().system, r.objective, *r.dual_certificate));
    CHECK(r.invariant_violations.empty());
}

TEST_CASE("dropping x1 >= 0 empties I3")
{
    auto r = two_point_stage(false);
    CHECK(r.last().partition.i3.empty());
    CHECK_FALSE(r.dual_certificate);
    CHECK(r.verdicts.dual_feasible.answer == Answer::No);
    CHECK_THROWS_AS(extract_dual_certificate(r.last()), DualInfeasible);
}

TEST_CASE("random finite LPs match vertex enumeration")
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = testing_support::pick(rng, 1, 3), m = testing_support::pick(rng, n, 6);
        oracle::Vec c;
        auto d = testing_support::random_feasible_bounded(rng, m, n, c);
        auto want = oracle::lp_min(d.a, d.b, c);
        REQUIRE(want.status == oracle::LPStatus::Optimal);
        auto sys = testing_support::to_system(d);
        auto r = analyze_finite<R>(sys, testing_support::to_vector(c), GridSchedule::default_deltas(4));
        CHECK(r.verdicts.primal_value == Extended<R>(want.value));
        CHECK(r.verdicts.dual_value == Extended<R>(want.value));
        CHECK(r.L.status == LStatus::ExactMinusInfinity);
        REQUIRE(r.dual_certificate);
        CHECK(verify_dual_certificate(sys, r.objective, *r.dual_certificate));
        REQUIRE(r.primal_witness);
        CHECK(oracle::satisfies(d.a, d.b, testing_support::from_vector(r.primal_witness->x)));
        CHECK(r.primal_witness->objective == want.value);
        CHECK(r.verdicts.zero_gap.answer == Answer::Yes);
        CHECK(r.invariant_violations.empty());
    }
}

TEST_CASE("infeasible finite LP")
{
    oracle::Mat a = {{R(1), R(0)}, {R(-1), R(0)}, {R(0), R(1)}};
    oracle::Vec b = {R(1), R(0), R(0)};
    auto sys = testing_support::to_system(testing_support::DenseSystem{a, b});
    Vector<R> c(2);
    c << 1, 1;
    auto r = analyze_finite<R>(sys, c, {R(2)});
    CHECK(r.verdicts.primal_feasible.answer == Answer::No);
    REQUIRE(r.infeasibility);
    CHECK(sys.image(r.infeasibility->u).isZero());
    CHECK(dot(sys.rhs_column(), r.infeasibility->u) == r.infeasibility->rhs);
    CHECK_FALSE(r.primal_witness);
}

TEST_CASE("unbounded finite LP has an empty dual")
{
    oracle::Mat a = {{R(1), R(0)}, {R(0), R(1)}};
    oracle::Vec b = {R(0), R(0)};
    auto sys = testing_support::to_system(testing_support::DenseSystem{a, b});
    Vector<R> c(2);
    c << -1, 1;
    auto r = analyze_finite<R>(sys, c, {R(2)});
    CHECK(r.verdicts.primal_bounded.answer == Answer::No);
    CHECK(r.verdicts.dual_feasible.answer == Answer::No);
    CHECK(r.verdicts.primal_value.is_neg_inf());
}

TEST_CASE("float mode agrees with exact mode on finite LPs")
{
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = testing_support::pick(rng, 1, 3), m = testing_support::pick(rng, n, 6);
        oracle::Vec c;
        auto d = testing_support::random_feasible_bounded(rng, m, n, c);
        auto want = oracle::lp_min(d.a, d.b, c).value.convert_to<double>();
        auto r = analyze_finite<double>(testing_support::to_system<double>(d), testing_support::to_vector<double>(c),
                                        {2.0, 4.0});
        REQUIRE(r.verdicts.primal_value.finite());
        CHECK(r.verdicts.primal_value.value() == doctest::Approx(want));
    }
}

TEST_CASE("staged primal-solvable example")
{
    auto m = testing_support::load_model("primal_solvable.json");
    GridSchedule g;
    g.stages = 4;
    auto r = analyze<R>(m, g);
    for (const auto& st : r.stages) CHECK(st.diag.S == Extended<R>(R(0)));
    // omega_N(delta) = -delta / N with N the largest grid index.
    const auto& last = r.last();
    R top = g.grid(m.families[0].domain, 4).back();
    CHECK(last.diag.omega(R(2)) == Extended<R>(R(-2) / top));
    CHECK(r.verdicts.zero_gap.answer == Answer::Yes);
    CHECK(r.verdicts.dual_solvable.answer == Answer::Yes);
    REQUIRE(r.primal_witness);
    CHECK(r.primal_witness->objective == 0);
    auto rd = regular_duality_report(r);
    CHECK(rd.certificate);
}
