#include "fmsilp/feasibility.hpp"
#include "support/fixtures.hpp"
#include "support/random_systems.hpp"

#include <doctest.h>

using namespace fmsilp;
using R = Rational;

TEST_CASE("infeasible pair gives a certificate")
{
    oracle::Mat a = {{R(1)}, {R(-1)}};
    oracle::Vec b = {R(1), R(0)};
    auto sys = testing_support::to_system(testing_support::DenseSystem{a, b});
    auto v = check_feasibility(run_elimination(sys));
    REQUIRE(v.status == FeasibilityStatus::Infeasible);
    REQUIRE(v.certificate);
    CHECK(sys.image(*v.certificate)[0] == 0);
    CHECK(dot(sys.rhs_column(), *v.certificate) > 0);
}

TEST_CASE("witnesses of random feasible systems")
{
    std::mt19937_64 rng(23);
    int feasible = 0;
    for (int trial = 0; trial < 80; ++trial) {
        std::size_t n = testing_support::pick(rng, 1, 4), m = testing_support::pick(rng, 1, 7);
        auto d = testing_support::random_dense(rng, m, n, -3, 3, -3, 3);
        auto sys = testing_support::to_system(d);
        auto v = check_feasibility(run_elimination(sys));
        if (v.status == FeasibilityStatus::Feasible) {
            REQUIRE(v.witness);
            CHECK(oracle::satisfies(d.a, d.b, testing_support::from_vector(*v.witness)));
            ++feasible;
        } else {
            REQUIRE(v.certificate);
            auto img = sys.image(*v.certificate);
            CHECK(img.isZero());
            CHECK(dot(sys.rhs_column(), *v.certificate) > 0);
        }
    }
    CHECK(feasible > 0);
}

TEST_CASE("float witnesses are feasible within tolerance")
{
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = testing_support::pick(rng, 1, 3), m = testing_support::pick(rng, 1, 6);
        auto d = testing_support::random_dense(rng, m, n, -3, 3, -3, 3);
        auto exact = check_feasibility(run_elimination(testing_support::to_system<R>(d)));
        auto sys = testing_support::to_system<double>(d);
        auto v = check_feasibility(run_elimination(sys));
        CHECK(v.status == exact.status);
        if (v.witness) CHECK(sys.satisfied_by(*v.witness, 0.0, Tolerance{1e-7, 1e-7}));
    }
}

TEST_CASE("ratio sup grows with the stage for (1/i) x2 >= 1")
{
    auto m = testing_support::load_model("primal_infeasible_dual_solvable.json");
    GridSchedule g;
    g.integer_growth = IntegerGrowth::Linear;
    g.integer_base = 1;
    g.stages = 6;
    auto staged = check_feasibility_staged<R>(m, g);
    for (int s = 1; s <= 6; ++s) CHECK(staged.ratio_sups[static_cast<std::size_t>(s - 1)] == Extended<R>(R(s)));
    CHECK(staged.diverging);
    CHECK(staged.status == FeasibilityStatus::Infeasible);
}

TEST_CASE("x(delta) respects the ratio sup")
{
    auto m = testing_support::load_model("primal_infeasible_dual_solvable.json");
    GridSchedule g;
    g.integer_growth = IntegerGrowth::Linear;
    g.integer_base = 3;
    auto result = run_elimination(instantiate_stage<R>(m, g, 1));
    CHECK(h2_ratio_sup(result) == Extended<R>(R(3)));
    CHECK_THROWS_AS(build_xdelta(result, R(2)), PreconditionViolated);
    CHECK_THROWS_AS(build_xdelta(result, R(-1)), PreconditionViolated);
    auto p = build_xdelta(result, R(3));
    CHECK(p.values[1] == 3);
}

TEST_CASE("boundedness of the region")
{
    oracle::Mat a = {{R(1), R(0)}, {R(-1), R(0)}, {R(0), R(1)}, {R(0), R(-1)}};
    oracle::Vec b = {R(0), R(-1), R(0), R(-1)};
    auto box = run_elimination(testing_support::to_system(testing_support::DenseSystem{a, b}));
    CHECK(check_region_bounded(box).status == Boundedness::Bounded);
    a.pop_back();
    b.pop_back();
    auto open = run_elimination(testing_support::to_system(testing_support::DenseSystem{a, b}));
    CHECK(check_region_bounded(open).status == Boundedness::Unbounded);
}

TEST_CASE("divergence heuristic")
{
    using E = Extended<R>;
    CHECK(flags_divergence<R>({E(R(1)), E(R(2)), E(R(3)), E(R(4))}));
    CHECK_FALSE(flags_divergence<R>({E(R(1)), E(R(2)), E(R(3))}));
    CHECK_FALSE(flags_divergence<R>({E(R(1)), E(R(3, 2)), E(R(7, 4)), E(R(15, 8))}));
    CHECK(flags_divergence<R>({E(R(0)), E::pos_inf()}));
    using D = Extended<double>;
    CHECK(flags_divergence<double>({D(0.1), D(0.2), D(0.4), D(0.8)}));
}
