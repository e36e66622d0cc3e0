#include "fmsilp/farkas.hpp"
#include "support/fixtures.hpp"
#include "support/random_systems.hpp"

#include <doctest.h>

using namespace fmsilp;
using R = Rational;

namespace {

// Independent replay of a cone certificate against the dense data.
bool replay(const testing_support::DenseSystem& d, const oracle::Vec& c, const R& rhs_d,
            const FarkasCertificate<R>& cert)
{
    const std::size_t n = c.size();
    oracle::Vec img(n, R(0));
    R val(0);
    for (const auto& [i, u] : cert.u.entries()) {
        if (!(u > 0)) return false;
        for (std::size_t k = 0; k < n; ++k) img[k] += u * d.a[i][k];
        val += u * d.b[i];
    }
    if (cert.kind == FarkasCertificateKind::InfeasibleCone)
        return img == oracle::Vec(n, R(0)) && val == 1;
    return img == c && cert.lambda0 >= 0 && val - cert.lambda0 == cert.d_prime && cert.d_prime >= rhs_d;
}

}  // namespace

TEST_CASE("random finite consequences match the oracle")
{
    std::mt19937_64 rng(43);
    int yes = 0, no = 0;
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = testing_support::pick(rng, 1, 3), m = testing_support::pick(rng, n, 5);
        auto d = testing_support::random_dense(rng, m, n, -3, 3, -3, 3);
        if (oracle::rank(d.a) != n) continue;
        oracle::Vec c;
        for (std::size_t k = 0; k < n; ++k) c.push_back(testing_support::uniform(rng, -3, 3));
        R rhs = testing_support::uniform(rng, -3, 3);
        bool want = oracle::implies(d.a, d.b, c, rhs);
        auto sys = testing_support::to_system(d);
        auto got = is_consequence<R>(sys, testing_support::to_vector(c), rhs);
        CHECK((got.verdict == FarkasVerdict::Yes) == want);
        if (want) {
            ++yes;
            REQUIRE(got.certificate);
            CHECK(replay(d, c, rhs, *got.certificate));
        } else {
            ++no;
            REQUIRE(got.counterexample);
            auto x = testing_support::from_vector(*got.counterexample);
            CHECK(oracle::satisfies(d.a, d.b, x));
            CHECK(oracle::dot(c, x) < rhs);
        }
    }
    CHECK(yes > 0);
    CHECK(no > 0);
}

TEST_CASE("infeasible system implies anything")
{
    testing_support::DenseSystem d{{{R(1)}, {R(-1)}}, {R(1), R(0)}};
    auto got = is_consequence<R>(testing_support::to_system(d), testing_support::to_vector({R(5)}), R(100));
    CHECK(got.verdict == FarkasVerdict::Yes);
    REQUIRE(got.certificate);
    CHECK(got.certificate->kind == FarkasCertificateKind::InfeasibleCone);
    CHECK(replay(d, {R(5)}, R(100), *got.certificate));
}

TEST_CASE("closure case without x1 >= 0")
{
    auto file = testing_support::load_data("not_primal_optimal_no_nonneg.json");
    Vector<R> c(2);
    c << 1, 0;
    auto got = is_consequence<R>(*file.model, file.schedule, c, R(0));
    CHECK(got.verdict == FarkasVerdict::YesInLimit);
    REQUIRE(got.certificate);
    const auto& cert = *got.certificate;
    CHECK(cert.kind == FarkasCertificateKind::ClosureSequence);
    std::string why;
    CHECK_MESSAGE(verify_farkas_certificate(got.systems, c, R(0), cert, &why), why);
    REQUIRE(cert.sequence.size() >= 2);
    for (std::size_t i = 1; i < cert.sequence.size(); ++i)
        CHECK(cert.sequence[i].gap <= cert.sequence[i - 1].gap);
    CHECK(cert.sequence.back().gap < cert.sequence.front().gap);
}

TEST_CASE("a stricter bound is refuted")
{
    auto file = testing_support::load_data("not_primal_optimal_no_nonneg.json");
    Vector<R> c(2);
    c << 1, 0;
    auto got = is_consequence<R>(*file.model, file.schedule, c, R(1, 100));
    CHECK(got.verdict == FarkasVerdict::No);
    REQUIRE(got.counterexample);
    CHECK(verify_counterexample(got.systems.back(), c, R(1, 100), *got.counterexample));
}

TEST_CASE("tampered certificates are rejected")
{
    testing_support::DenseSystem d{{{R(1), R(0)}, {R(0), R(1)}}, {R(1), R(2)}};
    oracle::Vec c = {R(1), R(1)};
    auto sys = testing_support::to_system(d);
    auto got = is_consequence<R>(sys, testing_support::to_vector(c), R(3));
    REQUIRE(got.verdict == FarkasVerdict::Yes);
    auto cert = *got.certificate;
    CHECK(verify_farkas_certificate(got.systems, testing_support::to_vector(c), R(3), cert));
    cert.u = cert.u.scaled(R(2));
    CHECK_FALSE(verify_farkas_certificate(got.systems, testing_support::to_vector(c), R(3), cert));
}
