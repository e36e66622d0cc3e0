#include "fmsilp/errors.hpp"
#include "fmsilp/model_io.hpp"
#include "fmsilp/report_io.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

#include <filesystem>

using namespace fmsilp;
using R = Rational;

namespace {

std::vector<std::string> data_files()
{
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(FMSILP_TEST_DATA)) {
        auto name = e.path().filename().string();
        if (name.rfind("bad_", 0) != 0 && e.path().extension() == ".json") out.push_back(name);
    }
    return out;
}

ParseError parse_error(const std::string& text)
{
    try {
        parse_model(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected a parse error");
    return ParseError("");
}

}  // namespace

TEST_CASE("example files parse and round trip")
{
    auto files = data_files();
    CHECK(files.size() >= 8);
    for (const auto& name : files) {
        CAPTURE(name);
        auto file = testing_support::load_data(name);
        CHECK(parse_model(serialize_model(file)) == file);
    }
}

TEST_CASE("not-primal-optimal file")
{
    auto file = testing_support::load_data("not_primal_optimal.json");
    REQUIRE(file.model);
    CHECK(file.model->rows.size() == 1);
    CHECK(file.model->families.size() == 1);
    CHECK(file.model->families[0].domain.lo == 1);
    CHECK_FALSE(file.model->families[0].domain.hi);
    CHECK_FALSE(file.convex);
}

TEST_CASE("rational literals are exact")
{
    auto file = parse_model(R"({"version": "1", "variables": ["x"], "objective": ["1/3"],
        "constraints": [{"coeffs": {"x": "0.1"}, "rhs": "-2/6"}]})");
    CHECK(file.model->objective[0] == R(1, 3));
    CHECK(file.model->rows[0].coeffs[0] == R(1, 10));
    CHECK(file.model->rows[0].rhs == R(-1, 3));
    CHECK(file.model->rows[0].id == RowId::atom("r1"));
}

TEST_CASE("schedule overrides")
{
    auto file = parse_model(R"({"version": "1", "variables": ["x"], "objective": [1],
        "constraints": [{"coeffs": {"x": 1}, "rhs": 0}],
        "schedule": {"stages": 3, "delta_max": 64, "integer_growth": "linear"}})");
    CHECK(file.has_schedule);
    CHECK(file.schedule.stages == 3);
    CHECK(file.schedule.deltas.back() == 64);
    CHECK(file.schedule.integer_growth == IntegerGrowth::Linear);
}

TEST_CASE("unknown variable is located")
{
    try {
        testing_support::load_data("bad_unknown_variable.json");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 6);
        CHECK(e.message().find("x3") != std::string::npos);
    }
}

TEST_CASE("malformed files")
{
    CHECK(parse_error(R"({"variables": ["x"], "objective": [1], "constraints": []})").message().find("version") !=
          std::string::npos);
    CHECK(parse_error(R"({"version": "2", "variables": ["x"], "objective": [1], "constraints": []})").line() == 1);
    auto e = parse_error("{\"version\": \"1\",\n \"variables\": [\"x\"],\n \"objective\": [0.5],\n \"constraints\": []}");
    CHECK(e.line() == 3);
    e = parse_error(R"({"version": "1", "variables": ["t"], "objective": [1],
        "constraints": [{"family": "f", "parameter": "t", "domain": {"type": "real", "lo": 1},
                         "coeffs": {"t": "1/"}, "rhs": "0"}]})");
    CHECK(e.line() == 3);
    CHECK_THROWS_AS(parse_model("{not json"), ParseError);
    CHECK_THROWS_AS(parse_model(R"({"version": "1", "variables": ["x"], "objective": [1], "constraints": [],
        "extra": 1})"),
                    ParseError);
    CHECK_THROWS_AS(parse_model(R"({"version": "1", "variables": ["x"], "objective": [1],
        "constraints": [{"family": "f", "parameter": "t", "domain": {"type": "real", "lo": 1},
                         "coeffs": {"x": "t"}, "rhs": "0"},
                        {"family": "f", "parameter": "t", "domain": {"type": "real", "lo": 1},
                         "coeffs": {"x": "t"}, "rhs": "1"}]})"),
                    ParseError);
}

TEST_CASE("reports replay and tampering is caught")
{
    auto file = testing_support::load_data("primal_solvable.json");
    ReportContext ctx;
    ctx.command = "analyze";
    ctx.schedule = file.schedule;
    auto report = analysis_report(analyze<R>(*file.model, file.schedule), ctx);
    auto j = nlohmann::json::parse(report.dump());
    auto checks = certify(j, file);
    REQUIRE_FALSE(checks.empty());
    for (const auto& c : checks) CHECK_MESSAGE(c.ok, (c.name + ": " + c.detail));

    auto bad = j;
    for (auto& cert : bad["certificates"])
        if (cert["type"] == "dual_solution") cert["multipliers"]["x1_nonneg"] = "3/2";
    bool failed = false;
    for (const auto& c : certify(bad, file))
        if (!c.ok) {
            failed = true;
            CHECK(c.name == "dual_solution");
        }
    CHECK(failed);
}

TEST_CASE("float reports replay within tolerance")
{
    auto file = testing_support::load_data("not_primal_optimal.json");
    ReportContext ctx;
    ctx.mode = NumericMode::Float;
    ctx.schedule = file.schedule;
    ctx.schedule.stages = 3;
    auto report = analysis_report(analyze<double>(*file.model, ctx.schedule), ctx);
    CHECK(report["provenance"]["mode"] == "float");
    for (const auto& c : certify(nlohmann::json::parse(report.dump()), file)) CHECK_MESSAGE(c.ok, (c.name + ": " + c.detail));
}
