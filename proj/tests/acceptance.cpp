// Runs the acceptance criteria and prints one pass/fail line per criterion.
#include "fmsilp/convex.hpp"
#include "fmsilp/farkas.hpp"
#include "fmsilp/finite_approx.hpp"
#include "fmsilp/report_io.hpp"
#include "support/fixtures.hpp"
#include "support/random_systems.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace fmsilp;
using R = Rational;
using E = Extended<R>;
namespace ts = testing_support;

namespace {

constexpr double kItemSeconds = 10.0;
constexpr double kSuiteSeconds = 180.0;

// Collects failed checks; the first few are reported.
class Checker {
public:
    void check(bool ok, const std::string& what)
    {
        ++count_;
        if (ok) return;
        if (failures_.size() < 4) failures_.push_back(what);
        ++failed_;
    }
    void note(const std::string& s) { notes_.push_back(s); }
    bool ok() const { return failed_ == 0; }
    std::string summary() const
    {
        std::ostringstream out;
        if (ok()) {
            out << count_ << " checks";
            for (const auto& n : notes_) out << "; " << n;
        } else {
            out << failed_ << " of " << count_ << " checks failed: ";
            for (std::size_t i = 0; i < failures_.size(); ++i) out << (i ? "; " : "") << failures_[i];
        }
        return out.str();
    }

private:
    std::size_t count_ = 0, failed_ = 0;
    std::vector<std::string> failures_, notes_;
};

double as_double(const R& r)
{
    return r.convert_to<double>();
}

std::string str(const E& e)
{
    return e.str();
}

// Independent replay: sum over v of rows equals c and of rhs equals the value.
bool replay_dual(const FiniteSystem<R>& sys, const Vector<R>& c, const Multiplier<R>& v, const R& value)
{
    Vector<R> img = Vector<R>::Zero(c.size());
    R val(0);
    for (const auto& [i, u] : v.entries()) {
        if (!(u > 0)) return false;
        img += sys.rows[i].coeffs * u;
        val += sys.rows[i].rhs * u;
    }
    return img == c && val == value;
}

bool report_certifies(const DualityReport<R>& report, const ModelFile& file, const GridSchedule& schedule,
                      Checker& ck)
{
    ReportContext ctx;
    ctx.command = "analyze";
    ctx.schedule = schedule;
    auto j = nlohmann::json::parse(analysis_report(report, ctx).dump());
    bool all = true;
    for (const auto& c : certify(j, file)) {
        ck.check(c.ok, "certificate " + c.name + ": " + c.detail);
        all = all && c.ok;
    }
    return all;
}

// ---- criteria ------------------------------------------------------------

void criterion1(Checker& ck)
{
    auto file = ts::load_data("not_primal_optimal.json");
    const auto& g = file.schedule;
    ck.check(g.stages == 8 && g.deltas.back() == 1024, "schedule is 8 stages with delta up to 2^10");
    ck.check(g.grid(file.model->families[0].domain, 8).back() == 4096, "t-grid reaches 2^12");
    auto r = analyze<R>(*file.model, g);
    for (const auto& st : r.stages)
        ck.check(st.diag.S == E(R(0)), "S = 0 at stage " + std::to_string(st.stage) + ", got " + str(st.diag.S));
    for (int d : {2, 3, 5, 9}) {
        const R want(1, 4 * (d - 1));
        double prev = HUGE_VAL;
        for (const auto& st : r.stages) {
            auto w = st.diag.omega(R(d));
            double err = w.finite() ? std::fabs(as_double(w.value() - want)) : HUGE_VAL;
            ck.check(err <= prev, "omega(" + std::to_string(d) + ") error shrinks at stage " + std::to_string(st.stage));
            prev = err;
        }
        ck.check(prev <= 1e-3, "omega(" + std::to_string(d) + ") within 1e-3 of 1/(4(delta-1)), error " +
                                   std::to_string(prev));
    }
    ck.check(r.L.status == LStatus::Converged, "L converged");
    ck.check(r.L.value.finite() && std::fabs(as_double(r.L.value.value())) <= 1e-3, "L = 0 +- 1e-3, got " + str(r.L.value));
    ck.check(r.verdicts.zero_gap.answer == Answer::Yes, "zero_gap yes");
    ck.check(r.verdicts.primal_solvable.answer == Answer::Unknown, "primal_solvable unknown");
    ck.check(r.invariant_violations.empty(), "no invariant violations");
    report_certifies(r, file, g, ck);
    ck.note("L = " + std::to_string(as_double(r.L.value.value())));
}

void criterion2(Checker& ck)
{
    auto file = ts::load_data("primal_solvable.json");
    auto r = analyze<R>(*file.model, file.schedule);
    ck.check(r.verdicts.primal_value == E(R(0)), "primal_value = 0, got " + str(r.verdicts.primal_value));
    ck.check(r.last().diag.S == E(R(0)) && r.last().diag.s_argmax.has_value(), "S = 0 attained");
    ck.check(r.verdicts.dual_solvable.answer == Answer::Yes, "dual_solvable yes");
    ck.check(r.verdicts.zero_gap.answer == Answer::Yes, "zero_gap yes");
    ck.check(r.primal_witness.has_value(), "primal witness present");
    if (r.primal_witness) {
        const auto& x = r.primal_witness->x;
        // Whole family: x1 >= 0, x2 <= 1 and x1 >= x2 / i for every i >= 3.
        bool feasible = x[0] >= 0 && x[1] <= 1 && x[0] >= R(x[1] / 3) && x[0] >= 0;
        ck.check(feasible, "witness satisfies every row of the model");
        ck.check(x[0] == 0, "witness objective 0");
        auto stage = instantiate_stage<R>(*file.model, file.schedule, r.primal_witness->stage);
        ck.check(stage.satisfied_by(x, R(0), {}), "witness satisfies its stage");
    }
    report_certifies(r, file, file.schedule, ck);
}

void criterion3(Checker& ck)
{
    auto file = ts::load_data("primal_infeasible_dual_solvable.json");
    const auto& m = *file.model;
    auto staged = check_feasibility_staged<R>(m, file.schedule);
    const auto& sups = staged.ratio_sups;
    for (std::size_t s = 1; s < sups.size(); ++s)
        ck.check(sups[s].finite() && sups[s - 1].finite() &&
                     sups[s].value() - sups[s - 1].value() == sups[1].value() - sups[0].value() &&
                     sups[s].value() > sups[s - 1].value(),
                 "ratio sup grows by a constant step");
    ck.check(staged.diverging, "divergence flagged");
    auto r = analyze<R>(m, file.schedule);
    ck.check(r.verdicts.primal_feasible.answer == Answer::No, "primal infeasible");
    ck.check(r.dual_certificate.has_value(), "dual certificate extracted");
    if (r.dual_certificate) {
        const auto& sys = r.stages.at(static_cast<std::size_t>(r.dual_certificate->stage - 1)).system;
        ck.check(verify_dual_certificate(sys, r.objective, *r.dual_certificate), "dual certificate verifies");
        ck.check(replay_dual(sys, r.objective, r.dual_certificate->v, r.dual_certificate->value),
                 "dual certificate replays by direct summation");
    }
    ck.check(r.verdicts.dual_solvable.answer == Answer::Yes, "dual solvable");
    auto seq = value_sequence<R>(m, 16);
    for (const auto& v : seq.values) ck.check(v == E(R(0)), "v(P_n) = 0, got " + str(v));
    ck.note("ratio sups " + str(sups.front()) + " .. " + str(sups.back()));
}

void criterion4(Checker& ck)
{
    auto file = ts::load_data("unbounded_dual.json");
    auto r = analyze<R>(*file.model, file.schedule);
    for (const auto& st : r.stages) {
        ck.check(st.partition.i1.empty(), "I1 empty at stage " + std::to_string(st.stage));
        ck.check(st.diag.S == E(R(st.stage)), "S_s = s at stage " + std::to_string(st.stage) + ", got " + str(st.diag.S));
    }
    ck.check(r.s_diverging, "S divergence flagged");
    ck.check(r.verdicts.dual_bounded.answer == Answer::No, "dual_bounded no");
}

FiniteSystem<R> criterion5_system()
{
    auto m = ts::load_model("elimination_example.json");
    return instantiate_stage<R>(m, GridSchedule{}, 1);
}

void criterion5(Checker& ck)
{
    auto sys = criterion5_system();
    std::size_t next = sys.num_rows();
    auto rows = eliminate_variable(initial_rows(sys), 0, sys.augmented, next);
    std::vector<std::pair<R, R>> want = {{R(3, 2), R(5, 2)}, {R(1), R(3)}, {R(2), R(2)}};
    ck.check(rows.size() == 3, "three rows after eliminating x1");
    for (const auto& w : want) {
        bool found = false;
        for (const auto& h : rows)
            if (h.row.coeffs[0] == 0 && h.row.coeffs[1] == w.first && h.row.rhs == w.second) found = true;
        ck.check(found, "row " + w.first.str() + " x2 >= " + w.second.str());
    }
}

struct RandomLP {
    ts::DenseSystem d;
    oracle::Vec c;
};

std::vector<RandomLP> criterion6_lps()
{
    std::mt19937_64 rng(20240601);
    std::vector<RandomLP> out;
    for (int i = 0; i < 200; ++i) {
        std::size_t n = ts::pick(rng, 1, 4), m = ts::pick(rng, n, 8);
        RandomLP lp;
        lp.d = ts::random_feasible_bounded(rng, m, n, lp.c);
        out.push_back(lp);
    }
    return out;
}

// Chernikov pruning and min-fill keep the random LPs within budget.
AnalysisOptions lp_options()
{
    AnalysisOptions o;
    o.elimination.prune_support = true;
    o.elimination.order_rule = OrderRule::MinFill;
    return o;
}

void criterion6(Checker& ck)
{
    for (const auto& lp : criterion6_lps()) {
        auto want = oracle::lp_min(lp.d.a, lp.d.b, lp.c);
        ck.check(want.status == oracle::LPStatus::Optimal, "oracle optimal");
        auto sys = ts::to_system(lp.d);
        auto c = ts::to_vector(lp.c);
        auto r = analyze_finite<R>(sys, c, GridSchedule::default_deltas(10), lp_options());
        ck.check(r.verdicts.primal_value == E(want.value),
                 "primal value " + str(r.verdicts.primal_value) + " vs oracle " + want.value.str());
        ck.check(r.verdicts.dual_value == E(want.value),
                 "dual value " + str(r.verdicts.dual_value) + " vs oracle " + want.value.str());
        ck.check(r.L.status == LStatus::ExactMinusInfinity, "L = -inf");
        ck.check(r.dual_certificate && replay_dual(sys, c, r.dual_certificate->v, r.dual_certificate->value),
                 "dual certificate replays");
    }
}

void criterion7(Checker& ck)
{
    std::size_t runs = 0;
    auto verify = [&](const FiniteSystem<R>& sys, const EliminationResult<R>& res, const std::string& what) {
        ++runs;
        auto v = verify_multiplier_identities(sys, res);
        ck.check(v.empty(), what + ": " + (v.empty() ? "" : v.front().detail));
    };
    auto stages_of = [&](const std::string& name) {
        auto file = ts::load_data(name);
        auto r = analyze<R>(*file.model, file.schedule);
        for (const auto& st : r.stages) verify(st.augmented, st.result, name + " stage " + std::to_string(st.stage));
        auto staged = file.model->finite() ? 1 : file.schedule.stages;
        for (int s = 1; s <= staged; ++s) {
            auto sys = instantiate_stage<R>(*file.model, file.schedule, s);
            verify(sys, run_elimination(sys), name + " raw stage " + std::to_string(s));
        }
    };
    for (const char* name : {"not_primal_optimal.json", "primal_solvable.json", "primal_infeasible_dual_solvable.json",
                             "unbounded_dual.json"})
        stages_of(name);
    auto four = criterion5_system();
    verify(four, run_elimination(four), "four-row example");
    for (const auto& lp : criterion6_lps()) {
        auto aug = build_augmented(ts::to_system(lp.d), ts::to_vector(lp.c));
        verify(aug, run_elimination(aug, lp_options().elimination), "random LP");
    }

    std::mt19937_64 rng(777);
    int done = 0;
    while (done < 50) {
        std::size_t n = ts::pick(rng, 1, 3), m = ts::pick(rng, 2, 6);
        auto sys = ts::to_system(ts::random_dense(rng, m, n, -3, 3, -3, 3));
        auto order = ts::random_order(rng, n);
        EliminationOptions opts;
        opts.merge_duplicates = false;
        auto run = run_elimination(sys, order, opts);
        if (!run.all_clean()) continue;
        auto other = run_elimination(sys, ts::random_order(rng, n), opts);
        Multiplier<R> u_bar;
        for (const auto& r : other.rows) u_bar = Multiplier<R>::combine(R(1), u_bar, ts::uniform(rng, 0, 3), r.multiplier);
        if (u_bar.empty()) continue;
        auto terms = decompose_multiplier(sys, u_bar, n, order, opts);
        Multiplier<R> sum;
        bool nonneg = true;
        for (const auto& t : terms) {
            nonneg = nonneg && t.lambda >= 0;
            sum = Multiplier<R>::combine(R(1), sum, t.lambda, t.multiplier);
        }
        ck.check(nonneg && sum == u_bar, "decomposition round trip");
        ++done;
    }
    ck.note(std::to_string(runs) + " eliminations, 50 decompositions");
}

void criterion8(Checker& ck)
{
    std::mt19937_64 rng(4242);
    int tidy = 0;
    for (int i = 0; i < 100; ++i) {
        std::size_t n = ts::pick(rng, 2, 4), m = ts::pick(rng, 2, 7);
        auto sys = ts::to_system(ts::random_dense(rng, m, n, -3, 3, -3, 3));
        Vector<R> c(static_cast<Eigen::Index>(n));
        for (std::size_t k = 0; k < n; ++k) c[static_cast<Eigen::Index>(k)] = ts::uniform(rng, -2, 2);
        auto aug = build_augmented(sys, c);
        std::optional<bool> first;
        bool same = true;
        for (int k = 0; k < 5; ++k) {
            bool t = run_elimination(aug, ts::random_order(rng, n)).all_clean();
            if (!first) first = t;
            same = same && t == *first;
        }
        ck.check(same, "tidy predicate differs across orders for system " + std::to_string(i));
        tidy += *first;
    }
    ck.note(std::to_string(tidy) + " of 100 tidy");
}

void criterion9(Checker& ck)
{
    std::mt19937_64 rng(9090);
    int yes = 0, certs = 0;
    for (int i = 0; i < 100; ++i) {
        ts::DenseSystem d;
        std::size_t n = 0;
        do {
            n = ts::pick(rng, 1, 3);
            d = ts::random_dense(rng, ts::pick(rng, n, 6), n, -3, 3, -3, 3);
        } while (oracle::rank(d.a) != n);
        oracle::Vec c;
        for (std::size_t k = 0; k < n; ++k) c.push_back(ts::uniform(rng, -3, 3));
        R rhs = ts::uniform(rng, -3, 3);
        bool want = oracle::implies(d.a, d.b, c, rhs);
        auto got = is_consequence<R>(ts::to_system(d), ts::to_vector(c), rhs);
        ck.check((got.verdict == FarkasVerdict::Yes) == want, "verdict matches oracle on triple " + std::to_string(i));
        yes += want;
        if (got.certificate) {
            ++certs;
            const auto& cert = *got.certificate;
            oracle::Vec img(n, R(0));
            R val(0);
            bool positive = true;
            for (const auto& [row, u] : cert.u.entries()) {
                positive = positive && u > 0;
                for (std::size_t k = 0; k < n; ++k) img[k] += u * d.a[row][k];
                val += u * d.b[row];
            }
            bool ok = positive && (cert.kind == FarkasCertificateKind::InfeasibleCone
                                       ? img == oracle::Vec(n, R(0)) && val == 1
                                       : cert.kind == FarkasCertificateKind::ExactCone && img == c &&
                                             cert.lambda0 >= 0 && val - cert.lambda0 >= rhs);
            ck.check(ok, "certificate replays on triple " + std::to_string(i));
        }
        if (got.counterexample) {
            auto x = ts::from_vector(*got.counterexample);
            ck.check(oracle::satisfies(d.a, d.b, x) && oracle::dot(c, x) < rhs, "counterexample on triple " + std::to_string(i));
        }
    }

    auto file = ts::load_data("not_primal_optimal_no_nonneg.json");
    Vector<R> c(2);
    c << 1, 0;
    auto got = is_consequence<R>(*file.model, file.schedule, c, R(0));
    ck.check(got.verdict == FarkasVerdict::YesInLimit, "closure case is yes_in_limit");
    ck.check(got.certificate && got.certificate->kind == FarkasCertificateKind::ClosureSequence, "closure sequence attached");
    if (got.certificate) {
        std::string why;
        ck.check(verify_farkas_certificate(got.systems, c, R(0), *got.certificate, &why), "closure sequence verifies: " + why);
        const auto& seq = got.certificate->sequence;
        for (std::size_t i = 1; i < seq.size(); ++i) ck.check(seq[i].gap <= seq[i - 1].gap, "gaps nonincreasing");
        ck.check(seq.size() >= 2 && seq.back().gap < seq.front().gap && seq.back().gap <= R(1, 1000),
                 "gaps tend to 0");
        if (!seq.empty())
            ck.note("closure gaps " + std::to_string(as_double(seq.front().gap)) + " .. " +
                    std::to_string(as_double(seq.back().gap)));
    }
    ck.note(std::to_string(yes) + " of 100 implied, " + std::to_string(certs) + " cone certificates");
}

void criterion10(Checker& ck)
{
    auto a = analyze_convex<R>(*ts::load_data("convex_slater.json").convex);
    const auto& v = a.report.verdicts;
    ck.check(a.samples.size() == 33, "33 samples");
    ck.check(v.tidy.answer == Answer::Yes, "(a) tidy yes");
    ck.check(v.zero_gap.answer == Answer::Yes, "(a) zero_gap yes");
    ck.check(a.lagrangian.has_value(), "(a) multipliers recovered");
    if (a.lagrangian) {
        R lambda = a.lagrangian->lambda.at(0);
        ck.check(std::fabs(as_double(lambda) - 1) <= 1e-6, "(a) lambda = 1, got " + lambda.str());
        ck.check(std::fabs(as_double(a.lagrangian->value) - 1) <= 1e-6, "(a) value = 1, got " + a.lagrangian->value.str());
        // L(lambda) = max(2 - lambda, lambda) on [0, 2].
        R oracle_value = std::max(R(2 - lambda), lambda);
        ck.check(std::fabs(as_double(oracle_value - a.lagrangian->value)) <= 1e-6, "(a) value matches analytic L");
    }
    ck.check(a.check_failures.empty(), "(a) convex consistency checks");

    auto b = analyze_convex<R>(*ts::load_data("convex_no_slater.json").convex);
    ck.check(b.samples.size() == 17 * 17, "(b) 17^2 samples");
    ck.check(!b.slater.has_value(), "(b) no Slater point");
    ck.check(b.report.verdicts.zero_gap.answer == Answer::Yes, "(b) zero_gap yes");
    ck.check(b.report.last().diag.S == E(R(0)), "(b) S = 0, got " + str(b.report.last().diag.S));
    for (const auto& [delta, w] : b.report.last().diag.omega_table)
        ck.check(w <= E(R(0)), "(b) omega(" + delta.str() + ") <= 0, got " + str(w));
    ck.check(b.check_failures.empty(), "(b) convex consistency checks");
}

void criterion11(Checker& ck)
{
    auto file = ts::load_data("primal_solvable.json");
    auto seq = value_sequence<R>(*file.model, 24);
    ck.check(seq.nondecreasing, "v(P_n) nondecreasing");
    for (std::size_t i = 1; i < seq.values.size(); ++i) ck.check(seq.values[i] >= seq.values[i - 1], "v(P_n) step");
    ck.check(seq.limit == E(R(0)), "limit 0, got " + str(seq.limit));
    auto r = analyze<R>(*file.model, file.schedule);
    ck.check(seq.limit == r.verdicts.dual_value,
             "limit equals staged dual value " + str(r.verdicts.dual_value));
}

}  // namespace

int main()
{
    struct Item {
        int id;
        const char* title;
        std::function<void(Checker&)> run;
    };
    const std::vector<Item> items = {
        {1, "not-primal-optimal staged", criterion1},
        {2, "primal-solvable", criterion2},
        {3, "primal-infeasible dual-solvable", criterion3},
        {4, "x1 >= i dual unbounded", criterion4},
        {5, "four-row elimination", criterion5},
        {6, "finite LP strong duality (200)", criterion6},
        {7, "multiplier identities and decomposition", criterion7},
        {8, "tidiness order invariance (100 x 5)", criterion8},
        {9, "Farkas consequences (100) and closure", criterion9},
        {10, "convex Slater and no-Slater", criterion10},
        {11, "finite subproblem sequence", criterion11},
    };
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    int failed = 0;
    for (const auto& item : items) {
        Checker ck;
        const auto t0 = clock::now();
        try {
            item.run(ck);
        } catch (const std::exception& e) {
            ck.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        ck.check(secs <= kItemSeconds, "took longer than 10 s");
        std::cout << "criterion " << item.id << " " << (ck.ok() ? "PASS" : "FAIL") << " [" << item.title << "] "
                  << ck.summary() << " (" << std::fixed << std::setprecision(2) << secs << " s)" << std::endl;
        std::cout.unsetf(std::ios::fixed);
        failed += !ck.ok();
    }
    const double total = std::chrono::duration<double>(clock::now() - start).count();
    const bool in_budget = total <= kSuiteSeconds;
    std::cout << "suite " << (in_budget ? "PASS" : "FAIL") << " total " << total << " s (limit 180 s)" << std::endl;
    std::cout << (items.size() - static_cast<std::size_t>(failed)) << "/" << items.size() << " criteria passed"
              << std::endl;
    return failed == 0 && in_budget ? 0 : 1;
}
