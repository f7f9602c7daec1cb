#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "sepm/montecarlo.hpp"

using namespace sepm;

namespace {

McConfig desk_config() {
    McConfig cfg;
    cfg.seed = 1;
    cfg.n_coincidences = 100000;
    cfg.eta = 0.01;
    return cfg;
}

}  // namespace

TEST_CASE("reproducibility") {
    const McConfig cfg = desk_config();
    SUBCASE("same seed, same records") {
        const auto a = run_session(cfg);
        const auto b = run_session(cfg);
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].settings.phi_a == b[i].settings.phi_a);
            CHECK(a[i].settings.k_b == b[i].settings.k_b);
            CHECK(a[i].outcome.i == b[i].outcome.i);
            CHECK(a[i].sift == b[i].sift);
        }
    }
    SUBCASE("different seeds differ") {
        McConfig other = cfg;
        other.seed = 2;
        const auto a = run_session(cfg);
        const auto b = run_session(other);
        int differing = 0;
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i].settings.phi_a != b[i].settings.phi_a) ++differing;
        CHECK(differing > 1000);
    }
    SUBCASE("worker count never changes the output") {
        McConfig parallel = cfg;
        parallel.workers = 4;
        const auto a = run_session(cfg);
        const auto b = run_session(parallel);
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].settings.phi_a == b[i].settings.phi_a);
            CHECK(a[i].settings.phi_b == b[i].settings.phi_b);
            CHECK(a[i].settings.k_a == b[i].settings.k_a);
            CHECK(a[i].settings.k_b == b[i].settings.k_b);
            CHECK(a[i].outcome.i == b[i].outcome.i);
            CHECK(a[i].outcome.j == b[i].outcome.j);
            CHECK(a[i].sift == b[i].sift);
        }
        CHECK(summarize(a).to_json() == summarize(b).to_json());
    }
}

TEST_CASE("summary bookkeeping") {
    const auto records = run_session(desk_config());
    const auto report = summarize(records);
    CHECK(report.rounds == 100000);
    CHECK(report.kept + report.check + report.chsh_samples + report.discarded ==
          report.rounds);
    CHECK(report.kept > 0);
    CHECK(report.check > 0);
    CHECK(report.chsh_samples > 0);
    std::int64_t chsh_total = 0;
    for (int p = 0; p < 4; ++p) {
        CHECK(report.pair_counts[p] ==
              report.chsh_counts.counts[p][0] + report.chsh_counts.counts[p][1]);
        chsh_total += report.pair_counts[p];
    }
    CHECK(chsh_total == report.chsh_samples);
    // the check split is an unbiased coin
    const double frac = double(report.check) / double(report.check + report.kept);
    CHECK(std::abs(frac - 0.5) < 0.01);
}

TEST_CASE("estimators match the closed-form expectations") {
    McConfig cfg = desk_config();
    SUBCASE("simulation defaults") {
        const auto result =
            compare_to_analytic(summarize(run_session(cfg)), cfg.params, cfg.eta);
        CHECK(result.qber.pass);
        CHECK(result.chsh_S.pass);
        for (const auto& c : result.correlations) CHECK(c.pass);
        CHECK(result.all_pass);
    }
    SUBCASE("half visibility point: S near sqrt(2)") {
        cfg.params.gamma = 0.1;
        cfg.eta = 0.01;  // gamma^2 = eta
        const auto result =
            compare_to_analytic(summarize(run_session(cfg)), cfg.params, cfg.eta);
        CHECK(std::abs(result.chsh_S.analytic - std::sqrt(2.0)) < 1e-12);
        CHECK(result.chsh_S.pass);
        CHECK(result.qber.pass);
    }
    SUBCASE("a wrong analytic model is flagged") {
        const auto report = summarize(run_session(cfg));
        // pretend the session ran at half visibility
        ProtocolParams wrong = cfg.params;
        wrong.gamma = 0.1;
        const auto result = compare_to_analytic(report, wrong, cfg.eta);
        CHECK_FALSE(result.chsh_S.pass);
        CHECK_FALSE(result.all_pass);
    }
}

TEST_CASE("degenerate record sets") {
    std::vector<RoundRecord> records;
    for (int n = 0; n < 100; ++n) {
        RoundRecord rec;
        rec.settings = Settings{0.0, 0.0, 1, 1};
        rec.outcome = Outcome{true, 1, 1};  // even outcome: bits agree
        rec.sift = SiftClass::check;
        records.push_back(rec);
    }
    const auto report = summarize(records);
    CHECK(report.check == 100);
    CHECK(report.qber == 0.0);
    CHECK(report.qber_stderr == 0.0);
}

TEST_CASE("estimator consistency across sample sizes") {
    // run at half visibility so the error estimator has nonzero variance
    McConfig small = desk_config();
    small.params.gamma = 0.1;
    small.n_coincidences = 10000;
    McConfig large = small;
    large.n_coincidences = 300000;
    const auto rs = summarize(run_session(small));
    const auto rl = summarize(run_session(large));
    CHECK(rl.chsh_S_stderr < rs.chsh_S_stderr);
    CHECK(rl.qber_stderr < rs.qber_stderr);
    const double pooled =
        std::sqrt(rs.chsh_S_stderr * rs.chsh_S_stderr + rl.chsh_S_stderr * rl.chsh_S_stderr);
    CHECK(std::abs(rs.chsh_S - rl.chsh_S) < 5.0 * pooled);
}

TEST_CASE("round CSV") {
    McConfig cfg = desk_config();
    cfg.n_coincidences = 50;
    const auto records = run_session(cfg);
    std::ostringstream os;
    write_rounds_csv(os, records);
    const std::string text = os.str();
    CHECK(text.rfind("index,phi_a,k_a,phi_b,k_b,i,j,sift_class\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 51);
}

TEST_CASE("report JSON") {
    McConfig cfg = desk_config();
    cfg.n_coincidences = 2000;
    const std::string json = summarize(run_session(cfg)).to_json();
    CHECK(json.find("\"rounds\":2000") != std::string::npos);
    CHECK(json.find("\"qber\"") != std::string::npos);
    CHECK(json.find("\"S\"") != std::string::npos);
    CHECK(json.find("\"correlations\"") != std::string::npos);
}

TEST_CASE("config validation") {
    McConfig cfg = desk_config();
    cfg.n_coincidences = 0;
    CHECK_THROWS_AS(run_session(cfg), std::invalid_argument);
    cfg = desk_config();
    cfg.workers = 0;
    CHECK_THROWS_AS(run_session(cfg), std::invalid_argument);
    cfg = desk_config();
    cfg.eta = 0.0;
    CHECK_THROWS_AS(run_session(cfg), std::invalid_argument);
}
