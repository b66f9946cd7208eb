#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "mapstat/exact.hpp"
#include "mapstat/montecarlo.hpp"

using namespace mapstat;

TEST_SUITE_BEGIN("montecarlo");

TEST_CASE("random_mapping basics") {
    // n = 1 has a unique mapping
    for (std::uint64_t seed : {0ull, 1ull, 42ull})
        CHECK(mc::random_mapping(1, seed, 0).next == std::vector<Vertex>{0});

    // replaying a (seed, replicate) pair reproduces the targets exactly
    const Mapping a = mc::random_mapping(1000, 42, 7);
    const Mapping b = mc::random_mapping(1000, 42, 7);
    CHECK(a.next == b.next);
    const Mapping c = mc::random_mapping(1000, 42, 8);
    CHECK(a.next != c.next);

    CHECK_THROWS_AS(mc::random_mapping(0, 1, 1), std::invalid_argument);
}

TEST_CASE("replicate seeds do not collide over a large range") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t rep = 0; rep < 100000; ++rep)
        seen.insert(replicate_seed(42, rep));
    CHECK(seen.size() == 100000);
}

TEST_CASE("random_mapping is uniform over the 4 mappings on [2]") {
    SplitMix64 gen(replicate_seed(1234, 0));
    Mapping m;
    int counts[4] = {0, 0, 0, 0};
    const int draws = 40000;
    for (int i = 0; i < draws; ++i) {
        mc::random_mapping(2, gen, m);
        counts[2 * m.next[0] + m.next[1]]++;
    }
    // binomial: mean 10^4, sigma = sqrt(draws * 1/4 * 3/4) ~ 86.6
    const double sigma = std::sqrt(draws * 0.25 * 0.75);
    for (int k = 0; k < 4; ++k) CHECK(std::fabs(counts[k] - draws / 4.0) <= 3.0 * sigma);
}

TEST_CASE("run_simulation: n = 1 is degenerate") {
    mc::SimConfig cfg;
    cfg.n = 1;
    cfg.reps = 100;
    const auto acc = mc::run_simulation(cfg);
    const auto rep = mc::report(acc);
    CHECK(rep.e_nu_norm.value == 1.0);
    CHECK(rep.var_nu_norm.value == 0.0);
    CHECK(rep.e_mu_norm.value == 1.0);
    CHECK(rep.p_richest_not_largest.value == 0.0);
    CHECK(rep.p_tau_in_largest.value == 1.0);
}

TEST_CASE("run_simulation: n = 2 against the exact four-mapping law") {
    // nu over the four mappings is (1,1,2,1), mu is (2,1,2,2)
    mc::SimConfig cfg;
    cfg.n = 2;
    cfg.reps = 1000000;
    cfg.master_seed = 9;
    cfg.workers = 2;
    const auto acc = mc::run_simulation(cfg);
    const double se_nu = std::sqrt((7.0 / 4.0 - 25.0 / 16.0) / cfg.reps);
    const double se_mu = std::sqrt((13.0 / 4.0 - 49.0 / 16.0) / cfg.reps);
    CHECK(std::fabs(acc.nu.mean - 1.25) <= 5.0 * se_nu);
    CHECK(std::fabs(acc.mu.mean - 1.75) <= 5.0 * se_mu);
}

TEST_CASE("config validation") {
    mc::SimConfig cfg;
    cfg.n = 0;
    CHECK_THROWS_AS(mc::run_simulation(cfg), std::invalid_argument);
    cfg = mc::SimConfig{};
    cfg.reps = 0;
    CHECK_THROWS_AS(mc::run_simulation(cfg), std::invalid_argument);
    cfg = mc::SimConfig{};
    cfg.workers = 0;
    CHECK_THROWS_AS(mc::run_simulation(cfg), std::invalid_argument);
    cfg = mc::SimConfig{};
    cfg.ecdf_grid = {0.5, 0.5};
    CHECK_THROWS_AS(mc::run_simulation(cfg), std::invalid_argument);
    cfg = mc::SimConfig{};
    cfg.ecdf_grid = {-0.1, 0.5};
    CHECK_THROWS_AS(mc::run_simulation(cfg), std::invalid_argument);
}

TEST_CASE("memory budget is enforced") {
    mc::SimConfig cfg;
    cfg.n = 1000000;
    cfg.workers = 4;
    cfg.memory_budget_bytes = 1 << 20;
    CHECK_THROWS_AS(mc::run_simulation(cfg), std::runtime_error);
}

TEST_CASE("report refuses a single replicate") {
    mc::SimConfig cfg;
    cfg.n = 5;
    cfg.reps = 1;
    const auto acc = mc::run_simulation(cfg);
    CHECK_THROWS_AS(mc::report(acc), std::invalid_argument);
}

TEST_CASE("worker count never changes the result") {
    std::string baseline;
    for (const int workers : {1, 2, 8}) {
        mc::SimConfig cfg;
        cfg.n = 300;
        cfg.reps = 3000;
        cfg.master_seed = 2718;
        cfg.workers = workers;
        const auto rep = mc::report(mc::run_simulation(cfg));
        const std::string json = rep.to_json_string();
        if (baseline.empty())
            baseline = json;
        else
            CHECK(json == baseline);  // byte-identical, not merely close
    }
    CHECK(!baseline.empty());
}

TEST_CASE("accumulator merge in index order equals one pass") {
    mc::SimConfig cfg;
    cfg.n = 100;
    cfg.reps = 1500;
    cfg.master_seed = 5;
    std::vector<MappingStats> rows;
    const auto whole = mc::run_simulation(cfg, &rows);
    REQUIRE(rows.size() == 1500);

    mc::MomentAccumulator manual;
    manual.init(cfg.n, cfg.ecdf_grid);
    manual.master_seed = cfg.master_seed;
    for (const auto& s : rows) manual.add(s);

    // integer state is exactly order-free; the float reductions agree with a
    // monolithic Welford pass to roundoff
    CHECK(manual.count == whole.count);
    CHECK(manual.grid_hits == whole.grid_hits);
    CHECK(manual.richest_not_largest == whole.richest_not_largest);
    CHECK(manual.tau_in_largest == whole.tau_in_largest);
    CHECK(manual.nu.mean == doctest::Approx(whole.nu.mean).epsilon(1e-13));
    CHECK(manual.nu.m2 == doctest::Approx(whole.nu.m2).epsilon(1e-12));
    CHECK(manual.lambda.mean == doctest::Approx(whole.lambda.mean).epsilon(1e-13));
}

TEST_CASE("ecdf is a valid distribution function") {
    mc::SimConfig cfg;
    cfg.n = 500;
    cfg.reps = 4000;
    const auto acc = mc::run_simulation(cfg);
    const auto e = acc.ecdf();
    double prev = 0.0;
    for (const double v : e) {
        CHECK(v >= prev);
        CHECK(v <= 1.0);
        prev = v;
    }
}

TEST_CASE("replicate CSV dump") {
    mc::SimConfig cfg;
    cfg.n = 4;
    cfg.reps = 6;
    std::vector<MappingStats> rows;
    mc::run_simulation(cfg, &rows);
    std::ostringstream os;
    mc::write_replicates_csv(os, cfg.n, rows);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header ==
          "n,rep,lambda,mu,nu,kappa,tau,richest_size,richest_is_largest,tau_in_largest");
    int lines = 0;
    for (std::string line; std::getline(is, line);) {
        ++lines;
        CHECK(line.substr(0, 2) == "4,");
    }
    CHECK(lines == 6);
}

TEST_CASE("simulated marginals match exact enumeration at n = 4") {
    const auto table = exact::enumerate_all(4);
    mc::SimConfig cfg;
    cfg.n = 4;
    cfg.reps = 40000;
    cfg.master_seed = 31337;
    std::vector<MappingStats> rows;
    mc::run_simulation(cfg, &rows);
    std::vector<std::int64_t> nu_counts(5, 0), mu_counts(5, 0);
    for (const auto& s : rows) {
        ++nu_counts[s.nu];
        ++mu_counts[s.mu];
    }
    for (int k = 1; k <= 4; ++k) {
        const double p_nu = static_cast<double>(table.nu_pmf[k - 1].convert_to<double>());
        const double p_mu = static_cast<double>(table.mu_pmf[k - 1].convert_to<double>());
        const double sig_nu = std::sqrt(cfg.reps * p_nu * (1.0 - p_nu));
        const double sig_mu = std::sqrt(cfg.reps * p_mu * (1.0 - p_mu));
        CHECK(std::fabs(nu_counts[k] - cfg.reps * p_nu) <= 5.0 * sig_nu + 1.0);
        CHECK(std::fabs(mu_counts[k] - cfg.reps * p_mu) <= 5.0 * sig_mu + 1.0);
    }
}

TEST_CASE("richest ratio difference is a ratio of sample means") {
    mc::SimConfig cfg;
    cfg.n = 400;
    cfg.reps = 2000;
    cfg.master_seed = 17;
    const auto acc = mc::run_simulation(cfg);
    const auto rep = mc::report(acc);
    const double expect = (acc.kappa.mean - acc.nu.mean) / acc.lambda.mean;
    CHECK(rep.richest_ratio_diff.value == expect);
    CHECK(rep.richest_ratio_diff.std_error > 0.0);
    CHECK(rep.richest_ratio_diff.value ==
          doctest::Approx(rep.ratio_kappa_lambda.value - rep.ratio_nu_lambda.value)
              .epsilon(1e-12));
    // both quantities are probabilities in the unit interval
    CHECK(rep.p_richest_not_largest.value >= 0.0);
    CHECK(rep.p_richest_not_largest.value <= 1.0);
    CHECK(rep.richest_ratio_diff.value >= 0.0);
    CHECK(rep.richest_ratio_diff.value <= 1.0);
}

TEST_CASE("report JSON round trip") {
    mc::SimConfig cfg;
    cfg.n = 50;
    cfg.reps = 400;
    const auto rep = mc::report(mc::run_simulation(cfg));
    const auto j = nlohmann::json::parse(rep.to_json_string());
    const auto back = mc::SimReport::from_json(j);
    CHECK(back.n == rep.n);
    CHECK(back.reps == rep.reps);
    CHECK(back.e_nu_norm.value == rep.e_nu_norm.value);
    CHECK(back.e_nu_norm.std_error == rep.e_nu_norm.std_error);
    CHECK(back.ecdf == rep.ecdf);
    CHECK(!back.ks_vs_limit.has_value());
}

TEST_SUITE_END();
