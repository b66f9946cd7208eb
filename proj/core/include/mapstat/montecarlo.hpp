#pragma once
// Monte Carlo over uniform random mappings.
//
// Replicates are seeded injectively from (master_seed, replicate index) and
// grouped into fixed-size blocks; each block's accumulator is computed
// sequentially by whichever worker claims it and the blocks are merged in
// index order afterwards.  The result is therefore bit-identical for any
// worker count.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mapstat/limit_laws.hpp"
#include "mapstat/mapping.hpp"
#include "mapstat/rng.hpp"

namespace mapstat::mc {

/// nu/sqrt(n) evaluation points 0, 0.05, ..., 4.
std::vector<double> default_ecdf_grid();

struct SimConfig {
    std::int64_t n = 100000;
    std::int64_t reps = 20000;
    std::uint64_t master_seed = 42;
    int workers = 1;
    std::vector<double> ecdf_grid = default_ecdf_grid();
    std::uint64_t memory_budget_bytes = 2ULL << 30;
};

/// Welford mean/M2 pair; merge() uses the parallel (Chan) update.
struct StatMoments {
    std::int64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x);
    void merge(const StatMoments& other);
    double variance() const;  // sample variance, count >= 2
    double stderr_of_mean() const;
};

struct MomentAccumulator {
    std::int64_t n = 0;
    std::uint64_t master_seed = 0;
    std::int64_t count = 0;
    StatMoments lambda, mu, nu, nu2, kappa, tau;
    std::int64_t richest_not_largest = 0;  // replicates with richest != largest
    std::int64_t tau_in_largest = 0;       // replicates whose largest tree sits in the largest component
    std::vector<double> grid;
    std::vector<std::int64_t> grid_hits;  // bin counts; last bin collects nu/sqrt(n) > grid.back()

    void init(std::int64_t n_vertices, const std::vector<double>& ecdf_grid);
    void add(const MappingStats& s);
    void merge(const MomentAccumulator& other);
    std::vector<double> ecdf() const;  // P(nu/sqrt(n) <= grid[i])
};

/// Fills `out` with a uniform mapping on [n]; every one of the n^n mappings
/// is equally likely and a fixed stream reproduces the same mapping.
void random_mapping(std::int64_t n, SplitMix64& gen, Mapping& out);

/// Convenience form seeding the stream from (master_seed, replicate).
Mapping random_mapping(std::int64_t n, std::uint64_t master_seed, std::uint64_t replicate);

/// Runs cfg.reps replicates.  Throws std::invalid_argument on a bad config
/// and std::runtime_error if n * workers exceeds the memory budget.  When
/// `replicate_dump` is non-null it receives one MappingStats per replicate,
/// in replicate order.
MomentAccumulator run_simulation(const SimConfig& cfg,
                                 std::vector<MappingStats>* replicate_dump = nullptr);

struct ValueWithError {
    double value = 0.0;
    double std_error = 0.0;
};

struct SimReport {
    std::int64_t n = 0;
    std::int64_t reps = 0;
    std::uint64_t master_seed = 0;
    ValueWithError e_nu_norm;      // E(nu)/sqrt(n)
    ValueWithError var_nu_norm;    // Var(nu)/n
    ValueWithError e_lambda_norm;  // E(lambda)/sqrt(n)
    ValueWithError e_mu_norm;      // E(mu)/n
    ValueWithError e_kappa_norm;   // E(kappa)/sqrt(n)
    // Frequency of the event "component of the longest cycle != largest
    // component".  Note this is much larger (~0.31 at n = 1e5) than the
    // ratio difference below; the 0.075 reference value is the latter.
    ValueWithError p_richest_not_largest;
    ValueWithError p_tau_in_largest;
    ValueWithError ratio_nu_lambda;     // E(nu)/E(lambda), ratio of sample means
    ValueWithError ratio_kappa_lambda;  // E(kappa)/E(lambda)
    // (E(kappa) - E(nu))/E(lambda): share of cyclic vertices that lie in the
    // longest cycle but not the deepest one.  Converges to richest_diff.
    ValueWithError richest_ratio_diff;
    std::vector<double> ecdf_grid;
    std::vector<double> ecdf;
    std::optional<double> ks_vs_limit;  // sup_i |ecdf_i - H(grid_i^2)|

    nlohmann::ordered_json to_json() const;
    std::string to_json_string() const;
    static SimReport from_json(const nlohmann::json& j);
};

/// Normalized estimates with standard errors; ratios are ratios of sample
/// means.  KS against the limit law is filled when `limits` is given.
/// Throws std::invalid_argument when fewer than 2 replicates were merged.
SimReport report(const MomentAccumulator& acc,
                 const limitlaw::LimitTables* limits = nullptr);

/// Replicate CSV: header
/// n,rep,lambda,mu,nu,kappa,tau,richest_size,richest_is_largest,tau_in_largest
/// with booleans as 0/1.
void write_replicates_csv(std::ostream& os, std::int64_t n,
                          const std::vector<MappingStats>& rows);

}  // namespace mapstat::mc
