#include "mapstat/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace mapstat::mc {

namespace {
// Replicates per scheduling block.  Fixed (not configurable) so that results
// never depend on the worker count.
constexpr std::int64_t kRepsPerBlock = 512;
// Rough per-vertex footprint of one worker's scratch (targets, in-degrees,
// union-find, predecessor lists, flags).
constexpr std::uint64_t kBytesPerVertex = 64;
}  // namespace

std::vector<double> default_ecdf_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 80; ++i) g.push_back(i * 0.05);
    return g;
}

void StatMoments::add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
}

void StatMoments::merge(const StatMoments& other) {
    if (other.count == 0) return;
    if (count == 0) {
        *this = other;
        return;
    }
    const double delta = other.mean - mean;
    const auto total = count + other.count;
    mean += delta * static_cast<double>(other.count) / static_cast<double>(total);
    m2 += other.m2 + delta * delta * (static_cast<double>(count) *
                                      static_cast<double>(other.count) /
                                      static_cast<double>(total));
    count = total;
}

double StatMoments::variance() const {
    if (count < 2) throw std::invalid_argument("StatMoments::variance: count < 2");
    return m2 / static_cast<double>(count - 1);
}

double StatMoments::stderr_of_mean() const {
    return std::sqrt(variance() / static_cast<double>(count));
}

void MomentAccumulator::init(std::int64_t n_vertices, const std::vector<double>& ecdf_grid) {
    *this = MomentAccumulator{};
    n = n_vertices;
    grid = ecdf_grid;
    grid_hits.assign(grid.size() + 1, 0);
}

void MomentAccumulator::add(const MappingStats& s) {
    ++count;
    lambda.add(static_cast<double>(s.lambda));
    mu.add(static_cast<double>(s.mu));
    nu.add(static_cast<double>(s.nu));
    nu2.add(static_cast<double>(s.nu) * static_cast<double>(s.nu));
    kappa.add(static_cast<double>(s.kappa));
    tau.add(static_cast<double>(s.tau));
    richest_not_largest += s.richest_is_largest ? 0 : 1;
    tau_in_largest += s.tau_in_largest ? 1 : 0;
    const double v = static_cast<double>(s.nu) / std::sqrt(static_cast<double>(n));
    const auto it = std::lower_bound(grid.begin(), grid.end(), v);
    ++grid_hits[static_cast<std::size_t>(it - grid.begin())];
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    if (other.count == 0) return;
    if (count == 0 && n == 0) {
        *this = other;
        return;
    }
    if (n != other.n || grid != other.grid)
        throw std::invalid_argument("MomentAccumulator::merge: incompatible accumulators");
    count += other.count;
    lambda.merge(other.lambda);
    mu.merge(other.mu);
    nu.merge(other.nu);
    nu2.merge(other.nu2);
    kappa.merge(other.kappa);
    tau.merge(other.tau);
    richest_not_largest += other.richest_not_largest;
    tau_in_largest += other.tau_in_largest;
    for (std::size_t i = 0; i < grid_hits.size(); ++i) grid_hits[i] += other.grid_hits[i];
}

std::vector<double> MomentAccumulator::ecdf() const {
    std::vector<double> out(grid.size());
    std::int64_t cum = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        cum += grid_hits[i];
        out[i] = static_cast<double>(cum) / static_cast<double>(count);
    }
    return out;
}

void random_mapping(std::int64_t n, SplitMix64& gen, Mapping& out) {
    if (n < 1) throw std::invalid_argument("random_mapping: n must be >= 1");
    out.next.resize(n);
    const auto bound = static_cast<std::uint64_t>(n);
    for (std::int64_t i = 0; i < n; ++i)
        out.next[i] = static_cast<Vertex>(uniform_below(gen, bound));
}

Mapping random_mapping(std::int64_t n, std::uint64_t master_seed, std::uint64_t replicate) {
    SplitMix64 gen(replicate_seed(master_seed, replicate));
    Mapping m;
    random_mapping(n, gen, m);
    return m;
}

namespace {

void validate(const SimConfig& cfg) {
    if (cfg.n < 1) throw std::invalid_argument("run_simulation: n must be >= 1");
    if (cfg.reps < 1) throw std::invalid_argument("run_simulation: reps must be >= 1");
    if (cfg.workers < 1) throw std::invalid_argument("run_simulation: workers must be >= 1");
    for (std::size_t i = 0; i < cfg.ecdf_grid.size(); ++i) {
        if (cfg.ecdf_grid[i] < 0.0 ||
            (i > 0 && !(cfg.ecdf_grid[i] > cfg.ecdf_grid[i - 1])))
            throw std::invalid_argument(
                "run_simulation: ecdf_grid must be nonnegative and strictly increasing");
    }
    const std::uint64_t need = static_cast<std::uint64_t>(cfg.n) *
                               static_cast<std::uint64_t>(cfg.workers) * kBytesPerVertex;
    if (need > cfg.memory_budget_bytes)
        throw std::runtime_error("run_simulation: n*workers needs about " +
                                 std::to_string(need) + " bytes, budget is " +
                                 std::to_string(cfg.memory_budget_bytes));
}

}  // namespace

MomentAccumulator run_simulation(const SimConfig& cfg,
                                 std::vector<MappingStats>* replicate_dump) {
    validate(cfg);
    const std::int64_t blocks = (cfg.reps + kRepsPerBlock - 1) / kRepsPerBlock;
    std::vector<MomentAccumulator> partial(blocks);
    for (auto& acc : partial) acc.init(cfg.n, cfg.ecdf_grid);
    if (replicate_dump) replicate_dump->assign(cfg.reps, MappingStats{});

    std::atomic<std::int64_t> next_block{0};
    auto worker = [&] {
        Mapping m;
        Decomposition d;
        DecomposeBuffers buf;
        for (;;) {
            const std::int64_t b = next_block.fetch_add(1);
            if (b >= blocks) break;
            const std::int64_t lo = b * kRepsPerBlock;
            const std::int64_t hi = std::min(cfg.reps, lo + kRepsPerBlock);
            for (std::int64_t rep = lo; rep < hi; ++rep) {
                SplitMix64 gen(replicate_seed(cfg.master_seed, static_cast<std::uint64_t>(rep)));
                random_mapping(cfg.n, gen, m);
                decompose(m, d, buf);
                const MappingStats s = stats(d);
                partial[b].add(s);
                if (replicate_dump) (*replicate_dump)[rep] = s;
            }
        }
    };

    const int threads = static_cast<int>(std::min<std::int64_t>(cfg.workers, blocks));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    MomentAccumulator result;
    result.init(cfg.n, cfg.ecdf_grid);
    result.master_seed = cfg.master_seed;
    for (const auto& acc : partial) result.merge(acc);
    return result;
}

namespace {

ValueWithError scaled(const StatMoments& s, double scale) {
    return {s.mean / scale, s.stderr_of_mean() / scale};
}

ValueWithError proportion(std::int64_t hits, std::int64_t count) {
    const double p = static_cast<double>(hits) / static_cast<double>(count);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(count))};
}

// Delta method without the covariance term (conservative).
ValueWithError mean_ratio(const StatMoments& num, const StatMoments& den) {
    const double r = num.mean / den.mean;
    const double rel2 = std::pow(num.stderr_of_mean() / num.mean, 2) +
                        std::pow(den.stderr_of_mean() / den.mean, 2);
    return {r, std::fabs(r) * std::sqrt(rel2)};
}

}  // namespace

SimReport report(const MomentAccumulator& acc, const limitlaw::LimitTables* limits) {
    if (acc.count < 2)
        throw std::invalid_argument("report: needs at least 2 replicates (variance undefined)");
    SimReport r;
    r.n = acc.n;
    r.reps = acc.count;
    r.master_seed = acc.master_seed;
    const auto nd = static_cast<double>(acc.n);
    const double sq = std::sqrt(nd);
    r.e_nu_norm = scaled(acc.nu, sq);
    r.e_lambda_norm = scaled(acc.lambda, sq);
    r.e_kappa_norm = scaled(acc.kappa, sq);
    r.e_mu_norm = scaled(acc.mu, nd);
    const double var_nu = acc.nu.variance();
    r.var_nu_norm = {var_nu / nd,
                     var_nu / nd * std::sqrt(2.0 / static_cast<double>(acc.count - 1))};
    r.p_richest_not_largest = proportion(acc.richest_not_largest, acc.count);
    r.p_tau_in_largest = proportion(acc.tau_in_largest, acc.count);
    r.ratio_nu_lambda = mean_ratio(acc.nu, acc.lambda);
    r.ratio_kappa_lambda = mean_ratio(acc.kappa, acc.lambda);
    {
        const double diff = (acc.kappa.mean - acc.nu.mean) / acc.lambda.mean;
        const double se_num = std::sqrt(std::pow(acc.kappa.stderr_of_mean(), 2) +
                                        std::pow(acc.nu.stderr_of_mean(), 2));
        const double se = std::sqrt(std::pow(se_num / acc.lambda.mean, 2) +
                                    std::pow(diff * acc.lambda.stderr_of_mean() /
                                             acc.lambda.mean, 2));
        r.richest_ratio_diff = {diff, se};
    }
    r.ecdf_grid = acc.grid;
    r.ecdf = acc.ecdf();
    if (limits) {
        double ks = 0.0;
        for (std::size_t i = 0; i < r.ecdf_grid.size(); ++i) {
            const double t = r.ecdf_grid[i];
            const double h = limitlaw::nu_limit_cdf(limits->density, t * t);
            ks = std::max(ks, std::fabs(r.ecdf[i] - h));
        }
        r.ks_vs_limit = ks;
    }
    return r;
}

namespace {

nlohmann::ordered_json vwe_json(const ValueWithError& v) {
    return {{"value", v.value}, {"std_error", v.std_error}};
}

ValueWithError vwe_from(const nlohmann::json& j) {
    return {j.at("value").get<double>(), j.at("std_error").get<double>()};
}

}  // namespace

nlohmann::ordered_json SimReport::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["reps"] = reps;
    j["master_seed"] = master_seed;
    j["e_nu_norm"] = vwe_json(e_nu_norm);
    j["var_nu_norm"] = vwe_json(var_nu_norm);
    j["e_lambda_norm"] = vwe_json(e_lambda_norm);
    j["e_mu_norm"] = vwe_json(e_mu_norm);
    j["e_kappa_norm"] = vwe_json(e_kappa_norm);
    j["p_richest_not_largest"] = vwe_json(p_richest_not_largest);
    j["p_tau_in_largest"] = vwe_json(p_tau_in_largest);
    j["ratio_nu_lambda"] = vwe_json(ratio_nu_lambda);
    j["ratio_kappa_lambda"] = vwe_json(ratio_kappa_lambda);
    j["richest_ratio_diff"] = vwe_json(richest_ratio_diff);
    j["ecdf_grid"] = ecdf_grid;
    j["ecdf"] = ecdf;
    if (ks_vs_limit)
        j["ks_vs_limit"] = *ks_vs_limit;
    else
        j["ks_vs_limit"] = nullptr;
    return j;
}

std::string SimReport::to_json_string() const { return to_json().dump(2) + "\n"; }

SimReport SimReport::from_json(const nlohmann::json& j) {
    SimReport r;
    r.n = j.at("n").get<std::int64_t>();
    r.reps = j.at("reps").get<std::int64_t>();
    r.master_seed = j.at("master_seed").get<std::uint64_t>();
    r.e_nu_norm = vwe_from(j.at("e_nu_norm"));
    r.var_nu_norm = vwe_from(j.at("var_nu_norm"));
    r.e_lambda_norm = vwe_from(j.at("e_lambda_norm"));
    r.e_mu_norm = vwe_from(j.at("e_mu_norm"));
    r.e_kappa_norm = vwe_from(j.at("e_kappa_norm"));
    r.p_richest_not_largest = vwe_from(j.at("p_richest_not_largest"));
    r.p_tau_in_largest = vwe_from(j.at("p_tau_in_largest"));
    r.ratio_nu_lambda = vwe_from(j.at("ratio_nu_lambda"));
    r.ratio_kappa_lambda = vwe_from(j.at("ratio_kappa_lambda"));
    r.richest_ratio_diff = vwe_from(j.at("richest_ratio_diff"));
    r.ecdf_grid = j.at("ecdf_grid").get<std::vector<double>>();
    r.ecdf = j.at("ecdf").get<std::vector<double>>();
    if (!j.at("ks_vs_limit").is_null()) r.ks_vs_limit = j.at("ks_vs_limit").get<double>();
    return r;
}

void write_replicates_csv(std::ostream& os, std::int64_t n,
                          const std::vector<MappingStats>& rows) {
    os << "n,rep,lambda,mu,nu,kappa,tau,richest_size,richest_is_largest,tau_in_largest\n";
    for (std::size_t rep = 0; rep < rows.size(); ++rep) {
        const MappingStats& s = rows[rep];
        os << n << ',' << rep << ',' << s.lambda << ',' << s.mu << ',' << s.nu << ','
           << s.kappa << ',' << s.tau << ',' << s.richest_size << ','
           << (s.richest_is_largest ? 1 : 0) << ',' << (s.tau_in_largest ? 1 : 0) << '\n';
    }
}

}  // namespace mapstat::mc
