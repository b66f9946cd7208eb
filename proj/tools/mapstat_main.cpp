// mapstat: batch front end for the mapping-statistics library.
//
// Subcommands:
//   simulate   Monte Carlo over uniform random mappings -> SimReport JSON
//   enumerate  exact distributions over all n^n mappings (n <= 8) -> JSON
//   limits     limit-law tables and constants -> CSV + JSON
//   report     compare prior outputs against the reference values -> CSV/TXT
//
// Every run writes a <out>_manifest.json recording the resolved
// configuration and a digest of each output file; reruns with the same
// inputs produce byte-identical outputs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "mapstat/exact.hpp"
#include "mapstat/limit_laws.hpp"
#include "mapstat/montecarlo.hpp"

#ifndef MAPSTAT_VERSION
#define MAPSTAT_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << bytes;
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

// Inclusive a:b:h grid; the end point is included when it is step-aligned.
std::vector<double> parse_grid(const std::string& spec) {
    double a = 0, b = 0, h = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(spec);
    if (!(is >> a >> c1 >> b >> c2 >> h) || c1 != ':' || c2 != ':' || !(h > 0) ||
        b < a || a < 0)
        throw CLI::ValidationError("--grid", "expected a:b:h with h > 0 and b >= a >= 0");
    std::vector<double> g;
    const auto count = static_cast<long>(std::floor((b - a) / h + 1e-9));
    for (long i = 0; i <= count; ++i) g.push_back(a + i * h);
    return g;
}

class Manifest {
  public:
    Manifest(std::string subcommand, ordered_json config, std::uint64_t master_seed)
        : start_(std::chrono::steady_clock::now()) {
        j_["subcommand"] = std::move(subcommand);
        j_["config"] = std::move(config);
        j_["master_seed"] = master_seed;
        j_["version"] = MAPSTAT_VERSION;
    }

    void record_output(const std::string& path, const std::string& bytes) {
        char hex[17];
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(fnv1a64(bytes)));
        outputs_.push_back({{"path", path},
                            {"bytes", bytes.size()},
                            {"digest", std::string("fnv1a64:") + hex}});
    }

    void write(const std::string& prefix) {
        j_["duration_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
                .count();
        j_["outputs"] = outputs_;
        write_file(prefix + "_manifest.json", j_.dump(2) + "\n");
    }

  private:
    std::chrono::steady_clock::time_point start_;
    ordered_json j_;
    ordered_json outputs_ = ordered_json::array();
};

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::int64_t n = 100000;
    std::int64_t reps = 20000;
    std::uint64_t seed = 42;
    int threads = 1;
    std::string out;
    bool dump_replicates = false;
    std::string grid = "0:4:0.05";
};

int cmd_simulate(const SimulateArgs& args) {
    mapstat::mc::SimConfig cfg;
    cfg.n = args.n;
    cfg.reps = args.reps;
    cfg.master_seed = args.seed;
    cfg.workers = args.threads;
    cfg.ecdf_grid = parse_grid(args.grid);

    ordered_json config{{"n", cfg.n},
                        {"reps", cfg.reps},
                        {"seed", cfg.master_seed},
                        {"threads", cfg.workers},
                        {"grid", args.grid},
                        {"dump_replicates", args.dump_replicates},
                        {"out", args.out}};
    Manifest manifest("simulate", config, cfg.master_seed);

    std::vector<mapstat::MappingStats> rows;
    const auto acc =
        mapstat::mc::run_simulation(cfg, args.dump_replicates ? &rows : nullptr);
    const auto rep = mapstat::mc::report(acc);

    const std::string report_path = args.out + ".json";
    const std::string report_bytes = rep.to_json_string();
    write_file(report_path, report_bytes);
    manifest.record_output(report_path, report_bytes);

    if (args.dump_replicates) {
        std::ostringstream os;
        mapstat::mc::write_replicates_csv(os, cfg.n, rows);
        const std::string path = args.out + "_replicates.csv";
        write_file(path, os.str());
        manifest.record_output(path, os.str());
    }
    manifest.write(args.out);

    std::cout << "simulate: n=" << cfg.n << " reps=" << cfg.reps
              << " seed=" << cfg.master_seed << "\n"
              << "  E(nu)/sqrt(n)       = " << rep.e_nu_norm.value << " +/- "
              << rep.e_nu_norm.std_error << "\n"
              << "  Var(nu)/n           = " << rep.var_nu_norm.value << " +/- "
              << rep.var_nu_norm.std_error << "\n"
              << "  E(mu)/n             = " << rep.e_mu_norm.value << " +/- "
              << rep.e_mu_norm.std_error << "\n"
              << "  E(lambda)/sqrt(n)   = " << rep.e_lambda_norm.value << " +/- "
              << rep.e_lambda_norm.std_error << "\n"
              << "  (E(kappa)-E(nu))/E(lambda) = " << rep.richest_ratio_diff.value
              << " +/- " << rep.richest_ratio_diff.std_error << "\n"
              << "  P(richest!=largest) event  = " << rep.p_richest_not_largest.value
              << " +/- " << rep.p_richest_not_largest.std_error << "\n"
              << "  wrote " << report_path << "\n";
    return 0;
}

// --------------------------------------------------------------- enumerate

int cmd_enumerate(std::int64_t n, const std::string& out) {
    ordered_json config{{"n", n}, {"out", out}};
    Manifest manifest("enumerate", config, 0);

    const auto table = mapstat::exact::enumerate_all(n);
    const std::string path = out + ".json";
    const std::string bytes = mapstat::exact::to_json_string(table);
    write_file(path, bytes);
    manifest.record_output(path, bytes);
    manifest.write(out);

    std::cout << "enumerate: n=" << n << "\n"
              << "  identity E(nu^2) = E(mu): "
              << (table.identity_holds() ? "HOLDS" : "VIOLATED") << "\n"
              << "  E_nu  = " << mapstat::exact::rational_string(table.e_nu) << "\n"
              << "  E_nu2 = " << mapstat::exact::rational_string(table.e_nu2) << "\n"
              << "  E_mu  = " << mapstat::exact::rational_string(table.e_mu) << "\n"
              << "  connected_count = " << table.connected.str() << "\n"
              << "  wrote " << path << "\n";
    return table.identity_holds() ? 0 : 3;
}

// ------------------------------------------------------------------ limits

struct LimitsArgs {
    double theta = 0.5;
    double step = 1e-4;
    double xmax = 50.0;
    std::string grid = "0:4:0.05";
    std::string out;
};

int cmd_limits(const LimitsArgs& args) {
    ordered_json config{{"theta", args.theta},
                        {"step", args.step},
                        {"xmax", args.xmax},
                        {"grid", args.grid},
                        {"out", args.out}};
    Manifest manifest("limits", config, 0);

    mapstat::limitlaw::DdeOptions options;
    options.theta = args.theta;
    options.step = args.step;
    options.x_max = args.xmax;
    const auto tables =
        mapstat::limitlaw::build_limit_tables(options, parse_grid(args.grid));

    std::ostringstream density_csv;
    mapstat::limitlaw::write_density_csv(density_csv, tables);
    const std::string density_path = args.out + "_density.csv";
    write_file(density_path, density_csv.str());
    manifest.record_output(density_path, density_csv.str());

    std::ostringstream h_csv;
    mapstat::limitlaw::write_h_csv(h_csv, tables);
    const std::string h_path = args.out + "_H.csv";
    write_file(h_path, h_csv.str());
    manifest.record_output(h_path, h_csv.str());

    const std::string constants_path = args.out + "_constants.json";
    const std::string constants_bytes = mapstat::limitlaw::constants_json_string(tables);
    write_file(constants_path, constants_bytes);
    manifest.record_output(constants_path, constants_bytes);
    manifest.write(args.out);

    std::cout << "limits: theta=" << args.theta << " step=" << args.step
              << " xmax=" << args.xmax << "\n"
              << constants_bytes << "  wrote " << density_path << ", " << h_path
              << ", " << constants_path << "\n";
    return 0;
}

// ------------------------------------------------------------------ report

struct ReportRow {
    std::string quantity;
    std::optional<double> reference;
    std::string exact;  // exact rational text, when available
    std::optional<double> sim, sim_err;
    std::optional<double> limit;
    std::string tolerance;
    bool pass = true;
    bool informational = false;  // reported but never gates the exit code
};

std::string num(const std::optional<double>& v) {
    if (!v) return "";
    std::ostringstream os;
    os.precision(12);
    os << *v;
    return os.str();
}

// Published reference values and comparison tolerances, pinned.
constexpr double kRefI = 0.6884050874956;
constexpr double kRefMeanMu = 0.7578230112;
constexpr double kRefVar = 0.2839;
constexpr double kRefRatioCond = 0.5493;
constexpr double kRefRatioConl = 0.6243;
constexpr double kRefRichestDiff = 0.075;

struct ReportInputs {
    std::optional<mapstat::mc::SimReport> sim;
    std::optional<json> exact;
    std::optional<json> constants;
    std::vector<double> h_y, h_v;  // parsed H CSV
};

double interp_h(const ReportInputs& in, double y) {
    const auto& ys = in.h_y;
    const auto& vs = in.h_v;
    if (ys.empty()) throw std::runtime_error("report: H table is empty");
    if (y <= ys.front()) return vs.front();
    if (y >= ys.back()) {
        if (y > ys.back() * 1.05 + 1.0)
            throw std::runtime_error("report: H table does not cover y=" +
                                     std::to_string(y));
        return vs.back();
    }
    const auto it = std::upper_bound(ys.begin(), ys.end(), y);
    const auto i = static_cast<std::size_t>(it - ys.begin());
    const double w = (y - ys[i - 1]) / (ys[i] - ys[i - 1]);
    return vs[i - 1] + w * (vs[i] - vs[i - 1]);
}

std::vector<ReportRow> build_rows(const ReportInputs& in) {
    std::vector<ReportRow> rows;
    const auto add = [&rows](ReportRow r) { rows.push_back(std::move(r)); };

    const auto limit_of = [&in](const char* key) -> std::optional<double> {
        if (!in.constants) return std::nullopt;
        return in.constants->at(key).get<double>();
    };

    if (in.sim) {
        const auto& s = *in.sim;
        const auto band = [&add](std::string name, double reference, double tol,
                                 const mapstat::mc::ValueWithError& v,
                                 std::optional<double> limit) {
            add({std::move(name), reference, "", v.value, v.std_error, limit,
                 "+/-" + num(tol), std::fabs(v.value - reference) <= tol});
        };
        band("E(nu)/sqrt(n)", 0.6884, 0.02, s.e_nu_norm, limit_of("I"));
        band("Var(nu)/n", kRefVar, 0.02, s.var_nu_norm, limit_of("var_limit"));
        band("E(mu)/n", 0.7578, 0.01, s.e_mu_norm, limit_of("mean_mu"));
        band("E(lambda)/sqrt(n)", std::sqrt(M_PI / 2.0), 0.01, s.e_lambda_norm,
             std::sqrt(M_PI / 2.0));
        band("(E(kappa)-E(nu))/E(lambda)", kRefRichestDiff, 0.01, s.richest_ratio_diff,
             limit_of("richest_diff"));
        add({"P(richest!=largest) event", std::nullopt, "",
             s.p_richest_not_largest.value, s.p_richest_not_largest.std_error,
             std::nullopt, "none", true, true});
        band("E(nu)/E(lambda)", kRefRatioCond, 0.01, s.ratio_nu_lambda,
             limit_of("ratio_cond"));
        band("E(kappa)/E(lambda)", kRefRatioConl, 0.01, s.ratio_kappa_lambda,
             limit_of("ratio_conl"));

        // E(kappa) against the five-term polynomial: two standard errors plus
        // the polynomial's own ~1% trust band.
        const double pw =
            mapstat::limitlaw::purdom_williams_kappa(static_cast<double>(s.n));
        const double root_n = std::sqrt(static_cast<double>(s.n));
        const double e_kappa = s.e_kappa_norm.value * root_n;
        const double se_kappa = s.e_kappa_norm.std_error * root_n;
        add({"E(kappa)", pw, "", e_kappa, se_kappa, pw, "2se+1%",
             std::fabs(e_kappa - pw) <= 2.0 * se_kappa + 0.01 * pw});

        if (!in.h_y.empty()) {
            double ks = 0.0;
            for (std::size_t i = 0; i < s.ecdf_grid.size(); ++i) {
                const double t = s.ecdf_grid[i];
                ks = std::max(ks, std::fabs(s.ecdf[i] - interp_h(in, t * t)));
            }
            add({"KS(nu/sqrt(n))", std::nullopt, "", ks, std::nullopt, std::nullopt,
                 "<0.01", ks < 0.01});
        }
    }

    if (in.constants) {
        const auto close = [&add, &limit_of](std::string name, const char* key,
                                             double reference, double tol) {
            const double v = *limit_of(key);
            add({std::move(name), reference, "", std::nullopt, std::nullopt, v,
                 "+/-" + num(tol), std::fabs(v - reference) <= tol});
        };
        close("I", "I", kRefI, 1e-9);
        close("mean_mu", "mean_mu", kRefMeanMu, 1e-5);
        close("var_limit", "var_limit", kRefVar, 5e-5);
        close("ratio_cond", "ratio_cond", kRefRatioCond, 1e-4);
        close("ratio_conl", "ratio_conl", kRefRatioConl, 1e-4);
        close("richest_diff", "richest_diff", kRefRichestDiff, 1e-3);
    }

    if (in.exact) {
        const auto e_nu2 =
            mapstat::exact::parse_rational(in.exact->at("E_nu2").get<std::string>());
        const auto e_mu =
            mapstat::exact::parse_rational(in.exact->at("E_mu").get<std::string>());
        add({"exact E(nu^2)=E(mu)", std::nullopt,
             in.exact->at("E_nu2").get<std::string>() + " vs " +
                 in.exact->at("E_mu").get<std::string>(),
             std::nullopt, std::nullopt, std::nullopt, "exact", e_nu2 == e_mu});

        const auto n = in.exact->at("n").get<std::int64_t>();
        const mapstat::exact::BigInt counted(
            in.exact->at("connected_count").get<std::string>());
        add({"connected count vs Katz", std::nullopt,
             in.exact->at("connected_count").get<std::string>(), std::nullopt,
             std::nullopt, std::nullopt, "exact",
             counted == mapstat::exact::connected_count(n)});
    }
    return rows;
}

std::string rows_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    os << "quantity,reference_value,exact_value,simulated_value,simulated_stderr,"
          "limit_value,tolerance,status\n";
    for (const auto& r : rows)
        os << r.quantity << ',' << num(r.reference) << ',' << r.exact << ',' << num(r.sim)
           << ',' << num(r.sim_err) << ',' << num(r.limit) << ',' << r.tolerance << ','
           << (r.informational ? "INFO" : (r.pass ? "PASS" : "FAIL")) << '\n';
    return os.str();
}

std::string rows_text(const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    os << "mapstat report\n";
    for (const auto& r : rows) {
        os << "  [" << (r.informational ? "INFO" : (r.pass ? "PASS" : "FAIL")) << "] "
           << r.quantity;
        if (r.reference) os << "  ref=" << num(r.reference);
        if (!r.exact.empty()) os << "  exact=" << r.exact;
        if (r.sim) {
            os << "  sim=" << num(r.sim);
            if (r.sim_err) os << "+/-" << num(r.sim_err);
        }
        if (r.limit) os << "  limit=" << num(r.limit);
        os << "  (" << r.tolerance << ")\n";
    }
    return os.str();
}

struct ReportArgs {
    std::string sim, exact, limits, out;
};

int cmd_report(const ReportArgs& args) {
    ordered_json config{{"sim", args.sim},
                        {"exact", args.exact},
                        {"limits", args.limits},
                        {"out", args.out}};
    Manifest manifest("report", config, 0);

    ReportInputs in;
    if (!args.sim.empty())
        in.sim = mapstat::mc::SimReport::from_json(json::parse(read_file(args.sim)));
    if (!args.exact.empty()) in.exact = json::parse(read_file(args.exact));
    if (!args.limits.empty()) {
        in.constants = json::parse(read_file(args.limits + "_constants.json"));
        std::istringstream h(read_file(args.limits + "_H.csv"));
        std::string line;
        std::getline(h, line);
        if (line != "y,H")
            throw std::runtime_error("report: " + args.limits +
                                     "_H.csv has unexpected header '" + line + "'");
        while (std::getline(h, line)) {
            const auto comma = line.find(',');
            in.h_y.push_back(std::stod(line.substr(0, comma)));
            in.h_v.push_back(std::stod(line.substr(comma + 1)));
        }
    }

    const auto rows = build_rows(in);
    if (rows.empty()) throw std::runtime_error("report: no inputs given");

    const std::string csv = rows_csv(rows);
    const std::string txt = rows_text(rows);
    write_file(args.out + ".csv", csv);
    manifest.record_output(args.out + ".csv", csv);
    write_file(args.out + ".txt", txt);
    manifest.record_output(args.out + ".txt", txt);
    manifest.write(args.out);

    std::cout << txt;
    const bool all_pass = std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) {
        return r.pass || r.informational;
    });
    std::cout << (all_pass ? "all rows PASS\n" : "some rows FAIL\n");
    return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"statistics of random mappings T:[n]->[n]"};
    app.require_subcommand(1);
    app.set_version_flag("--version", MAPSTAT_VERSION);

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo over uniform random mappings");
    sim->add_option("--n", sim_args.n, "vertex count")->check(CLI::PositiveNumber);
    sim->add_option("--reps", sim_args.reps, "replicate count")->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_args.seed, "master seed");
    sim->add_option("--threads", sim_args.threads, "worker threads")
        ->check(CLI::PositiveNumber);
    sim->add_option("--out", sim_args.out, "output prefix")->required();
    sim->add_flag("--dump-replicates", sim_args.dump_replicates,
                  "also write one CSV row per replicate");
    sim->add_option("--grid", sim_args.grid, "ecdf grid a:b:h in units of nu/sqrt(n)");

    std::int64_t enum_n = 0;
    std::string enum_out;
    auto* enu = app.add_subcommand("enumerate", "exact distributions for n <= 8");
    enu->add_option("--n", enum_n, "vertex count (1..8)")->required();
    enu->add_option("--out", enum_out, "output prefix")->required();

    LimitsArgs lim_args;
    auto* lim = app.add_subcommand("limits", "limit-law tables and constants");
    lim->add_option("--theta", lim_args.theta, "structure parameter in (0,1]");
    lim->add_option("--step", lim_args.step, "solver step (<= 1e-3)");
    lim->add_option("--xmax", lim_args.xmax, "density truncation point");
    lim->add_option("--grid", lim_args.grid, "H grid a:b:h in units of nu/sqrt(n)");
    lim->add_option("--out", lim_args.out, "output prefix")->required();

    ReportArgs rep_args;
    auto* rep = app.add_subcommand("report", "claims table from prior outputs");
    rep->add_option("--sim", rep_args.sim, "SimReport JSON from `simulate`");
    rep->add_option("--exact", rep_args.exact, "ExactTable JSON from `enumerate`");
    rep->add_option("--limits", rep_args.limits, "output prefix used with `limits`");
    rep->add_option("--out", rep_args.out, "output prefix")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_args);
        if (enu->parsed()) return cmd_enumerate(enum_n, enum_out);
        if (lim->parsed()) return cmd_limits(lim_args);
        if (rep->parsed()) return cmd_report(rep_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
