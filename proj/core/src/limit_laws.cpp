#include "mapstat/limit_laws.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

namespace mapstat::limitlaw {

namespace {

constexpr double kGL5X[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                             0.5384693101056831, 0.9061798459386640};
constexpr double kGL5W[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                             0.4786286704993665, 0.2369268850561891};

template <class F>
double gauss5(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += kGL5W[i] * f(c + h * kGL5X[i]);
    return s * h;
}

// Cubic Lagrange interpolation at real grid index s, stencil clamped to
// [lo, hi] so it never straddles a unit-interval breakpoint.
double cubic_at(const std::vector<double>& v, double s, long lo, long hi) {
    long i0 = static_cast<long>(std::floor(s)) - 1;
    i0 = std::clamp(i0, lo, hi - 3);
    const double t = s - static_cast<double>(i0);
    const double t1 = t - 1.0, t2 = t - 2.0, t3 = t - 3.0;
    return v[i0] * (-t1 * t2 * t3 / 6.0) + v[i0 + 1] * (t * t2 * t3 / 2.0) +
           v[i0 + 2] * (-t * t1 * t3 / 2.0) + v[i0 + 3] * (t * t1 * t2 / 6.0);
}

}  // namespace

DensityTable DensityTable::solve(double theta, double x_max, double step) {
    DensityTable table;
    int m = static_cast<int>(std::lround(1.0 / step));
    if (m < 4) m = 4;
    if (m % 2) ++m;
    int units = static_cast<int>(std::ceil(x_max - 1e-9));
    if (units < 2) units = 2;

    table.theta_ = theta;
    table.per_unit_ = m;
    table.units_ = units;
    table.h_ = 1.0 / m;
    table.values_.assign(static_cast<std::size_t>(units) * m + 1, 0.0);

    const double h = table.h_;
    const double c = table.closed_form_scale();
    auto& v = table.values_;
    for (int j = 1; j <= m; ++j) v[j] = c * std::pow(j * h, theta - 1.0);

    // q shows up three times: as the unit-1 kernel, as the derivative of the
    // unit-2 history in substituted coordinates, and (cumulated on a fine
    // uniform u-grid) as the semi-analytic density on (1,2].
    auto q = [theta](double u) { return std::pow(1.0 + std::pow(u, 1.0 / theta), -theta); };
    {
        constexpr int kQPanels = 4096;
        table.q_cum_.assign(kQPanels + 1, 0.0);
        double acc = 0.0, comp = 0.0;
        for (int i = 0; i < kQPanels; ++i) {
            const double piece =
                gauss5(q, static_cast<double>(i) / kQPanels,
                       static_cast<double>(i + 1) / kQPanels);
            const double y = piece - comp;
            const double t = acc + y;
            comp = (t - acc) - y;
            acc = t;
            table.q_cum_[i + 1] = acc;
        }
    }

    for (int k = 1; k < units; ++k) {
        const long base = static_cast<long>(k) * m;
        double w = std::pow(static_cast<double>(k), 1.0 - theta) * v[base];
        double comp = 0.0;  // compensation term of the running w
        bool dead = !(w > 0.0);
        for (int j = 0; j < m && !dead; ++j) {
            const long idx = base + j;
            double panel;
            if (k <= 2) {
                // On [1,3] the delayed term can be integrated against exact
                // history: closed form on (0,1], and on (1,2] the once-
                // integrated form p(s) = c s^{theta-1} (1 - Q((s-1)^theta))
                // with Q(u) = int_0^u q.  Substituting u = (t-k)^theta
                // absorbs the endpoint singularity in both cases.
                const double u0 = std::pow(j * h, theta);
                const double u1 = std::pow((j + 1) * h, theta);
                if (k == 1) {
                    panel = c * gauss5(q, u0, u1);
                } else {
                    panel = gauss5(
                        [&](double u) {
                            const double s = 1.0 + std::pow(u, 1.0 / theta);  // t - 1
                            const double ds_du =
                                std::pow(u, (1.0 - theta) / theta) / theta;
                            return theta * std::pow(1.0 + s, -theta) *
                                   std::pow(s, theta - 1.0) * c *
                                   (1.0 - table.q_integral(u)) * ds_du;
                        },
                        u0, u1);
                }
            } else {
                const long lo = base - m;
                panel = theta * h *
                        gauss5(
                            [&](double g) {
                                const double x = (idx + g) * h;
                                const double hist =
                                    cubic_at(v, static_cast<double>(idx - m) + g, lo, base);
                                return std::pow(x, -theta) * hist;
                            },
                            0.0, 1.0);
            }
            const double y = -panel - comp;
            const double t = w + y;
            comp = (t - w) - y;
            w = t;
            if (!(w > 0.0)) {
                w = 0.0;
                dead = true;
            }
            v[idx + 1] = dead ? 0.0 : w * std::pow((idx + 1) * h, theta - 1.0);
        }
    }
    return table;
}

double DensityTable::closed_form_scale() const {
    return std::exp(-kEulerGamma * theta_) / gamma_function(theta_);
}

double DensityTable::closed_form(double x) const {
    return closed_form_scale() * std::pow(x, theta_ - 1.0);
}

double DensityTable::q_integral(double u) const {
    const auto panels = static_cast<double>(q_cum_.size() - 1);
    const double s = std::clamp(u, 0.0, 1.0) * panels;
    return cubic_at(q_cum_, s, 0, static_cast<long>(q_cum_.size()) - 1);
}

double DensityTable::unit1_value(double x) const {
    const double u = std::pow(x - 1.0, theta_);
    return closed_form_scale() * std::pow(x, theta_ - 1.0) * (1.0 - q_integral(u));
}

double DensityTable::value(double x) const {
    if (!(x > 0.0)) throw std::domain_error("DensityTable::value: x must be > 0");
    if (x <= 1.0) return closed_form(x);
    if (x <= 2.0) return unit1_value(x);
    const double top = x_max();
    if (x >= top) return (x <= top * (1.0 + 1e-12)) ? values_.back() : 0.0;
    const long k = std::clamp(static_cast<long>(std::floor(x)), 2L,
                              static_cast<long>(units_ - 1));
    const long lo = k * per_unit_;
    return cubic_at(values_, x / h_, lo, lo + per_unit_);
}

double DensityTable::mass() const {
    return integrate_weighted([](double) { return 1.0; });
}

double DensityTable::laplace(double s) const {
    return integrate_weighted([s](double x) { return std::exp(-s * x); });
}

DensityTable solve_dde(const DdeOptions& options) {
    if (!(options.theta > 0.0 && options.theta <= 1.0))
        throw std::invalid_argument("solve_dde: theta must lie in (0,1]");
    if (!(options.x_max >= 2.0)) throw std::invalid_argument("solve_dde: x_max must be >= 2");
    if (!(options.step > 0.0 && options.step <= 1e-3))
        throw std::invalid_argument("solve_dde: step must lie in (0, 1e-3]");

    DensityTable table = DensityTable::solve(options.theta, options.x_max, options.step);
    if (options.check_convergence) {
        const DensityTable half =
            DensityTable::solve(options.theta, options.x_max, options.step / 2.0);
        const double drift = std::fabs(table.mass() - half.mass());
        if (drift > options.convergence_tol)
            throw ConvergenceError("solve_dde: step-halving mass drift " + std::to_string(drift) +
                                   " exceeds tolerance " + std::to_string(options.convergence_tol));
    }
    return table;
}

namespace {

double p_tail_zero(const DensityTable& table, double x) {
    if (x <= 1.0) return table.closed_form(x);  // pow(0, theta-1) handles x == 0
    if (x > table.x_max() * (1.0 + 1e-12)) return 0.0;
    return table.value(x);
}

double cdf_prefactor(double theta) {
    return std::exp(kEulerGamma * theta) * gamma_function(theta);
}

}  // namespace

double mu_cdf(const DensityTable& table, double x) {
    if (!(x > 0.0) || x > 1.0) throw std::domain_error("mu_cdf: x must lie in (0,1]");
    const double arg = 1.0 / x;
    if (arg > table.x_max() * (1.0 + 1e-12))
        throw std::domain_error("mu_cdf: table x_max below 1/x");
    const double theta = table.theta();
    return cdf_prefactor(theta) * std::pow(x, theta - 1.0) * table.value(arg);
}

double mu_pdf(const DensityTable& table, double x) {
    if (!(x > 0.0) || x > 1.0) throw std::domain_error("mu_pdf: x must lie in (0,1]");
    if (1.0 / x - 1.0 > table.x_max() * (1.0 + 1e-12))
        throw std::domain_error("mu_pdf: table x_max below 1/x - 1");
    return mu_pdf_tail_zero(table, x);
}

double mu_pdf_tail_zero(const DensityTable& table, double x) {
    const double theta = table.theta();
    const double y = 1.0 / x - 1.0;
    const double py = p_tail_zero(table, y);
    if (py == 0.0) return 0.0;
    return theta * cdf_prefactor(theta) * std::pow(x, theta - 2.0) * py;
}

double nu_limit_cdf(const DensityTable& table, double y) {
    if (y <= 0.0) return 0.0;
    auto integrand = [&](double u) {
        const double x = 1.0 - u * u;
        if (x <= 0.0) return 0.0;
        const double fx = mu_pdf_tail_zero(table, x);
        if (fx == 0.0) return 0.0;
        return 2.0 * u * fx * chi2_cdf_1dof(y / x);
    };
    const QuadResult q = integrate_adaptive(integrand, 0.0, 1.0, 1e-10);
    if (!q.converged)
        throw ConvergenceError("nu_limit_cdf: adaptive quadrature achieved only " +
                               std::to_string(q.error_estimate));
    return std::clamp(q.value, 0.0, 1.0);
}

double constant_I() {
    auto integrand = [](double u) {
        const double s = u * u;
        if (s <= 0.0) return 0.0;
        return std::exp(-s - 0.5 * exp_integral_e1(s));
    };
    return std::sqrt(2.0) * integrate_adaptive(integrand, 0.0, 10.0, 1e-12).value;
}

double purdom_williams_kappa(double n) {
    if (!(n >= 1.0)) throw std::invalid_argument("purdom_williams_kappa: n must be >= 1");
    const double r = std::sqrt(n);
    return kLongestCycleLead * r + 0.104055 + 0.0652068 / r - 0.1052117 / n +
           0.0416667 / (n * r);
}

RatioConstants ratio_constants(double I) {
    RatioConstants rc;
    rc.ratio_cond = std::sqrt(2.0 / M_PI) * I;
    rc.ratio_conl = kLongestCycleLead / std::sqrt(M_PI / 2.0);
    rc.richest_diff = rc.ratio_conl - rc.ratio_cond;
    return rc;
}

double mean_mu_from_table(const DensityTable& table) {
    const double theta = table.theta();
    return theta * cdf_prefactor(theta) *
           table.integrate_weighted(
               [theta](double y) { return std::pow(1.0 + y, -theta - 1.0); });
}

double f_mass_from_table(const DensityTable& table) {
    const double theta = table.theta();
    return theta * cdf_prefactor(theta) *
           table.integrate_weighted([theta](double y) { return std::pow(1.0 + y, -theta); });
}

LimitTables build_limit_tables(const DdeOptions& options, const std::vector<double>& t_grid,
                               double csv_x_step) {
    LimitTables tables;
    tables.density = solve_dde(options);
    const DensityTable& d = tables.density;
    const double theta = d.theta();
    const double pref = cdf_prefactor(theta);

    tables.constants.I = constant_I();
    tables.constants.mean_mu = mean_mu_from_table(d);
    tables.constants.var_limit =
        tables.constants.mean_mu - tables.constants.I * tables.constants.I;
    const RatioConstants rc = ratio_constants(tables.constants.I);
    tables.constants.ratio_cond = rc.ratio_cond;
    tables.constants.ratio_conl = rc.ratio_conl;
    tables.constants.richest_diff = rc.richest_diff;

    const auto nx = static_cast<long>(std::lround(d.x_max() / csv_x_step));
    for (long i = 1; i <= nx; ++i) {
        const double x = i * csv_x_step;
        tables.x_grid.push_back(x);
        tables.p_grid.push_back(p_tail_zero(d, x));
        if (x <= 1.0) {
            tables.F_grid.push_back(pref * std::pow(x, theta - 1.0) * p_tail_zero(d, 1.0 / x));
            tables.f_grid.push_back(mu_pdf_tail_zero(d, x));
        } else {
            tables.F_grid.push_back(1.0);
            tables.f_grid.push_back(0.0);
        }
    }

    for (const double t : t_grid) {
        const double y = t * t;
        tables.y_grid.push_back(y);
        tables.H_grid.push_back(nu_limit_cdf(d, y));
    }
    return tables;
}

namespace {

// Shortest round-trip representation, independent of the global locale.
std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

void write_density_csv(std::ostream& os, const LimitTables& tables) {
    os << "x,p,F,f\n";
    for (std::size_t i = 0; i < tables.x_grid.size(); ++i)
        os << fmt(tables.x_grid[i]) << ',' << fmt(tables.p_grid[i]) << ','
           << fmt(tables.F_grid[i]) << ',' << fmt(tables.f_grid[i]) << '\n';
}

void write_h_csv(std::ostream& os, const LimitTables& tables) {
    os << "y,H\n";
    for (std::size_t i = 0; i < tables.y_grid.size(); ++i)
        os << fmt(tables.y_grid[i]) << ',' << fmt(tables.H_grid[i]) << '\n';
}

std::string constants_json_string(const LimitTables& tables) {
    nlohmann::ordered_json j;
    j["theta"] = tables.density.theta();
    j["I"] = tables.constants.I;
    j["mean_mu"] = tables.constants.mean_mu;
    j["var_limit"] = tables.constants.var_limit;
    j["ratio_cond"] = tables.constants.ratio_cond;
    j["ratio_conl"] = tables.constants.ratio_conl;
    j["richest_diff"] = tables.constants.richest_diff;
    return j.dump(2) + "\n";
}

}  // namespace mapstat::limitlaw
