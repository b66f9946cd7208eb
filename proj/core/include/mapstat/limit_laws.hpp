#pragma once
// Limit laws of the largest component and its cycle.
//
// Everything is driven by the density p_theta(x) of the logarithmic-structure
// limit variable (theta = 1/2 for random mappings):
//
//   p_theta(x) = e^{-gamma*theta} x^{theta-1} / Gamma(theta)   on (0,1],
//   x p'(x) + (1-theta) p(x) + theta p(x-1) = 0                for x > 1.
//
// solve_dde() integrates the equation by the method of steps, one unit
// interval at a time.  Multiplying by the integrating factor x^{-theta}
// turns each interval into an explicit quadrature of known history,
//
//   x^{1-theta} p(x) = k^{1-theta} p(k) - theta int_k^x t^{-theta} p(t-1) dt,
//
// which is the integral form of the equation with the implicit term
// eliminated.  On [1,2] the delayed term is singular at the left endpoint
// (p(t-1) ~ (t-1)^{theta-1}); there the history is closed form, and the
// substitution u = (t-1)^theta (u = sqrt(t-1) for mappings) absorbs the
// singularity exactly.  Later intervals interpolate history cubically on a
// grid whose step divides 1, so delayed positions fall between known nodes
// of a single smooth piece.  The running value is carried with compensated
// summation; without it, rounding noise from the early steps (~1e-16) would
// swamp the superexponentially small tail.
//
// From the table: F (CDF of the largest-component fraction), f (its
// density), the composite CDF H(y) = int_0^1 f(x) G(y/x) dx of the squared
// normalized deepest-cycle length, and the limit constants.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapstat/quadrature.hpp"
#include "mapstat/special_functions.hpp"

namespace mapstat::limitlaw {

struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

struct DdeOptions {
    double theta = 0.5;
    double x_max = 50.0;  // rounded up to a whole number of unit intervals
    double step = 1e-4;   // rounded to 1/M with M even
    bool check_convergence = true;  // re-solve at step/2 and compare masses
    double convergence_tol = 1e-7;
};

/// Sampled p_theta on a uniform grid covering (0, x_max].
class DensityTable {
  public:
    double theta() const { return theta_; }
    double step() const { return h_; }
    double x_max() const { return static_cast<double>(units_); }
    int points_per_unit() const { return per_unit_; }

    /// Closed form c_theta x^{theta-1}; only meaningful on (0,1].
    double closed_form(double x) const;

    /// p(x): closed form on (0,1], cubic interpolation on (1, x_max], 0 in
    /// the truncated tail.  Throws std::domain_error for x <= 0.
    double value(double x) const;

    /// int_0^{x_max} p(x) w(x) dx.  The (0,1] part goes through the
    /// substitution u = x^theta, the [1,2] part through u = (x-1)^theta with
    /// the semi-analytic density (both adaptive; p's derivative blows up at
    /// 1+, so the raw grid is no good there), the rest by composite Simpson
    /// on the grid, one unit interval at a time so integrand kinks at whole
    /// numbers do not hurt.
    template <class W>
    double integrate_weighted(W&& w, double quad_tol = 1e-12) const {
        const double c = closed_form_scale();
        const double inv_theta = 1.0 / theta_;
        auto sub0 = [&](double u) { return (c / theta_) * w(std::pow(u, inv_theta)); };
        double total = integrate_adaptive(sub0, 0.0, 1.0, quad_tol).value;
        auto sub1 = [&](double u) {
            const double x = 1.0 + std::pow(u, inv_theta);
            const double du_factor = std::pow(u, (1.0 - theta_) * inv_theta) * inv_theta;
            return c * std::pow(x, theta_ - 1.0) * (1.0 - q_integral(u)) * w(x) * du_factor;
        };
        total += integrate_adaptive(sub1, 0.0, 1.0, quad_tol).value;
        for (int k = 2; k < units_; ++k) {
            const std::size_t base = static_cast<std::size_t>(k) * per_unit_;
            double odd = 0.0, even = 0.0;
            for (int j = 1; j < per_unit_; ++j) {
                const double g = values_[base + j] * w((base + j) * h_);
                (j % 2 ? odd : even) += g;
            }
            const double ends = values_[base] * w(base * h_) +
                                values_[base + per_unit_] * w((base + per_unit_) * h_);
            total += h_ / 3.0 * (ends + 4.0 * odd + 2.0 * even);
        }
        return total;
    }

    /// int_0^{x_max} p = 1 up to the (superexponentially small) tail.
    double mass() const;

    /// Laplace transform int_0^{x_max} e^{-sx} p(x) dx.
    double laplace(double s) const;

    const std::vector<double>& grid_values() const { return values_; }
    double closed_form_scale() const;  // e^{-gamma*theta}/Gamma(theta)

    /// Q(u) = int_0^u (1 + v^{1/theta})^{-theta} dv for u in [0,1]; the once-
    /// integrated density on [1,2] is p(x) = c x^{theta-1} (1 - Q((x-1)^theta)).
    double q_integral(double u) const;

  private:
    friend DensityTable solve_dde(const DdeOptions&);
    static DensityTable solve(double theta, double x_max, double step);
    double unit1_value(double x) const;  // semi-analytic p on (1,2]
    double theta_ = 0.5;
    double h_ = 0.0;
    int per_unit_ = 0;
    int units_ = 0;
    std::vector<double> values_;  // values_[j] = p(j*h), j = 1..units*per_unit
    std::vector<double> q_cum_;   // Q on a uniform u-grid over [0,1]
};

/// Solves the delay differential equation (see file comment).  Throws
/// std::invalid_argument on bad options, ConvergenceError when the
/// step-halving mass check fails.
DensityTable solve_dde(const DdeOptions& options);

/// F(x) = e^{gamma*theta} Gamma(theta) x^{theta-1} p(1/x): CDF of the
/// largest-component fraction.  Requires x in (0,1] and x_max >= 1/x.
double mu_cdf(const DensityTable& table, double x);

/// f(x) = theta e^{gamma*theta} Gamma(theta) x^{theta-2} p(1/x - 1): density
/// of the largest-component fraction.  Requires x in (0,1] and
/// x_max >= 1/x - 1.  Diverges (integrably) at x = 1 for theta < 1.
double mu_pdf(const DensityTable& table, double x);

/// As mu_pdf but treats arguments beyond the table as exact zero tail;
/// defined on all of (0,1].  Quadratures use this form.
double mu_pdf_tail_zero(const DensityTable& table, double x);

/// H(y) = int_0^1 f(x) G(y/x) dx: limit CDF of nu^2/n.  The CDF of
/// nu/sqrt(n) at t is H(t^2).  Substitutes x = 1-u^2 to absorb the
/// x -> 1 singularity of f; throws ConvergenceError if the adaptive
/// quadrature cannot reach its tolerance.
double nu_limit_cdf(const DensityTable& table, double y);

/// I = (1/sqrt(2)) int_0^inf exp(-s - E1(s)/2)/sqrt(s) ds, evaluated after
/// s = u^2 to 1e-10.  Limit of E(nu_n)/sqrt(n).
double constant_I();

/// Leading coefficient of the expected-longest-cycle expansion.
inline constexpr double kLongestCycleLead = 0.7824816;

/// Five-term approximation of E(kappa_n):
/// 0.7824816 n^{1/2} + 0.104055 + 0.0652068 n^{-1/2} - 0.1052117 n^{-1}
/// + 0.0416667 n^{-3/2}.
double purdom_williams_kappa(double n);

struct RatioConstants {
    double ratio_cond = 0.0;     // sqrt(2/pi) * I      ~ 0.5493
    double ratio_conl = 0.0;     // lead / sqrt(pi/2)   ~ 0.6243
    double richest_diff = 0.0;   // their difference    ~ 0.075
};
RatioConstants ratio_constants(double I);

struct LimitConstants {
    double I = 0.0;
    double mean_mu = 0.0;
    double var_limit = 0.0;  // mean_mu - I^2
    double ratio_cond = 0.0;
    double ratio_conl = 0.0;
    double richest_diff = 0.0;
};

/// Solved table plus sampled F/f/H and the limit constants.
struct LimitTables {
    DensityTable density;
    std::vector<double> x_grid, p_grid, F_grid, f_grid;
    std::vector<double> y_grid, H_grid;  // y = t^2 over the requested t grid
    LimitConstants constants;
};

/// Solves the DDE and evaluates every derived table.  `t_grid` holds the
/// nu/sqrt(n) evaluation points for H; `csv_x_step` the x sampling step.
LimitTables build_limit_tables(const DdeOptions& options,
                               const std::vector<double>& t_grid,
                               double csv_x_step = 0.01);

/// Mean of the largest-component fraction straight from the table:
/// int_0^1 x f(x) dx after the change of variables y = 1/x - 1.
double mean_mu_from_table(const DensityTable& table);

/// int_0^1 f(x) dx from the table, same change of variables.
double f_mass_from_table(const DensityTable& table);

/// CSV with header `x,p,F,f`; locale-independent shortest round-trip floats.
void write_density_csv(std::ostream& os, const LimitTables& tables);

/// CSV with header `y,H`.
void write_h_csv(std::ostream& os, const LimitTables& tables);

/// Constants block as JSON (keys theta, I, mean_mu, var_limit, ratio_cond,
/// ratio_conl, richest_diff).
std::string constants_json_string(const LimitTables& tables);

}  // namespace mapstat::limitlaw
