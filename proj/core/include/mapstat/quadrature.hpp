#pragma once
// Adaptive Gauss-Kronrod (G7/K15) integration.  Panels are bisected until
// each local error stays within its width-proportional share of the absolute
// tolerance; accepted panels accumulate left to right so results are
// deterministic.

#include <cmath>
#include <utility>
#include <vector>

namespace mapstat::limitlaw {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
    bool converged = true;
};

namespace detail {

// QUADPACK dqk15 nodes and weights.
inline constexpr double kKronrodX[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993945,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
inline constexpr double kKronrodW[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278};
inline constexpr double kGaussW[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

template <class F>
std::pair<double, double> gauss_kronrod_15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resg = fc * kGaussW[3];
    double resk = fc * kKronrodW[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kKronrodX[j];
        const double sum = f(c - dx) + f(c + dx);
        resk += kKronrodW[j] * sum;
        if (j % 2 == 1) resg += kGaussW[j / 2] * sum;
    }
    return {resk * h, std::fabs((resk - resg) * h)};
}

}  // namespace detail

/// Integrates f over [a, b] to absolute tolerance `abs_tol`.  If the panel
/// budget runs out, `converged` is false and `error_estimate` reports what
/// was achieved.
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, double abs_tol,
                              int max_panels = 4000) {
    QuadResult res;
    if (a == b) return res;
    const double total_width = std::fabs(b - a);
    std::vector<std::pair<double, double>> pending{{a, b}};
    while (!pending.empty()) {
        const auto [lo, hi] = pending.back();
        pending.pop_back();
        const auto [val, err] = detail::gauss_kronrod_15(f, lo, hi);
        ++res.panels;
        const double width = std::fabs(hi - lo);
        if (err <= abs_tol * width / total_width || res.panels >= max_panels) {
            res.value += val;
            res.error_estimate += err;
            if (res.panels >= max_panels && err > abs_tol * width / total_width)
                res.converged = false;
            continue;
        }
        const double mid = 0.5 * (lo + hi);
        pending.emplace_back(mid, hi);  // left half is processed first
        pending.emplace_back(lo, mid);
    }
    return res;
}

}  // namespace mapstat::limitlaw
