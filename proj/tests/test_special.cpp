#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "mapstat/quadrature.hpp"
#include "mapstat/special_functions.hpp"

using namespace mapstat::limitlaw;

TEST_SUITE_BEGIN("special");

TEST_CASE("normal cdf") {
    CHECK(std_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    // against direct quadrature of the defining integral
    auto density = [](double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI); };
    const double by_quad = integrate_adaptive(density, -10.0, 1.0, 1e-13).value;
    CHECK(std::fabs(std_normal_cdf(1.0) - by_quad) < 1e-12);
    CHECK(std::fabs(std_normal_cdf(1.0) - 0.8413447460685429) < 1e-12);
    CHECK(std_normal_cdf(-40.0) == doctest::Approx(0.0));
    CHECK(std_normal_cdf(40.0) == doctest::Approx(1.0));
}

TEST_CASE("chi-squared(1) cdf") {
    CHECK(chi2_cdf_1dof(0.0) == 0.0);
    CHECK(chi2_cdf_1dof(-3.0) == 0.0);
    CHECK(std::fabs(chi2_cdf_1dof(1.0) - 0.6826894921370859) < 1e-12);
    CHECK(chi2_cdf_1dof(1e6) == doctest::Approx(1.0));
}

TEST_CASE("exponential integral E1") {
    CHECK_THROWS_AS(exp_integral_e1(0.0), std::domain_error);
    CHECK_THROWS_AS(exp_integral_e1(-1.0), std::domain_error);

    CHECK(std::fabs(exp_integral_e1(1.0) - 0.21938393439552026) < 1e-13);

    // independent oracle: adaptive quadrature of int_s^50 e^{-t}/t dt
    auto tail = [](double t) { return std::exp(-t) / t; };
    for (const double s : {0.25, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double oracle = integrate_adaptive(tail, s, 50.0, 1e-14).value;
        CHECK(std::fabs(exp_integral_e1(s) - oracle) < 1e-12 * oracle + 1e-15);
    }

    // classical small-s identity: E1(s) + ln s + gamma -> 0
    CHECK(std::fabs(exp_integral_e1(1e-8) + std::log(1e-8) + kEulerGamma) < 2e-8);

    // series and continued fraction meet at the branch point
    const double left = exp_integral_e1(1.0);
    const double right = exp_integral_e1(std::nextafter(1.0, 2.0));
    CHECK(std::fabs(left - right) < 1e-12 * left);
}

TEST_CASE("gamma at the special points") {
    CHECK(gamma_function(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-15));
    CHECK(gamma_function(1.0) == 1.0);
    CHECK(gamma_function(0.25) == doctest::Approx(std::tgamma(0.25)).epsilon(1e-15));
}

TEST_CASE("adaptive quadrature basics") {
    CHECK(integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0, 1e-12).value ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12).value ==
          doctest::Approx(2.0).epsilon(1e-13));

    // reversed on surrender: a hard integrable singularity with a tiny panel
    // budget must flag non-convergence and report the achieved error
    auto nasty = [](double x) { return std::pow(std::fabs(x - 0.3), -0.9); };
    const auto q = integrate_adaptive(nasty, 0.0, 1.0, 1e-12, 20);
    CHECK_FALSE(q.converged);
    CHECK(q.error_estimate > 0.0);
}

TEST_SUITE_END();
