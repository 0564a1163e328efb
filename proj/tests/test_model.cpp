#include "csvortex/model.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace csvortex;
namespace nl = csvortex::nonlinearity;

TEST_CASE("nonlinearity f at pinned points") {
    CHECK(nl::f(0.0) == 0.0);
    // unique minimum -5^5/6^6 at u = ln(1/6)
    CHECK(nl::f(nl::Constants::u_star) == doctest::Approx(-3125.0 / 46656.0).epsilon(1e-14));
    // high-precision direct evaluation
    CHECK(nl::f(-1.0) == doctest::Approx(-0.037128302598437466).epsilon(1e-14));
    CHECK(nl::f_prime(nl::Constants::u_star) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(nl::f_prime(0.0) == 0.0);
}

TEST_CASE("f range and derivative bound on u <= 0") {
    // dense grid maximization; the true sup is far below the licensed bound 5
    double fmax = -1e300, fmin = 1e300, fpmax = 0.0;
    const int m = 1000000;
    for (int i = 0; i <= m; ++i) {
        const double u = -50.0 + 50.0 * i / m;
        const double fu = nl::f(u);
        fmax = std::max(fmax, fu);
        fmin = std::min(fmin, fu);
        fpmax = std::max(fpmax, std::fabs(nl::f_prime(u)));
    }
    CHECK(fmax <= 0.0);
    CHECK(fmin >= nl::Constants::f_min - 1e-15);
    CHECK(fpmax <= nl::Constants::f_prime_bound);
}

TEST_CASE("truncated g") {
    CHECK(nl::g(1.0) == 0.0);
    CHECK(nl::g(0.0) == 0.0);
    CHECK(nl::g(std::log(0.5)) == doctest::Approx(1.0 / 64.0).epsilon(1e-14));
    // g = -f on u <= 0
    for (double u : {-10.0, -2.0, -0.5, -0.01}) CHECK(nl::g(u) == doctest::Approx(-nl::f(u)));
    // bounded along with its one-sided derivatives
    for (double u = -30.0; u <= 5.0; u += 0.003)
        CHECK(std::fabs(nl::g(u)) + std::fabs(nl::g_prime(u)) < 7.0);
}

TEST_CASE("antiderivative F") {
    CHECK(nl::antiderivative_F(0.0) == 0.0);
    CHECK(nl::antiderivative_F(-745.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    // central difference against f at the pinned point
    const double h = 1e-6, u = -0.7;
    const double fd = (nl::antiderivative_F(u + h) - nl::antiderivative_F(u - h)) / (2.0 * h);
    CHECK(std::fabs(fd - nl::f(u)) / std::fabs(nl::f(u)) < 1e-6);
}

TEST_CASE("F' = f at random points in [-10, 0]") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-10.0, 0.0);
    for (int k = 0; k < 100; ++k) {
        const double u = dist(rng);
        const double h = 1e-6;
        const double fd =
            (nl::antiderivative_F(u + h) - nl::antiderivative_F(u - h)) / (2.0 * h);
        const double scale = std::max(std::fabs(nl::f(u)), 1e-30);
        CHECK(std::fabs(fd - nl::f(u)) / scale < 1e-5);
    }
}

TEST_CASE("coupling relation") {
    const auto c1 = Coupling::from_kappa(1.0);
    CHECK(c1.lambda == doctest::Approx(12.0));
    const auto c2 = Coupling::from_lambda(12.0);
    CHECK(c2.kappa == doctest::Approx(1.0));
    CHECK(c2.lambda * c2.kappa * c2.kappa == doctest::Approx(12.0).epsilon(1e-15));
    CHECK_THROWS(Coupling::from_kappa(-1.0));
}

TEST_CASE("vortex set invariants") {
    VortexSet empty;
    CHECK(empty.total_winding() == 0);
    VortexSet vs(std::vector<Vortex>{{0.0, 0.0, 2}, {1.0, 0.0, 1}});
    CHECK(vs.total_winding() == 3);
    CHECK_THROWS(VortexSet(std::vector<Vortex>{{0.0, 0.0, 0}}));
    CHECK_THROWS(VortexSet(std::vector<Vortex>{{0.0, 0.0, 1}, {0.0, 0.0, 1}}));
}
