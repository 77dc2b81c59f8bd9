#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "blowup/green.hpp"
#include "blowup/rng.hpp"
#include "support.hpp"

using namespace blowup;

namespace {

Point pt(std::initializer_list<double> v) {
    Point p(static_cast<Eigen::Index>(v.size()));
    int i = 0;
    for (double c : v) p[i++] = c;
    return p;
}

Point random_point(CounterRng& rng, int N, double radius) {
    return radius * std::pow(rng.uniform(), 1.0 / N) * random_direction(rng, N);
}

GreenBall unit_ball(int N) { return GreenBall(dimension_params(N), BallDomain::unit(N)); }

double fd_laplacian_y(const std::function<double(const Point&)>& f, const Point& y, double h) {
    double s = 0.0;
    Point z = y;
    for (int i = 0; i < y.size(); ++i) {
        z[i] = y[i] + h;
        s += f(z);
        z[i] = y[i] - h;
        s += f(z);
        z[i] = y[i];
    }
    return (s - 2.0 * y.size() * f(y)) / (h * h);
}

}  // namespace

TEST_CASE("Laplace Green function on the unit ball") {
    const GreenBall g = unit_ball(5);
    const Point o = Point::Zero(5);
    CHECK(g.g_lap(o, pt({0.5, 0, 0, 0, 0})) == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(g.h_lap(o, pt({0.1, -0.3, 0.2, 0, 0.5})) == doctest::Approx(1.0).epsilon(1e-14));

    CounterRng rng(stream_key(1, "green_ball", "laplace"));
    for (int i = 0; i < 20; ++i) {
        const Point x = random_point(rng, 5, 0.9), y = random_point(rng, 5, 0.9);
        const Point s = random_direction(rng, 5);
        CHECK(std::abs(g.g_lap(x, s)) < 1e-12);
        CHECK(g.h_lap(x, s) == doctest::Approx(std::pow((x - s).norm(), -3.0)).epsilon(1e-12));
        CHECK(g.g_lap(x, y) > 0.0);
        CHECK(g.g_lap(x, y) == doctest::Approx(g.g_lap(y, x)).epsilon(1e-12));
        const double lap = fd_laplacian_y([&](const Point& z) { return g.h_lap(x, z); }, y, 1e-3);
        CHECK(std::abs(lap) < 1e-4 * g.h_lap(x, y) / std::pow(1.0 - y.norm(), 2));
    }
    CHECK(error_of([&] { g.g_lap(o, o); }) == ErrorCode::singularity);
    CHECK(error_of([&] { g.g_lap(o, pt({1.5, 0, 0, 0, 0})); }) == ErrorCode::outside_domain);
}

TEST_CASE("Poisson extension reproduces harmonic data") {
    const GreenBall g = unit_ball(5);
    const Estimate one = poisson_extension(g, [](const Point&) { return 1.0; }, pt({0.3, 0.2, 0, 0, 0}), 100000, 4);
    CHECK(std::abs(one.value - 1.0) <= 3.0 * one.err + 1e-12);
    const auto first = [](const Point& s) { return s[0]; };
    const Estimate zero = poisson_extension(g, first, Point::Zero(5), 100000, 4);
    CHECK(std::abs(zero.value) <= 3.0 * zero.err);
    const Estimate lin = poisson_extension(g, first, pt({0.4, 0, 0, 0, 0}), 100000, 4);
    CHECK(std::abs(lin.value - 0.4) <= 3.0 * lin.err);
}

TEST_CASE("regular part against high-precision references") {
    // 30-digit evaluations of the Kelvin image plus Almansi integral.
    const GreenBall g = unit_ball(5);
    CHECK(g.h_biharm(Point::Zero(5), Point::Zero(5)) == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(g.h_biharm(pt({0.3, 0.1, 0, 0, 0}), pt({-0.2, 0.4, 0.1, 0, 0})) ==
          doctest::Approx(1.10490510754456).epsilon(1e-11));
    CHECK(g.h_biharm(pt({-0.995, 0, 0, 0, 0}), pt({-0.99, 0.01, 0, 0, 0})) ==
          doctest::Approx(55.8498826107828).epsilon(1e-10));
    CHECK(g.h_biharm(pt({-0.9999, 0, 0, 0, 0}), pt({-0.9998, 0, 0.0001, 0, 0})) ==
          doctest::Approx(3162.70426188287).epsilon(1e-9));
}

TEST_CASE("regular part solves the Navier problem") {
    for (int N : {5, 6, 7}) {
        CAPTURE(N);
        const GreenBall g = unit_ball(N);
        CounterRng rng(stream_key(N, "green_ball", "navier"));
        for (int i = 0; i < 10; ++i) {
            const Point x = random_point(rng, N, 0.8), y = random_point(rng, N, 0.8);
            CHECK(g.h_biharm(x, y) == doctest::Approx(g.h_biharm(y, x)).epsilon(1e-11));
            // Delta_y H = -2(N-4) H_lap
            const double lap = h_biharm_laplacian_fd(g, x, y, 1e-3);
            CHECK(lap == doctest::Approx(-2.0 * (N - 4) * g.h_lap(x, y)).epsilon(1e-5));
            // G and Delta G vanish on the boundary
            const Point s = random_direction(rng, N);
            CHECK(g.h_biharm(x, s) == doctest::Approx(std::pow((x - s).norm(), 4.0 - N)).epsilon(1e-11));
            CHECK(std::abs(g.g_biharm(x, 0.999999 * s)) < 1e-4 * std::pow((x - s).norm(), 4.0 - N));
        }
    }
}

TEST_CASE("regular part on a shifted, scaled ball") {
    BallDomain dom = BallDomain::unit(5);
    dom.center = pt({0.5, -1, 0, 2, 0});
    dom.radius = 2.5;
    const GreenBall g(dimension_params(5), dom);
    const GreenBall u = unit_ball(5);
    const Point xs = pt({0.3, 0.1, 0, 0, 0}), ys = pt({-0.2, 0.4, 0.1, 0, 0});
    const Point x = dom.center + dom.radius * xs, y = dom.center + dom.radius * ys;
    CHECK(g.h_biharm(x, y) == doctest::Approx(std::pow(2.5, -1.0) * u.h_biharm(xs, ys)).epsilon(1e-12));
    CHECK(g.h_lap(x, y) == doctest::Approx(std::pow(2.5, -3.0) * u.h_lap(xs, ys)).epsilon(1e-12));
}

TEST_CASE("boundary split estimate agrees with the closed form") {
    const GreenBall g = unit_ball(5);
    const Point x = pt({0.2, -0.3, 0.1, 0, 0}), y = pt({-0.4, 0.1, 0, 0.3, 0});
    const Estimate a = h_biharm_mc(g, x, y, 200000, 3);
    const Estimate b = h_biharm_mc(g, y, x, 200000, 3, 1);
    CHECK(std::abs(a.value - g.h_biharm(x, y)) <= 4.0 * a.err);
    CHECK(std::abs(a.value - b.value) <= 4.0 * std::hypot(a.err, b.err));
}

TEST_CASE("normalization of the bi-Laplacian") {
    const GreenBall g = unit_ball(5);
    CHECK(g.hat_gamma() == doctest::Approx(2.0 * g.dims().gamma_N));
    CHECK(manufactured_w(5, 0.0) == 1.0);
    CHECK(manufactured_f(5, 0.0) == doctest::Approx(840.0));
    CHECK(manufactured_integral_center(g) / g.dims().gamma_N == doctest::Approx(2.0).epsilon(1e-6));
    const Estimate e = manufactured_integral(g, Point::Zero(5), 1000000, 1);
    CHECK(std::abs(e.value / g.hat_gamma() - 1.0) < 0.02);
}

TEST_CASE("boundary estimate sweep") {
    const GreenBall g = unit_ball(5);
    const LahReport r = lah_sweep(g, pt({-1, 0, 0, 0, 0}), Point::Zero(5), {0.2, 0.1, 0.05, 0.025});
    CHECK(r.h_fit.slope == doctest::Approx(1.0).epsilon(0.3));
    CHECK(r.lap_fit.slope == doctest::Approx(1.0).epsilon(0.3));
    CHECK(r.rows.back().ratio_h < r.rows.front().ratio_h);
    CHECK(error_of([&] { lah_sweep(g, pt({-1, 0, 0, 0, 0}), Point::Zero(5), {0.7}); }) == ErrorCode::invalid_argument);
}
