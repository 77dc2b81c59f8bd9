#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "blowup/geometry.hpp"
#include "blowup/mc.hpp"
#include "blowup/rng.hpp"
#include "support.hpp"

using namespace blowup;

namespace {

Point e(int N, int i, double s = 1.0) {
    Point p = Point::Zero(N);
    p[i] = s;
    return p;
}

Point random_point(CounterRng& rng, int N, double radius) {
    return radius * std::pow(rng.uniform(), 1.0 / N) * random_direction(rng, N);
}

}  // namespace

TEST_CASE("boundary frame on the unit ball") {
    const BallDomain dom = BallDomain::unit(5);
    const BoundaryFrame f = boundary_frame(dom, e(5, 0, 0.9));
    CHECK((f.base - e(5, 0)).norm() < 1e-15);
    CHECK(f.depth == doctest::Approx(0.1));
    CHECK((f.inward_normal - e(5, 0, -1.0)).norm() < 1e-15);
    CHECK((f.mirror - e(5, 0, 1.1)).norm() < 1e-14);

    CHECK(error_of([&] { boundary_frame(dom, Point::Zero(5)); }) == ErrorCode::no_unique_frame);
    CHECK(error_of([&] { boundary_frame(dom, e(5, 1, 1.5)); }) == ErrorCode::outside_domain);
}

TEST_CASE("reflection across the sphere is an involution") {
    BallDomain dom = BallDomain::unit(6);
    dom.center = e(6, 2, 0.4);
    dom.radius = 2.0;
    CounterRng rng(stream_key(3, "geometry_domain", "involution"));
    for (int i = 0; i < 100; ++i) {
        const Point x = dom.center + random_point(rng, 6, 1.9);
        const Point r = reflect_across_boundary(dom, x);
        CHECK((reflect_across_boundary(dom, r) - x).norm() < 1e-12);
        CHECK(dom.depth(x) == doctest::Approx(-dom.depth(r)).epsilon(1e-12));
    }
}

TEST_CASE("reflection comparability") {
    const BallDomain dom = BallDomain::unit(5);
    const Point xi = e(5, 0, 0.9);
    CounterRng rng(stream_key(5, "geometry_domain", "comparability"));
    std::vector<Point> ys;
    for (int i = 0; i < 10000; ++i) ys.push_back(random_point(rng, 5, 1.0));
    CHECK(reflection_comparability(dom, xi, ys) >= 0.5);

    ys.push_back(xi);
    CHECK(std::isfinite(reflection_comparability(dom, xi, ys)));

    const Point on_boundary = e(5, 1);
    CHECK(reflection_comparability(dom, on_boundary, {e(5, 0, 0.2), e(5, 2, -0.7)}) == doctest::Approx(1.0));
    CHECK(error_of([&] { reflection_comparability(dom, xi, {}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("weight hypothesis at boundary points") {
    const BallDomain dom = BallDomain::unit(5);
    const WeightField a = WeightField::affine(2.0, e(5, 0));

    const WeightReport good = weight_checks(dom, a, e(5, 0, -1.0));
    CHECK(good.critical);
    CHECK(good.nondegenerate);
    CHECK(good.normal_derivative == doctest::Approx(1.0));
    CHECK(good.min_value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(good.positive);
    CHECK(good.p2_holds());

    const WeightReport flipped = weight_checks(dom, a, e(5, 0, 1.0));
    CHECK(flipped.critical);
    CHECK(flipped.normal_derivative == doctest::Approx(-1.0));
    CHECK_FALSE(flipped.p2_holds());

    const WeightReport off = weight_checks(dom, a, e(5, 1));
    CHECK_FALSE(off.critical);
    CHECK_FALSE(off.p2_holds());

    CHECK(error_of([&] { weight_checks(dom, a, e(5, 0, 0.5)); }) == ErrorCode::invalid_point);
}

TEST_CASE("weight derivatives against finite differences") {
    const WeightField a = WeightField::with_bump(2.0, e(5, 0), e(5, 1, 0.3), 0.5, 0.4);
    CounterRng rng(stream_key(9, "geometry_domain", "weight_fd"));
    const double h = 1e-5;
    for (int i = 0; i < 20; ++i) {
        const Point x = random_point(rng, 5, 1.0);
        const Point gr = a.gradient(x);
        double lap = 0.0;
        for (int j = 0; j < 5; ++j) {
            const Point hp = x + e(5, j, h), hm = x - e(5, j, h);
            CHECK(gr[j] == doctest::Approx((a.value(hp) - a.value(hm)) / (2 * h)).epsilon(1e-7));
            lap += (a.value(hp) + a.value(hm) - 2 * a.value(x)) / (h * h);
        }
        CHECK(a.laplacian(x) == doctest::Approx(lap).epsilon(1e-4));
        CHECK(a.hessian(x).trace() == doctest::Approx(a.laplacian(x)).epsilon(1e-12));
    }
}

TEST_CASE("symmetry group fixes the normal axis") {
    const BallDomain dom = BallDomain::unit(5);
    const SymmetryGroup G(dom, e(5, 0, -1.0));
    CHECK(G.count() == 4);
    CounterRng rng(stream_key(2, "geometry_domain", "symmetry"));
    for (int i = 1; i <= G.count(); ++i) {
        const Point axis = e(5, 0, 0.37);
        CHECK((G.reflect(i, axis) - axis).norm() < 1e-15);
        const Point x = random_point(rng, 5, 1.0);
        const Point r = G.reflect(i, x);
        CHECK((G.reflect(i, r) - x).norm() < 1e-14);
        CHECK(r.norm() == doctest::Approx(x.norm()).epsilon(1e-14));
    }
    Point fixed = random_point(rng, 5, 0.5);
    fixed[1] = 0.0;
    const Point r = G.reflect(1, fixed);
    CHECK((r - fixed).norm() < 1e-14);
    CHECK(error_of([&] { G.reflect(0, fixed); }) == ErrorCode::index_out_of_range);
    CHECK(error_of([&] { G.reflect(5, fixed); }) == ErrorCode::index_out_of_range);
}
