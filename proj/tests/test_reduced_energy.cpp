#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "blowup/reduced_energy.hpp"
#include "blowup/rng.hpp"
#include "support.hpp"

using namespace blowup;

namespace {

Point e1(int N, double s) {
    Point p = Point::Zero(N);
    p[0] = s;
    return p;
}

UniversalConstants closed(int N) { return universal_constants(N, Gamma3Variant::without, QuadratureSpec{}); }

// F2 written out term by term for N = 5.
double f2_oracle(const UniversalConstants& c, double a0, double s, double d1, double d2, double t1, double t2, bool homog) {
    const double w2 = 0.4 * c.gamma1.value, w3 = 0.05 * c.gamma1.value, w4 = 0.5 * c.gamma2.value;
    const double L = (homog ? a0 : 1.0) * (std::log(d1) + std::log(d2));
    const double inter = 2.0 * std::sqrt(d1 * d2) * (1.0 / std::abs(t1 - t2) - 1.0 / (t1 + t2));
    return s * (t1 + t2) * w2 - L * w3 + a0 * (inter + d1 / (2 * t1) + d2 / (2 * t2)) * w4;
}

}  // namespace

TEST_CASE("F1 block at a sample point") {
    const UniversalConstants c = closed(5);
    const BallDomain dom = BallDomain::unit(5);
    const WeightField a = WeightField::affine(2.0, e1(5, 1.0));
    ConfigK k;
    k.anchors = {e1(5, -1.0)};
    k.b = {0};
    k.d = {1.0};
    k.t = {1.0};
    const double block = (10.0 * c.gamma3.value - c.gamma1.value) / 100.0;
    CHECK(f1_eval(dom, k, a, c) == doctest::Approx(block + 0.4 * c.gamma1.value + 0.25 * c.gamma2.value).epsilon(1e-12));

    // separable over anchors
    ConfigK two = k;
    Point other = Point::Zero(5);
    other[1] = 1.0;
    two.anchors.push_back(other);
    two.b.push_back(1);
    two.d.push_back(0.3);
    two.t.push_back(0.7);
    const AnchorData ad = anchor_data(dom, a, other);
    CHECK(f1_eval(dom, two, a, c) ==
          doctest::Approx(f1_eval(dom, k, a, c) + f1_block(5, c, ad, 0.3, 0.7)).epsilon(1e-12));

    // d -> 0 drives F1 up through -log d
    const AnchorData a1{1.0, 1.0};
    CHECK(f1_block(5, c, a1, 1e-12, 1.0) > f1_block(5, c, a1, 1e-3, 1.0));
    CHECK(error_of([&] { f1_block(5, c, a1, 0.0, 1.0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("F1 block gradient against finite differences") {
    CounterRng rng(stream_key(1, "reduced_energy", "f1_grad"));
    for (int N : {5, 6, 8}) {
        const UniversalConstants c = closed(N);
        for (int i = 0; i < 50; ++i) {
            const AnchorData ad{0.5 + rng.uniform(), 0.2 + rng.uniform()};
            const double d = 0.01 + rng.uniform(), t = 0.05 + rng.uniform();
            const auto g = f1_block_grad(N, c, ad, d, t);
            const double hd = 1e-6 * d, ht = 1e-6 * t;
            const double fd_d = (f1_block(N, c, ad, d + hd, t) - f1_block(N, c, ad, d - hd, t)) / (2 * hd);
            const double fd_t = (f1_block(N, c, ad, d, t + ht) - f1_block(N, c, ad, d, t - ht)) / (2 * ht);
            CHECK(g[0] == doctest::Approx(fd_d).epsilon(1e-6));
            CHECK(g[1] == doctest::Approx(fd_t).epsilon(1e-6));
        }
    }
}

TEST_CASE("F1 critical point satisfies the first-order identities") {
    for (int N : {5, 6, 7, 9}) {
        CAPTURE(N);
        const UniversalConstants c = closed(N);
        const double p = dimension_params(N).p_value;
        for (const AnchorData ad : {AnchorData{1.0, 1.0}, AnchorData{2.0, 0.5}, AnchorData{0.7, 3.0}}) {
            const CriticalPointReport r = f1_critical(N, c, ad);
            REQUIRE(r.converged);
            const double d = r.location[0], t = r.location[1];
            CHECK(rel_diff(std::pow(d / (2 * t), N - 4.0) * p * c.gamma2.value / c.gamma1.value, 1.0) < 1e-8);
            CHECK(rel_diff(t * (p - 2) * ad.s / (ad.a0 * (N - 4)), 1.0) < 1e-8);
            CHECK(r.gradient_norm < 1e-12 * 0.5 * ad.a0 * c.gamma2.value);
            for (double e : r.hessian_eigenvalues) CHECK(e > 0.0);
        }
    }
    const UniversalConstants c5 = closed(5);
    const CriticalPointReport r = f1_critical(5, c5, AnchorData{1.0, 1.0});
    CHECK(r.location[1] == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(r.location[0] == doctest::Approx(0.25 * c5.gamma1.value / (10.0 * c5.gamma2.value)).epsilon(1e-10));
    CHECK(std::abs(r.location[0] - 0.0161) < 5e-5);

    // s -> 2s halves t*, a -> 2a doubles t* and keeps d*/t*
    const CriticalPointReport half = f1_critical(5, c5, AnchorData{1.0, 2.0});
    CHECK(half.location[1] == doctest::Approx(0.0625).epsilon(1e-10));
    const CriticalPointReport dbl = f1_critical(5, c5, AnchorData{2.0, 1.0});
    CHECK(dbl.location[1] == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(dbl.location[0] / dbl.location[1] == doctest::Approx(r.location[0] / r.location[1]).epsilon(1e-10));

    CHECK(error_of([&] { f1_critical(5, c5, AnchorData{1.0, -1.0}); }) == ErrorCode::no_minimum);
}

TEST_CASE("F2 against the written-out formula") {
    const UniversalConstants c = closed(5);
    const F2Data plain = f2_data(5, c, AnchorData{1.0, 1.0}, LogVariant::plain);
    CHECK(f2_eval(plain, {1, 1, 1, 2}) == doctest::Approx(1.2 * c.gamma1.value + 25.0 / 24.0 * c.gamma2.value).epsilon(1e-12));
    CHECK(f2_eval(plain, {1, 1, 1, 2}) == doctest::Approx(917.37).epsilon(1e-5));

    CounterRng rng(stream_key(2, "reduced_energy", "f2_eval"));
    for (int i = 0; i < 20; ++i) {
        const double a0 = 0.5 + rng.uniform(), s = 0.2 + rng.uniform();
        const double d1 = 0.01 + rng.uniform(), d2 = 0.01 + rng.uniform();
        const double t1 = 0.05 + rng.uniform(), t2 = t1 + 0.01 + rng.uniform();
        for (LogVariant v : {LogVariant::plain, LogVariant::a_homogeneous}) {
            const F2Data f = f2_data(5, c, AnchorData{a0, s}, v);
            CHECK(f2_eval(f, {d1, d2, t1, t2}) ==
                  doctest::Approx(f2_oracle(c, a0, s, d1, d2, t1, t2, v == LogVariant::a_homogeneous)).epsilon(1e-12));
        }
    }
    CHECK(f2_eval(plain, {1, 1, 1, 1.0001}) > 1e5);
    CHECK(error_of([&] { f2_eval(plain, {1, 1, 1, 1}); }) == ErrorCode::singular_configuration);
}

TEST_CASE("F2 gradient against finite differences") {
    const UniversalConstants c = closed(5);
    const F2Data plain = f2_data(5, c, AnchorData{1.0, 1.0}, LogVariant::plain);
    const double w2 = c.omega2, w4 = c.omega4;
    CHECK(f2_grad(plain, {1, 1, 1, 2})[2] == doctest::Approx(w2 + (2.0 * (1.0 + 1.0 / 9.0) - 0.5) * w4).epsilon(1e-12));

    CounterRng rng(stream_key(3, "reduced_energy", "f2_grad"));
    for (int N : {5, 6, 7}) {
        const UniversalConstants cn = closed(N);
        for (int i = 0; i < 50; ++i) {
            const F2Data f = f2_data(N, cn, AnchorData{0.5 + rng.uniform(), 0.2 + rng.uniform()},
                                     i % 2 ? LogVariant::plain : LogVariant::a_homogeneous);
            const double t1 = 0.05 + rng.uniform();
            std::array<double, 4> x{0.01 + rng.uniform(), 0.01 + rng.uniform(), t1, t1 + 0.05 + rng.uniform()};
            const auto g = f2_grad(f, x);
            for (int k = 0; k < 4; ++k) {
                const double h = 1e-6 * x[k];
                auto xp = x, xm = x;
                xp[k] += h;
                xm[k] -= h;
                const double fd = (f2_eval(f, xp) - f2_eval(f, xm)) / (2 * h);
                CHECK(g[k] == doctest::Approx(fd).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("F2 minimizer") {
    const UniversalConstants c = closed(5);
    const F2Data f = f2_data(5, c, AnchorData{1.0, 1.0}, LogVariant::a_homogeneous);
    const CriticalPointReport r = f2_minimize(f);
    REQUIRE(r.converged);
    CHECK(r.gradient_norm < 1e-10);
    CHECK(r.location[2] > 0.0);
    CHECK(r.location[2] < r.location[3]);
    for (double e : r.hessian_eigenvalues) CHECK(e > 0.0);

    const GridResult gr = f2_grid_search(f);
    CHECK(gr.value >= r.value);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(std::log(gr.best[k] / r.location[k])) <= gr.log_step);

    CounterRng rng(stream_key(4, "reduced_energy", "restarts"));
    for (int i = 0; i < 10; ++i) {
        std::array<double, 4> start;
        for (int k = 0; k < 4; ++k) start[k] = r.location[k] * std::exp(0.4 * (rng.uniform() - 0.5));
        if (!(start[2] < start[3])) continue;
        const CriticalPointReport again = f2_minimize(f, start);
        for (int k = 0; k < 4; ++k) CHECK(again.location[k] == doctest::Approx(r.location[k]).epsilon(1e-6));
    }

    // the a-homogeneous variant has an argmin invariant under a -> lambda a
    for (double lambda : {0.5, 2.0}) {
        const F2Data fl = f2_data(5, c, AnchorData{lambda, lambda}, LogVariant::a_homogeneous);
        const CriticalPointReport rl = f2_minimize(fl);
        REQUIRE(rl.converged);
        for (int k = 0; k < 4; ++k) CHECK(rl.location[k] == doctest::Approx(r.location[k]).epsilon(1e-6));
        CHECK(rl.value == doctest::Approx(lambda * r.value).epsilon(1e-9));
    }
    CHECK(error_of([&] { f2_minimize(f2_data(5, c, AnchorData{1.0, -1.0}, LogVariant::plain)); }) == ErrorCode::no_minimum);
}

TEST_CASE("theorem two weight: minimizer reference") {
    const UniversalConstants c = closed(5);
    const BallDomain dom = BallDomain::unit(5);
    const WeightField a = WeightField::affine(2.0, e1(5, 1.0));
    const AnchorData ad = anchor_data(dom, a, e1(5, -1.0));
    CHECK(ad.a0 == doctest::Approx(1.0));
    CHECK(ad.s == doctest::Approx(1.0));
    const CriticalPointReport r = f2_minimize(f2_data(5, c, ad, LogVariant::a_homogeneous));
    REQUIRE(r.converged);
    CHECK(r.location[0] == doctest::Approx(0.00364885).epsilon(1e-5));
    CHECK(r.location[1] == doctest::Approx(0.021267).epsilon(1e-4));
    CHECK(r.location[2] == doctest::Approx(0.0366117).epsilon(1e-5));
    CHECK(r.location[3] == doctest::Approx(0.213388).epsilon(1e-5));
}

TEST_CASE("ansatz shape") {
    const GreenBall g(dimension_params(5), BallDomain::unit(5));
    const BallDomain& dom = g.domain();
    ConfigPair cp;
    cp.zeta0 = e1(5, -1.0);
    cp.d1 = 0.5;
    cp.d2 = 0.5;
    cp.t1 = 1.0;
    cp.t2 = 3.0;
    const double eps = 0.1;
    const Ansatz v(g, bubbles_of(dom, cp, eps, delta_exponent(5)));
    REQUIRE(v.parts().size() == 2);
    CHECK(v.value(e1(5, -1.0 + cp.t1 * eps)) > 0.0);
    CHECK(v.value(e1(5, -1.0 + cp.t2 * eps)) < 0.0);

    const SymmetryGroup G(dom, cp.zeta0);
    CounterRng rng(stream_key(5, "reduced_energy", "ansatz"));
    for (int i = 0; i < 10; ++i) {
        const Point x = 0.9 * std::pow(rng.uniform(), 0.2) * random_direction(rng, 5);
        for (int k = 1; k <= G.count(); ++k) CHECK(v.value(G.reflect(k, x)) == doctest::Approx(v.value(x)).epsilon(1e-10));
    }

    ConfigK one;
    one.anchors = {e1(5, -1.0)};
    one.b = {0};
    one.d = {0.5};
    one.t = {1.0};
    const Ansatz single(g, bubbles_of(dom, one, eps, delta_exponent(5)));
    for (int i = 0; i < 10; ++i) {
        const Point x = 0.99 * std::pow(rng.uniform(), 0.2) * random_direction(rng, 5);
        CHECK(single.value(x) >= 0.0);
    }
}

TEST_CASE("expansion predictions") {
    const UniversalConstants c = closed(5);
    const BallDomain dom = BallDomain::unit(5);
    const WeightField a = WeightField::affine(2.0, e1(5, 1.0));
    ConfigK k;
    k.anchors = {e1(5, -1.0)};
    k.b = {0};
    k.d = {0.02};
    k.t = {0.1};
    CHECK(expansion_prediction_k(dom, k, a, c, 1e-12) == doctest::Approx(0.4 * c.gamma1.value).epsilon(1e-8));

    const F2Data f = f2_data(5, c, anchor_data(dom, a, e1(5, -1.0)), LogVariant::a_homogeneous);
    ConfigPair cp;
    cp.zeta0 = e1(5, -1.0);
    const double eps = 0.01;
    const double pred = expansion_prediction_pair(f, c, cp, eps);
    CHECK(pred == doctest::Approx(omega1(5, c.gamma1.value, c.gamma3.value, eps) + eps * f2_eval(f, {1, 1, 1, 2})));
}

TEST_CASE("configuration validation") {
    const BallDomain dom = BallDomain::unit(5);
    ConfigPair cp;
    cp.zeta0 = e1(5, -1.0);
    cp.t1 = 2.0;
    cp.t2 = 1.0;
    CHECK(error_of([&] { cp.validate(dom); }) == ErrorCode::singular_configuration);
    cp.zeta0 = e1(5, -0.5);
    cp.t1 = 1.0;
    cp.t2 = 2.0;
    CHECK(error_of([&] { cp.validate(dom); }) == ErrorCode::invalid_point);

    ConfigK k;
    k.anchors = {e1(5, -1.0), e1(5, -1.0)};
    k.b = {0, 1};
    k.d = {1, 1};
    k.t = {1, 1};
    CHECK(error_of([&] { k.validate(dom); }) == ErrorCode::invalid_argument);
}
