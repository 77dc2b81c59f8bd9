#include "blowup/green.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "blowup/errors.hpp"

namespace blowup {

using boost::math::quadrature::gauss_kronrod;

GreenBall::GreenBall(DimensionParams dp, BallDomain dom) : dp_(dp), dom_(std::move(dom)) {
    if (dom_.dim() != dp_.N) throw Error(ErrorCode::invalid_argument, "domain dimension does not match N");
}

void GreenBall::check_inside(const Point& x, bool allow_boundary) const {
    const double r = (x - dom_.center).norm() / dom_.radius;
    if (r > 1.0 + 1e-12 || (!allow_boundary && r >= 1.0))
        throw Error(ErrorCode::outside_domain, "point outside the ball");
}

namespace {

// |x|^2|y|^2 - 2 x.y + 1 for unit-ball coordinates; equals |x - y|^2 when |y| = 1.
double kelvin_q(const Point& xs, const Point& ys) {
    return xs.squaredNorm() * ys.squaredNorm() - 2.0 * xs.dot(ys) + 1.0;
}

}  // namespace

double GreenBall::g_lap(const Point& x, const Point& y) const {
    check_inside(x, true);
    check_inside(y, true);
    const double dist = (x - y).norm();
    if (dist < 1e-8 * dom_.radius) throw Error(ErrorCode::singularity, "G_lap evaluated at coincident points");
    return std::pow(dist, 2.0 - dp_.N) - h_lap(x, y);
}

double GreenBall::h_lap(const Point& x, const Point& y) const {
    check_inside(x, true);
    check_inside(y, true);
    const double R = dom_.radius;
    const Point xs = (x - dom_.center) / R, ys = (y - dom_.center) / R;
    return std::pow(R, 2.0 - dp_.N) * std::pow(kelvin_q(xs, ys), 0.5 * (2 - dp_.N));
}

Point GreenBall::h_lap_grad_x(const Point& x, const Point& y) const {
    const double R = dom_.radius;
    const Point xs = (x - dom_.center) / R, ys = (y - dom_.center) / R;
    const double q = kelvin_q(xs, ys);
    const Point dq = 2.0 * ys.squaredNorm() * xs - 2.0 * ys;
    return std::pow(R, 2.0 - dp_.N) * 0.5 * (2 - dp_.N) * std::pow(q, -0.5 * dp_.N) * dq / R;
}

// int_0^1 s^{N/2-1} q(x, s y)^{(2-N)/2} ds. With q(s) = A (s - s0)^2 + c the integrand peaks sharply
// at s0 when x, y approach the boundary together; there s = s0 + w sinh(tau), w = sqrt(c/A), turns
// the peak into cosh(tau)^{3-N}. Near s = 0 the substitution s = u^2 makes the weight polynomial.
double GreenBall::almansi_integral(const Point& xs, const Point& ys) const {
    const int N = dp_.N;
    const double A = xs.squaredNorm() * ys.squaredNorm(), B = xs.dot(ys);
    const double e = 0.5 * (2 - N);
    auto plain = [&](double s_hi) {
        auto f = [&](double u) {
            const double s = u * u;
            return 2.0 * std::pow(u, N - 1) * std::pow(A * s * s - 2.0 * B * s + 1.0, e);
        };
        return gauss_kronrod<double, 31>::integrate(f, 0.0, std::sqrt(s_hi), 15, 1e-13);
    };
    if (!(A > 0.0) || B <= 0.0) return plain(1.0);
    const double s0 = B / A;
    const double c = std::max(1.0 - B * B / A, 1e-200);
    const double w = std::sqrt(c / A);
    if (w > 0.25 || s0 < 0.1 || s0 > 1.5) return plain(1.0);
    const double sm = 0.5 * std::min(s0, 1.0);
    const double sc = std::sqrt(c), ia = 1.0 / std::sqrt(A);
    auto g = [&](double tau) {
        const double s = s0 + w * std::sinh(tau);
        return std::pow(s, 0.5 * N - 1) * std::pow(sc * std::cosh(tau), 3 - N) * ia;
    };
    const double lo = std::asinh((sm - s0) / w), hi = std::asinh((1.0 - s0) / w);
    return plain(sm) + gauss_kronrod<double, 31>::integrate(g, lo, hi, 15, 1e-13);
}

double GreenBall::h_biharm(const Point& x, const Point& y) const {
    check_inside(x, true);
    check_inside(y, true);
    const int N = dp_.N;
    const double R = dom_.radius;
    const Point xs = (x - dom_.center) / R, ys = (y - dom_.center) / R;
    const double k = std::pow(kelvin_q(xs, ys), 0.5 * (4 - N));
    const double wx = 1.0 - xs.squaredNorm(), wy = 1.0 - ys.squaredNorm();
    double w = 0.0;
    if (wx > 0.0 && wy > 0.0) w = 0.5 * (N - 4) * wx * wy * almansi_integral(xs, ys);
    return std::pow(R, 4.0 - N) * (k + w);
}

double GreenBall::g_biharm(const Point& x, const Point& y) const {
    const double dist = (x - y).norm();
    if (dist < 1e-8 * dom_.radius) throw Error(ErrorCode::singularity, "G evaluated at coincident points");
    return std::pow(dist, 4.0 - dp_.N) - h_biharm(x, y);
}

double GreenBall::poisson_kernel(const Point& y, const Point& sigma) const {
    const double R = dom_.radius;
    return (R * R - (y - dom_.center).squaredNorm()) / (dp_.sphere_area * R * std::pow((y - sigma).norm(), dp_.N));
}

Estimate poisson_extension(const GreenBall& g, const std::function<double(const Point&)>& data, const Point& y,
                           std::uint64_t samples, std::uint64_t seed, std::uint64_t tag) {
    const BallDomain& dom = g.domain();
    if ((y - dom.center).norm() >= dom.radius) throw Error(ErrorCode::outside_domain, "y must be strictly inside");
    const int N = g.dims().N;
    const double surface = g.dims().sphere_area * std::pow(dom.radius, N - 1);
    Moments m = run_mc(1, samples, subseed(seed, tag), "green_ball", "poisson_extension", [&](CounterRng& rng, std::span<double> out) {
        const Point s = dom.center + dom.radius * random_direction(rng, N);
        out[0] = surface * g.poisson_kernel(y, s) * data(s);
    });
    return m.estimate(0);
}

Estimate h_biharm_mc(const GreenBall& g, const Point& x, const Point& y, std::uint64_t samples, std::uint64_t seed,
                     std::uint64_t tag) {
    const BallDomain& dom = g.domain();
    const int N = g.dims().N;
    if ((y - dom.center).norm() >= dom.radius || (x - dom.center).norm() >= dom.radius)
        throw Error(ErrorCode::outside_domain, "points must be strictly inside");
    const double surface = g.dims().sphere_area * std::pow(dom.radius, N - 1);
    const double newton = 2.0 * (N - 4) / g.lap_constant();
    RadialPowerProposal near_y(y, dom.radius + (y - dom.center).norm(), 1.0);
    Moments m = run_mc(1, samples, subseed(seed, tag), "green_ball", "h_biharm_mc", [&](CounterRng& rng, std::span<double> out) {
        const Point s = dom.center + dom.radius * random_direction(rng, N);
        const double boundary = surface * g.poisson_kernel(y, s) * std::pow((x - s).norm(), 4.0 - N);
        const Point z = near_y.sample(rng);
        double volume = 0.0;
        if (dom.contains(z) && (z - y).norm() > 1e-8 * dom.radius)
            volume = newton * g.g_lap(y, z) * g.h_lap(x, z) / near_y.pdf(z);
        out[0] = boundary + volume;
    });
    return m.estimate(0);
}

Estimate composition_mc(const GreenBall& g, const Point& x, const Point& y, std::uint64_t samples,
                        std::uint64_t seed, std::uint64_t tag) {
    const BallDomain& dom = g.domain();
    Mixture mix;
    mix.add(std::make_shared<RadialPowerProposal>(x, dom.radius + (x - dom.center).norm(), 1.0), 0.5);
    mix.add(std::make_shared<RadialPowerProposal>(y, dom.radius + (y - dom.center).norm(), 1.0), 0.5);
    const double tiny = 1e-8 * dom.radius;
    Moments m = run_mc(1, samples, subseed(seed, tag), "green_ball", "composition", [&](CounterRng& rng, std::span<double> out) {
        const Point z = mix.sample(rng);
        if (!dom.contains(z) || (z - x).norm() < tiny || (z - y).norm() < tiny) return;
        out[0] = g.g_lap(x, z) * g.g_lap(z, y) / mix.pdf(z);
    });
    return m.estimate(0);
}

double manufactured_w(int, double r2) { return std::pow(1.0 - r2, 3); }

double manufactured_f(int N, double r2) { return 24.0 * (N + 2) * (N - (N + 4) * r2); }

Estimate manufactured_integral(const GreenBall& g, const Point& x, std::uint64_t samples, std::uint64_t seed,
                               std::uint64_t tag) {
    const BallDomain& dom = g.domain();
    const int N = g.dims().N;
    RadialPowerProposal prop(x, dom.radius + (x - dom.center).norm(), 3.0);
    Moments m = run_mc(1, samples, subseed(seed, tag), "green_ball", "manufactured", [&](CounterRng& rng, std::span<double> out) {
        const Point y = prop.sample(rng);
        if (!dom.contains(y) || (y - x).norm() < 1e-8 * dom.radius) return;
        const double r2 = (y - dom.center).squaredNorm();
        out[0] = g.g_biharm(x, y) * manufactured_f(N, r2) / prop.pdf(y);
    });
    return m.estimate(0);
}

double manufactured_integral_center(const GreenBall& g) {
    const int N = g.dims().N;
    const Point c = g.domain().center;
    auto f = [&](double r) {
        if (r == 0.0) return 0.0;
        Point y = c;
        y[0] += r;
        return (std::pow(r, 3.0) - g.h_biharm(c, y) * std::pow(r, N - 1.0)) * manufactured_f(N, r * r);
    };
    return g.dims().sphere_area * gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-13);
}

ManufacturedReport manufactured_solution_check(const GreenBall& g, const std::vector<Point>& calibration,
                                               const std::vector<Point>& fresh, std::uint64_t samples,
                                               std::uint64_t seed) {
    const int N = g.dims().N;
    if (g.domain().radius != 1.0 || g.domain().center.norm() != 0.0)
        throw Error(ErrorCode::invalid_argument, "manufactured solution is defined on the unit ball");
    ManufacturedReport rep;
    double s1 = 0, s2 = 0, var = 0;
    std::uint64_t tag = 0;
    for (const auto& x : calibration) {
        const double w = manufactured_w(N, x.squaredNorm());
        if (std::abs(w) < 1e-3) throw Error(ErrorCode::invalid_argument, "calibration point too close to the boundary");
        const Estimate e = manufactured_integral(g, x, samples, seed, ++tag);
        const double r = e.value / w;
        s1 += r;
        s2 += r * r;
        var += (e.err / w) * (e.err / w);
    }
    // 1/hat_gamma minimizing sum (c r_i - 1)^2
    const double c = s1 / s2;
    rep.hat_gamma_calibrated = 1.0 / c;
    rep.hat_gamma_err = std::sqrt(var) / calibration.size();
    rep.factor = rep.hat_gamma_calibrated / g.dims().gamma_N;
    rep.factor_snapped = std::round(rep.factor);
    rep.fresh_points = fresh;
    for (const auto& x : fresh) {
        const double w = manufactured_w(N, x.squaredNorm());
        const Estimate e = manufactured_integral(g, x, samples, seed, 1000 + ++tag);
        const double scale = std::abs(w) < 1e-3 ? 1.0 : std::abs(w);
        const double err = std::abs(e.value / rep.hat_gamma_calibrated - w) / scale;
        const double err_snapped = std::abs(e.value / (rep.factor_snapped * g.dims().gamma_N) - w) / scale;
        rep.rel_errors.push_back(err);
        rep.rel_errors_snapped.push_back(err_snapped);
        rep.max_rel_error = std::max(rep.max_rel_error, err);
    }
    return rep;
}

double h_biharm_laplacian_fd(const GreenBall& g, const Point& x, const Point& y, double h) {
    const double c = g.h_biharm(x, y);
    double sum = 0.0;
    Point z = y;
    for (int i = 0; i < g.dims().N; ++i) {
        z[i] = y[i] + h;
        const double fp = g.h_biharm(x, z);
        z[i] = y[i] - h;
        const double fm = g.h_biharm(x, z);
        z[i] = y[i];
        sum += fp + fm - 2.0 * c;
    }
    return sum / (h * h);
}

LahReport lah_sweep(const GreenBall& g, const Point& base, const Point& y, const std::vector<double>& depths,
                    double fd_step) {
    const BallDomain& dom = g.domain();
    const int N = g.dims().N;
    const Point nu = dom.inward_normal(base);
    LahReport rep;
    rep.h_fit.name = "lah_h";
    rep.lap_fit.name = "lah_lap_h";
    for (double d : depths) {
        if (!(d > 0) || d > dom.collar_fraction * dom.radius)
            throw Error(ErrorCode::invalid_argument, "LAH probe outside the collar");
        const Point x = base + d * nu;
        const Point xt = base - d * nu;
        const double dist = (xt - y).norm();
        const double rh = std::abs(g.h_biharm(x, y) * std::pow(dist, N - 4.0) - 1.0);
        const double lap = h_biharm_laplacian_fd(g, x, y, fd_step);
        const double rl = std::abs(lap + 2.0 * (N - 4) * std::pow(dist, 2.0 - N)) * std::pow(dist, N - 2.0);
        rep.rows.push_back({d, rh, rl});
        rep.h_fit.points.push_back({d, rh, 0.0, false});
        rep.lap_fit.points.push_back({d, rl, 0.0, false});
    }
    fit_scaling(rep.h_fit);
    fit_scaling(rep.lap_fit);
    return rep;
}

}  // namespace blowup
