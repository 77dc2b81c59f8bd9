#pragma once

#include <functional>

#include "blowup/bubble.hpp"
#include "blowup/dimension.hpp"
#include "blowup/geometry.hpp"
#include "blowup/mc.hpp"
#include "blowup/stats.hpp"

namespace blowup {

// Dirichlet Laplace and Navier bi-Laplace Green functions of a ball.
// Fundamental solutions are |x-y|^{2-N} and |x-y|^{4-N};
// G_lap = |x-y|^{2-N} - H_lap and G = |x-y|^{4-N} - H.
class GreenBall {
public:
    GreenBall(DimensionParams dp, BallDomain dom);

    const DimensionParams& dims() const { return dp_; }
    const BallDomain& domain() const { return dom_; }

    double g_lap(const Point& x, const Point& y) const;
    double h_lap(const Point& x, const Point& y) const;
    Point h_lap_grad_x(const Point& x, const Point& y) const;

    // Regular part of the Navier Green function, evaluated deterministically:
    // a Kelvin image term plus a one-dimensional Almansi-type integral.
    double h_biharm(const Point& x, const Point& y) const;
    double g_biharm(const Point& x, const Point& y) const;

    double poisson_kernel(const Point& y, const Point& sigma) const;

    // Delta^2 |x|^{4-N} = hat_gamma * delta_0, hat_gamma = 2 (N-4)(N-2)|S^{N-1}|.
    double hat_gamma() const { return 2.0 * dp_.gamma_N; }
    // -Delta |x|^{2-N} = (N-2)|S^{N-1}| delta_0.
    double lap_constant() const { return (dp_.N - 2) * dp_.sphere_area; }

private:
    void check_inside(const Point& x, bool allow_boundary) const;
    double almansi_integral(const Point& xs, const Point& ys) const;

    DimensionParams dp_;
    BallDomain dom_;
};

// Monte Carlo harmonic extension of boundary data into the ball.
Estimate poisson_extension(const GreenBall& g, const std::function<double(const Point&)>& data, const Point& y,
                           std::uint64_t samples, std::uint64_t seed, std::uint64_t tag = 0);

// H by the boundary-value split: Poisson extension of |x-.|^{4-N} plus the Newton potential of
// 2(N-4) H_lap(x,.). Independent of the closed form; used as its oracle.
Estimate h_biharm_mc(const GreenBall& g, const Point& x, const Point& y, std::uint64_t samples, std::uint64_t seed,
                     std::uint64_t tag = 0);

// int G_lap(x,z) G_lap(z,y) dz; equals (N-2)|S|/(2(N-4)) G(x,y).
Estimate composition_mc(const GreenBall& g, const Point& x, const Point& y, std::uint64_t samples,
                        std::uint64_t seed, std::uint64_t tag = 0);

// w = (1-r^2)^3 on the unit ball and f = Delta^2 w.
double manufactured_w(int N, double r2);
double manufactured_f(int N, double r2);

// int G(x,y) f(y) dy by Monte Carlo (unit ball).
Estimate manufactured_integral(const GreenBall& g, const Point& x, std::uint64_t samples, std::uint64_t seed,
                               std::uint64_t tag = 0);
// Same at x = 0 by deterministic radial quadrature.
double manufactured_integral_center(const GreenBall& g);

struct ManufacturedReport {
    double hat_gamma_calibrated = 0.0;
    double hat_gamma_err = 0.0;
    double factor = 0.0;          // calibrated hat_gamma / gamma_N
    double factor_snapped = 0.0;  // nearest integer
    std::vector<Point> fresh_points;
    std::vector<double> rel_errors;  // with the calibrated constant
    std::vector<double> rel_errors_snapped;
    double max_rel_error = 0.0;
};

ManufacturedReport manufactured_solution_check(const GreenBall& g, const std::vector<Point>& calibration,
                                               const std::vector<Point>& fresh, std::uint64_t samples,
                                               std::uint64_t seed);

struct LahRow {
    double depth;
    double ratio_h;
    double ratio_lap_h;
};

struct LahReport {
    std::vector<LahRow> rows;
    ScalingReport h_fit, lap_fit;
};

// Probes x = base - d nu along the normal through base; y fixed.
LahReport lah_sweep(const GreenBall& g, const Point& base, const Point& y, const std::vector<double>& depths,
                    double fd_step = 1e-3);

// Central-difference Laplacian in y of h_biharm(x, .).
double h_biharm_laplacian_fd(const GreenBall& g, const Point& x, const Point& y, double h);

}  // namespace blowup
