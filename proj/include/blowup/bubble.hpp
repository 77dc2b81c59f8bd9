#pragma once

#include <vector>

#include "blowup/dimension.hpp"
#include "blowup/geometry.hpp"

namespace blowup {

struct Bubble {
    double delta = 1.0;
    Point xi;
};

double u_eval(const DimensionParams& dp, const Bubble& b, const Point& x);
Point u_gradient(const DimensionParams& dp, const Bubble& b, const Point& x);
double u_laplacian(const DimensionParams& dp, const Bubble& b, const Point& x);
Point u_laplacian_gradient(const DimensionParams& dp, const Bubble& b, const Point& x);

// Central-difference Laplacian of the analytic Laplacian, minus U^{(N+4)/(N-4)}.
double limit_equation_residual(const DimensionParams& dp, const Bubble& b, const Point& x, double h);

// j = 0: derivative in delta; j = 1..N: derivative in xi_j.
double kernel_eval(const DimensionParams& dp, const Bubble& b, int j, const Point& x);

// Central difference of u_eval in delta (j = 0) or xi_j, h = eps^{1/3} max(1,|coord|), one Richardson level.
double kernel_fd(const DimensionParams& dp, const Bubble& b, int j, const Point& x);
// Log-log slope of |limit_equation_residual| against the step.
double residual_order(const DimensionParams& dp, const Bubble& b, const Point& x, const std::vector<double>& steps);

double f_ell(double s, double ell, int N);

// Radial profile helpers for Monte Carlo weights.
double u_power(const DimensionParams& dp, const Bubble& b, const Point& x, double power);

}  // namespace blowup
