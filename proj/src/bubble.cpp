#include "blowup/bubble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blowup/errors.hpp"
#include "blowup/stats.hpp"

namespace blowup {

double u_eval(const DimensionParams& dp, const Bubble& b, const Point& x) {
    if (!(b.delta > 0)) throw Error(ErrorCode::invalid_argument, "bubble scale must be positive");
    const double a = dp.a();
    const double s = b.delta * b.delta + (x - b.xi).squaredNorm();
    return dp.alpha_N * std::pow(b.delta / s, a);
}

double u_power(const DimensionParams& dp, const Bubble& b, const Point& x, double power) {
    const double a = dp.a();
    const double s = b.delta * b.delta + (x - b.xi).squaredNorm();
    return std::exp(power * (std::log(dp.alpha_N) + a * (std::log(b.delta) - std::log(s))));
}

Point u_gradient(const DimensionParams& dp, const Bubble& b, const Point& x) {
    const double a = dp.a();
    const double s = b.delta * b.delta + (x - b.xi).squaredNorm();
    return -2.0 * a * dp.alpha_N * std::pow(b.delta, a) * std::pow(s, -a - 1) * (x - b.xi);
}

double u_laplacian(const DimensionParams& dp, const Bubble& b, const Point& x) {
    const double a = dp.a(), d2 = b.delta * b.delta;
    const double r2 = (x - b.xi).squaredNorm();
    const double s = d2 + r2;
    return -2.0 * a * dp.alpha_N * std::pow(b.delta, a) * std::pow(s, -a - 2) * (2.0 * r2 + dp.N * d2);
}

Point u_laplacian_gradient(const DimensionParams& dp, const Bubble& b, const Point& x) {
    const double a = dp.a(), d2 = b.delta * b.delta;
    const double s = d2 + (x - b.xi).squaredNorm();
    const double c = 2.0 * (a + 1) * std::pow(s, -a - 2) + (a + 2) * (dp.N - 2) * d2 * std::pow(s, -a - 3);
    return 4.0 * a * dp.alpha_N * std::pow(b.delta, a) * c * (x - b.xi);
}

double limit_equation_residual(const DimensionParams& dp, const Bubble& b, const Point& x, double h) {
    if (!(h > 0)) throw Error(ErrorCode::invalid_argument, "step must be positive");
    const double c = u_laplacian(dp, b, x);
    double sum = 0.0;
    Point y = x;
    for (int i = 0; i < dp.N; ++i) {
        y[i] = x[i] + h;
        const double fp = u_laplacian(dp, b, y);
        y[i] = x[i] - h;
        const double fm = u_laplacian(dp, b, y);
        y[i] = x[i];
        sum += fp + fm - 2.0 * c;
    }
    return sum / (h * h) - u_power(dp, b, x, dp.p_value - 1.0);
}

double kernel_eval(const DimensionParams& dp, const Bubble& b, int j, const Point& x) {
    if (j < 0 || j > dp.N) throw Error(ErrorCode::index_out_of_range, "kernel index must be in 0..N");
    const double a = dp.a(), d2 = b.delta * b.delta;
    const double r2 = (x - b.xi).squaredNorm();
    const double s = d2 + r2;
    if (j == 0) return a * dp.alpha_N * std::pow(b.delta, a - 1) * (r2 - d2) * std::pow(s, -a - 1);
    return 2.0 * a * dp.alpha_N * std::pow(b.delta, a) * (x[j - 1] - b.xi[j - 1]) * std::pow(s, -a - 1);
}

double kernel_fd(const DimensionParams& dp, const Bubble& b, int j, const Point& x) {
    if (j < 0 || j > dp.N) throw Error(ErrorCode::index_out_of_range, "kernel index must be in 0..N");
    const double coord = j == 0 ? b.delta : b.xi[j - 1];
    const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(coord));
    auto shifted = [&](double step) {
        Bubble bp = b, bm = b;
        if (j == 0) {
            bp.delta += step;
            bm.delta -= step;
        } else {
            bp.xi[j - 1] += step;
            bm.xi[j - 1] -= step;
        }
        return (u_eval(dp, bp, x) - u_eval(dp, bm, x)) / (2.0 * step);
    };
    const double d1 = shifted(h), d2 = shifted(0.5 * h);
    return (4.0 * d2 - d1) / 3.0;
}

double residual_order(const DimensionParams& dp, const Bubble& b, const Point& x, const std::vector<double>& steps) {
    if (steps.size() < 2) throw Error(ErrorCode::invalid_argument, "need at least two steps");
    std::vector<double> lx, ly;
    for (double h : steps) {
        lx.push_back(std::log(h));
        ly.push_back(std::log(std::abs(limit_equation_residual(dp, b, x, h))));
    }
    return fit_line(lx, ly).slope;
}

double f_ell(double s, double ell, int N) {
    if (s == 0.0) return 0.0;
    return std::pow(std::abs(s), 8.0 / (N - 4) - ell) * s;
}

}  // namespace blowup
