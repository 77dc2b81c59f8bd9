#include "blowup/stats.hpp"

#include <cmath>

#include "blowup/errors.hpp"

namespace blowup {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw Error(ErrorCode::invalid_argument, "line fit needs >= 2 matching points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - f.intercept - f.slope * x[i];
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    f.slope_err = n > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
    return f;
}

std::vector<double> ScalingReport::excluded() const {
    std::vector<double> out;
    for (const auto& p : points)
        if (p.excluded) out.push_back(p.abscissa);
    return out;
}

void fit_scaling(ScalingReport& r) {
    std::vector<double> lx, ly;
    for (auto& p : r.points) {
        if (!(p.value != 0.0) || p.err > std::abs(p.value) || !std::isfinite(p.value)) p.excluded = true;
        if (p.excluded) continue;
        lx.push_back(std::log(p.abscissa));
        ly.push_back(std::log(std::abs(p.value)));
    }
    r.fitted = lx.size() >= 3;
    if (!r.fitted) return;
    const LineFit f = fit_line(lx, ly);
    r.slope = f.slope;
    r.fit_residual = f.residual;
}

}  // namespace blowup
