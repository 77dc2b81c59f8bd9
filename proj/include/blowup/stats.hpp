#pragma once

#include <string>
#include <vector>

namespace blowup {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // rms of residuals
    double slope_err = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct ScalingPoint {
    double abscissa = 0.0;
    double value = 0.0;
    double err = 0.0;
    bool excluded = false;
};

struct ScalingReport {
    std::string name;
    std::vector<ScalingPoint> points;
    double slope = 0.0;
    double fit_residual = 0.0;
    bool fitted = false;
    std::vector<double> excluded() const;
};

// Least squares on (log abscissa, log |value|) over points that are not excluded.
// Points whose standard error exceeds |value| are marked excluded first.
void fit_scaling(ScalingReport& r);

}  // namespace blowup
