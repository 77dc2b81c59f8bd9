#pragma once

#include <cstdint>

namespace blowup {

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};

Rational make_rational(std::int64_t num, std::int64_t den);

struct DimensionParams {
    int N = 5;
    Rational p;
    double p_value = 0.0;
    double alpha_N = 0.0;
    double gamma_N = 0.0;
    double sphere_area = 0.0;  // meas(S^{N-1})
    // (N-4)/2, the decay exponent of the bubble profile
    double a() const { return 0.5 * (N - 4); }
};

// Throws dimension_out_of_range for N < 5.
DimensionParams dimension_params(int N);

double sphere_area(int N);
double ball_volume(int N, double radius);

}  // namespace blowup
