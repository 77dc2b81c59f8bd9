#include "blowup/dimension.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "blowup/errors.hpp"

namespace blowup {

Rational make_rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error(ErrorCode::invalid_argument, "zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

double sphere_area(int N) { return 2.0 * std::pow(M_PI, 0.5 * N) / boost::math::tgamma(0.5 * N); }

double ball_volume(int N, double radius) { return sphere_area(N) * std::pow(radius, N) / N; }

DimensionParams dimension_params(int N) {
    if (N < 5)
        throw Error(ErrorCode::dimension_out_of_range,
                    "N = " + std::to_string(N) + " violates N >= 5 (no Sobolev-critical exponent 2N/(N-4))");
    DimensionParams dp;
    dp.N = N;
    dp.p = make_rational(2 * N, N - 4);
    dp.p_value = dp.p.value();
    const double prod = static_cast<double>(N) * (N - 4) * (N - 2) * (N + 2);
    dp.alpha_N = std::pow(prod, (N - 4) / 8.0);
    dp.sphere_area = sphere_area(N);
    dp.gamma_N = (N - 4.0) * (N - 2.0) * dp.sphere_area;
    return dp;
}

}  // namespace blowup
