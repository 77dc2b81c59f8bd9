#include "blowup/constants.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

using boost::math::quadrature::gauss_kronrod;

// With r = tan(theta): r^{N-1}(1+r^2)^{-k} dr = sin^{N-1} cos^{2k-N-1} d(theta) on [0, pi/2].
double radial_power_gauss(int N, double k) {
    auto f = [&](double th) { return std::pow(std::sin(th), N - 1) * std::pow(std::cos(th), 2.0 * k - N - 1); };
    return sphere_area(N) * gauss_kronrod<double, 61>::integrate(f, 0.0, M_PI / 2, 15, 1e-14);
}

// int r^{N-1} (1+r^2)^{-k} log(1+r^2) dr, same substitution; log(1+r^2) = -2 log cos.
double radial_log_gauss(int N, double k) {
    auto f = [&](double th) {
        const double c = std::cos(th);
        if (c <= 0.0) return 0.0;
        return std::pow(std::sin(th), N - 1) * std::pow(c, 2.0 * k - N - 1) * (-2.0 * std::log(c));
    };
    return sphere_area(N) * gauss_kronrod<double, 61>::integrate(f, 0.0, M_PI / 2, 15, 1e-14);
}

double alpha_p(int N) {
    const DimensionParams dp = dimension_params(N);
    return std::pow(dp.alpha_N, dp.p_value);
}

void check_accuracy(const Estimate& e, const QuadratureSpec& q, const char* what) {
    if (e.err > q.max_rel_err * std::abs(e.value)) {
        std::ostringstream os;
        os << what << " Monte Carlo standard error " << e.err << " exceeds " << q.max_rel_err << " relative";
        throw Error(ErrorCode::accuracy, os.str());
    }
}

// Heavier-tailed proposal (1+|y|^2)^{-(N+2)/2} so every weight below is bounded.
template <class F>
Estimate radial_mc(int N, const QuadratureSpec& q, const char* check, F integrand_of_r2) {
    PowerProposal prop(Eigen::VectorXd::Zero(N), 1.0, 0.5 * (N + 2));
    const double lognorm = std::log(prop.pdf(Eigen::VectorXd::Zero(N)));
    const double kp = 0.5 * (N + 2);
    Moments m = run_mc(1, q.sample_count, q.seed, "core_constants", check, [&](CounterRng& rng, std::span<double> out) {
        const double r2 = prop.radius_squared_sample(rng);
        const double pdf = std::exp(lognorm - kp * std::log1p(r2));
        out[0] = integrand_of_r2(r2) / pdf;
    });
    Estimate e = m.estimate(0);
    check_accuracy(e, q, check);
    return e;
}

}  // namespace

QuadMethod parse_quad_method(const std::string& s) {
    if (s == "closed" || s == "closed_form" || s == "closed-form") return QuadMethod::closed_form;
    if (s == "gauss" || s == "radial_gauss") return QuadMethod::radial_gauss;
    if (s == "mc" || s == "monte_carlo") return QuadMethod::monte_carlo;
    throw Error(ErrorCode::invalid_argument, "unknown quadrature method '" + s + "'");
}

std::string to_string(QuadMethod m) {
    switch (m) {
        case QuadMethod::closed_form: return "closed_form";
        case QuadMethod::radial_gauss: return "radial_gauss";
        case QuadMethod::monte_carlo: return "monte_carlo";
    }
    return "?";
}

Gamma3Variant parse_gamma3_variant(const std::string& s) {
    if (s == "without") return Gamma3Variant::without;
    if (s == "with-alpha" || s == "with_extra_alpha_factor") return Gamma3Variant::with_extra_alpha_factor;
    throw Error(ErrorCode::invalid_argument, "unknown gamma3 variant '" + s + "'");
}

std::string to_string(Gamma3Variant v) {
    return v == Gamma3Variant::without ? "without" : "with_extra_alpha_factor";
}

double power_integral(int N, double k) {
    return std::pow(M_PI, 0.5 * N) * std::exp(boost::math::lgamma(k - 0.5 * N) - boost::math::lgamma(k));
}

double gamma1_closed(int N) { return alpha_p(N) * power_integral(N, N); }

double gamma2_closed(int N) { return alpha_p(N) * power_integral(N, 0.5 * (N + 4)); }

double gamma3_closed(int N, Gamma3Variant v) {
    const DimensionParams dp = dimension_params(N);
    using boost::math::digamma;
    const double g = gamma1_closed(N) * (std::log(dp.alpha_N) - dp.a() * (digamma(double(N)) - digamma(0.5 * N)));
    return v == Gamma3Variant::without ? g : g * std::pow(dp.alpha_N, dp.p_value);
}

Estimate gamma1(int N, const QuadratureSpec& q) {
    dimension_params(N);
    switch (q.method) {
        case QuadMethod::closed_form: return {gamma1_closed(N), 0.0, 0};
        case QuadMethod::radial_gauss: return {alpha_p(N) * radial_power_gauss(N, N), 0.0, 0};
        case QuadMethod::monte_carlo: {
            const double ap = alpha_p(N);
            return radial_mc(N, q, "gamma1", [&](double r2) { return ap * std::pow(1.0 + r2, -double(N)); });
        }
    }
    return {};
}

Estimate gamma2(int N, const QuadratureSpec& q) {
    dimension_params(N);
    const double k = 0.5 * (N + 4);
    switch (q.method) {
        case QuadMethod::closed_form: return {gamma2_closed(N), 0.0, 0};
        case QuadMethod::radial_gauss: return {alpha_p(N) * radial_power_gauss(N, k), 0.0, 0};
        case QuadMethod::monte_carlo: {
            const double ap = alpha_p(N);
            return radial_mc(N, q, "gamma2", [&](double r2) { return ap * std::pow(1.0 + r2, -k); });
        }
    }
    return {};
}

Estimate gamma3(int N, Gamma3Variant v, const QuadratureSpec& q) {
    const DimensionParams dp = dimension_params(N);
    const double extra = v == Gamma3Variant::without ? 1.0 : std::pow(dp.alpha_N, dp.p_value);
    const double ap = alpha_p(N), la = std::log(dp.alpha_N), a = dp.a();
    Estimate e;
    switch (q.method) {
        case QuadMethod::closed_form: return {gamma3_closed(N, v), 0.0, 0};
        case QuadMethod::radial_gauss:
            e.value = ap * (la * radial_power_gauss(N, N) - a * radial_log_gauss(N, N));
            break;
        case QuadMethod::monte_carlo:
            e = radial_mc(N, q, "gamma3", [&](double r2) {
                return ap * std::pow(1.0 + r2, -double(N)) * (la - a * std::log1p(r2));
            });
            break;
    }
    e.value *= extra;
    e.err *= extra;
    return e;
}

Omegas omegas(int N, double g1, double g2) {
    if (!(g1 > 0) || !(g2 > 0)) throw Error(ErrorCode::invalid_constant, "omegas need gamma1, gamma2 > 0");
    const double p = dimension_params(N).p_value;
    return {g1 * (p - 2) / (2 * p), (N - 4) * g1 / (2 * p), g2 / 2};
}

double omega1(int N, double g1, double g3, double eps) {
    const double p = dimension_params(N).p_value;
    return g1 * (p - 2) / p + eps * (-2 * g1 / (p * p) + 2 * g3 / p - std::log(eps) * (N - 3) * g1 / p);
}

UniversalConstants universal_constants(int N, Gamma3Variant v, const QuadratureSpec& q) {
    UniversalConstants c;
    c.N = N;
    c.gamma1 = gamma1(N, q);
    c.gamma2 = gamma2(N, q);
    c.gamma3 = gamma3(N, v, q);
    c.gamma3_variant = v;
    const Omegas o = omegas(N, c.gamma1.value, c.gamma2.value);
    c.omega2 = o.omega2;
    c.omega3 = o.omega3;
    c.omega4 = o.omega4;
    return c;
}

}  // namespace blowup
