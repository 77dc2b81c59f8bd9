#pragma once

#include <cstdint>
#include <string>

#include "blowup/dimension.hpp"
#include "blowup/mc.hpp"

namespace blowup {

enum class QuadMethod { closed_form, radial_gauss, monte_carlo };
enum class Gamma3Variant { without, with_extra_alpha_factor };

QuadMethod parse_quad_method(const std::string& s);
std::string to_string(QuadMethod m);
Gamma3Variant parse_gamma3_variant(const std::string& s);
std::string to_string(Gamma3Variant v);

struct QuadratureSpec {
    QuadMethod method = QuadMethod::closed_form;
    std::uint64_t sample_count = 1000000;
    std::uint64_t seed = 1;
    // Relative standard error above which a Monte Carlo result is rejected.
    double max_rel_err = 0.05;
};

struct UniversalConstants {
    int N = 5;
    Estimate gamma1, gamma2, gamma3;
    Gamma3Variant gamma3_variant = Gamma3Variant::without;
    double omega2 = 0, omega3 = 0, omega4 = 0;
};

// int_{R^N} (1+|y|^2)^{-k} dy
double power_integral(int N, double k);

double gamma1_closed(int N);
double gamma2_closed(int N);
double gamma3_closed(int N, Gamma3Variant v);

Estimate gamma1(int N, const QuadratureSpec& q);
Estimate gamma2(int N, const QuadratureSpec& q);
Estimate gamma3(int N, Gamma3Variant v, const QuadratureSpec& q);

struct Omegas {
    double omega2, omega3, omega4;
};
Omegas omegas(int N, double gamma1, double gamma2);
double omega1(int N, double gamma1, double gamma3, double eps);

UniversalConstants universal_constants(int N, Gamma3Variant v, const QuadratureSpec& q);

}  // namespace blowup
