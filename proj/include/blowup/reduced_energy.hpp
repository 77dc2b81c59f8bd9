#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "blowup/constants.hpp"
#include "blowup/configs.hpp"
#include "blowup/green.hpp"
#include "blowup/projection.hpp"
#include "blowup/stats.hpp"

namespace blowup {

struct CriticalPointReport {
    std::vector<double> location;  // F1: (d, t); F2: (d1, d2, t1, t2)
    double gradient_norm = 0.0;
    std::vector<double> hessian_eigenvalues;
    int iterations = 0;
    bool converged = false;
    double value = 0.0;
    std::string message;
};

// Per-anchor data of the weight: a(zeta0) and the inward normal derivative s.
struct AnchorData {
    double a0 = 1.0;
    double s = 1.0;
};

AnchorData anchor_data(const BallDomain& dom, const WeightField& a, const Point& zeta0);

// ---- F1 ---------------------------------------------------------------------

// Single-anchor term, including its share of the constant block.
double f1_block(int N, const UniversalConstants& c, const AnchorData& ad, double d, double t);
std::array<double, 2> f1_block_grad(int N, const UniversalConstants& c, const AnchorData& ad, double d, double t);
double f1_eval(const BallDomain& dom, const ConfigK& cfg, const WeightField& a, const UniversalConstants& c);

// grad_tol is relative to a(zeta0) gamma2 / 2, the size of the interaction coefficient; gamma2 grows
// like alpha_N^p, and an absolute tolerance falls below rounding for N >= 9.
CriticalPointReport f1_critical(int N, const UniversalConstants& c, const AnchorData& ad, double grad_tol = 1e-12,
                                int max_iter = 200);

// ---- F2 ---------------------------------------------------------------------

enum class LogVariant { plain, a_homogeneous };
LogVariant parse_log_variant(const std::string& s);
std::string to_string(LogVariant v);

struct F2Data {
    int N = 5;
    AnchorData anchor;
    double omega2 = 0, omega3 = 0, omega4 = 0;
    LogVariant variant = LogVariant::a_homogeneous;
};

F2Data f2_data(int N, const UniversalConstants& c, const AnchorData& ad, LogVariant v);

// x = (d1, d2, t1, t2)
double f2_eval(const F2Data& f, const std::array<double, 4>& x);
std::array<double, 4> f2_grad(const F2Data& f, const std::array<double, 4>& x);

// grad_tol relative to a(zeta0) omega4.
CriticalPointReport f2_minimize(const F2Data& f, const std::array<double, 4>& start = {0.01, 0.01, 0.05, 0.2},
                                double grad_tol = 1e-12, int max_iter = 200);

struct GridResult {
    std::array<double, 4> best;
    double value = 0.0;
    double log_step = 0.0;
};
GridResult f2_grid_search(const F2Data& f, int n = 20, double lo = 1e-3, double hi = 10.0);

// ---- ansatz, energy, error ------------------------------------------------------

class Ansatz {
public:
    Ansatz(const GreenBall& g, const std::vector<SignedBubble>& bubbles);

    double value(const Point& x) const;
    double laplacian(const Point& x) const;
    Point laplacian_gradient(const Point& x) const;
    // sum_i sign_i U_i^{(N+4)/(N-4)}, which equals Delta^2 V
    double bilaplacian(const Point& x) const;

    const std::vector<ProjectedBubble>& parts() const { return parts_; }
    const std::vector<double>& signs() const { return signs_; }

private:
    const GreenBall* g_;
    std::vector<ProjectedBubble> parts_;
    std::vector<double> signs_;
};

struct EnergyEstimate {
    Estimate J;
    double control_integral = 0.0;  // exact whole-space integral of the control variate
};

// J_eps(V) = 1/2 int a |Delta V|^2 - 1/(p-eps) int a |V|^{p-eps}
EnergyEstimate energy_numeric(const GreenBall& g, const WeightField& a, const std::vector<SignedBubble>& bubbles,
                              double eps, std::uint64_t samples, std::uint64_t seed);

// sum_i a_i gamma1 ((p-2)/(2p) - eps log eps (N-3)/(2p)) + eps F1
double expansion_prediction_k(const BallDomain& dom, const ConfigK& cfg, const WeightField& a,
                              const UniversalConstants& c, double eps);
// a0 omega1(eps) + eps F2
double expansion_prediction_pair(const F2Data& f, const UniversalConstants& c, const ConfigPair& cfg, double eps);

// |Delta(a Delta V) - a f_eps(V)|_{2N/(N+4)}
Estimate error_norm(const GreenBall& g, const WeightField& a, const std::vector<SignedBubble>& bubbles, double eps,
                    std::uint64_t samples, std::uint64_t seed);

}  // namespace blowup
