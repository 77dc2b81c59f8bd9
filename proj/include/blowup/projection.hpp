#pragma once

#include <cstdint>
#include <vector>

#include "blowup/configs.hpp"
#include "blowup/green.hpp"
#include "blowup/stats.hpp"

namespace blowup {

// PU = U - alpha delta^{(N-4)/2} H(., xi) + R; the asymptotic path drops R.
class ProjectedBubble {
public:
    ProjectedBubble(const GreenBall& g, Bubble b);

    const Bubble& bubble() const { return b_; }
    const GreenBall& green() const { return *g_; }
    double prefactor() const { return pref_; }  // alpha delta^{(N-4)/2}

    double u(const Point& x) const;
    double pu_asymptotic(const Point& x) const;
    // Delta PU with the harmonic remainder dropped: Delta U + 2(N-4) pref H_lap(., xi).
    double lap_asymptotic(const Point& x) const;
    Point lap_grad_asymptotic(const Point& x) const;

    // PU(x) = pref E[G(x,y) 1_Omega] with y drawn from the normalized U^{(N+4)/(N-4)};
    // every sample is nonnegative.
    Estimate pu_oracle(const Point& x, std::uint64_t samples, std::uint64_t seed, std::uint64_t tag = 0) const;
    // R = PU - pu_asymptotic, antithetic pairs around xi. Exact on the boundary.
    Estimate remainder(const Point& x, std::uint64_t samples, std::uint64_t seed, std::uint64_t tag = 0) const;
    // Delta PU = Delta U + Poisson extension of -Delta U restricted to the boundary.
    Estimate lap_oracle(const Point& x, std::uint64_t samples, std::uint64_t seed, std::uint64_t tag = 0) const;

private:
    const GreenBall* g_;
    Bubble b_;
    double pref_;
};

struct RemainderRow {
    double delta;
    double sup;
    double err;
    bool excluded;
    Point argmax;
};

struct RemainderScan {
    std::vector<RemainderRow> rows;
    ScalingReport fit;
};

// Probe points for the sup: the base point, points on the normal axis, the center, random interior points.
std::vector<Point> remainder_probes(const BallDomain& dom, const Point& xi, int random_count, std::uint64_t seed);

RemainderScan remainder_scan(const GreenBall& g, double depth, const std::vector<double>& deltas,
                             std::uint64_t samples, std::uint64_t seed, int random_probes = 6);

struct IntegralEstimate {
    Estimate est;
    double eta = 0.0;
    double prediction = 0.0;  // leading prediction of the quantity being compared
    double measured = 0.0;    // the compared quantity (e.g. (value - a0 gamma1)/eps)
    double measured_err = 0.0;
    double ratio() const { return measured / prediction; }
};

IntegralEstimate self_energy(const GreenBall& g, const WeightField& a, const Point& anchor, double d, double t,
                             double eps, std::uint64_t samples, std::uint64_t seed);

IntegralEstimate correction_integral(const GreenBall& g, const WeightField& a, const Point& anchor, double d,
                                     double t, double eps, std::uint64_t samples, std::uint64_t seed);

// int_{B_eta(xi_i)} a U_i^{(N+4)/(N-4)} PU_j. On a shared anchor the prediction is the paper's
// interaction coefficient; for distinct anchors the prediction is 0 and `measured` is value/eps.
IntegralEstimate interaction_integral(const GreenBall& g, const WeightField& a, const Point& anchor_i,
                                      const Point& anchor_j, double d_i, double d_j, double t_i, double t_j,
                                      double eps, std::uint64_t samples, std::uint64_t seed);

// int_Omega a |PU_1 - PU_2|^p log|PU_1 - PU_2|; prediction is the leading expansion.
IntegralEstimate log_integral(const GreenBall& g, const WeightField& a, const ConfigPair& c, double eps,
                              std::uint64_t samples, std::uint64_t seed, double gamma1, double gamma3);

struct LogSlope {
    std::vector<double> eps;
    std::vector<Estimate> values;
    double slope = 0.0;
    double prediction = 0.0;
};
LogSlope log_integral_slope(const GreenBall& g, const WeightField& a, const ConfigPair& c,
                            const std::vector<double>& eps, std::uint64_t samples, std::uint64_t seed,
                            double gamma1, double gamma3);

// |Delta PU|_{2N/(N+4)} over Omega against delta at fixed xi.
ScalingReport lap_pu_norm_scan(const GreenBall& g, const Point& xi, const std::vector<double>& deltas,
                               std::uint64_t samples, std::uint64_t seed);

// int a' . grad Delta PU_i PU_j and int Delta a Delta PU_i PU_j, each divided by eps.
struct CrossTerms {
    Estimate grad_term, lap_term;
};
CrossTerms cross_terms(const GreenBall& g, const WeightField& a, const ConfigPair& c, double eps,
                       std::uint64_t samples, std::uint64_t seed);

}  // namespace blowup
