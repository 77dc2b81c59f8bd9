#include "blowup/projection.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/constants.hpp"
#include "blowup/errors.hpp"

namespace blowup {

ProjectedBubble::ProjectedBubble(const GreenBall& g, Bubble b) : g_(&g), b_(std::move(b)) {
    if (!(b_.delta > 0)) throw Error(ErrorCode::invalid_argument, "delta must be positive");
    pref_ = g.dims().alpha_N * std::pow(b_.delta, g.dims().a());
}

double ProjectedBubble::u(const Point& x) const { return u_eval(g_->dims(), b_, x); }

double ProjectedBubble::pu_asymptotic(const Point& x) const { return u(x) - pref_ * g_->h_biharm(x, b_.xi); }

double ProjectedBubble::lap_asymptotic(const Point& x) const {
    const int N = g_->dims().N;
    return u_laplacian(g_->dims(), b_, x) + 2.0 * (N - 4) * pref_ * g_->h_lap(x, b_.xi);
}

Point ProjectedBubble::lap_grad_asymptotic(const Point& x) const {
    const int N = g_->dims().N;
    return u_laplacian_gradient(g_->dims(), b_, x) + 2.0 * (N - 4) * pref_ * g_->h_lap_grad_x(x, b_.xi);
}

Estimate ProjectedBubble::pu_oracle(const Point& x, std::uint64_t samples, std::uint64_t seed,
                                    std::uint64_t tag) const {
    const int N = g_->dims().N;
    const BallDomain& dom = g_->domain();
    PowerProposal prop(b_.xi, b_.delta, 0.5 * (N + 4));
    Moments m = run_mc(1, samples, subseed(seed, tag), "projection_integrals", "pu_oracle",
                       [&](CounterRng& rng, std::span<double> out) {
                           const Point y = prop.sample(rng);
                           if (!dom.contains(y) || (y - x).norm() < 1e-8 * dom.radius) return;
                           out[0] = pref_ * g_->g_biharm(x, y);
                       });
    return m.estimate(0);
}

Estimate ProjectedBubble::remainder(const Point& x, std::uint64_t samples, std::uint64_t seed,
                                    std::uint64_t tag) const {
    const int N = g_->dims().N;
    const BallDomain& dom = g_->domain();
    if ((x - dom.center).norm() >= dom.radius * (1.0 - 1e-12)) {
        Estimate e;
        e.value = -u(x) + pref_ * std::pow((x - b_.xi).norm(), 4.0 - N);
        return e;
    }
    const double h0 = g_->h_biharm(x, b_.xi);
    auto term = [&](const Point& y) {
        if (dom.contains(y)) return g_->h_biharm(x, y) - h0;
        return std::pow((x - y).norm(), 4.0 - N) - h0;
    };
    PowerProposal prop(b_.xi, b_.delta, 0.5 * (N + 4));
    Moments m = run_mc(1, samples, subseed(seed, tag), "projection_integrals", "remainder",
                       [&](CounterRng& rng, std::span<double> out) {
                           const Point y = prop.sample(rng);
                           const Point ya = 2.0 * b_.xi - y;
                           out[0] = -pref_ * 0.5 * (term(y) + term(ya));
                       });
    return m.estimate(0);
}

Estimate ProjectedBubble::lap_oracle(const Point& x, std::uint64_t samples, std::uint64_t seed,
                                     std::uint64_t tag) const {
    const DimensionParams& dp = g_->dims();
    Estimate ext = poisson_extension(
        *g_, [&](const Point& s) { return -u_laplacian(dp, b_, s); }, x, samples, seed, tag);
    ext.value += u_laplacian(dp, b_, x);
    return ext;
}

std::vector<Point> remainder_probes(const BallDomain& dom, const Point& xi, int random_count, std::uint64_t seed) {
    const int N = dom.dim();
    const BoundaryFrame f = boundary_frame(dom, xi);
    std::vector<Point> probes{f.base, xi};
    for (double s : {0.05, 0.25, 0.5, 1.5, 2.0}) {
        const Point p = f.base + s * f.depth * f.inward_normal;
        if (dom.contains(p)) probes.push_back(p);
    }
    if ((xi - dom.center).norm() > 1e-12) probes.push_back(dom.center);
    CounterRng rng(stream_key(seed, "projection_integrals", "probes"));
    for (int i = 0; i < random_count; ++i)
        probes.push_back(dom.center + dom.radius * std::pow(rng.uniform(), 1.0 / N) * 0.95 * random_direction(rng, N));
    return probes;
}

RemainderScan remainder_scan(const GreenBall& g, double depth, const std::vector<double>& deltas,
                             std::uint64_t samples, std::uint64_t seed, int random_probes) {
    const BallDomain& dom = g.domain();
    if (!(depth > 0 && depth < dom.radius)) throw Error(ErrorCode::invalid_argument, "depth must be in (0, radius)");
    Point xi = dom.center;
    xi[0] -= dom.radius - depth;
    const std::vector<Point> probes = remainder_probes(dom, xi, random_probes, seed);
    RemainderScan scan;
    scan.fit.name = "remainder_sup";
    std::uint64_t tag = 0;
    for (double delta : deltas) {
        if (!(delta < depth)) throw Error(ErrorCode::invalid_argument, "remainder scan needs delta << depth");
        ProjectedBubble pb(g, Bubble{delta, xi});
        RemainderRow row{delta, 0.0, 0.0, false, probes.front()};
        for (const auto& x : probes) {
            const Estimate e = pb.remainder(x, samples, seed, ++tag);
            if (std::abs(e.value) > row.sup) {
                row.sup = std::abs(e.value);
                row.err = e.err;
                row.argmax = x;
            }
        }
        row.excluded = row.err > row.sup;
        scan.rows.push_back(row);
        scan.fit.points.push_back({delta, row.sup, row.err, row.excluded});
    }
    fit_scaling(scan.fit);
    return scan;
}

namespace {

double a_at_anchor(const WeightField& a, const Point& anchor) { return a.value(anchor); }

}  // namespace

IntegralEstimate self_energy(const GreenBall& g, const WeightField& a, const Point& anchor, double d, double t,
                             double eps, std::uint64_t samples, std::uint64_t seed) {
    const DimensionParams& dp = g.dims();
    const BallDomain& dom = g.domain();
    const Bubble b = placed_bubble(dom, anchor, d, t, eps, delta_exponent(dp.N));
    IntegralEstimate out;
    out.eta = t * eps;
    if (!(out.eta > 0)) throw Error(ErrorCode::invalid_argument, "eta must be positive");
    PowerProposal prop(b.xi, b.delta, dp.N);
    Moments m = run_mc(1, samples, seed, "projection_integrals", "self_energy", [&](CounterRng& rng, std::span<double> o) {
        const Point y = prop.sample(rng);
        if ((y - b.xi).norm() >= out.eta) return;
        o[0] = a.value(y) * u_power(dp, b, y, dp.p_value) / prop.pdf(y);
    });
    out.est = m.estimate(0);
    const double g1 = gamma1_closed(dp.N);
    const double s = a.gradient(anchor).dot(dom.inward_normal(anchor));
    out.prediction = t * s * g1;
    out.measured = (out.est.value - a_at_anchor(a, anchor) * g1) / eps;
    out.measured_err = out.est.err / eps;
    return out;
}

IntegralEstimate correction_integral(const GreenBall& g, const WeightField& a, const Point& anchor, double d,
                                     double t, double eps, std::uint64_t samples, std::uint64_t seed) {
    const DimensionParams& dp = g.dims();
    const BallDomain& dom = g.domain();
    const Bubble b = placed_bubble(dom, anchor, d, t, eps, delta_exponent(dp.N));
    const ProjectedBubble pb(g, b);
    IntegralEstimate out;
    out.eta = t * eps;
    PowerProposal prop(b.xi, b.delta, 0.5 * (dp.N + 4));
    Moments m = run_mc(1, samples, seed, "projection_integrals", "correction", [&](CounterRng& rng, std::span<double> o) {
        const Point y = prop.sample(rng);
        if ((y - b.xi).norm() >= out.eta) return;
        const double diff = -pb.prefactor() * g.h_biharm(y, b.xi);
        o[0] = a.value(y) * u_power(dp, b, y, dp.p_value - 1.0) * diff / prop.pdf(y);
    });
    out.est = m.estimate(0);
    out.prediction = -std::pow(d / (2 * t), dp.N - 4) * a_at_anchor(a, anchor) * gamma2_closed(dp.N);
    out.measured = out.est.value / eps;
    out.measured_err = out.est.err / eps;
    return out;
}

IntegralEstimate interaction_integral(const GreenBall& g, const WeightField& a, const Point& anchor_i,
                                      const Point& anchor_j, double d_i, double d_j, double t_i, double t_j,
                                      double eps, std::uint64_t samples, std::uint64_t seed) {
    const DimensionParams& dp = g.dims();
    const BallDomain& dom = g.domain();
    const bool same = (anchor_i - anchor_j).norm() < 1e-12;
    if (same && t_i == t_j) throw Error(ErrorCode::singular_configuration, "t_i = t_j on a shared anchor");
    const double power = delta_exponent(dp.N);
    const Bubble bi = placed_bubble(dom, anchor_i, d_i, t_i, eps, power);
    const Bubble bj = placed_bubble(dom, anchor_j, d_j, t_j, eps, power);
    const ProjectedBubble pj(g, bj);
    IntegralEstimate out;
    out.eta = same ? eta_pair(t_i, t_j, eps) : std::min({t_i * eps, t_j * eps, 0.5 * (bi.xi - bj.xi).norm()});
    PowerProposal prop(bi.xi, bi.delta, 0.5 * (dp.N + 4));
    Moments m = run_mc(1, samples, seed, "projection_integrals", "interaction", [&](CounterRng& rng, std::span<double> o) {
        const Point y = prop.sample(rng);
        if ((y - bi.xi).norm() >= out.eta) return;
        o[0] = a.value(y) * u_power(dp, bi, y, dp.p_value - 1.0) * pj.pu_asymptotic(y) / prop.pdf(y);
    });
    out.est = m.estimate(0);
    if (same) {
        const double m4 = dp.N - 4.0;
        out.prediction = a_at_anchor(a, anchor_i) * std::pow(d_i * d_j, 0.5 * m4) *
                         (std::pow(std::abs(t_i - t_j), -m4) - std::pow(t_i + t_j, -m4)) * gamma2_closed(dp.N);
    }
    out.measured = out.est.value / eps;
    out.measured_err = out.est.err / eps;
    return out;
}

IntegralEstimate log_integral(const GreenBall& g, const WeightField& a, const ConfigPair& c, double eps,
                              std::uint64_t samples, std::uint64_t seed, double gamma1, double gamma3) {
    const DimensionParams& dp = g.dims();
    const BallDomain& dom = g.domain();
    const auto bs = bubbles_of(dom, c, eps, delta_exponent(dp.N));
    const ProjectedBubble p1(g, bs[0].bubble), p2(g, bs[1].bubble);
    Mixture mix;
    mix.add(std::make_shared<PowerProposal>(bs[0].bubble.xi, bs[0].bubble.delta, dp.N), 0.5);
    mix.add(std::make_shared<PowerProposal>(bs[1].bubble.xi, bs[1].bubble.delta, dp.N), 0.5);
    IntegralEstimate out;
    out.eta = eta_pair(c.t1, c.t2, eps);
    Moments m = run_mc(1, samples, seed, "projection_integrals", "log_integral", [&](CounterRng& rng, std::span<double> o) {
        const Point y = mix.sample(rng);
        if (!dom.contains(y)) return;
        const double v = std::abs(p1.pu_asymptotic(y) - p2.pu_asymptotic(y));
        if (v == 0.0) return;
        o[0] = a.value(y) * std::pow(v, dp.p_value) * std::log(v) / mix.pdf(y);
    });
    out.est = m.estimate(0);
    const double a0 = a.value(c.zeta0);
    out.prediction = 2 * a0 * gamma3 - dp.a() * a0 * (std::log(c.d1) + std::log(c.d2)) * gamma1 -
                     (dp.N - 3) * a0 * std::log(eps) * gamma1;
    out.measured = out.est.value;
    out.measured_err = out.est.err;
    return out;
}

LogSlope log_integral_slope(const GreenBall& g, const WeightField& a, const ConfigPair& c,
                            const std::vector<double>& eps, std::uint64_t samples, std::uint64_t seed,
                            double gamma1, double gamma3) {
    LogSlope out;
    std::vector<double> x, y;
    std::uint64_t tag = 0;
    for (double e : eps) {
        const IntegralEstimate ie = log_integral(g, a, c, e, samples, subseed(seed, ++tag), gamma1, gamma3);
        out.eps.push_back(e);
        out.values.push_back(ie.est);
        x.push_back(std::log(e));
        y.push_back(ie.est.value);
    }
    out.slope = fit_line(x, y).slope;
    out.prediction = -(g.dims().N - 3) * a.value(c.zeta0) * gamma1;
    return out;
}

ScalingReport lap_pu_norm_scan(const GreenBall& g, const Point& xi, const std::vector<double>& deltas,
                               std::uint64_t samples, std::uint64_t seed) {
    const DimensionParams& dp = g.dims();
    const BallDomain& dom = g.domain();
    const double q = 2.0 * dp.N / (dp.N + 4);
    ScalingReport rep;
    rep.name = "lap_pu_norm";
    std::uint64_t tag = 0;
    for (double delta : deltas) {
        const ProjectedBubble pb(g, Bubble{delta, xi});
        Mixture mix;
        mix.add(std::make_shared<PowerProposal>(xi, delta, 0.5 * dp.N + 0.5), 0.3);
        mix.add(std::make_shared<LogShell>(xi, 1e-2 * delta, 2.0 * dom.radius), 0.3);
        mix.add(std::make_shared<BallUniform>(dom.center, dom.radius), 0.4);
        Moments m = run_mc(1, samples, subseed(seed, ++tag), "projection_integrals", "lap_pu_norm",
                           [&](CounterRng& rng, std::span<double> o) {
                               const Point x = mix.sample(rng);
                               if (!dom.contains(x)) return;
                               o[0] = std::pow(std::abs(pb.lap_asymptotic(x)), q) / mix.pdf(x);
                           });
        const Estimate I = m.estimate(0);
        const double norm = std::pow(I.value, 1.0 / q);
        const double err = norm / (q * I.value) * I.err;
        rep.points.push_back({delta, norm, err, false});
    }
    fit_scaling(rep);
    return rep;
}

CrossTerms cross_terms(const GreenBall& g, const WeightField& a, const ConfigPair& c, double eps,
                       std::uint64_t samples, std::uint64_t seed) {
    const DimensionParams& dp = g.dims();
    const BallDomain& dom = g.domain();
    const auto bs = bubbles_of(dom, c, eps, delta_exponent(dp.N));
    const ProjectedBubble p1(g, bs[0].bubble), p2(g, bs[1].bubble);
    Mixture mix;
    for (const auto& sb : bs) {
        mix.add(std::make_shared<PowerProposal>(sb.bubble.xi, sb.bubble.delta, 0.5 * dp.N + 0.5), 0.2);
        mix.add(std::make_shared<LogShell>(sb.bubble.xi, 1e-2 * sb.bubble.delta, 2.0 * dom.radius), 0.2);
    }
    mix.add(std::make_shared<BallUniform>(dom.center, dom.radius), 0.2);
    Moments m = run_mc(2, samples, seed, "projection_integrals", "cross_terms", [&](CounterRng& rng, std::span<double> o) {
        const Point x = mix.sample(rng);
        if (!dom.contains(x)) return;
        const double w = 1.0 / mix.pdf(x);
        const Point ga = a.gradient(x);
        const double la = a.laplacian(x);
        const double u1 = p1.pu_asymptotic(x), u2 = p2.pu_asymptotic(x);
        o[0] = (ga.dot(p1.lap_grad_asymptotic(x)) * u2 + ga.dot(p2.lap_grad_asymptotic(x)) * u1) * w / eps;
        o[1] = la * (p1.lap_asymptotic(x) * u2 + p2.lap_asymptotic(x) * u1) * w / eps;
    });
    return {m.estimate(0), m.estimate(1)};
}

}  // namespace blowup
