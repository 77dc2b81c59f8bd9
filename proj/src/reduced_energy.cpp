#include "blowup/reduced_energy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "blowup/errors.hpp"

namespace blowup {

AnchorData anchor_data(const BallDomain& dom, const WeightField& a, const Point& zeta0) {
    return {a.value(zeta0), a.gradient(zeta0).dot(dom.inward_normal(zeta0))};
}

// ---- F1 ---------------------------------------------------------------------

double f1_block(int N, const UniversalConstants& c, const AnchorData& ad, double d, double t) {
    if (!(d > 0) || !(t > 0)) throw Error(ErrorCode::invalid_argument, "d and t must be positive");
    const double p = dimension_params(N).p_value;
    const double g1 = c.gamma1.value, g2 = c.gamma2.value, g3 = c.gamma3.value;
    return ad.a0 * (p * g3 - g1) / (p * p) + (p - 2) / (2 * p) * t * ad.s * g1 +
           0.5 * ad.a0 * std::pow(d / (2 * t), N - 4) * g2 - ad.a0 * (N - 4) / (2 * p) * std::log(d) * g1;
}

std::array<double, 2> f1_block_grad(int N, const UniversalConstants& c, const AnchorData& ad, double d, double t) {
    const double p = dimension_params(N).p_value;
    const double g1 = c.gamma1.value, g2 = c.gamma2.value;
    const double m = N - 4;
    const double r = std::pow(d / (2 * t), m);
    return {0.5 * ad.a0 * g2 * m * r / d - ad.a0 * m * g1 / (2 * p * d),
            (p - 2) / (2 * p) * ad.s * g1 - 0.5 * ad.a0 * g2 * m * r / t};
}

double f1_eval(const BallDomain& dom, const ConfigK& cfg, const WeightField& a, const UniversalConstants& c) {
    cfg.validate(dom);
    double sum = 0.0;
    for (std::size_t i = 0; i < cfg.anchors.size(); ++i)
        sum += f1_block(c.N, c, anchor_data(dom, a, cfg.anchors[i]), cfg.d[i], cfg.t[i]);
    return sum;
}

namespace {

struct NewtonProblem {
    std::function<double(const Eigen::VectorXd&)> f;         // in log coordinates
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> g;  // gradient in log coordinates
    std::function<double(const Eigen::VectorXd&)> gnorm;     // gradient norm in model coordinates
};

Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& g, const Eigen::VectorXd& y) {
    const int n = static_cast<int>(y.size());
    Eigen::MatrixXd h(n, n);
    for (int j = 0; j < n; ++j) {
        const double step = 1e-5 * std::max(1.0, std::abs(y[j]));
        Eigen::VectorXd yp = y, ym = y;
        yp[j] += step;
        ym[j] -= step;
        h.col(j) = (g(yp) - g(ym)) / (2 * step);
    }
    return 0.5 * (h + h.transpose());
}

struct NewtonResult {
    Eigen::VectorXd y;
    int iterations = 0;
    bool converged = false;
    double gnorm = 0.0;
    std::string message;
};

NewtonResult newton_minimize(const NewtonProblem& pb, Eigen::VectorXd y, double tol, int max_iter) {
    NewtonResult r;
    double fy = pb.f(y);
    for (int it = 0; it < max_iter; ++it) {
        r.iterations = it;
        r.gnorm = pb.gnorm(y);
        if (!std::isfinite(fy) || !std::isfinite(r.gnorm)) {
            r.message = "non-finite iterate";
            r.y = y;
            return r;
        }
        if (r.gnorm < tol) {
            r.converged = true;
            r.message = "gradient tolerance reached";
            r.y = y;
            return r;
        }
        const Eigen::VectorXd g = pb.g(y);
        const Eigen::MatrixXd h = fd_jacobian(pb.g, y);
        Eigen::VectorXd step;
        Eigen::LLT<Eigen::MatrixXd> llt(h);
        if (llt.info() == Eigen::Success) step = -llt.solve(g);
        if (step.size() == 0 || !step.allFinite() || step.dot(g) >= 0) step = -g / std::max(1.0, g.norm());
        if (step.norm() > 2.0) step *= 2.0 / step.norm();
        double lambda = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls, lambda *= 0.5) {
            const Eigen::VectorXd yn = y + lambda * step;
            const double fn = pb.f(yn);
            if (std::isfinite(fn) && fn <= fy + 1e-4 * lambda * g.dot(step)) {
                y = yn;
                fy = fn;
                moved = true;
                break;
            }
        }
        if (!moved) {
            // At the rounding floor of f; accept a full Newton step if it lowers the gradient.
            const Eigen::VectorXd yn = y + step;
            if (pb.gnorm(yn) < r.gnorm) {
                y = yn;
                fy = pb.f(y);
                continue;
            }
            r.gnorm = pb.gnorm(y);
            r.converged = r.gnorm < tol;
            r.message = "line search stalled";
            r.y = y;
            return r;
        }
    }
    r.iterations = max_iter;
    r.gnorm = pb.gnorm(y);
    r.converged = r.gnorm < tol;
    r.message = r.converged ? "gradient tolerance reached" : "maximum iterations";
    r.y = y;
    return r;
}

std::vector<double> eigenvalues(const Eigen::MatrixXd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + h.rows());
    return out;
}

}  // namespace

CriticalPointReport f1_critical(int N, const UniversalConstants& c, const AnchorData& ad, double grad_tol,
                                int max_iter) {
    if (!(ad.s > 0)) throw Error(ErrorCode::no_minimum, "grad a . nu <= 0: F1 has no interior minimum");
    if (!(ad.a0 > 0)) throw Error(ErrorCode::invalid_argument, "a(zeta0) must be positive");
    NewtonProblem pb;
    pb.f = [&](const Eigen::VectorXd& y) { return f1_block(N, c, ad, std::exp(y[0]), std::exp(y[1])); };
    pb.g = [&](const Eigen::VectorXd& y) {
        const double d = std::exp(y[0]), t = std::exp(y[1]);
        const auto g = f1_block_grad(N, c, ad, d, t);
        return Eigen::Vector2d(d * g[0], t * g[1]).eval();
    };
    pb.gnorm = [&](const Eigen::VectorXd& y) {
        const auto g = f1_block_grad(N, c, ad, std::exp(y[0]), std::exp(y[1]));
        return std::hypot(g[0], g[1]);
    };
    const double scale = 0.5 * ad.a0 * c.gamma2.value;
    const NewtonResult r = newton_minimize(pb, Eigen::Vector2d(0.0, 0.0), grad_tol * scale, max_iter);
    CriticalPointReport rep;
    const double d = std::exp(r.y[0]), t = std::exp(r.y[1]);
    rep.location = {d, t};
    rep.gradient_norm = r.gnorm;
    rep.iterations = r.iterations;
    rep.value = f1_block(N, c, ad, d, t);
    auto grad_model = [&](const Eigen::VectorXd& x) {
        const auto g = f1_block_grad(N, c, ad, x[0], x[1]);
        return Eigen::Vector2d(g[0], g[1]).eval();
    };
    rep.hessian_eigenvalues = eigenvalues(fd_jacobian(grad_model, Eigen::Vector2d(d, t)));
    rep.converged = r.converged && rep.hessian_eigenvalues.front() > 0;
    rep.message = r.message;
    return rep;
}

// ---- F2 ---------------------------------------------------------------------

LogVariant parse_log_variant(const std::string& s) {
    if (s == "plain") return LogVariant::plain;
    if (s == "a_homogeneous" || s == "a-homogeneous") return LogVariant::a_homogeneous;
    throw Error(ErrorCode::invalid_argument, "unknown log variant '" + s + "'");
}

std::string to_string(LogVariant v) { return v == LogVariant::plain ? "plain" : "a_homogeneous"; }

F2Data f2_data(int N, const UniversalConstants& c, const AnchorData& ad, LogVariant v) {
    return {N, ad, c.omega2, c.omega3, c.omega4, v};
}

namespace {

void check_f2_point(const std::array<double, 4>& x) {
    if (!(x[0] > 0) || !(x[1] > 0) || !(x[2] > 0) || !(x[3] > 0))
        throw Error(ErrorCode::invalid_argument, "F2 needs positive d and t");
    if (x[2] == x[3]) throw Error(ErrorCode::singular_configuration, "t1 = t2");
}

}  // namespace

double f2_eval(const F2Data& f, const std::array<double, 4>& x) {
    check_f2_point(x);
    const auto [d1, d2, t1, t2] = x;
    const double m = f.N - 4.0, a0 = f.anchor.a0;
    const double cl = f.variant == LogVariant::a_homogeneous ? a0 : 1.0;
    const double inter = 2 * std::pow(d1 * d2, 0.5 * m) * (std::pow(std::abs(t1 - t2), -m) - std::pow(t1 + t2, -m));
    return f.anchor.s * (t1 + t2) * f.omega2 - cl * (std::log(d1) + std::log(d2)) * f.omega3 +
           a0 * (inter + std::pow(d1 / (2 * t1), m) + std::pow(d2 / (2 * t2), m)) * f.omega4;
}

std::array<double, 4> f2_grad(const F2Data& f, const std::array<double, 4>& x) {
    check_f2_point(x);
    const auto [d1, d2, t1, t2] = x;
    const double m = f.N - 4.0, a0 = f.anchor.a0, w4 = f.omega4;
    const double cl = f.variant == LogVariant::a_homogeneous ? a0 : 1.0;
    const double pd = std::pow(d1 * d2, 0.5 * m);
    const double diff = std::abs(t1 - t2), sgn = t1 > t2 ? 1.0 : -1.0;
    const double D = std::pow(diff, -m) - std::pow(t1 + t2, -m);
    const double r1 = std::pow(d1 / (2 * t1), m), r2 = std::pow(d2 / (2 * t2), m);
    const double dD1 = -m * std::pow(diff, -m - 1) * sgn + m * std::pow(t1 + t2, -m - 1);
    const double dD2 = m * std::pow(diff, -m - 1) * sgn + m * std::pow(t1 + t2, -m - 1);
    return {-cl * f.omega3 / d1 + a0 * w4 * (m * pd / d1 * D + m * r1 / d1),
            -cl * f.omega3 / d2 + a0 * w4 * (m * pd / d2 * D + m * r2 / d2),
            f.anchor.s * f.omega2 + a0 * w4 * (2 * pd * dD1 - m * r1 / t1),
            f.anchor.s * f.omega2 + a0 * w4 * (2 * pd * dD2 - m * r2 / t2)};
}

namespace {

std::array<double, 4> from_log(const Eigen::VectorXd& y) {
    const double t1 = std::exp(y[2]);
    return {std::exp(y[0]), std::exp(y[1]), t1, t1 + std::exp(y[3])};
}

}  // namespace

CriticalPointReport f2_minimize(const F2Data& f, const std::array<double, 4>& start, double grad_tol, int max_iter) {
    if (!(f.anchor.s > 0)) throw Error(ErrorCode::no_minimum, "grad a . nu <= 0: F2 is not coercive, no minimum");
    if (!(start[2] < start[3])) throw Error(ErrorCode::singular_configuration, "start needs t1 < t2");
    NewtonProblem pb;
    pb.f = [&](const Eigen::VectorXd& y) { return f2_eval(f, from_log(y)); };
    pb.g = [&](const Eigen::VectorXd& y) {
        const auto x = from_log(y);
        const auto g = f2_grad(f, x);
        Eigen::VectorXd out(4);
        out << x[0] * g[0], x[1] * g[1], x[2] * (g[2] + g[3]), (x[3] - x[2]) * g[3];
        return out;
    };
    pb.gnorm = [&](const Eigen::VectorXd& y) {
        const auto g = f2_grad(f, from_log(y));
        return std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]);
    };
    Eigen::VectorXd y0(4);
    y0 << std::log(start[0]), std::log(start[1]), std::log(start[2]), std::log(start[3] - start[2]);
    const NewtonResult r = newton_minimize(pb, y0, grad_tol * f.anchor.a0 * f.omega4, max_iter);
    CriticalPointReport rep;
    const auto x = from_log(r.y);
    rep.location = {x[0], x[1], x[2], x[3]};
    rep.gradient_norm = r.gnorm;
    rep.iterations = r.iterations;
    rep.value = f2_eval(f, x);
    auto grad_model = [&](const Eigen::VectorXd& z) {
        const auto g = f2_grad(f, {z[0], z[1], z[2], z[3]});
        return Eigen::Vector4d(g[0], g[1], g[2], g[3]).eval();
    };
    rep.hessian_eigenvalues = eigenvalues(fd_jacobian(grad_model, Eigen::Vector4d(x[0], x[1], x[2], x[3])));
    rep.converged = r.converged && rep.hessian_eigenvalues.front() > 0;
    rep.message = r.message;
    return rep;
}

GridResult f2_grid_search(const F2Data& f, int n, double lo, double hi) {
    std::vector<double> g(n);
    const double step = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[i] = lo * std::exp(step * i);
    GridResult best;
    best.value = std::numeric_limits<double>::infinity();
    best.log_step = step;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = k + 1; l < n; ++l) {
                    const std::array<double, 4> x{g[i], g[j], g[k], g[l]};
                    const double v = f2_eval(f, x);
                    if (v < best.value) {
                        best.value = v;
                        best.best = x;
                    }
                }
    return best;
}

// ---- ansatz ---------------------------------------------------------------------

Ansatz::Ansatz(const GreenBall& g, const std::vector<SignedBubble>& bubbles) : g_(&g) {
    for (const auto& sb : bubbles) {
        parts_.emplace_back(g, sb.bubble);
        signs_.push_back(sb.sign);
    }
}

double Ansatz::value(const Point& x) const {
    double v = 0.0;
    for (std::size_t i = 0; i < parts_.size(); ++i) v += signs_[i] * parts_[i].pu_asymptotic(x);
    return v;
}

double Ansatz::laplacian(const Point& x) const {
    double v = 0.0;
    for (std::size_t i = 0; i < parts_.size(); ++i) v += signs_[i] * parts_[i].lap_asymptotic(x);
    return v;
}

Point Ansatz::laplacian_gradient(const Point& x) const {
    Point v = Point::Zero(x.size());
    for (std::size_t i = 0; i < parts_.size(); ++i) v += signs_[i] * parts_[i].lap_grad_asymptotic(x);
    return v;
}

double Ansatz::bilaplacian(const Point& x) const {
    const DimensionParams& dp = g_->dims();
    double v = 0.0;
    for (std::size_t i = 0; i < parts_.size(); ++i) v += signs_[i] * u_power(dp, parts_[i].bubble(), x, dp.p_value - 1.0);
    return v;
}

// ---- energy and error -------------------------------------------------------------

EnergyEstimate energy_numeric(const GreenBall& g, const WeightField& a, const std::vector<SignedBubble>& bubbles,
                              double eps, std::uint64_t samples, std::uint64_t seed) {
    const DimensionParams& dp = g.dims();
    const BallDomain& dom = g.domain();
    const double p = dp.p_value;
    const Ansatz V(g, bubbles);
    Mixture mix;
    for (const auto& sb : bubbles) mix.add(std::make_shared<PowerProposal>(sb.bubble.xi, sb.bubble.delta, dp.N - 2.0), 1.0);
    EnergyEstimate out;
    const double g1 = gamma1_closed(dp.N);
    std::vector<double> a_xi;
    for (const auto& sb : bubbles) {
        a_xi.push_back(a.value(sb.bubble.xi));
        out.control_integral += a_xi.back() * g1 * (0.5 - 1.0 / p);
    }
    Moments m = run_mc(1, samples, seed, "reduced_energy", "energy", [&](CounterRng& rng, std::span<double> o) {
        const Point x = mix.sample(rng);
        double control = 0.0;
        for (std::size_t i = 0; i < bubbles.size(); ++i) {
            const double lu = u_laplacian(dp, bubbles[i].bubble, x);
            control += a_xi[i] * (0.5 * lu * lu - u_power(dp, bubbles[i].bubble, x, p) / p);
        }
        double f = 0.0;
        if (dom.contains(x)) {
            const double ax = a.value(x), lv = V.laplacian(x), v = std::abs(V.value(x));
            f = 0.5 * ax * lv * lv - ax * std::pow(v, p - eps) / (p - eps);
        }
        o[0] = (f - control) / mix.pdf(x);
    });
    out.J = m.estimate(0);
    out.J.value += out.control_integral;
    return out;
}

double expansion_prediction_k(const BallDomain& dom, const ConfigK& cfg, const WeightField& a,
                              const UniversalConstants& c, double eps) {
    const double p = dimension_params(c.N).p_value;
    double lead = 0.0;
    for (const auto& z : cfg.anchors)
        lead += a.value(z) * c.gamma1.value * ((p - 2) / (2 * p) - eps * std::log(eps) * (c.N - 3) / (2 * p));
    return lead + eps * f1_eval(dom, cfg, a, c);
}

double expansion_prediction_pair(const F2Data& f, const UniversalConstants& c, const ConfigPair& cfg, double eps) {
    return f.anchor.a0 * omega1(c.N, c.gamma1.value, c.gamma3.value, eps) +
           eps * f2_eval(f, {cfg.d1, cfg.d2, cfg.t1, cfg.t2});
}

Estimate error_norm(const GreenBall& g, const WeightField& a, const std::vector<SignedBubble>& bubbles, double eps,
                    std::uint64_t samples, std::uint64_t seed) {
    const DimensionParams& dp = g.dims();
    const BallDomain& dom = g.domain();
    const double q = 2.0 * dp.N / (dp.N + 4);
    const Ansatz V(g, bubbles);
    Mixture mix;
    for (const auto& sb : bubbles) {
        mix.add(std::make_shared<PowerProposal>(sb.bubble.xi, sb.bubble.delta, dp.N), 1.0);
        mix.add(std::make_shared<LogShell>(sb.bubble.xi, 1e-3 * sb.bubble.delta, 2.0 * dom.radius), 1.0);
    }
    mix.add(std::make_shared<BallUniform>(dom.center, dom.radius), 1.0);
    Moments m = run_mc(1, samples, seed, "reduced_energy", "error_norm", [&](CounterRng& rng, std::span<double> o) {
        const Point x = mix.sample(rng);
        if (!dom.contains(x)) return;
        const double ax = a.value(x);
        const double e = a.laplacian(x) * V.laplacian(x) + 2.0 * a.gradient(x).dot(V.laplacian_gradient(x)) +
                         ax * (V.bilaplacian(x) - f_ell(V.value(x), eps, dp.N));
        o[0] = std::pow(std::abs(e), q) / mix.pdf(x);
    });
    const Estimate I = m.estimate(0);
    Estimate out;
    out.samples = I.samples;
    out.value = std::pow(I.value, 1.0 / q);
    out.err = I.value > 0 ? out.value / (q * I.value) * I.err : 0.0;
    return out;
}

}  // namespace blowup
