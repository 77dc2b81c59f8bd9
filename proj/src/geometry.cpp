#include "blowup/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blowup/errors.hpp"
#include "blowup/rng.hpp"
#include "blowup/mc.hpp"

namespace blowup {

BallDomain BallDomain::unit(int N) {
    BallDomain d;
    d.center = Point::Zero(N);
    return d;
}

BoundaryFrame boundary_frame(const BallDomain& dom, const Point& xi) {
    const Point rel = xi - dom.center;
    const double r = rel.norm();
    if (r <= 1e-14 * dom.radius) throw Error(ErrorCode::no_unique_frame, "the center has no unique nearest boundary point");
    if (r > dom.radius * (1.0 + 1e-12)) throw Error(ErrorCode::outside_domain, "point lies outside the closed ball");
    BoundaryFrame f;
    f.base = dom.center + dom.radius * rel / r;
    f.depth = std::max(0.0, dom.radius - r);
    f.inward_normal = -(f.base - dom.center) / dom.radius;
    f.mirror = f.base - f.depth * f.inward_normal;
    return f;
}

Point reflect_across_boundary(const BallDomain& dom, const Point& x) {
    const Point rel = x - dom.center;
    const double r = rel.norm();
    if (r == 0.0) throw Error(ErrorCode::no_unique_frame, "the center has no mirror image");
    return dom.center + (2.0 * dom.radius - r) / r * rel;
}

double reflection_comparability(const BallDomain& dom, const Point& xi, const std::vector<Point>& ys) {
    if (ys.empty()) throw Error(ErrorCode::invalid_argument, "empty sample set");
    const BoundaryFrame f = boundary_frame(dom, xi);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : ys) {
        const double den = (xi - y).norm();
        if (den == 0.0) continue;
        best = std::min(best, (f.mirror - y).norm() / den);
    }
    return best;
}

WeightField WeightField::affine(double a0, Point g) {
    WeightField w;
    w.a0 = a0;
    w.g = std::move(g);
    return w;
}

WeightField WeightField::constant(int N, double a0) { return affine(a0, Point::Zero(N)); }

WeightField WeightField::with_bump(double a0, Point g, Point m, double kappa, double s) {
    if (!(s > 0)) throw Error(ErrorCode::invalid_argument, "bump width must be positive");
    WeightField w = affine(a0, std::move(g));
    w.kind = WeightKind::affine_plus_bump;
    w.bump_center = std::move(m);
    w.bump_amplitude = kappa;
    w.bump_width = s;
    return w;
}

double WeightField::value(const Point& x) const {
    double v = a0 + g.dot(x);
    if (kind == WeightKind::affine_plus_bump)
        v += bump_amplitude * std::exp(-(x - bump_center).squaredNorm() / (bump_width * bump_width));
    return v;
}

Point WeightField::gradient(const Point& x) const {
    Point out = g;
    if (kind == WeightKind::affine_plus_bump) {
        const double s2 = bump_width * bump_width;
        const double e = bump_amplitude * std::exp(-(x - bump_center).squaredNorm() / s2);
        out += e * (-2.0 / s2) * (x - bump_center);
    }
    return out;
}

double WeightField::laplacian(const Point& x) const {
    if (kind != WeightKind::affine_plus_bump) return 0.0;
    const double s2 = bump_width * bump_width;
    const double r2 = (x - bump_center).squaredNorm();
    const double e = bump_amplitude * std::exp(-r2 / s2);
    return e * (4.0 * r2 / (s2 * s2) - 2.0 * x.size() / s2);
}

Eigen::MatrixXd WeightField::hessian(const Point& x) const {
    const int N = static_cast<int>(x.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(N, N);
    if (kind != WeightKind::affine_plus_bump) return h;
    const double s2 = bump_width * bump_width;
    const Point z = x - bump_center;
    const double e = bump_amplitude * std::exp(-z.squaredNorm() / s2);
    h = e * (4.0 / (s2 * s2) * z * z.transpose() - 2.0 / s2 * Eigen::MatrixXd::Identity(N, N));
    return h;
}

std::vector<Point> orthonormal_complement(const Point& v) {
    const int N = static_cast<int>(v.size());
    std::vector<Point> basis{v.normalized()};
    for (int k = 0; k < N && static_cast<int>(basis.size()) < N; ++k) {
        Point e = Point::Unit(N, k);
        for (const auto& b : basis) e -= e.dot(b) * b;
        for (const auto& b : basis) e -= e.dot(b) * b;
        const double n = e.norm();
        if (n > 1e-8) basis.push_back(e / n);
    }
    return {basis.begin() + 1, basis.end()};
}

namespace {

// a restricted to the sphere through the geodesic exponential map at zeta0.
struct SphereChart {
    const BallDomain& dom;
    const WeightField& a;
    Point n;
    std::vector<Point> T;

    double operator()(const Eigen::VectorXd& u) const {
        Point dir = Point::Zero(n.size());
        for (std::size_t i = 0; i < T.size(); ++i) dir += u[i] * T[i];
        const double len = dir.norm();
        const double th = len / dom.radius;
        Point p = std::cos(th) * n;
        if (len > 0) p += std::sin(th) * dir / len;
        return a.value(dom.center + dom.radius * p);
    }
};

}  // namespace

WeightReport weight_checks(const BallDomain& dom, const WeightField& a, const Point& zeta0, double tol) {
    const double rr = (zeta0 - dom.center).norm();
    if (std::abs(rr - dom.radius) > 1e-9 * dom.radius) throw Error(ErrorCode::invalid_point, "zeta0 is not on the boundary");
    const int N = static_cast<int>(zeta0.size());
    const Point n = (zeta0 - dom.center) / rr;
    SphereChart phi{dom, a, n, orthonormal_complement(n)};
    const int m = N - 1;
    const double h = 1e-5 * dom.radius;
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
    const double f0 = phi(z);

    WeightReport rep;
    Eigen::VectorXd grad(m);
    Eigen::MatrixXd hess(m, m);
    for (int i = 0; i < m; ++i) {
        const Eigen::VectorXd ei = Eigen::VectorXd::Unit(m, i) * h;
        const double fp = phi(ei), fm = phi(-ei);
        grad[i] = (fp - fm) / (2 * h);
        hess(i, i) = (fp - 2 * f0 + fm) / (h * h);
        for (int j = 0; j < i; ++j) {
            const Eigen::VectorXd ej = Eigen::VectorXd::Unit(m, j) * h;
            const double v = (phi(ei + ej) - phi(ei - ej) - phi(ej - ei) + phi(-ei - ej)) / (4 * h * h);
            hess(i, j) = hess(j, i) = v;
        }
    }
    rep.tangential_gradient_norm = grad.norm();
    rep.critical = rep.tangential_gradient_norm < tol;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
    double min_abs = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
        rep.tangential_hessian_eigenvalues.push_back(es.eigenvalues()[i]);
        min_abs = std::min(min_abs, std::abs(es.eigenvalues()[i]));
    }
    rep.nondegenerate = min_abs > 1e-4;
    rep.normal_derivative = a.gradient(zeta0).dot(dom.inward_normal(zeta0));

    rep.certificate = a.a0 + a.g.dot(dom.center) - a.g.norm() * dom.radius;
    if (a.kind == WeightKind::affine_plus_bump) rep.certificate -= std::max(0.0, -a.bump_amplitude);

    // Multistart projected gradient descent over the closed ball.
    CounterRng rng(stream_key(0x5eed, "geometry_domain", "weight_min"));
    double best = std::numeric_limits<double>::infinity();
    auto project = [&](Point x) {
        const Point r = x - dom.center;
        const double nr = r.norm();
        return nr > dom.radius ? Point(dom.center + r * (dom.radius / nr)) : x;
    };
    std::vector<Point> starts{dom.center};
    if (a.g.norm() > 0) starts.push_back(dom.center - dom.radius * a.g.normalized());
    for (int s = 0; s < 32; ++s) starts.push_back(project(dom.center + dom.radius * std::pow(rng.uniform(), 1.0 / N) * random_direction(rng, N)));
    for (Point x : starts) {
        double fx = a.value(x);
        double step = 0.1 * dom.radius;
        for (int it = 0; it < 300 && step > 1e-12 * dom.radius; ++it) {
            const Point gx = a.gradient(x);
            const double gn = gx.norm();
            if (gn == 0.0) break;
            const Point y = project(x - step * gx / gn);
            const double fy = a.value(y);
            if (fy < fx) {
                x = y;
                fx = fy;
                step *= 1.2;
            } else {
                step *= 0.5;
            }
        }
        best = std::min(best, fx);
    }
    rep.min_value = best;
    rep.positive = best > 0.0 && (rep.certificate > 0.0 || best > tol);
    return rep;
}

SymmetryGroup::SymmetryGroup(const BallDomain& dom, const Point& zeta0) : zeta0_(zeta0) {
    const double rr = (zeta0 - dom.center).norm();
    if (std::abs(rr - dom.radius) > 1e-9 * dom.radius) throw Error(ErrorCode::invalid_point, "anchor is not on the boundary");
    nu_ = dom.inward_normal(zeta0);
    tangent_ = orthonormal_complement(nu_);
}

Point SymmetryGroup::reflect(int i, const Point& x) const {
    if (i < 1 || i > count()) throw Error(ErrorCode::index_out_of_range, "reflection index must be in 1..N-1");
    const Point y = x - zeta0_;
    Point out = zeta0_ + y.dot(nu_) * nu_;
    for (int j = 0; j < count(); ++j) {
        const double c = y.dot(tangent_[j]);
        out += (j == i - 1 ? -c : c) * tangent_[j];
    }
    return out;
}

}  // namespace blowup
