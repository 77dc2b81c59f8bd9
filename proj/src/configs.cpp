#include "blowup/configs.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

void check_anchor(const BallDomain& dom, const Point& p) {
    if (p.size() != dom.dim()) throw Error(ErrorCode::invalid_argument, "anchor dimension mismatch");
    if (std::abs((p - dom.center).norm() - dom.radius) > 1e-9 * dom.radius)
        throw Error(ErrorCode::invalid_point, "anchor is not on the boundary");
}

}  // namespace

void ConfigK::validate(const BallDomain& dom) const {
    const std::size_t k = anchors.size();
    if (k == 0 || b.size() != k || d.size() != k || t.size() != k)
        throw Error(ErrorCode::invalid_argument, "ConfigK needs matching anchors, b, d, t");
    for (std::size_t i = 0; i < k; ++i) {
        check_anchor(dom, anchors[i]);
        if (b[i] != 0 && b[i] != 1) throw Error(ErrorCode::invalid_argument, "signs b_i must be 0 or 1");
        if (!(d[i] > 0) || !(t[i] > 0)) throw Error(ErrorCode::invalid_argument, "d_i and t_i must be positive");
        for (std::size_t j = 0; j < i; ++j)
            if ((anchors[i] - anchors[j]).norm() < 1e-12) throw Error(ErrorCode::invalid_argument, "anchors must be distinct");
    }
}

void ConfigPair::validate(const BallDomain& dom) const {
    check_anchor(dom, zeta0);
    if (!(d1 > 0) || !(d2 > 0)) throw Error(ErrorCode::invalid_argument, "d1, d2 must be positive");
    if (!(t1 > 0)) throw Error(ErrorCode::invalid_argument, "t1 must be positive");
    if (!(t1 < t2)) throw Error(ErrorCode::singular_configuration, "need 0 < t1 < t2");
}

double delta_exponent(int N) { return (N - 3.0) / (N - 4.0); }

Bubble placed_bubble(const BallDomain& dom, const Point& anchor, double d, double t, double eps, double power) {
    if (!(eps > 0)) throw Error(ErrorCode::invalid_argument, "eps must be positive");
    Bubble b;
    b.delta = d * std::pow(eps, power);
    b.xi = anchor + t * eps * dom.inward_normal(anchor);
    if (!dom.contains(b.xi)) throw Error(ErrorCode::outside_domain, "bubble center outside the domain");
    return b;
}

std::vector<SignedBubble> bubbles_of(const BallDomain& dom, const ConfigK& c, double eps, double power) {
    c.validate(dom);
    std::vector<SignedBubble> out;
    for (std::size_t i = 0; i < c.anchors.size(); ++i)
        out.push_back({placed_bubble(dom, c.anchors[i], c.d[i], c.t[i], eps, power), c.b[i] ? -1.0 : 1.0,
                       c.anchors[i], c.t[i]});
    return out;
}

std::vector<SignedBubble> bubbles_of(const BallDomain& dom, const ConfigPair& c, double eps, double power) {
    c.validate(dom);
    return {{placed_bubble(dom, c.zeta0, c.d1, c.t1, eps, power), 1.0, c.zeta0, c.t1},
            {placed_bubble(dom, c.zeta0, c.d2, c.t2, eps, power), -1.0, c.zeta0, c.t2}};
}

double eta_pair(double t1, double t2, double eps) {
    return std::min({t1 * eps, t2 * eps, eps * std::abs(t1 - t2) / 2});
}

}  // namespace blowup
