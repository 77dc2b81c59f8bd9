#pragma once

#include <vector>

#include "blowup/bubble.hpp"
#include "blowup/geometry.hpp"

namespace blowup {

// Elements of Sigma_1: k distinct boundary anchors with signs, scales and depths.
struct ConfigK {
    std::vector<Point> anchors;
    std::vector<int> b;  // sign of bubble i is (-1)^{b_i}
    std::vector<double> d, t;
    void validate(const BallDomain& dom) const;
};

// Elements of Sigma_2: two bubbles on the normal through one anchor, 0 < t1 < t2.
struct ConfigPair {
    Point zeta0;
    double d1 = 1, d2 = 1, t1 = 1, t2 = 2;
    void validate(const BallDomain& dom) const;
};

struct SignedBubble {
    Bubble bubble;
    double sign = 1.0;
    Point anchor;
    double t = 0.0;
};

// (N-3)/(N-4)
double delta_exponent(int N);

// delta = d eps^{power}, xi = anchor + t eps nu(anchor).
Bubble placed_bubble(const BallDomain& dom, const Point& anchor, double d, double t, double eps, double power);

std::vector<SignedBubble> bubbles_of(const BallDomain& dom, const ConfigK& c, double eps, double power);
// PU_1 - PU_2
std::vector<SignedBubble> bubbles_of(const BallDomain& dom, const ConfigPair& c, double eps, double power);

// min{t1 eps, t2 eps, eps |t1 - t2| / 2}
double eta_pair(double t1, double t2, double eps);

}  // namespace blowup
