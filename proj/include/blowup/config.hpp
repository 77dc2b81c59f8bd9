#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blowup/constants.hpp"
#include "blowup/geometry.hpp"
#include "blowup/reduced_energy.hpp"

namespace blowup {

struct SigmaBlock {
    bool solve = true;
    // pair: d1, d2, t1, t2; single anchors: d and t per anchor
    std::vector<double> d, t;
};

struct RunConfig {
    int dim = 5;
    double radius = 1.0;
    std::vector<double> center;  // empty means the origin

    std::string weight_kind = "affine";
    double a0 = 2.0;
    std::vector<double> g;  // empty means e_1
    std::vector<double> bump_center;
    double bump_amplitude = 0.0;
    double bump_width = 1.0;

    std::vector<double> zeta0;                 // empty means center - R e_1
    std::vector<std::vector<double>> anchors;  // Sigma_1 anchors; empty means {zeta0}
    std::vector<int> signs;                    // b_i per anchor

    std::string family = "pair";  // pair | single
    SigmaBlock sigma;

    std::vector<double> epsilon{0.04, 0.02, 0.01, 0.005};

    // projection-scan: bubble depth as a fraction of R, remainder deltas, sandwich sample points
    double depth = 0.3;
    std::vector<double> deltas{0.02, 0.01, 0.005};
    int sandwich_points = 100;

    QuadMethod method = QuadMethod::closed_form;
    std::uint64_t samples = 100000;
    std::optional<std::uint64_t> seed;
    Gamma3Variant gamma3 = Gamma3Variant::without;
    LogVariant log_variant = LogVariant::a_homogeneous;

    std::string out_dir = "out";
    std::vector<std::string> formats{"json", "csv"};

    BallDomain domain() const;
    WeightField weight() const;
    Point anchor() const;
    std::vector<Point> anchor_list() const;
    void validate() const;
};

// INI text: [domain] [weight] [anchor] [sigma] [epsilon] [projection] [quadrature] [output].
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

std::vector<double> parse_list(const std::string& key, const std::string& text);

}  // namespace blowup
