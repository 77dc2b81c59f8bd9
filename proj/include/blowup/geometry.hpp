#pragma once

#include <vector>

#include <Eigen/Dense>

namespace blowup {

using Point = Eigen::VectorXd;

struct BallDomain {
    Point center;
    double radius = 1.0;
    double collar_fraction = 0.5;

    static BallDomain unit(int N);
    int dim() const { return static_cast<int>(center.size()); }
    bool contains(const Point& x) const { return (x - center).squaredNorm() < radius * radius; }
    double depth(const Point& x) const { return radius - (x - center).norm(); }
    // Inward unit normal at a boundary point.
    Point inward_normal(const Point& boundary_point) const { return (center - boundary_point) / radius; }
};

struct BoundaryFrame {
    Point base;
    double depth = 0.0;
    Point inward_normal;
    Point mirror;
};

BoundaryFrame boundary_frame(const BallDomain& dom, const Point& xi);

// c + (2R - |x-c|)(x-c)/|x-c|: the reflection across the sphere along the normal; an involution.
Point reflect_across_boundary(const BallDomain& dom, const Point& x);

// min over y of |mirror - y| / |xi - y|, skipping y == xi.
double reflection_comparability(const BallDomain& dom, const Point& xi, const std::vector<Point>& ys);

enum class WeightKind { affine, affine_plus_bump };

struct WeightField {
    WeightKind kind = WeightKind::affine;
    double a0 = 1.0;
    Point g;
    Point bump_center;
    double bump_amplitude = 0.0;
    double bump_width = 1.0;

    static WeightField affine(double a0, Point g);
    static WeightField constant(int N, double a0);
    static WeightField with_bump(double a0, Point g, Point m, double kappa, double s);

    double value(const Point& x) const;
    Point gradient(const Point& x) const;
    double laplacian(const Point& x) const;
    Eigen::MatrixXd hessian(const Point& x) const;
};

struct WeightReport {
    double tangential_gradient_norm = 0.0;
    bool critical = false;
    std::vector<double> tangential_hessian_eigenvalues;
    bool nondegenerate = false;
    double normal_derivative = 0.0;  // grad a . inward normal
    double min_value = 0.0;          // multistart estimate of min over the closed ball
    double certificate = 0.0;        // analytic lower bound
    bool positive = false;
    bool p2_holds() const { return critical && nondegenerate && normal_derivative > 0.0 && positive; }
};

WeightReport weight_checks(const BallDomain& dom, const WeightField& a, const Point& zeta0, double tol = 1e-6);

class SymmetryGroup {
public:
    SymmetryGroup(const BallDomain& dom, const Point& zeta0);
    int count() const { return static_cast<int>(tangent_.size()); }
    // i in 1..N-1
    Point reflect(int i, const Point& x) const;
    const Point& normal() const { return nu_; }
    const Point& anchor() const { return zeta0_; }

private:
    Point zeta0_, nu_;
    std::vector<Point> tangent_;
};

// Orthonormal basis of the complement of v (Gram-Schmidt on the coordinate axes).
std::vector<Point> orthonormal_complement(const Point& v);

}  // namespace blowup
