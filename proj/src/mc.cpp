#include "blowup/mc.hpp"

#include <cmath>
#include <random>

#include <boost/math/special_functions/gamma.hpp>

#include "blowup/dimension.hpp"
#include "blowup/errors.hpp"

namespace blowup {

void Moments::add(std::span<const double> x) {
    const int k = dim();
    if (delta_.size() != k) delta_.resize(k);
    ++n_;
    const double inv = 1.0 / static_cast<double>(n_);
    for (int i = 0; i < k; ++i) {
        delta_[i] = x[i] - mean_[i];
        mean_[i] += delta_[i] * inv;
    }
    for (int j = 0; j < k; ++j) {
        const double after = x[j] - mean_[j];
        for (int i = 0; i < k; ++i) m2_(i, j) += delta_[i] * after;
    }
}

void Moments::merge(const Moments& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
        *this = o;
        return;
    }
    const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_), n = na + nb;
    const Eigen::VectorXd d = o.mean_ - mean_;
    mean_ += d * (nb / n);
    m2_ += o.m2_ + d * d.transpose() * (na * nb / n);
    n_ += o.n_;
}

Eigen::MatrixXd Moments::covariance() const {
    if (n_ < 2) return Eigen::MatrixXd::Zero(dim(), dim());
    return m2_ / static_cast<double>(n_ - 1);
}

Estimate Moments::estimate(int i) const {
    Estimate e;
    e.value = mean_[i];
    e.samples = n_;
    e.err = n_ > 1 ? std::sqrt(std::max(0.0, m2_(i, i)) / static_cast<double>(n_ - 1) / static_cast<double>(n_)) : 0.0;
    return e;
}

Estimate Moments::combination(const Eigen::VectorXd& c) const {
    Estimate e;
    e.value = c.dot(mean_);
    e.samples = n_;
    if (n_ > 1) {
        const double var = c.dot(m2_ * c) / static_cast<double>(n_ - 1);
        e.err = std::sqrt(std::max(0.0, var) / static_cast<double>(n_));
    }
    return e;
}

Eigen::VectorXd random_direction(CounterRng& rng, int N) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(N);
    double n2 = 0.0;
    do {
        for (int i = 0; i < N; ++i) v[i] = normal(rng);
        n2 = v.squaredNorm();
    } while (n2 == 0.0);
    return v / std::sqrt(n2);
}

PowerProposal::PowerProposal(Eigen::VectorXd center, double scale, double k)
    : center_(std::move(center)), scale_(scale), k_(k) {
    const int N = static_cast<int>(center_.size());
    if (!(k > 0.5 * N) || !(scale > 0))
        throw Error(ErrorCode::invalid_argument, "power proposal needs k > N/2 and scale > 0");
    log_norm_ = boost::math::lgamma(k) - 0.5 * N * std::log(M_PI) - boost::math::lgamma(k - 0.5 * N) +
                (2.0 * k - N) * std::log(scale);
}

double PowerProposal::radius_squared_sample(CounterRng& rng) const {
    const int N = static_cast<int>(center_.size());
    std::gamma_distribution<double> g1(0.5 * N, 1.0), g2(k_ - 0.5 * N, 1.0);
    const double a = g1(rng), b = g2(rng);
    return scale_ * scale_ * a / b;
}

Eigen::VectorXd PowerProposal::sample(CounterRng& rng) const {
    const int N = static_cast<int>(center_.size());
    const double r = std::sqrt(radius_squared_sample(rng));
    return center_ + r * random_direction(rng, N);
}

double PowerProposal::pdf(const Eigen::VectorXd& y) const {
    const double r2 = (y - center_).squaredNorm();
    return std::exp(log_norm_ - k_ * std::log(scale_ * scale_ + r2));
}

BallUniform::BallUniform(Eigen::VectorXd center, double radius) : center_(std::move(center)), radius_(radius) {
    density_ = 1.0 / ball_volume(static_cast<int>(center_.size()), radius);
}

Eigen::VectorXd BallUniform::sample(CounterRng& rng) const {
    const int N = static_cast<int>(center_.size());
    const double r = radius_ * std::pow(rng.uniform(), 1.0 / N);
    return center_ + r * random_direction(rng, N);
}

double BallUniform::pdf(const Eigen::VectorXd& y) const {
    return (y - center_).squaredNorm() < radius_ * radius_ ? density_ : 0.0;
}

LogShell::LogShell(Eigen::VectorXd center, double r0, double r1) : center_(std::move(center)), r0_(r0), r1_(r1) {
    if (!(0 < r0 && r0 < r1)) throw Error(ErrorCode::invalid_argument, "log shell needs 0 < r0 < r1");
    area_ = sphere_area(static_cast<int>(center_.size()));
}

Eigen::VectorXd LogShell::sample(CounterRng& rng) const {
    const int N = static_cast<int>(center_.size());
    const double r = r0_ * std::exp(rng.uniform() * std::log(r1_ / r0_));
    return center_ + r * random_direction(rng, N);
}

double LogShell::pdf(const Eigen::VectorXd& y) const {
    const int N = static_cast<int>(center_.size());
    const double r = (y - center_).norm();
    if (r < r0_ || r > r1_) return 0.0;
    return 1.0 / (area_ * std::pow(r, N) * std::log(r1_ / r0_));
}

RadialPowerProposal::RadialPowerProposal(Eigen::VectorXd center, double rmax, double m)
    : center_(std::move(center)), rmax_(rmax), m_(m) {
    if (!(rmax > 0) || !(m > -1)) throw Error(ErrorCode::invalid_argument, "radial proposal needs rmax > 0, m > -1");
    area_ = sphere_area(static_cast<int>(center_.size()));
}

Eigen::VectorXd RadialPowerProposal::sample(CounterRng& rng) const {
    const int N = static_cast<int>(center_.size());
    const double r = rmax_ * std::pow(rng.uniform_open(), 1.0 / (m_ + 1.0));
    return center_ + r * random_direction(rng, N);
}

double RadialPowerProposal::pdf(const Eigen::VectorXd& y) const {
    const int N = static_cast<int>(center_.size());
    const double r = (y - center_).norm();
    if (r > rmax_ || r == 0.0) return 0.0;
    return (m_ + 1.0) * std::pow(r / rmax_, m_) / rmax_ / (area_ * std::pow(r, N - 1));
}

void Mixture::add(std::shared_ptr<const Proposal> p, double weight) {
    parts_.push_back(std::move(p));
    weights_.push_back(weight);
    total_ += weight;
}

Eigen::VectorXd Mixture::sample(CounterRng& rng) const {
    double u = rng.uniform() * total_;
    std::size_t i = 0;
    while (i + 1 < parts_.size() && u >= weights_[i]) {
        u -= weights_[i];
        ++i;
    }
    return parts_[i]->sample(rng);
}

double Mixture::pdf(const Eigen::VectorXd& y) const {
    double s = 0.0;
    for (std::size_t i = 0; i < parts_.size(); ++i) s += weights_[i] * parts_[i]->pdf(y);
    return s / total_;
}

}  // namespace blowup
