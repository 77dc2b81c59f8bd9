#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <memory>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "blowup/rng.hpp"

namespace blowup {

struct Estimate {
    double value = 0.0;
    double err = 0.0;  // standard error
    std::uint64_t samples = 0;
};

// Streaming mean and covariance of a k-vector (Welford, Chan merge).
class Moments {
public:
    explicit Moments(int k = 1) : mean_(Eigen::VectorXd::Zero(k)), m2_(Eigen::MatrixXd::Zero(k, k)) {}

    void add(std::span<const double> x);
    void merge(const Moments& other);

    int dim() const { return static_cast<int>(mean_.size()); }
    std::uint64_t count() const { return n_; }
    const Eigen::VectorXd& mean() const { return mean_; }
    Eigen::MatrixXd covariance() const;

    Estimate estimate(int i) const;
    Estimate combination(const Eigen::VectorXd& c) const;

private:
    std::uint64_t n_ = 0;
    Eigen::VectorXd mean_;
    Eigen::MatrixXd m2_;
    Eigen::VectorXd delta_;
};

inline constexpr std::uint64_t kChunkSize = 8192;

// Runs `samples` draws of f(rng, out) with a fixed chunk decomposition.
// Chunk c uses the stream stream_key(seed, module, check, c); reduction is in chunk order,
// so the result does not depend on the number of worker threads.
template <class F>
Moments run_mc(int k, std::uint64_t samples, std::uint64_t seed, std::string_view module,
               std::string_view check, F&& f) {
    const std::uint64_t chunks = (samples + kChunkSize - 1) / kChunkSize;
    std::vector<Moments> parts(chunks, Moments(k));
    auto work = [&](std::uint64_t first, std::uint64_t stride) {
        std::vector<double> buf(k);
        for (std::uint64_t c = first; c < chunks; c += stride) {
            CounterRng rng(stream_key(seed, module, check, c));
            const std::uint64_t n = std::min(kChunkSize, samples - c * kChunkSize);
            for (std::uint64_t i = 0; i < n; ++i) {
                std::fill(buf.begin(), buf.end(), 0.0);
                f(rng, std::span<double>(buf));
                parts[c].add(buf);
            }
        }
    };
    const std::uint64_t workers =
        std::min<std::uint64_t>(chunks, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        work(0, 1);
    } else {
        std::vector<std::future<void>> jobs;
        for (std::uint64_t w = 0; w < workers; ++w) jobs.push_back(std::async(std::launch::async, work, w, workers));
        for (auto& j : jobs) j.get();
    }
    Moments total(k);
    for (const auto& p : parts) total.merge(p);
    return total;
}

// ---- proposals -------------------------------------------------------------

Eigen::VectorXd random_direction(CounterRng& rng, int N);

class Proposal {
public:
    virtual ~Proposal() = default;
    virtual Eigen::VectorXd sample(CounterRng& rng) const = 0;
    virtual double pdf(const Eigen::VectorXd& y) const = 0;
};

// Density proportional to (scale^2 + |y-center|^2)^{-k}, k > N/2.
// |y-center|^2/scale^2 is BetaPrime(N/2, k-N/2), drawn as a ratio of gammas.
class PowerProposal : public Proposal {
public:
    PowerProposal(Eigen::VectorXd center, double scale, double k);
    Eigen::VectorXd sample(CounterRng& rng) const override;
    double pdf(const Eigen::VectorXd& y) const override;
    double radius_squared_sample(CounterRng& rng) const;

    const Eigen::VectorXd& center() const { return center_; }
    double scale() const { return scale_; }
    double k() const { return k_; }

private:
    Eigen::VectorXd center_;
    double scale_, k_;
    double log_norm_;
};

class BallUniform : public Proposal {
public:
    BallUniform(Eigen::VectorXd center, double radius);
    Eigen::VectorXd sample(CounterRng& rng) const override;
    double pdf(const Eigen::VectorXd& y) const override;

private:
    Eigen::VectorXd center_;
    double radius_, density_;
};

// log|y-center| uniform on [log r0, log r1], direction uniform.
class LogShell : public Proposal {
public:
    LogShell(Eigen::VectorXd center, double r0, double r1);
    Eigen::VectorXd sample(CounterRng& rng) const override;
    double pdf(const Eigen::VectorXd& y) const override;

private:
    Eigen::VectorXd center_;
    double r0_, r1_, area_;
};

// Radius with density proportional to r^{m} on [0, rmax]; direction uniform.
class RadialPowerProposal : public Proposal {
public:
    RadialPowerProposal(Eigen::VectorXd center, double rmax, double m);
    Eigen::VectorXd sample(CounterRng& rng) const override;
    double pdf(const Eigen::VectorXd& y) const override;

private:
    Eigen::VectorXd center_;
    double rmax_, m_, area_;
};

class Mixture : public Proposal {
public:
    void add(std::shared_ptr<const Proposal> p, double weight);
    Eigen::VectorXd sample(CounterRng& rng) const override;
    double pdf(const Eigen::VectorXd& y) const override;

private:
    std::vector<std::shared_ptr<const Proposal>> parts_;
    std::vector<double> weights_;
    double total_ = 0.0;
};

}  // namespace blowup
