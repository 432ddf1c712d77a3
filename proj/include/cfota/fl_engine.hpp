#pragma once

#include "cfota/fnn.hpp"
#include "cfota/linalg.hpp"

#include <memory>
#include <span>
#include <vector>

namespace cfota {

struct NormalizationStats {
    double mean = 0.0;
    double std = 0.0;
};

struct NormalizedParams {
    rvec s;
    NormalizationStats stats;
};

/// s = (theta - mean) / std with population statistics (divisor D).
/// Throws ValidationError for D < 2 and DegenerateVariance for a constant vector.
NormalizedParams normalize(const rvec& theta);
rvec denormalize(const rvec& s, const NormalizationStats& stats);

/// Local empirical risk F_k over one device's dataset.
class LocalObjective {
public:
    virtual ~LocalObjective() = default;
    virtual double loss(const rvec& theta) const = 0;
    virtual rvec gradient(const rvec& theta) const = 0;
};

class FnnObjective final : public LocalObjective {
public:
    FnnObjective(FnnShape shape, Dataset data) : shape_(shape), data_(std::move(data)) {}
    double loss(const rvec& theta) const override { return fnn_loss(theta, shape_, data_); }
    rvec gradient(const rvec& theta) const override { return fnn_gradient(theta, shape_, data_); }
    const Dataset& data() const { return data_; }

private:
    FnnShape shape_;
    Dataset data_;
};

/// Ridge regression: (1/2n) ||X theta - y||^2 + (lambda/2) ||theta||^2.
class RidgeObjective final : public LocalObjective {
public:
    RidgeObjective(rmat x, rvec y, double lambda);
    double loss(const rvec& theta) const override;
    rvec gradient(const rvec& theta) const override;
    /// Constant Hessian X^T X / n + lambda I.
    rmat hessian() const;
    Eigen::Index samples() const { return x_.rows(); }

private:
    rmat x_;
    rvec y_;
    double lambda_;
};

/// One full-batch gradient step from the broadcast global model.
rvec local_update(const rvec& global, const LocalObjective& objective, double eta);

/// sum_k gamma_k theta_k.
rvec desired_global(const std::vector<rvec>& locals, std::span<const double> gamma);

/// Strongly convex quadratic group task built from per-device ridge objectives,
/// with its smoothness (chi) and strong-convexity (xi) constants.
class ConvexTask {
public:
    ConvexTask(std::vector<RidgeObjective> locals, std::vector<double> gamma);

    double chi() const { return chi_; }
    double xi() const { return xi_; }
    /// lambda = 1 - xi / chi.
    double contraction() const { return 1.0 - xi_ / chi_; }
    const rvec& optimum() const { return optimum_; }
    double optimal_value() const { return optimal_value_; }

    double global_loss(const rvec& theta) const;
    double gap(const rvec& theta) const { return global_loss(theta) - optimal_value_; }
    const std::vector<RidgeObjective>& locals() const { return locals_; }
    const std::vector<double>& gamma() const { return gamma_; }

private:
    std::vector<RidgeObjective> locals_;
    std::vector<double> gamma_;
    double chi_ = 0.0;
    double xi_ = 0.0;
    rvec optimum_;
    double optimal_value_ = 0.0;
};

/// Convergence bound after T = errors.size() rounds with eta = 1/chi:
///   lambda^T * initial_gap + sum_{t=1..T} chi lambda^(T-t) / 2 * errors[t-1],
/// where errors[t-1] = E||e^{t+1}||^2. Throws InvalidConstants unless 0 < xi <= chi.
double theorem1_bound(double chi, double xi, double initial_gap, std::span<const double> errors);

}  // namespace cfota
