#include "cfota/fl_engine.hpp"

#include "cfota/errors.hpp"

#include <cmath>

namespace cfota {

NormalizedParams normalize(const rvec& theta) {
    if (theta.size() < 2) throw ValidationError("normalization needs at least 2 entries");
    NormalizedParams out;
    out.stats.mean = theta.mean();
    const rvec centered = theta.array() - out.stats.mean;
    out.stats.std = std::sqrt(centered.squaredNorm() / static_cast<double>(theta.size()));
    if (!(out.stats.std > 0.0)) throw DegenerateVariance("parameter vector is constant");
    out.s = centered / out.stats.std;
    return out;
}

rvec denormalize(const rvec& s, const NormalizationStats& stats) {
    return (s * stats.std).array() + stats.mean;
}

RidgeObjective::RidgeObjective(rmat x, rvec y, double lambda)
    : x_(std::move(x)), y_(std::move(y)), lambda_(lambda) {
    if (x_.rows() != y_.size()) throw ShapeMismatch("ridge design and targets differ in length");
}

double RidgeObjective::loss(const rvec& theta) const {
    const double n = static_cast<double>(x_.rows());
    return (x_ * theta - y_).squaredNorm() / (2.0 * n) + 0.5 * lambda_ * theta.squaredNorm();
}

rvec RidgeObjective::gradient(const rvec& theta) const {
    const double n = static_cast<double>(x_.rows());
    return x_.transpose() * (x_ * theta - y_) / n + lambda_ * theta;
}

rmat RidgeObjective::hessian() const {
    const double n = static_cast<double>(x_.rows());
    return x_.transpose() * x_ / n + lambda_ * rmat::Identity(x_.cols(), x_.cols());
}

rvec local_update(const rvec& global, const LocalObjective& objective, double eta) {
    return global - eta * objective.gradient(global);
}

rvec desired_global(const std::vector<rvec>& locals, std::span<const double> gamma) {
    if (locals.empty() || locals.size() != gamma.size()) {
        throw ShapeMismatch("one weight per local model required");
    }
    rvec out = rvec::Zero(locals.front().size());
    for (std::size_t k = 0; k < locals.size(); ++k) {
        if (locals[k].size() != out.size()) throw ShapeMismatch("local models differ in size");
        out += gamma[k] * locals[k];
    }
    return out;
}

ConvexTask::ConvexTask(std::vector<RidgeObjective> locals, std::vector<double> gamma)
    : locals_(std::move(locals)), gamma_(std::move(gamma)) {
    if (locals_.empty() || locals_.size() != gamma_.size()) {
        throw ShapeMismatch("one weight per local objective required");
    }
    rmat h = gamma_[0] * locals_[0].hessian();
    for (std::size_t k = 1; k < locals_.size(); ++k) h += gamma_[k] * locals_[k].hessian();
    Eigen::SelfAdjointEigenSolver<rmat> eig(h, Eigen::EigenvaluesOnly);
    xi_ = eig.eigenvalues().minCoeff();
    chi_ = eig.eigenvalues().maxCoeff();
    // The global gradient is affine: grad(theta) = H theta + grad(0).
    rvec g0 = rvec::Zero(h.rows());
    for (std::size_t k = 0; k < locals_.size(); ++k) {
        g0 += gamma_[k] * locals_[k].gradient(rvec::Zero(h.rows()));
    }
    optimum_ = h.llt().solve(-g0);
    optimal_value_ = global_loss(optimum_);
}

double ConvexTask::global_loss(const rvec& theta) const {
    double total = 0.0;
    for (std::size_t k = 0; k < locals_.size(); ++k) total += gamma_[k] * locals_[k].loss(theta);
    return total;
}

double theorem1_bound(double chi, double xi, double initial_gap, std::span<const double> errors) {
    if (!(chi > 0.0) || !(xi > 0.0) || xi > chi) {
        throw InvalidConstants("need 0 < xi <= chi");
    }
    const double lambda = 1.0 - xi / chi;
    const auto rounds = static_cast<int>(errors.size());
    double bound = std::pow(lambda, rounds) * initial_gap;
    for (int t = 1; t <= rounds; ++t) {
        bound += chi * std::pow(lambda, rounds - t) / 2.0 * errors[static_cast<std::size_t>(t - 1)];
    }
    return bound;
}

}  // namespace cfota
