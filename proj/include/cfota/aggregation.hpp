#pragma once

// Weighted sum-MSE over-the-air aggregation: closed-form conditional MSE,
// MMSE-type receive combiners, KKT transmit-coefficient optimization (TCO)
// and the alternating optimization loop.
//
// One routine serves Level 3 / Level 2 (all groups share the stacked LN-dim
// view at the CPU) and the cellular baseline (group g is decoded from the
// M-dim view of its serving BS). Level 1 combiners reuse combiner() on the
// per-AP N-dim views; see cooperation.hpp.

#include "cfota/errors.hpp"
#include "cfota/linalg.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace cfota {

/// What one receiver (the CPU, one AP, or one BS) knows about every device:
/// channel estimates and estimation-error covariances in its own dimension.
template <typename Real>
struct ReceiverView {
    std::vector<VecC<Real>> h_hat;
    std::vector<MatC<Real>> err_cov;

    Eigen::Index dim() const { return h_hat.empty() ? 0 : h_hat.front().size(); }
    std::size_t devices() const { return h_hat.size(); }
};

class GroupLayout {
public:
    GroupLayout() = default;
    explicit GroupLayout(std::vector<std::size_t> group_of_device)
        : group_of_device_(std::move(group_of_device)) {
        for (std::size_t g : group_of_device_) groups_ = std::max(groups_, g + 1);
        members_.resize(groups_);
        for (std::size_t k = 0; k < group_of_device_.size(); ++k) {
            members_[group_of_device_[k]].push_back(k);
        }
    }

    std::size_t devices() const { return group_of_device_.size(); }
    std::size_t groups() const { return groups_; }
    std::size_t group_of(std::size_t k) const { return group_of_device_[k]; }
    const std::vector<std::size_t>& members(std::size_t g) const { return members_[g]; }
    const std::vector<std::size_t>& group_of_device() const { return group_of_device_; }

private:
    std::vector<std::size_t> group_of_device_;
    std::vector<std::vector<std::size_t>> members_;
    std::size_t groups_ = 0;
};

/// gamma, nu and theta_bar are per device (gamma_k is the weight of device k in
/// its own group); omega is per group.
template <typename Real>
struct AggregationWeights {
    VecR<Real> gamma;
    VecR<Real> omega;
    VecR<Real> nu;
    VecR<Real> theta_bar;

    void validate(const GroupLayout& layout) const {
        const auto k = static_cast<Eigen::Index>(layout.devices());
        if (gamma.size() != k || nu.size() != k || theta_bar.size() != k ||
            omega.size() != static_cast<Eigen::Index>(layout.groups())) {
            throw ShapeMismatch("aggregation weights do not match the group layout");
        }
        for (std::size_t g = 0; g < layout.groups(); ++g) {
            Real sum = 0;
            for (std::size_t j : layout.members(g)) sum += gamma(static_cast<Eigen::Index>(j));
            if (std::abs(sum - Real(1)) > Real(1e-9)) {
                throw ValidationError("gamma of group " + std::to_string(g) + " does not sum to 1");
            }
            if (!(omega(static_cast<Eigen::Index>(g)) > 0)) {
                throw ValidationError("omega must be positive");
            }
        }
        if ((nu.array() < 0).any()) throw ValidationError("nu must be non-negative");
    }
};

/// Sum over group g of gamma_j * theta_bar_j, added back after combining.
template <typename Real>
Real mean_offset(const AggregationWeights<Real>& w, const GroupLayout& layout, std::size_t g) {
    Real sum = 0;
    for (std::size_t j : layout.members(g)) {
        const auto jj = static_cast<Eigen::Index>(j);
        sum += w.gamma(jj) * w.theta_bar(jj);
    }
    return sum;
}

template <typename Real>
struct AggregationProblem {
    std::vector<ReceiverView<Real>> views;
    std::vector<std::size_t> view_of_group;
    GroupLayout layout;
    AggregationWeights<Real> weights;
    Real noise_power = 0;
    VecR<Real> power_limit;  // P_k, W

    const ReceiverView<Real>& view(std::size_t g) const { return views[view_of_group[g]]; }

    void validate() const {
        weights.validate(layout);
        if (view_of_group.size() != layout.groups()) {
            throw ShapeMismatch("every group needs a receiver view");
        }
        for (const auto& v : views) {
            if (v.devices() != layout.devices() || v.err_cov.size() != layout.devices()) {
                throw ShapeMismatch("receiver view does not cover every device");
            }
        }
        if (power_limit.size() != static_cast<Eigen::Index>(layout.devices()) ||
            !(power_limit.array() > 0).all()) {
            throw ValidationError("power limits must be positive, one per device");
        }
        if (!(noise_power > 0)) throw ValidationError("noise power must be positive");
    }
};

/// Conditional MSE of group g given the estimates in `view`:
///   sum_{j in g} |v^H h_j b_j - gamma_j nu_j|^2 + |b_j|^2 v^H C_j v
/// + sum_{i not in g} |v^H h_i b_i|^2 + |b_i|^2 v^H C_i v + noise ||v||^2.
template <typename Real>
Real group_mse(const ReceiverView<Real>& view, const GroupLayout& layout,
               const AggregationWeights<Real>& w, Real noise_power, const VecC<Real>& b,
               const VecC<Real>& v, std::size_t g) {
    Real mse = noise_power * v.squaredNorm();
    for (std::size_t k = 0; k < layout.devices(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        std::complex<Real> signal = v.dot(view.h_hat[k]) * b(kk);  // dot() conjugates v
        if (layout.group_of(k) == g) signal -= w.gamma(kk) * w.nu(kk);
        mse += std::norm(signal) + std::norm(b(kk)) * v.dot(view.err_cov[k] * v).real();
    }
    return mse;
}

template <typename Real>
Real mse_level3(const AggregationProblem<Real>& p, const VecC<Real>& b, const VecC<Real>& v,
                std::size_t g) {
    return group_mse(p.view(g), p.layout, p.weights, p.noise_power, b, v, g);
}

template <typename Real>
Real weighted_sum_mse(const AggregationProblem<Real>& p, const VecC<Real>& b,
                      const std::vector<VecC<Real>>& combiners) {
    Real total = 0;
    for (std::size_t g = 0; g < p.layout.groups(); ++g) {
        total += p.weights.omega(static_cast<Eigen::Index>(g)) * mse_level3(p, b, combiners[g], g);
    }
    return total;
}

/// Minimizer of group_mse over v for fixed b:
///   (sum_k |b_k|^2 (h_k h_k^H + C_k) + noise I)^{-1} sum_{j in g} gamma_j b_j nu_j h_j.
template <typename Real>
VecC<Real> combiner(const ReceiverView<Real>& view, const GroupLayout& layout,
                    const AggregationWeights<Real>& w, Real noise_power, const VecC<Real>& b,
                    std::size_t g) {
    const Eigen::Index n = view.dim();
    MatC<Real> system = noise_power * MatC<Real>::Identity(n, n);
    for (std::size_t k = 0; k < layout.devices(); ++k) {
        const Real power = std::norm(b(static_cast<Eigen::Index>(k)));
        if (power == 0) continue;
        system.noalias() += power * (view.h_hat[k] * view.h_hat[k].adjoint() + view.err_cov[k]);
    }
    VecC<Real> rhs = VecC<Real>::Zero(n);
    for (std::size_t j : layout.members(g)) {
        const auto jj = static_cast<Eigen::Index>(j);
        rhs += (w.gamma(jj) * w.nu(jj)) * b(jj) * view.h_hat[j];
    }
    if (rhs.isZero(0)) return rhs;
    return hermitian_solve(system, rhs);
}

template <typename Real>
VecC<Real> combiner_level3(const AggregationProblem<Real>& p, const VecC<Real>& b, std::size_t g) {
    return combiner(p.view(g), p.layout, p.weights, p.noise_power, b, g);
}

template <typename Real>
std::vector<VecC<Real>> all_combiners(const AggregationProblem<Real>& p, const VecC<Real>& b) {
    std::vector<VecC<Real>> out;
    out.reserve(p.layout.groups());
    for (std::size_t g = 0; g < p.layout.groups(); ++g) out.push_back(combiner_level3(p, b, g));
    return out;
}

template <typename Real>
struct TcoResult {
    std::complex<Real> b;
    Real mu = 0;
};

/// Per-device KKT solution for fixed combiners:
///   b = omega_g gamma nu h^H v_g / (A + mu),  A = sum_p omega_p (|v_p^H h|^2 + v_p^H C v_p),
///   mu = max(0, omega_g gamma nu |v_g^H h| / sqrt(P) - A).
/// Each group p sees device k through its own receiver view.
template <typename Real>
TcoResult<Real> tco_step(const AggregationProblem<Real>& p,
                         const std::vector<VecC<Real>>& combiners, std::size_t k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const std::size_t g = p.layout.group_of(k);
    Real a = 0;
    for (std::size_t q = 0; q < p.layout.groups(); ++q) {
        const auto& view = p.view(q);
        const auto& v = combiners[q];
        a += p.weights.omega(static_cast<Eigen::Index>(q)) *
             (std::norm(v.dot(view.h_hat[k])) + v.dot(view.err_cov[k] * v).real());
    }
    const std::complex<Real> numerator =
        p.weights.omega(static_cast<Eigen::Index>(g)) * p.weights.gamma(kk) * p.weights.nu(kk) *
        p.view(g).h_hat[k].dot(combiners[g]);
    TcoResult<Real> out;
    out.mu = std::max(Real(0), std::abs(numerator) / std::sqrt(p.power_limit(kk)) - a);
    const Real denominator = a + out.mu;
    if (denominator > 0) {
        out.b = numerator / denominator;
        if (out.mu > 0) {
            // Active constraint: |b| = sqrt(P) analytically; remove round-off.
            out.b *= std::sqrt(p.power_limit(kk)) / std::abs(out.b);
        }
    } else {
        out.b = 0;  // objective does not depend on b_k
    }
    return out;
}

enum class Termination { Threshold, MaxIters };

/// values[0] is the weighted sum-MSE at full power with optimal combiners;
/// values[i] is the value after iteration i.
template <typename Real>
struct OptHistory {
    std::vector<Real> values;
    std::size_t iterations = 0;
    Termination terminated_by = Termination::MaxIters;
};

template <typename Real>
struct AggregationSolution {
    VecC<Real> b;
    std::vector<VecC<Real>> combiners;
    VecR<Real> mu;
    OptHistory<Real> history;

    Real weighted_sum_mse() const { return history.values.back(); }
};

template <typename Real>
VecC<Real> full_power(const AggregationProblem<Real>& p) {
    return p.power_limit.array().sqrt().matrix().template cast<std::complex<Real>>();
}

/// Transmit at full power with optimal combiners (the "without TCO" baseline).
template <typename Real>
AggregationSolution<Real> fixed_power_solution(const AggregationProblem<Real>& p, const VecC<Real>& b) {
    p.validate();
    if (b.size() != static_cast<Eigen::Index>(p.layout.devices())) {
        throw ShapeMismatch("one transmit coefficient per device required");
    }
    AggregationSolution<Real> s;
    s.b = b;
    s.combiners = all_combiners(p, s.b);
    s.mu = VecR<Real>::Zero(s.b.size());
    s.history.values.push_back(weighted_sum_mse(p, s.b, s.combiners));
    s.history.terminated_by = Termination::Threshold;
    return s;
}

template <typename Real>
AggregationSolution<Real> full_power_solution(const AggregationProblem<Real>& p) {
    return fixed_power_solution(p, full_power(p));
}

/// Alternating optimization from a feasible initial b: each iteration updates all
/// combiners, then all transmit coefficients. Stops when the weighted sum-MSE
/// decreases by less than eps, or after max_iters iterations. The returned
/// (b, combiners) pair evaluates to history.values.back().
template <typename Real>
AggregationSolution<Real> alternating_optimize_from(const AggregationProblem<Real>& p,
                                                    const VecC<Real>& initial, Real eps,
                                                    std::size_t max_iters) {
    for (Eigen::Index k = 0; k < initial.size(); ++k) {
        if (std::norm(initial(k)) > p.power_limit(k) * (1 + 1e-12)) {
            throw ValidationError("initial transmit coefficient exceeds its power limit");
        }
    }
    AggregationSolution<Real> s = fixed_power_solution(p, initial);
    s.history.terminated_by = Termination::MaxIters;
    const std::size_t k_count = p.layout.devices();
    for (std::size_t it = 1; it <= max_iters; ++it) {
        s.combiners = all_combiners(p, s.b);
        for (std::size_t k = 0; k < k_count; ++k) {
            const auto r = tco_step(p, s.combiners, k);
            s.b(static_cast<Eigen::Index>(k)) = r.b;
            s.mu(static_cast<Eigen::Index>(k)) = r.mu;
        }
        const Real value = weighted_sum_mse(p, s.b, s.combiners);
        const Real previous = s.history.values.back();
        s.history.values.push_back(value);
        s.history.iterations = it;
        if (previous - value < eps) {
            s.history.terminated_by = Termination::Threshold;
            break;
        }
    }
    return s;
}

/// Alternating optimization started at full power, b = sqrt(P).
template <typename Real>
AggregationSolution<Real> alternating_optimize(const AggregationProblem<Real>& p,
                                               Real eps = Real(1e-10),
                                               std::size_t max_iters = 500) {
    return alternating_optimize_from(p, full_power(p), eps, max_iters);
}

/// Cellular baseline: identical alternating scheme where group g's view is the
/// serving BS's M-antenna view and the TCO denominator sums each group's
/// serving-BS channel of the device.
template <typename Real>
AggregationSolution<Real> cellular_optimize(const AggregationProblem<Real>& p,
                                            Real eps = Real(1e-10),
                                            std::size_t max_iters = 500) {
    return alternating_optimize(p, eps, max_iters);
}

}  // namespace cfota
