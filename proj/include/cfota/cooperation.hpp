#pragma once

// AP cooperation levels on top of the aggregation kernels: receiver views built
// from estimates, Level 1 local combining and its MSE, and the per-level
// recovery of the global parameter from received data.

#include "cfota/aggregation.hpp"
#include "cfota/estimation.hpp"

#include <cstddef>
#include <vector>

namespace cfota {

/// CPU view: stacked LN-dim estimates and block-diagonal error covariances.
ReceiverView<double> stacked_view(const EstimateTable& estimates);

/// View of receiver l alone (one AP, or one cellular BS).
ReceiverView<double> receiver_view(const EstimateTable& estimates, std::size_t l);

/// Stacked LN-dim true channel of device k.
cvec stacked_channel(const ChannelRealization& channels, std::size_t k);

/// Level 3 / Level 2: every group decoded at the CPU.
AggregationProblem<double> centralized_problem(const EstimateTable& estimates,
                                               const GroupLayout& layout,
                                               const AggregationWeights<double>& weights,
                                               double noise_power, const rvec& power_limit);

/// Cellular: group g decoded at BS serving_bs[g].
AggregationProblem<double> cellular_problem(const EstimateTable& bs_estimates,
                                            const std::vector<std::size_t>& serving_bs,
                                            const GroupLayout& layout,
                                            const AggregationWeights<double>& weights,
                                            double noise_power, const rvec& power_limit);

/// MSE of recovering group g with a combiner v when the true channels are known
/// (no estimation-error terms). Level 1's MSE is this quantity for the stacked
/// combiner stack_level1(local combiners).
template <typename Real>
Real mse_given_channels(const std::vector<VecC<Real>>& channels, const GroupLayout& layout,
                        const AggregationWeights<Real>& w, Real noise_power, const VecC<Real>& b,
                        const VecC<Real>& v, std::size_t g) {
    Real mse = noise_power * v.squaredNorm();
    for (std::size_t k = 0; k < layout.devices(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        std::complex<Real> signal = v.dot(channels[k]) * b(kk);
        if (layout.group_of(k) == g) signal -= w.gamma(kk) * w.nu(kk);
        mse += std::norm(signal);
    }
    return mse;
}

/// Level 1 local combiner of group g at one AP: combiner() on that AP's view.
template <typename Real>
VecC<Real> combiner_level1(const ReceiverView<Real>& ap_view, const GroupLayout& layout,
                           const AggregationWeights<Real>& w, Real noise_power,
                           const VecC<Real>& b, std::size_t g) {
    return combiner(ap_view, layout, w, noise_power, b, g);
}

/// Level 1 combiners indexed [group][ap].
template <typename Real>
std::vector<std::vector<VecC<Real>>> level1_combiners(const std::vector<ReceiverView<Real>>& ap_views,
                                                      const GroupLayout& layout,
                                                      const AggregationWeights<Real>& w,
                                                      Real noise_power, const VecC<Real>& b) {
    std::vector<std::vector<VecC<Real>>> out(layout.groups());
    for (std::size_t g = 0; g < layout.groups(); ++g) {
        for (const auto& view : ap_views) {
            out[g].push_back(combiner_level1(view, layout, w, noise_power, b, g));
        }
    }
    return out;
}

/// The equivalent stacked combiner of CPU-side averaging: (1/L)[v_1; ...; v_L].
template <typename Real>
VecC<Real> stack_level1(const std::vector<VecC<Real>>& local) {
    Eigen::Index n = 0;
    for (const auto& v : local) n += v.size();
    VecC<Real> out(n);
    Eigen::Index at = 0;
    const Real scale = Real(1) / static_cast<Real>(local.size());
    for (const auto& v : local) {
        out.segment(at, v.size()) = scale * v;
        at += v.size();
    }
    return out;
}

/// u_{gi}: per-AP combined true channels [v_{g1}^H h_{i1}, ..., v_{gL}^H h_{iL}].
template <typename Real>
VecC<Real> combined_channels(const std::vector<VecC<Real>>& local,
                             const std::vector<VecC<Real>>& per_ap_channel) {
    VecC<Real> u(static_cast<Eigen::Index>(local.size()));
    for (std::size_t l = 0; l < local.size(); ++l) {
        u(static_cast<Eigen::Index>(l)) = local[l].dot(per_ap_channel[l]);
    }
    return u;
}

/// Level 1 MSE conditioned on the combined true channels u (one L-vector per device):
///   sum_{j in g} |a^H u_j b_j - gamma_j nu_j|^2 + sum_{i not in g} |a^H u_i b_i|^2
/// + noise a^H Z a,  a = 1/L, Z = diag(||v_gl||^2).
template <typename Real>
Real mse_level1(const VecC<Real>& b, const std::vector<VecC<Real>>& local,
                const std::vector<VecC<Real>>& u, const GroupLayout& layout,
                const AggregationWeights<Real>& w, Real noise_power, std::size_t g) {
    const Real a = Real(1) / static_cast<Real>(local.size());
    Real z = 0;
    for (const auto& v : local) z += v.squaredNorm();
    Real mse = noise_power * a * a * z;
    for (std::size_t k = 0; k < layout.devices(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        std::complex<Real> signal = a * u[k].sum() * b(kk);
        if (layout.group_of(k) == g) signal -= w.gamma(kk) * w.nu(kk);
        mse += std::norm(signal);
    }
    return mse;
}

/// Level 1 MSE conditioned on the estimates, i.e. mse_level3 of the stacked
/// averaging combiner. Comparable with the Level 3 objective.
template <typename Real>
Real mse_level1_given_estimates(const AggregationProblem<Real>& centralized, const VecC<Real>& b,
                                const std::vector<VecC<Real>>& local, std::size_t g) {
    return mse_level3(centralized, b, stack_level1(local), g);
}

// Recovery. Each column of a data matrix is one slot; results are complex,
// and the real part is the parameter estimate.

/// Level 3: v^H y + offset.
template <typename Real>
VecC<Real> recover_level3(const VecC<Real>& v, const MatC<Real>& y, Real offset) {
    VecC<Real> out = (v.adjoint() * y).transpose();
    out.array() += std::complex<Real>(offset);
    return out;
}

/// Level 2: the CPU sums per-AP local estimates v_l^H y_l, then adds the offset once.
/// `antennas` is the per-AP dimension N.
template <typename Real>
VecC<Real> recover_level2(const VecC<Real>& v, const MatC<Real>& y, Eigen::Index antennas,
                          Real offset) {
    const Eigen::Index aps = v.size() / antennas;
    VecC<Real> out = VecC<Real>::Constant(y.cols(), std::complex<Real>(offset));
    for (Eigen::Index l = 0; l < aps; ++l) {
        const VecC<Real> local = (v.segment(l * antennas, antennas).adjoint() *
                                  y.middleRows(l * antennas, antennas))
                                     .transpose();
        out += local;
    }
    return out;
}

/// Level 1: average of per-AP local estimates (each including the offset).
template <typename Real>
VecC<Real> recover_level1(const std::vector<VecC<Real>>& local, const MatC<Real>& y,
                          Real offset) {
    const auto aps = static_cast<Real>(local.size());
    VecC<Real> out = VecC<Real>::Zero(y.cols());
    Eigen::Index at = 0;
    for (const auto& v : local) {
        VecC<Real> est = (v.adjoint() * y.middleRows(at, v.size())).transpose();
        est.array() += std::complex<Real>(offset);
        out += est / aps;
        at += v.size();
    }
    return out;
}

}  // namespace cfota
