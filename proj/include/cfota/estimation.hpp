#pragma once

#include "cfota/channel.hpp"

#include <cstddef>
#include <vector>

namespace cfota {

struct PilotPlan {
    std::size_t tau_p = 1;
    std::vector<std::size_t> pilot_of_device;
    std::vector<double> pilot_power;  // W

    /// Devices sharing device k's pilot, k included.
    std::vector<std::size_t> sharing(std::size_t k) const;
};

/// MMSE estimates with estimate covariance B and error covariance C = R - B.
struct ChannelEstimate {
    cvec h_hat;
    cmat B;
    cmat C;
};

using EstimateTable = LinkTable<ChannelEstimate>;

/// Round-robin within each group: the i-th device of a group gets pilot i.
/// Groups reuse the same pilot set. Throws PilotShortage when a group exceeds tau_p.
PilotPlan assign_pilots(const std::vector<std::size_t>& group_of_device, std::size_t tau_p,
                        double pilot_power_w);

/// Despread pilot observations, indexed (pilot, receiver):
///   y = sum_{i on pilot} sqrt(p_i tau_p) h_i + n,  n ~ CN(0, noise_power I).
LinkTable<cvec> pilot_observation(const ChannelRealization& channels, const PilotPlan& plan,
                                  double noise_power, Rng& rng);

/// h_hat = sqrt(p_k tau_p) R Xi^{-1} y,  B = p_k tau_p R Xi^{-1} R,  C = R - B,
/// Xi = sum_{i in P_k} p_i tau_p R_i + noise_power I. No explicit inverse is formed.
ChannelEstimate mmse_estimate(const cvec& y, const PilotPlan& plan,
                              const CorrelationTable& correlations, std::size_t k, std::size_t l,
                              double noise_power);

/// mmse_estimate for every (device, receiver) pair.
EstimateTable estimate_all(const LinkTable<cvec>& observations, const PilotPlan& plan,
                           const CorrelationTable& correlations, double noise_power);

/// Genie estimates: h_hat = h, B = R, C = 0.
EstimateTable perfect_csi(const ChannelRealization& channels, const CorrelationTable& correlations);

}  // namespace cfota
