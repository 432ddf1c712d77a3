#pragma once

#include "cfota/aggregation.hpp"
#include "cfota/channel.hpp"
#include "cfota/fl_engine.hpp"

#include <string_view>
#include <vector>

namespace cfota {

enum class Architecture { Level3, Level2, Level1, Cellular, ErrorFree };

std::string_view to_string(Architecture a);
Architecture parse_architecture(std::string_view name);

/// Everything the receivers need to decode one round: transmit coefficients and
/// combiners for the given architecture.
struct OtaTransceiver {
    Architecture architecture = Architecture::ErrorFree;
    cvec b;                                // per device
    std::vector<cvec> combiners;           // Level 3/2: stacked LN; cellular: M-dim, per group
    std::vector<std::vector<cvec>> local;  // Level 1: [group][ap]
    std::vector<std::size_t> serving_bs;   // cellular: per group
    Eigen::Index ap_antennas = 0;          // Level 2: per-AP split of the stacked combiner
};

struct OtaOutcome {
    std::vector<rvec> desired;    // per group
    std::vector<rvec> recovered;  // per group, real part of the recovery
    std::vector<double> error_sq;          // sum_d (desired - recovered)^2
    std::vector<double> complex_error_sq;  // sum_d |desired - complex recovery|^2
    std::vector<NormalizationStats> stats;  // per device
};

/// Weights for the solvers from the round's normalization statistics.
AggregationWeights<double> round_weights(const std::vector<NormalizationStats>& stats,
                                         const rvec& gamma, const rvec& omega);

/// One over-the-air aggregation round. Every device normalizes its local model,
/// then for each slot d all devices transmit b_k s_{k,d} at once over the
/// (round-static) channels, with fresh receiver noise per slot. `channels` holds
/// AP channels for Levels 1-3 and BS channels for the cellular architecture.
/// `gamma` is per device. Models within a group share one length; groups may differ,
/// and a device stays silent in the slots beyond its own model.
/// Propagates DegenerateVariance from normalization.
OtaOutcome ota_round(const std::vector<rvec>& locals, const GroupLayout& layout, const rvec& gamma,
                     const OtaTransceiver& transceiver, const ChannelRealization& channels,
                     double noise_power, Rng& noise_rng);

}  // namespace cfota
