#pragma once

// Per-seed network construction, per-round channel draws, per-architecture
// transceiver design, and the learning tasks used by the runner.

#include "cfota/config.hpp"
#include "cfota/cooperation.hpp"
#include "cfota/csv.hpp"
#include "cfota/estimation.hpp"
#include "cfota/fl_engine.hpp"
#include "cfota/ota.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace cfota {

/// Round-independent part of one seed: geometry, correlations, pilots.
/// BSs sit at the cell centers; group g is served by BS g.
struct Deployment {
    Area area;
    NetworkGeometry geometry;
    GroupLayout layout;
    PilotPlan plan;
    CorrelationTable ap_corr;
    CorrelationTable bs_corr;  // empty unless the cellular architecture is configured
    std::vector<std::size_t> serving_bs;
    double noise_w = 0.0;
};

Deployment make_deployment(const ScenarioConfig& config, std::uint64_t seed);

/// Channels and MMSE estimates of one round (one coherence block).
struct RoundState {
    ChannelRealization ap_channels;
    ChannelRealization bs_channels;
    EstimateTable ap_estimates;
    EstimateTable bs_estimates;
};

RoundState draw_round(const Deployment& deployment, std::uint64_t seed, std::uint32_t round);

/// gamma_k = 1 / |group of k|.
rvec uniform_gamma(const GroupLayout& layout);
rvec group_omega(const ScenarioConfig& config);

struct ArchitectureResult {
    OtaTransceiver transceiver;
    std::vector<double> group_mse;
    double weighted_sum_mse = 0.0;
};

/// Designs the transceiver for one architecture and reports its conditional
/// per-group MSE. With `tco` false every device transmits at full power. Level 1
/// always transmits at full power and its MSE is conditioned on the combined true
/// channels. ErrorFree reports zero. With `tco` and a `warm_start` (transmit
/// coefficients feasible under power_w), a second alternating run starts there and
/// the lower weighted sum-MSE of the two runs is kept.
ArchitectureResult solve_architecture(Architecture architecture, bool tco,
                                      const Deployment& deployment, const RoundState& round,
                                      const AggregationWeights<double>& weights, double power_w,
                                      const ScenarioConfig& config,
                                      const cvec* warm_start = nullptr);

/// Fronthaul counts of the cell-free levels; zero for the other architectures.
FronthaulReport fronthaul_for(Architecture architecture, const ScenarioConfig& config);

/// Gaussian class clusters in [0, 1]^features: one prototype per class, samples are
/// prototype + N(0, noise^2) per pixel, clipped. Labels are uniform over classes.
Dataset synthetic_samples(const rmat& prototypes, std::size_t count, double noise, Rng& rng);
rmat synthetic_prototypes(std::size_t classes, std::size_t features, Rng& rng);

/// One group's learning task: per-device objectives, test set, initial model.
struct GroupTask {
    std::string kind;
    std::vector<std::shared_ptr<const LocalObjective>> objectives;  // one per member
    Dataset test;
    FnnShape shape;
    std::shared_ptr<const ConvexTask> convex;  // ridge only
    rvec initial;
    double learning_rate = 0.0;

    bool is_convex() const { return convex != nullptr; }
};

/// Raw train/test sets of an IDX task, shared by all seeds.
struct IdxSource {
    Dataset train;
    Dataset test;
};

/// Loads `<data_dir>/<task>/{train,t10k}-{images-idx3,labels-idx1}-ubyte` for every
/// IDX task in the config.
std::map<std::string, IdxSource> load_idx_sources(const ScenarioConfig& config);

std::vector<GroupTask> make_group_tasks(const ScenarioConfig& config, const GroupLayout& layout,
                                        std::uint64_t seed,
                                        const std::map<std::string, IdxSource>& sources);

}  // namespace cfota
