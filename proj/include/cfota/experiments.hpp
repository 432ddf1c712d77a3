#pragma once

#include "cfota/config.hpp"
#include "cfota/csv.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace cfota {

/// Runs work(i) for i in [0, count) on up to `threads` workers and returns the
/// results in index order.
std::vector<std::vector<ResultRow>> run_indexed(
    std::size_t count, std::size_t threads,
    const std::function<std::vector<ResultRow>(std::size_t)>& work);

/// Seed i of a run is base_seed + i.
std::uint64_t seed_of(const ScenarioConfig& config, std::size_t index);

/// MSE at the first training round using the initial models, for every P_max in the
/// grid and every seed. TCO-capable architectures (levels 2 and 3, cellular) emit an
/// optimized row and a "<name>_notco" full-power row when config.tco is set, and only
/// the full-power row (under the plain name) otherwise. Along an ascending grid the
/// optimized rows also try a warm start from the previous point's coefficients.
std::vector<ResultRow> run_mse_sweep(const ScenarioConfig& config);

/// FL training with per-round channel resampling, estimation, transceiver design,
/// over-the-air aggregation and test evaluation. Emits the initial row (round 0) and
/// one row per round, per seed and architecture. Convex (ridge) groups report the
/// optimality gap and the convergence bound driven by the realized aggregation errors.
std::vector<ResultRow> run_fl_training(const ScenarioConfig& config);

}  // namespace cfota
