#pragma once

#include "cfota/ota.hpp"
#include "cfota/topology.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cfota {

/// Scenario configuration. Text format: one `key = value` per line, `#` starts a
/// comment, lists are comma separated. See README for the full key list.
struct ScenarioConfig {
    std::string scenario = "default";
    std::vector<Architecture> architectures = {Architecture::Level3, Architecture::Level1,
                                               Architecture::Cellular, Architecture::ErrorFree};

    std::size_t aps = 4;          // L
    std::size_t ap_antennas = 2;  // N
    std::size_t bs_antennas = 2;  // M
    std::size_t cells = 4;
    std::size_t devices = 6;      // K
    std::size_t groups = 2;       // G
    std::size_t pilot_length = 0;  // tau_p; 0 means K / G
    std::size_t data_length = 50;  // tau_u
    DistributionMode mode = DistributionMode::Mode1;
    double area_side_m = 500.0;
    double asd_deg = 15.0;

    double p_max_dbm = 20.0;
    double pilot_power_dbm = 20.0;
    double noise_power_dbm = -96.0;
    std::vector<double> group_weights;  // omega; empty means all ones
    double epsilon = 1e-10;
    std::size_t max_iters = 500;
    bool tco = true;

    std::vector<std::string> tasks;  // per group: synthetic | ridge | mnist | fashion-mnist | emnist-aj
    std::size_t rounds = 50;
    std::size_t seeds = 10;
    std::uint64_t base_seed = 1;
    double learning_rate = 0.005;
    std::size_t hidden_units = 60;
    std::size_t samples_per_device = 500;
    std::size_t test_samples = 1000;
    double synthetic_noise = 0.35;  // per-pixel noise std of the synthetic clusters
    std::size_t ridge_features = 20;
    double ridge_lambda = 0.1;

    std::vector<double> power_grid_dbm = {-10, -5, 0, 5, 10, 15, 20, 25, 30, 35, 40};
    std::string data_dir;  // IDX datasets; falls back to $CFOTA_DATA_DIR
    std::string output = "results.csv";
    std::size_t threads = 1;

    std::size_t effective_pilot_length() const {
        return pilot_length == 0 ? devices / groups : pilot_length;
    }
    std::string task_of_group(std::size_t g) const { return tasks.empty() ? "synthetic" : tasks[g]; }
    bool has_cellfree() const;
    bool has_cellular() const;

    /// Throws ValidationError naming the violated invariant.
    void validate() const;
};

/// Sets one key from its textual value. Throws ValidationError for unknown keys
/// or malformed values.
void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value);

/// Parses and validates config text. Throws ParseError (with line number) or ValidationError.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);

/// Data directory: config value, else $CFOTA_DATA_DIR, else "data".
std::string resolve_data_dir(const ScenarioConfig& config);

}  // namespace cfota
