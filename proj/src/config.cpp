#include "cfota/config.hpp"

#include "cfota/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cfota {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        const auto item = trim(s.substr(0, comma));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ValidationError("invalid value '" + std::string(text) + "' for " + std::string(key));
    }
    return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ValidationError("invalid boolean '" + std::string(text) + "' for " + std::string(key));
}

bool is_perfect_square(std::size_t n) {
    const auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    return n > 0 && r * r == n;
}

}  // namespace

bool ScenarioConfig::has_cellfree() const {
    return std::any_of(architectures.begin(), architectures.end(), [](Architecture a) {
        return a == Architecture::Level1 || a == Architecture::Level2 || a == Architecture::Level3;
    });
}

bool ScenarioConfig::has_cellular() const {
    return std::find(architectures.begin(), architectures.end(), Architecture::Cellular) !=
           architectures.end();
}

void ScenarioConfig::validate() const {
    const auto fail = [](const std::string& what) { throw ValidationError(what); };
    if (architectures.empty()) fail("at least one architecture is required");
    if (devices == 0 || groups == 0) fail("devices and groups must be positive");
    if (devices % groups != 0) fail("devices (K) must be divisible by groups (G)");
    if (!is_perfect_square(aps)) fail("aps (L) must be a perfect square");
    if (!is_perfect_square(cells)) fail("cells must be a perfect square");
    if (ap_antennas == 0 || bs_antennas == 0) fail("antenna counts must be positive");
    if (has_cellfree() && has_cellular() && aps * ap_antennas != cells * bs_antennas) {
        fail("total cell-free antennas L*N must equal cells*M");
    }
    if (effective_pilot_length() < devices / groups) fail("pilot_length must be at least K/G");
    if (data_length == 0) fail("data_length must be positive");
    if (mode == DistributionMode::Mode1 && groups > cells) fail("Mode 1 needs a cell per group");
    if (has_cellular() && groups > cells) fail("cellular needs a serving BS per group");
    if (!group_weights.empty()) {
        if (group_weights.size() != groups) fail("group_weights needs one entry per group");
        for (double w : group_weights) {
            if (!(w > 0.0)) fail("group_weights must be positive");
        }
    }
    if (!tasks.empty() && tasks.size() != groups) fail("tasks needs one entry per group");
    for (const auto& t : tasks) {
        if (t != "synthetic" && t != "ridge" && t != "mnist" && t != "fashion-mnist" &&
            t != "emnist-aj") {
            fail("unknown task '" + t + "'");
        }
    }
    if (!(epsilon >= 0.0)) fail("epsilon must be non-negative");
    if (max_iters == 0) fail("max_iters must be positive");
    if (seeds == 0) fail("seeds must be positive");
    if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
    if (hidden_units == 0 || samples_per_device == 0) fail("hidden_units and samples_per_device must be positive");
    if (!(area_side_m > 0.0)) fail("area_side_m must be positive");
    if (power_grid_dbm.empty()) fail("power_grid_dbm must not be empty");
    if (threads == 0) fail("threads must be positive");
}

void apply_setting(ScenarioConfig& c, std::string_view key, std::string_view raw) {
    const std::string_view v = trim(raw);
    const auto size = [&] { return parse_number<std::size_t>(key, v); };
    const auto real = [&] { return parse_number<double>(key, v); };

    if (key == "scenario") c.scenario = std::string(v);
    else if (key == "architectures") {
        c.architectures.clear();
        for (auto item : split_list(v)) c.architectures.push_back(parse_architecture(item));
    }
    else if (key == "aps") c.aps = size();
    else if (key == "ap_antennas") c.ap_antennas = size();
    else if (key == "bs_antennas") c.bs_antennas = size();
    else if (key == "cells") c.cells = size();
    else if (key == "devices") c.devices = size();
    else if (key == "groups") c.groups = size();
    else if (key == "pilot_length") c.pilot_length = size();
    else if (key == "data_length") c.data_length = size();
    else if (key == "distribution_mode") {
        const auto m = size();
        if (m != 1 && m != 2) throw ValidationError("distribution_mode must be 1 or 2");
        c.mode = m == 1 ? DistributionMode::Mode1 : DistributionMode::Mode2;
    }
    else if (key == "area_side_m") c.area_side_m = real();
    else if (key == "asd_deg") c.asd_deg = real();
    else if (key == "p_max_dbm") c.p_max_dbm = real();
    else if (key == "pilot_power_dbm") c.pilot_power_dbm = real();
    else if (key == "noise_power_dbm") c.noise_power_dbm = real();
    else if (key == "group_weights") {
        c.group_weights.clear();
        for (auto item : split_list(v)) c.group_weights.push_back(parse_number<double>(key, item));
    }
    else if (key == "epsilon") c.epsilon = real();
    else if (key == "max_iters") c.max_iters = size();
    else if (key == "tco") c.tco = parse_bool(key, v);
    else if (key == "tasks") {
        c.tasks.clear();
        for (auto item : split_list(v)) c.tasks.emplace_back(item);
    }
    else if (key == "rounds") c.rounds = size();
    else if (key == "seeds") c.seeds = size();
    else if (key == "seed") c.base_seed = parse_number<std::uint64_t>(key, v);
    else if (key == "learning_rate") c.learning_rate = real();
    else if (key == "hidden_units") c.hidden_units = size();
    else if (key == "samples_per_device") c.samples_per_device = size();
    else if (key == "test_samples") c.test_samples = size();
    else if (key == "synthetic_noise") c.synthetic_noise = real();
    else if (key == "ridge_features") c.ridge_features = size();
    else if (key == "ridge_lambda") c.ridge_lambda = real();
    else if (key == "power_grid_dbm") {
        c.power_grid_dbm.clear();
        for (auto item : split_list(v)) c.power_grid_dbm.push_back(parse_number<double>(key, item));
    }
    else if (key == "data_dir") c.data_dir = std::string(v);
    else if (key == "output") c.output = std::string(v);
    else if (key == "threads") c.threads = size();
    else throw ValidationError("unknown key '" + std::string(key) + "'");
}

ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig config;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const auto key = trim(view.substr(0, eq));
        if (key.empty()) throw ParseError(line_no, "missing key");
        try {
            apply_setting(config, key, view.substr(eq + 1));
        } catch (const ValidationError& e) {
            throw ParseError(line_no, e.what());
        }
    }
    config.validate();
    return config;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string resolve_data_dir(const ScenarioConfig& config) {
    if (!config.data_dir.empty()) return config.data_dir;
    if (const char* env = std::getenv("CFOTA_DATA_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return "data";
}

}  // namespace cfota
