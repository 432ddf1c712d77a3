// cfota: command-line front end for the cell-free over-the-air FL simulator.

#include "cfota/accounting.hpp"
#include "cfota/config.hpp"
#include "cfota/csv.hpp"
#include "cfota/errors.hpp"
#include "cfota/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> threads;
    std::vector<std::string> overrides;  // key=value
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("-c,--config", o.config_path, "scenario config file");
    cmd->add_option("--seed", o.seed, "base seed");
    cmd->add_option("-o,--out", o.out, "output CSV path");
    cmd->add_option("--threads", o.threads, "worker threads");
    cmd->add_option("-s,--set", o.overrides, "override a config key (key=value)");
}

cfota::ScenarioConfig resolve(const CommonOptions& o) {
    cfota::ScenarioConfig c = o.config_path.empty() ? cfota::ScenarioConfig{} : cfota::load_config(o.config_path);
    for (const auto& kv : o.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw cfota::ValidationError("override '" + kv + "' is not key=value");
        cfota::apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (o.seed) c.base_seed = *o.seed;
    if (o.out) c.output = *o.out;
    if (o.threads) c.threads = *o.threads;
    c.validate();
    return c;
}

void print_fronthaul(const cfota::ScenarioConfig& c, std::int64_t rounds_per_block) {
    cfota::FronthaulParams p;
    p.tau_p = static_cast<std::int64_t>(c.effective_pilot_length());
    p.tau_u = static_cast<std::int64_t>(c.data_length);
    p.antennas = static_cast<std::int64_t>(c.ap_antennas);
    p.aps = static_cast<std::int64_t>(c.aps);
    p.groups = static_cast<std::int64_t>(c.groups);
    p.devices = static_cast<std::int64_t>(c.devices);
    std::cout << "level,pilot_data,combiners,statistics\n";
    for (int level : {3, 2, 1}) {
        const auto r = cfota::fronthaul_scalars(level, p);
        std::cout << level << ',' << r.pilot_data << ',' << r.combiners << ','
                  << cfota::format_real(r.statistics()) << '\n';
    }
    std::cout << "cheaper_level(C=" << rounds_per_block << "),"
              << cfota::to_string(cfota::cheaper_level(p.tau_u, p.antennas, p.groups, rounds_per_block))
              << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cell-free massive MIMO over-the-air federated learning simulator"};
    app.require_subcommand(1);

    CommonOptions sweep_opts, train_opts, fronthaul_opts, validate_opts;
    std::int64_t rounds_per_block = 1;
    auto* sweep = app.add_subcommand("mse-sweep", "aggregation MSE over the P_max grid");
    add_common(sweep, sweep_opts);
    auto* train = app.add_subcommand("train", "federated training");
    add_common(train, train_opts);
    auto* fronthaul = app.add_subcommand("fronthaul", "fronthaul signaling counts");
    add_common(fronthaul, fronthaul_opts);
    fronthaul->add_option("--rounds-per-block", rounds_per_block, "training rounds per coherence block");
    auto* validate = app.add_subcommand("validate-config", "parse and validate a config");
    add_common(validate, validate_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep) {
            const auto c = resolve(sweep_opts);
            cfota::emit_csv(cfota::run_mse_sweep(c), c.output);
            std::cerr << "wrote " << c.output << '\n';
        } else if (*train) {
            const auto c = resolve(train_opts);
            cfota::emit_csv(cfota::run_fl_training(c), c.output);
            std::cerr << "wrote " << c.output << '\n';
        } else if (*fronthaul) {
            print_fronthaul(resolve(fronthaul_opts), rounds_per_block);
        } else if (*validate) {
            resolve(validate_opts);
            std::cout << "ok\n";
        }
    } catch (const cfota::Error& e) {
        std::cerr << e.kind() << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "Error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
