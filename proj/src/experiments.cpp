#include "cfota/experiments.hpp"

#include "cfota/scenario.hpp"

#include <atomic>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

namespace cfota {

namespace {

bool has_tco(Architecture a) {
    return a == Architecture::Level3 || a == Architecture::Level2 || a == Architecture::Cellular;
}

std::string row_name(Architecture a, bool tco_variant, bool config_tco) {
    std::string name(to_string(a));
    if (has_tco(a) && config_tco && !tco_variant) name += "_notco";
    return name;
}

AggregationWeights<double> weights_for(const std::vector<rvec>& locals, const GroupLayout& layout,
                                       const ScenarioConfig& c) {
    std::vector<NormalizationStats> stats;
    for (const auto& theta : locals) stats.push_back(normalize(theta).stats);
    return round_weights(stats, uniform_gamma(layout), group_omega(c));
}

// Index of device k among the members of its group.
std::vector<std::size_t> member_index(const GroupLayout& layout) {
    std::vector<std::size_t> out(layout.devices());
    for (std::size_t g = 0; g < layout.groups(); ++g) {
        const auto& m = layout.members(g);
        for (std::size_t i = 0; i < m.size(); ++i) out[m[i]] = i;
    }
    return out;
}

}  // namespace

std::vector<std::vector<ResultRow>> run_indexed(
    std::size_t count, std::size_t threads,
    const std::function<std::vector<ResultRow>(std::size_t)>& work) {
    std::vector<std::vector<ResultRow>> results(count);
    const std::size_t workers = std::max<std::size_t>(1, std::min(threads, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = work(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    results[i] = work(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return results;
}

std::uint64_t seed_of(const ScenarioConfig& config, std::size_t index) {
    return config.base_seed + index;
}

std::vector<ResultRow> run_mse_sweep(const ScenarioConfig& c) {
    c.validate();
    const auto sources = load_idx_sources(c);
    const auto per_seed = run_indexed(c.seeds, c.threads, [&](std::size_t index) {
        const std::uint64_t seed = seed_of(c, index);
        const Deployment d = make_deployment(c, seed);
        const RoundState round = draw_round(d, seed, 0);
        const auto tasks = make_group_tasks(c, d.layout, seed, sources);
        std::vector<rvec> locals;
        for (std::size_t k = 0; k < d.layout.devices(); ++k) {
            locals.push_back(tasks[d.layout.group_of(k)].initial);
        }
        const auto w = weights_for(locals, d.layout, c);

        std::vector<ResultRow> rows;
        // Optimized coefficients of the previous grid point; feasible again when P grows.
        std::map<Architecture, cvec> previous;
        double previous_dbm = -std::numeric_limits<double>::infinity();
        for (double p_dbm : c.power_grid_dbm) {
            if (p_dbm < previous_dbm) previous.clear();
            previous_dbm = p_dbm;
            for (Architecture arch : c.architectures) {
                std::vector<bool> variants = {false};
                if (has_tco(arch) && c.tco) variants = {true, false};
                for (bool tco : variants) {
                    const auto warm = previous.find(arch);
                    const cvec* start = tco && warm != previous.end() ? &warm->second : nullptr;
                    const auto r = solve_architecture(arch, tco, d, round, w, dbm_to_watt(p_dbm), c, start);
                    if (tco) previous[arch] = r.transceiver.b;
                    ResultRow row;
                    row.scenario = c.scenario;
                    row.architecture = row_name(arch, tco, c.tco);
                    row.seed = seed;
                    row.num_seeds = c.seeds;
                    row.point_kind = "p_max_dbm";
                    row.point = p_dbm;
                    row.group_mse = r.group_mse;
                    row.weighted_sum_mse = r.weighted_sum_mse;
                    row.fronthaul = fronthaul_for(arch, c);
                    rows.push_back(std::move(row));
                }
            }
        }
        return rows;
    });
    std::vector<ResultRow> out;
    for (const auto& rows : per_seed) out.insert(out.end(), rows.begin(), rows.end());
    return out;
}

std::vector<ResultRow> run_fl_training(const ScenarioConfig& c) {
    c.validate();
    const auto sources = load_idx_sources(c);
    const double p_w = dbm_to_watt(c.p_max_dbm);

    const auto per_seed = run_indexed(c.seeds, c.threads, [&](std::size_t index) {
        const std::uint64_t seed = seed_of(c, index);
        const Deployment d = make_deployment(c, seed);
        const auto tasks = make_group_tasks(c, d.layout, seed, sources);
        const GroupLayout& layout = d.layout;
        const std::size_t g_count = layout.groups();
        const auto member = member_index(layout);
        const rvec gamma = uniform_gamma(layout);
        const bool any_convex = std::any_of(tasks.begin(), tasks.end(),
                                            [](const GroupTask& t) { return t.is_convex(); });
        const bool any_classifier = std::any_of(tasks.begin(), tasks.end(),
                                                [](const GroupTask& t) { return !t.is_convex(); });
        constexpr double kNa = std::numeric_limits<double>::quiet_NaN();

        struct Track {
            Architecture arch;
            std::vector<rvec> theta;                 // per group
            std::vector<std::vector<double>> errors;  // per group, per round
        };
        std::vector<Track> tracks;
        for (Architecture a : c.architectures) {
            Track t{a, {}, std::vector<std::vector<double>>(g_count)};
            for (const auto& task : tasks) t.theta.push_back(task.initial);
            tracks.push_back(std::move(t));
        }

        std::vector<ResultRow> rows;
        const auto emit = [&](const Track& track, std::size_t round, const std::vector<double>& mse,
                              double weighted, const std::vector<double>& error) {
            ResultRow row;
            row.scenario = c.scenario;
            row.architecture = std::string(to_string(track.arch));
            row.seed = seed;
            row.num_seeds = c.seeds;
            row.point_kind = "round";
            row.point = static_cast<double>(round);
            row.group_mse = mse;
            row.weighted_sum_mse = weighted;
            row.group_error = error;
            for (std::size_t g = 0; g < g_count; ++g) {
                const auto& task = tasks[g];
                if (any_classifier) {
                    row.group_accuracy.push_back(
                        task.is_convex() ? kNa : fnn_accuracy(track.theta[g], task.shape, task.test));
                }
                if (any_convex) {
                    if (task.is_convex()) {
                        const auto& cv = *task.convex;
                        row.group_gap.push_back(cv.gap(track.theta[g]));
                        row.group_bound.push_back(theorem1_bound(
                            cv.chi(), cv.xi(), cv.gap(task.initial), track.errors[g]));
                    } else {
                        row.group_gap.push_back(kNa);
                        row.group_bound.push_back(kNa);
                    }
                }
            }
            row.fronthaul = fronthaul_for(track.arch, c);
            rows.push_back(std::move(row));
        };

        for (const auto& track : tracks) emit(track, 0, {}, 0.0, {});

        const bool needs_channels = std::any_of(tracks.begin(), tracks.end(), [](const Track& t) {
            return t.arch != Architecture::ErrorFree;
        });
        for (std::size_t t = 1; t <= c.rounds; ++t) {
            RoundState round;
            if (needs_channels) round = draw_round(d, seed, static_cast<std::uint32_t>(t));
            for (auto& track : tracks) {
                std::vector<rvec> locals;
                for (std::size_t k = 0; k < layout.devices(); ++k) {
                    const std::size_t g = layout.group_of(k);
                    locals.push_back(local_update(track.theta[g], *tasks[g].objectives[member[k]],
                                                  tasks[g].learning_rate));
                }
                ArchitectureResult solved;
                solved.transceiver.architecture = Architecture::ErrorFree;
                solved.group_mse.assign(g_count, 0.0);
                if (track.arch != Architecture::ErrorFree) {
                    solved = solve_architecture(track.arch, c.tco, d, round,
                                                weights_for(locals, layout, c), p_w, c);
                }
                Rng noise = make_stream(seed, static_cast<std::uint32_t>(t),
                                        static_cast<std::uint32_t>(track.arch), Purpose::DataNoise);
                const auto& channels =
                    track.arch == Architecture::Cellular ? round.bs_channels : round.ap_channels;
                const OtaOutcome outcome =
                    ota_round(locals, layout, gamma, solved.transceiver, channels, d.noise_w, noise);
                track.theta = outcome.recovered;
                for (std::size_t g = 0; g < g_count; ++g) track.errors[g].push_back(outcome.error_sq[g]);
                emit(track, t, solved.group_mse, solved.weighted_sum_mse, outcome.error_sq);
            }
        }
        return rows;
    });
    std::vector<ResultRow> out;
    for (const auto& rows : per_seed) out.insert(out.end(), rows.begin(), rows.end());
    return out;
}

}  // namespace cfota
