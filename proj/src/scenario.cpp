#include "cfota/scenario.hpp"

#include "cfota/errors.hpp"
#include "cfota/idx.hpp"

#include <algorithm>
#include <numbers>

namespace cfota {

namespace {

// Entity ids inside a (seed, purpose) stream family.
constexpr std::uint32_t kApSide = 0;
constexpr std::uint32_t kBsSide = 1;
constexpr std::uint32_t kPrototypeEntity = 1u << 16;
constexpr std::uint32_t kTestEntity = 2u << 16;

std::uint32_t u32(std::size_t v) { return static_cast<std::uint32_t>(v); }

std::vector<std::size_t> group_sizes(const ScenarioConfig& c) {
    return std::vector<std::size_t>(c.groups, c.devices / c.groups);
}

}  // namespace

Deployment make_deployment(const ScenarioConfig& c, std::uint64_t seed) {
    Deployment d{.area = Area(c.area_side_m)};
    d.geometry.cells = c.cells;
    d.geometry.ap_positions = place_aps_grid(c.aps, d.area);
    d.geometry.bs_positions = place_aps_grid(c.cells, d.area);

    Rng geometry_rng = make_stream(seed, 0, 0, Purpose::Geometry);
    DevicePlacement placement = place_devices(c.mode, group_sizes(c), d.area, c.cells, geometry_rng);
    d.geometry.device_positions = std::move(placement.positions);
    d.geometry.group_of_device = std::move(placement.group_of_device);
    d.layout = GroupLayout(d.geometry.group_of_device);

    d.plan = assign_pilots(d.geometry.group_of_device, c.effective_pilot_length(),
                           dbm_to_watt(c.pilot_power_dbm));
    d.noise_w = dbm_to_watt(c.noise_power_dbm);

    const LargeScaleParams params;
    const double asd = c.asd_deg * std::numbers::pi / 180.0;
    Rng ap_shadow = make_stream(seed, 0, kApSide, Purpose::Shadowing);
    d.ap_corr = build_correlations(d.geometry.device_positions, d.geometry.ap_positions,
                                   c.ap_antennas, d.area, params, asd, ap_shadow);
    if (c.has_cellular()) {
        Rng bs_shadow = make_stream(seed, 0, kBsSide, Purpose::Shadowing);
        d.bs_corr = build_correlations(d.geometry.device_positions, d.geometry.bs_positions,
                                       c.bs_antennas, d.area, params, asd, bs_shadow);
        for (std::size_t g = 0; g < c.groups; ++g) d.serving_bs.push_back(g);
    }
    return d;
}

RoundState draw_round(const Deployment& d, std::uint64_t seed, std::uint32_t round) {
    RoundState r;
    Rng ap_fading = make_stream(seed, round, kApSide, Purpose::SmallScale);
    Rng ap_pilot = make_stream(seed, round, kApSide, Purpose::PilotNoise);
    r.ap_channels = sample_channels(d.ap_corr, ap_fading);
    r.ap_estimates = estimate_all(pilot_observation(r.ap_channels, d.plan, d.noise_w, ap_pilot),
                                  d.plan, d.ap_corr, d.noise_w);
    if (d.bs_corr.devices() > 0) {
        Rng bs_fading = make_stream(seed, round, kBsSide, Purpose::SmallScale);
        Rng bs_pilot = make_stream(seed, round, kBsSide, Purpose::PilotNoise);
        r.bs_channels = sample_channels(d.bs_corr, bs_fading);
        r.bs_estimates = estimate_all(pilot_observation(r.bs_channels, d.plan, d.noise_w, bs_pilot),
                                      d.plan, d.bs_corr, d.noise_w);
    }
    return r;
}

rvec uniform_gamma(const GroupLayout& layout) {
    rvec gamma(static_cast<Eigen::Index>(layout.devices()));
    for (std::size_t k = 0; k < layout.devices(); ++k) {
        gamma(static_cast<Eigen::Index>(k)) =
            1.0 / static_cast<double>(layout.members(layout.group_of(k)).size());
    }
    return gamma;
}

rvec group_omega(const ScenarioConfig& c) {
    if (c.group_weights.empty()) return rvec::Ones(static_cast<Eigen::Index>(c.groups));
    return Eigen::Map<const rvec>(c.group_weights.data(),
                                  static_cast<Eigen::Index>(c.group_weights.size()));
}

ArchitectureResult solve_architecture(Architecture arch, bool tco, const Deployment& d,
                                      const RoundState& round,
                                      const AggregationWeights<double>& w, double power_w,
                                      const ScenarioConfig& c, const cvec* warm_start) {
    ArchitectureResult out;
    out.transceiver.architecture = arch;
    const std::size_t g_count = d.layout.groups();
    const rvec power = rvec::Constant(static_cast<Eigen::Index>(d.layout.devices()), power_w);

    const auto finish = [&](const AggregationProblem<double>& p,
                            const AggregationSolution<double>& s) {
        out.transceiver.b = s.b;
        out.transceiver.combiners = s.combiners;
        for (std::size_t g = 0; g < g_count; ++g) {
            out.group_mse.push_back(mse_level3(p, s.b, s.combiners[g], g));
        }
    };

    const auto optimize = [&](const AggregationProblem<double>& p) {
        auto s = alternating_optimize(p, c.epsilon, c.max_iters);
        if (warm_start != nullptr) {
            auto warm = alternating_optimize_from(p, *warm_start, c.epsilon, c.max_iters);
            if (warm.weighted_sum_mse() < s.weighted_sum_mse()) s = std::move(warm);
        }
        return s;
    };

    switch (arch) {
        case Architecture::Level3:
        case Architecture::Level2: {
            const auto p = centralized_problem(round.ap_estimates, d.layout, w, d.noise_w, power);
            finish(p, tco ? optimize(p) : full_power_solution(p));
            out.transceiver.ap_antennas = static_cast<Eigen::Index>(c.ap_antennas);
            break;
        }
        case Architecture::Cellular: {
            const auto p = cellular_problem(round.bs_estimates, d.serving_bs, d.layout, w,
                                            d.noise_w, power);
            finish(p, tco ? optimize(p) : full_power_solution(p));
            out.transceiver.serving_bs = d.serving_bs;
            break;
        }
        case Architecture::Level1: {
            std::vector<ReceiverView<double>> views;
            for (std::size_t l = 0; l < round.ap_estimates.receivers(); ++l) {
                views.push_back(receiver_view(round.ap_estimates, l));
            }
            const cvec b = power.array().sqrt().matrix().cast<cplx>();
            out.transceiver.b = b;
            out.transceiver.local = level1_combiners(views, d.layout, w, d.noise_w, b);
            for (std::size_t g = 0; g < g_count; ++g) {
                std::vector<cvec> u;
                for (std::size_t k = 0; k < d.layout.devices(); ++k) {
                    std::vector<cvec> per_ap;
                    for (std::size_t l = 0; l < round.ap_channels.receivers(); ++l) {
                        per_ap.push_back(round.ap_channels(k, l));
                    }
                    u.push_back(combined_channels(out.transceiver.local[g], per_ap));
                }
                out.group_mse.push_back(
                    mse_level1(b, out.transceiver.local[g], u, d.layout, w, d.noise_w, g));
            }
            break;
        }
        case Architecture::ErrorFree:
            out.group_mse.assign(g_count, 0.0);
            break;
    }
    for (std::size_t g = 0; g < g_count; ++g) {
        out.weighted_sum_mse += w.omega(static_cast<Eigen::Index>(g)) * out.group_mse[g];
    }
    return out;
}

FronthaulReport fronthaul_for(Architecture arch, const ScenarioConfig& c) {
    int level = 0;
    if (arch == Architecture::Level3) level = 3;
    if (arch == Architecture::Level2) level = 2;
    if (arch == Architecture::Level1) level = 1;
    if (level == 0) return {};
    FronthaulParams p;
    p.tau_p = static_cast<std::int64_t>(c.effective_pilot_length());
    p.tau_u = static_cast<std::int64_t>(c.data_length);
    p.antennas = static_cast<std::int64_t>(c.ap_antennas);
    p.aps = static_cast<std::int64_t>(c.aps);
    p.groups = static_cast<std::int64_t>(c.groups);
    p.devices = static_cast<std::int64_t>(c.devices);
    return fronthaul_scalars(level, p);
}

rmat synthetic_prototypes(std::size_t classes, std::size_t features, Rng& rng) {
    rmat p(static_cast<Eigen::Index>(classes), static_cast<Eigen::Index>(features));
    for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = uniform01(rng);
    return p;
}

Dataset synthetic_samples(const rmat& prototypes, std::size_t count, double noise, Rng& rng) {
    const auto classes = static_cast<int>(prototypes.rows());
    std::uniform_int_distribution<int> pick(0, classes - 1);
    Dataset out;
    out.features.resize(static_cast<Eigen::Index>(count), prototypes.cols());
    for (std::size_t i = 0; i < count; ++i) {
        const int label = pick(rng);
        out.labels.push_back(label);
        for (Eigen::Index f = 0; f < prototypes.cols(); ++f) {
            const double x = prototypes(label, f) + noise * standard_normal(rng);
            out.features(static_cast<Eigen::Index>(i), f) = std::clamp(x, 0.0, 1.0);
        }
    }
    return out;
}

std::map<std::string, IdxSource> load_idx_sources(const ScenarioConfig& c) {
    std::map<std::string, IdxSource> out;
    const std::string root = resolve_data_dir(c);
    for (std::size_t g = 0; g < c.groups; ++g) {
        const std::string task = c.task_of_group(g);
        if (task == "synthetic" || task == "ridge" || out.contains(task)) continue;
        std::optional<LabelFilter> filter;
        if (task == "emnist-aj") filter = emnist_a_to_j();
        const std::string dir = root + "/" + task + "/";
        IdxSource src;
        src.train = load_idx_dataset(dir + "train-images-idx3-ubyte", dir + "train-labels-idx1-ubyte", filter);
        src.test = load_idx_dataset(dir + "t10k-images-idx3-ubyte", dir + "t10k-labels-idx1-ubyte", filter);
        out.emplace(task, std::move(src));
    }
    return out;
}

std::vector<GroupTask> make_group_tasks(const ScenarioConfig& c, const GroupLayout& layout,
                                        std::uint64_t seed,
                                        const std::map<std::string, IdxSource>& sources) {
    std::vector<GroupTask> tasks;
    for (std::size_t g = 0; g < layout.groups(); ++g) {
        GroupTask t;
        t.kind = c.task_of_group(g);
        const auto& members = layout.members(g);
        Rng init_rng = make_stream(seed, 0, u32(g), Purpose::ModelInit);

        if (t.kind == "ridge") {
            const auto d = static_cast<Eigen::Index>(c.ridge_features);
            Rng truth_rng = make_stream(seed, 0, kPrototypeEntity + u32(g), Purpose::Dataset);
            rvec truth(d);
            for (Eigen::Index i = 0; i < d; ++i) truth(i) = standard_normal(truth_rng);
            std::vector<RidgeObjective> locals;
            for (std::size_t k : members) {
                Rng rng = make_stream(seed, 0, u32(k), Purpose::Dataset);
                const auto n = static_cast<Eigen::Index>(c.samples_per_device);
                rmat x(n, d);
                for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = standard_normal(rng);
                rvec y = x * truth;
                for (Eigen::Index i = 0; i < n; ++i) y(i) += 0.1 * standard_normal(rng);
                locals.emplace_back(std::move(x), std::move(y), c.ridge_lambda);
            }
            auto convex = std::make_shared<const ConvexTask>(
                std::move(locals), std::vector<double>(members.size(), 1.0 / static_cast<double>(members.size())));
            for (const auto& obj : convex->locals()) {
                t.objectives.emplace_back(convex, &obj);
            }
            t.convex = convex;
            t.learning_rate = 1.0 / convex->chi();
            t.initial.resize(d);
            for (Eigen::Index i = 0; i < d; ++i) t.initial(i) = standard_normal(init_rng);
            tasks.push_back(std::move(t));
            continue;
        }

        std::vector<Dataset> device_data;
        if (t.kind == "synthetic") {
            Rng proto_rng = make_stream(seed, 0, kPrototypeEntity + u32(g), Purpose::Dataset);
            const rmat prototypes = synthetic_prototypes(10, 784, proto_rng);
            for (std::size_t k : members) {
                Rng rng = make_stream(seed, 0, u32(k), Purpose::Dataset);
                device_data.push_back(synthetic_samples(prototypes, c.samples_per_device, c.synthetic_noise, rng));
            }
            Rng test_rng = make_stream(seed, 0, kTestEntity + u32(g), Purpose::Dataset);
            t.test = synthetic_samples(prototypes, c.test_samples, c.synthetic_noise, test_rng);
        } else {
            const IdxSource& src = sources.at(t.kind);
            Rng split = make_stream(seed, 0, u32(g), Purpose::DataSplit);
            std::vector<Eigen::Index> order(static_cast<std::size_t>(src.train.size()));
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
            std::shuffle(order.begin(), order.end(), split);
            if (order.size() < members.size() * c.samples_per_device) {
                throw ValidationError("not enough training samples for task '" + t.kind + "'");
            }
            for (std::size_t m = 0; m < members.size(); ++m) {
                const auto first = order.begin() + static_cast<std::ptrdiff_t>(m * c.samples_per_device);
                device_data.push_back(src.train.subset({first, first + static_cast<std::ptrdiff_t>(c.samples_per_device)}));
            }
            std::vector<Eigen::Index> test_rows;
            for (Eigen::Index i = 0; i < std::min<Eigen::Index>(src.test.size(), static_cast<Eigen::Index>(c.test_samples)); ++i) {
                test_rows.push_back(i);
            }
            t.test = src.test.subset(test_rows);
        }
        t.shape = FnnShape{device_data.front().features.cols(),
                           static_cast<Eigen::Index>(c.hidden_units), 10};
        for (auto& data : device_data) {
            t.objectives.push_back(std::make_shared<const FnnObjective>(t.shape, std::move(data)));
        }
        t.learning_rate = c.learning_rate;
        t.initial = fnn_init(t.shape, init_rng);
        tasks.push_back(std::move(t));
    }
    return tasks;
}

}  // namespace cfota
