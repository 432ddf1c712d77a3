#include "cfota/ota.hpp"

#include "cfota/cooperation.hpp"
#include "cfota/errors.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace cfota {

namespace {

constexpr Eigen::Index kSlotBlock = 2048;

cmat stacked_channels(const ChannelRealization& channels, std::size_t receiver_or_all,
                      bool all) {
    const std::size_t k_count = channels.devices();
    std::vector<cvec> cols;
    for (std::size_t k = 0; k < k_count; ++k) {
        cols.push_back(all ? stacked_channel(channels, k) : channels(k, receiver_or_all));
    }
    const Eigen::Index n = cols.empty() ? 0 : cols.front().size();
    cmat h(n, static_cast<Eigen::Index>(k_count));
    for (std::size_t k = 0; k < k_count; ++k) h.col(static_cast<Eigen::Index>(k)) = cols[k];
    return h;
}

cmat noise_matrix(Eigen::Index rows, Eigen::Index cols, double noise_power, Rng& rng) {
    const double scale = std::sqrt(noise_power);
    cmat n(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) n(r, c) = scale * complex_normal(rng);
    }
    return n;
}

}  // namespace

std::string_view to_string(Architecture a) {
    switch (a) {
        case Architecture::Level3: return "level3";
        case Architecture::Level2: return "level2";
        case Architecture::Level1: return "level1";
        case Architecture::Cellular: return "cellular";
        case Architecture::ErrorFree: return "errorfree";
    }
    return "unknown";
}

Architecture parse_architecture(std::string_view name) {
    for (auto a : {Architecture::Level3, Architecture::Level2, Architecture::Level1,
                   Architecture::Cellular, Architecture::ErrorFree}) {
        if (to_string(a) == name) return a;
    }
    throw ValidationError("unknown architecture '" + std::string(name) + "'");
}

AggregationWeights<double> round_weights(const std::vector<NormalizationStats>& stats,
                                         const rvec& gamma, const rvec& omega) {
    AggregationWeights<double> w;
    w.gamma = gamma;
    w.omega = omega;
    w.nu.resize(static_cast<Eigen::Index>(stats.size()));
    w.theta_bar.resize(static_cast<Eigen::Index>(stats.size()));
    for (std::size_t k = 0; k < stats.size(); ++k) {
        w.nu(static_cast<Eigen::Index>(k)) = stats[k].std;
        w.theta_bar(static_cast<Eigen::Index>(k)) = stats[k].mean;
    }
    return w;
}

OtaOutcome ota_round(const std::vector<rvec>& locals, const GroupLayout& layout, const rvec& gamma,
                     const OtaTransceiver& tx, const ChannelRealization& channels,
                     double noise_power, Rng& noise_rng) {
    const std::size_t k_count = layout.devices();
    const std::size_t g_count = layout.groups();
    if (locals.size() != k_count || gamma.size() != static_cast<Eigen::Index>(k_count)) {
        throw ShapeMismatch("one local model and one weight per device required");
    }
    // Groups may train models of different sizes; a device is silent once its
    // parameters are exhausted.
    std::vector<Eigen::Index> length(g_count, -1);
    Eigen::Index dim = 0;
    for (std::size_t k = 0; k < k_count; ++k) {
        auto& len = length[layout.group_of(k)];
        if (len >= 0 && locals[k].size() != len) {
            throw ShapeMismatch("local models of one group must have the same length");
        }
        len = locals[k].size();
        dim = std::max(dim, len);
    }

    OtaOutcome out;
    for (std::size_t g = 0; g < g_count; ++g) {
        std::vector<rvec> members;
        std::vector<double> weights;
        for (std::size_t k : layout.members(g)) {
            members.push_back(locals[k]);
            weights.push_back(gamma(static_cast<Eigen::Index>(k)));
        }
        out.desired.push_back(desired_global(members, weights));
    }

    if (tx.architecture == Architecture::ErrorFree) {
        out.recovered = out.desired;
        out.error_sq.assign(g_count, 0.0);
        out.complex_error_sq.assign(g_count, 0.0);
        return out;
    }

    rmat s = rmat::Zero(static_cast<Eigen::Index>(k_count), dim);
    for (std::size_t k = 0; k < k_count; ++k) {
        NormalizedParams n = normalize(locals[k]);
        s.row(static_cast<Eigen::Index>(k)).head(n.s.size()) = n.s.transpose();
        out.stats.push_back(n.stats);
    }
    const rvec omega_unused = rvec::Ones(static_cast<Eigen::Index>(g_count));
    const AggregationWeights<double> w = round_weights(out.stats, gamma, omega_unused);

    if (tx.b.size() != static_cast<Eigen::Index>(k_count)) {
        throw ShapeMismatch("transmit coefficients do not match the device count");
    }

    // Receivers whose data is needed, with their channel matrices (n x K).
    std::map<std::size_t, cmat> receivers;
    if (tx.architecture == Architecture::Cellular) {
        for (std::size_t bs : tx.serving_bs) {
            if (!receivers.contains(bs)) receivers.emplace(bs, stacked_channels(channels, bs, false));
        }
    } else {
        receivers.emplace(0, stacked_channels(channels, 0, true));
    }
    std::map<std::size_t, cmat> effective;  // H diag(b)
    for (const auto& [id, h] : receivers) effective.emplace(id, h * tx.b.asDiagonal());

    std::vector<double> offsets;
    for (std::size_t g = 0; g < g_count; ++g) offsets.push_back(mean_offset(w, layout, g));

    for (std::size_t g = 0; g < g_count; ++g) out.recovered.emplace_back(length[g]);
    out.error_sq.assign(g_count, 0.0);
    out.complex_error_sq.assign(g_count, 0.0);

    for (Eigen::Index start = 0; start < dim; start += kSlotBlock) {
        const Eigen::Index cols = std::min(kSlotBlock, dim - start);
        const cmat symbols = s.middleCols(start, cols).cast<cplx>();
        std::map<std::size_t, cmat> received;
        for (const auto& [id, hb] : effective) {
            received.emplace(id, hb * symbols + noise_matrix(hb.rows(), cols, noise_power, noise_rng));
        }
        for (std::size_t g = 0; g < g_count; ++g) {
            if (length[g] <= start) continue;
            cvec est;
            switch (tx.architecture) {
                case Architecture::Level3:
                    est = recover_level3(tx.combiners[g], received.at(0), offsets[g]);
                    break;
                case Architecture::Level2:
                    est = recover_level2(tx.combiners[g], received.at(0), tx.ap_antennas, offsets[g]);
                    break;
                case Architecture::Level1:
                    est = recover_level1(tx.local[g], received.at(0), offsets[g]);
                    break;
                case Architecture::Cellular:
                    est = recover_level3(tx.combiners[g], received.at(tx.serving_bs[g]), offsets[g]);
                    break;
                case Architecture::ErrorFree:
                    break;
            }
            const Eigen::Index used = std::min(cols, length[g] - start);
            est.conservativeResize(used);
            const auto target = out.desired[g].segment(start, used);
            out.recovered[g].segment(start, used) = est.real();
            out.error_sq[g] += (target - est.real()).squaredNorm();
            out.complex_error_sq[g] += (target.cast<cplx>() - est).squaredNorm();
        }
    }
    return out;
}

}  // namespace cfota
