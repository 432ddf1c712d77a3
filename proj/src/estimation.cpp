#include "cfota/estimation.hpp"

#include "cfota/errors.hpp"

#include <cmath>
#include <map>
#include <string>

namespace cfota {

std::vector<std::size_t> PilotPlan::sharing(std::size_t k) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pilot_of_device.size(); ++i) {
        if (pilot_of_device[i] == pilot_of_device[k]) out.push_back(i);
    }
    return out;
}

PilotPlan assign_pilots(const std::vector<std::size_t>& group_of_device, std::size_t tau_p,
                        double pilot_power_w) {
    if (tau_p == 0) throw ValidationError("pilot length must be at least 1");
    if (!(pilot_power_w > 0.0)) throw ValidationError("pilot power must be positive");
    PilotPlan plan;
    plan.tau_p = tau_p;
    std::map<std::size_t, std::size_t> next_in_group;
    for (std::size_t g : group_of_device) {
        std::size_t& idx = next_in_group[g];
        if (idx >= tau_p) {
            throw PilotShortage("group " + std::to_string(g) + " has more than " +
                                std::to_string(tau_p) + " devices");
        }
        plan.pilot_of_device.push_back(idx++);
    }
    plan.pilot_power.assign(group_of_device.size(), pilot_power_w);
    return plan;
}

LinkTable<cvec> pilot_observation(const ChannelRealization& channels, const PilotPlan& plan,
                                  double noise_power, Rng& rng) {
    LinkTable<cvec> y(plan.tau_p, channels.receivers());
    const double noise_std = std::sqrt(noise_power);
    const double tau = static_cast<double>(plan.tau_p);
    for (std::size_t l = 0; l < channels.receivers(); ++l) {
        const Eigen::Index n = channels.devices() > 0 ? channels(0, l).size() : 0;
        for (std::size_t t = 0; t < plan.tau_p; ++t) {
            cvec obs(n);
            for (Eigen::Index a = 0; a < n; ++a) obs(a) = noise_std * complex_normal(rng);
            y(t, l) = obs;
        }
        for (std::size_t k = 0; k < channels.devices(); ++k) {
            y(plan.pilot_of_device[k], l) += std::sqrt(plan.pilot_power[k] * tau) * channels(k, l);
        }
    }
    return y;
}

ChannelEstimate mmse_estimate(const cvec& y, const PilotPlan& plan,
                              const CorrelationTable& correlations, std::size_t k, std::size_t l,
                              double noise_power) {
    const double tau = static_cast<double>(plan.tau_p);
    const cmat& r = correlations(k, l).matrix;
    const Eigen::Index n = r.rows();
    cmat xi = noise_power * cmat::Identity(n, n);
    for (std::size_t i : plan.sharing(k)) {
        xi += plan.pilot_power[i] * tau * correlations(i, l).matrix;
    }
    const double gain = plan.pilot_power[k] * tau;
    ChannelEstimate est;
    // Xi^{-1} R, reused for both h_hat and B (R and Xi are Hermitian).
    const cmat xi_inv_r = hermitian_solve(xi, r);
    est.h_hat = std::sqrt(gain) * xi_inv_r.adjoint() * y;
    est.B = hermitian_part(gain * r * xi_inv_r);
    est.C = hermitian_part(r - est.B);
    return est;
}

EstimateTable estimate_all(const LinkTable<cvec>& observations, const PilotPlan& plan,
                           const CorrelationTable& correlations, double noise_power) {
    EstimateTable table(correlations.devices(), correlations.receivers());
    for (std::size_t k = 0; k < correlations.devices(); ++k) {
        for (std::size_t l = 0; l < correlations.receivers(); ++l) {
            table(k, l) = mmse_estimate(observations(plan.pilot_of_device[k], l), plan,
                                        correlations, k, l, noise_power);
        }
    }
    return table;
}

EstimateTable perfect_csi(const ChannelRealization& channels, const CorrelationTable& correlations) {
    EstimateTable table(channels.devices(), channels.receivers());
    for (std::size_t k = 0; k < channels.devices(); ++k) {
        for (std::size_t l = 0; l < channels.receivers(); ++l) {
            const cmat& r = correlations(k, l).matrix;
            table(k, l) = {channels(k, l), r, cmat::Zero(r.rows(), r.cols())};
        }
    }
    return table;
}

}  // namespace cfota
