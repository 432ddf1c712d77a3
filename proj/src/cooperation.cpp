#include "cfota/cooperation.hpp"

namespace cfota {

ReceiverView<double> stacked_view(const EstimateTable& estimates) {
    ReceiverView<double> view;
    const std::size_t aps = estimates.receivers();
    for (std::size_t k = 0; k < estimates.devices(); ++k) {
        Eigen::Index n = 0;
        for (std::size_t l = 0; l < aps; ++l) n += estimates(k, l).h_hat.size();
        cvec h(n);
        cmat c = cmat::Zero(n, n);
        Eigen::Index at = 0;
        for (std::size_t l = 0; l < aps; ++l) {
            const auto& e = estimates(k, l);
            const Eigen::Index m = e.h_hat.size();
            h.segment(at, m) = e.h_hat;
            c.block(at, at, m, m) = e.C;
            at += m;
        }
        view.h_hat.push_back(std::move(h));
        view.err_cov.push_back(std::move(c));
    }
    return view;
}

ReceiverView<double> receiver_view(const EstimateTable& estimates, std::size_t l) {
    ReceiverView<double> view;
    for (std::size_t k = 0; k < estimates.devices(); ++k) {
        view.h_hat.push_back(estimates(k, l).h_hat);
        view.err_cov.push_back(estimates(k, l).C);
    }
    return view;
}

cvec stacked_channel(const ChannelRealization& channels, std::size_t k) {
    Eigen::Index n = 0;
    for (std::size_t l = 0; l < channels.receivers(); ++l) n += channels(k, l).size();
    cvec h(n);
    Eigen::Index at = 0;
    for (std::size_t l = 0; l < channels.receivers(); ++l) {
        h.segment(at, channels(k, l).size()) = channels(k, l);
        at += channels(k, l).size();
    }
    return h;
}

AggregationProblem<double> centralized_problem(const EstimateTable& estimates,
                                               const GroupLayout& layout,
                                               const AggregationWeights<double>& weights,
                                               double noise_power, const rvec& power_limit) {
    AggregationProblem<double> p;
    p.views.push_back(stacked_view(estimates));
    p.view_of_group.assign(layout.groups(), 0);
    p.layout = layout;
    p.weights = weights;
    p.noise_power = noise_power;
    p.power_limit = power_limit;
    p.validate();
    return p;
}

AggregationProblem<double> cellular_problem(const EstimateTable& bs_estimates,
                                            const std::vector<std::size_t>& serving_bs,
                                            const GroupLayout& layout,
                                            const AggregationWeights<double>& weights,
                                            double noise_power, const rvec& power_limit) {
    if (serving_bs.size() != layout.groups()) {
        throw ShapeMismatch("one serving BS per group required");
    }
    AggregationProblem<double> p;
    for (std::size_t bs = 0; bs < bs_estimates.receivers(); ++bs) {
        p.views.push_back(receiver_view(bs_estimates, bs));
    }
    for (std::size_t bs : serving_bs) {
        if (bs >= bs_estimates.receivers()) throw ShapeMismatch("serving BS out of range");
    }
    p.view_of_group = serving_bs;
    p.layout = layout;
    p.weights = weights;
    p.noise_power = noise_power;
    p.power_limit = power_limit;
    p.validate();
    return p;
}

}  // namespace cfota
