#include "cfota/channel.hpp"

#include "cfota/errors.hpp"

#include <cmath>

namespace cfota {

SpatialCorrelation make_correlation(const cmat& matrix) {
    SpatialCorrelation r;
    r.matrix = hermitian_part(matrix);
    r.root = psd_sqrt(r.matrix);
    r.beta = r.matrix.trace().real() / static_cast<double>(r.matrix.rows());
    return r;
}

double pathloss_db(double distance_m, const LargeScaleParams& params) {
    const double d = std::max(distance_m, params.d0_m);
    return params.beta0_db - 10.0 * params.alpha * std::log10(d / params.d0_m);
}

rmat shadow_covariance(const std::vector<Point>& devices, const Area& area,
                       const LargeScaleParams& params) {
    const auto k = static_cast<Eigen::Index>(devices.size());
    const double var = params.shadow_std_db * params.shadow_std_db;
    rmat cov(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        cov(i, i) = var;
        for (Eigen::Index j = 0; j < i; ++j) {
            const double x = wrap_distance(devices[i], devices[j], area);
            cov(i, j) = cov(j, i) = var * std::exp2(-x / params.decorr_m);
        }
    }
    if (k > 0 && var > 0.0) {
        Eigen::SelfAdjointEigenSolver<rmat> eig(cov, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() < -1e-6 * eig.eigenvalues().maxCoeff()) {
            throw NotPsd("shadowing covariance is indefinite");
        }
    }
    return cov;
}

rvec sample_shadowing(const rmat& cov, Rng& rng) {
    rvec z(cov.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = standard_normal(rng);
    return psd_sqrt(cov) * z;
}

SpatialCorrelation local_scattering_R(std::size_t antennas, double nominal_angle, double asd,
                                      double beta) {
    const auto n = static_cast<Eigen::Index>(antennas);
    cmat r(n, n);
    const double pi = std::numbers::pi;
    for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index c = 0; c < n; ++c) {
            const double dist = static_cast<double>(m - c);
            const double spread = asd * pi * dist * std::cos(nominal_angle);
            r(m, c) = beta * std::polar(std::exp(-spread * spread / 2.0),
                                        pi * dist * std::sin(nominal_angle));
        }
    }
    SpatialCorrelation out = make_correlation(r);
    // The Gaussian kernel is PSD analytically; clamp round-off and restore the trace.
    if (min_eigenvalue(out.matrix) < 0.0) {
        out.matrix = out.root * out.root;
        out.matrix *= beta * static_cast<double>(n) / out.matrix.trace().real();
        out = make_correlation(out.matrix);
    }
    return out;
}

ChannelRealization sample_channels(const CorrelationTable& correlations, Rng& rng) {
    ChannelRealization h(correlations.devices(), correlations.receivers());
    for (std::size_t k = 0; k < correlations.devices(); ++k) {
        for (std::size_t l = 0; l < correlations.receivers(); ++l) {
            const auto& r = correlations(k, l);
            cvec z(r.antennas());
            for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = complex_normal(rng);
            h(k, l) = r.root * z;
        }
    }
    return h;
}

CorrelationTable build_correlations(const std::vector<Point>& devices,
                                    const std::vector<Point>& receivers, std::size_t antennas,
                                    const Area& area, const LargeScaleParams& params, double asd,
                                    Rng& shadow_rng) {
    CorrelationTable table(devices.size(), receivers.size());
    const rmat cov = shadow_covariance(devices, area, params);
    for (std::size_t l = 0; l < receivers.size(); ++l) {
        const rvec shadow = sample_shadowing(cov, shadow_rng);
        for (std::size_t k = 0; k < devices.size(); ++k) {
            const Point offset = wrap_offset(receivers[l], devices[k], area);
            const double gain_db =
                pathloss_db(offset.norm(), params) + shadow(static_cast<Eigen::Index>(k));
            const double angle = std::atan2(offset.y(), offset.x());
            table(k, l) = local_scattering_R(antennas, angle, asd, db_to_linear(gain_db));
        }
    }
    return table;
}

}  // namespace cfota
