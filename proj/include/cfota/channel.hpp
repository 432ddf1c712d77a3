#pragma once

#include "cfota/linalg.hpp"
#include "cfota/rng.hpp"
#include "cfota/topology.hpp"

#include <cstddef>
#include <numbers>
#include <vector>

namespace cfota {

/// Urban-microcell large-scale fading: beta0 - 10 alpha log10(d/d0) + shadowing.
struct LargeScaleParams {
    double beta0_db = -30.5;
    double alpha = 3.67;
    double d0_m = 1.0;
    double shadow_std_db = 4.0;
    double decorr_m = 9.0;
};

/// Hermitian PSD spatial correlation with its principal square root cached.
struct SpatialCorrelation {
    cmat matrix;
    cmat root;
    double beta = 0.0;  // trace / N

    Eigen::Index antennas() const { return matrix.rows(); }
};

SpatialCorrelation make_correlation(const cmat& matrix);

/// Dense (device, receiver) table. Receivers are APs or cellular BSs.
template <typename T>
class LinkTable {
public:
    LinkTable() = default;
    LinkTable(std::size_t devices, std::size_t receivers)
        : devices_(devices), receivers_(receivers), data_(devices * receivers) {}

    T& operator()(std::size_t k, std::size_t l) { return data_[k * receivers_ + l]; }
    const T& operator()(std::size_t k, std::size_t l) const { return data_[k * receivers_ + l]; }

    std::size_t devices() const { return devices_; }
    std::size_t receivers() const { return receivers_; }

private:
    std::size_t devices_ = 0;
    std::size_t receivers_ = 0;
    std::vector<T> data_;
};

using CorrelationTable = LinkTable<SpatialCorrelation>;
using ChannelRealization = LinkTable<cvec>;

/// Path loss in dB (no shadowing). Distances below d0 are clamped to d0.
double pathloss_db(double distance_m, const LargeScaleParams& params);

/// Shadowing covariance (dB^2) among devices seen from one receiver:
/// sigma^2 * 2^(-x_ki / decorr) with x the wrap distance. Different receivers
/// are drawn independently. Throws NotPsd when the matrix has an eigenvalue
/// below -1e-6 * (largest eigenvalue), which only a broken geometry produces.
rmat shadow_covariance(const std::vector<Point>& devices, const Area& area,
                       const LargeScaleParams& params);

/// Zero-mean Gaussian draw with covariance `cov` via its clamped symmetric root.
rvec sample_shadowing(const rmat& cov, Rng& rng);

/// Gaussian local scattering model for a half-wavelength ULA (closed-form
/// small-ASD approximation):
///   R(m,n) = beta * exp(j pi (m-n) sin(phi)) * exp(-(asd pi (m-n) cos(phi))^2 / 2)
SpatialCorrelation local_scattering_R(std::size_t antennas, double nominal_angle, double asd,
                                      double beta);

/// h = R^{1/2} z, z ~ CN(0, I), independently for every (device, receiver).
ChannelRealization sample_channels(const CorrelationTable& correlations, Rng& rng);

inline constexpr double kDefaultAsdRad = 15.0 * std::numbers::pi / 180.0;

/// Full large-scale + spatial-correlation pipeline for devices against a set of
/// receivers with `antennas` each. Nominal angles are wrap-around bearings from
/// the receiver to the device.
CorrelationTable build_correlations(const std::vector<Point>& devices,
                                    const std::vector<Point>& receivers, std::size_t antennas,
                                    const Area& area, const LargeScaleParams& params, double asd,
                                    Rng& shadow_rng);

}  // namespace cfota
