#include "cfota/cooperation.hpp"
#include "cfota/errors.hpp"
#include "cfota/ota.hpp"

#include <gtest/gtest.h>

using namespace cfota;

namespace {

ChannelRealization one_device_channel(std::size_t receivers, Eigen::Index antennas, Rng& rng) {
    ChannelRealization h(1, receivers);
    for (std::size_t l = 0; l < receivers; ++l) {
        cvec v(antennas);
        for (Eigen::Index i = 0; i < antennas; ++i) v(i) = 1e-5 * complex_normal(rng);
        h(0, l) = v;
    }
    return h;
}

rvec random_model(Eigen::Index d, Rng& rng) {
    rvec t(d);
    for (Eigen::Index i = 0; i < d; ++i) t(i) = 0.3 + 0.1 * standard_normal(rng);
    return t;
}

}  // namespace

TEST(Architecture, Names) {
    for (auto a : {Architecture::Level3, Architecture::Level2, Architecture::Level1,
                   Architecture::Cellular, Architecture::ErrorFree}) {
        EXPECT_EQ(parse_architecture(to_string(a)), a);
    }
    EXPECT_THROW(parse_architecture("level4"), ValidationError);
}

TEST(OtaRound, ErrorFreeBypass) {
    Rng rng = make_stream(1, 0, 0, Purpose::Test);
    const GroupLayout layout({0, 0, 1});
    const std::vector<rvec> locals = {random_model(5, rng), random_model(5, rng), random_model(5, rng)};
    const rvec gamma = (rvec(3) << 0.25, 0.75, 1.0).finished();
    OtaTransceiver tx;
    tx.architecture = Architecture::ErrorFree;
    const auto out = ota_round(locals, layout, gamma, tx, ChannelRealization(3, 1), 1.0, rng);
    EXPECT_EQ(out.recovered[0], 0.25 * locals[0] + 0.75 * locals[1]);
    EXPECT_EQ(out.recovered[1], locals[2]);
    EXPECT_EQ(out.error_sq, (std::vector<double>{0.0, 0.0}));
}

TEST(OtaRound, NoiselessSingleDeviceLevels) {
    Rng rng = make_stream(2, 0, 0, Purpose::Test);
    const GroupLayout layout({0});
    const std::vector<rvec> locals = {random_model(300, rng)};
    const rvec gamma = rvec::Ones(1);
    const auto h = one_device_channel(3, 2, rng);
    const double nu = normalize(locals[0]).stats.std;
    const cvec stacked = stacked_channel(h, 0);

    OtaTransceiver tx;
    tx.b = cvec::Constant(1, cplx(0.5, 0.5));
    // v^H h b = nu.
    const cvec v = stacked * (nu / std::conj(tx.b(0)) / stacked.squaredNorm());
    tx.combiners = {v};
    tx.ap_antennas = 2;
    for (auto arch : {Architecture::Level3, Architecture::Level2}) {
        tx.architecture = arch;
        const auto out = ota_round(locals, layout, gamma, tx, h, 0.0, rng);
        EXPECT_LT((out.recovered[0] - locals[0]).norm(), 1e-8 * locals[0].norm());
        EXPECT_LT(out.complex_error_sq[0], 1e-16);
    }
}

TEST(OtaRound, NoiselessCellular) {
    Rng rng = make_stream(3, 0, 0, Purpose::Test);
    const GroupLayout layout({0});
    const std::vector<rvec> locals = {random_model(50, rng)};
    const auto h = one_device_channel(2, 4, rng);
    const double nu = normalize(locals[0]).stats.std;
    OtaTransceiver tx;
    tx.architecture = Architecture::Cellular;
    tx.b = cvec::Ones(1);
    tx.serving_bs = {1};
    tx.combiners = {h(0, 1) * (nu / h(0, 1).squaredNorm())};
    const auto out = ota_round(locals, layout, rvec::Ones(1), tx, h, 0.0, rng);
    EXPECT_LT((out.recovered[0] - locals[0]).norm(), 1e-8 * locals[0].norm());
}

TEST(OtaRound, NoiselessLevel1Averaging) {
    Rng rng = make_stream(4, 0, 0, Purpose::Test);
    const GroupLayout layout({0});
    const std::vector<rvec> locals = {random_model(40, rng)};
    const auto h = one_device_channel(2, 2, rng);
    const double nu = normalize(locals[0]).stats.std;
    OtaTransceiver tx;
    tx.architecture = Architecture::Level1;
    tx.b = cvec::Ones(1);
    // Each AP alone delivers nu; the CPU averages the two.
    tx.local = {{h(0, 0) * (nu / h(0, 0).squaredNorm()), h(0, 1) * (nu / h(0, 1).squaredNorm())}};
    const auto out = ota_round(locals, layout, rvec::Ones(1), tx, h, 0.0, rng);
    EXPECT_LT((out.recovered[0] - locals[0]).norm(), 1e-8 * locals[0].norm());
}

TEST(OtaRound, NoiseOnlyErrorMatchesVariance) {
    Rng rng = make_stream(5, 0, 0, Purpose::Test);
    const GroupLayout layout({0});
    const std::vector<rvec> locals = {random_model(20000, rng)};
    const auto h = one_device_channel(1, 1, rng);
    OtaTransceiver tx;
    tx.architecture = Architecture::Level3;
    tx.b = cvec::Zero(1);
    tx.combiners = {cvec::Ones(1)};
    const double noise = 0.04;
    const auto out = ota_round(locals, layout, rvec::Ones(1), tx, h, noise, rng);
    // Recovery = mean + Re(n): real error per slot = (theta - mean - Re n)^2.
    const auto stats = normalize(locals[0]).stats;
    const double expected = 20000 * (stats.std * stats.std + noise / 2);
    EXPECT_NEAR(out.error_sq[0], expected, 0.03 * expected);
    EXPECT_NEAR(out.complex_error_sq[0], 20000 * (stats.std * stats.std + noise), 0.03 * expected);
}

TEST(OtaRound, Errors) {
    Rng rng = make_stream(6, 0, 0, Purpose::Test);
    const GroupLayout layout({0, 0});
    OtaTransceiver tx;
    tx.architecture = Architecture::Level3;
    tx.b = cvec::Ones(2);
    tx.combiners = {cvec::Ones(1)};
    const ChannelRealization h(2, 1);
    EXPECT_THROW(ota_round({rvec::Ones(3)}, layout, rvec::Ones(2), tx, h, 1.0, rng), ShapeMismatch);
    EXPECT_THROW(ota_round({rvec::Ones(3), rvec::Ones(4)}, layout, rvec::Ones(2), tx, h, 1.0, rng),
                 ShapeMismatch);
    EXPECT_THROW(ota_round({rvec::Constant(3, 2.0), rvec::LinSpaced(3, 0, 1)}, layout, rvec::Ones(2),
                           tx, h, 1.0, rng),
                 DegenerateVariance);
}

TEST(RoundWeights, FromStats) {
    const auto w = round_weights({{1.0, 2.0}, {3.0, 4.0}}, rvec::Ones(2), rvec::Ones(1));
    EXPECT_EQ(w.nu, (rvec(2) << 2.0, 4.0).finished());
    EXPECT_EQ(w.theta_bar, (rvec(2) << 1.0, 3.0).finished());
}

TEST(OtaRound, GroupsWithDifferentModelSizes) {
    Rng rng = make_stream(7, 0, 0, Purpose::Test);
    const GroupLayout layout({0, 1});
    const std::vector<rvec> locals = {random_model(10, rng), random_model(25, rng)};
    ChannelRealization h(2, 1);
    h(0, 0) = (cvec(2) << 1.0, 0.0).finished();
    h(1, 0) = (cvec(2) << 0.0, 1.0).finished();
    OtaTransceiver tx;
    tx.architecture = Architecture::Level3;
    tx.b = cvec::Ones(2);
    tx.combiners = {h(0, 0) * normalize(locals[0]).stats.std, h(1, 0) * normalize(locals[1]).stats.std};
    const auto out = ota_round(locals, layout, rvec::Ones(2), tx, h, 0.0, rng);
    ASSERT_EQ(out.recovered[0].size(), 10);
    ASSERT_EQ(out.recovered[1].size(), 25);
    EXPECT_LT((out.recovered[0] - locals[0]).norm(), 1e-12);
    EXPECT_LT((out.recovered[1] - locals[1]).norm(), 1e-12);
}
