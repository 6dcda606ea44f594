#include "nvdd/noise.h"

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "nvdd/errors.h"

namespace nvdd {
namespace {

TEST(NoiseSpec, ParsesAndFormats) {
  NoiseModel m = parse_noise_spec("lindblad:T1=3.5ms,T2=34us");
  ASSERT_TRUE(m.lindblad);
  EXPECT_DOUBLE_EQ(*m.lindblad->t1, 3.5e-3);
  EXPECT_DOUBLE_EQ(*m.lindblad->t2, 34e-6);
  EXPECT_FALSE(m.has_classical());

  m = parse_noise_spec("static:sigma=6.62kHz");
  EXPECT_DOUBLE_EQ(std::get<StaticGaussian>(m.classical).sigma, 6620.0);

  m = parse_noise_spec("lindblad:T2=4ms+ou:sigma=5kHz,tau=1ms");
  EXPECT_FALSE(m.lindblad->t1);
  EXPECT_DOUBLE_EQ(std::get<OrnsteinUhlenbeck>(m.classical).tau_c, 1e-3);
  EXPECT_EQ(format_noise_spec(m), "lindblad:T2=4ms+ou:sigma=5kHz,tau=1ms");
  EXPECT_EQ(format_noise_spec(parse_noise_spec("none")), "none");
}

TEST(NoiseSpec, Rejects) {
  for (const char* bad : {"static", "static:sigma=-1Hz", "ou:sigma=1kHz", "ou:sigma=1kHz,tau=0s",
                          "lindblad:T3=1ms", "lindblad:T2=0s", "static:sigma=1kHz+ou:sigma=1kHz,tau=1ms",
                          "pink:sigma=1Hz", "lindblad:T2=1ms+lindblad:T1=1ms", "static:sigma=1us"}) {
    EXPECT_THROW(parse_noise_spec(bad), ConfigError) << bad;
  }
}

TEST(Dissipators, Structure) {
  EXPECT_TRUE(lindblad_dissipators(NoiseModel{}).empty());
  auto d = lindblad_dissipators(parse_noise_spec("lindblad:T1=1ms"));
  EXPECT_EQ(d.size(), 18u);  // 6 electron pairs x 3 nuclear levels
  for (const auto& x : d) EXPECT_DOUBLE_EQ(x.rate, 1.0 / 3e-3);
  d = lindblad_dissipators(parse_noise_spec("lindblad:T2=34us"));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_DOUBLE_EQ(d[0].rate, 2.0 / 34e-6);
}

TEST(SampleNoise, ZeroSigmaIsZero) {
  for (const auto& v : sample_noise(StaticGaussian{0.0}, 1e-3, 1, 1e-5)) EXPECT_EQ(v, 0.0);
  for (const auto& v : sample_noise(OrnsteinUhlenbeck{0.0, 1e-4}, 1e-3, 1, 1e-5)) EXPECT_EQ(v, 0.0);
}

TEST(SampleNoise, StaticVarianceAcrossSeeds) {
  const double sigma = 6620.0;
  const int n = 100000;
  double sum = 0, sq = 0;
  for (int k = 0; k < n; ++k) {
    const auto trace = sample_noise(StaticGaussian{sigma}, 3e-6, static_cast<std::uint64_t>(k), 1e-6);
    ASSERT_EQ(trace.size(), 3u);
    EXPECT_EQ(trace[0], trace[2]);
    sum += trace[0];
    sq += trace[0] * trace[0];
  }
  const double var = sq / n - (sum / n) * (sum / n);
  EXPECT_NEAR(var / (sigma * sigma), 1.0, 0.03);
}

TEST(SampleNoise, OuAutocorrelation) {
  const double sigma = 1000.0, tau = 1e-4, dt = 1e-5;
  const auto x = sample_noise(OrnsteinUhlenbeck{sigma, tau}, 4.0, 9, dt);
  const size_t lag = 5;
  double c0 = 0, c1 = 0;
  for (size_t k = 0; k + lag < x.size(); ++k) {
    c0 += x[k] * x[k];
    c1 += x[k] * x[k + lag];
  }
  EXPECT_NEAR(c0 / (x.size() - lag) / (sigma * sigma), 1.0, 0.03);
  EXPECT_NEAR(c1 / c0, std::exp(-static_cast<double>(lag) * dt / tau), 0.02);
}

TEST(SampleNoise, LongCorrelationBehavesStatic) {
  const double sigma = 1000.0;
  double c0 = 0, c1 = 0;
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    const auto x = sample_noise(OrnsteinUhlenbeck{sigma, 1e6}, 1e-3, seed, 1e-4);
    c0 += x.front() * x.front();
    c1 += x.front() * x.back();
  }
  EXPECT_GE(c1 / c0, 0.99);
}

TEST(SampleNoise, Deterministic) {
  EXPECT_EQ(sample_noise(OrnsteinUhlenbeck{10, 1e-3}, 1e-2, 42, 1e-4),
            sample_noise(OrnsteinUhlenbeck{10, 1e-3}, 1e-2, 42, 1e-4));
}

}  // namespace
}  // namespace nvdd
