#include "reseval/metrics.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.h"
#include "reseval/error.h"
#include "reseval/report.h"
#include "reseval/stft.h"

namespace reseval {
namespace {

using Vec = std::vector<double>;

Vec constant(std::size_t n, double v) { return Vec(n, v); }

// A vector orthogonal to `s` with squared norm `energy`.
Vec orthogonal_to(const Vec& s, double energy, std::mt19937_64& rng) {
  Vec r = oracle::uniform(rng, s.size());
  const double proj = static_cast<double>(oracle::inner(r, s) / oracle::sumsq(s));
  for (std::size_t n = 0; n < r.size(); ++n) r[n] -= proj * s[n];
  const double scale = std::sqrt(energy / static_cast<double>(oracle::sumsq(r)));
  for (double& v : r) v *= scale;
  return r;
}

TEST(RatioDbTest, FloorAndClampRules) {
  EXPECT_DOUBLE_EQ(ratio_db(0.0, 0.0), -120.0);
  EXPECT_DOUBLE_EQ(ratio_db(1.0, 0.0), 120.0);
  EXPECT_DOUBLE_EQ(ratio_db(1e20, 1.0), 120.0);
  EXPECT_DOUBLE_EQ(ratio_db(1e-6, 1.0, 40.0), -40.0);
  EXPECT_NEAR(ratio_db(4.0, 1.0), 6.020599913279624, 1e-12);
}

TEST(GainTest, IdentityAndHalf) {
  std::mt19937_64 rng(1);
  const Vec e = oracle::uniform(rng, 320);
  for (double g : compute_gain(e, e)) EXPECT_DOUBLE_EQ(g, 1.0);
  Vec half(e);
  for (double& v : half) v *= 0.5;
  for (double g : compute_gain(half, e)) EXPECT_DOUBLE_EQ(g, 0.5);
}

TEST(GainTest, DenominatorFloor) {
  const Vec e = {0.0, -1e-9, 0.5};
  const Vec s_hat = {1e-8, 1e-8, 0.25};
  const Vec g = compute_gain(s_hat, e);
  EXPECT_DOUBLE_EQ(g[0], 1.0);
  EXPECT_DOUBLE_EQ(g[1], -1.0);
  EXPECT_DOUBLE_EQ(g[2], 0.5);
}

TEST(GainTest, LengthMismatchIsRejected) {
  EXPECT_THROW(compute_gain(Vec(3, 1.0), Vec(4, 1.0)), PreconditionError);
  EXPECT_THROW(dsml(Vec(3, 1.0), Vec(4, 1.0)), PreconditionError);
}

TEST(CompensationTest, ClosedForms) {
  const Vec s = constant(320, 1.0);
  EXPECT_NEAR(compensation_scalar(constant(320, 0.37), s), 0.37, 1e-14);
  EXPECT_DOUBLE_EQ(compensation_scalar(constant(320, 0.37), constant(320, 0.0)), 1.0);
  Vec alternating(320);
  for (std::size_t n = 0; n < 320; ++n) alternating[n] = n % 2 == 0 ? 1.0 : 0.0;
  EXPECT_DOUBLE_EQ(compensation_scalar(alternating, s), 0.5);
}

TEST(DsmlTest, ClosedForms) {
  const Vec s = constant(320, 1.0);
  EXPECT_DOUBLE_EQ(dsml(s, constant(320, 0.5)), 120.0);
  EXPECT_DOUBLE_EQ(dsml(s, constant(320, 1.0)), 120.0);
  EXPECT_DOUBLE_EQ(dsml(s, constant(320, 0.0)), -120.0);
  Vec half_on(320, 0.0);
  for (std::size_t n = 0; n < 160; ++n) half_on[n] = 1.0;
  EXPECT_NEAR(dsml(s, half_on), 0.0, 1e-12);
  EXPECT_NEAR(oracle::dsml(s, half_on), 0.0, 1e-12);
}

TEST(DsmlTest, FloorIsRelativeToSpeechEnergy) {
  // Quiet speech under a strong but not total suppression: the compensated
  // speech energy is below the absolute floor, yet the ratio is measurable.
  std::mt19937_64 rng(12);
  Vec s = oracle::uniform(rng, 320, -1e-4, 1e-4);
  Vec g = oracle::uniform(rng, 320, 0.0, 2e-3);
  const double ref = dsml(s, g);
  EXPECT_GT(ref, -120.0);
  for (double c : {0.1, 0.01}) {
    Vec gc(g);
    for (double& v : gc) v *= c;
    EXPECT_NEAR(dsml(s, gc), ref, 1e-9);
    EXPECT_NEAR(dsml(s, gc), oracle::dsml(s, gc), 1e-9);
  }
}

TEST(ReslTest, ClosedForms) {
  std::mt19937_64 rng(2);
  const Vec s = oracle::uniform(rng, 320);
  const Vec e = oracle::uniform(rng, 320);
  EXPECT_NEAR(resl(s, e, constant(320, 1.0)), 0.0, 1e-12);
  EXPECT_NEAR(resl(s, e, constant(320, 0.5)), 6.0206, 1e-4);
  EXPECT_DOUBLE_EQ(resl(s, e, constant(320, 0.0)), 120.0);
  for (double c : {0.01, 0.1, 0.3, 0.77, 1.0}) {
    EXPECT_NEAR(resl(s, e, constant(320, c)), -20.0 * std::log10(c), 1e-9);
  }
}

TEST(SdrTest, ClosedForms) {
  std::mt19937_64 rng(3);
  const Vec s = oracle::uniform(rng, 320);
  EXPECT_DOUBLE_EQ(sdr(s, s), 120.0);
  Vec attenuated(s);
  for (double& v : attenuated) v *= 0.3;
  EXPECT_DOUBLE_EQ(sdr(s, attenuated), 120.0);
  const Vec r = orthogonal_to(s, static_cast<double>(oracle::sumsq(s)) / 10.0, rng);
  Vec noisy(s);
  for (std::size_t n = 0; n < s.size(); ++n) noisy[n] += r[n];
  EXPECT_NEAR(sdr(s, noisy), 10.0, 1e-9);
}

TEST(SarTest, ClosedForms) {
  std::mt19937_64 rng(4);
  const Vec s = oracle::uniform(rng, 320);
  EXPECT_DOUBLE_EQ(sar(s, s), 120.0);
  EXPECT_NEAR(sar(s, constant(320, 0.0)), 0.0, 1e-12);
  const Vec r = orthogonal_to(s, static_cast<double>(oracle::sumsq(s)), rng);
  Vec noisy(s);
  for (std::size_t n = 0; n < s.size(); ++n) noisy[n] += r[n];
  EXPECT_NEAR(sar(s, noisy), 0.0, 1e-9);
}

TEST(ErleTest, ClosedForms) {
  std::mt19937_64 rng(5);
  const Vec e = oracle::uniform(rng, 320);
  Vec tenth(e);
  for (double& v : tenth) v *= 0.1;
  EXPECT_NEAR(erle(e, e), 0.0, 1e-12);
  EXPECT_NEAR(erle(e, tenth), 20.0, 1e-9);
  EXPECT_DOUBLE_EQ(erle(e, constant(320, 0.0)), 120.0);
}

TEST(SerSnrTest, ClosedForms) {
  std::mt19937_64 rng(6);
  const Vec y = oracle::uniform(rng, 320);
  Vec s(y);
  for (double& v : s) v *= 2.0;
  EXPECT_NEAR(ser(s, y), 6.0206, 1e-4);
  EXPECT_NEAR(ser(y, y), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(snr(s, constant(320, 0.0)), 120.0);
}

TEST(MetricsOracleTest, RandomFramesMatchDirectEvaluation) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec s = oracle::uniform(rng, 320, -0.3, 0.3);
    const Vec r = oracle::uniform(rng, 320, -0.3, 0.3);
    const Vec mask = oracle::uniform(rng, 320, 0.0, 1.0);
    const Vec w = oracle::uniform(rng, 320, -0.01, 0.01);
    Vec e(320), s_hat(320);
    for (std::size_t n = 0; n < 320; ++n) {
      e[n] = s[n] + r[n];
      s_hat[n] = mask[n] * e[n];
    }
    const Vec g_ref = oracle::gain(s_hat, e);
    const Vec g = compute_gain(s_hat, e);
    for (std::size_t n = 0; n < 320; ++n) ASSERT_DOUBLE_EQ(g[n], g_ref[n]);
    EXPECT_NEAR(dsml(s, g), oracle::dsml(s, g_ref), 1e-9);
    EXPECT_NEAR(resl(s, e, g), oracle::resl(s, e, g_ref), 1e-9);
    EXPECT_NEAR(sdr(s, s_hat), oracle::sdr(s, s_hat), 1e-9);
    EXPECT_NEAR(sar(s, s_hat), oracle::sdr(s, s_hat), 1e-9);
    EXPECT_NEAR(erle(e, s_hat), oracle::energy_ratio(e, s_hat), 1e-9);
    EXPECT_NEAR(ser(s, r), oracle::energy_ratio(s, r), 1e-9);
    EXPECT_NEAR(snr(s, w), oracle::energy_ratio(s, w), 1e-9);
  }
}

TEST(MetricsPropertyTest, ExchangeSymmetry) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec s = oracle::uniform(rng, 320);
    const Vec e = oracle::uniform(rng, 320);
    const Vec s_hat = oracle::uniform(rng, 320);
    const double c = std::uniform_real_distribution<double>(0.1, 5.0)(rng);
    Vec cs(s_hat), ce(e);
    for (double& v : cs) v *= c;
    for (double& v : ce) v *= c;
    const Vec g = compute_gain(s_hat, e);
    const Vec gc = compute_gain(cs, ce);
    EXPECT_NEAR(dsml(s, g), dsml(s, gc), 1e-9);
    EXPECT_NEAR(resl(s, e, g), resl(s, e, gc), 1e-9);
  }
}

TEST(MetricsPropertyTest, ConstantAttenuationInvariance) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec s = oracle::uniform(rng, 320);
    const Vec e = oracle::uniform(rng, 320);
    const Vec s_hat = oracle::uniform(rng, 320);
    for (double c : {0.1, 0.5, 0.9}) {
      Vec scaled_hat(s_hat);
      for (double& v : scaled_hat) v *= c;
      const Vec g = compute_gain(s_hat, e);
      const Vec gc = compute_gain(scaled_hat, e);
      EXPECT_NEAR(dsml(s, gc), dsml(s, g), 1e-6);
      EXPECT_NEAR(sdr(s, scaled_hat), sdr(s, s_hat), 1e-6);
      EXPECT_NEAR(resl(s, e, gc) - resl(s, e, g), -20.0 * std::log10(c), 1e-6);
    }
  }
}

// Spectral kernels: direct sums over the bins of windowed frames.
TEST(SpectralMetricsTest, MatchDirectWeightedSums) {
  std::mt19937_64 rng(10);
  const auto& w = one_sided_weights();
  ASSERT_EQ(w.size(), kBins);
  EXPECT_EQ(w.front(), 1.0);
  EXPECT_EQ(w.back(), 1.0);
  EXPECT_EQ(w[1], 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec s_t = oracle::uniform(rng, 320);
    const Vec r_t = oracle::uniform(rng, 320);
    const Vec mask = oracle::uniform(rng, kBins, 0.0, 1.0);
    Vec e_t(320);
    for (std::size_t n = 0; n < 320; ++n) e_t[n] = s_t[n] + r_t[n];
    const auto S = oracle::dft(s_t, kFftLen);
    const auto E = oracle::dft(e_t, kFftLen);
    std::vector<std::complex<double>> Sh(kBins), R(kBins);
    for (std::size_t k = 0; k < kBins; ++k) {
      Sh[k] = mask[k] * E[k];
      R[k] = E[k] - S[k];
    }
    const auto g = compute_gain(Sh, E);
    for (std::size_t k = 0; k < kBins; ++k) ASSERT_NEAR(std::abs(g[k] - mask[k]), 0.0, 1e-12);

    long double ss = 0, gss = 0;
    for (std::size_t k = 0; k < kBins; ++k) {
      ss += w[k] * std::norm(S[k]);
      gss += w[k] * mask[k] * std::norm(S[k]);
    }
    const long double g_hat = gss / ss;
    EXPECT_NEAR(compensation_scalar(g, S, w), static_cast<double>(g_hat), 1e-12);
    long double num = 0, den = 0, rr = 0, grr = 0;
    for (std::size_t k = 0; k < kBins; ++k) {
      num += w[k] * g_hat * g_hat * std::norm(S[k]);
      den += w[k] * (g_hat - mask[k]) * (g_hat - mask[k]) * std::norm(S[k]);
      rr += w[k] * std::norm(R[k]);
      grr += w[k] * mask[k] * mask[k] * std::norm(R[k]);
    }
    EXPECT_NEAR(dsml(S, g, w), oracle::db(num, den), 1e-9);
    EXPECT_NEAR(resl(S, E, g, w), oracle::db(rr, grr), 1e-9);
  }
}

TEST(SpectralMetricsTest, ConstantMaskClosedForms) {
  std::mt19937_64 rng(11);
  const auto& w = one_sided_weights();
  const auto S = oracle::dft(oracle::uniform(rng, 320), kFftLen);
  const auto E = oracle::dft(oracle::uniform(rng, 320), kFftLen);
  const std::vector<std::complex<double>> half(kBins, 0.5);
  EXPECT_NEAR(resl(S, E, half, w), 6.020599913279624, 1e-9);
  EXPECT_DOUBLE_EQ(dsml(S, half, w), 120.0);
  const std::vector<std::complex<double>> zero(kBins, 0.0);
  EXPECT_DOUBLE_EQ(dsml(S, zero, w), -120.0);
  EXPECT_DOUBLE_EQ(resl(S, E, zero, w), 120.0);
}

}  // namespace
}  // namespace reseval
