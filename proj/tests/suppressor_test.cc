#include "reseval/suppressor.h"

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.h"
#include "reseval/error.h"
#include "reseval/report.h"
#include "reseval/scene.h"
#include "reseval/stft.h"

namespace reseval {
namespace {

TEST(SuppressorTest, NoResidualPassesSpeech) {
  std::mt19937_64 rng(1);
  const Signal s(oracle::uniform(rng, 16000, -0.3, 0.3));
  const Signal out = oracle_suppress(s, s, {});
  ASSERT_EQ(out.size(), s.size());
  const FrameGrid grid = make_grid(s.size());
  double err = 0.0, ref = 0.0;
  for (std::size_t n = grid.hop; n < grid.n_frames * grid.hop; ++n) {
    err += (out[n] - s[n]) * (out[n] - s[n]);
    ref += s[n] * s[n];
  }
  EXPECT_LT(10.0 * std::log10(err / ref), -40.0);
}

TEST(SuppressorTest, SilentSpeechLeavesFloor) {
  std::mt19937_64 rng(2);
  const Signal e(oracle::uniform(rng, 16000, -0.3, 0.3));
  const Signal s(std::vector<double>(16000, 0.0));
  const auto gain = oracle_gain(e, s, {});
  for (double g : gain) ASSERT_DOUBLE_EQ(g, 0.02);
  const Signal out = oracle_suppress(e, s, {});
  const FrameGrid grid = make_grid(e.size());
  double num = 0.0, den = 0.0;
  for (std::size_t n = grid.hop; n < grid.n_frames * grid.hop; ++n) {
    num += e[n] * e[n];
    den += out[n] * out[n];
  }
  EXPECT_NEAR(10.0 * std::log10(num / den), -20.0 * std::log10(0.02), 0.01);
}

TEST(SuppressorTest, GainStaysWithinFloorAndOne) {
  std::mt19937_64 rng(3);
  const Signal s(oracle::uniform(rng, 8000, -0.2, 0.2));
  const Signal e(oracle::uniform(rng, 8000, -0.5, 0.5));
  for (double beta : {1.0, 3.0, 16.0}) {
    for (double floor : {0.0, 0.02, 0.5}) {
      for (double g : oracle_gain(e, s, {beta, floor})) {
        ASSERT_GE(g, floor);
        ASSERT_LE(g, 1.0);
      }
    }
  }
}

TEST(SuppressorTest, ResidualSuppressionGrowsWithBeta) {
  SceneSpec spec;
  spec.duration_s = 6.0;
  spec.seed = 4;
  const GeneratedScene scene = generate_scene(spec);
  SceneComponents c = scene.components;
  const ActivityMask mask = classify_scene(c);
  double prev = -1e9;
  for (double beta : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    c.s_hat = oracle_suppress(*c.e, *c.s, {beta, 0.02});
    const double resl = evaluate_scene(c, mask).headline(Metric::kResl)->mean;
    EXPECT_GT(resl, prev) << "beta " << beta;
    prev = resl;
  }
}

TEST(SuppressorTest, InvalidConfigIsRejected) {
  EXPECT_THROW(validate(SuppressorConfig{0.5, 0.02}), PreconditionError);
  EXPECT_THROW(validate(SuppressorConfig{1.0, 1.0}), PreconditionError);
  EXPECT_THROW(validate(SuppressorConfig{1.0, -0.1}), PreconditionError);
  const Signal x(std::vector<double>(1000, 0.1));
  EXPECT_THROW(oracle_suppress(x, Signal(std::vector<double>(999, 0.1)), {}), PreconditionError);
}

TEST(BetaScheduleTest, AffineMap) {
  const std::vector<double> zero = {0.0};
  EXPECT_EQ(beta_schedule(zero), std::vector<double>{1.0});
  const std::vector<double> alphas = {0.0, 0.25, 0.5, 0.75, 1.0};
  const std::vector<double> expected = {1.0, 4.75, 8.5, 12.25, 16.0};
  EXPECT_EQ(beta_schedule(alphas), expected);
}

TEST(BetaScheduleTest, RejectsDescendingOrNegative) {
  const std::vector<double> descending = {0.5, 0.25};
  EXPECT_THROW(beta_schedule(descending), PreconditionError);
  const std::vector<double> negative = {-0.1, 0.2};
  EXPECT_THROW(beta_schedule(negative), PreconditionError);
}

}  // namespace
}  // namespace reseval
