#include "reseval/report.h"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.h"
#include "reseval/csv.h"
#include "reseval/scene.h"
#include "reseval/suppressor.h"

namespace reseval {
namespace {

class ReportTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    SceneSpec spec;
    spec.duration_s = 6.0;
    spec.seed = 17;
    scene_ = new GeneratedScene(generate_scene(spec));
  }
  static void TearDownTestSuite() {
    delete scene_;
    scene_ = nullptr;
  }

  static SceneComponents with_estimate(const Signal& s_hat) {
    SceneComponents c = scene_->components;
    c.s_hat = s_hat;
    return c;
  }

  static GeneratedScene* scene_;
};

GeneratedScene* ReportTest::scene_ = nullptr;

TEST_F(ReportTest, IdentityEstimateHasNoSuppression) {
  const SceneComponents c = with_estimate(*scene_->components.e);
  const ActivityMask mask = classify_scene(c);
  for (GainDomain domain : {GainDomain::kStft, GainDomain::kSample}) {
    const MetricReport report = evaluate_scene(c, mask, {kDefaultClampDb, domain});
    ASSERT_TRUE(report.headline(Metric::kResl));
    ASSERT_TRUE(report.headline(Metric::kErle));
    EXPECT_NEAR(report.headline(Metric::kResl)->mean, 0.0, 1e-9);
    EXPECT_NEAR(report.headline(Metric::kErle)->mean, 0.0, 1e-9);
  }
}

TEST_F(ReportTest, ZeroEstimateClampsBothWays) {
  const Signal zero(std::vector<double>(scene_->components.e->size(), 0.0));
  const SceneComponents c = with_estimate(zero);
  const ActivityMask mask = classify_scene(c);
  for (GainDomain domain : {GainDomain::kStft, GainDomain::kSample}) {
    const MetricReport report = evaluate_scene(c, mask, {kDefaultClampDb, domain});
    EXPECT_DOUBLE_EQ(report.headline(Metric::kResl)->mean, 120.0);
    EXPECT_DOUBLE_EQ(report.headline(Metric::kDsml)->mean, -120.0);
  }
}

TEST_F(ReportTest, MetricsLandOnTheirConditions) {
  const SceneComponents c =
      with_estimate(oracle_suppress(*scene_->components.e, *scene_->components.s, {}));
  const ActivityMask mask = classify_scene(c);
  const MetricReport report = evaluate_scene(c, mask);
  ASSERT_EQ(report.frames.size(), mask.labels.size());
  for (std::size_t i = 0; i < report.frames.size(); ++i) {
    const FrameMetrics& f = report.frames[i];
    const FrameLabel l = mask.labels[i];
    EXPECT_EQ(f.label, l);
    EXPECT_EQ(f[Metric::kDsml].has_value(), l == FrameLabel::kDoubleTalk);
    EXPECT_EQ(f[Metric::kResl].has_value(), l == FrameLabel::kDoubleTalk);
    EXPECT_EQ(f[Metric::kSdr].has_value(), l == FrameLabel::kDoubleTalk);
    EXPECT_EQ(f[Metric::kSar].has_value(), l == FrameLabel::kNearEndST);
    EXPECT_EQ(f[Metric::kErle].has_value(), l == FrameLabel::kFarEndST);
    EXPECT_TRUE(f[Metric::kSer].has_value());
    EXPECT_TRUE(f[Metric::kSnr].has_value());
  }
  for (FrameLabel l : kAllLabels) EXPECT_EQ(report.label_counts.at(l), mask.count(l));
}

TEST_F(ReportTest, MissingConditionMeansAbsentMetric) {
  SceneComponents c = with_estimate(*scene_->components.e);
  ActivityMask mask = classify_scene(c);
  for (FrameLabel& l : mask.labels) {
    if (l == FrameLabel::kFarEndST) l = FrameLabel::kSilence;
  }
  const MetricReport report = evaluate_scene(c, mask);
  EXPECT_FALSE(report.headline(Metric::kErle).has_value());
  EXPECT_TRUE(report_to_json(report)["metrics"]["ERLE"]["mean"].is_null());
  EXPECT_TRUE(report.headline(Metric::kDsml).has_value());
}

TEST_F(ReportTest, SampleDomainMatchesFrameKernels) {
  const SceneComponents c =
      with_estimate(oracle_suppress(*scene_->components.e, *scene_->components.s, {}));
  const ActivityMask mask = classify_scene(c);
  const MetricReport report = evaluate_scene(c, mask, {kDefaultClampDb, GainDomain::kSample});
  const auto& s = c.s->vec();
  const auto& e = c.e->vec();
  const auto& sh = c.s_hat->vec();
  for (std::size_t i = 0; i < report.frames.size(); ++i) {
    if (mask.labels[i] != FrameLabel::kDoubleTalk) continue;
    const std::size_t b = mask.grid.start(i);
    const std::vector<double> fs(s.begin() + b, s.begin() + b + 320);
    const std::vector<double> fe(e.begin() + b, e.begin() + b + 320);
    const std::vector<double> fh(sh.begin() + b, sh.begin() + b + 320);
    const auto g = oracle::gain(fh, fe);
    ASSERT_NEAR(*report.frames[i][Metric::kDsml], oracle::dsml(fs, g), 1e-9);
    ASSERT_NEAR(*report.frames[i][Metric::kResl], oracle::resl(fs, fe, g), 1e-9);
    ASSERT_NEAR(*report.frames[i][Metric::kSdr], oracle::sdr(fs, fh), 1e-9);
  }
}

TEST_F(ReportTest, ConstantAttenuationInvariance) {
  const Signal base = oracle_suppress(*scene_->components.e, *scene_->components.s, {});
  const SceneComponents c = with_estimate(base);
  const ActivityMask mask = classify_scene(c);
  const MetricReport ref = evaluate_scene(c, mask);
  for (double k : {0.1, 0.5, 0.9}) {
    const MetricReport r = evaluate_scene(with_estimate(scaled(base, k)), mask);
    for (std::size_t i = 0; i < r.frames.size(); ++i) {
      if (!ref.frames[i][Metric::kDsml]) continue;
      const double dsml_ref = *ref.frames[i][Metric::kDsml];
      const double resl_ref = *ref.frames[i][Metric::kResl];
      if (std::abs(dsml_ref) < 120.0) {
        EXPECT_NEAR(*r.frames[i][Metric::kDsml], dsml_ref, 1e-6);
      }
      EXPECT_NEAR(*r.frames[i][Metric::kSdr], *ref.frames[i][Metric::kSdr], 1e-6);
      if (resl_ref - 20.0 * std::log10(k) < 120.0) {
        EXPECT_NEAR(*r.frames[i][Metric::kResl] - resl_ref, -20.0 * std::log10(k), 1e-6);
      }
    }
  }
}

TEST(AggregateTest, MatchesTwoPass) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = oracle::uniform(rng, 1 + trial, -50.0, 50.0);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= v.size();
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= v.size();
    const auto a = aggregate(v);
    ASSERT_TRUE(a);
    EXPECT_EQ(a->mean, mean);
    EXPECT_EQ(a->std, std::sqrt(var));
    EXPECT_EQ(a->count, v.size());
  }
  EXPECT_FALSE(aggregate({}).has_value());
}

TEST_F(ReportTest, SerializedForms) {
  const SceneComponents c =
      with_estimate(oracle_suppress(*scene_->components.e, *scene_->components.s, {}));
  const MetricReport report = evaluate_scene(c, classify_scene(c));
  const nlohmann::json j = report_to_json(report);
  EXPECT_EQ(j["gain_domain"], "stft");
  EXPECT_EQ(j["metrics"]["DSML"]["condition"], "DoubleTalk");
  EXPECT_EQ(j["metrics"]["SAR"]["condition"], "NearEndST");
  EXPECT_EQ(j["metrics"]["ERLE"]["condition"], "FarEndST");
  EXPECT_DOUBLE_EQ(j["metrics"]["RESL"]["mean"].get<double>(),
                   report.headline(Metric::kResl)->mean);

  const CsvTable csv = parse_csv(report_to_csv(report));
  const std::vector<std::string> header = {"frame_index", "label", "DSML", "RESL", "SDR",
                                           "SAR", "ERLE", "SER", "SNR"};
  EXPECT_EQ(csv.header, header);
  ASSERT_EQ(csv.rows.size(), report.frames.size());
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    for (std::size_t m = 0; m < kNumMetrics; ++m) {
      const auto& v = report.frames[i].values[m];
      const std::string& cell = csv.rows[i][2 + m];
      if (v) {
        ASSERT_EQ(std::stod(cell), *v);
      } else {
        ASSERT_TRUE(cell.empty());
      }
    }
  }
}

TEST(MetricNamesTest, RoundTrip) {
  for (Metric m : kAllMetrics) EXPECT_EQ(parse_metric(metric_name(m)), m);
  EXPECT_EQ(parse_gain_domain("sample"), GainDomain::kSample);
  EXPECT_FALSE(parse_gain_domain("time").has_value());
}

}  // namespace
}  // namespace reseval
