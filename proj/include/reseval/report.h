#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "reseval/activity.h"
#include "reseval/metrics.h"
#include "reseval/signal.h"

namespace reseval {

enum class Metric { kDsml, kResl, kSdr, kSar, kErle, kSer, kSnr };

inline constexpr std::size_t kNumMetrics = 7;
inline constexpr Metric kAllMetrics[kNumMetrics] = {
    Metric::kDsml, Metric::kResl, Metric::kSdr, Metric::kSar,
    Metric::kErle, Metric::kSer,  Metric::kSnr};

std::string_view metric_name(Metric metric);
std::optional<Metric> parse_metric(std::string_view name);

// The frame condition a metric is defined on. SER and SNR are evaluated on
// every frame; their headline condition is double-talk.
FrameLabel defining_condition(Metric metric);

struct Aggregate {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  std::size_t count = 0;
};

// Two-pass mean and population std. Empty input gives nullopt.
std::optional<Aggregate> aggregate(const std::vector<double>& values);

// Bin weights turning one-sided spectral sums into full-spectrum energies.
const std::vector<double>& one_sided_weights();

// Where the RES gain g = s_hat / e is formed for DSML and RESL.
//   kStft:   per bin of each frame's STFT (the frame lattice is the STFT
//            lattice), so a mask-based suppressor's gain is its mask.
//   kSample: per sample, g(n) = s_hat(n) / e(n).
enum class GainDomain { kStft, kSample };

std::string_view gain_domain_name(GainDomain domain);
std::optional<GainDomain> parse_gain_domain(std::string_view name);

struct FrameMetrics {
  FrameLabel label = FrameLabel::kSilence;
  std::array<std::optional<double>, kNumMetrics> values;

  const std::optional<double>& operator[](Metric m) const {
    return values[static_cast<std::size_t>(m)];
  }
  std::optional<double>& operator[](Metric m) {
    return values[static_cast<std::size_t>(m)];
  }
};

struct MetricReport {
  std::vector<FrameMetrics> frames;
  // metric -> condition -> aggregate over the frames of that condition that
  // carry a value. A missing key means the metric is absent there.
  std::map<Metric, std::map<FrameLabel, Aggregate>> aggregates;
  std::map<FrameLabel, std::size_t> label_counts;
  double clamp_db = kDefaultClampDb;
  double threshold_db = kDefaultThresholdDb;
  GainDomain gain_domain = GainDomain::kStft;

  // Aggregate on the metric's defining condition, if any frame contributed.
  std::optional<Aggregate> headline(Metric metric) const;
};

struct EvaluateOptions {
  double clamp_db = kDefaultClampDb;
  GainDomain gain_domain = GainDomain::kStft;
};

// Per-frame metrics on the mask's grid: DSML/RESL/SDR on double-talk, SAR on
// near-end single-talk, ERLE on far-end single-talk, SER/SNR on every frame
// where y/w are present. Requires s, e and s_hat.
MetricReport evaluate_scene(const SceneComponents& scene,
                            const ActivityMask& mask,
                            const EvaluateOptions& options = {});

// Nested per-metric aggregates; absent metrics serialize as null.
nlohmann::json report_to_json(const MetricReport& report);

// One row per frame: frame_index,label,DSML,...,SNR. Absent values are empty
// cells; present values use round-trip precision.
std::string report_to_csv(const MetricReport& report);

}  // namespace reseval
