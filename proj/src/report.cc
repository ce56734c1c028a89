#include "reseval/report.h"

#include <cmath>

#include "reseval/csv.h"
#include "reseval/error.h"
#include "reseval/stft.h"

namespace reseval {

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::kDsml: return "DSML";
    case Metric::kResl: return "RESL";
    case Metric::kSdr: return "SDR";
    case Metric::kSar: return "SAR";
    case Metric::kErle: return "ERLE";
    case Metric::kSer: return "SER";
    case Metric::kSnr: return "SNR";
  }
  return "";
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  return std::nullopt;
}

FrameLabel defining_condition(Metric metric) {
  switch (metric) {
    case Metric::kSar: return FrameLabel::kNearEndST;
    case Metric::kErle: return FrameLabel::kFarEndST;
    default: return FrameLabel::kDoubleTalk;
  }
}

std::string_view gain_domain_name(GainDomain domain) {
  return domain == GainDomain::kStft ? "stft" : "sample";
}

std::optional<GainDomain> parse_gain_domain(std::string_view name) {
  if (name == "stft") return GainDomain::kStft;
  if (name == "sample") return GainDomain::kSample;
  return std::nullopt;
}

const std::vector<double>& one_sided_weights() {
  static const std::vector<double> weights = [] {
    std::vector<double> w(kBins, 2.0);
    w.front() = 1.0;
    w.back() = 1.0;
    return w;
  }();
  return weights;
}

std::optional<Aggregate> aggregate(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  Aggregate agg;
  agg.count = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  agg.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - agg.mean) * (v - agg.mean);
  agg.std = std::sqrt(sq / static_cast<double>(values.size()));
  return agg;
}

std::optional<Aggregate> MetricReport::headline(Metric metric) const {
  auto it = aggregates.find(metric);
  if (it == aggregates.end()) return std::nullopt;
  auto jt = it->second.find(defining_condition(metric));
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

MetricReport evaluate_scene(const SceneComponents& scene,
                            const ActivityMask& mask,
                            const EvaluateOptions& options) {
  const Signal& s = scene.require("s");
  const Signal& e = scene.require("e");
  const Signal& s_hat = scene.require("s_hat");
  check_scene(scene);
  if (mask.grid != make_grid(s.size()) || mask.labels.size() != mask.grid.n_frames) {
    throw PreconditionError("activity mask grid does not match the scene");
  }
  const double clamp = options.clamp_db;
  const FrameGrid& grid = mask.grid;

  MetricReport report;
  report.clamp_db = clamp;
  report.threshold_db = mask.threshold_db;
  report.gain_domain = options.gain_domain;
  report.frames.resize(grid.n_frames);

  struct FrameSpectra {
    Spectrogram s, e, s_hat;
  };
  std::optional<FrameSpectra> spectra;
  if (options.gain_domain == GainDomain::kStft && grid.n_frames > 0) {
    spectra = FrameSpectra{stft(s), stft(e), stft(s_hat)};
  }
  auto bins = [](const Spectrogram& spec, std::size_t f) {
    std::vector<std::complex<double>> out(kBins);
    for (std::size_t k = 0; k < kBins; ++k) out[k] = spec.value(f, k);
    return out;
  };
  for (FrameLabel l : kAllLabels) report.label_counts[l] = mask.count(l);

  for (std::size_t f = 0; f < grid.n_frames; ++f) {
    FrameMetrics& fm = report.frames[f];
    fm.label = mask.labels[f];
    auto sf = grid.frame(s.samples(), f);
    auto ef = grid.frame(e.samples(), f);
    auto hf = grid.frame(s_hat.samples(), f);
    switch (fm.label) {
      case FrameLabel::kDoubleTalk: {
        if (spectra) {
          const auto sb = bins(spectra->s, f);
          const auto eb = bins(spectra->e, f);
          const auto g = compute_gain(Bins(bins(spectra->s_hat, f)), Bins(eb));
          const auto& w = one_sided_weights();
          fm[Metric::kDsml] = dsml(Bins(sb), Bins(g), w, clamp);
          fm[Metric::kResl] = resl(Bins(sb), Bins(eb), Bins(g), w, clamp);
        } else {
          const auto g = compute_gain(hf, ef);
          fm[Metric::kDsml] = dsml(sf, g, clamp);
          fm[Metric::kResl] = resl(sf, ef, g, clamp);
        }
        fm[Metric::kSdr] = sdr(sf, hf, clamp);
        break;
      }
      case FrameLabel::kNearEndST:
        fm[Metric::kSar] = sar(sf, hf, clamp);
        break;
      case FrameLabel::kFarEndST:
        fm[Metric::kErle] = erle(ef, hf, clamp);
        break;
      case FrameLabel::kSilence:
        break;
    }
    if (scene.y) fm[Metric::kSer] = ser(sf, grid.frame(scene.y->samples(), f), clamp);
    if (scene.w) fm[Metric::kSnr] = snr(sf, grid.frame(scene.w->samples(), f), clamp);
  }

  for (Metric m : kAllMetrics) {
    for (FrameLabel l : kAllLabels) {
      std::vector<double> values;
      for (const auto& fm : report.frames) {
        if (fm.label == l && fm[m]) values.push_back(*fm[m]);
      }
      if (auto agg = aggregate(values)) report.aggregates[m][l] = *agg;
    }
  }
  return report;
}

nlohmann::json report_to_json(const MetricReport& report) {
  nlohmann::json j;
  j["clamp_db"] = report.clamp_db;
  j["threshold_db"] = report.threshold_db;
  j["gain_domain"] = std::string(gain_domain_name(report.gain_domain));
  j["n_frames"] = report.frames.size();
  for (const auto& [label, n] : report.label_counts) {
    j["frame_counts"][std::string(label_name(label))] = n;
  }
  for (Metric m : kAllMetrics) {
    nlohmann::json node;
    node["condition"] = std::string(label_name(defining_condition(m)));
    auto head = report.headline(m);
    if (head) {
      node["mean"] = head->mean;
      node["std"] = head->std;
      node["count"] = head->count;
    } else {
      node["mean"] = nullptr;
      node["std"] = nullptr;
      node["count"] = 0;
    }
    nlohmann::json by_condition = nlohmann::json::object();
    auto it = report.aggregates.find(m);
    for (FrameLabel l : kAllLabels) {
      const std::string key(label_name(l));
      if (it != report.aggregates.end() && it->second.count(l)) {
        const Aggregate& a = it->second.at(l);
        by_condition[key] = {{"mean", a.mean}, {"std", a.std}, {"count", a.count}};
      } else {
        by_condition[key] = nullptr;
      }
    }
    node["by_condition"] = by_condition;
    j["metrics"][std::string(metric_name(m))] = node;
  }
  return j;
}

std::string report_to_csv(const MetricReport& report) {
  std::string out = "frame_index,label";
  for (Metric m : kAllMetrics) {
    out += ',';
    out += metric_name(m);
  }
  out += '\n';
  for (std::size_t f = 0; f < report.frames.size(); ++f) {
    const auto& fm = report.frames[f];
    out += std::to_string(f);
    out += ',';
    out += label_name(fm.label);
    for (Metric m : kAllMetrics) {
      out += ',';
      if (fm[m]) out += format_double(*fm[m]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace reseval
