#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "reseval/activity.h"
#include "reseval/metrics.h"
#include "reseval/report.h"
#include "reseval/signal.h"

namespace reseval {

// One utterance of a manifest. Paths are resolved against the manifest's
// directory. `scene_dir` supplies any component WAV found there
// (s.wav, e.wav, shat.wav, ...); explicit paths take precedence.
struct ManifestEntry {
  std::string id;
  std::optional<std::filesystem::path> scene_dir;
  std::map<std::string, std::filesystem::path> paths;  // component -> file
  std::map<std::string, std::string> tags;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::optional<double> threshold_db;
  std::optional<double> clamp_db;
};

// JSON layout:
//   {"threshold_db": -50, "clamp_db": 120,
//    "entries": [{"id": "u1", "scene_dir": "scene_0",
//                 "s": "s.wav", "e": "e.wav", "s_hat": "shat.wav",
//                 "tags": {"ser_db": "0"}}]}
// Component keys: s x y w m y_hat e s_hat. Throws FormatError on duplicate
// ids, unknown keys, or missing ids.
Manifest manifest_from_json(const nlohmann::json& j,
                            const std::filesystem::path& base_dir);
Manifest read_manifest(const std::filesystem::path& path);
nlohmann::json manifest_to_json(const Manifest& manifest,
                                const std::filesystem::path& base_dir);

// Loads every component the entry names (scene_dir first, then explicit
// paths). Throws IoError / FormatError on unreadable files.
SceneComponents load_entry(const ManifestEntry& entry);

struct SimulateOptions {
  std::filesystem::path spec_file;
  std::filesystem::path out_dir;
  std::size_t count = 1;
  std::optional<std::uint64_t> seed;  // falls back to the scene file's seed
  std::size_t jobs = 1;
};

// Writes out_dir/scene_<seed>/ for each scene plus out_dir/manifest.json
// (entries reference the scene directories, tagged with target SER/SNR).
int cmd_simulate(const SimulateOptions& options, std::ostream& log);

struct SuppressOptions {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  std::optional<double> alpha;  // mapped through beta_schedule
  std::optional<double> beta;   // used as-is when alpha is absent
  double floor = 0.02;
  std::size_t jobs = 1;
};

// Runs the oracle suppressor on each entry (needs s and e), writes
// out_dir/<id>.shat.wav and out_dir/manifest.json pointing at them.
int cmd_suppress(const SuppressOptions& options, std::ostream& log);

struct EvaluateCommandOptions {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  std::optional<double> threshold_db;  // manifest value, then -50
  std::optional<double> clamp_db;      // manifest value, then 120
  GainDomain gain_domain = GainDomain::kStft;
  std::size_t jobs = 1;
};

// Writes out_dir/frames/<id>.csv (per-frame metrics), out_dir/summary.csv
// (per-utterance headline means, usable as a score table) and
// out_dir/report.json (per-metric mean and std across utterances of the
// per-utterance means, plus per-entry errors). Failing entries are recorded
// and skipped; the return value is nonzero if any entry failed.
int cmd_evaluate(const EvaluateCommandOptions& options, std::ostream& log);

struct SweepOptions {
  std::optional<std::filesystem::path> manifest;
  std::optional<std::filesystem::path> spec_file;
  std::size_t count = 20;              // scenes generated from spec_file
  std::optional<std::uint64_t> seed;
  std::vector<double> alphas;
  std::filesystem::path out_table;
  std::vector<std::string> group_by;   // spec fields (ser_db, snr_db) or tags
  double floor = 0.02;
  double threshold_db = kDefaultThresholdDb;
  double clamp_db = kDefaultClampDb;
  GainDomain gain_domain = GainDomain::kStft;
  std::size_t jobs = 1;
};

// Per alpha (and group), mean across utterances of each headline metric.
// Columns: group columns..., alpha, beta, n, DSML, RESL, SDR, SAR, ERLE,
// SER, SNR.
int cmd_sweep(const SweepOptions& options, std::ostream& log);

struct CorrelateOptions {
  std::filesystem::path table;
  std::optional<std::filesystem::path> scores;  // joined on id when given
  std::vector<std::string> metric_cols;
  std::string score_col;
  std::optional<std::string> group_by;
  std::optional<std::filesystem::path> out;
};

// Prints and (optionally) writes group,metric,score,pcc,srcc,n rows.
int cmd_correlate(const CorrelateOptions& options, std::ostream& out,
                  std::ostream& log);

// Per-utterance headline means as used by summary.csv and cmd_sweep.
std::map<Metric, std::optional<double>> headline_means(const MetricReport& report);

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Exceptions propagate
// after all workers finish (the first one wins).
void parallel_for(std::size_t n, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn);

}  // namespace reseval
