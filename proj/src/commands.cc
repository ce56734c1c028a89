#include "reseval/commands.h"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "reseval/csv.h"
#include "reseval/error.h"
#include "reseval/scene.h"
#include "reseval/stats.h"
#include "reseval/suppressor.h"
#include "reseval/wav.h"

namespace reseval {
namespace fs = std::filesystem;

namespace {

constexpr const char* kComponentKeys[] = {"s", "x",     "y", "w",
                                          "m", "y_hat", "e", "s_hat"};

bool is_component(const std::string& key) {
  return std::find_if(std::begin(kComponentKeys), std::end(kComponentKeys),
                      [&key](const char* k) { return key == k; }) !=
         std::end(kComponentKeys);
}

fs::path resolve(const fs::path& base, const fs::path& p) {
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

fs::path relative_to(const fs::path& p, const fs::path& base) {
  const fs::path abs_p = fs::absolute(p).lexically_normal();
  const fs::path abs_base = fs::absolute(base).lexically_normal();
  fs::path rel = abs_p.lexically_relative(abs_base);
  return rel.empty() ? abs_p : rel;
}

std::optional<Signal>& component_slot(SceneComponents& c, const std::string& key) {
  if (key == "s") return c.s;
  if (key == "x") return c.x;
  if (key == "y") return c.y;
  if (key == "w") return c.w;
  if (key == "m") return c.m;
  if (key == "y_hat") return c.y_hat;
  if (key == "e") return c.e;
  return c.s_hat;
}

std::string tag_value(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return format_double(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  throw FormatError("manifest tag values must be strings, numbers or booleans");
}

nlohmann::json read_json(const fs::path& path) {
  const std::string text = read_text(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("RES_EVAL_SEED");
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long seed = std::strtoull(v, &end, 10);
  if (end == nullptr || *end != '\0') {
    throw FormatError("RES_EVAL_SEED must be a nonnegative integer");
  }
  return seed;
}

std::string cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

void parallel_for(std::size_t n, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::mutex mu;
  std::size_t next = 0;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(mu);
        if (next >= n || first_error) return;
        i = next++;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

Manifest manifest_from_json(const nlohmann::json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw FormatError("manifest must be a JSON object");
  Manifest manifest;
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key == "threshold_db" || key == "clamp_db") {
      if (!item.value().is_number()) {
        throw FormatError("manifest field '" + key + "' must be a number");
      }
      (key == "threshold_db" ? manifest.threshold_db : manifest.clamp_db) =
          item.value().get<double>();
    } else if (key != "entries") {
      throw FormatError("manifest field '" + key + "' is unknown");
    }
  }
  if (!j.contains("entries") || !j.at("entries").is_array()) {
    throw FormatError("manifest needs an 'entries' array");
  }
  std::set<std::string> ids;
  for (const auto& e : j.at("entries")) {
    if (!e.is_object()) throw FormatError("manifest entries must be objects");
    ManifestEntry entry;
    if (!e.contains("id") || !e.at("id").is_string()) {
      throw FormatError("manifest entry without a string 'id'");
    }
    entry.id = e.at("id").get<std::string>();
    if (entry.id.empty()) throw FormatError("manifest entry id is empty");
    if (!ids.insert(entry.id).second) {
      throw FormatError("manifest id '" + entry.id + "' is not unique");
    }
    for (const auto& item : e.items()) {
      const std::string& key = item.key();
      if (key == "id") continue;
      if (key == "scene_dir") {
        entry.scene_dir = resolve(base_dir, item.value().get<std::string>());
      } else if (key == "tags") {
        if (!item.value().is_object()) {
          throw FormatError("manifest entry '" + entry.id + "': tags must be an object");
        }
        for (const auto& t : item.value().items()) {
          entry.tags[t.key()] = tag_value(t.value());
        }
      } else if (is_component(key)) {
        if (!item.value().is_string()) {
          throw FormatError("manifest entry '" + entry.id + "': '" + key +
                            "' must be a path string");
        }
        entry.paths[key] = resolve(base_dir, item.value().get<std::string>());
      } else {
        throw FormatError("manifest entry '" + entry.id + "': field '" + key +
                          "' is unknown");
      }
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

Manifest read_manifest(const fs::path& path) {
  return manifest_from_json(read_json(path), path.parent_path());
}

nlohmann::json manifest_to_json(const Manifest& manifest, const fs::path& base_dir) {
  nlohmann::json j;
  if (manifest.threshold_db) j["threshold_db"] = *manifest.threshold_db;
  if (manifest.clamp_db) j["clamp_db"] = *manifest.clamp_db;
  j["entries"] = nlohmann::json::array();
  for (const auto& entry : manifest.entries) {
    nlohmann::json e;
    e["id"] = entry.id;
    if (entry.scene_dir) e["scene_dir"] = relative_to(*entry.scene_dir, base_dir).generic_string();
    for (const auto& [key, path] : entry.paths) {
      e[key] = relative_to(path, base_dir).generic_string();
    }
    if (!entry.tags.empty()) e["tags"] = entry.tags;
    j["entries"].push_back(std::move(e));
  }
  return j;
}

SceneComponents load_entry(const ManifestEntry& entry) {
  SceneComponents c;
  if (entry.scene_dir) {
    if (!fs::is_directory(*entry.scene_dir)) {
      throw IoError("scene directory " + entry.scene_dir->string() + " not found");
    }
    c = load_scene(*entry.scene_dir);
  }
  for (const auto& [key, path] : entry.paths) {
    component_slot(c, key) = load_wav(path);
  }
  return c;
}

std::map<Metric, std::optional<double>> headline_means(const MetricReport& report) {
  std::map<Metric, std::optional<double>> out;
  for (Metric m : kAllMetrics) {
    auto h = report.headline(m);
    out[m] = h ? std::optional<double>(h->mean) : std::nullopt;
  }
  return out;
}

int cmd_simulate(const SimulateOptions& options, std::ostream& log) {
  if (options.count < 1) throw PreconditionError("simulate: count must be >= 1");
  const nlohmann::json spec_json = read_json(options.spec_file);
  std::uint64_t seed = 0;
  if (options.seed) {
    seed = *options.seed;
  } else if (auto env = env_seed()) {
    seed = *env;
  } else if (spec_json.is_object() && spec_json.contains("seed")) {
    seed = scene_spec_from_json({{"seed", spec_json.at("seed")}}).seed;
  }
  const auto specs = parse_scene_specs(spec_json, options.count, seed);
  fs::create_directories(options.out_dir);

  Manifest manifest;
  manifest.entries.resize(specs.size());
  parallel_for(specs.size(), options.jobs, [&](std::size_t i) {
    const SceneSpec& spec = specs[i];
    const std::string id = "scene_" + std::to_string(spec.seed);
    const fs::path dir = options.out_dir / id;
    const GeneratedScene scene = generate_scene(spec);
    save_scene(dir, scene, spec);
    ManifestEntry& entry = manifest.entries[i];
    entry.id = id;
    entry.scene_dir = dir;
    entry.tags["seed"] = std::to_string(spec.seed);
    entry.tags["ser_db"] = format_double(spec.ser_db);
    entry.tags["snr_db"] = format_double(spec.snr_db);
  });
  write_text_atomic(options.out_dir / "manifest.json",
                    manifest_to_json(manifest, options.out_dir).dump(2) + "\n");
  log << "simulated " << specs.size() << " scene(s) into " << options.out_dir.string()
      << "\n";
  return 0;
}

int cmd_suppress(const SuppressOptions& options, std::ostream& log) {
  double beta = 1.0;
  if (options.alpha) {
    const double a[] = {*options.alpha};
    beta = beta_schedule(a).front();
  } else if (options.beta) {
    beta = *options.beta;
  }
  const SuppressorConfig config{beta, options.floor};
  validate(config);

  Manifest manifest = read_manifest(options.manifest);
  if (manifest.entries.empty()) throw PreconditionError("manifest has no entries");
  fs::create_directories(options.out_dir);
  std::vector<std::string> errors(manifest.entries.size());
  parallel_for(manifest.entries.size(), options.jobs, [&](std::size_t i) {
    ManifestEntry& entry = manifest.entries[i];
    try {
      const SceneComponents c = load_entry(entry);
      const Signal s_hat = oracle_suppress(c.require("e"), c.require("s"), config);
      const fs::path out = options.out_dir / (entry.id + ".shat.wav");
      save_wav(s_hat, out);
      entry.paths["s_hat"] = out;
      entry.tags["beta"] = format_double(beta);
      if (options.alpha) entry.tags["alpha"] = format_double(*options.alpha);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  int failed = 0;
  Manifest out_manifest;
  out_manifest.threshold_db = manifest.threshold_db;
  out_manifest.clamp_db = manifest.clamp_db;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    if (!errors[i].empty()) {
      ++failed;
      log << "error: " << manifest.entries[i].id << ": " << errors[i] << "\n";
      continue;
    }
    out_manifest.entries.push_back(manifest.entries[i]);
  }
  write_text_atomic(options.out_dir / "manifest.json",
                    manifest_to_json(out_manifest, options.out_dir).dump(2) + "\n");
  log << "suppressed " << out_manifest.entries.size() << " entr"
      << (out_manifest.entries.size() == 1 ? "y" : "ies") << " (beta "
      << format_double(beta) << ")\n";
  return failed == 0 ? 0 : 1;
}

int cmd_evaluate(const EvaluateCommandOptions& options, std::ostream& log) {
  const Manifest manifest = read_manifest(options.manifest);
  if (manifest.entries.empty()) throw PreconditionError("no entries");
  const double threshold =
      options.threshold_db.value_or(manifest.threshold_db.value_or(kDefaultThresholdDb));
  const double clamp = options.clamp_db.value_or(manifest.clamp_db.value_or(kDefaultClampDb));
  if (!(clamp > 0.0)) throw PreconditionError("clamp bound must be positive");
  const EvaluateOptions eval{clamp, options.gain_domain};

  const fs::path frames_dir = options.out_dir / "frames";
  fs::create_directories(frames_dir);

  const std::size_t n = manifest.entries.size();
  std::vector<std::optional<MetricReport>> reports(n);
  std::vector<std::string> errors(n);
  parallel_for(n, options.jobs, [&](std::size_t i) {
    const ManifestEntry& entry = manifest.entries[i];
    try {
      const SceneComponents c = load_entry(entry);
      c.require("s");
      c.require("e");
      c.require("s_hat");
      const ActivityMask mask = classify_scene(c, threshold);
      MetricReport report = evaluate_scene(c, mask, eval);
      write_text_atomic(frames_dir / (entry.id + ".csv"), report_to_csv(report));
      reports[i] = std::move(report);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::set<std::string> tag_keys;
  for (const auto& entry : manifest.entries) {
    for (const auto& [k, v] : entry.tags) tag_keys.insert(k);
  }
  CsvTable summary;
  summary.header.push_back("id");
  summary.header.insert(summary.header.end(), tag_keys.begin(), tag_keys.end());
  for (Metric m : kAllMetrics) summary.header.emplace_back(metric_name(m));

  nlohmann::json j;
  j["gain_domain"] = std::string(gain_domain_name(options.gain_domain));
  j["threshold_db"] = threshold;
  j["clamp_db"] = clamp;
  j["n_entries"] = n;
  j["errors"] = nlohmann::json::array();
  j["utterances"] = nlohmann::json::object();
  std::map<Metric, std::vector<double>> per_utterance;
  int failed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const ManifestEntry& entry = manifest.entries[i];
    if (!reports[i]) {
      ++failed;
      j["errors"].push_back({{"id", entry.id}, {"message", errors[i]}});
      log << "error: " << entry.id << ": " << errors[i] << "\n";
      continue;
    }
    const auto means = headline_means(*reports[i]);
    std::vector<std::string> row{entry.id};
    for (const auto& k : tag_keys) {
      auto it = entry.tags.find(k);
      row.push_back(it == entry.tags.end() ? "" : it->second);
    }
    nlohmann::json utt = report_to_json(*reports[i]);
    for (Metric m : kAllMetrics) {
      row.push_back(cell(means.at(m)));
      if (means.at(m)) per_utterance[m].push_back(*means.at(m));
    }
    summary.rows.push_back(std::move(row));
    j["utterances"][entry.id] = std::move(utt);
  }
  j["n_failed"] = failed;
  for (Metric m : kAllMetrics) {
    nlohmann::json node;
    node["condition"] = std::string(label_name(defining_condition(m)));
    auto agg = aggregate(per_utterance[m]);
    node["mean"] = agg ? nlohmann::json(agg->mean) : nlohmann::json(nullptr);
    node["std"] = agg ? nlohmann::json(agg->std) : nlohmann::json(nullptr);
    node["n_utterances"] = agg ? agg->count : 0;
    j["metrics"][std::string(metric_name(m))] = node;
  }
  write_text_atomic(options.out_dir / "summary.csv", to_csv(summary));
  write_text_atomic(options.out_dir / "report.json", j.dump(2) + "\n");
  log << "evaluated " << (n - failed) << "/" << n << " entries";
  for (Metric m : {Metric::kDsml, Metric::kResl, Metric::kSdr}) {
    auto agg = aggregate(per_utterance[m]);
    if (agg) log << "  " << metric_name(m) << " " << format_double(agg->mean);
  }
  log << "\n";
  return failed == 0 ? 0 : 1;
}

int cmd_sweep(const SweepOptions& options, std::ostream& log) {
  if (options.alphas.empty()) throw PreconditionError("sweep: empty alpha list");
  const auto betas = beta_schedule(options.alphas);
  if (options.manifest.has_value() == options.spec_file.has_value()) {
    throw PreconditionError("sweep: give exactly one of a manifest or a spec file");
  }

  // Each unit yields a scene plus its group labels.
  struct Unit {
    std::string id;
    std::map<std::string, std::string> labels;
    std::function<SceneComponents()> load;
  };
  std::vector<Unit> units;
  if (options.spec_file) {
    const nlohmann::json spec_json = read_json(*options.spec_file);
    std::uint64_t seed = options.seed.value_or(env_seed().value_or(0));
    const auto specs = parse_scene_specs(spec_json, options.count, seed);
    for (const auto& spec : specs) {
      Unit u;
      u.id = "scene_" + std::to_string(spec.seed);
      const auto sj = scene_spec_to_json(spec);
      for (const auto& g : options.group_by) {
        if (!sj.contains(g) || !sj.at(g).is_number()) {
          throw PreconditionError("sweep: cannot group by '" + g +
                                  "' (use a numeric scene spec field such as ser_db)");
        }
        u.labels[g] = format_double(sj.at(g).get<double>());
      }
      u.load = [spec] { return generate_scene(spec).components; };
      units.push_back(std::move(u));
    }
  } else {
    const Manifest manifest = read_manifest(*options.manifest);
    if (manifest.entries.empty()) throw PreconditionError("no entries");
    for (const auto& entry : manifest.entries) {
      Unit u;
      u.id = entry.id;
      for (const auto& g : options.group_by) {
        auto it = entry.tags.find(g);
        if (it == entry.tags.end()) {
          throw PreconditionError("sweep: entry '" + entry.id + "' has no tag '" + g + "'");
        }
        u.labels[g] = it->second;
      }
      u.load = [entry] { return load_entry(entry); };
      units.push_back(std::move(u));
    }
  }

  const EvaluateOptions eval{options.clamp_db, options.gain_domain};
  // results[unit][alpha] -> headline means
  std::vector<std::vector<std::map<Metric, std::optional<double>>>> results(units.size());
  std::vector<std::string> errors(units.size());
  parallel_for(units.size(), options.jobs, [&](std::size_t i) {
    try {
      SceneComponents c = units[i].load();
      const Signal& s = c.require("s");
      const Signal& e = c.require("e");
      const ActivityMask mask = classify_scene(c, options.threshold_db);
      for (double beta : betas) {
        c.s_hat = oracle_suppress(e, s, {beta, options.floor});
        results[i].push_back(headline_means(evaluate_scene(c, mask, eval)));
      }
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  });

  int failed = 0;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (!errors[i].empty()) {
      ++failed;
      log << "error: " << units[i].id << ": " << errors[i] << "\n";
    }
  }

  std::vector<std::map<std::string, std::string>> groups;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (!errors[i].empty()) continue;
    if (std::find(groups.begin(), groups.end(), units[i].labels) == groups.end()) {
      groups.push_back(units[i].labels);
    }
  }

  CsvTable table;
  table.header = options.group_by;
  for (const char* h : {"alpha", "beta", "n"}) table.header.emplace_back(h);
  for (Metric m : kAllMetrics) table.header.emplace_back(metric_name(m));
  for (const auto& group : groups) {
    for (std::size_t a = 0; a < betas.size(); ++a) {
      std::map<Metric, std::vector<double>> values;
      std::size_t count = 0;
      for (std::size_t i = 0; i < units.size(); ++i) {
        if (!errors[i].empty() || units[i].labels != group) continue;
        ++count;
        for (const auto& [m, v] : results[i][a]) {
          if (v) values[m].push_back(*v);
        }
      }
      std::vector<std::string> row;
      for (const auto& g : options.group_by) row.push_back(group.at(g));
      row.push_back(format_double(options.alphas[a]));
      row.push_back(format_double(betas[a]));
      row.push_back(std::to_string(count));
      for (Metric m : kAllMetrics) {
        auto agg = aggregate(values[m]);
        row.push_back(agg ? format_double(agg->mean) : "");
      }
      table.rows.push_back(std::move(row));
    }
  }
  if (!options.out_table.parent_path().empty()) {
    fs::create_directories(options.out_table.parent_path());
  }
  write_text_atomic(options.out_table, to_csv(table));
  log << "sweep: " << (units.size() - failed) << " scene(s) x " << betas.size()
      << " alpha value(s) -> " << options.out_table.string() << "\n";
  return failed == 0 ? 0 : 1;
}

namespace {

// Left-joins `scores` onto `table` by id, appending the score columns.
std::string join_on_id(const fs::path& table_path, const fs::path& scores_path) {
  CsvTable left = read_csv(table_path);
  const CsvTable right = read_csv(scores_path);
  const int lid = std::max(0, left.column("id"));
  const int rid = std::max(0, right.column("id"));
  std::map<std::string, const std::vector<std::string>*> by_id;
  for (const auto& row : right.rows) by_id[row[static_cast<std::size_t>(rid)]] = &row;
  std::vector<std::size_t> extra;
  for (std::size_t c = 0; c < right.header.size(); ++c) {
    if (static_cast<int>(c) == rid) continue;
    if (left.column(right.header[c]) >= 0) {
      throw FormatError("score file column '" + right.header[c] +
                        "' already exists in the metric table");
    }
    extra.push_back(c);
    left.header.push_back(right.header[c]);
  }
  for (auto& row : left.rows) {
    auto it = by_id.find(row[static_cast<std::size_t>(lid)]);
    for (std::size_t c : extra) {
      row.push_back(it == by_id.end() ? "" : (*it->second)[c]);
    }
  }
  return to_csv(left);
}

}  // namespace

int cmd_correlate(const CorrelateOptions& options, std::ostream& out,
                  std::ostream& log) {
  if (options.metric_cols.empty()) throw PreconditionError("correlate: no metric column");
  const ScoreTable table =
      options.scores ? parse_score_table(join_on_id(options.table, *options.scores))
                     : read_score_table(options.table);
  CsvTable result;
  result.header = {"group", "metric", "score", "pcc", "srcc", "n"};
  int failed = 0;
  auto emit = [&](const std::string& group, const std::string& metric) {
    try {
      const Correlation c =
          options.group_by
              ? correlate_table(table, metric, options.score_col, *options.group_by, group)
              : correlate_table(table, metric, options.score_col);
      result.rows.push_back({group, metric, options.score_col, format_double(c.pcc),
                             format_double(c.srcc), std::to_string(c.n)});
      out << (group.empty() ? "" : options.group_by.value() + "=" + group + " ") << metric
          << " vs " << options.score_col << ": PCC " << format_double(c.pcc) << " SRCC "
          << format_double(c.srcc) << " n " << c.n << "\n";
    } catch (const PreconditionError& e) {
      // An unknown column is fatal; a degenerate group is reported and skipped.
      if (table.column(metric) < 0 || table.column(options.score_col) < 0) throw;
      ++failed;
      log << "error: " << (group.empty() ? "" : group + ": ") << e.what() << "\n";
    }
  };
  std::vector<std::string> groups{""};
  if (options.group_by) groups = group_values(table, *options.group_by);
  for (const auto& g : groups) {
    for (const auto& m : options.metric_cols) emit(g, m);
  }
  if (options.out) write_text_atomic(*options.out, to_csv(result));
  return failed == 0 ? 0 : 1;
}

}  // namespace reseval
