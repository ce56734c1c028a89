#include "reseval/scene.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "reseval/csv.h"
#include "reseval/error.h"
#include "reseval/wav.h"

namespace reseval {
namespace {

// Independent generator per (seed, stream).
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

enum Stream : std::uint64_t {
  kScheduleStream = 1,
  kNearStream = 2,
  kFarStream = 3,
  kNoiseStream = 4,
  kRirStream = 5,
  kRirChangedStream = 6,
};

// Top-level keys accepted in a scene spec file.
constexpr const char* kSpecKeys[] = {
    "duration_s", "seed",    "ser_db",        "snr_db",
    "clip_hardness", "t60_s", "rir_len",      "echo_path_change_at_s",
    "aec",        "source"};

double number_field(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw FormatError(std::string("scene spec field '") + key +
                                        "' must be a number");
  return v.get<double>();
}

std::size_t count_field(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw FormatError(std::string("scene spec field '") + key +
                      "' must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> convolve_prefix(const std::vector<double>& h,
                                    const std::vector<double>& x,
                                    std::size_t begin, std::size_t end) {
  std::vector<double> out(end - begin, 0.0);
  for (std::size_t n = begin; n < end; ++n) {
    const std::size_t kmax = std::min(h.size(), n + 1);
    double acc = 0.0;
    for (std::size_t k = 0; k < kmax; ++k) acc += h[k] * x[n - k];
    out[n - begin] = acc;
  }
  return out;
}

}  // namespace

void validate(const SceneSpec& spec) {
  auto fail = [](const std::string& field, const std::string& why) {
    throw PreconditionError("scene spec field '" + field + "' " + why);
  };
  if (!(spec.duration_s > 0.0) || !std::isfinite(spec.duration_s)) fail("duration_s", "must be > 0");
  if (!std::isfinite(spec.ser_db)) fail("ser_db", "must be finite");
  if (!std::isfinite(spec.snr_db)) fail("snr_db", "must be finite");
  if (!(spec.clip_hardness > 0.0) || !std::isfinite(spec.clip_hardness)) fail("clip_hardness", "must be > 0");
  if (!(spec.t60_s > 0.0) || !std::isfinite(spec.t60_s)) fail("t60_s", "must be > 0");
  if (spec.rir_len < 1) fail("rir_len", "must be >= 1");
  if (spec.aec.taps < 1) fail("aec.taps", "must be >= 1");
  if (!(spec.aec.step > 0.0 && spec.aec.step <= 1.0)) fail("aec.step", "must lie in (0, 1]");
  if (spec.aec.passes < 1) fail("aec.passes", "must be >= 1");
  if (spec.echo_path_change_at_s &&
      !(*spec.echo_path_change_at_s >= 0.0 && *spec.echo_path_change_at_s < spec.duration_s)) {
    fail("echo_path_change_at_s", "must lie within the scene duration");
  }
  if (spec.source_mode == SourceMode::kWav &&
      (spec.s_path.empty() || spec.x_path.empty())) {
    fail("source", "wav mode needs s_path and x_path");
  }
}

SceneSpec scene_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("scene spec must be a JSON object");
  const std::set<std::string> known(std::begin(kSpecKeys), std::end(kSpecKeys));
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) {
      throw FormatError("scene spec field '" + item.key() + "' is unknown");
    }
  }
  SceneSpec spec;
  if (j.contains("duration_s")) spec.duration_s = number_field(j, "duration_s");
  if (j.contains("seed")) spec.seed = count_field(j, "seed");
  if (j.contains("ser_db")) spec.ser_db = number_field(j, "ser_db");
  if (j.contains("snr_db")) spec.snr_db = number_field(j, "snr_db");
  if (j.contains("clip_hardness")) spec.clip_hardness = number_field(j, "clip_hardness");
  if (j.contains("t60_s")) spec.t60_s = number_field(j, "t60_s");
  if (j.contains("rir_len")) spec.rir_len = count_field(j, "rir_len");
  if (j.contains("echo_path_change_at_s") && !j.at("echo_path_change_at_s").is_null()) {
    spec.echo_path_change_at_s = number_field(j, "echo_path_change_at_s");
  }
  if (j.contains("aec")) {
    const auto& a = j.at("aec");
    if (!a.is_object()) throw FormatError("scene spec field 'aec' must be an object");
    for (const auto& item : a.items()) {
      if (item.key() != "taps" && item.key() != "step" && item.key() != "passes") {
        throw FormatError("scene spec field 'aec." + item.key() + "' is unknown");
      }
    }
    if (a.contains("taps")) spec.aec.taps = count_field(a, "taps");
    if (a.contains("step")) spec.aec.step = number_field(a, "step");
    if (a.contains("passes")) spec.aec.passes = count_field(a, "passes");
  }
  if (j.contains("source")) {
    const auto& src = j.at("source");
    if (!src.is_object()) throw FormatError("scene spec field 'source' must be an object");
    const std::string mode = src.value("mode", "synthetic");
    if (mode == "synthetic") {
      spec.source_mode = SourceMode::kSynthetic;
    } else if (mode == "wav") {
      spec.source_mode = SourceMode::kWav;
      spec.s_path = src.value("s_path", "");
      spec.x_path = src.value("x_path", "");
    } else {
      throw FormatError("scene spec field 'source.mode' must be 'synthetic' or 'wav'");
    }
  }
  validate(spec);
  return spec;
}

nlohmann::json scene_spec_to_json(const SceneSpec& spec) {
  nlohmann::json j;
  j["duration_s"] = spec.duration_s;
  j["seed"] = spec.seed;
  j["ser_db"] = spec.ser_db;
  j["snr_db"] = spec.snr_db;
  j["clip_hardness"] = spec.clip_hardness;
  j["t60_s"] = spec.t60_s;
  j["rir_len"] = spec.rir_len;
  j["echo_path_change_at_s"] =
      spec.echo_path_change_at_s ? nlohmann::json(*spec.echo_path_change_at_s)
                                 : nlohmann::json(nullptr);
  j["aec"] = {{"taps", spec.aec.taps}, {"step", spec.aec.step},
              {"passes", spec.aec.passes}};
  if (spec.source_mode == SourceMode::kWav) {
    j["source"] = {{"mode", "wav"},
                   {"s_path", spec.s_path.string()},
                   {"x_path", spec.x_path.string()}};
  } else {
    j["source"] = {{"mode", "synthetic"}};
  }
  return j;
}

std::vector<SceneSpec> parse_scene_specs(const nlohmann::json& j,
                                         std::size_t count,
                                         std::uint64_t seed) {
  if (!j.is_object()) throw FormatError("scene spec must be a JSON object");
  auto sweep = [&j](const char* key) {
    std::vector<nlohmann::json> values;
    if (j.contains(key) && j.at(key).is_array()) {
      if (j.at(key).empty()) {
        throw FormatError(std::string("scene spec field '") + key + "' is an empty list");
      }
      for (const auto& v : j.at(key)) values.push_back(v);
    }
    return values;
  };
  const auto sers = sweep("ser_db");
  const auto snrs = sweep("snr_db");
  std::vector<SceneSpec> specs;
  for (std::size_t i = 0; i < count; ++i) {
    nlohmann::json one = j;
    if (!sers.empty()) one["ser_db"] = sers[i % sers.size()];
    if (!snrs.empty()) one["snr_db"] = snrs[i % snrs.size()];
    one["seed"] = seed + i;
    specs.push_back(scene_spec_from_json(one));
  }
  return specs;
}

Signal nonlinear_distort(const Signal& x, double hardness) {
  if (!(hardness > 0.0)) throw PreconditionError("clip hardness must be > 0");
  std::vector<double> out(x.size());
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = std::tanh(hardness * x[n]) / hardness;
  }
  return Signal(std::move(out));
}

std::vector<double> synth_rir(const SceneSpec& spec, std::uint64_t stream) {
  if (spec.rir_len < 1) throw PreconditionError("rir_len must be >= 1");
  if (!(spec.t60_s > 0.0)) throw PreconditionError("t60 must be > 0");
  auto rng = make_rng(spec.seed, kRirStream + 16 * stream);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double decay = 3.0 * std::numbers::ln10 / spec.t60_s;
  std::vector<double> h(spec.rir_len);
  for (std::size_t n = 0; n < h.size(); ++n) {
    const double t = static_cast<double>(n) / kSampleRate;
    h[n] = normal(rng) * std::exp(-decay * t);
  }
  const double norm = std::sqrt(energy(h));
  for (double& v : h) v /= norm;
  return h;
}

double global_ratio_db(const Signal& num, const Signal& den) {
  return 10.0 * std::log10(energy(num.samples()) / energy(den.samples()));
}

SceneComponents mix_at_ser_snr(const Signal& s, const Signal& y_raw,
                               const Signal& w_raw, double ser_db,
                               double snr_db) {
  if (s.size() != y_raw.size() || s.size() != w_raw.size()) {
    throw PreconditionError("mix_at_ser_snr: components differ in length");
  }
  const double es = energy(s.samples());
  const double ey = energy(y_raw.samples());
  const double ew = energy(w_raw.samples());
  if (es <= kEnergyFloor) throw PreconditionError("mix_at_ser_snr: near-end speech is silent");
  if (ey <= kEnergyFloor) throw PreconditionError("mix_at_ser_snr: echo is silent, cannot scale to SER");
  if (ew <= kEnergyFloor) throw PreconditionError("mix_at_ser_snr: noise is silent, cannot scale to SNR");
  SceneComponents scene;
  scene.s = s;
  scene.y = scaled(y_raw, std::sqrt(es / (ey * std::pow(10.0, ser_db / 10.0))));
  scene.w = scaled(w_raw, std::sqrt(es / (ew * std::pow(10.0, snr_db / 10.0))));
  scene.m = add(add(s, *scene.y), *scene.w);
  return scene;
}

std::pair<Signal, Signal> simulate_aec(const Signal& m, const Signal& x,
                                       const SceneSpec& spec) {
  if (m.size() != x.size()) throw PreconditionError("simulate_aec: m and x differ in length");
  const std::size_t taps = spec.aec.taps;
  if (taps < 1 || taps > m.size()) {
    throw PreconditionError("simulate_aec: taps must lie in [1, signal length]");
  }
  // Power floor of -40 dBFS per tap keeps updates bounded while the
  // reference fades in or out under near-end activity.
  const double kRegularizer = 1e-4 * static_cast<double>(taps);
  const std::size_t n_samples = m.size();
  std::vector<double> weights(taps, 0.0);
  std::vector<double> y_hat(n_samples, 0.0);
  // Reference history, newest first, padded with taps-1 leading zeros.
  std::vector<double> padded(taps - 1 + n_samples, 0.0);
  std::copy(x.vec().begin(), x.vec().end(), padded.begin() + (taps - 1));

  for (std::size_t pass = 0; pass < spec.aec.passes; ++pass) {
    for (std::size_t n = 0; n < n_samples; ++n) {
      // Window padded[n .. n+taps-1] holds x[n-taps+1 .. n]; tap k sees x[n-k].
      const double* window = padded.data() + n;
      double estimate = 0.0;
      double power = 0.0;
      for (std::size_t k = 0; k < taps; ++k) {
        const double v = window[taps - 1 - k];
        estimate += weights[k] * v;
        power += v * v;
      }
      const double err = m[n] - estimate;
      y_hat[n] = estimate;
      const double mu = spec.aec.step * err / (power + kRegularizer);
      for (std::size_t k = 0; k < taps; ++k) {
        weights[k] += mu * window[taps - 1 - k];
      }
    }
  }
  std::vector<double> e(n_samples);
  for (std::size_t n = 0; n < n_samples; ++n) e[n] = m[n] - y_hat[n];
  return {Signal(std::move(y_hat)), Signal(std::move(e))};
}

std::pair<std::vector<bool>, std::vector<bool>> talk_schedule(
    std::size_t n_samples, std::uint64_t seed) {
  auto rng = make_rng(seed, kScheduleStream);
  std::uniform_real_distribution<double> talk(0.6, 1.2);
  std::uniform_real_distribution<double> pause(0.15, 0.4);
  std::vector<bool> near(n_samples, false);
  std::vector<bool> far(n_samples, false);
  enum { kFar, kDouble, kNear, kPause };
  std::size_t pos = static_cast<std::size_t>(pause(rng) * kSampleRate);
  int state = kFar;
  while (pos < n_samples) {
    const double dur = state == kPause ? pause(rng) : talk(rng);
    const std::size_t end =
        std::min(n_samples, pos + static_cast<std::size_t>(dur * kSampleRate));
    for (std::size_t n = pos; n < end; ++n) {
      near[n] = state == kDouble || state == kNear;
      far[n] = state == kFar || state == kDouble;
    }
    pos = end;
    state = (state + 1) % 4;
  }
  return {near, far};
}

Signal speech_shaped_bursts(const std::vector<bool>& active, double rms,
                            std::uint64_t seed, std::uint64_t stream) {
  auto rng = make_rng(seed, stream);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const std::size_t n_samples = active.size();

  // Pink noise, Kellet's three-pole approximation.
  std::vector<double> pink(n_samples);
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  for (std::size_t n = 0; n < n_samples; ++n) {
    const double white = normal(rng);
    b0 = 0.99765 * b0 + white * 0.0990460;
    b1 = 0.96300 * b1 + white * 0.2965164;
    b2 = 0.57000 * b2 + white * 1.0526913;
    pink[n] = b0 + b1 + b2 + white * 0.1848;
  }

  // Syllabic envelope times a gate with raised-cosine edges.
  const double rate_hz = 3.0 + 2.0 * uniform(rng);
  const double phase = 2.0 * std::numbers::pi * uniform(rng);
  const std::size_t ramp = kSampleRate / 100;
  std::vector<double> gate(n_samples, 0.0);
  for (std::size_t n = 0; n < n_samples; ++n) gate[n] = active[n] ? 1.0 : 0.0;
  // Smooth each 0/1 transition over `ramp` samples inside the active side.
  std::vector<double> smoothed(gate);
  for (std::size_t n = 0; n < n_samples; ++n) {
    if (!active[n]) continue;
    std::size_t dist = ramp;
    for (std::size_t k = 1; k <= ramp; ++k) {
      if ((n >= k && !active[n - k]) || (n + k < n_samples && !active[n + k])) {
        dist = k - 1;
        break;
      }
    }
    if (dist < ramp) {
      smoothed[n] = 0.5 - 0.5 * std::cos(std::numbers::pi * (dist + 1) / (ramp + 1));
    }
  }

  std::vector<double> out(n_samples, 0.0);
  double active_energy = 0.0;
  std::size_t active_count = 0;
  for (std::size_t n = 0; n < n_samples; ++n) {
    const double t = static_cast<double>(n) / kSampleRate;
    const double syllable =
        0.35 + 0.65 * std::abs(std::sin(std::numbers::pi * rate_hz * t + phase));
    out[n] = pink[n] * syllable * smoothed[n];
    if (active[n]) {
      active_energy += out[n] * out[n];
      ++active_count;
    }
  }
  if (active_count > 0 && active_energy > 0.0) {
    const double g = rms / std::sqrt(active_energy / active_count);
    for (double& v : out) v *= g;
  }
  return Signal(std::move(out));
}

GeneratedScene generate_scene(const SceneSpec& spec) {
  validate(spec);
  std::optional<Signal> s, x;
  if (spec.source_mode == SourceMode::kWav) {
    Signal s_full = load_wav(spec.s_path);
    Signal x_full = load_wav(spec.x_path);
    std::size_t n = std::min(s_full.size(), x_full.size());
    n = std::min(n, static_cast<std::size_t>(spec.duration_s * kSampleRate));
    s = Signal(std::vector<double>(s_full.vec().begin(), s_full.vec().begin() + n));
    x = Signal(std::vector<double>(x_full.vec().begin(), x_full.vec().begin() + n));
  } else {
    const auto n = static_cast<std::size_t>(std::llround(spec.duration_s * kSampleRate));
    if (n < 1) throw PreconditionError("scene duration shorter than one sample");
    const auto [near, far] = talk_schedule(n, spec.seed);
    s = speech_shaped_bursts(near, 0.1, spec.seed, kNearStream);
    x = speech_shaped_bursts(far, 0.3, spec.seed, kFarStream);
  }
  const std::size_t n_samples = s->size();

  const Signal driven = nonlinear_distort(*x, spec.clip_hardness);
  const auto rir = synth_rir(spec, 0);
  std::vector<double> echo;
  std::size_t change = n_samples;
  if (spec.echo_path_change_at_s) {
    change = std::min(n_samples, static_cast<std::size_t>(
                                     *spec.echo_path_change_at_s * kSampleRate));
  }
  echo = convolve_prefix(rir, driven.vec(), 0, change);
  if (change < n_samples) {
    const auto moved = synth_rir(spec, 1);
    auto tail = convolve_prefix(moved, driven.vec(), change, n_samples);
    echo.insert(echo.end(), tail.begin(), tail.end());
  }

  auto noise_rng = make_rng(spec.seed, kNoiseStream);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> noise(n_samples);
  for (double& v : noise) v = normal(noise_rng);

  GeneratedScene out;
  out.components = mix_at_ser_snr(*s, Signal(std::move(echo)),
                                  Signal(std::move(noise)), spec.ser_db,
                                  spec.snr_db);
  out.components.x = *x;
  auto [y_hat, e] = simulate_aec(*out.components.m, *x, spec);
  out.components.y_hat = std::move(y_hat);
  out.components.e = std::move(e);
  out.achieved_ser_db = global_ratio_db(*out.components.s, *out.components.y);
  out.achieved_snr_db = global_ratio_db(*out.components.s, *out.components.w);
  return out;
}

namespace {

constexpr std::pair<const char*, const char*> kSceneFiles[] = {
    {"s", "s.wav"},         {"x", "x.wav"}, {"y", "y.wav"},
    {"w", "w.wav"},         {"m", "m.wav"}, {"y_hat", "yhat.wav"},
    {"e", "e.wav"},         {"s_hat", "shat.wav"}};

std::optional<Signal>& slot(SceneComponents& c, std::string_view name) {
  if (name == "s") return c.s;
  if (name == "x") return c.x;
  if (name == "y") return c.y;
  if (name == "w") return c.w;
  if (name == "m") return c.m;
  if (name == "y_hat") return c.y_hat;
  if (name == "e") return c.e;
  return c.s_hat;
}

}  // namespace

void save_scene(const std::filesystem::path& dir, const GeneratedScene& scene,
                const SceneSpec& spec) {
  std::filesystem::create_directories(dir);
  SceneComponents copy = scene.components;
  nlohmann::json files = nlohmann::json::object();
  for (const auto& [name, file] : kSceneFiles) {
    const auto& sig = slot(copy, name);
    if (!sig) continue;
    save_wav(*sig, dir / file);
    files[name] = file;
  }
  nlohmann::json sidecar;
  sidecar["spec"] = scene_spec_to_json(spec);
  sidecar["achieved"] = {{"ser_db", scene.achieved_ser_db},
                         {"snr_db", scene.achieved_snr_db}};
  sidecar["files"] = files;
  write_text_atomic(dir / "scene.json", sidecar.dump(2) + "\n");
}

SceneComponents load_scene(const std::filesystem::path& dir) {
  SceneComponents c;
  for (const auto& [name, file] : kSceneFiles) {
    const auto path = dir / file;
    if (std::filesystem::exists(path)) slot(c, name) = load_wav(path);
  }
  return c;
}

}  // namespace reseval
