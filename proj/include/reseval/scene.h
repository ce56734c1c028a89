#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "reseval/signal.h"

namespace reseval {

struct AecConfig {
  std::size_t taps = 512;
  double step = 0.5;
  std::size_t passes = 1;
};

enum class SourceMode { kSynthetic, kWav };

// Generative parameters of one simulated double-talk scene.
struct SceneSpec {
  double duration_s = 10.0;
  std::uint64_t seed = 0;
  double ser_db = 0.0;
  double snr_db = 20.0;
  double clip_hardness = 1.0;
  double t60_s = 0.2;
  std::size_t rir_len = 1600;
  std::optional<double> echo_path_change_at_s;
  AecConfig aec;
  SourceMode source_mode = SourceMode::kSynthetic;
  std::filesystem::path s_path;  // kWav only
  std::filesystem::path x_path;  // kWav only
};

// Throws PreconditionError naming the first offending field.
void validate(const SceneSpec& spec);

// Parses a single scene spec. Unknown keys and ill-typed values raise
// FormatError naming the field. Array-valued ser_db / snr_db are rejected
// here; see parse_scene_specs.
SceneSpec scene_spec_from_json(const nlohmann::json& j);
nlohmann::json scene_spec_to_json(const SceneSpec& spec);

// Expands a spec file for `count` scenes with seeds seed..seed+count-1. When
// ser_db or snr_db hold arrays, scene i takes element i modulo the array size.
std::vector<SceneSpec> parse_scene_specs(const nlohmann::json& j,
                                         std::size_t count,
                                         std::uint64_t seed);

// Memoryless loudspeaker saturation tanh(h*x)/h. Odd, identity as h -> 0+.
Signal nonlinear_distort(const Signal& x, double hardness);

// Seeded white noise under an exp(-3 ln(10) t / t60) envelope, normalized to
// unit energy. `stream` selects an independent sequence for the same seed
// (used for the post-change echo path).
std::vector<double> synth_rir(const SceneSpec& spec, std::uint64_t stream = 0);

// Scales y_raw and w_raw so that the whole-signal SER and SNR hit the targets
// and returns {s, y, w, m = s + y + w}. Throws PreconditionError when a
// component is silent or lengths differ.
SceneComponents mix_at_ser_snr(const Signal& s, const Signal& y_raw,
                               const Signal& w_raw, double ser_db,
                               double snr_db);

// NLMS linear canceller driven by x predicting m. Returns {y_hat, e} with
// e = m - y_hat. Runs spec.aec.passes passes over the signal, carrying the
// filter across passes; outputs come from the last pass.
std::pair<Signal, Signal> simulate_aec(const Signal& m, const Signal& x,
                                       const SceneSpec& spec);

// Speech-shaped bursts: pink noise with a syllabic envelope, gated on the
// intervals where `active` is true, with 10 ms raised-cosine ramps.
Signal speech_shaped_bursts(const std::vector<bool>& active, double rms,
                            std::uint64_t seed, std::uint64_t stream);

// On/off gates for the near-end (first) and far-end (second) sources. The
// schedule cycles far-end-only, double-talk, near-end-only, pause with
// seeded durations so every speech condition recurs.
std::pair<std::vector<bool>, std::vector<bool>> talk_schedule(
    std::size_t n_samples, std::uint64_t seed);

struct GeneratedScene {
  SceneComponents components;  // s, x, y, w, m, y_hat, e
  double achieved_ser_db = 0.0;
  double achieved_snr_db = 0.0;
};

GeneratedScene generate_scene(const SceneSpec& spec);

// Scene directory layout: s.wav x.wav y.wav w.wav m.wav yhat.wav e.wav
// (+ shat.wav once suppressed) and scene.json.
void save_scene(const std::filesystem::path& dir, const GeneratedScene& scene,
                const SceneSpec& spec);

// Loads whichever component WAVs exist in a scene directory.
SceneComponents load_scene(const std::filesystem::path& dir);

// Whole-signal SER/SNR in dB (no clamp, no framing).
double global_ratio_db(const Signal& num, const Signal& den);

}  // namespace reseval
