#include "reseval/signal.h"

#include <cmath>
#include <string>

#include "reseval/error.h"

namespace reseval {

Signal::Signal(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (samples_.empty()) throw PreconditionError("signal must be nonempty");
  if (sample_rate_ != kSampleRate) {
    throw FormatError("sample rate " + std::to_string(sample_rate_) +
                      " unsupported (expected 16000)");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw PreconditionError("non-finite sample at index " +
                              std::to_string(i));
    }
  }
}

double energy(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

double energy_db(std::span<const double> x) {
  if (x.empty()) throw PreconditionError("energy_db of empty sequence");
  return 10.0 * std::log10(energy(x) + kEnergyFloor);
}

Signal scaled(const Signal& x, double gain) {
  std::vector<double> out(x.vec());
  for (double& v : out) v *= gain;
  return Signal(std::move(out), x.sample_rate());
}

namespace {

void require_same_length(const Signal& a, const Signal& b) {
  if (a.size() != b.size()) {
    throw PreconditionError("length mismatch: " + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()));
  }
}

}  // namespace

Signal add(const Signal& a, const Signal& b) {
  require_same_length(a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return Signal(std::move(out));
}

Signal subtract(const Signal& a, const Signal& b) {
  require_same_length(a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return Signal(std::move(out));
}

const Signal& SceneComponents::require(std::string_view name) const {
  const std::optional<Signal>* slot = nullptr;
  if (name == "s") slot = &s;
  else if (name == "x") slot = &x;
  else if (name == "y") slot = &y;
  else if (name == "w") slot = &w;
  else if (name == "m") slot = &m;
  else if (name == "y_hat") slot = &y_hat;
  else if (name == "e") slot = &e;
  else if (name == "s_hat") slot = &s_hat;
  if (slot == nullptr) {
    throw PreconditionError("unknown scene component '" + std::string(name) +
                            "'");
  }
  if (!slot->has_value()) {
    throw PreconditionError("scene component '" + std::string(name) +
                            "' is required but absent");
  }
  return **slot;
}

void check_scene(const SceneComponents& scene, double tolerance) {
  const std::optional<Signal>* all[] = {&scene.s, &scene.x,     &scene.y,
                                        &scene.w, &scene.m,     &scene.y_hat,
                                        &scene.e, &scene.s_hat};
  std::optional<std::size_t> len;
  for (const auto* slot : all) {
    if (!slot->has_value()) continue;
    if (!len) len = (*slot)->size();
    if ((*slot)->size() != *len) {
      throw PreconditionError("scene components differ in length");
    }
  }
  if (scene.s && scene.y && scene.w && scene.m) {
    for (std::size_t n = 0; n < *len; ++n) {
      double err = (*scene.m)[n] - ((*scene.s)[n] + (*scene.y)[n] + (*scene.w)[n]);
      if (std::abs(err) > tolerance) {
        throw PreconditionError("m != s + y + w at sample " +
                                std::to_string(n));
      }
    }
  }
  if (scene.m && scene.y_hat && scene.e) {
    for (std::size_t n = 0; n < *len; ++n) {
      double err = (*scene.e)[n] - ((*scene.m)[n] - (*scene.y_hat)[n]);
      if (std::abs(err) > tolerance) {
        throw PreconditionError("e != m - y_hat at sample " +
                                std::to_string(n));
      }
    }
  }
}

}  // namespace reseval
