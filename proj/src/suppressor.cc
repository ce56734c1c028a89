#include "reseval/suppressor.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "reseval/error.h"

namespace reseval {

void validate(const SuppressorConfig& config) {
  if (!(config.beta >= 1.0) || !std::isfinite(config.beta)) {
    throw PreconditionError("suppressor beta must be >= 1, got " +
                            std::to_string(config.beta));
  }
  if (!(config.floor >= 0.0 && config.floor < 1.0)) {
    throw PreconditionError("suppressor floor must lie in [0, 1), got " +
                            std::to_string(config.floor));
  }
}

std::vector<double> oracle_gain(const Signal& e, const Signal& s,
                                const SuppressorConfig& config) {
  validate(config);
  if (e.size() != s.size()) {
    throw PreconditionError("oracle_suppress: e and s differ in length");
  }
  const Spectrogram speech = stft(s);
  const Spectrogram residual = stft(subtract(e, s));
  std::vector<double> gain(speech.magnitude.size());
  for (std::size_t i = 0; i < gain.size(); ++i) {
    const double ps = speech.magnitude[i] * speech.magnitude[i];
    const double pr = residual.magnitude[i] * residual.magnitude[i];
    gain[i] = std::max(config.floor, ps / (ps + config.beta * pr + kEnergyFloor));
  }
  return gain;
}

Signal oracle_suppress(const Signal& e, const Signal& s,
                       const SuppressorConfig& config) {
  const auto gain = oracle_gain(e, s, config);
  Spectrogram spec = stft(e);
  for (std::size_t i = 0; i < gain.size(); ++i) spec.magnitude[i] *= gain[i];
  return istft(spec);
}

std::vector<double> beta_schedule(std::span<const double> alphas, double slope) {
  if (!(slope > 0.0)) throw PreconditionError("beta slope must be positive");
  std::vector<double> betas;
  betas.reserve(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] >= 0.0) || !std::isfinite(alphas[i])) {
      throw PreconditionError("alpha values must be finite and >= 0");
    }
    if (i > 0 && !(alphas[i] > alphas[i - 1])) {
      throw PreconditionError("alpha values must be strictly ascending");
    }
    betas.push_back(1.0 + slope * alphas[i]);
  }
  return betas;
}

}  // namespace reseval
