#include "reseval/loss.h"

#include <cmath>

#include "reseval/error.h"

namespace reseval {
namespace {

void validate(const MagnitudeSpectrum& m, const char* what) {
  if (m.values.size() != m.frames * m.bins) {
    throw PreconditionError(std::string(what) + ": values do not match shape");
  }
  for (double v : m.values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw PreconditionError(std::string(what) +
                              ": magnitudes must be finite and nonnegative");
    }
  }
}

}  // namespace

MagnitudeSpectrum MagnitudeSpectrum::from(const Spectrogram& spec) {
  return {spec.n_frames(), kBins, spec.magnitude};
}

double spectral_variance(const MagnitudeSpectrum& spectrum) {
  const auto& v = spectrum.values;
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(v.size());
}

double loss_j(const LossInputs& inputs) {
  validate(inputs.predicted, "loss_j predicted");
  validate(inputs.target, "loss_j target");
  if (inputs.predicted.frames != inputs.target.frames ||
      inputs.predicted.bins != inputs.target.bins) {
    throw PreconditionError("loss_j: predicted and target shapes differ");
  }
  if (!(inputs.alpha >= 0.0) || !std::isfinite(inputs.alpha)) {
    throw PreconditionError("loss_j: alpha must be finite and >= 0");
  }
  const auto& p = inputs.predicted.values;
  const auto& t = inputs.target.values;
  double error = 0.0;
  double power = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    error += (p[i] - t[i]) * (p[i] - t[i]);
    power += p[i] * p[i];
  }
  double j = error + inputs.alpha * power;
  if (inputs.alpha > 0.0) j += 0.1 * spectral_variance(inputs.predicted);
  return j;
}

}  // namespace reseval
