#pragma once

#include <cstddef>
#include <vector>

#include "reseval/stft.h"

namespace reseval {

// Nonnegative magnitudes laid out frame-major, `bins` per frame.
struct MagnitudeSpectrum {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<double> values;

  static MagnitudeSpectrum from(const Spectrogram& spec);
};

struct LossInputs {
  MagnitudeSpectrum predicted;  // prediction of the desired-speech magnitude
  MagnitudeSpectrum target;     // ground-truth desired-speech magnitude
  double alpha = 0.0;
};

// Population variance over every (frame, bin) entry.
double spectral_variance(const MagnitudeSpectrum& spectrum);

// Distortion/suppression tradeoff loss
//   J = ||P - T||^2 + alpha * ||P||^2 + 0.1 * Var(P) * [alpha > 0]
// with norms summed over all entries. The variance term switches on for any
// positive alpha, so J jumps by 0.1 * Var(P) between alpha = 0 and 0+.
//
// Throws PreconditionError on shape mismatch, negative or non-finite
// magnitudes, or negative alpha.
double loss_j(const LossInputs& inputs);

}  // namespace reseval
