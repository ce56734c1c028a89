#pragma once

#include <span>
#include <vector>

#include "reseval/signal.h"
#include "reseval/stft.h"

namespace reseval {

// Oracle Wiener-style residual-echo suppressor. `beta` over-weights the
// residual in the gain and so trades speech distortion for echo suppression;
// beta = 1 is the plain oracle Wiener gain.
struct SuppressorConfig {
  double beta = 1.0;
  double floor = 0.02;
};

// Throws PreconditionError unless beta >= 1 and 0 <= floor < 1.
void validate(const SuppressorConfig& config);

// Per time-frequency gain max(floor, |S|^2 / (|S|^2 + beta |R|^2 + eps)) with
// S = stft(s) and R = stft(e - s), frame-major with kBins per frame.
std::vector<double> oracle_gain(const Signal& e, const Signal& s,
                                const SuppressorConfig& config);

// Applies oracle_gain to |stft(e)|, keeps e's phase, and resynthesizes.
// Output length equals input length; uncovered tail samples are zero.
Signal oracle_suppress(const Signal& e, const Signal& s,
                       const SuppressorConfig& config);

inline constexpr double kBetaSlope = 15.0;

// beta = 1 + slope * alpha for an ascending list of nonnegative alphas.
// Throws PreconditionError on negative or non-ascending input.
std::vector<double> beta_schedule(std::span<const double> alphas,
                                  double slope = kBetaSlope);

}  // namespace reseval
