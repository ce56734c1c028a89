#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "reseval/framing.h"
#include "reseval/signal.h"

namespace reseval {

inline constexpr std::size_t kFftLen = 512;
inline constexpr std::size_t kBins = kFftLen / 2 + 1;

// Periodic Hann window of length kFrameLen.
const std::vector<double>& analysis_window();

// Short-time spectrum on the metric frame grid: each 320-sample frame is
// Hann-windowed, zero-padded to 512 and transformed. Storage is frame-major,
// kBins entries per frame.
struct Spectrogram {
  FrameGrid grid;
  std::vector<double> magnitude;
  std::vector<double> phase;

  std::size_t n_frames() const { return grid.n_frames; }
  std::size_t index(std::size_t frame, std::size_t bin) const {
    return frame * kBins + bin;
  }
  double mag(std::size_t frame, std::size_t bin) const {
    return magnitude[index(frame, bin)];
  }
  std::complex<double> value(std::size_t frame, std::size_t bin) const {
    return std::polar(magnitude[index(frame, bin)], phase[index(frame, bin)]);
  }
};

// Throws PreconditionError when the signal is shorter than one frame.
Spectrogram stft(const Signal& signal);

// Least-squares weighted overlap-add using the Hann window for synthesis:
// each sample is normalized by the summed squared window over the frames
// covering it. Samples covered by no frame (the tail) are zero. Output has
// grid.signal_len samples.
Signal istft(const Spectrogram& spec);

}  // namespace reseval
