#include "reseval/stft.h"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "reseval/error.h"

namespace reseval {
namespace {

// The FFTW planner is not thread-safe; execution on new-array interfaces is.
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

struct FftBuffers {
  FftBuffers()
      : time(static_cast<double*>(fftw_malloc(sizeof(double) * kFftLen))),
        freq(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * kBins))) {}
  ~FftBuffers() {
    fftw_free(time);
    fftw_free(freq);
  }
  FftBuffers(const FftBuffers&) = delete;
  FftBuffers& operator=(const FftBuffers&) = delete;

  double* time;
  fftw_complex* freq;
};

class RealFft {
 public:
  RealFft() {
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_r2c_1d(kFftLen, buf_.time, buf_.freq, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_1d(kFftLen, buf_.freq, buf_.time, FFTW_ESTIMATE);
  }
  ~RealFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  double* time() { return buf_.time; }
  fftw_complex* freq() { return buf_.freq; }
  void forward() { fftw_execute(forward_); }
  // Unnormalized: result is kFftLen times the inverse DFT.
  void inverse() { fftw_execute(inverse_); }

 private:
  FftBuffers buf_;
  fftw_plan forward_;
  fftw_plan inverse_;
};

}  // namespace

const std::vector<double>& analysis_window() {
  static const std::vector<double> window = [] {
    std::vector<double> w(kFrameLen);
    for (std::size_t n = 0; n < kFrameLen; ++n) {
      w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / kFrameLen);
    }
    return w;
  }();
  return window;
}

Spectrogram stft(const Signal& signal) {
  const FrameGrid grid = make_grid(signal.size());
  if (grid.n_frames == 0) {
    throw PreconditionError("stft needs at least " + std::to_string(kFrameLen) +
                            " samples, got " + std::to_string(signal.size()));
  }
  const auto& window = analysis_window();
  Spectrogram spec;
  spec.grid = grid;
  spec.magnitude.resize(grid.n_frames * kBins);
  spec.phase.resize(grid.n_frames * kBins);

  RealFft fft;
  for (std::size_t f = 0; f < grid.n_frames; ++f) {
    auto frame = grid.frame(signal.samples(), f);
    for (std::size_t n = 0; n < kFrameLen; ++n) fft.time()[n] = frame[n] * window[n];
    for (std::size_t n = kFrameLen; n < kFftLen; ++n) fft.time()[n] = 0.0;
    fft.forward();
    for (std::size_t k = 0; k < kBins; ++k) {
      std::complex<double> c(fft.freq()[k][0], fft.freq()[k][1]);
      spec.magnitude[spec.index(f, k)] = std::abs(c);
      spec.phase[spec.index(f, k)] = std::arg(c);
    }
  }
  return spec;
}

Signal istft(const Spectrogram& spec) {
  const FrameGrid& grid = spec.grid;
  if (grid.signal_len == 0 || grid != make_grid(grid.signal_len) ||
      spec.magnitude.size() != grid.n_frames * kBins ||
      spec.phase.size() != spec.magnitude.size()) {
    throw PreconditionError("istft: spectrogram inconsistent with its grid");
  }
  const auto& window = analysis_window();
  std::vector<double> out(grid.signal_len, 0.0);
  std::vector<double> norm(grid.signal_len, 0.0);

  RealFft fft;
  for (std::size_t f = 0; f < grid.n_frames; ++f) {
    for (std::size_t k = 0; k < kBins; ++k) {
      auto c = spec.value(f, k);
      fft.freq()[k][0] = c.real();
      fft.freq()[k][1] = c.imag();
    }
    // DC and Nyquist of a real sequence are real.
    fft.freq()[0][1] = 0.0;
    fft.freq()[kBins - 1][1] = 0.0;
    fft.inverse();
    const std::size_t start = grid.start(f);
    for (std::size_t n = 0; n < kFrameLen; ++n) {
      out[start + n] += window[n] * fft.time()[n] / kFftLen;
      norm[start + n] += window[n] * window[n];
    }
  }
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = norm[n] > 1e-12 ? out[n] / norm[n] : 0.0;
  }
  return Signal(std::move(out));
}

}  // namespace reseval
