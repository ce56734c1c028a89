#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace reseval {

inline constexpr int kSampleRate = 16000;

// Energy floor used by every log-ratio in the toolkit.
inline constexpr double kEnergyFloor = 1e-12;

// Mono waveform at 16 kHz. Samples are finite doubles, nominal full scale
// +-1.0. Immutable once constructed.
class Signal {
 public:
  // Throws PreconditionError on empty input or non-finite samples and
  // FormatError on a sample rate other than 16 kHz.
  explicit Signal(std::vector<double> samples, int sample_rate = kSampleRate);

  std::span<const double> samples() const { return samples_; }
  const std::vector<double>& vec() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  int sample_rate() const { return sample_rate_; }
  double operator[](std::size_t i) const { return samples_[i]; }

  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_;
};

// Sum of squares.
double energy(std::span<const double> x);

// 10*log10(sum x^2 + kEnergyFloor). Throws PreconditionError on empty input.
double energy_db(std::span<const double> x);

Signal scaled(const Signal& x, double gain);
Signal add(const Signal& a, const Signal& b);
Signal subtract(const Signal& a, const Signal& b);

// The aligned components of one double-talk scene:
//   m = s + y + w          (microphone)
//   e = m - y_hat          (AEC output)
//   s_hat                  (RES output)
// Only the components needed by a given computation have to be present.
struct SceneComponents {
  std::optional<Signal> s;
  std::optional<Signal> x;
  std::optional<Signal> y;
  std::optional<Signal> w;
  std::optional<Signal> m;
  std::optional<Signal> y_hat;
  std::optional<Signal> e;
  std::optional<Signal> s_hat;

  // Returns the named component or throws PreconditionError naming it.
  const Signal& require(std::string_view name) const;
};

// Checks shared length/rate and the two reconstruction identities (1e-6
// absolute) for whichever components are present. Throws PreconditionError.
void check_scene(const SceneComponents& scene, double tolerance = 1e-6);

}  // namespace reseval
