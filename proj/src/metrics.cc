#include "reseval/metrics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "reseval/error.h"
#include "reseval/signal.h"

namespace reseval {
namespace {

void check_lengths(std::span<const double> a, std::span<const double> b,
                   const char* op) {
  if (a.size() != b.size()) {
    throw PreconditionError(std::string(op) + ": length mismatch " +
                            std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

double ratio_db(double numerator, double denominator, double clamp_db) {
  if (numerator <= kEnergyFloor) return -clamp_db;
  if (denominator <= kEnergyFloor) return clamp_db;
  return std::clamp(10.0 * std::log10(numerator / denominator), -clamp_db,
                    clamp_db);
}

namespace {

// Gain-ratio metrics compare two energies that both scale with the gain, so
// the floor is tested on their values relative to a reference energy (the
// speech for DSML, the residual for RESL). A constant rescale of the estimate
// then cannot push a measurable frame across the floor.
double normalized_ratio_db(double num, double den, double reference,
                           double clamp_db) {
  if (reference > kEnergyFloor) {
    num /= reference;
    den /= reference;
  }
  return ratio_db(num, den, clamp_db);
}

}  // namespace

std::vector<double> compute_gain(std::span<const double> s_hat,
                                 std::span<const double> e) {
  check_lengths(s_hat, e, "compute_gain");
  std::vector<double> g(e.size());
  for (std::size_t n = 0; n < e.size(); ++n) {
    double den = e[n];
    if (std::abs(den) < kGainDenominatorFloor) {
      den = std::signbit(den) && den != 0.0 ? -kGainDenominatorFloor
                                            : kGainDenominatorFloor;
    }
    g[n] = s_hat[n] / den;
  }
  return g;
}

double compensation_scalar(std::span<const double> g,
                           std::span<const double> s) {
  check_lengths(g, s, "compensation_scalar");
  const double ss = energy(s);
  if (ss <= kEnergyFloor) return 1.0;
  double gs_s = 0.0;
  for (std::size_t n = 0; n < s.size(); ++n) gs_s += g[n] * s[n] * s[n];
  return gs_s / ss;
}

double dsml(std::span<const double> s, std::span<const double> g,
            double clamp_db) {
  check_lengths(s, g, "dsml");
  const double g_hat = compensation_scalar(g, s);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    const double s_tilde = g_hat * s[n];
    const double diff = s_tilde - g[n] * s[n];
    num += s_tilde * s_tilde;
    den += diff * diff;
  }
  return normalized_ratio_db(num, den, energy(s), clamp_db);
}

double resl(std::span<const double> s, std::span<const double> e,
            std::span<const double> g, double clamp_db) {
  check_lengths(s, e, "resl");
  check_lengths(s, g, "resl");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    const double r = e[n] - s[n];
    num += r * r;
    den += g[n] * r * g[n] * r;
  }
  return normalized_ratio_db(num, den, num, clamp_db);
}

std::vector<double> compensate_estimate(std::span<const double> s,
                                        std::span<const double> s_hat) {
  check_lengths(s, s_hat, "compensate_estimate");
  const double ss = energy(s);
  const double c = ss <= kEnergyFloor ? 1.0 : dot(s_hat, s) / ss;
  std::vector<double> out(s_hat.begin(), s_hat.end());
  if (std::abs(c) > kEnergyFloor) {
    for (double& v : out) v /= c;
  }
  return out;
}

double sdr(std::span<const double> s, std::span<const double> s_hat,
           double clamp_db) {
  const auto comp = compensate_estimate(s, s_hat);
  double den = 0.0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    const double d = s[n] - comp[n];
    den += d * d;
  }
  return ratio_db(energy(s), den, clamp_db);
}

double sar(std::span<const double> s, std::span<const double> s_hat,
           double clamp_db) {
  return sdr(s, s_hat, clamp_db);
}

double erle(std::span<const double> e, std::span<const double> s_hat,
            double clamp_db) {
  check_lengths(e, s_hat, "erle");
  return ratio_db(energy(e), energy(s_hat), clamp_db);
}

double ser(std::span<const double> s, std::span<const double> y,
           double clamp_db) {
  check_lengths(s, y, "ser");
  return ratio_db(energy(s), energy(y), clamp_db);
}

double snr(std::span<const double> s, std::span<const double> w,
           double clamp_db) {
  check_lengths(s, w, "snr");
  return ratio_db(energy(s), energy(w), clamp_db);
}

namespace {

void check_bins(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw PreconditionError(std::string(op) + ": bin count mismatch " +
                            std::to_string(a) + " vs " + std::to_string(b));
  }
}

double weighted_energy(Bins x, std::span<const double> w) {
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) acc += w[k] * std::norm(x[k]);
  return acc;
}

}  // namespace

std::vector<std::complex<double>> compute_gain(Bins s_hat, Bins e) {
  check_bins(s_hat.size(), e.size(), "compute_gain");
  std::vector<std::complex<double>> g(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) {
    std::complex<double> den = e[k];
    const double mag = std::abs(den);
    if (mag < kGainDenominatorFloor) {
      den = mag > 0.0 ? den * (kGainDenominatorFloor / mag)
                      : std::complex<double>(kGainDenominatorFloor, 0.0);
    }
    g[k] = s_hat[k] / den;
  }
  return g;
}

double compensation_scalar(Bins g, Bins s, std::span<const double> weights) {
  check_bins(g.size(), s.size(), "compensation_scalar");
  check_bins(weights.size(), s.size(), "compensation_scalar");
  const double ss = weighted_energy(s, weights);
  if (ss <= kEnergyFloor) return 1.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    acc += weights[k] * g[k].real() * std::norm(s[k]);
  }
  return acc / ss;
}

double dsml(Bins s, Bins g, std::span<const double> weights, double clamp_db) {
  const double g_hat = compensation_scalar(g, s, weights);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const std::complex<double> s_tilde = g_hat * s[k];
    num += weights[k] * std::norm(s_tilde);
    den += weights[k] * std::norm(s_tilde - g[k] * s[k]);
  }
  return normalized_ratio_db(num, den, weighted_energy(s, weights), clamp_db);
}

double resl(Bins s, Bins e, Bins g, std::span<const double> weights,
            double clamp_db) {
  check_bins(s.size(), e.size(), "resl");
  check_bins(s.size(), g.size(), "resl");
  check_bins(s.size(), weights.size(), "resl");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const std::complex<double> r = e[k] - s[k];
    num += weights[k] * std::norm(r);
    den += weights[k] * std::norm(g[k] * r);
  }
  return normalized_ratio_db(num, den, num, clamp_db);
}

}  // namespace reseval
