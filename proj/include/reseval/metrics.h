#pragma once

#include <complex>
#include <span>
#include <vector>

namespace reseval {

inline constexpr double kGainDenominatorFloor = 1e-8;
inline constexpr double kDefaultClampDb = 120.0;

// Frame-level metric kernels. All inputs are the samples of one frame and
// must have equal length (PreconditionError otherwise). Every dB value is
// clamped to [-clamp_db, +clamp_db].
//
// Log-ratios use the energy floor kEnergyFloor as a threshold: a numerator at
// or below the floor yields -clamp_db (nothing left to measure), otherwise a
// denominator at or below the floor yields +clamp_db. DSML and RESL apply the
// floor to their energies relative to ||s||^2 and ||r||^2 respectively.

double ratio_db(double numerator, double denominator,
                double clamp_db = kDefaultClampDb);

// Per-sample RES gain g(n) = s_hat(n) / e(n). |e(n)| < 1e-8 is replaced by
// sign(e(n)) * 1e-8, with sign(0) = +1.
std::vector<double> compute_gain(std::span<const double> s_hat,
                                 std::span<const double> e);

// Scalar projection <g*s, s> / ||s||^2, or 1 when ||s||^2 <= kEnergyFloor.
double compensation_scalar(std::span<const double> g,
                           std::span<const double> s);

// Desired-speech maintained level:
//   10 log10 ||s~||^2 / ||s~ - g*s||^2,  s~ = g_hat * s.
double dsml(std::span<const double> s, std::span<const double> g,
            double clamp_db = kDefaultClampDb);

// Residual-echo suppression level with r = e - s:
//   10 log10 ||r||^2 / ||g*r||^2.
double resl(std::span<const double> s, std::span<const double> e,
            std::span<const double> g, double clamp_db = kDefaultClampDb);

// s_hat rescaled by 1/c with c = <s_hat, s> / ||s||^2 (c = 1 for silent s).
// When |c| <= kEnergyFloor the estimate carries no component along s and is
// returned unscaled.
std::vector<double> compensate_estimate(std::span<const double> s,
                                        std::span<const double> s_hat);

// 10 log10 ||s||^2 / ||s - s_comp||^2 on double-talk frames.
double sdr(std::span<const double> s, std::span<const double> s_hat,
           double clamp_db = kDefaultClampDb);

// Same formula as sdr, evaluated on near-end single-talk frames.
double sar(std::span<const double> s, std::span<const double> s_hat,
           double clamp_db = kDefaultClampDb);

// 10 log10 ||e||^2 / ||s_hat||^2, uncompensated.
double erle(std::span<const double> e, std::span<const double> s_hat,
            double clamp_db = kDefaultClampDb);

double ser(std::span<const double> s, std::span<const double> y,
           double clamp_db = kDefaultClampDb);
double snr(std::span<const double> s, std::span<const double> w,
           double clamp_db = kDefaultClampDb);

// Spectral counterparts of the gain metrics, on the bins of one STFT frame.
// `weights` scales each bin's energy (one-sided spectra count interior bins
// twice); norms are weighted sums of |.|^2.
using Bins = std::span<const std::complex<double>>;

// g_k = S_hat_k / E_k with |E_k| < 1e-8 raised to 1e-8 along E_k's phase
// (along the real axis when E_k = 0).
std::vector<std::complex<double>> compute_gain(Bins s_hat, Bins e);

// Re(sum w g |S|^2) / sum w |S|^2, or 1 for a silent frame.
double compensation_scalar(Bins g, Bins s, std::span<const double> weights);

double dsml(Bins s, Bins g, std::span<const double> weights,
            double clamp_db = kDefaultClampDb);
double resl(Bins s, Bins e, Bins g, std::span<const double> weights,
            double clamp_db = kDefaultClampDb);

}  // namespace reseval
