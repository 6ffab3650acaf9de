#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace erc::channel {

// LLR magnitudes are clamped here before any tanh; tanh(30) already rounds to
// 1.0 in double, so +-60 is saturation with margin.
constexpr double kLlrMax = 60.0;

inline double clamp_llr(double v) {
  if (v > kLlrMax) return kLlrMax;
  if (v < -kLlrMax) return -kLlrMax;
  return v;
}

double qfunc(double x);

enum class SnrUnit { P_linear, EsN0_dB, EbN0_dB };

// Average symbol power P <-> the dB conventions, for a rate k/n code with unit
// noise variance baseline: Es/N0 = P/2, Eb/N0 = n*P/(2k).
double snr_convert(double power, int n, int k, SnrUnit target);
double power_from_snr(double value, SnrUnit given, int n, int k);

// y = c + w, w ~ N(0, noise_variance) i.i.d.  noise_variance = 0 is the
// noiseless hook: y == c exactly.
std::vector<double> awgn_transmit(std::span<const double> c,
                                  double noise_variance, std::uint64_t seed);

// Bit 0 -> +sqrt(power), bit 1 -> -sqrt(power).
std::vector<double> bpsk_modulate(std::span<const std::uint8_t> bits,
                                  double power);

// llr_i = 2*sqrt(power)*y_i / noise_variance, positive favouring bit 0.
// Well defined at power = 0 (all-zero output).  noise_variance = 0 saturates
// to +-kLlrMax by the sign of y.
std::vector<double> bpsk_demap(std::span<const double> y, double power,
                               double noise_variance);

std::vector<std::uint8_t> hard_decision(std::span<const double> llrs);

// Superposed 4-PAM: symbol t carries bits (2t, 2t+1) as
//   x_t = (-1)^b_{2t} * sqrt(P*p2_frac) + (-1)^b_{2t+1} * sqrt(P*p1_frac).
// p1_frac + p2_frac = 1; bits.size() must be even.
std::vector<double> pam4_modulate(std::span<const std::uint8_t> bits,
                                  double power, double p1_frac, double p2_frac);

// Exact bitwise LLRs via log-sum-exp over the four levels, unclamped (the
// decoder clamps its inputs).  noise_variance = 0 saturates to the
// nearest-level bits.
std::vector<double> pam4_demap(std::span<const double> y, double power,
                               double p1_frac, double p2_frac,
                               double noise_variance);

}  // namespace erc::channel
