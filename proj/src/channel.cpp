#include "erc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "erc/rng.hpp"

namespace erc::channel {

double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

namespace {

void check_rate(int n, int k) {
  if (n <= 0 || k <= 0) throw std::invalid_argument("snr_convert: n, k must be positive");
}

}  // namespace

double snr_convert(double power, int n, int k, SnrUnit target) {
  check_rate(n, k);
  if (power < 0.0) throw std::invalid_argument("snr_convert: negative power");
  switch (target) {
    case SnrUnit::P_linear:
      return power;
    case SnrUnit::EsN0_dB:
      return 10.0 * std::log10(power / 2.0);
    case SnrUnit::EbN0_dB:
      return 10.0 * std::log10(power * n / (2.0 * k));
  }
  throw std::invalid_argument("snr_convert: bad unit");
}

double power_from_snr(double value, SnrUnit given, int n, int k) {
  check_rate(n, k);
  switch (given) {
    case SnrUnit::P_linear:
      if (value < 0.0) throw std::invalid_argument("power_from_snr: negative power");
      return value;
    case SnrUnit::EsN0_dB:
      return 2.0 * std::pow(10.0, value / 10.0);
    case SnrUnit::EbN0_dB:
      return 2.0 * k * std::pow(10.0, value / 10.0) / n;
  }
  throw std::invalid_argument("power_from_snr: bad unit");
}

std::vector<double> awgn_transmit(std::span<const double> c,
                                  double noise_variance, std::uint64_t seed) {
  if (noise_variance < 0.0) throw std::invalid_argument("awgn_transmit: negative variance");
  std::vector<double> y(c.begin(), c.end());
  if (noise_variance == 0.0) return y;
  const double sigma = std::sqrt(noise_variance);
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] += sigma * rng::gaussian_at(seed, i);
  }
  return y;
}

std::vector<double> bpsk_modulate(std::span<const std::uint8_t> bits,
                                  double power) {
  if (power < 0.0) throw std::invalid_argument("bpsk_modulate: negative power");
  const double a = std::sqrt(power);
  std::vector<double> x(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) x[i] = bits[i] ? -a : a;
  return x;
}

std::vector<double> bpsk_demap(std::span<const double> y, double power,
                               double noise_variance) {
  if (power < 0.0 || noise_variance < 0.0)
    throw std::invalid_argument("bpsk_demap: negative parameter");
  std::vector<double> llr(y.size());
  if (power == 0.0) return llr;
  if (noise_variance == 0.0) {
    for (std::size_t i = 0; i < y.size(); ++i)
      llr[i] = y[i] < 0.0 ? -kLlrMax : kLlrMax;
    return llr;
  }
  const double coef = 2.0 * std::sqrt(power) / noise_variance;
  for (std::size_t i = 0; i < y.size(); ++i) llr[i] = coef * y[i];
  return llr;
}

std::vector<std::uint8_t> hard_decision(std::span<const double> llrs) {
  std::vector<std::uint8_t> bits(llrs.size());
  for (std::size_t i = 0; i < llrs.size(); ++i) bits[i] = llrs[i] < 0.0 ? 1 : 0;
  return bits;
}

namespace {

struct Pam4Levels {
  // level index = 2*b_hi + b_lo for bit pair (b_hi, b_lo)
  double x[4];
};

Pam4Levels pam4_levels(double power, double p1_frac, double p2_frac) {
  if (power < 0.0) throw std::invalid_argument("pam4: negative power");
  if (p1_frac < 0.0 || p2_frac < 0.0 || std::abs(p1_frac + p2_frac - 1.0) > 1e-12)
    throw std::invalid_argument("pam4: power fractions must be >= 0 and sum to 1");
  const double a2 = std::sqrt(power * p2_frac);  // carried by the even (first) bit
  const double a1 = std::sqrt(power * p1_frac);
  Pam4Levels lv;
  for (int hi = 0; hi < 2; ++hi)
    for (int lo = 0; lo < 2; ++lo)
      lv.x[2 * hi + lo] = (hi ? -a2 : a2) + (lo ? -a1 : a1);
  return lv;
}

}  // namespace

std::vector<double> pam4_modulate(std::span<const std::uint8_t> bits,
                                  double power, double p1_frac, double p2_frac) {
  if (bits.size() % 2 != 0)
    throw std::invalid_argument("pam4_modulate: odd bit count");
  const Pam4Levels lv = pam4_levels(power, p1_frac, p2_frac);
  std::vector<double> x(bits.size() / 2);
  for (std::size_t t = 0; t < x.size(); ++t) {
    x[t] = lv.x[2 * bits[2 * t] + bits[2 * t + 1]];
  }
  return x;
}

std::vector<double> pam4_demap(std::span<const double> y, double power,
                               double p1_frac, double p2_frac,
                               double noise_variance) {
  if (noise_variance < 0.0) throw std::invalid_argument("pam4_demap: negative variance");
  const Pam4Levels lv = pam4_levels(power, p1_frac, p2_frac);
  std::vector<double> llr(2 * y.size());
  for (std::size_t t = 0; t < y.size(); ++t) {
    double m[4];  // -(y - x_s)^2 / (2 sigma^2), or plain negative distance when noiseless
    for (int s = 0; s < 4; ++s) {
      const double d = y[t] - lv.x[s];
      m[s] = -d * d;
    }
    if (noise_variance == 0.0) {
      const int best = static_cast<int>(std::max_element(m, m + 4) - m);
      llr[2 * t] = (best & 2) ? -kLlrMax : kLlrMax;
      llr[2 * t + 1] = (best & 1) ? -kLlrMax : kLlrMax;
      continue;
    }
    for (int s = 0; s < 4; ++s) m[s] /= 2.0 * noise_variance;
    // llr(bit) = logsumexp(bit=0 levels) - logsumexp(bit=1 levels)
    const auto lse2 = [](double a, double b) {
      const double hi = std::max(a, b), lo = std::min(a, b);
      return hi + std::log1p(std::exp(lo - hi));
    };
    llr[2 * t] = lse2(m[0], m[1]) - lse2(m[2], m[3]);
    llr[2 * t + 1] = lse2(m[0], m[2]) - lse2(m[1], m[3]);
  }
  return llr;
}

}  // namespace erc::channel
