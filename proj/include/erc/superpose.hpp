#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "erc/ldpc.hpp"

namespace erc::superpose {

class Interleaver {
 public:
  static Interleaver identity(int n);
  static Interleaver random(int n, std::uint64_t seed);

  int size() const { return static_cast<int>(perm_.size()); }

  // apply: out[perm[i]] = in[i] (code domain -> channel domain).
  template <typename T>
  std::vector<T> apply(std::span<const T> in) const {
    std::vector<T> out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) out[perm_[i]] = in[i];
    return out;
  }
  template <typename T>
  std::vector<T> invert(std::span<const T> in) const {
    std::vector<T> out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[perm_[i]];
    return out;
  }
  const std::vector<int>& permutation() const { return perm_; }

 private:
  std::vector<int> perm_;
};

struct CodeLeg {
  std::shared_ptr<const ldpc::ParityCheckMatrix> h;
  std::shared_ptr<const ldpc::Encoder> encoder;
  double power = 0.0;  // P_l
  Interleaver pi;      // code domain <-> channel domain
};

enum class SicSchedule { jacobi, gauss_seidel };

struct SuperpositionConfig {
  std::array<CodeLeg, 2> legs;
  int outer_iters = 20;
  int inner_iters = 20;
  SicSchedule schedule = SicSchedule::jacobi;
  bool early_stop = false;  // stop once both legs converge with stable bits

  int block_length() const;
  int k1() const { return legs[0].encoder->dimension(); }
  int k2() const { return legs[1].encoder->dimension(); }
  double total_power() const { return legs[0].power + legs[1].power; }
  void validate() const;
};

std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>> split_message(
    std::span<const std::uint8_t> m, int k1);

// c = sum_l sqrt-power-weighted BPSK of interleaved codewords:
//   c = bpsk(pi_1(f_1(m_1)), P_1) + bpsk(pi_2(f_2(m_2)), P_2)
std::vector<double> superpose_encode(std::span<const std::uint8_t> m,
                                     const SuperpositionConfig& cfg);

struct SicState {
  // Posterior LLRs per leg, in each leg's own (deinterleaved) code domain.
  std::array<std::vector<double>, 2> gamma;
  std::array<double, 2> interference_power = {0.0, 0.0};  // last P_hat seen per leg
  std::array<bool, 2> converged = {false, false};
  int outer_done = 0;
};

// Inputs handed to leg `ell`'s decoder for the current state: the channel
// domain interference mean rho, the scalar residual interference power, and
// the deinterleaved LLRs 2 sqrt(P_ell) (y - rho) / (sigma^2 + P_hat).
struct LegInputs {
  std::vector<double> rho;
  double interference_power = 0.0;
  std::vector<double> llr;
};

LegInputs compute_leg_inputs(int ell, std::span<const double> y,
                             const SicState& state,
                             const SuperpositionConfig& cfg,
                             double noise_variance);

struct SicResult {
  std::array<std::vector<std::uint8_t>, 2> info;
  SicState state;
};

SicResult soft_sic_decode(std::span<const double> y,
                          const SuperpositionConfig& cfg, double noise_variance);

}  // namespace erc::superpose
