#include "erc/superpose.hpp"

#include <cmath>
#include <stdexcept>

#include "erc/channel.hpp"
#include "erc/rng.hpp"

namespace erc::superpose {

Interleaver Interleaver::identity(int n) {
  Interleaver pi;
  pi.perm_.resize(n);
  for (int i = 0; i < n; ++i) pi.perm_[i] = i;
  return pi;
}

Interleaver Interleaver::random(int n, std::uint64_t seed) {
  Interleaver pi;
  rng::Stream s(rng::derive(seed, 0x706931ull));
  pi.perm_ = rng::random_permutation(n, s);
  return pi;
}

int SuperpositionConfig::block_length() const {
  return legs[0].encoder ? legs[0].encoder->block_length() : 0;
}

void SuperpositionConfig::validate() const {
  for (const auto& leg : legs) {
    if (!leg.h || !leg.encoder) throw std::invalid_argument("superposition: missing code");
    if (leg.power < 0) throw std::invalid_argument("superposition: negative leg power");
    if (leg.pi.size() != leg.encoder->block_length())
      throw std::invalid_argument("superposition: interleaver length != block length");
  }
  if (legs[0].encoder->block_length() != legs[1].encoder->block_length())
    throw std::invalid_argument("superposition: block length mismatch");
  if (outer_iters < 1 || inner_iters < 0)
    throw std::invalid_argument("superposition: bad iteration counts");
}

std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>> split_message(
    std::span<const std::uint8_t> m, int k1) {
  if (k1 < 0 || k1 > static_cast<int>(m.size()))
    throw std::invalid_argument("split_message: k1 outside [0, k]");
  return {std::vector<std::uint8_t>(m.begin(), m.begin() + k1),
          std::vector<std::uint8_t>(m.begin() + k1, m.end())};
}

std::vector<double> superpose_encode(std::span<const std::uint8_t> m,
                                     const SuperpositionConfig& cfg) {
  cfg.validate();
  const auto [m1, m2] = split_message(m, cfg.k1());
  const int n = cfg.block_length();
  std::vector<double> c(n, 0.0);
  const std::array<std::span<const std::uint8_t>, 2> msgs = {m1, m2};
  for (int ell = 0; ell < 2; ++ell) {
    const auto& leg = cfg.legs[ell];
    const auto cw = leg.encoder->encode(msgs[ell]);
    const auto inter = leg.pi.apply<std::uint8_t>(cw);
    const auto x = channel::bpsk_modulate(inter, leg.power);
    for (int i = 0; i < n; ++i) c[i] += x[i];
  }
  return c;
}

LegInputs compute_leg_inputs(int ell, std::span<const double> y,
                             const SicState& state,
                             const SuperpositionConfig& cfg,
                             double noise_variance) {
  const int n = cfg.block_length();
  const int other = 1 - ell;
  LegInputs in;
  in.rho.assign(n, 0.0);
  in.interference_power = 0.0;

  // rho and the residual power of the interfering leg, in the channel domain:
  //   rho_i = sqrt(P_j) tanh(gamma_j,i / 2)
  //   P_hat = P_j * mean(1 - tanh^2(gamma_j,i / 2))
  const auto& leg_j = cfg.legs[other];
  const double sqrt_pj = std::sqrt(leg_j.power);
  const auto& gamma_j = state.gamma[other];
  double one_minus = 0.0;
  std::vector<double> soft(n);
  for (int i = 0; i < n; ++i) {
    const double t = std::tanh(0.5 * channel::clamp_llr(gamma_j[i]));
    soft[i] = sqrt_pj * t;
    one_minus += 1.0 - t * t;
  }
  in.rho = leg_j.pi.apply<double>(soft);
  in.interference_power = leg_j.power * (one_minus / n);

  std::vector<double> cleaned(n);
  for (int i = 0; i < n; ++i) cleaned[i] = y[i] - in.rho[i];
  const auto llr_chan = channel::bpsk_demap(cleaned, cfg.legs[ell].power,
                                            noise_variance + in.interference_power);
  in.llr = cfg.legs[ell].pi.invert<double>(llr_chan);
  return in;
}

SicResult soft_sic_decode(std::span<const double> y,
                          const SuperpositionConfig& cfg, double noise_variance) {
  cfg.validate();
  const int n = cfg.block_length();
  if (static_cast<int>(y.size()) != n)
    throw std::invalid_argument("soft_sic_decode: y length != block length");

  SicResult res;
  auto& st = res.state;
  st.gamma[0].assign(n, 0.0);
  st.gamma[1].assign(n, 0.0);

  std::array<std::vector<std::uint8_t>, 2> bits_prev;
  for (int outer = 0; outer < cfg.outer_iters; ++outer) {
    std::array<std::vector<double>, 2> fresh;
    for (int ell = 0; ell < 2; ++ell) {
      LegInputs in = compute_leg_inputs(ell, y, st, cfg, noise_variance);
      st.interference_power[ell] = in.interference_power;
      auto dec = ldpc::sum_product_decode(in.llr, *cfg.legs[ell].h, cfg.inner_iters);
      st.converged[ell] = dec.converged;
      fresh[ell] = std::move(dec.llrs);
      if (cfg.schedule == SicSchedule::gauss_seidel) st.gamma[ell] = fresh[ell];
    }
    if (cfg.schedule == SicSchedule::jacobi) {
      st.gamma[0] = std::move(fresh[0]);
      st.gamma[1] = std::move(fresh[1]);
    }
    st.outer_done = outer + 1;

    if (cfg.early_stop) {
      std::array<std::vector<std::uint8_t>, 2> bits = {
          channel::hard_decision(st.gamma[0]), channel::hard_decision(st.gamma[1])};
      if (st.converged[0] && st.converged[1] && bits == bits_prev) break;
      bits_prev = std::move(bits);
    }
  }

  for (int ell = 0; ell < 2; ++ell) {
    const auto bits = channel::hard_decision(st.gamma[ell]);
    res.info[ell] = cfg.legs[ell].encoder->extract_info(bits);
  }
  return res;
}

}  // namespace erc::superpose
