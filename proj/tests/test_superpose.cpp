#include "erc/superpose.hpp"

#include <cmath>
#include <memory>
#include <vector>

#include "doctest.h"
#include "erc/channel.hpp"
#include "erc/rng.hpp"

using namespace erc;

namespace {

superpose::CodeLeg make_leg(int n_v, int k_v, double power, std::uint64_t seed,
                            bool random_pi, std::uint64_t pi_seed) {
  superpose::CodeLeg leg;
  auto h = std::make_shared<ldpc::ParityCheckMatrix>(
      ldpc::build_regular_ldpc(n_v, k_v, 3, seed));
  leg.h = h;
  leg.encoder = std::make_shared<ldpc::Encoder>(*h);
  leg.power = power;
  leg.pi = random_pi ? superpose::Interleaver::random(n_v, pi_seed)
                     : superpose::Interleaver::identity(n_v);
  return leg;
}

superpose::SuperpositionConfig make_config(int n, int k1, int k2, double p1,
                                           double p2, bool random_pi) {
  superpose::SuperpositionConfig cfg;
  cfg.legs[0] = make_leg(n, k1, p1, 101, random_pi, 7);
  cfg.legs[1] = make_leg(n, k2, p2, 202, random_pi, 8);
  return cfg;
}

std::vector<std::uint8_t> random_bits(int n, std::uint64_t seed) {
  rng::Stream s(seed);
  return s.next_bits(n);
}

}  // namespace

TEST_CASE("interleaver basics") {
  const auto id = superpose::Interleaver::identity(6);
  const std::vector<double> x = {1, 2, 3, 4, 5, 6};
  CHECK(id.apply<double>(x) == x);

  const auto pi = superpose::Interleaver::random(64, 5);
  CHECK(pi.size() == 64);
  std::vector<double> v(64);
  for (int i = 0; i < 64; ++i) v[i] = i;
  const auto shuffled = pi.apply<double>(v);
  CHECK(shuffled != v);
  CHECK(pi.invert<double>(shuffled) == v);
  const auto pi2 = superpose::Interleaver::random(64, 5);
  CHECK(pi.permutation() == pi2.permutation());
}

TEST_CASE("message splitting") {
  const std::vector<std::uint8_t> m = {1, 0, 1, 1, 0};
  const auto [m1, m2] = superpose::split_message(m, 2);
  CHECK(m1 == std::vector<std::uint8_t>{1, 0});
  CHECK(m2 == std::vector<std::uint8_t>{1, 1, 0});
  CHECK_THROWS(superpose::split_message(m, 6));
}

TEST_CASE("superposed codeword is the sum of weighted BPSK legs") {
  auto cfg = make_config(48, 24, 24, 0.6, 1.4, false);
  const auto m = random_bits(48, 3);
  const auto c = superpose::superpose_encode(m, cfg);

  const auto [m1, m2] = superpose::split_message(m, 24);
  const auto cw1 = cfg.legs[0].encoder->encode(m1);
  const auto cw2 = cfg.legs[1].encoder->encode(m2);
  for (int i = 0; i < 48; ++i) {
    const double want = (cw1[i] ? -1 : 1) * std::sqrt(0.6) +
                        (cw2[i] ? -1 : 1) * std::sqrt(1.4);
    CHECK(c[i] == doctest::Approx(want).epsilon(1e-15));
  }
  // average power approaches P1 + P2
  double e = 0;
  for (double v : c) e += v * v;
  CHECK(e / 48 == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("with the 0.2/0.8 split the sum constellation is exactly 4-PAM") {
  const double p = 4.0;
  auto cfg = make_config(64, 32, 32, 0.2 * p, 0.8 * p, false);
  const auto m = random_bits(64, 9);
  const auto c = superpose::superpose_encode(m, cfg);

  const auto [m1, m2] = superpose::split_message(m, 32);
  const auto cw1 = cfg.legs[0].encoder->encode(m1);  // low power leg
  const auto cw2 = cfg.legs[1].encoder->encode(m2);  // high power leg
  std::vector<std::uint8_t> pairs(2 * 64);
  for (int t = 0; t < 64; ++t) {
    pairs[2 * t] = cw2[t];
    pairs[2 * t + 1] = cw1[t];
  }
  const auto x = channel::pam4_modulate(pairs, p, 0.2, 0.8);
  for (int t = 0; t < 64; ++t) CHECK(c[t] == x[t]);  // bit-exact
}

TEST_CASE("first iteration inputs are the TIN limit exactly") {
  const double p1 = 0.9, p2 = 2.1, nv = 1.3;
  auto cfg = make_config(48, 24, 24, p1, p2, true);
  superpose::SicState st;
  st.gamma[0].assign(48, 0.0);
  st.gamma[1].assign(48, 0.0);

  std::vector<double> y(48);
  rng::Stream s(15);
  for (auto& v : y) v = s.next_gaussian();

  const auto in0 = superpose::compute_leg_inputs(0, y, st, cfg, nv);
  CHECK(in0.interference_power == p2);  // exact: tanh(0) = 0
  for (double r : in0.rho) CHECK(r == 0.0);
  const auto ref0 = cfg.legs[0].pi.invert<double>(channel::bpsk_demap(y, p1, nv + p2));
  CHECK(in0.llr == ref0);

  const auto in1 = superpose::compute_leg_inputs(1, y, st, cfg, nv);
  CHECK(in1.interference_power == p1);
  const auto ref1 = cfg.legs[1].pi.invert<double>(channel::bpsk_demap(y, p2, nv + p1));
  CHECK(in1.llr == ref1);
}

TEST_CASE("oracle interference knowledge cancels exactly") {
  const double p1 = 1.2, p2 = 0.8, nv = 0.9;
  auto cfg = make_config(48, 24, 24, p1, p2, true);

  const auto m = random_bits(48, 33);
  const auto [m1, m2] = superpose::split_message(m, 24);
  const auto cw2 = cfg.legs[1].encoder->encode(m2);

  // leg 2's posterior pinned at certainty on its true codeword
  superpose::SicState st;
  st.gamma[0].assign(48, 0.0);
  st.gamma[1].resize(48);
  for (int i = 0; i < 48; ++i)
    st.gamma[1][i] = cw2[i] ? -channel::kLlrMax : channel::kLlrMax;

  std::vector<double> y(48);
  rng::Stream s(25);
  for (auto& v : y) v = s.next_gaussian();

  const auto in = superpose::compute_leg_inputs(0, y, st, cfg, nv);
  CHECK(in.interference_power == 0.0);  // tanh(30) rounds to exactly 1

  const auto x2 = channel::bpsk_modulate(cfg.legs[1].pi.apply<std::uint8_t>(cw2), p2);
  std::vector<double> cleaned(48);
  for (int i = 0; i < 48; ++i) {
    CHECK(in.rho[i] == x2[i]);
    cleaned[i] = y[i] - x2[i];
  }
  const auto ref = cfg.legs[0].pi.invert<double>(channel::bpsk_demap(cleaned, p1, nv));
  CHECK(in.llr == ref);  // single-user LLRs, bit for bit
}

TEST_CASE("zero-power leg reduces to the single-code pipeline bit-exactly") {
  const double p = 2.4, nv = 1.0;
  auto cfg = make_config(96, 48, 48, 0.0, p, false);  // identity interleavers
  cfg.outer_iters = 4;
  cfg.inner_iters = 20;

  const auto m = random_bits(96, 41);
  const auto [m1, m2] = superpose::split_message(m, 48);
  const auto c = superpose::superpose_encode(m, cfg);

  // the zero-power leg contributes nothing to the waveform
  const auto cw2 = cfg.legs[1].encoder->encode(m2);
  const auto x2 = channel::bpsk_modulate(cw2, p);
  for (int i = 0; i < 96; ++i) CHECK(c[i] == x2[i]);

  const auto y = channel::awgn_transmit(c, nv, 51);
  const auto res = superpose::soft_sic_decode(y, cfg, nv);

  const auto llr = channel::bpsk_demap(y, p, nv);
  const auto dec = ldpc::sum_product_decode(llr, *cfg.legs[1].h, cfg.inner_iters);
  CHECK(res.state.gamma[1] == dec.llrs);
  CHECK(res.info[1] ==
        cfg.legs[1].encoder->extract_info(channel::hard_decision(dec.llrs)));
}

TEST_CASE("soft SIC separates two comfortably powered legs") {
  const double p = 6.0;
  auto cfg = make_config(512, 128, 128, 0.5 * p, 0.5 * p, true);
  int both_ok = 0;
  for (int t = 0; t < 10; ++t) {
    const auto m = random_bits(256, 60 + t);
    const auto c = superpose::superpose_encode(m, cfg);
    const auto y = channel::awgn_transmit(c, 1.0, 90 + t);
    const auto res = superpose::soft_sic_decode(y, cfg, 1.0);
    const auto [m1, m2] = superpose::split_message(m, 128);
    if (res.info[0] == m1 && res.info[1] == m2) ++both_ok;
  }
  CHECK(both_ok >= 9);
}

TEST_CASE("early stopping halts once both legs settle") {
  const double p = 6.0;
  auto cfg = make_config(512, 128, 128, 0.5 * p, 0.5 * p, true);
  cfg.early_stop = true;
  const auto m = random_bits(256, 77);
  const auto c = superpose::superpose_encode(m, cfg);
  const auto y = channel::awgn_transmit(c, 1.0, 78);
  const auto res = superpose::soft_sic_decode(y, cfg, 1.0);
  CHECK(res.state.outer_done < cfg.outer_iters);
  CHECK(res.state.converged[0]);
  CHECK(res.state.converged[1]);
}

TEST_CASE("gauss-seidel schedule also decodes") {
  const double p = 6.0;
  auto cfg = make_config(512, 128, 128, 0.5 * p, 0.5 * p, true);
  cfg.schedule = superpose::SicSchedule::gauss_seidel;
  const auto m = random_bits(256, 81);
  const auto c = superpose::superpose_encode(m, cfg);
  const auto y = channel::awgn_transmit(c, 1.0, 82);
  const auto res = superpose::soft_sic_decode(y, cfg, 1.0);
  const auto [m1, m2] = superpose::split_message(m, 128);
  CHECK(res.info[0] == m1);
  CHECK(res.info[1] == m2);
}

TEST_CASE("configuration validation") {
  auto cfg = make_config(48, 24, 24, 1.0, 1.0, false);
  cfg.legs[1] = make_leg(64, 32, 1.0, 5, false, 0);  // wrong block length
  const std::vector<double> y(48, 0.0);
  CHECK_THROWS(superpose::soft_sic_decode(y, cfg, 1.0));

  auto cfg2 = make_config(48, 24, 24, 1.0, 1.0, false);
  cfg2.legs[0].pi = superpose::Interleaver::identity(32);
  CHECK_THROWS(cfg2.validate());
}
