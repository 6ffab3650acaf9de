#include "erc/channel.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "erc/rng.hpp"

using namespace erc;
using channel::SnrUnit;

TEST_CASE("snr conversions follow Es/N0 = P/2 and Eb/N0 = nP/2k") {
  CHECK(channel::snr_convert(2.0, 100, 100, SnrUnit::EsN0_dB) == doctest::Approx(0.0));
  CHECK(channel::snr_convert(2.0, 100, 50, SnrUnit::EbN0_dB) ==
        doctest::Approx(10.0 * std::log10(2.0)));
  // the Eb/Es ratio is exactly n/k in linear terms
  const double es = channel::snr_convert(3.7, 2048, 1890, SnrUnit::EsN0_dB);
  const double eb = channel::snr_convert(3.7, 2048, 1890, SnrUnit::EbN0_dB);
  CHECK(eb - es == doctest::Approx(10.0 * std::log10(2048.0 / 1890.0)).epsilon(1e-12));
  for (const SnrUnit u : {SnrUnit::P_linear, SnrUnit::EsN0_dB, SnrUnit::EbN0_dB}) {
    const double v = channel::snr_convert(1.234, 96, 24, u);
    CHECK(channel::power_from_snr(v, u, 96, 24) == doctest::Approx(1.234).epsilon(1e-12));
  }
}

TEST_CASE("Q function reference values") {
  CHECK(channel::qfunc(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(channel::qfunc(1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-12));
  CHECK(channel::qfunc(3.0) == doctest::Approx(1.3498980316300946e-3).epsilon(1e-12));
  CHECK(channel::qfunc(-1.0) == doctest::Approx(1.0 - 0.15865525393145707).epsilon(1e-12));
}

TEST_CASE("bpsk mapping and demapping") {
  const std::vector<std::uint8_t> bits = {0, 1, 1, 0};
  const auto x = channel::bpsk_modulate(bits, 4.0);
  CHECK(x == std::vector<double>{2.0, -2.0, -2.0, 2.0});

  const std::vector<double> y = {0.5, -1.25, 3.0};
  const auto llr = channel::bpsk_demap(y, 4.0, 2.0);
  for (std::size_t i = 0; i < y.size(); ++i)
    CHECK(llr[i] == doctest::Approx(2.0 * 2.0 * y[i] / 2.0).epsilon(1e-15));

  SUBCASE("zero power gives zero LLRs") {
    const auto z = channel::bpsk_demap(y, 0.0, 1.0);
    for (double v : z) CHECK(v == 0.0);
  }
  SUBCASE("noiseless saturates") {
    const auto z = channel::bpsk_demap(y, 1.0, 0.0);
    CHECK(z[0] == channel::kLlrMax);
    CHECK(z[1] == -channel::kLlrMax);
  }
}

TEST_CASE("hard decisions: nonnegative LLR decodes to bit 0") {
  const std::vector<double> llr = {0.0, -0.1, 5.0, -7.0};
  CHECK(channel::hard_decision(llr) == std::vector<std::uint8_t>{0, 1, 0, 1});
}

TEST_CASE("awgn transmit is deterministic, unbiased, correctly scaled") {
  std::vector<double> c(200000, 1.5);
  const auto y1 = channel::awgn_transmit(c, 2.0, 77);
  const auto y2 = channel::awgn_transmit(c, 2.0, 77);
  CHECK(y1 == y2);
  const auto y3 = channel::awgn_transmit(c, 2.0, 78);
  CHECK(y1 != y3);

  double sum = 0, sq = 0;
  for (std::size_t i = 0; i < y1.size(); ++i) {
    sum += y1[i] - 1.5;
    sq += (y1[i] - 1.5) * (y1[i] - 1.5);
  }
  const double mean = sum / y1.size();
  const double var = sq / y1.size() - mean * mean;
  CHECK(std::abs(mean) < 4.0 * std::sqrt(2.0 / y1.size()));
  CHECK(var == doctest::Approx(2.0).epsilon(0.02));

  SUBCASE("zero variance is the identity") {
    CHECK(channel::awgn_transmit(c, 0.0, 5) == c);
  }
}

TEST_CASE("pam4 constellation at the 0.2/0.8 split") {
  // bits (b_a, b_b) with b_a carrying the 0.8 fraction
  const std::vector<std::uint8_t> bits = {0, 0, 0, 1, 1, 0, 1, 1};
  const double p = 3.7;
  const auto x = channel::pam4_modulate(bits, p, 0.2, 0.8);
  const double a2 = std::sqrt(p * 0.8), a1 = std::sqrt(p * 0.2);
  REQUIRE(x.size() == 4);
  CHECK(x[0] == a2 + a1);
  CHECK(x[1] == a2 - a1);
  CHECK(x[2] == -a2 + a1);
  CHECK(x[3] == -a2 - a1);
  // sqrt(0.8 p) = 2 sqrt(0.2 p) exactly, so the level ratio is exactly 3
  CHECK((a2 + a1) == 3.0 * (a2 - a1));
  // average constellation power is P
  double avg = 0;
  for (double v : x) avg += v * v;
  CHECK(avg / 4.0 == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("pam4 demap equals the direct log sum ratio") {
  const double p = 2.0, s2 = 0.7, p1 = 0.2, p2 = 0.8;
  const double a2 = std::sqrt(p * p2), a1 = std::sqrt(p * p1);
  const double lv[4] = {a2 + a1, a2 - a1, -a2 + a1, -a2 - a1};  // (b_a b_b) = 00 01 10 11
  rng::Stream s(5);
  for (int t = 0; t < 200; ++t) {
    const double y = 4.0 * (s.next_double() - 0.5);
    const auto llr = channel::pam4_demap(std::vector<double>{y}, p, p1, p2, s2);
    auto lik = [&](int idx) { return std::exp(-(y - lv[idx]) * (y - lv[idx]) / (2 * s2)); };
    const double ref_a = std::log((lik(0) + lik(1)) / (lik(2) + lik(3)));
    const double ref_b = std::log((lik(0) + lik(2)) / (lik(1) + lik(3)));
    CHECK(llr[0] == doctest::Approx(ref_a).epsilon(1e-10));
    CHECK(llr[1] == doctest::Approx(ref_b).epsilon(1e-10));
  }
}

TEST_CASE("pam4 round trip with light noise recovers both bits") {
  rng::Stream s(9);
  std::vector<std::uint8_t> bits(2000);
  for (auto& b : bits) b = s.next_bit();
  const auto x = channel::pam4_modulate(bits, 8.0, 0.2, 0.8);
  const auto y = channel::awgn_transmit(x, 0.005, 3);
  const auto llr = channel::pam4_demap(y, 8.0, 0.2, 0.8, 0.005);
  CHECK(channel::hard_decision(llr) == bits);

  SUBCASE("noiseless demap saturates to the nearest level") {
    const auto l0 = channel::pam4_demap(x, 8.0, 0.2, 0.8, 0.0);
    CHECK(channel::hard_decision(l0) == bits);
    for (double v : l0) CHECK(std::abs(v) == channel::kLlrMax);
  }
}

TEST_CASE("pam4 rejects bad inputs") {
  const std::vector<std::uint8_t> odd = {0};
  CHECK_THROWS(channel::pam4_modulate(odd, 1.0, 0.2, 0.8));
  const std::vector<std::uint8_t> two = {0, 1};
  CHECK_THROWS(channel::pam4_modulate(two, 1.0, 0.3, 0.8));  // fractions sum > 1
}
