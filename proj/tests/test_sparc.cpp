#include "erc/sparc.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "erc/channel.hpp"
#include "erc/rng.hpp"

using namespace erc;

TEST_CASE("parameter construction and bit accounting") {
  const auto p = sparc::SparcParams::uniform(8, 5, 64, 2.0, 1);
  CHECK(p.num_sections() == 5);
  CHECK(p.total_columns() == 40);
  CHECK(p.message_bits() == 15);
  CHECK(p.amplitude(0) == doctest::Approx(std::sqrt(64 * 0.4)));

  // 11 bits with M = 16: two full sections and a remainder of 2^3 columns
  const auto q = sparc::SparcParams::for_message_bits(11, 16, 64, 1.0, 1);
  CHECK(q.section_sizes == std::vector<int>{16, 16, 8});
  CHECK(q.message_bits() == 11);
  double sum = 0;
  for (double x : q.power_alloc) sum += x;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS(sparc::SparcParams::uniform(3, 2, 8, 1.0, 1));   // not a power of two
  CHECK_THROWS(sparc::SparcParams::uniform(4, 0, 8, 1.0, 1));   // no sections
}

TEST_CASE("design matrix entries are seed-pure with variance 1/n") {
  const int n = 400;
  sparc::DesignMatrix a(n, 32, 42, sparc::Storage::on_demand);
  CHECK_FALSE(a.materialized());
  const auto c0 = a.column(0);
  const auto c0_again = a.column(0);
  CHECK(c0 == c0_again);
  CHECK(a.column(1) != c0);

  sparc::DesignMatrix b(n, 32, 42, sparc::Storage::materialized);
  CHECK(b.materialized());
  for (int j = 0; j < 32; ++j) CHECK(a.column(j) == b.column(j));

  double sq = 0.0;
  for (int j = 0; j < 32; ++j)
    for (double v : a.column(j)) sq += v * v;
  CHECK(sq / (32 * n) == doctest::Approx(1.0 / n).epsilon(0.05));
}

TEST_CASE("matrix kernels agree across storage modes and with naive products") {
  const int n = 64, cols = 24;
  sparc::DesignMatrix mem(n, cols, 7, sparc::Storage::materialized);
  sparc::DesignMatrix od(n, cols, 7, sparc::Storage::on_demand);

  rng::Stream s(3);
  std::vector<double> x(cols), z(n);
  for (auto& v : x) v = s.next_gaussian();
  for (auto& v : z) v = s.next_gaussian();

  std::vector<double> y1(n), y2(n), t1(cols), t2(cols);
  mem.multiply(x, y1);
  od.multiply(x, y2);
  CHECK(y1 == y2);  // same float32 image, same kernel
  mem.multiply_transpose(z, t1);
  od.multiply_transpose(z, t2);
  CHECK(t1 == t2);

  // naive reference through the canonical double columns, f32-rounded; the
  // kernels accumulate in f32 lanes, so agreement is at f32 resolution
  for (int i = 0; i < n; ++i) {
    double acc = 0;
    for (int j = 0; j < cols; ++j)
      acc += static_cast<double>(static_cast<float>(mem.column(j)[i])) * x[j];
    CHECK(y1[i] == doctest::Approx(acc).epsilon(2e-5));
  }
  for (int j = 0; j < cols; ++j) {
    CHECK(od.dot_column(j, z) == t1[j]);  // same kernel, bit for bit
  }
}

TEST_CASE("bit to section mapping round trips") {
  const auto p = sparc::SparcParams::for_message_bits(11, 16, 64, 1.0, 2);
  rng::Stream s(4);
  for (int t = 0; t < 200; ++t) {
    const auto bits = s.next_bits(11);
    const auto sec = sparc::map_bits_to_sections(bits, p);
    CHECK(sparc::map_sections_to_bits(sec, p) == bits);
  }
}

TEST_CASE("encoded power meets the constraint on average") {
  const auto p = sparc::SparcParams::uniform(8, 12, 128, 2.5, 11);
  sparc::DesignMatrix a(p.n, p.total_columns(), p.design_seed);
  rng::Stream s(6);
  double avg = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const auto bits = s.next_bits(p.message_bits());
    const auto c = sparc::sparc_encode(bits, p, a);
    double e = 0;
    for (double v : c) e += v * v;
    avg += e / p.n;
  }
  avg /= trials;
  CHECK(avg == doctest::Approx(2.5).epsilon(0.05));
}

TEST_CASE("denoiser sections sum to their amplitude with interior entries") {
  const auto p = sparc::SparcParams::uniform(8, 16, 256, 1.0, 3);
  const int cols = p.total_columns();
  rng::Stream s(12);
  std::vector<double> stat(cols), out(cols);
  const auto off = p.section_offsets();
  for (int rep = 0; rep < 100; ++rep) {
    const double tau_sq = 0.25 + 2.0 * s.next_double();
    for (auto& v : stat) v = s.next_gaussian();
    sparc::denoise(stat, tau_sq, p, out);
    for (int l = 0; l < p.num_sections(); ++l) {
      const double amp = p.amplitude(l);
      double sum = 0;
      int best_in = off[l], best_out = off[l];
      for (int j = off[l]; j < off[l + 1]; ++j) {
        sum += out[j];
        CHECK(out[j] > 0.0);
        CHECK(out[j] < amp);
        if (stat[j] > stat[best_in]) best_in = j;
        if (out[j] > out[best_out]) best_out = j;
      }
      CHECK(std::abs(sum - amp) <= 1e-9 * amp);
      CHECK(best_in == best_out);  // monotone in the statistic
    }
  }
}

TEST_CASE("denoiser is invariant to per-section shifts") {
  const auto p = sparc::SparcParams::uniform(4, 3, 48, 1.0, 5);
  const int cols = p.total_columns();
  rng::Stream s(13);
  std::vector<double> stat(cols), shifted(cols), a(cols), b(cols);
  for (auto& v : stat) v = s.next_gaussian();
  for (int j = 0; j < cols; ++j) shifted[j] = stat[j] + 7.5;
  sparc::denoise(stat, 0.8, p, a);
  sparc::denoise(shifted, 0.8, p, b);
  for (int j = 0; j < cols; ++j) CHECK(b[j] == doctest::Approx(a[j]).epsilon(1e-11));
}

TEST_CASE("amp recovers the message at comfortable SNR") {
  const double power = 2.0 * std::pow(10.0, 0.6);  // Es/N0 = 6 dB
  const auto p = sparc::SparcParams::uniform(4, 3, 96, power, 21);
  sparc::DesignMatrix a(p.n, p.total_columns(), p.design_seed);
  int exact = 0;
  for (int t = 0; t < 50; ++t) {
    rng::Stream ms(rng::derive(100, t));
    const auto bits = ms.next_bits(p.message_bits());
    const auto c = sparc::sparc_encode(bits, p, a);
    const auto y = channel::awgn_transmit(c, 1.0, rng::derive(200, t));
    const auto r = sparc::amp_decode(y, p, a, 50, true);
    if (sparc::sparc_hard_decision(r, p) == bits) ++exact;
    CHECK(r.iterations <= 50);
    CHECK(r.tau_sq_history.size() == static_cast<std::size_t>(r.iterations));
  }
  CHECK(exact >= 45);
}

TEST_CASE("amp on a noiseless channel converges with early stop") {
  const auto p = sparc::SparcParams::uniform(8, 6, 192, 1.5, 31);
  sparc::DesignMatrix a(p.n, p.total_columns(), p.design_seed);
  rng::Stream s(17);
  const auto bits = s.next_bits(p.message_bits());
  const auto c = sparc::sparc_encode(bits, p, a);
  const auto r = sparc::amp_decode(c, p, a, 50, true);
  CHECK(sparc::sparc_hard_decision(r, p) == bits);
  CHECK(r.early_stopped);
  CHECK(r.iterations < 50);
  // residual variance estimate decays
  CHECK(r.tau_sq_history.back() < r.tau_sq_history.front());
}

TEST_CASE("ml oracle minimizes the residual over every section choice") {
  const auto p = sparc::SparcParams::uniform(4, 3, 24, 1.0, 41);
  sparc::DesignMatrix a(p.n, p.total_columns(), p.design_seed);
  rng::Stream s(19);
  std::vector<double> y(p.n);
  for (auto& v : y) v = s.next_gaussian();

  const auto best = sparc::ml_oracle_decode(y, p, a);
  const double best_obj = sparc::residual_norm_sq(y, p, a, best);
  sparc::SectionVector cand;
  cand.indices.assign(3, 0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        cand.indices = {i, j, k};
        CHECK(sparc::residual_norm_sq(y, p, a, cand) >= best_obj - 1e-9);
      }
}

TEST_CASE("ml oracle refuses oversized search spaces") {
  const auto p = sparc::SparcParams::uniform(1 << 11, 2, 64, 1.0, 1);  // 2^22 states
  sparc::DesignMatrix a(p.n, p.total_columns(), p.design_seed, sparc::Storage::on_demand);
  std::vector<double> y(p.n, 0.0);
  CHECK_THROWS(sparc::ml_oracle_decode(y, p, a));
}

TEST_CASE("storage auto mode respects the byte budget") {
  sparc::DesignMatrix small(64, 16, 3, sparc::Storage::automatic, 1 << 20);
  CHECK(small.materialized());  // 4 KiB fits easily
  sparc::DesignMatrix large(1024, 4096, 3, sparc::Storage::automatic, 1 << 20);
  CHECK_FALSE(large.materialized());  // 16 MiB over a 1 MiB budget
}
