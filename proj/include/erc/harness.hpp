#pragma once

#include <memory>
#include <string>
#include <vector>

#include "erc/config.hpp"
#include "erc/report.hpp"

namespace erc::harness {

enum class Scheme {
  uncoded_bpsk,
  bpsk_ldpc,
  sparc,
  superposition_2ldpc,
  pam4_ldpc,
};

Scheme parse_scheme(const std::string& name);
const char* scheme_name(Scheme s);

// Stop a point once BOTH error floors are met, or at max_frames.  The fold
// over trials is sequential in trial order, so the stopping decision (and
// every reported count) is identical for any worker count.
struct StoppingRule {
  long min_bit_errors = 100;
  long min_frame_errors = 20;
  long max_frames = 100000;
};

// A fully built scenario: codes, design matrices and interleavers are
// constructed once; points and trials are pure functions of the seeds.
class Experiment {
 public:
  static Experiment build(const config::KeyValues& cfg);

  report::ResultRow run_point(double power, int threads = 1) const;
  std::vector<report::ResultRow> run_sweep(int threads = 1) const;
  // k1_list x alpha_grid at the fixed split_snr operating point.
  std::vector<report::ResultRow> run_power_split(int threads = 1) const;

  report::Report make_report(std::vector<report::ResultRow> rows) const;

  Scheme scheme() const;
  int n() const;
  int k() const;  // effective information bits per frame
  std::vector<double> grid_powers() const;
  const config::KeyValues& cfg() const;

 private:
  struct Impl;
  explicit Experiment(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace erc::harness
