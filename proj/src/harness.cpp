#include "erc/harness.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "erc/channel.hpp"
#include "erc/ldpc.hpp"
#include "erc/rng.hpp"
#include "erc/sparc.hpp"
#include "erc/superpose.hpp"
#include "json.hpp"

namespace erc::harness {

Scheme parse_scheme(const std::string& name) {
  if (name == "uncoded_bpsk") return Scheme::uncoded_bpsk;
  if (name == "bpsk_ldpc") return Scheme::bpsk_ldpc;
  if (name == "sparc") return Scheme::sparc;
  if (name == "superposition_2ldpc") return Scheme::superposition_2ldpc;
  if (name == "pam4_ldpc") return Scheme::pam4_ldpc;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::uncoded_bpsk: return "uncoded_bpsk";
    case Scheme::bpsk_ldpc: return "bpsk_ldpc";
    case Scheme::sparc: return "sparc";
    case Scheme::superposition_2ldpc: return "superposition_2ldpc";
    case Scheme::pam4_ldpc: return "pam4_ldpc";
  }
  return "?";
}

namespace {

struct TrialOutcome {
  long bit_errors = 0;
  bool frame_error = false;
};

struct LdpcLeg {
  std::shared_ptr<const ldpc::ParityCheckMatrix> h;
  std::shared_ptr<const ldpc::Encoder> enc;
};

std::uint64_t real_bits(double x) { return std::bit_cast<std::uint64_t>(x); }

std::vector<std::uint8_t> random_message(std::uint64_t key, int k) {
  rng::Stream s(key);
  return s.next_bits(k);
}

long hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw std::logic_error("hamming: length mismatch");
  long d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

LdpcLeg build_code(const config::KeyValues& cfg, const std::string& prefix,
                   int n_v, int want_k, std::uint64_t default_seed) {
  LdpcLeg leg;
  auto finish = [&](ldpc::ParityCheckMatrix h) {
    leg.h = std::make_shared<ldpc::ParityCheckMatrix>(std::move(h));
    leg.enc = std::make_shared<ldpc::Encoder>(*leg.h);
  };
  if (cfg.has(prefix + "alist")) {
    finish(ldpc::ParityCheckMatrix::from_alist(
        report::read_file(cfg.get_string(prefix + "alist"))));
  } else if (cfg.has(prefix + "protograph")) {
    const auto p = ldpc::Protograph::from_text(
        report::read_file(cfg.get_string(prefix + "protograph")));
    finish(ldpc::lift_protograph(p, cfg.get_seed(prefix + "lift_seed", default_seed)));
  } else {
    const int wc = static_cast<int>(cfg.get_int(prefix + "col_weight", 3));
    const std::uint64_t seed = cfg.get_seed(prefix + "seed", default_seed);
    // PEG is almost surely full rank; salt the seed if a dependency slips in.
    for (int attempt = 0; attempt < 16; ++attempt) {
      const std::uint64_t s = attempt == 0 ? seed : rng::derive(seed, attempt);
      auto h = ldpc::build_regular_ldpc(n_v, want_k, wc, s);
      ldpc::Encoder enc(h);
      if (enc.dimension() == want_k) {
        finish(std::move(h));
        return leg;
      }
    }
    throw std::invalid_argument("ldpc: could not reach requested dimension (rank deficiency)");
  }
  if (leg.h->n_cols != n_v)
    throw std::invalid_argument(prefix + "code: block length " +
                             std::to_string(leg.h->n_cols) + ", expected " +
                             std::to_string(n_v));
  return leg;
}

const std::vector<std::string> kCommonKeys = {
    "scheme", "k", "n", "snr_grid", "snr_unit", "master_seed",
    "noise_variance", "min_bit_errors", "min_frame_errors", "max_frames",
    "checkpoint_dir", "k_effective"};

std::vector<std::string> with_common(std::vector<std::string> extra) {
  extra.insert(extra.end(), kCommonKeys.begin(), kCommonKeys.end());
  return extra;
}

}  // namespace

struct Experiment::Impl {
  config::KeyValues cfg;
  Scheme scheme = Scheme::uncoded_bpsk;
  int n = 0;
  int k = 0;
  double noise_variance = 1.0;
  channel::SnrUnit unit = channel::SnrUnit::EsN0_dB;
  std::vector<double> grid_raw;
  StoppingRule rule;
  std::uint64_t master_seed = 1;
  std::string checkpoint_dir;

  // bpsk_ldpc / pam4_ldpc
  LdpcLeg code;
  int ldpc_iters = 20;
  bool fallback = false;
  double pam4_p1 = 0.2;

  // sparc
  int sparc_m = 0;
  int sparc_t = 50;
  bool sparc_early = true;
  std::uint64_t sparc_seed = 0;
  std::shared_ptr<const sparc::DesignMatrix> design;

  // superposition
  int k1 = 0;
  double alpha = 0.5;
  LdpcLeg code1, code2;
  superpose::Interleaver pi1, pi2;
  int outer_iters = 20, inner_iters = 20;
  superpose::SicSchedule schedule = superpose::SicSchedule::jacobi;
  bool sic_early = false;
  bool interleave = true;
  std::uint64_t iseed1 = 0, iseed2 = 0;

  sparc::SparcParams sparc_params(double power) const {
    return sparc::SparcParams::for_message_bits(k, sparc_m, n, power, sparc_seed);
  }

  superpose::SuperpositionConfig sic_config(const LdpcLeg& c1, const LdpcLeg& c2,
                                            double power, double a,
                                            const superpose::Interleaver& p1,
                                            const superpose::Interleaver& p2) const {
    superpose::SuperpositionConfig s;
    s.legs[0] = {c1.h, c1.enc, a * power, p1};
    s.legs[1] = {c2.h, c2.enc, (1.0 - a) * power, p2};
    s.outer_iters = outer_iters;
    s.inner_iters = inner_iters;
    s.schedule = schedule;
    s.early_stop = sic_early;
    return s;
  }

  TrialOutcome run_trial(double power, std::uint64_t point_key, long trial,
                         const superpose::SuperpositionConfig* sic,
                         int trial_k) const {
    const std::uint64_t tkey = rng::derive(point_key, static_cast<std::uint64_t>(trial));
    const std::uint64_t msg_key = rng::derive(tkey, 1);
    const std::uint64_t noise_key = rng::derive(tkey, 2);
    const auto m = random_message(msg_key, trial_k);
    TrialOutcome out;
    std::vector<std::uint8_t> decoded;

    switch (scheme) {
      case Scheme::uncoded_bpsk: {
        const auto c = channel::bpsk_modulate(m, power);
        const auto y = channel::awgn_transmit(c, noise_variance, noise_key);
        decoded.resize(m.size());
        for (std::size_t i = 0; i < y.size(); ++i) decoded[i] = y[i] < 0.0 ? 1 : 0;
        break;
      }
      case Scheme::bpsk_ldpc: {
        const auto cw = code.enc->encode(m);
        const auto c = channel::bpsk_modulate(cw, power);
        const auto y = channel::awgn_transmit(c, noise_variance, noise_key);
        const auto llr = channel::bpsk_demap(y, power, noise_variance);
        const auto dec = ldpc::sum_product_decode(llr, *code.h, ldpc_iters);
        const auto bits = (!dec.converged && fallback)
                              ? channel::hard_decision(llr)
                              : channel::hard_decision(dec.llrs);
        decoded = code.enc->extract_info(bits);
        break;
      }
      case Scheme::sparc: {
        const auto p = sparc_params(power);
        const auto c = sparc::sparc_encode(m, p, *design);
        const auto y = channel::awgn_transmit(c, noise_variance, noise_key);
        const auto r = sparc::amp_decode(y, p, *design, sparc_t, sparc_early);
        decoded = sparc::sparc_hard_decision(r, p);
        break;
      }
      case Scheme::superposition_2ldpc: {
        const auto c = superpose::superpose_encode(m, *sic);
        const auto y = channel::awgn_transmit(c, noise_variance, noise_key);
        const auto r = superpose::soft_sic_decode(y, *sic, noise_variance);
        decoded = r.info[0];
        decoded.insert(decoded.end(), r.info[1].begin(), r.info[1].end());
        break;
      }
      case Scheme::pam4_ldpc: {
        const auto cw = code.enc->encode(m);
        const auto x = channel::pam4_modulate(cw, power, pam4_p1, 1.0 - pam4_p1);
        const auto y = channel::awgn_transmit(x, noise_variance, noise_key);
        const auto llr =
            channel::pam4_demap(y, power, pam4_p1, 1.0 - pam4_p1, noise_variance);
        const auto dec = ldpc::sum_product_decode(llr, *code.h, ldpc_iters);
        decoded = code.enc->extract_info(channel::hard_decision(dec.llrs));
        break;
      }
    }
    out.bit_errors = hamming(m, decoded);
    out.frame_error = out.bit_errors > 0;
    return out;
  }

  std::string checkpoint_path(const std::string& tag) const {
    if (checkpoint_dir.empty()) return "";
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(cfg.hash()));
    return checkpoint_dir + "/" + hash + "_" + tag + ".json";
  }

  report::ResultRow run_counts(const std::function<TrialOutcome(long)>& trial,
                               int trial_k, std::uint64_t point_key,
                               const std::string& tag, int threads) const {
    long trials = 0, bit_err = 0, frame_err = 0;
    bool completed = false;

    const std::string ckpt = checkpoint_path(tag);
    if (!ckpt.empty() && std::filesystem::exists(ckpt)) {
      const auto j = nlohmann::json::parse(report::read_file(ckpt));
      if (j.at("point").get<std::string>() == tag) {
        trials = j.at("trials").get<long>();
        bit_err = j.at("bit_errors").get<long>();
        frame_err = j.at("frame_errors").get<long>();
        completed = j.at("completed").get<bool>();
      }
    }
    auto save = [&](bool done) {
      if (ckpt.empty()) return;
      nlohmann::json j{{"point", tag},
                       {"trials", trials},
                       {"bit_errors", bit_err},
                       {"frame_errors", frame_err},
                       {"completed", done}};
      const std::string tmp = ckpt + ".tmp";
      report::write_file(tmp, j.dump() + "\n");
      std::filesystem::rename(tmp, ckpt);
    };

    auto stop_met = [&] {
      return bit_err >= rule.min_bit_errors && frame_err >= rule.min_frame_errors;
    };

    if (!completed) {
      long chunk = std::max<long>(2, 2L * threads);
      std::vector<TrialOutcome> buf;
      auto last_save = std::chrono::steady_clock::now();
      bool done = trials >= rule.max_frames || stop_met();
      while (!done) {
        chunk = std::min(chunk, rule.max_frames - trials);
        buf.assign(static_cast<std::size_t>(chunk), {});
        const long base = trials;
        if (threads <= 1) {
          for (long i = 0; i < chunk; ++i) buf[i] = trial(base + i);
        } else {
          std::atomic<long> next{0};
          std::exception_ptr err;
          std::mutex err_mu;
          std::vector<std::thread> workers;
          workers.reserve(threads);
          for (int w = 0; w < threads; ++w)
            workers.emplace_back([&] {
              try {
                for (long i = next.fetch_add(1); i < chunk; i = next.fetch_add(1))
                  buf[i] = trial(base + i);
              } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
              }
            });
          for (auto& w : workers) w.join();
          if (err) std::rethrow_exception(err);
        }
        // Sequential fold in trial order; counts stop exactly where a serial
        // run would, regardless of chunking or worker count.
        for (long i = 0; i < chunk && !done; ++i) {
          bit_err += buf[i].bit_errors;
          frame_err += buf[i].frame_error ? 1 : 0;
          ++trials;
          done = trials >= rule.max_frames || stop_met();
        }
        chunk = std::min<long>(chunk * 2, 256);
        const auto now = std::chrono::steady_clock::now();
        if (!done && now - last_save > std::chrono::seconds(30)) {
          save(false);
          last_save = now;
        }
      }
      save(true);
    }

    report::ResultRow row;
    row.scheme = scheme_name(scheme);
    row.trials = trials;
    row.bit_errors = bit_err;
    row.bits = trials * static_cast<long>(trial_k);
    row.frame_errors = frame_err;
    row.point_seed = point_key;
    return row;
  }
};

namespace {

std::string point_tag(double power) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "p%016llx",
                static_cast<unsigned long long>(real_bits(power)));
  return buf;
}

}  // namespace

Experiment Experiment::build(const config::KeyValues& cfg_in) {
  auto impl = std::make_shared<Impl>();
  auto& im = *impl;
  im.cfg = cfg_in;
  im.scheme = parse_scheme(im.cfg.get_string("scheme"));
  im.n = static_cast<int>(im.cfg.get_int("n"));
  if (im.n <= 0) throw std::invalid_argument("config: n must be positive");
  im.noise_variance = im.cfg.get_real("noise_variance", 1.0);
  if (im.noise_variance < 0) throw std::invalid_argument("config: negative noise_variance");
  im.master_seed = im.cfg.get_seed("master_seed", 1);
  im.rule.min_bit_errors = im.cfg.get_int("min_bit_errors", 100);
  im.rule.min_frame_errors = im.cfg.get_int("min_frame_errors", 20);
  im.rule.max_frames = im.cfg.get_int("max_frames", 100000);
  if (im.rule.max_frames < 1) throw std::invalid_argument("config: max_frames < 1");
  im.checkpoint_dir = im.cfg.get_string("checkpoint_dir", "");
  if (!im.checkpoint_dir.empty())
    std::filesystem::create_directories(im.checkpoint_dir);

  const std::string unit = im.cfg.get_string("snr_unit", "EsN0_dB");
  if (unit == "P_linear")
    im.unit = channel::SnrUnit::P_linear;
  else if (unit == "EsN0_dB")
    im.unit = channel::SnrUnit::EsN0_dB;
  else if (unit == "EbN0_dB")
    im.unit = channel::SnrUnit::EbN0_dB;
  else
    throw std::invalid_argument("config: snr_unit must be P_linear|EsN0_dB|EbN0_dB");
  if (im.cfg.has("snr_grid")) im.grid_raw = im.cfg.get_grid("snr_grid");

  switch (im.scheme) {
    case Scheme::uncoded_bpsk: {
      im.cfg.require_known(with_common({}));
      im.k = static_cast<int>(im.cfg.get_int("k", im.n));
      if (im.k != im.n)
        throw std::invalid_argument("uncoded_bpsk: k must equal n (one bit per use)");
      break;
    }
    case Scheme::bpsk_ldpc:
    case Scheme::pam4_ldpc: {
      std::vector<std::string> keys = {"ldpc_col_weight", "ldpc_iterations",
                                       "ldpc_seed", "ldpc_alist",
                                       "ldpc_protograph", "ldpc_lift_seed"};
      if (im.scheme == Scheme::bpsk_ldpc)
        keys.push_back("fallback_on_failure");
      else
        keys.push_back("pam4_p1_frac");
      im.cfg.require_known(with_common(keys));
      const int n_v = im.scheme == Scheme::pam4_ldpc ? 2 * im.n : im.n;
      const int want_k = static_cast<int>(im.cfg.get_int("k"));
      im.code = build_code(im.cfg, "ldpc_", n_v, want_k,
                           rng::derive(im.master_seed, 0x6c64ull));
      im.k = im.code.enc->dimension();
      if (im.k != want_k) im.cfg.set("k_effective", std::to_string(im.k));
      im.ldpc_iters = static_cast<int>(im.cfg.get_int("ldpc_iterations", 20));
      im.fallback = im.cfg.get_bool("fallback_on_failure", false);
      im.pam4_p1 = im.cfg.get_real("pam4_p1_frac", 0.2);
      if (im.pam4_p1 < 0 || im.pam4_p1 > 1)
        throw std::invalid_argument("config: pam4_p1_frac outside [0,1]");
      break;
    }
    case Scheme::sparc: {
      im.cfg.require_known(with_common({"sparc_M", "sparc_T", "sparc_early_stop",
                                        "sparc_seed", "sparc_storage",
                                        "sparc_budget_mb"}));
      im.k = static_cast<int>(im.cfg.get_int("k"));
      im.sparc_m = static_cast<int>(im.cfg.get_int("sparc_M"));
      im.sparc_t = static_cast<int>(im.cfg.get_int("sparc_T", 50));
      im.sparc_early = im.cfg.get_bool("sparc_early_stop", true);
      im.sparc_seed = im.cfg.get_seed("sparc_seed", rng::derive(im.master_seed, 0x5350ull));
      const auto probe = im.sparc_params(1.0);
      sparc::Storage mode = sparc::Storage::automatic;
      const std::string st = im.cfg.get_string("sparc_storage", "auto");
      if (st == "materialized")
        mode = sparc::Storage::materialized;
      else if (st == "on_demand")
        mode = sparc::Storage::on_demand;
      else if (st != "auto")
        throw std::invalid_argument("config: sparc_storage must be auto|materialized|on_demand");
      const std::size_t budget =
          static_cast<std::size_t>(im.cfg.get_int("sparc_budget_mb", 2048)) << 20;
      im.design = std::make_shared<sparc::DesignMatrix>(
          im.n, probe.total_columns(), im.sparc_seed, mode, budget);
      break;
    }
    case Scheme::superposition_2ldpc: {
      im.cfg.require_known(with_common(
          {"k1", "power1_frac", "outer_iterations", "inner_iterations",
           "interleave", "interleaver_seed1", "interleaver_seed2",
           "sic_schedule", "sic_early_stop", "k1_list", "alpha_grid",
           "split_snr", "code1_col_weight", "code1_seed", "code1_alist",
           "code1_protograph", "code1_lift_seed", "code2_col_weight",
           "code2_seed", "code2_alist", "code2_protograph", "code2_lift_seed"}));
      im.k = static_cast<int>(im.cfg.get_int("k"));
      im.k1 = static_cast<int>(im.cfg.get_int("k1"));
      if (im.k1 < 0 || im.k1 > im.k)
        throw std::invalid_argument("config: k1 outside [0, k]");
      im.alpha = im.cfg.get_real("power1_frac", 0.5);
      if (im.alpha < 0 || im.alpha > 1)
        throw std::invalid_argument("config: power1_frac outside [0,1]");
      im.code1 = build_code(im.cfg, "code1_", im.n, im.k1,
                            rng::derive(im.master_seed, 0xc1ull));
      im.code2 = build_code(im.cfg, "code2_", im.n, im.k - im.k1,
                            rng::derive(im.master_seed, 0xc2ull));
      const int k_eff = im.code1.enc->dimension() + im.code2.enc->dimension();
      im.k1 = im.code1.enc->dimension();
      if (k_eff != im.k) {
        im.k = k_eff;
        im.cfg.set("k_effective", std::to_string(k_eff));
      }
      im.outer_iters = static_cast<int>(im.cfg.get_int("outer_iterations", 20));
      im.inner_iters = static_cast<int>(im.cfg.get_int("inner_iterations", 20));
      const std::string sched = im.cfg.get_string("sic_schedule", "jacobi");
      if (sched == "jacobi")
        im.schedule = superpose::SicSchedule::jacobi;
      else if (sched == "gauss_seidel")
        im.schedule = superpose::SicSchedule::gauss_seidel;
      else
        throw std::invalid_argument("config: sic_schedule must be jacobi|gauss_seidel");
      im.sic_early = im.cfg.get_bool("sic_early_stop", false);
      im.interleave = im.cfg.get_bool("interleave", true);
      im.iseed1 = im.cfg.get_seed("interleaver_seed1", rng::derive(im.master_seed, 0xa1ull));
      im.iseed2 = im.cfg.get_seed("interleaver_seed2", rng::derive(im.master_seed, 0xa2ull));
      im.pi1 = im.interleave ? superpose::Interleaver::random(im.n, im.iseed1)
                             : superpose::Interleaver::identity(im.n);
      im.pi2 = im.interleave ? superpose::Interleaver::random(im.n, im.iseed2)
                             : superpose::Interleaver::identity(im.n);
      break;
    }
  }
  if (im.k <= 0) throw std::invalid_argument("config: nonpositive information size");
  return Experiment(std::move(impl));
}

report::ResultRow Experiment::run_point(double power, int threads) const {
  const auto& im = *impl_;
  if (power < 0) throw std::invalid_argument("run_point: negative power");
  const std::uint64_t point_key = rng::derive(im.master_seed, real_bits(power));

  superpose::SuperpositionConfig sic;
  const superpose::SuperpositionConfig* sicp = nullptr;
  if (im.scheme == Scheme::superposition_2ldpc) {
    sic = im.sic_config(im.code1, im.code2, power, im.alpha, im.pi1, im.pi2);
    sicp = &sic;
  }
  auto trial = [&, sicp](long t) {
    return im.run_trial(power, point_key, t, sicp, im.k);
  };
  auto row = im.run_counts(trial, im.k, point_key, point_tag(power), threads);
  row.power = power;
  row.esn0_db = channel::snr_convert(power, im.n, im.k, channel::SnrUnit::EsN0_dB);
  row.ebn0_db = channel::snr_convert(power, im.n, im.k, channel::SnrUnit::EbN0_dB);
  return row;
}

std::vector<double> Experiment::grid_powers() const {
  const auto& im = *impl_;
  if (im.grid_raw.empty()) throw std::invalid_argument("config: snr_grid missing");
  std::vector<double> p;
  p.reserve(im.grid_raw.size());
  for (double v : im.grid_raw)
    p.push_back(channel::power_from_snr(v, im.unit, im.n, im.k));
  return p;
}

std::vector<report::ResultRow> Experiment::run_sweep(int threads) const {
  std::vector<report::ResultRow> rows;
  for (double p : grid_powers()) rows.push_back(run_point(p, threads));
  return rows;
}

std::vector<report::ResultRow> Experiment::run_power_split(int threads) const {
  const auto& im = *impl_;
  if (im.scheme != Scheme::superposition_2ldpc)
    throw std::invalid_argument("power-split sweep requires scheme = superposition_2ldpc");
  const auto k1s = im.cfg.get_int_list("k1_list");
  const auto alphas = im.cfg.get_grid("alpha_grid");
  const double power = channel::power_from_snr(im.cfg.get_real("split_snr"),
                                               im.unit, im.n, im.k);

  std::vector<report::ResultRow> rows;
  for (long k1 : k1s) {
    if (k1 < 0 || k1 > im.k) throw std::invalid_argument("k1_list entry outside [0, k]");
    LdpcLeg c1, c2;
    if (k1 == im.k1) {
      c1 = im.code1;
      c2 = im.code2;
    } else {
      c1 = build_code(im.cfg, "code1_", im.n, static_cast<int>(k1),
                      rng::derive(im.master_seed, 0xc1ull));
      c2 = build_code(im.cfg, "code2_", im.n, im.k - static_cast<int>(k1),
                      rng::derive(im.master_seed, 0xc2ull));
    }
    for (double a : alphas) {
      if (a < 0.0 || a > 1.0) throw std::invalid_argument("alpha_grid entry outside [0,1]");
      const auto sic = im.sic_config(c1, c2, power, a, im.pi1, im.pi2);
      std::uint64_t pk = rng::derive(im.master_seed, real_bits(power));
      pk = rng::derive(pk, static_cast<std::uint64_t>(k1));
      pk = rng::derive(pk, real_bits(a));
      auto trial = [&](long t) { return im.run_trial(power, pk, t, &sic, im.k); };
      char tag[64];
      std::snprintf(tag, sizeof tag, "p%016llx_k%ld_a%016llx",
                    static_cast<unsigned long long>(real_bits(power)), k1,
                    static_cast<unsigned long long>(real_bits(a)));
      auto row = im.run_counts(trial, im.k, pk, tag, threads);
      row.power = power;
      row.esn0_db = channel::snr_convert(power, im.n, im.k, channel::SnrUnit::EsN0_dB);
      row.ebn0_db = channel::snr_convert(power, im.n, im.k, channel::SnrUnit::EbN0_dB);
      row.extras["k1"] = static_cast<double>(k1);
      row.extras["alpha"] = a;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

report::Report Experiment::make_report(std::vector<report::ResultRow> rows) const {
  report::Report r;
  r.cfg = impl_->cfg;
  r.rows = std::move(rows);
  return r;
}

Scheme Experiment::scheme() const { return impl_->scheme; }
int Experiment::n() const { return impl_->n; }
int Experiment::k() const { return impl_->k; }
const config::KeyValues& Experiment::cfg() const { return impl_->cfg; }

}  // namespace erc::harness
