#include "erc/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "erc/rng.hpp"

namespace erc::threshold {

namespace {

std::vector<double> basis(double x, int degree) {
  std::vector<double> row(degree + 1);
  row[0] = 1.0;
  for (int d = 1; d <= degree; ++d) row[d] = row[d - 1] * x;
  return row;
}

// Dense symmetric solve via Cholesky with a small ridge for safety.
std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int i = 0; i < n; ++i) a[i * n + i] += 1e-12;
  for (int c = 0; c < n; ++c) {
    double d = a[c * n + c];
    for (int k = 0; k < c; ++k) d -= a[c * n + k] * a[c * n + k];
    if (d <= 0.0) throw std::runtime_error("fit: normal equations not positive definite");
    const double l = std::sqrt(d);
    a[c * n + c] = l;
    for (int r = c + 1; r < n; ++r) {
      double s = a[r * n + c];
      for (int k = 0; k < c; ++k) s -= a[r * n + k] * a[c * n + k];
      a[r * n + c] = s / l;
    }
  }
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
    b[i] = s / a[i * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= a[k * n + i] * b[k];
    b[i] = s / a[i * n + i];
  }
  return b;
}

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

}  // namespace

double Fit::predict_logit(double snr_db) const {
  const double x = (snr_db - x_center) / x_scale;
  double acc = 0.0, pw = 1.0;
  for (double b : beta) {
    acc += b * pw;
    pw *= x;
  }
  return acc;
}

double Fit::predict_ber(double snr_db) const { return sigmoid(predict_logit(snr_db)); }

Fit fit_curve(std::span<const CurvePoint> points, int degree) {
  if (degree < 1) throw std::invalid_argument("fit_curve: degree >= 1");
  if (static_cast<int>(points.size()) < degree + 1)
    throw std::invalid_argument("fit_curve: need at least degree+1 points");
  for (const auto& p : points)
    if (p.total <= 0 || p.errors < 0 || p.errors > p.total)
      throw std::invalid_argument("fit_curve: bad counts");

  Fit fit;
  fit.degree = degree;
  double lo = points[0].snr_db, hi = points[0].snr_db;
  for (const auto& p : points) {
    lo = std::min(lo, p.snr_db);
    hi = std::max(hi, p.snr_db);
  }
  fit.x_center = 0.5 * (lo + hi);
  fit.x_scale = hi > lo ? 0.5 * (hi - lo) : 1.0;

  const int np = degree + 1;
  fit.beta.assign(np, 0.0);
  // Initialize the intercept at the pooled empirical logit.
  double te = 0, tt = 0;
  for (const auto& p : points) {
    te += p.errors;
    tt += p.total;
  }
  const double p0 = std::clamp(te / tt, 1e-12, 1.0 - 1e-12);
  fit.beta[0] = std::log(p0 / (1.0 - p0));

  auto deviance_of = [&](const std::vector<double>& beta) {
    double dev = 0.0;
    for (const auto& pt : points) {
      const double x = (pt.snr_db - fit.x_center) / fit.x_scale;
      const auto row = basis(x, degree);
      double eta = 0.0;
      for (int d = 0; d < np; ++d) eta += beta[d] * row[d];
      const double mu = std::clamp(sigmoid(eta), 1e-14, 1.0 - 1e-14);
      const double e = pt.errors, t = pt.total;
      if (e > 0) dev += 2.0 * e * std::log(e / (t * mu));
      if (e < t) dev += 2.0 * (t - e) * std::log((t - e) / (t * (1.0 - mu)));
    }
    return dev;
  };

  double dev = deviance_of(fit.beta);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<double> xtwx(np * np, 0.0), xtz(np, 0.0);
    for (const auto& pt : points) {
      const double x = (pt.snr_db - fit.x_center) / fit.x_scale;
      const auto row = basis(x, degree);
      double eta = 0.0;
      for (int d = 0; d < np; ++d) eta += fit.beta[d] * row[d];
      const double mu = std::clamp(sigmoid(eta), 1e-14, 1.0 - 1e-14);
      const double w = pt.total * mu * (1.0 - mu);
      const double z = eta + (static_cast<double>(pt.errors) - pt.total * mu) /
                                 std::max(w, 1e-30);
      for (int a = 0; a < np; ++a) {
        xtz[a] += w * row[a] * z;
        for (int b = 0; b < np; ++b) xtwx[a * np + b] += w * row[a] * row[b];
      }
    }
    const auto next = solve_spd(xtwx, xtz);

    // Damped update: a full Newton step can overshoot into saturation and
    // blow the working response up, so halve until the deviance improves.
    std::vector<double> cand(np);
    double cand_dev = dev, step = 1.0;
    bool improved = false;
    for (int h = 0; h < 40; ++h) {
      for (int d = 0; d < np; ++d)
        cand[d] = fit.beta[d] + step * (next[d] - fit.beta[d]);
      cand_dev = deviance_of(cand);
      if (cand_dev <= dev + 1e-12) {
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;  // stalled; report the fit as-is, unconverged

    double delta = 0.0;
    for (int d = 0; d < np; ++d) delta = std::max(delta, std::abs(cand[d] - fit.beta[d]));
    fit.beta = std::move(cand);
    dev = cand_dev;
    fit.irls_iters = iter + 1;
    if (delta < 1e-8) {
      fit.converged = true;
      break;
    }
  }

  fit.deviance = dev;
  return fit;
}

Threshold fit_threshold(std::span<const CurvePoint> points, double target,
                        int degree, double margin_db) {
  if (!(target > 0.0 && target < 1.0))
    throw std::invalid_argument("fit_threshold: target in (0,1)");
  Threshold th;
  th.fit = fit_curve(points, degree);
  if (!th.fit.converged) {
    // An unconverged fit predicts nothing; report no crossing rather than
    // scan a garbage curve.
    th.monotone = false;
    return th;
  }

  double lo = points[0].snr_db, hi = points[0].snr_db;
  for (const auto& p : points) {
    lo = std::min(lo, p.snr_db);
    hi = std::max(hi, p.snr_db);
  }
  const double a = lo - margin_db, b = hi + margin_db;
  const double target_logit = std::log(target / (1.0 - target));

  // Scan for the first downward crossing of the target.
  const int steps = 4096;
  double prev_x = a, prev_g = th.fit.predict_logit(a) - target_logit;
  double cross_lo = 0, cross_hi = 0;
  bool found = prev_g <= 0.0;
  if (found) {
    // already below target at the left edge
    th.found = true;
    th.snr_db = a;
    th.extrapolated = a < lo;
  }
  for (int i = 1; i <= steps && !found; ++i) {
    const double x = a + (b - a) * i / steps;
    const double g = th.fit.predict_logit(x) - target_logit;
    if (prev_g > 0.0 && g <= 0.0) {
      found = true;
      cross_lo = prev_x;
      cross_hi = x;
    }
    prev_x = x;
    prev_g = g;
  }
  if (found && cross_hi > cross_lo) {
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (cross_lo + cross_hi);
      if (th.fit.predict_logit(mid) - target_logit > 0.0)
        cross_lo = mid;
      else
        cross_hi = mid;
    }
    th.found = true;
    th.snr_db = 0.5 * (cross_lo + cross_hi);
    th.extrapolated = th.snr_db < lo || th.snr_db > hi;
  }

  // Monotonicity of the fit across the measured span.
  th.monotone = true;
  double last = th.fit.predict_logit(lo);
  for (int i = 1; i <= 256; ++i) {
    const double x = lo + (hi - lo) * i / 256.0;
    const double g = th.fit.predict_logit(x);
    if (g > last + 1e-9) th.monotone = false;
    last = g;
  }
  return th;
}

std::vector<double> bootstrap_thresholds(std::span<const CurvePoint> points,
                                         double target, int degree,
                                         int replicates, std::uint64_t seed,
                                         double margin_db) {
  const Fit base = fit_curve(points, degree);
  std::vector<double> out;
  out.reserve(replicates);
  rng::Stream s(rng::derive(seed, 0x626f6f74ull));  // "boot"
  std::vector<CurvePoint> rep(points.begin(), points.end());
  for (int r = 0; r < replicates; ++r) {
    for (std::size_t i = 0; i < rep.size(); ++i) {
      const double mu = std::clamp(base.predict_ber(points[i].snr_db), 0.0, 1.0);
      // Normal approximation to Binomial(total, mu); totals here are >= 10^4.
      const double mean = points[i].total * mu;
      const double sd = std::sqrt(std::max(points[i].total * mu * (1.0 - mu), 0.0));
      double draw = mean + sd * s.next_gaussian();
      draw = std::clamp(draw, 0.0, static_cast<double>(points[i].total));
      rep[i].errors = static_cast<long>(std::llround(draw));
    }
    try {
      const Threshold th = fit_threshold(rep, target, degree, margin_db);
      if (th.found) out.push_back(th.snr_db);
    } catch (const std::exception&) {
      // degenerate replicate; skip
    }
  }
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty");
  std::sort(values.begin(), values.end());
  const double pos = q * (values.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= values.size()) return values.back();
  const double frac = pos - i;
  return values[i] * (1.0 - frac) + values[i + 1] * frac;
}

}  // namespace erc::threshold
