#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace erc::threshold {

struct CurvePoint {
  double snr_db = 0.0;   // 10 log10(P)
  long errors = 0;       // bit errors observed
  long total = 0;        // bits observed
};

// Polynomial logistic model logit(p) = sum_d beta_d x^d on the centred and
// scaled SNR axis, fitted by IRLS on the raw counts (proper Bernoulli
// likelihood, not least squares on log BER).
struct Fit {
  int degree = 3;
  double x_center = 0.0;
  double x_scale = 1.0;
  std::vector<double> beta;
  double deviance = 0.0;
  int irls_iters = 0;
  bool converged = false;

  double predict_logit(double snr_db) const;
  double predict_ber(double snr_db) const;
};

Fit fit_curve(std::span<const CurvePoint> points, int degree);

struct Threshold {
  bool found = false;          // a downward crossing of the target exists
  double snr_db = 0.0;         // fitted SNR* where predicted BER = target
  bool extrapolated = false;   // crossing sits outside the measured grid
  bool monotone = true;        // fitted curve decreases across the grid span
  Fit fit;
};

// Smallest SNR in [grid min - margin, grid max + margin] where the fitted
// curve falls to `target`; searched on the fit, located by bisection.
Threshold fit_threshold(std::span<const CurvePoint> points, double target,
                        int degree = 3, double margin_db = 0.25);

// Parametric bootstrap: resample counts from the fitted curve, refit, return
// the threshold of each replicate (dropping replicates with no crossing).
std::vector<double> bootstrap_thresholds(std::span<const CurvePoint> points,
                                         double target, int degree,
                                         int replicates, std::uint64_t seed,
                                         double margin_db = 0.25);

double quantile(std::vector<double> values, double q);

}  // namespace erc::threshold
