#include "erc/sparc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "erc/rng.hpp"

namespace erc::sparc {

namespace {

int log2_exact(int m) {
  if (m < 2 || (m & (m - 1)) != 0)
    throw std::invalid_argument("sparc: section size must be a power of two >= 2");
  return std::countr_zero(static_cast<unsigned>(m));
}

}  // namespace

SparcParams SparcParams::uniform(int m, int num_sections, int n, double power,
                                 std::uint64_t design_seed) {
  SparcParams p;
  p.n = n;
  p.power = power;
  p.design_seed = design_seed;
  p.section_sizes.assign(num_sections, m);
  p.power_alloc.assign(num_sections, power / num_sections);
  p.validate();
  return p;
}

SparcParams SparcParams::for_message_bits(int k, int m, int n, double power,
                                          std::uint64_t design_seed) {
  const int bits_per = log2_exact(m);
  const int full = k / bits_per;
  const int rem = k % bits_per;
  SparcParams p;
  p.n = n;
  p.power = power;
  p.design_seed = design_seed;
  p.section_sizes.assign(full, m);
  if (rem > 0) p.section_sizes.push_back(1 << rem);
  const int l = static_cast<int>(p.section_sizes.size());
  p.power_alloc.assign(l, power / l);
  p.validate();
  return p;
}

int SparcParams::total_columns() const {
  int t = 0;
  for (int m : section_sizes) t += m;
  return t;
}

int SparcParams::message_bits() const {
  int k = 0;
  for (int m : section_sizes) k += log2_exact(m);
  return k;
}

std::vector<int> SparcParams::section_offsets() const {
  std::vector<int> off(section_sizes.size() + 1, 0);
  for (std::size_t l = 0; l < section_sizes.size(); ++l)
    off[l + 1] = off[l] + section_sizes[l];
  return off;
}

double SparcParams::amplitude(int section) const {
  return std::sqrt(n * power_alloc[section]);
}

void SparcParams::validate() const {
  if (n <= 0) throw std::invalid_argument("sparc: n must be positive");
  if (power < 0) throw std::invalid_argument("sparc: negative power");
  if (section_sizes.empty()) throw std::invalid_argument("sparc: no sections");
  if (section_sizes.size() != power_alloc.size())
    throw std::invalid_argument("sparc: allocation length mismatch");
  double sum = 0.0;
  for (std::size_t l = 0; l < section_sizes.size(); ++l) {
    log2_exact(section_sizes[l]);
    if (power_alloc[l] < 0) throw std::invalid_argument("sparc: negative section power");
    sum += power_alloc[l];
  }
  if (std::abs(sum - power) > 1e-9 * std::max(1.0, power))
    throw std::invalid_argument("sparc: power allocation does not sum to P");
}

DesignMatrix::DesignMatrix(int n, int cols, std::uint64_t seed, Storage mode,
                           std::size_t budget_bytes)
    : n_(n), cols_(cols), seed_(seed) {
  if (n <= 0 || cols <= 0) throw std::invalid_argument("design matrix: bad shape");
  const std::size_t bytes = sizeof(float) * static_cast<std::size_t>(n) * cols;
  const bool cache = mode == Storage::materialized ||
                     (mode == Storage::automatic && bytes <= budget_bytes);
  if (cache) {
    cache_.resize(static_cast<std::size_t>(n) * cols);
    for (int j = 0; j < cols_; ++j) gen_column_f32(j, &cache_[static_cast<std::size_t>(j) * n_]);
  }
}

void DesignMatrix::gen_column_f32(int j, float* out) const {
  const std::uint64_t key = rng::derive(seed_, static_cast<std::uint64_t>(j));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  for (int i = 0; i < n_; ++i)
    out[i] = static_cast<float>(scale * rng::gaussian_at(key, static_cast<std::uint64_t>(i)));
}

std::vector<double> DesignMatrix::column(int j) const {
  if (j < 0 || j >= cols_) throw std::out_of_range("design matrix: column index");
  const std::uint64_t key = rng::derive(seed_, static_cast<std::uint64_t>(j));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  std::vector<double> col(n_);
  for (int i = 0; i < n_; ++i) col[i] = scale * rng::gaussian_at(key, static_cast<std::uint64_t>(i));
  return col;
}

const float* DesignMatrix::column_ptr(int j, float* scratch) const {
  if (!cache_.empty()) return &cache_[static_cast<std::size_t>(j) * n_];
  gen_column_f32(j, scratch);
  return scratch;
}

namespace {

// Fixed-lane f32 dot product.  The 8 partial sums make the reduction order
// explicit, so the loop vectorizes under strict FP semantics and the result
// is identical however the columns are stored.
float dot_f32(const float* a, const float* b, int n) {
  float acc[8] = {};
  int i = 0;
  for (; i + 8 <= n; i += 8)
    for (int k = 0; k < 8; ++k) acc[k] += a[i + k] * b[i + k];
  for (; i < n; ++i) acc[i & 7] += a[i] * b[i];
  const float s0 = (acc[0] + acc[4]) + (acc[2] + acc[6]);
  const float s1 = (acc[1] + acc[5]) + (acc[3] + acc[7]);
  return s0 + s1;
}

}  // namespace

void DesignMatrix::multiply(std::span<const double> b, std::span<double> out) const {
  if (static_cast<int>(b.size()) != cols_ || static_cast<int>(out.size()) != n_)
    throw std::invalid_argument("design matrix multiply: bad shapes");
  std::vector<float> scratch(cache_.empty() ? n_ : 0);
  std::vector<float> accf(n_, 0.0f);
  for (int j = 0; j < cols_; ++j) {
    const double bj = b[j];
    if (bj == 0.0) continue;
    const float* col = column_ptr(j, scratch.data());
    const float bf = static_cast<float>(bj);
    float* a = accf.data();
    for (int i = 0; i < n_; ++i) a[i] += bf * col[i];
  }
  for (int i = 0; i < n_; ++i) out[i] = static_cast<double>(accf[i]);
}

void DesignMatrix::multiply_transpose(std::span<const double> z,
                                      std::span<double> out) const {
  if (static_cast<int>(z.size()) != n_ || static_cast<int>(out.size()) != cols_)
    throw std::invalid_argument("design matrix multiply_transpose: bad shapes");
  std::vector<float> scratch(cache_.empty() ? n_ : 0);
  std::vector<float> zf(n_);
  for (int i = 0; i < n_; ++i) zf[i] = static_cast<float>(z[i]);
  for (int j = 0; j < cols_; ++j) {
    const float* col = column_ptr(j, scratch.data());
    out[j] = static_cast<double>(dot_f32(col, zf.data(), n_));
  }
}

double DesignMatrix::dot_column(int j, std::span<const double> v) const {
  if (j < 0 || j >= cols_) throw std::out_of_range("design matrix: column index");
  if (static_cast<int>(v.size()) != n_) throw std::invalid_argument("dot_column: bad length");
  std::vector<float> scratch(cache_.empty() ? n_ : 0);
  std::vector<float> vf(n_);
  for (int i = 0; i < n_; ++i) vf[i] = static_cast<float>(v[i]);
  const float* col = column_ptr(j, scratch.data());
  return static_cast<double>(dot_f32(col, vf.data(), n_));
}

void DesignMatrix::add_column(int j, double coef, std::span<double> acc) const {
  if (j < 0 || j >= cols_) throw std::out_of_range("design matrix: column index");
  if (static_cast<int>(acc.size()) != n_) throw std::invalid_argument("add_column: bad length");
  std::vector<float> scratch(cache_.empty() ? n_ : 0);
  const float* col = column_ptr(j, scratch.data());
  for (int i = 0; i < n_; ++i) acc[i] += coef * static_cast<double>(col[i]);
}

std::vector<double> SectionVector::dense(const SparcParams& p) const {
  if (indices.size() != p.section_sizes.size())
    throw std::invalid_argument("section vector: wrong section count");
  const auto off = p.section_offsets();
  std::vector<double> beta(p.total_columns(), 0.0);
  for (std::size_t l = 0; l < indices.size(); ++l) {
    if (indices[l] < 0 || indices[l] >= p.section_sizes[l])
      throw std::out_of_range("section vector: index outside section");
    beta[off[l] + indices[l]] = p.amplitude(static_cast<int>(l));
  }
  return beta;
}

SectionVector map_bits_to_sections(std::span<const std::uint8_t> bits,
                                   const SparcParams& p) {
  if (static_cast<int>(bits.size()) != p.message_bits())
    throw std::invalid_argument("sparc: bit count != L log2 M");
  SectionVector s;
  s.indices.reserve(p.section_sizes.size());
  std::size_t pos = 0;
  for (int m : p.section_sizes) {
    const int b = std::countr_zero(static_cast<unsigned>(m));
    int idx = 0;
    for (int i = 0; i < b; ++i) idx = (idx << 1) | bits[pos++];
    s.indices.push_back(idx);
  }
  return s;
}

std::vector<std::uint8_t> map_sections_to_bits(const SectionVector& s,
                                               const SparcParams& p) {
  if (s.indices.size() != p.section_sizes.size())
    throw std::invalid_argument("sparc: wrong section count");
  std::vector<std::uint8_t> bits;
  bits.reserve(p.message_bits());
  for (std::size_t l = 0; l < s.indices.size(); ++l) {
    const int b = std::countr_zero(static_cast<unsigned>(p.section_sizes[l]));
    for (int i = b - 1; i >= 0; --i)
      bits.push_back(static_cast<std::uint8_t>((s.indices[l] >> i) & 1));
  }
  return bits;
}

std::vector<double> sparc_encode(std::span<const std::uint8_t> bits,
                                 const SparcParams& p, const DesignMatrix& a) {
  if (a.rows() != p.n || a.cols() != p.total_columns())
    throw std::invalid_argument("sparc_encode: matrix shape mismatch");
  const SectionVector s = map_bits_to_sections(bits, p);
  const auto off = p.section_offsets();
  std::vector<double> c(p.n, 0.0);
  for (std::size_t l = 0; l < s.indices.size(); ++l)
    a.add_column(off[l] + s.indices[l], p.amplitude(static_cast<int>(l)), c);
  return c;
}

void denoise(std::span<const double> s, double tau_sq, const SparcParams& p,
             std::span<double> out) {
  if (s.size() != out.size() || static_cast<int>(s.size()) != p.total_columns())
    throw std::invalid_argument("denoise: bad lengths");
  if (!(tau_sq > 0.0)) throw std::invalid_argument("denoise: tau_sq must be positive");
  const auto off = p.section_offsets();
  for (int l = 0; l < p.num_sections(); ++l) {
    const int lo = off[l], hi = off[l + 1];
    const double amp = p.amplitude(l);
    const double coef = amp / tau_sq;
    double mx = -INFINITY;
    for (int j = lo; j < hi; ++j) mx = std::max(mx, s[j]);
    double sum = 0.0;
    for (int j = lo; j < hi; ++j) {
      out[j] = std::exp(coef * (s[j] - mx));
      sum += out[j];
    }
    const double norm = amp / sum;
    for (int j = lo; j < hi; ++j) out[j] *= norm;
  }
}

AmpResult amp_decode(std::span<const double> y, const SparcParams& p,
                     const DesignMatrix& a, int max_iters, bool early_stop) {
  if (static_cast<int>(y.size()) != p.n)
    throw std::invalid_argument("amp_decode: y length != n");
  if (a.rows() != p.n || a.cols() != p.total_columns())
    throw std::invalid_argument("amp_decode: matrix shape mismatch");
  if (max_iters <= 0) throw std::invalid_argument("amp_decode: max_iters must be positive");

  const int n = p.n;
  const int cols = p.total_columns();
  AmpResult res;
  res.beta.assign(cols, 0.0);
  std::vector<double> z(n), ab(n), stat(cols);
  std::vector<int> prev_arg, cur_arg;
  int stable = 0;
  double tau_prev = 0.0;

  for (int t = 0; t < max_iters; ++t) {
    if (t == 0) {
      std::copy(y.begin(), y.end(), z.begin());
    } else {
      a.multiply(res.beta, ab);
      double bnorm = 0.0;
      for (double b : res.beta) bnorm += b * b;
      const double onsager = (p.power - bnorm / n) / tau_prev;
      for (int i = 0; i < n; ++i) z[i] = y[i] - ab[i] + onsager * z[i];
    }
    double tau_sq = 0.0;
    for (int i = 0; i < n; ++i) tau_sq += z[i] * z[i];
    tau_sq /= n;
    tau_sq = std::max(tau_sq, 1e-30);  // keeps the denoiser defined when noiseless
    res.tau_sq_history.push_back(tau_sq);

    a.multiply_transpose(z, stat);
    for (int j = 0; j < cols; ++j) stat[j] += res.beta[j];
    denoise(stat, tau_sq, p, res.beta);

    res.iterations = t + 1;
    tau_prev = tau_sq;

    if (early_stop) {
      cur_arg = argmax_sections(res.beta, p).indices;
      if (!prev_arg.empty() && cur_arg == prev_arg) {
        if (++stable >= 2) {  // three consecutive identical decisions
          res.early_stopped = true;
          break;
        }
      } else {
        stable = 0;
      }
      prev_arg = cur_arg;
    }
  }
  return res;
}

SectionVector argmax_sections(std::span<const double> beta, const SparcParams& p) {
  if (static_cast<int>(beta.size()) != p.total_columns())
    throw std::invalid_argument("argmax_sections: bad length");
  const auto off = p.section_offsets();
  SectionVector s;
  s.indices.reserve(p.num_sections());
  for (int l = 0; l < p.num_sections(); ++l) {
    int best = off[l];
    for (int j = off[l] + 1; j < off[l + 1]; ++j)
      if (beta[j] > beta[best]) best = j;
    s.indices.push_back(best - off[l]);
  }
  return s;
}

std::vector<std::uint8_t> sparc_hard_decision(const AmpResult& r, const SparcParams& p) {
  return map_sections_to_bits(argmax_sections(r.beta, p), p);
}

SectionVector ml_oracle_decode(std::span<const double> y, const SparcParams& p,
                               const DesignMatrix& a) {
  if (static_cast<int>(y.size()) != p.n)
    throw std::invalid_argument("ml_oracle_decode: y length != n");
  double log_states = 0.0;
  for (int m : p.section_sizes) log_states += std::log2(static_cast<double>(m));
  if (log_states > 20.0)
    throw std::invalid_argument("ml_oracle_decode: search space exceeds 2^20");

  const int l_total = p.num_sections();
  const int n = p.n;
  const auto off = p.section_offsets();

  // Scaled columns, densely packed; the instance is tiny by the guard above.
  std::vector<std::vector<double>> cols(p.total_columns());
  for (int l = 0; l < l_total; ++l) {
    const double amp = p.amplitude(l);
    for (int j = off[l]; j < off[l + 1]; ++j) {
      cols[j] = a.column(j);
      for (double& x : cols[j]) x *= amp;
    }
  }

  SectionVector best;
  best.indices.assign(l_total, 0);
  double best_obj = INFINITY;
  std::vector<int> cur(l_total, 0);
  // partial[l] = y - sum of chosen scaled columns for sections < l
  std::vector<std::vector<double>> partial(l_total + 1, std::vector<double>(n));
  std::copy(y.begin(), y.end(), partial[0].begin());

  // Depth-first over sections with incremental residuals.
  int l = 0;
  while (l >= 0) {
    if (cur[l] == p.section_sizes[l]) {
      cur[l] = 0;
      --l;
      if (l >= 0) ++cur[l];
      continue;
    }
    const auto& col = cols[off[l] + cur[l]];
    if (l + 1 == l_total) {
      double obj = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = partial[l][i] - col[i];
        obj += d * d;
      }
      if (obj < best_obj) {
        best_obj = obj;
        best.indices.assign(cur.begin(), cur.end());
      }
      ++cur[l];
    } else {
      for (int i = 0; i < n; ++i) partial[l + 1][i] = partial[l][i] - col[i];
      ++l;
    }
  }
  return best;
}

double residual_norm_sq(std::span<const double> y, const SparcParams& p,
                        const DesignMatrix& a, const SectionVector& s) {
  std::vector<double> r(y.begin(), y.end());
  const auto off = p.section_offsets();
  for (std::size_t l = 0; l < s.indices.size(); ++l)
    a.add_column(off[l] + s.indices[l], -p.amplitude(static_cast<int>(l)), r);
  double obj = 0.0;
  for (double x : r) obj += x * x;
  return obj;
}

}  // namespace erc::sparc
