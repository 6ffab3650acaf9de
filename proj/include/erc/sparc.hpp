#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace erc::sparc {

struct SparcParams {
  int n = 0;                         // channel uses
  double power = 0.0;                // total power P
  std::vector<int> section_sizes;    // M_l per section (powers of two)
  std::vector<double> power_alloc;   // P_l per section, sums to P
  std::uint64_t design_seed = 0;

  // Uniform allocation P_l = P/L with equal section sizes M.
  static SparcParams uniform(int m, int num_sections, int n, double power,
                             std::uint64_t design_seed);
  // Sections sized to carry exactly k bits: floor(k/log2(m)) sections of m
  // columns plus one remainder section of 2^(k mod log2 m) when needed.
  static SparcParams for_message_bits(int k, int m, int n, double power,
                                      std::uint64_t design_seed);

  int num_sections() const { return static_cast<int>(section_sizes.size()); }
  int total_columns() const;
  int message_bits() const;
  std::vector<int> section_offsets() const;  // prefix sums, size L+1
  double amplitude(int section) const;       // sqrt(n * P_l)
  void validate() const;
};

enum class Storage { automatic, materialized, on_demand };

// Virtual i.i.d. N(0, 1/n) matrix defined by (seed, n, cols): entry (i, j) is
// a pure function of those three values.  Canonical entries are double; the
// matrix kernels run in float32 with a fixed lane order on a float32 image of
// them (cached column-major when the budget allows, regenerated per column
// otherwise), bit-identical either way.
class DesignMatrix {
 public:
  DesignMatrix(int n, int cols, std::uint64_t seed,
               Storage mode = Storage::automatic,
               std::size_t budget_bytes = 2ull << 30);

  int rows() const { return n_; }
  int cols() const { return cols_; }
  bool materialized() const { return !cache_.empty(); }

  // Canonical double-precision column, independent of storage mode.
  std::vector<double> column(int j) const;

  void multiply(std::span<const double> b, std::span<double> out) const;            // A b
  void multiply_transpose(std::span<const double> z, std::span<double> out) const;  // A' z
  double dot_column(int j, std::span<const double> v) const;
  void add_column(int j, double coef, std::span<double> acc) const;

 private:
  void gen_column_f32(int j, float* out) const;
  const float* column_ptr(int j, float* scratch) const;

  int n_;
  int cols_;
  std::uint64_t seed_;
  std::vector<float> cache_;  // column-major, empty in on-demand mode
};

// One active column per section.
struct SectionVector {
  std::vector<int> indices;  // chosen column within each section, in [0, M_l)

  std::vector<double> dense(const SparcParams& p) const;  // length L*M beta
};

SectionVector map_bits_to_sections(std::span<const std::uint8_t> bits,
                                   const SparcParams& p);
std::vector<std::uint8_t> map_sections_to_bits(const SectionVector& s,
                                               const SparcParams& p);

// Codeword c = A * beta(bits).  Expected per-sample power is P.
std::vector<double> sparc_encode(std::span<const std::uint8_t> bits,
                                 const SparcParams& p, const DesignMatrix& a);

// Eq-style softmax denoiser: per section l,
//   eta_i = sqrt(n P_l) * exp(s_i sqrt(n P_l) / tau_sq) / sum_j exp(...),
// evaluated with max subtraction.  Sections sum to sqrt(n P_l) exactly.
void denoise(std::span<const double> s, double tau_sq, const SparcParams& p,
             std::span<double> out);

struct AmpResult {
  std::vector<double> beta;        // final estimate, length sum of M_l
  std::vector<double> tau_sq_history;
  int iterations = 0;
  bool early_stopped = false;
};

// Residual-based AMP with the Onsager correction; stops after max_iters or,
// when early_stop is set, once the per-section argmax is unchanged for three
// consecutive iterations.
AmpResult amp_decode(std::span<const double> y, const SparcParams& p,
                     const DesignMatrix& a, int max_iters, bool early_stop);

SectionVector argmax_sections(std::span<const double> beta, const SparcParams& p);
std::vector<std::uint8_t> sparc_hard_decision(const AmpResult& r, const SparcParams& p);

// Exhaustive minimization of ||y - A beta||^2 over all section choices.
// Guarded to product(M_l) <= 2^20.
SectionVector ml_oracle_decode(std::span<const double> y, const SparcParams& p,
                               const DesignMatrix& a);

double residual_norm_sq(std::span<const double> y, const SparcParams& p,
                        const DesignMatrix& a, const SectionVector& s);

}  // namespace erc::sparc
