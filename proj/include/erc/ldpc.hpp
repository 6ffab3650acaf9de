#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace erc::ldpc {

// Sparse parity-check matrix in adjacency form.  Column/row neighbour lists
// are kept sorted; parallel edges are never stored (lifting forbids them).
struct ParityCheckMatrix {
  int n_cols = 0;
  int n_rows = 0;
  std::vector<std::vector<int>> col_rows;  // checks touching each variable
  std::vector<std::vector<int>> row_cols;  // variables touching each check

  int num_edges() const;
  std::vector<int> col_degrees() const;
  std::vector<int> row_degrees() const;
  bool has_four_cycle() const;

  std::string to_alist() const;
  static ParityCheckMatrix from_alist(const std::string& text);
};

// Progressive edge growth for a regular column weight.  n_v variables,
// n_v - k_v checks; each new edge goes to the check farthest from its
// variable (ties broken by degree, then seeded draw), so 4-cycles appear only
// when the degree budget forces them.  Never places a parallel edge.
ParityCheckMatrix build_regular_ldpc(int n_v, int k_v, int col_weight,
                                     std::uint64_t seed);

// Base matrix of edge multiplicities for circulant lifting.
struct Protograph {
  int n_rows = 0;
  int n_cols = 0;
  int lift_factor = 0;
  std::vector<std::vector<int>> counts;  // n_rows x n_cols multiplicities

  std::vector<int> base_col_degrees() const;
  std::vector<int> base_row_degrees() const;

  // Text format: first line "m_b n_b f", then m_b rows of n_b multiplicities.
  std::string to_text() const;
  static Protograph from_text(const std::string& text);
};

// Lift with f x f circulant shifts chosen by seeded search so that no lifted
// 4-cycle appears through any base 4-cycle or parallel-edge pair, when
// feasible; remaining 4-cycles are counted in the returned matrix's girth
// helpers.  Throws if multiplicities exceed the lift factor.
ParityCheckMatrix lift_protograph(const Protograph& proto, std::uint64_t seed);

// Systematic encoder derived from the row-reduced form of H.  Pivot columns
// become parity positions; the remaining columns carry the message in order.
class Encoder {
 public:
  explicit Encoder(const ParityCheckMatrix& h);

  int block_length() const { return n_; }
  int dimension() const { return static_cast<int>(info_cols_.size()); }
  int rank() const { return rank_; }
  const std::vector<int>& info_positions() const { return info_cols_; }

  std::vector<std::uint8_t> encode(std::span<const std::uint8_t> info) const;
  std::vector<std::uint8_t> extract_info(std::span<const std::uint8_t> codeword) const;

 private:
  int n_ = 0;
  int rank_ = 0;
  std::vector<int> info_cols_;
  std::vector<int> pivot_cols_;
  // parity_masks_[p] selects the info bits XORed into pivot bit p.
  std::size_t mask_words_ = 0;
  std::vector<std::uint64_t> parity_masks_;
};

struct DecodeResult {
  std::vector<double> llrs;  // posterior LLRs, one per variable
  bool converged = false;    // zero syndrome reached
  int iterations = 0;        // iterations actually run
};

// Flooding sum-product with the exact tanh rule.  Inputs are clamped to
// +-kLlrMax before use and check-to-variable messages are clamped after the
// atanh.  Stops early on a zero syndrome of the posterior hard decision.
DecodeResult sum_product_decode(std::span<const double> llr_in,
                                const ParityCheckMatrix& h, int max_iters);

bool syndrome_ok(const ParityCheckMatrix& h, std::span<const std::uint8_t> bits);

}  // namespace erc::ldpc
