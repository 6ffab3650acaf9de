#include "erc/ldpc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "erc/channel.hpp"
#include "erc/rng.hpp"

namespace erc::ldpc {

int ParityCheckMatrix::num_edges() const {
  int e = 0;
  for (const auto& c : col_rows) e += static_cast<int>(c.size());
  return e;
}

std::vector<int> ParityCheckMatrix::col_degrees() const {
  std::vector<int> d(n_cols);
  for (int v = 0; v < n_cols; ++v) d[v] = static_cast<int>(col_rows[v].size());
  return d;
}

std::vector<int> ParityCheckMatrix::row_degrees() const {
  std::vector<int> d(n_rows);
  for (int r = 0; r < n_rows; ++r) d[r] = static_cast<int>(row_cols[r].size());
  return d;
}

bool ParityCheckMatrix::has_four_cycle() const {
  // Two variables sharing two checks <=> some check pair repeats.
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(static_cast<std::size_t>(num_edges()) * 2);
  for (const auto& rows : col_rows) {
    for (std::size_t a = 0; a + 1 < rows.size(); ++a)
      for (std::size_t b = a + 1; b < rows.size(); ++b) {
        const std::uint64_t key =
            (static_cast<std::uint64_t>(rows[a]) << 32) | static_cast<std::uint32_t>(rows[b]);
        if (!seen.insert(key).second) return true;
      }
  }
  return false;
}

namespace {

ParityCheckMatrix from_adjacency(int n_rows, int n_cols,
                                 std::vector<std::vector<int>> col_rows) {
  ParityCheckMatrix h;
  h.n_rows = n_rows;
  h.n_cols = n_cols;
  h.col_rows = std::move(col_rows);
  h.row_cols.assign(n_rows, {});
  for (int v = 0; v < n_cols; ++v) {
    auto& rows = h.col_rows[v];
    std::sort(rows.begin(), rows.end());
    if (std::adjacent_find(rows.begin(), rows.end()) != rows.end())
      throw std::logic_error("parity matrix: duplicate edge");
    for (int r : rows) h.row_cols[r].push_back(v);
  }
  return h;
}

}  // namespace

std::string ParityCheckMatrix::to_alist() const {
  std::ostringstream os;
  const auto cd = col_degrees();
  const auto rd = row_degrees();
  const int max_cd = cd.empty() ? 0 : *std::max_element(cd.begin(), cd.end());
  const int max_rd = rd.empty() ? 0 : *std::max_element(rd.begin(), rd.end());
  os << n_cols << ' ' << n_rows << '\n' << max_cd << ' ' << max_rd << '\n';
  for (int v = 0; v < n_cols; ++v) os << cd[v] << (v + 1 < n_cols ? ' ' : '\n');
  for (int r = 0; r < n_rows; ++r) os << rd[r] << (r + 1 < n_rows ? ' ' : '\n');
  for (int v = 0; v < n_cols; ++v) {
    for (int i = 0; i < max_cd; ++i) {
      if (i) os << ' ';
      os << (i < cd[v] ? col_rows[v][i] + 1 : 0);
    }
    os << '\n';
  }
  for (int r = 0; r < n_rows; ++r) {
    for (int i = 0; i < max_rd; ++i) {
      if (i) os << ' ';
      os << (i < rd[r] ? row_cols[r][i] + 1 : 0);
    }
    os << '\n';
  }
  return os.str();
}

ParityCheckMatrix ParityCheckMatrix::from_alist(const std::string& text) {
  std::istringstream is(text);
  int n_cols = 0, n_rows = 0, max_cd = 0, max_rd = 0;
  if (!(is >> n_cols >> n_rows >> max_cd >> max_rd) || n_cols <= 0 || n_rows <= 0)
    throw std::runtime_error("alist: bad header");
  std::vector<int> cd(n_cols), rd(n_rows);
  for (auto& d : cd)
    if (!(is >> d) || d < 0) throw std::runtime_error("alist: bad column degree");
  for (auto& d : rd)
    if (!(is >> d) || d < 0) throw std::runtime_error("alist: bad row degree");
  std::vector<std::vector<int>> col_rows(n_cols);
  for (int v = 0; v < n_cols; ++v) {
    // Padded and unpadded variants both occur in the wild; zeros are padding.
    for (int i = 0; i < max_cd; ++i) {
      if (i >= cd[v]) {
        // peek: padded files carry zeros here, unpadded carry nothing
        std::streampos pos = is.tellg();
        int z = 0;
        if (is >> z) {
          if (z != 0) {
            is.seekg(pos);
            break;
          }
        }
        continue;
      }
      int r = 0;
      if (!(is >> r) || r < 1 || r > n_rows) throw std::runtime_error("alist: bad entry");
      col_rows[v].push_back(r - 1);
    }
  }
  auto h = from_adjacency(n_rows, n_cols, std::move(col_rows));
  for (int r = 0; r < n_rows; ++r)
    if (static_cast<int>(h.row_cols[r].size()) != rd[r])
      throw std::runtime_error("alist: row degrees inconsistent with column lists");
  return h;
}

ParityCheckMatrix build_regular_ldpc(int n_v, int k_v, int col_weight,
                                     std::uint64_t seed) {
  const int m_c = n_v - k_v;
  if (n_v <= 0 || m_c <= 0) throw std::invalid_argument("build_regular_ldpc: need n_v > k_v >= 0");
  if (col_weight < 2) throw std::invalid_argument("build_regular_ldpc: col_weight >= 2 required");
  if (col_weight > m_c)
    throw std::invalid_argument("build_regular_ldpc: col_weight exceeds check count");

  rng::Stream pick(rng::derive(seed, 0x7065671ull));  // "peg"
  std::vector<std::vector<int>> col_rows(n_v);
  std::vector<std::vector<int>> row_cols(m_c);
  std::vector<int> row_deg(m_c, 0);

  std::vector<int> dist(m_c);        // BFS distance of each check from v, -1 = unreached
  std::vector<char> var_seen(n_v);
  std::vector<int> frontier, next_frontier, cand;

  for (int v = 0; v < n_v; ++v) {
    for (int e = 0; e < col_weight; ++e) {
      cand.clear();
      if (e == 0) {
        int best = m_c;
        for (int r = 0; r < m_c; ++r) {
          if (row_deg[r] < best) {
            best = row_deg[r];
            cand.clear();
          }
          if (row_deg[r] == best) cand.push_back(r);
        }
      } else {
        // BFS from v over the current graph to rank checks by distance.
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(var_seen.begin(), var_seen.end(), 0);
        var_seen[v] = 1;
        frontier.assign(1, v);
        int depth = 1;
        while (!frontier.empty()) {
          next_frontier.clear();
          for (int fv : frontier)
            for (int r : col_rows[fv])
              if (dist[r] < 0) {
                dist[r] = depth;
                for (int w : row_cols[r])
                  if (!var_seen[w]) {
                    var_seen[w] = 1;
                    next_frontier.push_back(w);
                  }
              }
          frontier.swap(next_frontier);
          depth += 2;
        }
        int best_rank = -1;  // unreached checks rank as infinitely far
        int best_deg = 0;
        for (int r = 0; r < m_c; ++r) {
          if (dist[r] == 1) continue;  // already adjacent to v
          const int dr = dist[r] < 0 ? INT32_MAX : dist[r];
          if (cand.empty() || dr > best_rank ||
              (dr == best_rank && row_deg[r] < best_deg)) {
            best_rank = dr;
            best_deg = row_deg[r];
            cand.assign(1, r);
          } else if (dr == best_rank && row_deg[r] == best_deg) {
            cand.push_back(r);
          }
        }
        if (cand.empty())
          throw std::invalid_argument("build_regular_ldpc: no available check (degree budget)");
      }
      const int r = cand[pick.next_below(cand.size())];
      col_rows[v].push_back(r);
      row_cols[r].push_back(v);
      ++row_deg[r];
    }
  }
  return from_adjacency(m_c, n_v, std::move(col_rows));
}

std::vector<int> Protograph::base_col_degrees() const {
  std::vector<int> d(n_cols, 0);
  for (int r = 0; r < n_rows; ++r)
    for (int c = 0; c < n_cols; ++c) d[c] += counts[r][c];
  return d;
}

std::vector<int> Protograph::base_row_degrees() const {
  std::vector<int> d(n_rows, 0);
  for (int r = 0; r < n_rows; ++r)
    for (int c = 0; c < n_cols; ++c) d[r] += counts[r][c];
  return d;
}

std::string Protograph::to_text() const {
  std::ostringstream os;
  os << n_rows << ' ' << n_cols << ' ' << lift_factor << '\n';
  for (int r = 0; r < n_rows; ++r)
    for (int c = 0; c < n_cols; ++c) os << counts[r][c] << (c + 1 < n_cols ? ' ' : '\n');
  return os.str();
}

Protograph Protograph::from_text(const std::string& text) {
  std::istringstream is(text);
  Protograph p;
  if (!(is >> p.n_rows >> p.n_cols >> p.lift_factor) || p.n_rows <= 0 ||
      p.n_cols <= 0 || p.lift_factor <= 0)
    throw std::runtime_error("protograph: bad header (want: m_b n_b f)");
  p.counts.assign(p.n_rows, std::vector<int>(p.n_cols));
  for (int r = 0; r < p.n_rows; ++r)
    for (int c = 0; c < p.n_cols; ++c)
      if (!(is >> p.counts[r][c]) || p.counts[r][c] < 0)
        throw std::runtime_error("protograph: bad entry");
  return p;
}

ParityCheckMatrix lift_protograph(const Protograph& proto, std::uint64_t seed) {
  const int f = proto.lift_factor;
  const int mb = proto.n_rows, nb = proto.n_cols;
  for (int r = 0; r < mb; ++r)
    for (int c = 0; c < nb; ++c)
      if (proto.counts[r][c] > f)
        throw std::invalid_argument("lift_protograph: multiplicity exceeds lift factor");

  // shifts[r][c] holds the circulant offsets assigned to cell (r, c).
  std::vector<std::vector<std::vector<int>>> shifts(
      mb, std::vector<std::vector<int>>(nb));
  rng::Stream pick(rng::derive(seed, 0x6c696674ull));  // "lift"

  // A shift s in cell (r, c) closes a lifted 4-cycle iff either
  //   2(s - s') = 0 mod f against another shift s' in the same cell, or
  //   s - b + u - d = 0 mod f around a base rectangle (r,c),(r,c'),(r',c'),(r',c).
  auto violations = [&](int r, int c, int s) {
    int count = 0;
    for (int t : shifts[r][c]) {
      if (t == s || ((2 * (s - t)) % f + f) % f == 0) ++count;
    }
    for (int c2 = 0; c2 < nb; ++c2) {
      if (c2 == c || shifts[r][c2].empty()) continue;
      for (int r2 = 0; r2 < mb; ++r2) {
        if (r2 == r || shifts[r2][c2].empty() || shifts[r2][c].empty()) continue;
        for (int b : shifts[r][c2])
          for (int u : shifts[r2][c2])
            for (int d : shifts[r2][c])
              if (((s - b + u - d) % f + f) % f == 0) ++count;
      }
    }
    return count;
  };

  const int tries = std::min(f, 64);
  for (int r = 0; r < mb; ++r) {
    for (int c = 0; c < nb; ++c) {
      for (int e = 0; e < proto.counts[r][c]; ++e) {
        int best_s = -1, best_v = INT32_MAX;
        for (int t = 0; t < tries && best_v > 0; ++t) {
          const int s = static_cast<int>(pick.next_below(static_cast<std::uint64_t>(f)));
          bool dup = false;
          for (int prev : shifts[r][c]) dup = dup || prev == s;
          if (dup) continue;
          const int v = violations(r, c, s);
          if (v < best_v) {
            best_v = v;
            best_s = s;
          }
        }
        if (best_s < 0) {
          // fall back to the first unused shift
          for (int s = 0; s < f && best_s < 0; ++s) {
            bool dup = false;
            for (int prev : shifts[r][c]) dup = dup || prev == s;
            if (!dup) best_s = s;
          }
        }
        shifts[r][c].push_back(best_s);
      }
    }
  }

  std::vector<std::vector<int>> col_rows(static_cast<std::size_t>(nb) * f);
  for (int r = 0; r < mb; ++r)
    for (int c = 0; c < nb; ++c)
      for (int s : shifts[r][c])
        for (int i = 0; i < f; ++i) {
          // lifted check (r, i) <-> lifted variable (c, (i + s) mod f)
          col_rows[static_cast<std::size_t>(c) * f + (i + s) % f].push_back(r * f + i);
        }
  return from_adjacency(mb * f, nb * f, std::move(col_rows));
}

Encoder::Encoder(const ParityCheckMatrix& h) : n_(h.n_cols) {
  const int m = h.n_rows;
  const std::size_t words = (static_cast<std::size_t>(n_) + 63) / 64;
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(m) * words, 0);
  for (int r = 0; r < m; ++r)
    for (int c : h.row_cols[r])
      rows[r * words + c / 64] |= 1ull << (c % 64);

  auto get = [&](int r, int c) -> bool {
    return (rows[r * words + c / 64] >> (c % 64)) & 1u;
  };
  auto xor_rows = [&](int dst, int src) {
    for (std::size_t w = 0; w < words; ++w) rows[dst * words + w] ^= rows[src * words + w];
  };

  std::vector<char> is_pivot_col(n_, 0);
  std::vector<int> pivot_row_of;  // pivot_row_of[i] = row holding i-th pivot
  int rank = 0;
  for (int c = 0; c < n_ && rank < m; ++c) {
    int pr = -1;
    for (int r = rank; r < m; ++r)
      if (get(r, c)) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    if (pr != rank)
      for (std::size_t w = 0; w < words; ++w)
        std::swap(rows[pr * words + w], rows[rank * words + w]);
    for (int r = 0; r < m; ++r)
      if (r != rank && get(r, c)) xor_rows(r, rank);
    is_pivot_col[c] = 1;
    pivot_cols_.push_back(c);
    pivot_row_of.push_back(rank);
    ++rank;
  }
  rank_ = rank;

  std::vector<int> info_index(n_, -1);
  for (int c = 0; c < n_; ++c)
    if (!is_pivot_col[c]) {
      info_index[c] = static_cast<int>(info_cols_.size());
      info_cols_.push_back(c);
    }

  const std::size_t k = info_cols_.size();
  mask_words_ = (k + 63) / 64;
  parity_masks_.assign(static_cast<std::size_t>(rank_) * mask_words_, 0);
  for (int p = 0; p < rank_; ++p) {
    const int r = pivot_row_of[p];
    for (int c = 0; c < n_; ++c)
      if (info_index[c] >= 0 && get(r, c)) {
        const int i = info_index[c];
        parity_masks_[p * mask_words_ + i / 64] |= 1ull << (i % 64);
      }
  }
}

std::vector<std::uint8_t> Encoder::encode(std::span<const std::uint8_t> info) const {
  if (static_cast<int>(info.size()) != dimension())
    throw std::invalid_argument("ldpc encode: info length != code dimension");
  std::vector<std::uint64_t> iw(mask_words_, 0);
  for (std::size_t i = 0; i < info.size(); ++i)
    if (info[i]) iw[i / 64] |= 1ull << (i % 64);
  std::vector<std::uint8_t> cw(n_, 0);
  for (std::size_t i = 0; i < info.size(); ++i) cw[info_cols_[i]] = info[i];
  for (int p = 0; p < rank_; ++p) {
    std::uint64_t acc = 0;
    const std::uint64_t* mask = &parity_masks_[p * mask_words_];
    for (std::size_t w = 0; w < mask_words_; ++w) acc ^= mask[w] & iw[w];
    cw[pivot_cols_[p]] = static_cast<std::uint8_t>(std::popcount(acc) & 1);
  }
  return cw;
}

std::vector<std::uint8_t> Encoder::extract_info(
    std::span<const std::uint8_t> codeword) const {
  if (static_cast<int>(codeword.size()) != n_)
    throw std::invalid_argument("ldpc extract_info: bad codeword length");
  std::vector<std::uint8_t> info(info_cols_.size());
  for (std::size_t i = 0; i < info.size(); ++i) info[i] = codeword[info_cols_[i]];
  return info;
}

bool syndrome_ok(const ParityCheckMatrix& h, std::span<const std::uint8_t> bits) {
  if (static_cast<int>(bits.size()) != h.n_cols)
    throw std::invalid_argument("syndrome: bad length");
  for (const auto& cols : h.row_cols) {
    unsigned s = 0;
    for (int c : cols) s ^= bits[c];
    if (s) return false;
  }
  return true;
}

DecodeResult sum_product_decode(std::span<const double> llr_in,
                                const ParityCheckMatrix& h, int max_iters) {
  if (static_cast<int>(llr_in.size()) != h.n_cols)
    throw std::invalid_argument("sum_product_decode: LLR length != n_cols");
  if (max_iters < 0) throw std::invalid_argument("sum_product_decode: negative iterations");

  const int n = h.n_cols, m = h.n_rows;
  std::vector<double> prior(n);
  for (int v = 0; v < n; ++v) prior[v] = channel::clamp_llr(llr_in[v]);

  // Edge storage is row-major so the check pass runs on contiguous ranges.
  std::vector<int> row_start(m + 1, 0);
  for (int r = 0; r < m; ++r)
    row_start[r + 1] = row_start[r] + static_cast<int>(h.row_cols[r].size());
  const int ne = row_start[m];
  std::vector<int> edge_col(ne);
  std::vector<int> col_edges_start(n + 1, 0);
  for (int r = 0; r < m; ++r)
    for (std::size_t i = 0; i < h.row_cols[r].size(); ++i) {
      edge_col[row_start[r] + static_cast<int>(i)] = h.row_cols[r][i];
      ++col_edges_start[h.row_cols[r][i] + 1];
    }
  for (int v = 0; v < n; ++v) col_edges_start[v + 1] += col_edges_start[v];
  std::vector<int> col_edges(ne);
  {
    std::vector<int> fill(col_edges_start.begin(), col_edges_start.end() - 1);
    for (int e = 0; e < ne; ++e) col_edges[fill[edge_col[e]]++] = e;
  }

  std::vector<double> v2c(ne), c2v(ne, 0.0);
  for (int e = 0; e < ne; ++e) v2c[e] = prior[edge_col[e]];

  DecodeResult res;
  res.llrs = prior;
  res.converged = syndrome_ok(h, channel::hard_decision(res.llrs));
  if (res.converged || max_iters == 0) return res;

  std::vector<double> fwd, t;
  for (int iter = 0; iter < max_iters; ++iter) {
    for (int r = 0; r < m; ++r) {
      const int s = row_start[r], d = row_start[r + 1] - s;
      t.resize(d);
      fwd.resize(d + 1);
      fwd[0] = 1.0;
      for (int i = 0; i < d; ++i) {
        t[i] = std::tanh(0.5 * channel::clamp_llr(v2c[s + i]));
        fwd[i + 1] = fwd[i] * t[i];
      }
      double bwd = 1.0;
      for (int i = d - 1; i >= 0; --i) {
        c2v[s + i] = channel::clamp_llr(2.0 * std::atanh(fwd[i] * bwd));
        bwd *= t[i];
      }
    }
    for (int v = 0; v < n; ++v) {
      double post = prior[v];
      for (int i = col_edges_start[v]; i < col_edges_start[v + 1]; ++i)
        post += c2v[col_edges[i]];
      res.llrs[v] = post;
      for (int i = col_edges_start[v]; i < col_edges_start[v + 1]; ++i) {
        const int e = col_edges[i];
        v2c[e] = post - c2v[e];
      }
    }
    res.iterations = iter + 1;
    if (syndrome_ok(h, channel::hard_decision(res.llrs))) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace erc::ldpc
