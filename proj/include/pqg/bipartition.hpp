#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pqg/clique_cover.hpp"
#include "pqg/parallel.hpp"
#include "pqg/random.hpp"
#include "pqg/sparse_graph.hpp"

namespace pqg {

inline constexpr std::uint64_t kCliqueStride = 0xA24BAED4963EE407ULL;
inline constexpr std::uint64_t kSlotStride = 0x9FB21C651E98DF25ULL;

// Z_ij for clique i, slot j under `seed`: +1 iff the low bit of the mixed
// counter is 0. This formula is the cross-implementation reproducibility
// contract; do not change it.
constexpr int sign_of(std::uint64_t seed, std::uint64_t clique, std::uint64_t slot) noexcept {
  return (mix64(seed ^ (clique * kCliqueStride) ^ (slot * kSlotStride)) & 1U) == 0 ? 1 : -1;
}

// One ±1 value per (clique, slot) incidence of a cover.
class SignAssignment {
 public:
  SignAssignment() = default;

  static SignAssignment derive(const CliqueCover& cover, std::uint64_t seed, unsigned threads = 1) {
    SignAssignment s;
    s.seed_ = seed;
    s.base_.resize(std::size_t{cover.size()} + 1);
    for (std::uint32_t c = 0; c < cover.size(); ++c) s.base_[c] = cover.incidence_base(c);
    s.base_[cover.size()] = cover.incidence_count();
    s.values_.resize(cover.incidence_count());
    parallel_for(cover.size(), threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t c = begin; c < end; ++c) {
        for (std::uint64_t j = 0; j < s.base_[c + 1] - s.base_[c]; ++j) {
          s.values_[s.base_[c] + j] = static_cast<std::int8_t>(sign_of(seed, c, j));
        }
      }
    });
    return s;
  }

  // Explicit signs, one vector per clique in cover order.
  static SignAssignment from_values(const CliqueCover& cover, const std::vector<std::vector<int>>& per_clique) {
    if (per_clique.size() != cover.size()) throw std::invalid_argument("one sign vector per clique required");
    SignAssignment s;
    s.base_.push_back(0);
    for (std::uint32_t c = 0; c < cover.size(); ++c) {
      if (per_clique[c].size() != cover.clique(c).size()) {
        throw std::invalid_argument("sign vector size mismatch at clique " + std::to_string(c));
      }
      for (int z : per_clique[c]) {
        if (z != 1 && z != -1) throw std::invalid_argument("signs must be +1 or -1");
        s.values_.push_back(static_cast<std::int8_t>(z));
      }
      s.base_.push_back(s.values_.size());
    }
    return s;
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint32_t clique_count() const noexcept { return static_cast<std::uint32_t>(base_.empty() ? 0 : base_.size() - 1); }
  std::uint32_t clique_size(std::uint32_t c) const noexcept { return static_cast<std::uint32_t>(base_[c + 1] - base_[c]); }

  int sign(std::uint32_t clique, std::uint32_t slot) const noexcept { return values_[base_[clique] + slot]; }
  std::span<const std::int8_t> clique_signs(std::uint32_t c) const noexcept {
    return {values_.data() + base_[c], values_.data() + base_[c + 1]};
  }

  // True when the assignment has exactly one sign per incidence of `cover`.
  bool matches(const CliqueCover& cover) const noexcept {
    if (clique_count() != cover.size()) return false;
    for (std::uint32_t c = 0; c < cover.size(); ++c) {
      if (clique_size(c) != cover.clique(c).size()) return false;
    }
    return true;
  }

  friend bool operator==(const SignAssignment&, const SignAssignment&) = default;

 private:
  std::uint64_t seed_ = 0;
  std::vector<std::uint64_t> base_;
  std::vector<std::int8_t> values_;
};

// Union over cliques of the complete bipartite graph between the clique's
// positive (A) and negative (B) sign classes.
inline SparseGraph build_g(const CliqueCover& cover, const SignAssignment& signs, unsigned threads = 1) {
  if (!signs.matches(cover)) throw std::invalid_argument("sign assignment does not match cover");
  const std::uint32_t n = cover.n();
  std::vector<std::uint64_t> offsets(std::size_t{n} + 1, 0);
  for (std::uint32_t c = 0; c < cover.size(); ++c) {
    const auto members = cover.clique(c);
    const auto z = signs.clique_signs(c);
    std::uint64_t plus = 0;
    for (auto s : z) plus += (s > 0);
    const std::uint64_t minus = members.size() - plus;
    for (std::size_t j = 0; j < members.size(); ++j) offsets[members[j] + 1] += z[j] > 0 ? minus : plus;
  }
  for (std::uint32_t v = 0; v < n; ++v) offsets[v + 1] += offsets[v];

  std::vector<std::uint32_t> neighbors(offsets.back());
  std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::uint32_t c = 0; c < cover.size(); ++c) {
    const auto members = cover.clique(c);
    const auto z = signs.clique_signs(c);
    for (std::size_t a = 0; a < members.size(); ++a) {
      if (z[a] < 0) continue;
      for (std::size_t b = 0; b < members.size(); ++b) {
        if (z[b] > 0) continue;
        neighbors[cursor[members[a]]++] = members[b];
        neighbors[cursor[members[b]]++] = members[a];
      }
    }
  }
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      std::sort(neighbors.begin() + static_cast<std::ptrdiff_t>(offsets[v]),
                neighbors.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]));
    }
  });
  GraphMetadata meta;
  meta.kind = GraphKind::bipartitioned;
  meta.seed = signs.seed();
  return SparseGraph::from_csr(std::move(offsets), std::move(neighbors), meta);
}

// Per-clique restriction of a subset X: t = |clique ∩ X|, sigma = sum of the
// signs of those slots.
struct CliqueBlock {
  std::uint32_t clique;
  std::uint32_t t;
  std::int64_t sigma;
};

struct SubsetStats {
  std::uint64_t size = 0;
  std::uint64_t e_g1 = 0;
  std::uint64_t e_g = 0;
  std::uint64_t s = 0;        // cliques meeting X
  std::uint64_t t_total = 0;  // sum of t_i
  std::int64_t q_form = 0;    // sum of sigma_i^2 - t_i
  std::uint64_t frobenius_sq = 0;
  std::uint64_t operator_norm = 0;  // max(t_i - 1)
  std::vector<CliqueBlock> blocks;  // filled on request
};

// Computes subset statistics with reusable scratch space. e_G1 and e_G are
// counted from the graphs' adjacency; the quadratic form from the signs.
class SubsetAnalyzer {
 public:
  SubsetAnalyzer(const BaseGraph& base, const SignAssignment& signs, const SparseGraph& g)
      : base_(base), signs_(signs), g_(g), mask_(base.cover().n(), 0), t_(base.cover().size(), 0),
        sigma_(base.cover().size(), 0) {
    if (g.n() != base.cover().n()) throw std::invalid_argument("graph and cover disagree on vertex count");
    if (!signs.matches(base.cover())) throw std::invalid_argument("sign assignment does not match cover");
  }

  SubsetStats analyze(std::span<const std::uint32_t> members, bool keep_blocks = false) {
    const CliqueCover& cover = base_.cover();
    SubsetStats st;
    st.size = members.size();
    for (std::uint32_t v : members) {
      if (v >= cover.n()) {
        clear(members);
        throw std::invalid_argument("vertex out of range: " + std::to_string(v));
      }
      if (mask_[v]) {
        clear(members);
        throw std::invalid_argument("duplicate vertex in subset: " + std::to_string(v));
      }
      mask_[v] = 1;
      for (const auto& inc : cover.incidences(v)) {
        if (t_[inc.clique] == 0) touched_.push_back(inc.clique);
        ++t_[inc.clique];
        sigma_[inc.clique] += signs_.sign(inc.clique, inc.slot);
      }
    }
    for (std::uint32_t c : touched_) {
      const std::uint64_t t = t_[c];
      const std::int64_t sig = sigma_[c];
      ++st.s;
      st.t_total += t;
      st.q_form += sig * sig - static_cast<std::int64_t>(t);
      st.frobenius_sq += t * (t - 1);
      st.operator_norm = std::max(st.operator_norm, t - 1);
      if (keep_blocks) st.blocks.push_back({c, static_cast<std::uint32_t>(t), sig});
    }
    if (keep_blocks) {
      std::sort(st.blocks.begin(), st.blocks.end(), [](const auto& a, const auto& b) { return a.clique < b.clique; });
    }
    st.e_g1 = base_.graph().edges_within(members, mask_);
    st.e_g = g_.edges_within(members, mask_);
    clear(members);
    return st;
  }

 private:
  void clear(std::span<const std::uint32_t> members) {
    for (std::uint32_t v : members) {
      if (v < mask_.size()) mask_[v] = 0;
    }
    for (std::uint32_t c : touched_) {
      t_[c] = 0;
      sigma_[c] = 0;
    }
    touched_.clear();
  }

  const BaseGraph& base_;
  const SignAssignment& signs_;
  const SparseGraph& g_;
  std::vector<std::uint8_t> mask_;
  std::vector<std::uint32_t> t_;
  std::vector<std::int64_t> sigma_;
  std::vector<std::uint32_t> touched_;
};

inline SubsetStats subset_stats(std::span<const std::uint32_t> members, const BaseGraph& base,
                                const SignAssignment& signs, const SparseGraph& g, bool keep_blocks = false) {
  SubsetAnalyzer analyzer(base, signs, g);
  return analyzer.analyze(members, keep_blocks);
}

}  // namespace pqg
