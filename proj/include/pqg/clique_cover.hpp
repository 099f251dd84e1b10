#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pqg/errors.hpp"
#include "pqg/geometry.hpp"
#include "pqg/sparse_graph.hpp"

namespace pqg {

// One membership of a vertex: the clique and the vertex's position (slot)
// within that clique's sorted vertex list.
struct Incidence {
  std::uint32_t clique;
  std::uint32_t slot;
  friend bool operator==(const Incidence&, const Incidence&) = default;
};

// A family of cliques on n vertices. Construction checks only shape (ids in
// range, each clique strictly ascending); edge-partition and triangle-freeness
// of the family are established by build_base_graph / check_structural.
class CliqueCover {
 public:
  CliqueCover() : clique_offsets_{0}, incidence_offsets_{0} {}

  static CliqueCover from_cliques(std::uint32_t n, std::span<const std::vector<std::uint32_t>> cliques) {
    CliqueCover cover;
    cover.n_ = n;
    cover.clique_offsets_.reserve(cliques.size() + 1);
    for (std::size_t c = 0; c < cliques.size(); ++c) {
      const auto& members = cliques[c];
      if (members.empty()) throw FormatError("clique " + std::to_string(c) + " is empty");
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (members[i] >= n) throw FormatError("clique " + std::to_string(c) + " has vertex out of range");
        if (i > 0 && members[i - 1] >= members[i]) {
          throw FormatError("clique " + std::to_string(c) + " is not strictly ascending");
        }
      }
      cover.members_.insert(cover.members_.end(), members.begin(), members.end());
      cover.clique_offsets_.push_back(cover.members_.size());
    }
    cover.index_incidences();
    return cover;
  }

  std::uint32_t n() const noexcept { return n_; }
  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(clique_offsets_.size() - 1); }

  std::span<const std::uint32_t> clique(std::uint32_t c) const noexcept {
    return {members_.data() + clique_offsets_[c], members_.data() + clique_offsets_[c + 1]};
  }

  // Memberships of v, ascending by clique id.
  std::span<const Incidence> incidences(std::uint32_t v) const noexcept {
    return {incidences_.data() + incidence_offsets_[v], incidences_.data() + incidence_offsets_[v + 1]};
  }

  // Global index of (clique c, slot 0); slots of c are contiguous after it.
  std::uint64_t incidence_base(std::uint32_t c) const noexcept { return clique_offsets_[c]; }
  std::uint64_t incidence_count() const noexcept { return members_.size(); }

  std::vector<std::vector<std::uint32_t>> cliques() const {
    std::vector<std::vector<std::uint32_t>> out;
    out.reserve(size());
    for (std::uint32_t c = 0; c < size(); ++c) {
      const auto span = clique(c);
      out.emplace_back(span.begin(), span.end());
    }
    return out;
  }

  // Sum over cliques of C(size, 2).
  std::uint64_t pair_count() const noexcept {
    std::uint64_t total = 0;
    for (std::uint32_t c = 0; c < size(); ++c) {
      const std::uint64_t s = clique(c).size();
      total += s * (s - 1) / 2;
    }
    return total;
  }

  friend bool operator==(const CliqueCover& a, const CliqueCover& b) noexcept {
    return a.n_ == b.n_ && a.clique_offsets_ == b.clique_offsets_ && a.members_ == b.members_;
  }

 private:
  void index_incidences() {
    incidence_offsets_.assign(std::size_t{n_} + 1, 0);
    for (std::uint32_t v : members_) ++incidence_offsets_[v + 1];
    for (std::uint32_t v = 0; v < n_; ++v) incidence_offsets_[v + 1] += incidence_offsets_[v];
    incidences_.resize(members_.size());
    std::vector<std::uint64_t> cursor(incidence_offsets_.begin(), incidence_offsets_.end() - 1);
    for (std::uint32_t c = 0; c < size(); ++c) {
      const auto members = clique(c);
      for (std::uint32_t j = 0; j < members.size(); ++j) incidences_[cursor[members[j]]++] = {c, j};
    }
  }

  std::uint32_t n_ = 0;
  std::vector<std::uint64_t> clique_offsets_;
  std::vector<std::uint32_t> members_;
  std::vector<std::uint64_t> incidence_offsets_;
  std::vector<Incidence> incidences_;
};

// G1 (the union of the cover's cliques) together with the owning clique of
// each edge. Owners are stored over the upper-triangle enumeration: edges
// (u, v), u < v, ordered by u then v.
class BaseGraph {
 public:
  const SparseGraph& graph() const noexcept { return graph_; }
  const CliqueCover& cover() const noexcept { return cover_; }
  const std::vector<std::uint32_t>& edge_owner() const noexcept { return owner_; }

  // Clique containing edge {u, v}; u and v must be adjacent.
  std::uint32_t owner(std::uint32_t u, std::uint32_t v) const noexcept {
    if (u > v) std::swap(u, v);
    const auto adj = graph_.neighbors(u);
    const auto pos = static_cast<std::uint64_t>(std::lower_bound(adj.begin(), adj.end(), v) - adj.begin());
    return owner_[upper_base_[u] + pos - lower_count_[u]];
  }

 private:
  friend BaseGraph build_base_graph(CliqueCover cover, GraphMetadata meta);

  SparseGraph graph_;
  CliqueCover cover_;
  std::vector<std::uint32_t> owner_;
  std::vector<std::uint64_t> upper_base_;   // index of u's first upper edge
  std::vector<std::uint32_t> lower_count_;  // neighbors of u smaller than u
};

// Union of the cover's cliques. Throws CoverViolation, with witness
// (u, v, clique_a, clique_b), if two cliques share an edge.
inline BaseGraph build_base_graph(CliqueCover cover, GraphMetadata meta = {}) {
  const std::uint32_t n = cover.n();
  std::vector<std::uint64_t> offsets(std::size_t{n} + 1, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    std::uint64_t deg = 0;
    for (const auto& inc : cover.incidences(v)) deg += cover.clique(inc.clique).size() - 1;
    offsets[v + 1] = offsets[v] + deg;
  }

  // Each slot packs (neighbor << 32 | clique) so sorting groups by neighbor.
  std::vector<std::uint64_t> packed(offsets.back());
  for (std::uint32_t v = 0; v < n; ++v) {
    std::uint64_t at = offsets[v];
    for (const auto& inc : cover.incidences(v)) {
      for (std::uint32_t u : cover.clique(inc.clique)) {
        if (u != v) packed[at++] = (std::uint64_t{u} << 32) | inc.clique;
      }
    }
    std::sort(packed.begin() + static_cast<std::ptrdiff_t>(offsets[v]), packed.begin() + static_cast<std::ptrdiff_t>(at));
    for (std::uint64_t i = offsets[v] + 1; i < at; ++i) {
      if ((packed[i] >> 32) == (packed[i - 1] >> 32)) {
        const auto u = static_cast<std::uint32_t>(packed[i] >> 32);
        throw CoverViolation("edge " + std::to_string(std::min(u, v)) + "-" + std::to_string(std::max(u, v)) +
                                 " lies in two cliques",
                             {std::min(u, v), std::max(u, v), static_cast<std::uint32_t>(packed[i - 1]),
                              static_cast<std::uint32_t>(packed[i])});
      }
    }
  }

  BaseGraph base;
  base.upper_base_.resize(n);
  base.lower_count_.resize(n);
  std::vector<std::uint32_t> neighbors(packed.size());
  std::uint64_t upper = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    base.upper_base_[v] = upper;
    std::uint32_t lower = 0;
    for (std::uint64_t i = offsets[v]; i < offsets[v + 1]; ++i) {
      const auto u = static_cast<std::uint32_t>(packed[i] >> 32);
      if (u < v) ++lower;
      else ++upper;
    }
    base.lower_count_[v] = lower;
  }
  base.owner_.resize(upper);
  for (std::uint32_t v = 0; v < n; ++v) {
    std::uint64_t next = base.upper_base_[v];
    for (std::uint64_t i = offsets[v]; i < offsets[v + 1]; ++i) {
      const auto u = static_cast<std::uint32_t>(packed[i] >> 32);
      neighbors[i] = u;
      if (u > v) base.owner_[next++] = static_cast<std::uint32_t>(packed[i]);
    }
  }
  packed.clear();
  packed.shrink_to_fit();

  meta.kind = GraphKind::base;
  base.graph_ = SparseGraph::from_csr(std::move(offsets), std::move(neighbors), meta);
  base.cover_ = std::move(cover);
  return base;
}

// Line cover of W(q).
inline CliqueCover line_cover(const Quadrangle& quad) {
  std::vector<std::vector<std::uint32_t>> cliques;
  cliques.reserve(quad.lines.size());
  for (const auto& line : quad.lines) cliques.push_back(line.point_ids);
  return CliqueCover::from_cliques(static_cast<std::uint32_t>(quad.points.size()), cliques);
}

// Collinearity graph of W(q): vertices are points, adjacent iff they share a
// line. q(q+1)-regular.
inline BaseGraph build_g1(const Quadrangle& quad) {
  GraphMetadata meta;
  meta.q = quad.order();
  return build_base_graph(line_cover(quad), meta);
}

// Point-line incidence graph: points 0..n-1, line i at vertex n + i.
inline SparseGraph build_incidence_graph(const Quadrangle& quad) {
  const auto n = static_cast<std::uint32_t>(quad.points.size());
  std::vector<Edge> edges;
  for (const auto& line : quad.lines) {
    for (std::uint32_t p : line.point_ids) edges.emplace_back(p, n + line.id);
  }
  GraphMetadata meta;
  meta.q = quad.order();
  meta.kind = GraphKind::incidence;
  return SparseGraph::from_edges(n + static_cast<std::uint32_t>(quad.lines.size()), edges, meta);
}

}  // namespace pqg
