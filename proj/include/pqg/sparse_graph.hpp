#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pqg/errors.hpp"

namespace pqg {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

enum class GraphKind : std::uint8_t { unspecified, base, bipartitioned, incidence };

inline const char* to_string(GraphKind kind) noexcept {
  switch (kind) {
    case GraphKind::base: return "G1";
    case GraphKind::bipartitioned: return "G";
    case GraphKind::incidence: return "incidence";
    default: return "unspecified";
  }
}

struct GraphMetadata {
  std::optional<std::uint32_t> q;
  GraphKind kind = GraphKind::unspecified;
  std::optional<std::uint64_t> seed;
};

// Immutable undirected simple graph in compressed sparse row form. Every edge
// is stored in both directions and each adjacency list is strictly ascending.
class SparseGraph {
 public:
  SparseGraph() : offsets_{0} {}

  // Takes ownership of a CSR layout; checks every structural invariant.
  static SparseGraph from_csr(std::vector<std::uint64_t> offsets, std::vector<std::uint32_t> neighbors,
                              GraphMetadata meta = {}) {
    SparseGraph g;
    g.offsets_ = std::move(offsets);
    g.neighbors_ = std::move(neighbors);
    g.meta_ = meta;
    g.validate();
    return g;
  }

  // Builds from an undirected edge list; orientation and order are free but
  // self-loops and repeated edges are rejected.
  static SparseGraph from_edges(std::uint32_t n, std::span<const Edge> edges, GraphMetadata meta = {}) {
    std::vector<std::uint64_t> offsets(std::size_t{n} + 1, 0);
    for (const auto& [u, v] : edges) {
      if (u >= n || v >= n) throw FormatError("edge endpoint out of range");
      if (u == v) throw FormatError("self-loop at vertex " + std::to_string(u));
      ++offsets[u + 1];
      ++offsets[v + 1];
    }
    for (std::uint32_t v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
    std::vector<std::uint32_t> neighbors(offsets.back());
    std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& [u, v] : edges) {
      neighbors[cursor[u]++] = v;
      neighbors[cursor[v]++] = u;
    }
    SparseGraph g;
    g.offsets_ = std::move(offsets);
    g.neighbors_ = std::move(neighbors);
    g.meta_ = meta;
    g.sort_lists();
    g.validate();
    return g;
  }

  std::uint32_t n() const noexcept { return static_cast<std::uint32_t>(offsets_.size() - 1); }
  std::uint64_t m() const noexcept { return neighbors_.size() / 2; }

  std::uint32_t degree(std::uint32_t v) const noexcept {
    return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
  }

  std::span<const std::uint32_t> neighbors(std::uint32_t v) const noexcept {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }

  bool has_edge(std::uint32_t u, std::uint32_t v) const noexcept {
    if (u >= n() || v >= n()) return false;
    const auto adj = degree(u) <= degree(v) ? neighbors(u) : neighbors(v);
    const std::uint32_t target = degree(u) <= degree(v) ? v : u;
    return std::binary_search(adj.begin(), adj.end(), target);
  }

  const std::vector<std::uint64_t>& offsets() const noexcept { return offsets_; }
  const std::vector<std::uint32_t>& adjacency() const noexcept { return neighbors_; }

  const GraphMetadata& metadata() const noexcept { return meta_; }
  void set_metadata(GraphMetadata meta) noexcept { meta_ = meta; }

  // Common degree if the graph is regular.
  std::optional<std::uint32_t> regular_degree() const noexcept {
    if (n() == 0) return 0U;
    const std::uint32_t d = degree(0);
    for (std::uint32_t v = 1; v < n(); ++v) {
      if (degree(v) != d) return std::nullopt;
    }
    return d;
  }

  // Edges (u, v) with u < v in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(m());
    for (std::uint32_t u = 0; u < n(); ++u) {
      for (std::uint32_t v : neighbors(u)) {
        if (v > u) out.emplace_back(u, v);
      }
    }
    return out;
  }

  // Number of edges with both endpoints in `members`. `mask` must flag exactly
  // the members (size n). Scans whichever of X and its complement is smaller.
  std::uint64_t edges_within(std::span<const std::uint32_t> members, std::span<const std::uint8_t> mask) const {
    std::uint64_t twice = 0;
    if (members.size() * 2 <= n()) {
      for (std::uint32_t v : members) {
        for (std::uint32_t u : neighbors(v)) twice += mask[u];
      }
      return twice / 2;
    }
    for (std::uint32_t v : members) twice += degree(v);
    std::uint64_t cross = 0;
    for (std::uint32_t u = 0; u < n(); ++u) {
      if (mask[u]) continue;
      for (std::uint32_t w : neighbors(u)) cross += mask[w];
    }
    return (twice - cross) / 2;
  }

  std::uint64_t edges_within(std::span<const std::uint32_t> members) const {
    std::vector<std::uint8_t> mask(n(), 0);
    for (std::uint32_t v : members) mask[v] = 1;
    return edges_within(members, mask);
  }

  // Copy with one extra edge.
  SparseGraph with_edge(std::uint32_t u, std::uint32_t v) const {
    auto list = edges();
    list.emplace_back(u, v);
    return from_edges(n(), list, meta_);
  }

  friend bool operator==(const SparseGraph& a, const SparseGraph& b) noexcept {
    return a.offsets_ == b.offsets_ && a.neighbors_ == b.neighbors_;
  }

 private:
  void sort_lists() {
    for (std::uint32_t v = 0; v < n(); ++v) {
      std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
    }
  }

  void validate() const {
    if (offsets_.empty() || offsets_.front() != 0) throw FormatError("offsets must start at 0");
    if (offsets_.back() != neighbors_.size()) throw FormatError("offsets do not cover the neighbor array");
    if (neighbors_.size() % 2 != 0) throw FormatError("odd number of adjacency entries");
    const std::uint32_t count = n();
    for (std::uint32_t v = 0; v < count; ++v) {
      if (offsets_[v + 1] < offsets_[v]) throw FormatError("offsets not monotone");
      const auto adj = neighbors(v);
      for (std::size_t i = 0; i < adj.size(); ++i) {
        const std::uint32_t u = adj[i];
        if (u >= count) throw FormatError("neighbor id out of range");
        if (u == v) throw FormatError("self-loop at vertex " + std::to_string(v));
        if (i > 0 && adj[i - 1] >= u) {
          throw FormatError("adjacency of vertex " + std::to_string(v) + " not strictly ascending");
        }
        const auto back = neighbors(u);
        if (!std::binary_search(back.begin(), back.end(), v)) {
          throw FormatError("asymmetric edge " + std::to_string(v) + "-" + std::to_string(u));
        }
      }
    }
  }

  std::vector<std::uint64_t> offsets_;
  std::vector<std::uint32_t> neighbors_;
  GraphMetadata meta_;
};

}  // namespace pqg
