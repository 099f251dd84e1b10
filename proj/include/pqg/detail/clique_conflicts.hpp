#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "pqg/clique_cover.hpp"

namespace pqg::detail {

inline constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

// Two distinct cliques sharing two vertices: (clique_a, clique_b, x, y).
// Detected by stamping, for each clique L, every clique that meets L and the
// vertex where it does.
inline std::optional<std::vector<std::uint32_t>> find_shared_pair(const CliqueCover& cover,
                                                                  std::uint64_t* work = nullptr) {
  std::vector<std::uint32_t> stamp(cover.size(), kUnset);
  std::vector<std::uint32_t> meet(cover.size(), kUnset);
  std::uint64_t steps = 0;
  for (std::uint32_t L = 0; L < cover.size(); ++L) {
    for (std::uint32_t x : cover.clique(L)) {
      for (const auto& inc : cover.incidences(x)) {
        ++steps;
        const std::uint32_t M = inc.clique;
        if (M == L) continue;
        if (stamp[M] == L) {
          if (work) *work += steps;
          return std::vector<std::uint32_t>{std::min(L, M), std::max(L, M), meet[M], x};
        }
        stamp[M] = L;
        meet[M] = x;
      }
    }
  }
  if (work) *work += steps;
  return std::nullopt;
}

// Three distinct cliques pairwise meeting in three distinct vertices:
// (L, M, N, x, b, y) with x in L∩M, b in M∩N, y in N∩L and L < M < N.
// Assumes no shared pair (run find_shared_pair first). Only triangles whose
// smallest clique is in `starts` are searched; empty `starts` means all.
inline std::optional<std::vector<std::uint32_t>> find_clique_triangle(const CliqueCover& cover,
                                                                      std::span<const std::uint32_t> starts = {},
                                                                      std::uint64_t* work = nullptr) {
  std::vector<std::uint32_t> stamp(cover.size(), kUnset);
  std::vector<std::uint32_t> meet(cover.size(), kUnset);
  std::uint64_t steps = 0;
  const std::uint32_t count = starts.empty() ? cover.size() : static_cast<std::uint32_t>(starts.size());
  for (std::uint32_t idx = 0; idx < count; ++idx) {
    const std::uint32_t L = starts.empty() ? idx : starts[idx];
    for (std::uint32_t x : cover.clique(L)) {
      for (const auto& inc : cover.incidences(x)) {
        stamp[inc.clique] = L;
        meet[inc.clique] = x;
      }
    }
    for (std::uint32_t x : cover.clique(L)) {
      for (const auto& inc_m : cover.incidences(x)) {
        const std::uint32_t M = inc_m.clique;
        if (M <= L) continue;
        for (std::uint32_t b : cover.clique(M)) {
          if (b == x) continue;
          const auto through_b = cover.incidences(b);
          auto it = std::upper_bound(through_b.begin(), through_b.end(), M,
                                     [](std::uint32_t value, const Incidence& inc) { return value < inc.clique; });
          for (; it != through_b.end(); ++it) {
            ++steps;
            const std::uint32_t N = it->clique;
            if (stamp[N] == L && meet[N] != x) {
              if (work) *work += steps;
              return std::vector<std::uint32_t>{L, M, N, x, b, meet[N]};
            }
          }
        }
      }
    }
  }
  if (work) *work += steps;
  return std::nullopt;
}

}  // namespace pqg::detail
