#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "pqg/certificate.hpp"
#include "pqg/clique_cover.hpp"
#include "pqg/detail/clique_conflicts.hpp"
#include "pqg/geometry.hpp"
#include "pqg/random.hpp"

namespace pqg {

struct GqCheckOptions {
  bool exhaustive = true;
  // Sampled mode: random non-incident (point, line) pairs for the GQ axiom,
  // and random start lines for the line-triangle search.
  std::uint64_t samples = 100000;
  std::uint32_t triangle_start_lines = 256;
  std::uint64_t seed = 1;
};

// Checks the incidence structure of a quadrangle from its line table alone:
// line shape, (q+1)-biregularity, at most one common line per point pair, the
// GQ axiom, and absence of triangles of lines. Witness layouts:
//   line-shape        (line)
//   point-lines       (point)
//   point-degree      (point, count)
//   line-size         (line, count)
//   shared-pair       (line_a, line_b, point_x, point_y)
//   gq-axiom          (point, line, collinear_count)
//   line-triangle     (line_a, line_b, line_c, x, b, y)
inline Certificate certify_gq(const Quadrangle& quad, const GqCheckOptions& opt = {}) {
  constexpr auto kKind = CertificateKind::gq_axioms;
  const std::uint32_t q = quad.order();
  const auto n = static_cast<std::uint32_t>(quad.points.size());
  const auto line_count = static_cast<std::uint32_t>(quad.lines.size());

  if (n != projective3_count(q) || line_count != projective3_count(q)) {
    return Certificate::failed(kKind, "counts", {n, line_count});
  }
  for (std::uint32_t l = 0; l < line_count; ++l) {
    const auto& pts = quad.lines[l].point_ids;
    if (quad.lines[l].id != l) return Certificate::failed(kKind, "line-shape", {l});
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i] >= n || (i > 0 && pts[i - 1] >= pts[i])) return Certificate::failed(kKind, "line-shape", {l});
    }
    if (pts.size() != q + 1) return Certificate::failed(kKind, "line-size", {l, static_cast<std::uint32_t>(pts.size())});
  }
  const auto rebuilt = incidence_lists(n, quad.lines);
  for (std::uint32_t p = 0; p < n; ++p) {
    if (rebuilt[p].size() != q + 1) {
      return Certificate::failed(kKind, "point-degree", {p, static_cast<std::uint32_t>(rebuilt[p].size())});
    }
    if (p < quad.point_lines.size() && rebuilt[p] != quad.point_lines[p]) {
      return Certificate::failed(kKind, "point-lines", {p});
    }
  }

  const CliqueCover cover = line_cover(quad);
  Certificate cert = Certificate::passed(kKind);
  std::uint64_t work = 0;
  if (auto shared = detail::find_shared_pair(cover, &work)) {
    return Certificate::failed(kKind, "shared-pair", *shared);
  }

  // GQ axiom: a point off a line is collinear with exactly one of its points.
  std::vector<std::uint64_t> mark(n, ~std::uint64_t{0});
  std::uint64_t pairs_checked = 0;
  auto check_pair = [&](std::uint32_t p, std::uint32_t l, std::uint64_t tag) -> std::optional<Certificate> {
    if (mark[p] != tag) {
      for (std::uint32_t through : rebuilt[p]) {
        for (std::uint32_t r : quad.lines[through].point_ids) mark[r] = tag;
      }
    }
    std::uint32_t hits = 0;
    for (std::uint32_t r : quad.lines[l].point_ids) hits += (mark[r] == tag && r != p);
    ++pairs_checked;
    if (hits != 1) return Certificate::failed(kKind, "gq-axiom", {p, l, hits});
    return std::nullopt;
  };
  auto on_line = [&](std::uint32_t p, std::uint32_t l) {
    return std::binary_search(rebuilt[p].begin(), rebuilt[p].end(), l);
  };

  std::vector<std::uint32_t> starts;
  if (opt.exhaustive) {
    for (std::uint32_t p = 0; p < n; ++p) {
      for (std::uint32_t l = 0; l < line_count; ++l) {
        if (on_line(p, l)) continue;
        if (auto fail = check_pair(p, l, p)) return *fail;
      }
    }
  } else {
    Rng rng(derive_seed(opt.seed, 0x6771));
    std::uint64_t done = 0;
    while (done < opt.samples) {
      const auto p = static_cast<std::uint32_t>(uniform_below(rng, n));
      const auto l = static_cast<std::uint32_t>(uniform_below(rng, line_count));
      if (on_line(p, l)) continue;
      if (auto fail = check_pair(p, l, done)) return *fail;
      ++done;
    }
    for (std::uint32_t i = 0; i < std::min(opt.triangle_start_lines, line_count); ++i) {
      starts.push_back(static_cast<std::uint32_t>(uniform_below(rng, line_count)));
    }
    std::sort(starts.begin(), starts.end());
    starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  }

  if (auto tri = detail::find_clique_triangle(cover, starts, &work)) {
    return Certificate::failed(kKind, "line-triangle", *tri);
  }
  cert.stats["points"] = n;
  cert.stats["lines"] = line_count;
  cert.stats["axiom_pairs"] = pairs_checked;
  cert.stats["exhaustive"] = opt.exhaustive ? 1 : 0;
  cert.stats["work"] = work;
  return cert;
}

}  // namespace pqg
