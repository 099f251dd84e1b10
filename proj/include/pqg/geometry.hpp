#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "pqg/field.hpp"

namespace pqg {

using Vec4 = std::array<Element, 4>;

// Alternating form x0*y1 - x1*y0 + x2*y3 - x3*y2.
inline Element symplectic_form(const Field& f, const Vec4& x, const Vec4& y) noexcept {
  const Element a = f.sub(f.mul(x[0], y[1]), f.mul(x[1], y[0]));
  const Element b = f.sub(f.mul(x[2], y[3]), f.mul(x[3], y[2]));
  return f.add(a, b);
}

// Point of PG(3,q), normalized so the first nonzero coordinate is 1.
struct ProjectivePoint {
  Vec4 coords;
  std::uint32_t index = 0;
};

// Totally isotropic line of W(q).
struct IsotropicLine {
  std::uint32_t id = 0;
  std::vector<std::uint32_t> point_ids;  // sorted, q + 1 entries
  std::array<ProjectivePoint, 2> basis;  // reduced row echelon form
};

struct Quadrangle {
  Field field;
  std::vector<ProjectivePoint> points;
  std::vector<IsotropicLine> lines;
  std::vector<std::vector<std::uint32_t>> point_lines;  // sorted line ids per point

  std::uint32_t order() const noexcept { return field.order(); }
};

// q^3 + q^2 + q + 1 = (q^2 + 1)(q + 1).
constexpr std::uint64_t projective3_count(std::uint64_t q) noexcept {
  return (q * q + 1) * (q + 1);
}

namespace detail {

// Position of a normalized vector in the lexicographic enumeration. Points
// whose leading 1 sits further right sort first.
inline std::uint32_t point_rank(const Vec4& v, std::uint32_t q) noexcept {
  int lead = 0;
  while (v[lead].is_zero()) ++lead;
  std::uint64_t offset = 0;
  std::uint64_t block = 1;
  for (int pos = 3; pos > lead; --pos) {
    offset += block;
    block *= q;
  }
  std::uint64_t tail = 0;
  for (int pos = lead + 1; pos < 4; ++pos) tail = tail * q + v[pos].value;
  return static_cast<std::uint32_t>(offset + tail);
}

inline Vec4 normalize(const Field& f, Vec4 v) {
  int lead = 0;
  while (lead < 4 && v[lead].is_zero()) ++lead;
  if (lead == 4) return v;
  const Element scale = f.inv(v[lead]);
  for (auto& c : v) c = f.mul(c, scale);
  return v;
}

}  // namespace detail

// Index of the projective point spanned by a nonzero vector.
inline std::uint32_t point_index(const Field& f, const Vec4& v) {
  return detail::point_rank(detail::normalize(f, v), f.order());
}

// All points of PG(3,q) in lexicographic order of their normalized coordinates.
inline std::vector<ProjectivePoint> enumerate_points(const Field& f) {
  const std::uint32_t q = f.order();
  std::vector<ProjectivePoint> points;
  points.reserve(projective3_count(q));
  for (int lead = 3; lead >= 0; --lead) {
    const int free_count = 3 - lead;
    std::uint64_t combos = 1;
    for (int i = 0; i < free_count; ++i) combos *= q;
    for (std::uint64_t c = 0; c < combos; ++c) {
      Vec4 v{};
      v[lead] = f.one();
      std::uint64_t rest = c;
      for (int pos = 3; pos > lead; --pos) {
        v[pos] = Element{static_cast<std::uint32_t>(rest % q)};
        rest /= q;
      }
      points.push_back({v, static_cast<std::uint32_t>(points.size())});
    }
  }
  return points;
}

// Every 2-dimensional subspace on which the symplectic form vanishes, sorted
// lexicographically by reduced echelon basis.
inline std::vector<IsotropicLine> enumerate_lines(const Field& f, std::span<const ProjectivePoint> points) {
  const std::uint32_t q = f.order();
  struct Candidate {
    Vec4 top;
    Vec4 bottom;
  };
  std::vector<Candidate> found;
  found.reserve(projective3_count(q));

  for (int c1 = 0; c1 < 4; ++c1) {
    for (int c2 = c1 + 1; c2 < 4; ++c2) {
      // Free positions: top row right of c1 except c2, bottom row right of c2.
      std::vector<std::pair<int, int>> slots;
      for (int pos = c1 + 1; pos < 4; ++pos) {
        if (pos != c2) slots.emplace_back(0, pos);
      }
      for (int pos = c2 + 1; pos < 4; ++pos) slots.emplace_back(1, pos);
      std::uint64_t combos = 1;
      for (std::size_t i = 0; i < slots.size(); ++i) combos *= q;
      for (std::uint64_t c = 0; c < combos; ++c) {
        Candidate cand{};
        cand.top[c1] = f.one();
        cand.bottom[c2] = f.one();
        std::uint64_t rest = c;
        for (const auto& [row, pos] : slots) {
          (row == 0 ? cand.top : cand.bottom)[pos] = Element{static_cast<std::uint32_t>(rest % q)};
          rest /= q;
        }
        if (symplectic_form(f, cand.top, cand.bottom).is_zero()) found.push_back(cand);
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
    if (a.top != b.top) return a.top < b.top;
    return a.bottom < b.bottom;
  });

  std::vector<IsotropicLine> lines;
  lines.reserve(found.size());
  for (const auto& cand : found) {
    IsotropicLine line;
    line.id = static_cast<std::uint32_t>(lines.size());
    const std::uint32_t top_id = detail::point_rank(cand.top, q);
    const std::uint32_t bottom_id = detail::point_rank(cand.bottom, q);
    line.basis = {points[top_id], points[bottom_id]};
    line.point_ids.reserve(q + 1);
    line.point_ids.push_back(bottom_id);
    for (std::uint32_t s = 0; s < q; ++s) {
      Vec4 v = cand.top;
      for (int pos = 0; pos < 4; ++pos) v[pos] = f.add(v[pos], f.mul(Element{s}, cand.bottom[pos]));
      line.point_ids.push_back(detail::point_rank(v, q));
    }
    std::sort(line.point_ids.begin(), line.point_ids.end());
    lines.push_back(std::move(line));
  }
  return lines;
}

inline std::vector<std::vector<std::uint32_t>> incidence_lists(std::size_t point_count,
                                                               std::span<const IsotropicLine> lines) {
  std::vector<std::vector<std::uint32_t>> result(point_count);
  for (const auto& line : lines) {
    for (std::uint32_t p : line.point_ids) {
      if (p < point_count) result[p].push_back(line.id);
    }
  }
  return result;
}

// The generalized quadrangle W(q).
inline Quadrangle build_quadrangle(const Field& f) {
  Quadrangle quad{f, enumerate_points(f), {}, {}};
  quad.lines = enumerate_lines(f, quad.points);
  quad.point_lines = incidence_lists(quad.points.size(), quad.lines);
  return quad;
}

inline Quadrangle build_quadrangle(std::uint64_t q) { return build_quadrangle(Field::make(q)); }

}  // namespace pqg
