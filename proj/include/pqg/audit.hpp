#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pqg/bipartition.hpp"
#include "pqg/clique_cover.hpp"
#include "pqg/errors.hpp"
#include "pqg/field.hpp"
#include "pqg/geometry.hpp"
#include "pqg/random.hpp"
#include "pqg/spectral.hpp"

namespace pqg {

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Fraction reduced(std::int64_t num, std::int64_t den) {
    const std::int64_t g = std::gcd(num, den);
    return {num / g, den / g};
  }
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
  friend bool operator==(const Fraction& a, const Fraction& b) noexcept {
    return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
  }
};

// Parameter sheet of the construction at order q.
struct TheoryParams {
  std::uint32_t q = 0;
  std::uint64_t n = 0;                // q^3 + q^2 + q + 1
  std::uint32_t d_incidence = 0;      // q + 1
  double lambda_incidence = 0.0;      // sqrt(2q)
  std::uint64_t d_g1 = 0;             // q(q + 1)
  Fraction p_g1;                      // q / (q^2 + 1)
  std::uint32_t beta_g1 = 0;          // q + 1
  Fraction p_g;                       // q / (2(q^2 + 1))
  double beta_target_shape = 0.0;     // q ln n
  Fraction union_bound_failure;       // 2 / (n - 1)
};

inline TheoryParams theory_params(std::uint64_t q) {
  const Field f = Field::make(q);
  const auto qq = static_cast<std::int64_t>(f.order());
  TheoryParams t;
  t.q = f.order();
  t.n = projective3_count(f.order());
  t.d_incidence = t.q + 1;
  t.lambda_incidence = std::sqrt(2.0 * static_cast<double>(t.q));
  t.d_g1 = std::uint64_t{t.q} * (t.q + 1);
  t.p_g1 = Fraction::reduced(qq, qq * qq + 1);
  t.beta_g1 = t.q + 1;
  t.p_g = Fraction::reduced(qq, 2 * (qq * qq + 1));
  t.beta_target_shape = static_cast<double>(t.q) * std::log(static_cast<double>(t.n));
  t.union_bound_failure = Fraction::reduced(2, static_cast<std::int64_t>(t.n) - 1);
  return t;
}

// ---------------------------------------------------------------------------
// Subset families.

enum class Family : std::uint8_t { uniform, line, line_union, neighborhood, sign_class, full };

inline constexpr std::array<Family, 6> kAllFamilies = {Family::uniform,      Family::line,       Family::line_union,
                                                       Family::neighborhood, Family::sign_class, Family::full};

inline const char* to_string(Family f) noexcept {
  switch (f) {
    case Family::uniform: return "uniform";
    case Family::line: return "line";
    case Family::line_union: return "line-union";
    case Family::neighborhood: return "neighborhood";
    case Family::sign_class: return "sign-class";
    case Family::full: return "full";
  }
  return "unknown";
}

inline Family parse_family(std::string_view name) {
  for (Family f : kAllFamilies) {
    if (name == to_string(f)) return f;
  }
  throw std::invalid_argument("unknown family: " + std::string(name));
}

struct SubsetSample {
  Family family = Family::uniform;
  std::vector<std::uint32_t> members;  // ascending, distinct
};

// Uniform subset sizes: 2, 4, 8, ... below n, then n.
inline std::vector<std::uint32_t> size_grid(std::uint32_t n) {
  std::vector<std::uint32_t> grid;
  for (std::uint64_t s = 2; s < n; s *= 2) grid.push_back(static_cast<std::uint32_t>(s));
  if (n >= 1) grid.push_back(n);
  return grid;
}

// Mixed battery of subsets. The full vertex set comes first (when selected);
// the rest cycle through the selected families with weights
// uniform 4, line-union 2, sign-class 2, line 1, neighborhood 1.
inline std::vector<SubsetSample> sample_families(const SparseGraph& g, const CliqueCover& cover,
                                                 const SignAssignment& signs, std::uint64_t count, std::uint64_t seed,
                                                 std::span<const Family> families = kAllFamilies) {
  std::vector<SubsetSample> out;
  const std::uint32_t n = cover.n();
  if (count == 0 || n == 0) return out;
  const bool want_full = std::find(families.begin(), families.end(), Family::full) != families.end();
  std::vector<Family> schedule;
  auto add = [&](Family f, int weight) {
    if (std::find(families.begin(), families.end(), f) == families.end()) return;
    if (f != Family::uniform && f != Family::neighborhood && cover.size() == 0) return;
    for (int i = 0; i < weight; ++i) schedule.push_back(f);
  };
  add(Family::uniform, 4);
  add(Family::line, 1);
  add(Family::line_union, 2);
  add(Family::neighborhood, 1);
  add(Family::sign_class, 2);
  if (schedule.empty() && want_full) schedule.push_back(Family::full);
  if (schedule.empty()) return out;

  const auto grid = size_grid(n);
  const auto root = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(n)));
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0U);
  std::vector<std::uint8_t> used(cover.size(), 0);
  auto finish = [&](Family fam, std::vector<std::uint32_t> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    out.push_back({fam, std::move(members)});
  };
  auto random_cliques = [&](Rng& rng, std::uint32_t k) {
    k = std::min(k, cover.size());
    std::vector<std::uint32_t> picked;
    while (picked.size() < k) {
      const auto c = static_cast<std::uint32_t>(uniform_below(rng, cover.size()));
      if (used[c]) continue;
      used[c] = 1;
      picked.push_back(c);
    }
    for (std::uint32_t c : picked) used[c] = 0;
    return picked;
  };

  if (want_full) finish(Family::full, std::vector<std::uint32_t>(perm.begin(), perm.end()));
  for (std::uint64_t i = out.size(); i < count; ++i) {
    Rng rng(derive_seed(seed, i));
    const Family fam = schedule[i % schedule.size()];
    std::vector<std::uint32_t> members;
    switch (fam) {
      case Family::full:
        members.assign(perm.begin(), perm.end());
        break;
      case Family::uniform: {
        const std::uint32_t s = grid[uniform_below(rng, grid.size())];
        for (std::uint32_t j = 0; j < s; ++j) {
          const auto r = j + static_cast<std::uint32_t>(uniform_below(rng, n - j));
          std::swap(perm[j], perm[r]);
        }
        members.assign(perm.begin(), perm.begin() + s);
        break;
      }
      case Family::line: {
        const auto c = static_cast<std::uint32_t>(uniform_below(rng, cover.size()));
        const auto span = cover.clique(c);
        members.assign(span.begin(), span.end());
        break;
      }
      case Family::line_union: {
        const std::uint32_t hi = std::max(2U, root);
        const auto k = 2 + static_cast<std::uint32_t>(uniform_below(rng, hi - 1));
        for (std::uint32_t c : random_cliques(rng, k)) {
          const auto span = cover.clique(c);
          members.insert(members.end(), span.begin(), span.end());
        }
        break;
      }
      case Family::neighborhood: {
        const auto v = static_cast<std::uint32_t>(uniform_below(rng, n));
        const auto adj = g.neighbors(v);
        members.assign(adj.begin(), adj.end());
        if (members.empty()) members.push_back(v);
        break;
      }
      case Family::sign_class: {
        const std::uint32_t hi = std::max(1U, root);
        const auto k = 1 + static_cast<std::uint32_t>(uniform_below(rng, hi));
        for (std::uint32_t c : random_cliques(rng, k)) {
          const auto span = cover.clique(c);
          const auto z = signs.clique_signs(c);
          for (std::size_t j = 0; j < span.size(); ++j) {
            if (z[j] > 0) members.push_back(span[j]);
          }
        }
        if (members.empty()) members.push_back(static_cast<std::uint32_t>(uniform_below(rng, n)));
        break;
      }
    }
    finish(fam, std::move(members));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Jumbledness audit.

// Throws IdentityViolation unless 4 e_G = 2 e_G1 - Q, ||M||_F^2 = 2 e_G1 and
// ||M|| <= max_norm.
inline void check_identities(const SubsetStats& st, std::uint64_t max_norm) {
  const auto lhs = 4 * static_cast<std::int64_t>(st.e_g);
  const auto rhs = 2 * static_cast<std::int64_t>(st.e_g1) - st.q_form;
  if (lhs != rhs) {
    throw IdentityViolation("4 e_G = " + std::to_string(lhs) + " but 2 e_G1 - Q = " + std::to_string(rhs));
  }
  if (st.frobenius_sq != 2 * st.e_g1) {
    throw IdentityViolation("frobenius_sq = " + std::to_string(st.frobenius_sq) + " but 2 e_G1 = " +
                            std::to_string(2 * st.e_g1));
  }
  if (st.operator_norm > max_norm) {
    throw IdentityViolation("operator norm " + std::to_string(st.operator_norm) + " exceeds " +
                            std::to_string(max_norm));
  }
}

struct DiscrepancyRecord {
  Family family = Family::uniform;
  std::uint64_t size = 0;
  std::uint64_t e_g = 0;
  std::uint64_t e_g1 = 0;
  std::int64_t q_form = 0;
  double expected = 0.0;     // p C(size, 2)
  double discrepancy = 0.0;  // |e_G - expected| / size
  double ratio = 0.0;        // discrepancy / (q ln n)
};

struct FamilySummary {
  std::uint64_t count = 0;
  double max_discrepancy = 0.0;
  double max_ratio = 0.0;
};

struct DiscrepancyReport {
  std::uint32_t q = 0;
  std::uint64_t n = 0;
  Fraction p;
  double q_log_n = 0.0;
  std::vector<DiscrepancyRecord> records;
  double max_discrepancy = 0.0;  // sampled lower bound on beta
  double fitted_c = 0.0;         // max discrepancy / (q ln n)
  double max_mixing_ratio = 0.0;
  std::map<std::string, FamilySummary> families;
  // Counts of ratio in [i/20, (i+1)/20) for i < 20; the last bin is >= 1.
  std::array<std::uint64_t, 21> histogram{};
};

inline double expected_edges(const Fraction& p, std::uint64_t size) {
  const double pairs = static_cast<double>(size) * static_cast<double>(size > 0 ? size - 1 : 0) / 2.0;
  return static_cast<double>(p.num) * pairs / static_cast<double>(p.den);
}

// Audits |e_G(X) - p C(|X|,2)| over the samples with p = q/(2(q^2+1)) and
// natural log. Every sample is also held to the exact identities and to the
// mixing bound on G1.
inline DiscrepancyReport audit(const BaseGraph& base, const SignAssignment& signs, const SparseGraph& g,
                               std::span<const SubsetSample> samples, std::uint32_t q) {
  const TheoryParams params = theory_params(q);
  if (params.n != base.cover().n()) {
    throw std::invalid_argument("vertex count " + std::to_string(base.cover().n()) + " does not match q = " +
                                std::to_string(q));
  }
  if (g.metadata().q && *g.metadata().q != q) throw std::invalid_argument("graph metadata disagrees on q");
  DiscrepancyReport rep;
  rep.q = q;
  rep.n = params.n;
  rep.p = params.p_g;
  rep.q_log_n = params.beta_target_shape;
  SubsetAnalyzer analyzer(base, signs, g);
  rep.records.reserve(samples.size());
  for (const auto& sample : samples) {
    const SubsetStats st = analyzer.analyze(sample.members);
    check_identities(st, q);
    double mixing = 0.0;
    if (!mixing_bound_holds(q, st.size, st.e_g1, &mixing)) {
      throw TheoremViolation("mixing bound violated on audited subset of size " + std::to_string(st.size));
    }
    DiscrepancyRecord rec;
    rec.family = sample.family;
    rec.size = st.size;
    rec.e_g = st.e_g;
    rec.e_g1 = st.e_g1;
    rec.q_form = st.q_form;
    rec.expected = expected_edges(rep.p, st.size);
    rec.discrepancy = st.size == 0 ? 0.0 : std::abs(static_cast<double>(st.e_g) - rec.expected) / static_cast<double>(st.size);
    rec.ratio = rec.discrepancy / rep.q_log_n;

    rep.max_discrepancy = std::max(rep.max_discrepancy, rec.discrepancy);
    rep.fitted_c = std::max(rep.fitted_c, rec.ratio);
    rep.max_mixing_ratio = std::max(rep.max_mixing_ratio, mixing);
    auto& fam = rep.families[to_string(rec.family)];
    ++fam.count;
    fam.max_discrepancy = std::max(fam.max_discrepancy, rec.discrepancy);
    fam.max_ratio = std::max(fam.max_ratio, rec.ratio);
    const auto bin = static_cast<std::size_t>(std::min(20.0, std::floor(rec.ratio * 20.0)));
    ++rep.histogram[bin];
    rep.records.push_back(rec);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Quadratic form Q = Z^T M Z under fresh signs.

struct TailRow {
  double tau = 0.0;
  double exceed = 0.0;     // empirical P[|Q| > tau]
  double reference = 0.0;  // min(1, 2 exp(-min(tau^2/||M||_F^2, tau/||M||)))
};

struct HwTailTable {
  bool exhaustive = false;
  std::uint64_t trials = 0;
  std::uint64_t t_total = 0;
  std::uint64_t frobenius_sq = 0;
  std::uint64_t operator_norm = 0;
  double mean = 0.0;
  double variance = 0.0;
  double se_mean = 0.0;
  double se_variance = 0.0;
  std::vector<TailRow> rows;
  std::vector<std::pair<std::int64_t, double>> distribution;  // exhaustive only
};

struct HwOptions {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  std::vector<double> taus;  // empty: multiples of sqrt(2 ||M||_F^2) / 2
  // Enumerate every assignment when 2^t <= trials and t <= this.
  std::uint32_t exhaustive_limit = 12;
};

inline HwTailTable hw_monte_carlo(const CliqueCover& cover, std::span<const std::uint32_t> members,
                                  const HwOptions& opt = {}) {
  if (opt.trials == 0) throw std::invalid_argument("trials must be positive");
  // Slots of X grouped by clique.
  std::map<std::uint32_t, std::vector<std::uint32_t>> groups;
  for (std::uint32_t v : members) {
    if (v >= cover.n()) throw std::invalid_argument("vertex out of range");
    for (const auto& inc : cover.incidences(v)) groups[inc.clique].push_back(inc.slot);
  }
  HwTailTable table;
  std::vector<std::uint32_t> group_clique, group_begin{0};
  std::vector<std::uint32_t> slots;
  for (auto& [c, s] : groups) {
    const std::uint64_t t = s.size();
    table.t_total += t;
    table.frobenius_sq += t * (t - 1);
    table.operator_norm = std::max(table.operator_norm, t - 1);
    group_clique.push_back(c);
    slots.insert(slots.end(), s.begin(), s.end());
    group_begin.push_back(static_cast<std::uint32_t>(slots.size()));
  }

  std::vector<double> taus = opt.taus;
  if (taus.empty() && table.frobenius_sq > 0) {
    const double sd = std::sqrt(2.0 * static_cast<double>(table.frobenius_sq));
    for (int k = 1; k <= 12; ++k) taus.push_back(0.5 * k * sd);
  }
  std::vector<std::uint64_t> exceed(taus.size(), 0);
  double sum = 0.0, sum2 = 0.0;
  std::vector<double> values;

  auto record = [&](std::int64_t qv) {
    const double x = static_cast<double>(qv);
    sum += x;
    values.push_back(x);
    for (std::size_t i = 0; i < taus.size(); ++i) exceed[i] += std::abs(x) > taus[i];
  };

  const std::uint64_t t = table.t_total;
  table.exhaustive = t <= opt.exhaustive_limit && (std::uint64_t{1} << t) <= opt.trials;
  if (table.exhaustive) {
    std::map<std::int64_t, std::uint64_t> counts;
    const std::uint64_t total = std::uint64_t{1} << t;
    for (std::uint64_t bits = 0; bits < total; ++bits) {
      std::int64_t qv = 0;
      for (std::size_t gi = 0; gi + 1 < group_begin.size(); ++gi) {
        std::int64_t sigma = 0;
        for (std::uint32_t i = group_begin[gi]; i < group_begin[gi + 1]; ++i) sigma += (bits >> i) & 1U ? -1 : 1;
        qv += sigma * sigma - (group_begin[gi + 1] - group_begin[gi]);
      }
      ++counts[qv];
      record(qv);
    }
    for (const auto& [value, c] : counts) {
      table.distribution.emplace_back(value, static_cast<double>(c) / static_cast<double>(total));
    }
    table.trials = total;
  } else {
    for (std::uint64_t r = 0; r < opt.trials; ++r) {
      const std::uint64_t trial_seed = derive_seed(opt.seed, r);
      std::int64_t qv = 0;
      for (std::size_t gi = 0; gi + 1 < group_begin.size(); ++gi) {
        std::int64_t sigma = 0;
        for (std::uint32_t i = group_begin[gi]; i < group_begin[gi + 1]; ++i) {
          sigma += sign_of(trial_seed, group_clique[gi], slots[i]);
        }
        qv += sigma * sigma - (group_begin[gi + 1] - group_begin[gi]);
      }
      record(qv);
    }
    table.trials = opt.trials;
  }

  const auto count = static_cast<double>(table.trials);
  table.mean = sum / count;
  double m4 = 0.0;
  for (double x : values) {
    const double d = x - table.mean;
    sum2 += d * d;
    m4 += d * d * d * d;
  }
  // Exhaustive enumeration gives population moments; sampling the unbiased
  // variance.
  table.variance = table.exhaustive ? sum2 / count : sum2 / std::max(1.0, count - 1.0);
  m4 /= count;
  table.se_mean = std::sqrt(table.variance / count);
  table.se_variance = std::sqrt(std::max(0.0, m4 - table.variance * table.variance) / count);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    TailRow row;
    row.tau = taus[i];
    row.exceed = static_cast<double>(exceed[i]) / count;
    double shape = 0.0;
    if (table.frobenius_sq > 0 && table.operator_norm > 0) {
      shape = std::min(taus[i] * taus[i] / static_cast<double>(table.frobenius_sq),
                       taus[i] / static_cast<double>(table.operator_norm));
    }
    row.reference = std::min(1.0, 2.0 * std::exp(-shape));
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace pqg
