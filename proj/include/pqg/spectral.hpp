#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pqg/errors.hpp"
#include "pqg/random.hpp"
#include "pqg/sparse_graph.hpp"

namespace pqg {

// ---------------------------------------------------------------------------
// Dense symmetric eigensolver: Householder reduction to tridiagonal form, then
// implicit QL with Wilkinson shifts (Givens rotations).

namespace detail {

// Reduces the row-major symmetric matrix `a` (n x n) in place; returns the
// diagonal in `diag` and the subdiagonal in `off` (off[i] couples i, i+1;
// off[n-1] = 0). Eigenvectors are not accumulated.
inline void householder_tridiagonalize(std::vector<double>& a, std::size_t n, std::vector<double>& diag,
                                       std::vector<double>& off) {
  diag.assign(n, 0.0);
  off.assign(n, 0.0);
  std::vector<double> v(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t lo = k + 1;
    double norm = 0.0;
    for (std::size_t i = lo; i < n; ++i) norm += a[i * n + k] * a[i * n + k];
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const double x0 = a[lo * n + k];
    const double alpha = x0 > 0 ? -norm : norm;
    double vnorm = 0.0;
    for (std::size_t i = lo; i < n; ++i) {
      v[i] = a[i * n + k];
      if (i == lo) v[i] -= alpha;
      vnorm += v[i] * v[i];
    }
    vnorm = std::sqrt(vnorm);
    if (vnorm == 0.0) continue;
    for (std::size_t i = lo; i < n; ++i) v[i] /= vnorm;
    // p = A v over the trailing block; w = p - (v.p) v; A -= 2 v w^T + 2 w v^T.
    double vp = 0.0;
    for (std::size_t i = lo; i < n; ++i) {
      double s = 0.0;
      const double* row = &a[i * n];
      for (std::size_t j = lo; j < n; ++j) s += row[j] * v[j];
      p[i] = s;
      vp += v[i] * s;
    }
    for (std::size_t i = lo; i < n; ++i) p[i] -= vp * v[i];
    for (std::size_t i = lo; i < n; ++i) {
      double* row = &a[i * n];
      const double vi = v[i], wi = p[i];
      for (std::size_t j = lo; j < n; ++j) row[j] -= 2.0 * (vi * p[j] + wi * v[j]);
    }
    a[lo * n + k] = alpha;
    a[k * n + lo] = alpha;
    for (std::size_t i = lo + 1; i < n; ++i) {
      a[i * n + k] = 0.0;
      a[k * n + i] = 0.0;
    }
  }
  for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i];
  for (std::size_t i = 0; i + 1 < n; ++i) off[i] = a[(i + 1) * n + i];
}

// Implicit QL on a symmetric tridiagonal matrix. On return `diag` holds the
// eigenvalues (unsorted). If `vectors` is non-null it must hold an m x m
// row-major matrix (typically the identity) whose columns are rotated along.
inline void tridiagonal_ql(std::vector<double>& diag, std::vector<double>& off, std::vector<double>* vectors) {
  const auto n = static_cast<std::ptrdiff_t>(diag.size());
  if (n == 0) return;
  off.resize(static_cast<std::size_t>(n), 0.0);
  off[static_cast<std::size_t>(n - 1)] = 0.0;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  auto d = [&](std::ptrdiff_t i) -> double& { return diag[static_cast<std::size_t>(i)]; };
  auto e = [&](std::ptrdiff_t i) -> double& { return off[static_cast<std::size_t>(i)]; };
  // Also deflate against the matrix norm, or clusters of near-zero diagonal
  // entries never split.
  double norm = 0.0;
  for (std::ptrdiff_t i = 0; i < n; ++i) norm = std::max(norm, std::abs(d(i)) + std::abs(e(i)));
  const double floor = kEps * norm;
  for (std::ptrdiff_t l = 0; l < n; ++l) {
    int iterations = 0;
    std::ptrdiff_t m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d(m)) + std::abs(d(m + 1));
        if (std::abs(e(m)) <= kEps * dd || std::abs(e(m)) <= floor) break;
      }
      if (m == l) break;
      if (++iterations > 100) throw NoConvergence("tridiagonal QL did not converge");
      double g = (d(l + 1) - d(l)) / (2.0 * e(l));
      double r = std::hypot(g, 1.0);
      g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      std::ptrdiff_t i = m - 1;
      bool underflow = false;
      for (; i >= l; --i) {
        const double f = s * e(i);
        const double b = c * e(i);
        r = std::hypot(f, g);
        e(i + 1) = r;
        if (r == 0.0) {
          d(i + 1) -= p;
          e(m) = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d(i + 1) - p;
        r = (d(i) - g) * s + 2.0 * c * b;
        p = s * r;
        d(i + 1) = g + p;
        g = c * r - b;
        if (vectors != nullptr) {
          auto& z = *vectors;
          const auto stride = static_cast<std::size_t>(n);
          for (std::size_t k = 0; k < stride; ++k) {
            const double zf = z[k * stride + static_cast<std::size_t>(i + 1)];
            double& zi = z[k * stride + static_cast<std::size_t>(i)];
            z[k * stride + static_cast<std::size_t>(i + 1)] = s * zi + c * zf;
            zi = c * zi - s * zf;
          }
        }
      }
      if (underflow) continue;
      d(l) -= p;
      e(l) = g;
      e(m) = 0.0;
    } while (m != l);
  }
}

}  // namespace detail

// All eigenvalues of a dense symmetric matrix (row-major), descending.
inline std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n) {
  if (a.size() != n * n) throw std::invalid_argument("matrix size mismatch");
  std::vector<double> diag, off;
  detail::householder_tridiagonalize(a, n, diag, off);
  detail::tridiagonal_ql(diag, off, nullptr);
  std::sort(diag.begin(), diag.end(), std::greater<>());
  return diag;
}

// ---------------------------------------------------------------------------
// Graph kernels.

inline void adjacency_times(const SparseGraph& g, std::span<const double> x, std::span<double> y) {
  for (std::uint32_t v = 0; v < g.n(); ++v) {
    double s = 0.0;
    for (std::uint32_t u : g.neighbors(v)) s += x[u];
    y[v] = s;
  }
}

// Exact integer product A x.
inline std::vector<std::int64_t> adjacency_times(const SparseGraph& g, std::span<const std::int64_t> x) {
  std::vector<std::int64_t> y(g.n(), 0);
  for (std::uint32_t v = 0; v < g.n(); ++v) {
    for (std::uint32_t u : g.neighbors(v)) y[v] += x[u];
  }
  return y;
}

inline bool is_bipartite(const SparseGraph& g) {
  std::vector<std::int8_t> color(g.n(), -1);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t root = 0; root < g.n(); ++root) {
    if (color[root] >= 0) continue;
    color[root] = 0;
    queue.push_back(root);
    while (!queue.empty()) {
      const std::uint32_t u = queue.front();
      queue.pop_front();
      for (std::uint32_t w : g.neighbors(u)) {
        if (color[w] < 0) {
          color[w] = static_cast<std::int8_t>(1 - color[u]);
          queue.push_back(w);
        } else if (color[w] == color[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

enum class SpectralMethod : std::uint8_t { dense, lanczos };

inline const char* to_string(SpectralMethod m) noexcept { return m == SpectralMethod::dense ? "dense" : "lanczos"; }

struct SpectralReport {
  SpectralMethod method = SpectralMethod::dense;
  // Dense: full spectrum. Lanczos: the k largest then the k smallest Ritz
  // values. Descending either way.
  std::vector<double> eigenvalues;
  std::vector<double> residuals;  // Lanczos only, aligned with eigenvalues
  std::optional<std::uint32_t> d;
  bool bipartite = false;
  // Largest |eigenvalue| excluding the top one (and the bottom one for
  // bipartite graphs, whose spectrum is symmetric).
  double lambda = 0.0;
  // lambda plus the residual of the pair attaining it; equals lambda for dense.
  double lambda_upper = 0.0;
  std::uint64_t iterations = 0;
};

namespace detail {

inline void finish_lambda(SpectralReport& rep) {
  const auto& ev = rep.eigenvalues;
  if (ev.size() < 2) return;
  const std::size_t last = ev.size() - 1;
  const std::size_t hi = 1;
  const std::size_t lo = rep.bipartite && ev.size() > 2 ? last - 1 : last;
  double lam = 0.0, upper = 0.0;
  for (std::size_t i : {hi, lo}) {
    const double r = rep.residuals.empty() ? 0.0 : rep.residuals[i];
    if (std::abs(ev[i]) > lam) lam = std::abs(ev[i]);
    upper = std::max(upper, std::abs(ev[i]) + r);
  }
  // Dense spectra: everything strictly between the excluded ends counts.
  if (rep.method == SpectralMethod::dense) {
    for (std::size_t i = hi; i <= lo; ++i) lam = std::max(lam, std::abs(ev[i]));
    upper = lam;
  }
  rep.lambda = lam;
  rep.lambda_upper = upper;
}

}  // namespace detail

inline constexpr std::uint32_t kDenseLimit = 2000;

// Full adjacency spectrum; n <= 2000.
inline SpectralReport dense_spectrum(const SparseGraph& g) {
  const std::size_t n = g.n();
  if (n > kDenseLimit) throw SizeLimit("dense spectrum limited to n <= 2000, got " + std::to_string(n));
  std::vector<double> a(n * n, 0.0);
  for (std::uint32_t v = 0; v < n; ++v) {
    for (std::uint32_t u : g.neighbors(v)) a[std::size_t{v} * n + u] = 1.0;
  }
  SpectralReport rep;
  rep.method = SpectralMethod::dense;
  rep.eigenvalues = symmetric_eigenvalues(std::move(a), n);
  rep.d = g.regular_degree();
  rep.bipartite = is_bipartite(g);
  detail::finish_lambda(rep);
  return rep;
}

struct LanczosOptions {
  std::uint32_t k = 2;
  double tol = 1e-8;
  std::uint64_t max_iterations = 0;  // 0: 10 k sqrt(n)
  std::uint64_t seed = 0x5EED;
  // Keep extending the basis (restarting after invariant subspaces) until it
  // has at least this many vectors, so repeated eigenvalues show up with
  // their multiplicity among the extremes. 0: max(4k, 24).
  std::uint32_t min_basis = 0;
};

// k largest and k smallest eigenvalues by Lanczos with full
// reorthogonalization. Residuals are recomputed explicitly as
// ||A y - theta y|| / ||y|| for every returned pair.
inline SpectralReport extreme_eigs(const SparseGraph& g, const LanczosOptions& opt = {}) {
  const std::size_t n = g.n();
  if (opt.k == 0 || opt.k > 8) throw std::invalid_argument("k must lie in 1..8");
  if (n == 0) throw std::invalid_argument("empty graph");
  const std::uint64_t cap =
      opt.max_iterations != 0 ? opt.max_iterations
                              : static_cast<std::uint64_t>(std::ceil(10.0 * opt.k * std::sqrt(static_cast<double>(n))));
  const std::size_t max_basis = std::min<std::uint64_t>(n, std::max<std::uint64_t>(cap, 2 * opt.k));
  const std::size_t min_basis = std::min<std::size_t>(n, opt.min_basis != 0 ? opt.min_basis : std::max(4U * opt.k, 24U));
  double scale = 0.0;
  for (std::uint32_t v = 0; v < n; ++v) scale = std::max(scale, static_cast<double>(g.degree(v)));
  scale = std::max(scale, 1.0);

  Rng rng(opt.seed);
  auto random_vector = [&] {
    std::vector<double> x(n);
    for (auto& xi : x) xi = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    return x;
  };
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;  // beta[j] couples basis j and j+1
  auto orthogonalize = [&](std::vector<double>& w) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const double c = std::inner_product(w.begin(), w.end(), b.begin(), 0.0);
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * b[i];
      }
    }
    return std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
  };
  // Appends a fresh direction orthogonal to the basis; false if none exists.
  auto restart = [&] {
    for (int attempt = 0; attempt < 4; ++attempt) {
      auto x = random_vector();
      const double norm = orthogonalize(x);
      if (norm > 1e-8 * std::sqrt(static_cast<double>(n))) {
        for (auto& xi : x) xi /= norm;
        basis.push_back(std::move(x));
        return true;
      }
    }
    return false;
  };

  struct Ritz {
    double value;
    std::vector<double> coeffs;
  };
  auto ritz_pairs = [&] {
    const std::size_t m = alpha.size();
    std::vector<double> d(alpha), e(beta.begin(), beta.begin() + static_cast<std::ptrdiff_t>(m - 1));
    e.push_back(0.0);
    std::vector<double> z(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) z[i * m + i] = 1.0;
    detail::tridiagonal_ql(d, e, &z);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
    std::vector<Ritz> out;
    for (std::size_t idx : order) {
      Ritz r{d[idx], std::vector<double>(m)};
      for (std::size_t i = 0; i < m; ++i) r.coeffs[i] = z[i * m + idx];
      out.push_back(std::move(r));
    }
    return out;
  };
  auto selected = [&](std::size_t m) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < std::min<std::size_t>(opt.k, m); ++i) idx.push_back(i);
    for (std::size_t i = m > opt.k ? std::max<std::size_t>(m - opt.k, opt.k) : m; i < m; ++i) idx.push_back(i);
    return idx;
  };
  std::vector<double> y(n), ay(n);
  auto residual = [&](const Ritz& r) {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t j = 0; j < r.coeffs.size(); ++j) {
      const double c = r.coeffs[j];
      if (c == 0.0) continue;
      const auto& b = basis[j];
      for (std::size_t i = 0; i < n; ++i) y[i] += c * b[i];
    }
    adjacency_times(g, y, ay);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = ay[i] - r.value * y[i];
      num += diff * diff;
      den += y[i] * y[i];
    }
    return std::sqrt(num / den);
  };

  restart();
  std::vector<double> w(n);
  std::uint64_t iterations = 0;
  while (true) {
    const std::size_t j = basis.size() - 1;
    adjacency_times(g, basis[j], w);
    ++iterations;
    const double a = std::inner_product(w.begin(), w.end(), basis[j].begin(), 0.0);
    alpha.push_back(a);
    const double b = orthogonalize(w);
    const bool invariant = b <= 1e-10 * scale;
    const std::size_t m = alpha.size();

    bool check = invariant || m == max_basis || m % 8 == 0;
    if (check && m >= std::min<std::size_t>(min_basis, n) && m >= std::min<std::size_t>(2 * opt.k, n)) {
      // Cheap estimate |b * last coefficient| first, explicit residuals after.
      auto pairs = ritz_pairs();
      const auto idx = selected(m);
      bool converged = true;
      for (std::size_t i : idx) {
        const double est = invariant ? 0.0 : std::abs(b * pairs[i].coeffs[m - 1]);
        if (est > opt.tol) converged = false;
      }
      if (converged) {
        SpectralReport rep;
        rep.method = SpectralMethod::lanczos;
        bool all_ok = true;
        for (std::size_t i : idx) {
          const double r = residual(pairs[i]);
          rep.eigenvalues.push_back(pairs[i].value);
          rep.residuals.push_back(r);
          all_ok = all_ok && r <= opt.tol;
        }
        if (all_ok) {
          rep.d = g.regular_degree();
          rep.bipartite = is_bipartite(g);
          rep.iterations = iterations;
          detail::finish_lambda(rep);
          return rep;
        }
      }
    }
    if (m >= max_basis || iterations >= cap) {
      throw NoConvergence("Lanczos did not converge within " + std::to_string(cap) + " iterations");
    }
    if (invariant) {
      beta.push_back(0.0);
      if (!restart()) throw NoConvergence("Lanczos basis exhausted before convergence");
    } else {
      beta.push_back(b);
      for (auto& wi : w) wi /= b;
      basis.push_back(w);
    }
  }
}

// Dense when n <= 2000, Lanczos otherwise.
inline SpectralReport spectrum(const SparseGraph& g, const LanczosOptions& opt = {}) {
  return g.n() <= kDenseLimit ? dense_spectrum(g) : extreme_eigs(g, opt);
}

struct NdlVerdict {
  bool pass = false;
  bool regular = false;
  double lambda = 0.0;
  SpectralMethod method = SpectralMethod::dense;
  std::string detail;
};

// Checks exact d-regularity (degrees and the integer product A·1 = d·1) and
// that every non-principal eigenvalue satisfies |lambda| <= bound + tol.
inline NdlVerdict verify_ndl(const SparseGraph& g, std::uint32_t d, double bound, double tol = 1e-6,
                             const LanczosOptions& opt = {}) {
  NdlVerdict verdict;
  const std::vector<std::int64_t> ones(g.n(), 1);
  const auto product = adjacency_times(g, ones);
  verdict.regular = g.regular_degree() == d &&
                    std::all_of(product.begin(), product.end(), [d](std::int64_t x) { return x == d; });
  if (!verdict.regular) {
    verdict.detail = "graph is not " + std::to_string(d) + "-regular";
    return verdict;
  }
  LanczosOptions lanczos = opt;
  lanczos.k = std::max<std::uint32_t>(lanczos.k, 2);
  const SpectralReport rep = spectrum(g, lanczos);
  verdict.method = rep.method;
  verdict.lambda = rep.method == SpectralMethod::dense ? rep.lambda : rep.lambda_upper;
  if (std::abs(rep.eigenvalues.front() - d) > tol) {
    verdict.detail = "principal eigenvalue differs from d";
    return verdict;
  }
  verdict.pass = verdict.lambda <= bound + tol;
  if (!verdict.pass) verdict.detail = "non-principal eigenvalue exceeds bound";
  return verdict;
}

// Expander-mixing inequality for the base graph with d = q(q+1), lambda = q+1:
//   |e(X) - q/(q^2+1) C(|X|,2)| <= (q+1)|X|,
// checked in exact integer arithmetic after scaling by q^2 + 1.
struct MixingReport {
  std::uint64_t checked = 0;
  double max_ratio = 0.0;  // max |deviation| / ((q+1)|X|)
  std::uint64_t worst_index = 0;
};

inline bool mixing_bound_holds(std::uint64_t q, std::uint64_t size, std::uint64_t edges, double* ratio = nullptr) {
  const __int128 q2 = static_cast<__int128>(q) * q + 1;
  const __int128 pairs = static_cast<__int128>(size) * (size > 0 ? size - 1 : 0) / 2;
  __int128 dev = q2 * static_cast<__int128>(edges) - static_cast<__int128>(q) * pairs;
  if (dev < 0) dev = -dev;
  const __int128 bound = static_cast<__int128>(q + 1) * size * q2;
  if (ratio != nullptr) *ratio = bound == 0 ? 0.0 : static_cast<double>(dev) / static_cast<double>(bound);
  return dev <= bound;
}

inline MixingReport mixing_check(const SparseGraph& g1, std::uint32_t q,
                                 std::span<const std::vector<std::uint32_t>> samples) {
  MixingReport rep;
  std::vector<std::uint8_t> mask(g1.n(), 0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& x = samples[i];
    for (std::uint32_t v : x) mask[v] = 1;
    const std::uint64_t e = g1.edges_within(x, mask);
    for (std::uint32_t v : x) mask[v] = 0;
    double ratio = 0.0;
    if (!mixing_bound_holds(q, x.size(), e, &ratio)) {
      throw TheoremViolation("expander mixing bound violated on sample " + std::to_string(i) + " (|X| = " +
                             std::to_string(x.size()) + ", e = " + std::to_string(e) + ")");
    }
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.worst_index = i;
    }
    ++rep.checked;
  }
  return rep;
}

}  // namespace pqg
