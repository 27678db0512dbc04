#pragma once

#include <cstdio>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "two_tasep.hpp"
#include "vertex.hpp"

namespace masep {

// Numerical witnesses for the algebraic facts behind the two-species formulas.

using IdentityReport = CheckReport;

inline constexpr double identity_threshold = 1e-10;

/// Relative error with max(1, |rhs|) in the denominator.
inline double rel_error(cplx lhs, cplx rhs) { return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)); }

/// Uniform points on the annulus r_lo <= |z| <= r_hi, kept at least `margin` away from
/// the listed poles and from each other.
class AnnulusSampler {
 public:
  AnnulusSampler(std::uint64_t seed, double r_lo, double r_hi, double margin = 0.05)
      : rng_(seed), lo_(r_lo), hi_(r_hi), margin_(margin) {
    require(0.0 <= r_lo && r_lo < r_hi, "empty annulus");
  }

  std::vector<cplx> draw(int count, std::vector<cplx> avoid = {}) {
    std::uniform_real_distribution<double> rr(lo_ * lo_, hi_ * hi_), th(0.0, 2.0 * std::acos(-1.0));
    std::vector<cplx> out;
    for (int tries = 0; static_cast<int>(out.size()) < count; ++tries) {
      if (tries > 100000) throw ConfigurationError("annulus too crowded for the requested points");
      cplx z = std::polar(std::sqrt(rr(rng_)), th(rng_));
      bool ok = true;
      for (auto a : avoid) ok = ok && std::abs(z - a) >= margin_;
      if (!ok) continue;
      out.push_back(z);
      avoid.push_back(z);
    }
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  double lo_, hi_, margin_;
};

// ---------------------------------------------------------------- eigenfunction checks

struct FreeEvolutionResult {
  double error_h = 0.0;
  double error_half = 0.0;
  double error_extrapolated = 0.0;
  double ratio() const { return error_half > 0.0 ? error_h / error_half : 0.0; }
};

/// Central difference of P in t against sum_i P(nu - e_i) - n P, at steps h and h/2, and
/// their Richardson combination (4 D(h/2) - D(h)) / 3.
inline FreeEvolutionResult free_evolution_errors(const std::vector<std::int64_t>& nu, const std::vector<int>& p,
                                                 double t, std::span<const cplx> z, std::span<const cplx> u,
                                                 double h) {
  const int n = static_cast<int>(nu.size());
  cplx rhs = -double(n) * eigenfunction_P(nu, p, t, z, u);
  for (int i = 0; i < n; ++i) {
    auto shifted = nu;
    --shifted[i];
    rhs += eigenfunction_P(shifted, p, t, z, u);
  }
  auto fd = [&](double step) {
    return (eigenfunction_P(nu, p, t + step, z, u) - eigenfunction_P(nu, p, t - step, z, u)) / (2.0 * step);
  };
  cplx d1 = fd(h), d2 = fd(h / 2);
  return {rel_error(d1, rhs), rel_error(d2, rhs), rel_error((4.0 * d2 - d1) / 3.0, rhs)};
}

/// Free evolution at `samples` random spectral points. Passes when the extrapolated
/// derivative matches and every raw error above round-off shrinks by about 4 when h halves.
inline IdentityReport check_free_evolution(const std::vector<std::int64_t>& nu, const std::vector<int>& p, double t,
                                           double h = 1e-4, int samples = 100, std::uint64_t seed = 11) {
  for (std::size_t i = 1; i < nu.size(); ++i) require(nu[i] - nu[i - 1] >= 2, "positions must be separated by 2");
  IdentityReport r{"free evolution", samples, 0.0, 1e-8, false, ""};
  AnnulusSampler zs(seed, 0.3, 0.9), us(seed + 1, 0.3, 0.9);
  double raw = 0.0, lo = 1e300, hi = 0.0;
  bool order_ok = true;
  for (int k = 0; k < samples; ++k) {
    auto z = zs.draw(static_cast<int>(nu.size()), {1.0});
    auto u = us.draw(static_cast<int>(p.size()), z);
    auto e = free_evolution_errors(nu, p, t, z, u, h);
    r.max_error = std::max(r.max_error, e.error_extrapolated);
    raw = std::max(raw, e.error_h);
    if (e.error_h > 1e-10) {
      lo = std::min(lo, e.ratio());
      hi = std::max(hi, e.ratio());
      order_ok = order_ok && e.ratio() > 3.0 && e.ratio() < 5.0;
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "raw error at h %.3e, h : h/2 ratios in [%.3f, %.3f]", raw, lo, hi);
  r.detail = buf;
  r = finish_report(r);
  r.pass = r.pass && order_ok;
  return r;
}

enum class BoundaryCase { exclusion = 1, overtaking = 2, same_type = 3 };

/// Residual of a boundary relation at the pair (l, l+1), 1-based, with nu_{l+1} = nu_l.
inline cplx boundary_residual(const std::vector<std::int64_t>& nu, const std::vector<int>& p, int l, BoundaryCase c,
                              std::span<const cplx> z, std::span<const cplx> u, double t, cplx* scale = nullptr) {
  const int n = static_cast<int>(nu.size());
  require(l >= 1 && l < n, "pair index out of range");
  require(nu[l] == nu[l - 1], "the pair must coincide: nu_{l+1} = nu_l");
  auto in_p = [&](int i) { return std::find(p.begin(), p.end(), i) != p.end(); };
  bool a = in_p(l), b = in_p(l + 1);
  BoundaryCase expected = (a && !b) ? BoundaryCase::exclusion
                          : (!a && b) ? BoundaryCase::overtaking
                                      : BoundaryCase::same_type;
  if (c != expected) throw ValidationError("boundary case does not match the type pattern at the pair");
  auto bumped = nu;
  ++bumped[l];
  cplx lhs = eigenfunction_P(nu, p, t, z, u), rhs(0.0);
  if (c == BoundaryCase::overtaking) {
    auto q = p;
    for (auto& x : q)
      if (x == l + 1) x = l;
    rhs = eigenfunction_P(bumped, q, t, z, u) + eigenfunction_P(bumped, p, t, z, u);
  } else if (c == BoundaryCase::same_type) {
    rhs = eigenfunction_P(bumped, p, t, z, u);
  }
  if (scale) *scale = rhs;
  return lhs - rhs;
}

inline IdentityReport check_boundary_conditions(const std::vector<std::int64_t>& nu, const std::vector<int>& p, int l,
                                                BoundaryCase c, int samples = 100, std::uint64_t seed = 12) {
  IdentityReport r{"boundary condition " + std::to_string(static_cast<int>(c)), samples, 0.0, identity_threshold,
                   false, ""};
  AnnulusSampler zs(seed, 0.3, 0.9), us(seed + 1, 0.3, 0.9);
  for (int k = 0; k < samples; ++k) {
    auto z = zs.draw(static_cast<int>(nu.size()), {1.0});
    auto u = us.draw(static_cast<int>(p.size()), z);
    cplx rhs;
    cplx res = boundary_residual(nu, p, l, c, z, u, 0.3, &rhs);
    r.max_error = std::max(r.max_error, std::abs(res) / std::max(1.0, std::abs(rhs)));
  }
  return finish_report(r);
}

// ---------------------------------------------------------------- u factorization

/// Both sides of the factorization of the u-dependence when p_j = n - m + j.
inline std::pair<cplx, cplx> u_factorization_sides(std::span<const cplx> z, std::span<const cplx> u,
                                                   const std::vector<int>& pi) {
  const int n = static_cast<int>(z.size()), m = static_cast<int>(u.size());
  require(static_cast<int>(pi.size()) == n, "permutation size");
  const auto& SG = permutations_cached(m);
  KahanSum<cplx> lhs;
  for (std::size_t b = 0; b < SG.perms.size(); ++b) {
    const auto& sg = SG.perms[b];
    cplx c(double(SG.signs[b]));
    for (int i = 0; i < m; ++i) {
      c *= ipow((1.0 - u[i]) / (1.0 - u[sg[i]]), i + 1);
      for (int j = 0; j + 1 < n - m + i + 1; ++j) c *= u[sg[i]] - z[pi[j]];
    }
    lhs.add(c);
  }
  cplx rhs(1.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n - m; ++j) rhs *= u[i] - z[pi[j]];
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) rhs *= u[i] - u[j];
  for (int i = 0; i < m; ++i) rhs /= ipow(1.0 - u[i], m - 1 - i);
  for (int i = 0; i + 1 < m; ++i) rhs *= ipow(z[pi[n - m + i]] - 1.0, m - 1 - i);
  return {lhs.value(), rhs};
}

inline IdentityReport check_u_factorization(int n, int m, int samples = 100, std::uint64_t seed = 13) {
  require(m >= 1 && m <= n, "need 1 <= m <= n");
  IdentityReport r{"u factorization", samples, 0.0, identity_threshold, false, ""};
  AnnulusSampler zs(seed, 0.3, 0.9);
  const auto& PI = permutations_cached(n);
  for (int k = 0; k < samples; ++k) {
    auto z = zs.draw(n, {1.0});
    auto u = zs.draw(m, z);
    const auto& pi = PI.perms[static_cast<std::size_t>(k) % PI.perms.size()];
    auto [lhs, rhs] = u_factorization_sides(z, u, pi);
    r.max_error = std::max(r.max_error, rel_error(lhs, rhs));
  }
  return finish_report(r);
}

// ---------------------------------------------------------------- removable poles

/// After the residues u_i = z_i (i <= l) are taken, the contour integral of the u-part of the
/// Green integrand in u_k around z_l (k > l, 1-based) vanishes. only_sigma isolates one term.
inline cplx removable_pole_residue(int n, int m, int l, int k, std::span<const cplx> z, std::span<const cplx> u,
                                   double radius, int only_sigma = -1) {
  require(m >= 2 && m <= n && l >= 1 && l < k && k <= m, "need 1 <= l < k <= m <= n");
  std::vector<std::int64_t> nu(n);
  for (int i = 0; i < n; ++i) nu[i] = i;
  std::vector<int> p(m);
  for (int i = 0; i < m; ++i) p[i] = n - m + i + 1;
  std::vector<Contour> cs;
  for (int i = 0; i < l; ++i) cs.push_back({z[i], radius, +1});
  cs.push_back({z[l - 1], 0.7 * radius, +1});
  auto f = [&](std::span<const cplx> x) {
    std::vector<cplx> uu(u.begin(), u.end());
    for (int i = 0; i < l; ++i) uu[i] = x[i];
    uu[k - 1] = x[l];
    cplx v = eigenfunction_P(nu, p, 0.5, z, uu, only_sigma);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= i; ++j) v /= uu[i] - z[j];
    return v;
  };
  QuadratureOptions opt;
  opt.tol = 1e-13;
  return product_integrate(f, cs, opt).value;
}

inline IdentityReport check_removable_poles(int n, int m, double radius = 0.02, int samples = 100,
                                            std::uint64_t seed = 14) {
  IdentityReport r{"removable poles", 0, 0.0, identity_threshold, false, ""};
  AnnulusSampler zs(seed, 0.3, 0.9, 0.15);
  for (int s = 0; s < samples; ++s) {
    auto z = zs.draw(n, {1.0});
    auto u = zs.draw(m, z);
    for (int l = 1; l < m; ++l)
      for (int k = l + 1; k <= m; ++k) {
        r.max_error = std::max(r.max_error, std::abs(removable_pole_residue(n, m, l, k, z, u, radius)));
        ++r.cases;
      }
  }
  return finish_report(r);
}

// ---------------------------------------------------------------- nested sums

namespace detail {

// sum over s2 <= nu_1 < ... < nu_m <= s2 + K of prod z_i^{nu_i}
inline cplx nested_sum_truncated(std::span<const cplx> z, std::int64_t s2, int K) {
  const int m = static_cast<int>(z.size());
  std::vector<cplx> row(K + 1, 0.0);
  for (int x = 0; x <= K; ++x) row[x] = ipow(z[0], s2 + x);
  for (int i = 1; i < m; ++i) {
    std::vector<cplx> next(K + 1, 0.0);
    cplx prefix(0.0);
    for (int x = 0; x <= K; ++x) {
      next[x] = prefix * ipow(z[i], s2 + x);
      prefix += row[x];
    }
    row = std::move(next);
  }
  cplx total(0.0);
  for (auto v : row) total += v;
  return total;
}

inline cplx nested_sum_closed(std::span<const cplx> z, std::int64_t s2) {
  const int m = static_cast<int>(z.size());
  cplx v(1.0);
  for (int i = 0; i < m; ++i) {
    cplx tail(1.0);
    for (int j = i; j < m; ++j) tail *= z[j];
    v *= ipow(z[i], s2 + i) / (1.0 - tail);
  }
  return v;
}

// sum over -K <= mu_1 < ... < mu_m < 0 of c^{-mu_1} prod z_i^{-mu_i}
inline cplx bernoulli_sum_truncated(std::span<const cplx> z, double c, int K) {
  const int m = static_cast<int>(z.size());
  // index x = -mu in 1..K; mu increasing means x decreasing
  std::vector<cplx> row(K + 1, 0.0);
  for (int x = 1; x <= K; ++x) row[x] = ipow(c * z[0], x);
  for (int i = 1; i < m; ++i) {
    std::vector<cplx> next(K + 1, 0.0);
    cplx suffix(0.0);
    for (int x = K; x >= 1; --x) {
      next[x] = suffix * ipow(z[i], x);
      suffix += row[x];
    }
    row = std::move(next);
  }
  cplx total(0.0);
  for (auto v : row) total += v;
  return total;
}

inline cplx bernoulli_sum_closed(std::span<const cplx> z, double c) {
  const int m = static_cast<int>(z.size());
  cplx v = ipow(cplx(c), m), head(1.0);
  for (int i = 0; i < m; ++i) {
    head *= z[i];
    v *= ipow(z[i], m - i) / (1.0 - c * head);
  }
  return v;
}

}  // namespace detail

struct NestedSumCheck {
  cplx truncated;
  cplx closed;
  double tail_bound = 0.0;
  bool pass() const { return std::abs(truncated - closed) <= tail_bound + 1e-12 * std::max(1.0, std::abs(closed)); }
};

/// Nested geometric series against its product form. All terms of the |z| series are
/// positive, so its closed-form remainder bounds the truncation error.
inline NestedSumCheck nested_geometric(std::span<const cplx> z, std::int64_t s2, int K) {
  cplx acc(1.0);
  for (std::size_t i = z.size(); i-- > 0;) {
    acc *= z[i];
    require(std::abs(acc) < 1.0, "nested series diverges: a tail product has modulus >= 1");
  }
  std::vector<cplx> az;
  for (auto x : z) az.push_back(std::abs(x));
  double bound = std::abs(detail::nested_sum_closed(az, s2) - detail::nested_sum_truncated(az, s2, K));
  return {detail::nested_sum_truncated(z, s2, K), detail::nested_sum_closed(z, s2), bound};
}

/// Same for the sum over Bernoulli initial positions with weight (1 - rho)^{-mu_1}.
inline NestedSumCheck nested_geometric_bernoulli(std::span<const cplx> z, double rho, int K) {
  require(rho > 0.0 && rho <= 1.0, "rho must lie in (0, 1]");
  const double c = 1.0 - rho;
  cplx acc(1.0);
  for (auto x : z) {
    acc *= x;
    require(std::abs(c * acc) < 1.0, "Bernoulli series diverges");
  }
  std::vector<cplx> az;
  for (auto x : z) az.push_back(std::abs(x));
  double bound = std::abs(detail::bernoulli_sum_closed(az, c) - detail::bernoulli_sum_truncated(az, c, K));
  return {detail::bernoulli_sum_truncated(z, c, K), detail::bernoulli_sum_closed(z, c), bound};
}

inline IdentityReport check_nested_geometric(int m, std::int64_t s2 = 1, double rho = 0.0, int K = 400,
                                             int samples = 100, std::uint64_t seed = 15) {
  IdentityReport r{rho > 0.0 ? "nested geometric (Bernoulli)" : "nested geometric", samples, 0.0,
                   identity_threshold, false, ""};
  AnnulusSampler zs(seed, 0.1, 0.7);
  double worst_tail = 0.0;
  for (int k = 0; k < samples; ++k) {
    auto z = zs.draw(m);
    auto c = rho > 0.0 ? nested_geometric_bernoulli(z, rho, K) : nested_geometric(z, s2, K);
    double err = std::max(0.0, std::abs(c.truncated - c.closed) - c.tail_bound) / std::max(1.0, std::abs(c.closed));
    r.max_error = std::max(r.max_error, err);
    worst_tail = std::max(worst_tail, c.tail_bound);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "largest tail bound %.3e", worst_tail);
  r.detail = buf;
  return finish_report(r);
}

// ---------------------------------------------------------------- symmetrization

/// sum_sigma sgn prod_i z_{s_i}^{i-1} (1 - z_{s_i})^{m-i+1} / (1 - prod_{j>=i} z_{s_j}) vs the Vandermonde.
/// `exponent_shift` perturbs the power of z for negative controls.
inline std::pair<cplx, cplx> symmetrization_sides(std::span<const cplx> z, int exponent_shift = 0) {
  const int m = static_cast<int>(z.size());
  const auto& SG = permutations_cached(m);
  KahanSum<cplx> lhs;
  for (std::size_t b = 0; b < SG.perms.size(); ++b) {
    const auto& s = SG.perms[b];
    cplx v(double(SG.signs[b]));
    for (int i = 0; i < m; ++i) {
      cplx tail(1.0);
      for (int j = i; j < m; ++j) tail *= z[s[j]];
      v *= ipow(z[s[i]], i + exponent_shift) * ipow(1.0 - z[s[i]], m - i) / (1.0 - tail);
    }
    lhs.add(v);
  }
  cplx rhs(1.0);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) rhs *= z[j] - z[i];
  return {lhs.value(), rhs};
}

/// The same identity in the form used for the crossing sums, with z^{s2} and (z - 1)^{-m-1}.
inline std::pair<cplx, cplx> symmetrization_crossing_sides(std::span<const cplx> z, std::int64_t s2) {
  const int m = static_cast<int>(z.size());
  const auto& SG = permutations_cached(m);
  KahanSum<cplx> lhs;
  for (std::size_t b = 0; b < SG.perms.size(); ++b) {
    const auto& s = SG.perms[b];
    cplx v(double(SG.signs[b]));
    for (int i = 0; i < m; ++i) {
      cplx tail(1.0);
      for (int j = i; j < m; ++j) tail *= z[s[j]];
      v *= ipow(z[s[i]], s2 + i) / (ipow(1.0 - z[s[i]], i + 1) * (1.0 - tail));
    }
    lhs.add(v);
  }
  cplx rhs(1.0);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) rhs *= z[j] - z[i];
  for (int i = 0; i < m; ++i) rhs *= ipow(z[i], s2) / ipow(z[i] - 1.0, m + 1);
  return {lhs.value(), rhs};
}

/// Bernoulli variant: sum_sigma sgn prod_i ((1 - z_{s_i})/z_{s_i})^i / (1 - c prod_{j<=i} z_{s_j}).
inline std::pair<cplx, cplx> symmetrization_bernoulli_sides(std::span<const cplx> z, double rho) {
  const int m = static_cast<int>(z.size());
  const double c = 1.0 - rho;
  const auto& SG = permutations_cached(m);
  KahanSum<cplx> lhs;
  for (std::size_t b = 0; b < SG.perms.size(); ++b) {
    const auto& s = SG.perms[b];
    cplx v(double(SG.signs[b])), head(1.0);
    for (int i = 0; i < m; ++i) {
      head *= z[s[i]];
      v *= ipow((1.0 - z[s[i]]) / z[s[i]], i + 1) / (1.0 - c * head);
    }
    lhs.add(v);
  }
  cplx rhs(1.0);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) rhs *= z[i] - z[j];
  for (int i = 0; i < m; ++i) rhs *= (1.0 - z[i]) / (ipow(z[i], m) * (1.0 - c * z[i]));
  return {lhs.value(), rhs};
}

enum class SymmetrizationForm { vandermonde, crossing, bernoulli };

inline IdentityReport check_symmetrization(int m, SymmetrizationForm form = SymmetrizationForm::vandermonde,
                                           double rho = 0.3, int samples = 100, std::uint64_t seed = 16) {
  const char* names[] = {"symmetrization", "symmetrization (crossing form)", "symmetrization (Bernoulli)"};
  IdentityReport r{names[static_cast<int>(form)], samples, 0.0, identity_threshold, false, ""};
  AnnulusSampler zs(seed, 0.2, 0.7);
  for (int k = 0; k < samples; ++k) {
    auto z = zs.draw(m, {1.0, 1.0 / (1.0 - rho)});
    std::pair<cplx, cplx> sides;
    switch (form) {
      case SymmetrizationForm::vandermonde: sides = symmetrization_sides(z); break;
      case SymmetrizationForm::crossing: sides = symmetrization_crossing_sides(z, 2); break;
      case SymmetrizationForm::bernoulli: sides = symmetrization_bernoulli_sides(z, rho); break;
    }
    r.max_error = std::max(r.max_error, rel_error(sides.first, sides.second));
  }
  return finish_report(r);
}

// ---------------------------------------------------------------- initial condition

/// Green function at t = 0 over every (nu, p) with positions in a window around mu.
inline IdentityReport check_initial_condition(const ParticleConfig& initial, std::int64_t pad = 1,
                                              const EvalOptions& opt = {}) {
  IdentityReport r{"initial condition", 0, 0.0, 1e-8, false, ""};
  const int n = initial.size();
  const int m = static_cast<int>(initial.type2_indices().size());
  std::int64_t lo = initial.positions().front() - pad, hi = initial.positions().back() + pad;
  require(hi - lo + 1 <= 16, "window too wide for the initial-condition sweep");
  std::vector<int> sites(n);
  std::iota(sites.begin(), sites.end(), 0);
  const int W = static_cast<int>(hi - lo + 1);
  while (true) {
    std::vector<std::int64_t> pos;
    for (int s : sites) pos.push_back(lo + s);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != m) continue;
      std::vector<int> p;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) p.push_back(i + 1);
      auto fin = ParticleConfig::two_species(pos, p);
      double expected = fin == initial ? 1.0 : 0.0;
      r.max_error = std::max(r.max_error, std::abs(two_tasep_green(initial, fin, 0.0, opt).value - expected));
      ++r.cases;
    }
    int k = n - 1;
    while (k >= 0 && sites[k] == W - n + k) --k;
    if (k < 0) break;
    ++sites[k];
    for (int j = k + 1; j < n; ++j) sites[j] = sites[j - 1] + 1;
  }
  return finish_report(r);
}

// ---------------------------------------------------------------- suite

/// Every identity check at default sampling.
inline std::vector<IdentityReport> identity_suite() {
  std::vector<IdentityReport> out;
  out.push_back(check_free_evolution({0, 2}, {1}, 0.7));
  out.push_back(check_free_evolution({-1, 1, 4}, {2, 3}, 0.4));
  out.push_back(check_boundary_conditions({1, 1}, {1}, 1, BoundaryCase::exclusion));
  out.push_back(check_boundary_conditions({1, 1}, {2}, 1, BoundaryCase::overtaking));
  out.push_back(check_boundary_conditions({0, 2, 2}, {1, 3}, 2, BoundaryCase::overtaking));
  out.push_back(check_boundary_conditions({1, 1, 3}, {3}, 1, BoundaryCase::same_type));
  out.push_back(check_boundary_conditions({0, 2, 2}, {2, 3}, 2, BoundaryCase::same_type));
  out.push_back(check_u_factorization(3, 2));
  out.push_back(check_u_factorization(4, 3));
  out.push_back(check_removable_poles(3, 2, 0.02, 20));
  out.push_back(check_removable_poles(3, 3, 0.02, 10));
  out.push_back(check_nested_geometric(1, 0));
  out.push_back(check_nested_geometric(2, 1));
  out.push_back(check_nested_geometric(3, -2));
  out.push_back(check_nested_geometric(2, 0, 0.3));
  out.push_back(check_symmetrization(1));
  out.push_back(check_symmetrization(2));
  out.push_back(check_symmetrization(3));
  out.push_back(check_symmetrization(3, SymmetrizationForm::crossing));
  out.push_back(check_symmetrization(2, SymmetrizationForm::bernoulli, 0.3));
  out.push_back(check_symmetrization(3, SymmetrizationForm::bernoulli, 0.6));
  out.push_back(check_initial_condition(ParticleConfig::two_species({0, 1}, {1})));
  out.push_back(check_initial_condition(ParticleConfig::two_species({0, 2}, {2})));
  return out;
}

/// Checks built to fail: a single inner-sum term keeps its pole, and a shifted exponent
/// breaks the symmetrization.
inline std::vector<IdentityReport> identity_negative_controls(std::uint64_t seed = 17) {
  std::vector<IdentityReport> out;
  AnnulusSampler zs(seed, 0.3, 0.9, 0.15);
  auto z = zs.draw(3, {1.0});
  auto u = zs.draw(2, z);
  IdentityReport a{"removable poles, single sigma term", 1, 0.0, identity_threshold, false, ""};
  a.max_error = std::abs(removable_pole_residue(3, 2, 1, 2, z, u, 0.02, 1));
  out.push_back(finish_report(a));
  IdentityReport b{"symmetrization, perturbed exponent", 0, 0.0, identity_threshold, false, ""};
  AnnulusSampler ss(seed + 1, 0.2, 0.7);
  for (int k = 0; k < 20; ++k) {
    auto w = ss.draw(3, {1.0});
    auto [l, r] = symmetrization_sides(w, 1);
    b.max_error = std::max(b.max_error, rel_error(l, r));
    ++b.cases;
  }
  out.push_back(finish_report(b));
  return out;
}

}  // namespace masep
