#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "formula_common.hpp"

namespace masep {

// Two-species TASEP on Z: (1,0)->(0,1), (2,0)->(0,2) and (2,1)->(1,2), all at rate 1.

/// Bethe eigenfunction of the two-species TASEP at fixed spectral parameters.
/// nu: n strictly increasing positions; p: sorted 1-based type-2 indices; z: n values; u: m values.
/// only_sigma >= 0 keeps a single term of the inner sum.
inline cplx eigenfunction_P(const std::vector<std::int64_t>& nu, const std::vector<int>& p, double t,
                            std::span<const cplx> z, std::span<const cplx> u, int only_sigma = -1) {
  const int n = static_cast<int>(nu.size()), m = static_cast<int>(p.size());
  require(static_cast<int>(z.size()) == n && static_cast<int>(u.size()) == m, "spectral parameter count");
  const auto& PI = permutations_cached(n);
  const auto& SG = permutations_cached(m);
  cplx expo(1.0);
  for (int i = 0; i < n; ++i) expo *= std::exp((1.0 / z[i] - 1.0) * t);
  std::vector<cplx> omz(n), omu(m);
  for (int i = 0; i < n; ++i) omz[i] = 1.0 - z[i];
  for (int i = 0; i < m; ++i) omu[i] = 1.0 - u[i];
  KahanSum<cplx> total;
  for (std::size_t a = 0; a < PI.perms.size(); ++a) {
    const auto& pi = PI.perms[a];
    cplx term(double(PI.signs[a]));
    for (int i = 0; i < n; ++i) term *= ipow(omz[i] / omz[pi[i]], i + 1) * ipow(z[pi[i]], nu[i]);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < p[i]; ++j) term /= omz[pi[j]];
    cplx c_sum(0.0);
    for (std::size_t b = 0; b < SG.perms.size(); ++b) {
      if (only_sigma >= 0 && b != static_cast<std::size_t>(only_sigma)) continue;
      const auto& sg = SG.perms[b];
      cplx c(double(SG.signs[b]));
      for (int i = 0; i < m; ++i) {
        c *= ipow(omu[i] / omu[sg[i]], i + 1);
        for (int j = 0; j + 1 < p[i]; ++j) c *= u[sg[i]] - z[pi[j]];
      }
      c_sum += c;
    }
    total.add(term * c_sum);
  }
  return expo * total.value();
}

namespace detail {

inline void check_green_shapes(const ParticleConfig& a, const ParticleConfig& b) {
  require(a.size() == b.size() && a.size() >= 1, "initial and final particle counts differ");
  for (auto s : a.species()) require(s == 1 || s == 2, "two-species configurations use labels 1 and 2");
  for (auto s : b.species()) require(s == 1 || s == 2, "two-species configurations use labels 1 and 2");
  require(a.type2_indices().size() == b.type2_indices().size(), "type-2 particle counts differ");
}

// Green function integrand over (z_1..z_n, u_1..u_m).
struct GreenIntegrand {
  std::vector<std::int64_t> mu, nu;
  std::vector<int> p0, p;
  double t;
  int n, m;

  cplx operator()(std::span<const cplx> zu) const {
    auto z = zu.subspan(0, n);
    auto u = zu.subspan(n, m);
    cplx v = eigenfunction_P(nu, p, t, z, u);
    for (int i = 0; i < n; ++i) v *= ipow(z[i], -mu[i] - 1) * ipow(1.0 - z[i], m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < p0[i]; ++j) v /= u[i] - z[j];
      for (int j = p0[i]; j < n; ++j) v /= 1.0 - z[j];
    }
    return v;
  }
};

// With p0_i = i the u-integrals collapse onto the residues u_i = z_i.
struct GreenResidueIntegrand {
  std::vector<std::int64_t> mu, nu;
  std::vector<int> p;
  double t;
  int n, m;

  cplx operator()(std::span<const cplx> z) const {
    cplx v = eigenfunction_P(nu, p, t, z, z.subspan(0, m));
    for (int i = 0; i < n; ++i) v *= ipow(z[i], -mu[i] - 1) * ipow(1.0 - z[i], m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < i; ++j) v /= z[i] - z[j];
      for (int j = i + 1; j < n; ++j) v /= 1.0 - z[j];
    }
    return v;
  }
};

inline bool is_initial_block(const std::vector<int>& p0) {
  for (std::size_t i = 0; i < p0.size(); ++i)
    if (p0[i] != static_cast<int>(i) + 1) return false;
  return true;
}

inline bool is_total_crossing(const ParticleConfig& a, const ParticleConfig& b) {
  const int n = a.size();
  auto p0 = a.type2_indices(), p = b.type2_indices();
  const int m = static_cast<int>(p0.size());
  if (!is_initial_block(p0)) return false;
  for (int j = 0; j < m; ++j)
    if (p[j] != n - m + j + 1) return false;
  return true;
}

// One-species transition det[ \oint (1-z)^{j-k} z^{nu_k - mu_j - 1} e^{(1/z-1)t} ].
inline cplx one_species_det_laurent(const std::vector<std::int64_t>& mu, const std::vector<std::int64_t>& nu,
                                    double t) {
  const int n = static_cast<int>(mu.size());
  std::vector<std::vector<cplx>> a(n, std::vector<cplx>(n));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      a[k][j] = kernels::origin_exp(t, static_cast<int>(nu[k] - mu[j] - 1), j - k);
  return determinant(a);
}

}  // namespace detail

/// Contours for the Green function: z circles near z_radius (slightly spread when the
/// residue path needs them distinct), u circles at u_radius.
inline std::vector<Contour> green_contours(int n, int m, const EvalOptions& opt, bool residue_path) {
  std::vector<Contour> cs;
  for (int i = 0; i < n; ++i) {
    double r = opt.z_radius;
    if (residue_path && n > 1) r *= 1.0 + 0.25 * (double(i) / (n - 1) - 0.5);
    cs.push_back({0.0, r, +1});
  }
  if (!residue_path)
    for (int i = 0; i < m; ++i) cs.push_back({0.0, opt.u_radius, +1});
  double zmax = 0.0;
  for (int i = 0; i < n; ++i) zmax = std::max(zmax, cs[i].radius);
  if (zmax >= 1.0) throw ConfigurationError("z contours must stay inside the unit circle");
  if (!residue_path && m > 0 && !(opt.u_radius > zmax && opt.u_radius < 1.0))
    throw ConfigurationError("u contours must enclose the z contours and exclude 1");
  return cs;
}

/// Transition probability of the two-species TASEP, mu -> nu with type-2 index sets p0 -> p.
/// Quadrature over the nested contours; the exact-residue path covers the one-species
/// cases (m = 0 or m = n).
inline FormulaResult two_tasep_green(const ParticleConfig& initial, const ParticleConfig& final_, double t,
                                     const EvalOptions& opt = {}) {
  detail::check_green_shapes(initial, final_);
  require(t >= 0.0 && std::isfinite(t), "time must be finite and non-negative");
  const int n = initial.size();
  auto p0 = initial.type2_indices(), p = final_.type2_indices();
  const int m = static_cast<int>(p0.size());
  const auto& mu = initial.positions();
  const auto& nu = final_.positions();
  bool one_species = (m == 0 || m == n);
  Method method = opt.method;
  if (method == Method::automatic) method = one_species ? Method::laurent : Method::quadrature;
  if (method == Method::laurent) {
    if (!one_species)
      throw ValidationError("exact-residue evaluation of the Green function needs m = 0 or m = n");
    return finish(detail::one_species_det_laurent(mu, nu, t), 0.0, "laurent", opt);
  }
  bool residue = opt.fast_path && detail::is_initial_block(p0);
  auto cs = green_contours(n, m, opt, residue);
  if (residue) {
    detail::GreenResidueIntegrand f{mu, nu, p, t, n, m};
    return finish(product_integrate(f, cs, opt.quad), opt);
  }
  detail::GreenIntegrand f{mu, nu, p0, p, t, n, m};
  return finish(product_integrate(f, cs, opt.quad), opt);
}

/// Independent one-species transition probability: det[F(k,j)] with each entry summed
/// as an explicit factorially convergent series.
inline double schutz_determinant(const std::vector<std::int64_t>& mu, const std::vector<std::int64_t>& nu,
                                 double t) {
  const int n = static_cast<int>(mu.size());
  require(static_cast<int>(nu.size()) == n, "length mismatch");
  // [z^{-1}] (1-z)^b z^c e^{t/z} e^{-t} = e^{-t} sum_r binom(b,r) (-1)^r t^{r+c+1}/(r+c+1)!
  auto entry = [&](long b, long c) {
    double sum = 0.0, binom = 1.0;
    long r0 = std::max(0L, -c - 1);
    for (long r = 0; r < r0; ++r) binom *= double(b - r) / double(r + 1);
    for (long r = r0; r < r0 + 400; ++r) {
      long s = r + c + 1;
      double term = binom * ((r % 2) ? -1.0 : 1.0) * std::exp(s * std::log(t) - std::lgamma(s + 1.0));
      if (t == 0.0) term = (s == 0) ? binom * ((r % 2) ? -1.0 : 1.0) : 0.0;
      sum += term;
      if (binom == 0.0 || (r > r0 + 5 && std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum)))) break;
      binom *= double(b - r) / double(r + 1);
    }
    return std::exp(-t) * sum;
  };
  std::vector<std::vector<cplx>> a(n, std::vector<cplx>(n));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) a[k][j] = entry(j - k, nu[k] - mu[j] - 1);
  return determinant(a).real();
}

struct ReductionCheck {
  double formula = 0.0;
  double reference = 0.0;
  double abs_error = 0.0;
};

/// m = 0 (or m = n) Green function against the explicit one-species determinant.
inline ReductionCheck schutz_reduction_check(const ParticleConfig& initial, const ParticleConfig& final_, double t,
                                             const EvalOptions& opt = {}) {
  auto p0 = initial.type2_indices();
  require(p0.empty() || static_cast<int>(p0.size()) == initial.size(), "reduction needs m = 0 or m = n");
  EvalOptions o = opt;
  o.method = Method::quadrature;
  ReductionCheck r;
  r.formula = two_tasep_green(initial, final_, t, o).value;
  r.reference = schutz_determinant(initial.positions(), final_.positions(), t);
  r.abs_error = std::abs(r.formula - r.reference);
  return r;
}

// ---------------------------------------------------------------- total crossing

namespace detail {

inline void check_crossing(const ParticleConfig& a, const ParticleConfig& b) {
  check_green_shapes(a, b);
  require(is_total_crossing(a, b), "crossing formula needs p0 = {1..m} and p = {n-m+1..n}");
}

// Expansion of the crossing integrand; variables z_0..z_{m-1} then w_0..w_{n-m-1}.
inline SeparableSum crossing_expansion(const std::vector<std::int64_t>& mu, const std::vector<std::int64_t>& nu,
                                       int m) {
  const int n = static_cast<int>(mu.size()), k = n - m;
  SeparableSum s = SeparableSum::constant(n, 1.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j) s = s * SeparableSum::difference(n, m + j, i);
  std::vector<std::vector<SeparableSum>> dz(m, std::vector<SeparableSum>(m)), dw(k, std::vector<SeparableSum>(k));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      dz[i][j] = SeparableSum::monomial(n, i, static_cast<int>(nu[k + j] - mu[i] - 1), i - j - k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      dw[i][j] = SeparableSum::monomial(n, m + i, static_cast<int>(nu[j] - mu[m + i] - 1), i - j);
  return s * separable_determinant(dz, n) * separable_determinant(dw, n);
}

}  // namespace detail

/// Total-crossing transition (type-2 block starts left, ends right) as an n-fold
/// integral with all contours around the origin.
inline FormulaResult two_tasep_crossing(const ParticleConfig& initial, const ParticleConfig& final_, double t,
                                        const EvalOptions& opt = {}) {
  detail::check_crossing(initial, final_);
  const int n = initial.size();
  const int m = static_cast<int>(initial.type2_indices().size());
  const auto& mu = initial.positions();
  const auto& nu = final_.positions();
  Method method = opt.method == Method::automatic ? Method::laurent : opt.method;
  if (method == Method::laurent) {
    auto s = detail::crossing_expansion(mu, nu, m);
    cplx v = s.integrate([&](int, int a, int b) { return kernels::origin_exp(t, a, b); });
    return finish(v, 0.0, "laurent", opt);
  }
  const int k = n - m;
  auto f = [&](std::span<const cplx> x) {
    auto z = x.subspan(0, m);
    auto w = x.subspan(m, k);
    cplx v(1.0);
    for (int i = 0; i < m; ++i) v *= std::exp((1.0 / z[i] - 1.0) * t) / ipow(1.0 - z[i], k);
    for (int i = 0; i < k; ++i) v *= std::exp((1.0 / w[i] - 1.0) * t);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j) v *= w[j] - z[i];
    std::vector<std::vector<cplx>> A(m, std::vector<cplx>(m)), B(k, std::vector<cplx>(k));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) A[i][j] = ipow(z[i], nu[k + j] - mu[i] - 1) * ipow(1.0 - z[i], i - j);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) B[i][j] = ipow(w[i], nu[j] - mu[m + i] - 1) * ipow(1.0 - w[i], i - j);
    return v * determinant(A) * determinant(B);
  };
  std::vector<Contour> cs(n, Contour{0.0, opt.z_radius, +1});
  return finish(product_integrate(f, cs, opt.quad), opt);
}

}  // namespace masep
