#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "formula_common.hpp"

namespace masep {

// Cumulative total crossing for the two-species TASEP: type-1 particles end in [s1, s2),
// type-2 particles end at or beyond s2. Type 2 starts on the left.

struct WallQuery {
  std::int64_t s1 = 0;
  std::int64_t s2 = 0;
  double rho = 1.0;
  int n = 1;
  int m = 0;
  double t = 0.0;

  void validate() const {
    require(n >= 1 && m >= 0 && m <= n, "need 0 <= m <= n and n >= 1");
    require(rho > 0.0 && rho <= 1.0, "rho must lie in (0, 1]");
    require(t >= 0.0 && std::isfinite(t), "time must be finite and non-negative");
  }

  bool feasible() const { return s2 - s1 >= n - m; }
};

/// Circle centred at 1/2 with radius 1.6: surrounds 0, 1 and 1 - rho for every rho in (0, 1].
inline Contour bernoulli_circle() { return {0.5, 1.6, +1}; }

namespace detail {

inline FormulaResult zero_result(const char* method) {
  FormulaResult r;
  r.method = method;
  return r;
}

inline int narrow(std::int64_t v) {
  require(v > -(1LL << 30) && v < (1LL << 30), "exponent out of range");
  return static_cast<int>(v);
}

// prod_{i != j} (x_j - x_i) over the variables [first, first + count).
inline SeparableSum ordered_pair_product(int nvars, int first, int count) {
  SeparableSum s = SeparableSum::constant(nvars, 1.0);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j)
      if (i != j) s = s * SeparableSum::difference(nvars, first + j, first + i);
  return s;
}

inline cplx ordered_pair_product(std::span<const cplx> z) {
  cplx v(1.0);
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = 0; j < z.size(); ++j)
      if (i != j) v *= z[j] - z[i];
  return v;
}

inline double inv_factorial(int m) { return std::exp(-std::lgamma(m + 1.0)); }

inline std::vector<cplx> bernoulli_poles(double rho) {
  if (rho == 1.0) return {0.0, 1.0};
  return {0.0, 1.0, 1.0 - rho};
}

// Variables z_0..z_{m-1}, w_0..w_{k-1}; the z-specific denominators are left to the caller.
inline SeparableSum wall_common(int n, int m, std::int64_t s1, std::int64_t s2, bool symmetric_z) {
  const int k = n - m;
  SeparableSum s = SeparableSum::constant(n, 1.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j) s = s * SeparableSum::difference(n, m + j, i);
  if (symmetric_z) {
    s = s * ordered_pair_product(n, 0, m);
  } else {
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) s = s * SeparableSum::difference(n, j, i);
  }
  std::vector<std::vector<SeparableSum>> d(k, std::vector<SeparableSum>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      d[i][j] = SeparableSum::monomial(n, m + i, j, 0);
      d[i][j] += SeparableSum::monomial(n, m + i, narrow(s2 - s1), 0, -1.0);
    }
  return s * separable_determinant(d, n);
}

inline cplx wall_det(std::span<const cplx> w, std::int64_t gap) {
  const int k = static_cast<int>(w.size());
  std::vector<std::vector<cplx>> d(k, std::vector<cplx>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) d[i][j] = ipow(w[i], j) - ipow(w[i], gap);
  return determinant(d);
}

}  // namespace detail

/// P_{s1,s2}(mu; t) for a deterministic start: mu increasing, the first m particles type 2.
inline FormulaResult cumulative_crossing_step(const std::vector<std::int64_t>& mu, int m, std::int64_t s1,
                                              std::int64_t s2, double t, const EvalOptions& opt = {}) {
  const int n = static_cast<int>(mu.size());
  require(n >= 1 && m >= 0 && m <= n, "need 0 <= m <= n and n >= 1");
  for (int i = 1; i < n; ++i) require(mu[i - 1] < mu[i], "positions must be strictly increasing");
  require(t >= 0.0 && std::isfinite(t), "time must be finite and non-negative");
  const int k = n - m;
  if (s2 - s1 < k) return detail::zero_result("domain");
  Method method = opt.method == Method::automatic ? Method::laurent : opt.method;
  if (method == Method::laurent) {
    SeparableSum s = detail::wall_common(n, m, s1, s2, false);
    SeparableSum f = SeparableSum::constant(n, 1.0);
    for (int i = 0; i < m; ++i) f = f * SeparableSum::monomial(n, i, detail::narrow(s2 - 1 - mu[i]), -(n - i));
    for (int i = 0; i < k; ++i)
      f = f * SeparableSum::monomial(n, m + i, detail::narrow(s1 - 1 - mu[m + i]), -(k - i));
    cplx v = (s * f).integrate([&](int, int a, int b) { return kernels::origin_exp(t, a, b); });
    return finish(v, 0.0, "laurent", opt);
  }
  auto g = [&](std::span<const cplx> x) {
    auto z = x.subspan(0, m);
    auto w = x.subspan(m, k);
    cplx v(1.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j) v *= w[j] - z[i];
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) v *= z[j] - z[i];
    for (int i = 0; i < m; ++i)
      v *= std::exp((1.0 / z[i] - 1.0) * t) * ipow(z[i], s2 - 1 - mu[i]) / ipow(1.0 - z[i], n - i);
    for (int i = 0; i < k; ++i)
      v *= std::exp((1.0 / w[i] - 1.0) * t) * ipow(w[i], s1 - 1 - mu[m + i]) / ipow(1.0 - w[i], k - i);
    return v * detail::wall_det(w, s2 - s1);
  };
  std::vector<Contour> cs(n, Contour{0.0, opt.z_radius, +1});
  return finish(product_integrate(g, cs, opt.quad), opt);
}

/// Step-step start: type 2 on -m..-1, type 1 on 0..n-m-1.
inline std::vector<std::int64_t> step_step_positions(int n, int m) {
  std::vector<std::int64_t> mu;
  for (int i = -m; i < n - m; ++i) mu.push_back(i);
  return mu;
}

/// Bernoulli-step start averaged in closed form; integrals around the origin.
inline FormulaResult bernoulli_direct(const WallQuery& w, const EvalOptions& opt = {}) {
  w.validate();
  if (!w.feasible()) return detail::zero_result("domain");
  const int n = w.n, m = w.m, k = n - m;
  const double c = 1.0 - w.rho, t = w.t;
  const double pre = std::pow(w.rho, m) * detail::inv_factorial(m);
  Method method = opt.method == Method::automatic ? Method::laurent : opt.method;
  if (method == Method::laurent) {
    SeparableSum s = detail::wall_common(n, m, w.s1, w.s2, true);
    SeparableSum f = SeparableSum::constant(n, pre);
    for (int i = 0; i < m; ++i) f = f * SeparableSum::monomial(n, i, detail::narrow(w.s2), -n);
    for (int i = 0; i < k; ++i) f = f * SeparableSum::monomial(n, m + i, detail::narrow(w.s1 - i - 1), -(k - i));
    cplx v = (s * f).integrate([&](int var, int a, int b) {
      return var < m ? kernels::origin_exp(t, a, b, c, 1) : kernels::origin_exp(t, a, b);
    });
    return finish(v, 0.0, "laurent", opt);
  }
  auto g = [&](std::span<const cplx> x) {
    auto z = x.subspan(0, m);
    auto ww = x.subspan(m, k);
    cplx v = pre * detail::ordered_pair_product(z);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j) v *= ww[j] - z[i];
    for (int i = 0; i < m; ++i)
      v *= std::exp((1.0 / z[i] - 1.0) * t) * ipow(z[i], w.s2) / (ipow(1.0 - z[i], n) * (1.0 - c * z[i]));
    for (int i = 0; i < k; ++i)
      v *= std::exp((1.0 / ww[i] - 1.0) * t) * ipow(ww[i], w.s1 - i - 1) / ipow(1.0 - ww[i], k - i);
    return v * detail::wall_det(ww, w.s2 - w.s1);
  };
  std::vector<Contour> cs(n, Contour{0.0, opt.z_radius, +1});
  return finish(product_integrate(g, cs, opt.quad), opt);
}

/// Same probability after inverting every variable; contours surround 0, 1 and 1 - rho.
inline FormulaResult bernoulli_inverted(const WallQuery& w, const EvalOptions& opt = {}) {
  w.validate();
  if (!w.feasible()) return detail::zero_result("domain");
  const int n = w.n, m = w.m, k = n - m;
  const double c = 1.0 - w.rho, t = w.t;
  const double pre = std::pow(w.rho, m) * detail::inv_factorial(m);
  const std::int64_t low = k + w.s1 - w.s2 - 1;
  Method method = opt.method == Method::automatic ? Method::laurent : opt.method;
  if (method == Method::laurent) {
    SeparableSum s = SeparableSum::constant(n, pre);
    s = s * detail::ordered_pair_product(n, 0, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j) s = s * SeparableSum::difference(n, i, m + j);
    // (x - 1)^{-e} = (-1)^e (1 - x)^{-e}
    for (int i = 0; i < m; ++i)
      s = s * SeparableSum::monomial(n, i, detail::narrow(-w.s2 - m + 1), -n, n % 2 ? -1.0 : 1.0);
    for (int i = 0; i < k; ++i)
      s = s * SeparableSum::monomial(n, m + i, detail::narrow(-w.s1 - m), -(k - i), (k - i) % 2 ? -1.0 : 1.0);
    std::vector<std::vector<SeparableSum>> d(k, std::vector<SeparableSum>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        d[i][j] = SeparableSum::monomial(n, m + i, k - 1 - j, 0);
        d[i][j] += SeparableSum::monomial(n, m + i, detail::narrow(low), 0, -1.0);
      }
    s = s * separable_determinant(d, n);
    auto zp = detail::bernoulli_poles(w.rho);
    cplx v = s.integrate([&](int var, int a, int b) {
      return var < m ? kernels::inverted_exp(t, a, b, zp, c, 1) : kernels::inverted_exp(t, a, b, {0.0, 1.0});
    });
    return finish(v, 0.0, "laurent", opt);
  }
  auto g = [&](std::span<const cplx> x) {
    auto z = x.subspan(0, m);
    auto ww = x.subspan(m, k);
    cplx v = pre * detail::ordered_pair_product(z);
    for (int i = 0; i < m; ++i)
      v *= std::exp((z[i] - 1.0) * t) * ipow(z[i], -w.s2 - m + 1) / (ipow(z[i] - 1.0, n) * (z[i] - c));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j) v *= z[i] - ww[j];
    for (int i = 0; i < k; ++i) v *= std::exp((ww[i] - 1.0) * t) * ipow(ww[i], -w.s1 - m) / ipow(ww[i] - 1.0, k - i);
    std::vector<std::vector<cplx>> d(k, std::vector<cplx>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) d[i][j] = ipow(ww[i], k - 1 - j) - ipow(ww[i], low);
    return v * determinant(d);
  };
  std::vector<Contour> cs(n, bernoulli_circle());
  return finish(product_integrate(g, cs, opt.quad), opt);
}

/// Bernoulli-step crossing; both integral forms are available through `inverted`.
inline FormulaResult cumulative_crossing_bernoulli(const WallQuery& w, const EvalOptions& opt = {},
                                                   bool inverted = false) {
  return inverted ? bernoulli_inverted(w, opt) : bernoulli_direct(w, opt);
}

namespace detail {

inline void check_one_wall(const WallQuery& w) {
  w.validate();
  require(w.s1 <= -w.m, "the one-wall form needs s1 <= -m; use the general Bernoulli form");
  require(w.n > w.m, "the one-wall form needs at least one type-1 particle");
}

}  // namespace detail

/// Collapsed (m+1)-fold form, valid when s1 <= -m and n > m. Carries an overall
/// factor (-1)^{m+1} relative to the uncorrected collapse.
inline FormulaResult bernoulli_one_wall(const WallQuery& w, const EvalOptions& opt = {}) {
  detail::check_one_wall(w);
  if (!w.feasible()) return detail::zero_result("domain");
  const int n = w.n, m = w.m;
  const double c = 1.0 - w.rho, t = w.t;
  const double pre = std::pow(w.rho, m) * detail::inv_factorial(m) * (m % 2 ? 1.0 : -1.0);
  const std::int64_t wpow = n - 2LL * m - w.s2 - 1;
  Method method = opt.method == Method::automatic ? Method::laurent : opt.method;
  if (method == Method::laurent) {
    const int nv = m + 1;
    SeparableSum s = SeparableSum::constant(nv, pre);
    s = s * detail::ordered_pair_product(nv, 0, m);
    for (int i = 0; i < m; ++i) {
      s = s * SeparableSum::monomial(nv, i, detail::narrow(-w.s2 - m + 1), -(m + 1), (m + 1) % 2 ? -1.0 : 1.0);
      s = s * SeparableSum::difference(nv, m, i);
    }
    s = s * SeparableSum::monomial(nv, m, detail::narrow(wpow), -1, -1.0);
    auto zp = detail::bernoulli_poles(w.rho);
    cplx v = s.integrate([&](int var, int a, int b) {
      return var < m ? kernels::inverted_exp(t, a, b, zp, c, 1) : kernels::inverted_exp(t, a, b, {0.0});
    });
    return finish(v, 0.0, "laurent", opt);
  }
  auto g = [&](std::span<const cplx> x) {
    auto z = x.subspan(0, m);
    cplx ww = x[m];
    cplx v = pre * detail::ordered_pair_product(z);
    for (int i = 0; i < m; ++i)
      v *= std::exp((z[i] - 1.0) * t) * ipow(z[i], -w.s2 - m + 1) / (ipow(z[i] - 1.0, m + 1) * (z[i] - c)) *
           (ww - z[i]);
    return v * std::exp((ww - 1.0) * t) * ipow(ww, wpow) / (ww - 1.0);
  };
  std::vector<Contour> cs(m, bernoulli_circle());
  cs.push_back({0.0, opt.z_radius, +1});
  return finish(product_integrate(g, cs, opt.quad), opt);
}

/// Single w integral of an m x m determinant whose entries are linear in w. The sign
/// (-1)^{m+1} (-1)^{m(m-1)/2} combines the collapse sign with prod_{i!=j} = (-1)^{m(m-1)/2} V^2.
inline FormulaResult bernoulli_cauchy_binet(const WallQuery& w, const EvalOptions& opt = {}) {
  detail::check_one_wall(w);
  if (!w.feasible()) return detail::zero_result("domain");
  const int n = w.n, m = w.m;
  const double c = 1.0 - w.rho, t = w.t;
  const std::int64_t wpow = n - 2LL * m - w.s2 - 1;
  auto zp = detail::bernoulli_poles(w.rho);
  const double sgn = (m + 1) % 2 ? -1.0 : 1.0;
  // kappa(a) = \oint e^{(z-1)t} z^a (z-1)^{-m-1} (z - 1 + rho)^{-1}
  auto kappa = [&](std::int64_t a) {
    return sgn * kernels::inverted_exp(t, detail::narrow(a), -(m + 1), zp, c, 1);
  };
  // entry (i, j) = w kappa(e) - kappa(e + 1), e = i + j - s2 - m - 1 with 1-based i, j
  std::vector<std::vector<std::array<cplx, 2>>> e(m, std::vector<std::array<cplx, 2>>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      std::int64_t a = (i + 1) + (j + 1) - w.s2 - m - 1;
      e[i][j] = {-kappa(a + 1), kappa(a)};
    }
  std::vector<cplx> poly(m + 1, 0.0);
  const auto& pt = permutations_cached(m);
  for (std::size_t p = 0; p < pt.perms.size(); ++p) {
    std::vector<cplx> term{double(pt.signs[p])};
    for (int i = 0; i < m; ++i) {
      const auto& ent = e[i][pt.perms[p][i]];
      std::vector<cplx> next(term.size() + 1, 0.0);
      for (std::size_t d = 0; d < term.size(); ++d) {
        next[d] += term[d] * ent[0];
        next[d + 1] += term[d] * ent[1];
      }
      term = std::move(next);
    }
    for (std::size_t d = 0; d < term.size(); ++d) poly[d] += term[d];
  }
  KahanSum<cplx> acc;
  for (int d = 0; d <= m; ++d)
    acc.add(-poly[d] * kernels::inverted_exp(t, detail::narrow(wpow + d), -1, {0.0}));
  const double sign = ((m + 1 + m * (m - 1) / 2) % 2) ? -1.0 : 1.0;
  return finish(sign * std::pow(w.rho, m) * acc.value(), 0.0, "laurent", opt);
}

/// Probability that all n particles of a step-started TASEP (sites 1..n) reach s or beyond.
inline FormulaResult gamma_wall(int n, std::int64_t s, double t, const EvalOptions& opt = {}) {
  require(n >= 1, "need at least one particle");
  require(t >= 0.0 && std::isfinite(t), "time must be finite and non-negative");
  const double pre = detail::inv_factorial(n);
  Method method = opt.method == Method::automatic ? Method::laurent : opt.method;
  if (method == Method::laurent) {
    SeparableSum sum = detail::ordered_pair_product(n, 0, n).scaled(pre);
    const double sgn = n % 2 ? -1.0 : 1.0;
    cplx v = sum.integrate([&](int, int a, int b) {
      return sgn * kernels::inverted_exp(t, detail::narrow(a + 1 - s), b - n, {0.0, 1.0});
    });
    return finish(v, 0.0, "laurent", opt);
  }
  auto g = [&](std::span<const cplx> z) {
    cplx v = pre * detail::ordered_pair_product(z);
    for (auto zi : z) v *= std::exp((zi - 1.0) * t) * ipow(zi, 1 - s) / ipow(zi - 1.0, n);
    return v;
  };
  std::vector<Contour> cs(n, bernoulli_circle());
  return finish(product_integrate(g, cs, opt.quad), opt);
}

}  // namespace masep
