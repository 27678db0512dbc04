#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "quadrature.hpp"

namespace masep {

/// Vertical edge state: number of paths of each colour 1..n (entry c-1 for colour c).
using ColourState = std::vector<int>;
/// Integer composition (parts may be negative).
using Composition = std::vector<std::int64_t>;

namespace detail {

inline int total(const ColourState& I, int from = 1) {
  int s = 0;
  for (std::size_t c = from - 1; c < I.size(); ++c) s += I[c];
  return s;
}

inline bool conserves(const ColourState& I, int j, const ColourState& K, int l) {
  if (I.size() != K.size()) return false;
  for (std::size_t c = 0; c < I.size(); ++c) {
    int lhs = I[c] + (j == int(c) + 1 ? 1 : 0);
    int rhs = K[c] + (l == int(c) + 1 ? 1 : 0);
    if (lhs != rhs || K[c] < 0 || I[c] < 0) return false;
  }
  return true;
}

inline void check_denominator(cplx d, const char* what) {
  if (std::abs(d) < 1e-14) throw PoleError(std::string("vertex weight pole: ") + what);
}

}  // namespace detail

/// Rightward-travel weight L_{z,q,s}(I, j; K, l): I bottom, j left, K top, l right.
inline cplx weight_L(const ColourState& I, int j, const ColourState& K, int l, cplx z, cplx q, cplx s) {
  const int n = static_cast<int>(I.size());
  require(j >= 0 && j <= n && l >= 0 && l <= n, "edge colour out of range");
  if (!detail::conserves(I, j, K, l)) return 0.0;
  cplx den = 1.0 - s * z;
  detail::check_denominator(den, "s z = 1");
  auto qp = [&](int k) { return ipow(q, k); };
  const int all = detail::total(I);
  if (j == 0 && l == 0) return (1.0 - s * z * qp(all)) / den;
  if (j == l) return (z - s * qp(I[j - 1])) * qp(detail::total(I, j + 1)) / den;
  if (j == 0) return z * (1.0 - qp(I[l - 1])) * qp(detail::total(I, l + 1)) / den;
  if (l == 0) return (1.0 - s * s * qp(all)) / den;
  if (j < l) return z * (1.0 - qp(I[l - 1])) * qp(detail::total(I, l + 1)) / den;
  return s * (1.0 - qp(I[l - 1])) * qp(detail::total(I, l + 1)) / den;
}

/// Leftward-travel weight M_{z,q,s}(I, j; K, l): I bottom, j enters from the right,
/// K top, l leaves to the left.
inline cplx weight_M(const ColourState& I, int j, const ColourState& K, int l, cplx z, cplx q, cplx s) {
  if (z == 0.0 || q == 0.0 || s == 0.0) throw PoleError("leftward weights need z, q, s nonzero");
  int e = (j >= 1 ? 1 : 0) - (l >= 1 ? 1 : 0);
  return ipow(-s, e) * weight_L(I, j, K, l, 1.0 / z, 1.0 / q, 1.0 / s);
}

/// Degenerate leftward weight M_{q^{-1/2} y, q, q^{-1/2}}(I, j; K, l) (-q^{1/2})^{1_{j>=1}}.
inline cplx weight_dual(const ColourState& I, int j, const ColourState& K, int l, cplx y, cplx q) {
  cplx sq = std::sqrt(q);
  cplx w = weight_M(I, j, K, l, y / sq, q, 1.0 / sq);
  return j >= 1 ? w * (-sq) : w;
}

/// Closed-form table of the degenerate leftward weights, for cross-checking weight_dual.
inline cplx dual_weight_table(const ColourState& I, int j, const ColourState& K, int l, cplx y, cplx q) {
  if (!detail::conserves(I, j, K, l)) return 0.0;
  cplx den = 1.0 - y / q;
  detail::check_denominator(den, "y = q");
  auto qm = [&](int k) { return ipow(q, -k); };
  const int all = detail::total(I);
  if (j == 0 && l == 0) return (qm(all) - y / q) / den;
  if (j == l) return (1.0 - y * qm(I[j - 1])) * qm(detail::total(I, j + 1)) / den;
  if (j == 0) return (1.0 - qm(I[l - 1])) * qm(detail::total(I, l + 1)) / den;
  if (l == 0) return y * (qm(all) - 1.0 / q) / den;
  if (j < l) return (1.0 - qm(I[l - 1])) * qm(detail::total(I, l + 1)) / den;
  return y * (1.0 - qm(I[l - 1])) * qm(detail::total(I, l + 1)) / den;
}

// ---------------------------------------------------------------- partition functions

namespace detail {

inline Composition shifted_nonnegative(const Composition& mu, std::int64_t& k) {
  std::int64_t lo = 0;
  for (auto v : mu) lo = std::min(lo, v);
  k = -lo;
  Composition out(mu);
  for (auto& v : out) v = checked_add(v, k);
  return out;
}

inline std::int64_t max_part(const Composition& mu) {
  std::int64_t hi = 0;
  for (auto v : mu) hi = std::max(hi, v);
  return hi;
}

// Column transfer for nonnegative mu.
inline cplx f_transfer(const Composition& mu, std::span<const cplx> z, cplx q, cplx s) {
  const int n = static_cast<int>(mu.size());
  const std::int64_t M = max_part(mu);
  if (M > 4096) throw ResourceLimitError("composition part too large for the lattice transfer");
  using Key = std::vector<int>;  // horizontal colours per row
  std::map<Key, cplx> cur;
  Key start(n);
  for (int i = 0; i < n; ++i) start[i] = i + 1;
  cur[start] = 1.0;
  for (std::int64_t col = 0; col <= M && !cur.empty(); ++col) {
    ColourState A(n, 0);
    for (int c = 0; c < n; ++c)
      if (mu[c] == col) A[c] = 1;
    std::map<Key, cplx> inner;  // h (n) followed by vertical state (n)
    for (auto& [h, w] : cur) {
      Key k(h);
      k.resize(2 * n, 0);
      inner[k] += w;
    }
    for (int row = 0; row < n; ++row) {
      std::map<Key, cplx> next;
      for (auto& [key, w] : inner) {
        int j = key[row];
        ColourState I(key.begin() + n, key.end());
        for (int l = 0; l <= n; ++l) {
          ColourState K(I);
          if (j) ++K[j - 1];
          if (l) {
            if (K[l - 1] == 0) continue;
            --K[l - 1];
          }
          cplx wt = weight_L(I, j, K, l, z[row], q, s);
          if (wt == cplx(0.0)) continue;
          Key nk(key);
          nk[row] = l;
          std::copy(K.begin(), K.end(), nk.begin() + n);
          next[nk] += w * wt;
        }
      }
      inner.swap(next);
    }
    cur.clear();
    for (auto& [key, w] : inner)
      if (std::equal(A.begin(), A.end(), key.begin() + n)) cur[Key(key.begin(), key.begin() + n)] += w;
  }
  auto it = cur.find(Key(n, 0));
  return it == cur.end() ? cplx(0.0) : it->second;
}

}  // namespace detail

/// Coloured partition function f_mu(z; q, s) on integer compositions.
inline cplx f_mu(const Composition& mu, std::span<const cplx> z, cplx q, cplx s) {
  require(mu.size() == z.size() && !mu.empty(), "f_mu needs one spectral parameter per part");
  std::int64_t k = 0;
  Composition nn = detail::shifted_nonnegative(mu, k);
  cplx v = detail::f_transfer(nn, z, q, s);
  if (k > 0)
    for (auto zi : z) {
      cplx d = zi - s;
      detail::check_denominator(d, "z = s in the shift factor");
      v *= ipow((1.0 - s * zi) / d, k);
    }
  return v;
}

inline cplx f_mu(const Composition& mu, const std::vector<cplx>& z, cplx q, cplx s) {
  return f_mu(mu, std::span<const cplx>(z), q, s);
}

/// Closed form of f_delta for weakly increasing delta.
inline cplx f_antidominant(const Composition& delta, std::span<const cplx> z, cplx q, cplx s) {
  for (std::size_t i = 1; i < delta.size(); ++i)
    require(delta[i - 1] <= delta[i], "closed form needs a weakly increasing composition");
  cplx v(1.0);
  for (auto& [val, mult] : multiplicities(delta)) v *= q_pochhammer(s * s, q, mult);
  for (std::size_t i = 0; i < delta.size(); ++i) {
    cplx den = 1.0 - s * z[i];
    detail::check_denominator(den, "s z = 1");
    v *= ipow((z[i] - s) / den, delta[i]) / den;
  }
  return v;
}

/// Dual function g*_mu(z; q, s).
inline cplx g_star(const Composition& mu, std::span<const cplx> z, cplx q, cplx s) {
  const int n = static_cast<int>(mu.size());
  require(static_cast<int>(z.size()) == n, "g* needs one spectral parameter per part");
  cplx norm = ipow(q, inversions(mu));
  for (auto& [val, mult] : multiplicities(mu)) {
    cplx poch = q_pochhammer(1.0 / (s * s), 1.0 / q, mult);
    if (std::abs(poch) < 1e-14) throw PoleError("q-Pochhammer normalization vanishes");
    norm /= poch;
  }
  Composition rev(mu.rbegin(), mu.rend());
  std::vector<cplx> zr(n);
  for (int i = 0; i < n; ++i) {
    zr[i] = 1.0 / z[n - 1 - i];
    norm /= -s * z[i];
  }
  return norm * f_mu(rev, std::span<const cplx>(zr), 1.0 / q, 1.0 / s);
}

/// Symmetric function F_lambda(z; q, s) by its symmetrization formula.
inline cplx F_lambda_sym(const Composition& lambda, std::span<const cplx> z, cplx q, cplx s) {
  const int n = static_cast<int>(lambda.size());
  require(static_cast<int>(z.size()) == n, "F needs one spectral parameter per part");
  for (int i = 1; i < n; ++i) require(lambda[i - 1] >= lambda[i], "lambda must be weakly decreasing");
  cplx pre = ipow(1.0 - q, n);
  for (auto zi : z) {
    detail::check_denominator(1.0 - s * zi, "s z = 1");
    pre /= 1.0 - s * zi;
  }
  for (auto& [val, mult] : multiplicities(lambda)) pre *= q_pochhammer(s * s, q, mult) / q_pochhammer(q, q, mult);
  const auto& P = permutations_cached(n);
  KahanSum<cplx> acc;
  for (const auto& sg : P.perms) {
    cplx t(1.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        cplx d = z[sg[i]] - z[sg[j]];
        detail::check_denominator(d, "coincident spectral parameters");
        t *= (z[sg[i]] - q * z[sg[j]]) / d;
      }
    for (int i = 0; i < n; ++i) t *= ipow((z[sg[i]] - s) / (1.0 - s * z[sg[i]]), lambda[i]);
    acc.add(t);
  }
  return pre * acc.value();
}

/// Sum of f_mu over all distinct rearrangements mu of lambda.
inline cplx f_rearrangement_sum(const Composition& lambda, std::span<const cplx> z, cplx q, cplx s) {
  Composition mu(lambda);
  std::sort(mu.begin(), mu.end());
  KahanSum<cplx> acc;
  do acc.add(f_mu(mu, z, q, s));
  while (std::next_permutation(mu.begin(), mu.end()));
  return acc.value();
}

/// Symmetric function appearing in block-crossing integrands:
/// sum_sigma prod_{i<j} (u_{s_j} - q u_{s_i})/(u_{s_j} - u_{s_i}) prod_i ((1-u_{s_i})/(1-q u_{s_i}))^{lambda_i}.
inline cplx sfF_lambda(const Composition& lambda, std::span<const cplx> u, cplx q) {
  const int n = static_cast<int>(lambda.size());
  require(static_cast<int>(u.size()) == n, "one variable per part");
  const auto& P = permutations_cached(n);
  KahanSum<cplx> acc;
  for (const auto& sg : P.perms) {
    cplx t(1.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        cplx d = u[sg[j]] - u[sg[i]];
        detail::check_denominator(d, "coincident spectral parameters");
        t *= (u[sg[j]] - q * u[sg[i]]) / d;
      }
    for (int i = 0; i < n; ++i) t *= ipow((1.0 - u[sg[i]]) / (1.0 - q * u[sg[i]]), lambda[i]);
    acc.add(t);
  }
  return acc.value();
}

/// q = 0 determinant form: prod_{i<j} 1/(u_j - u_i) det[u_j^{i-1} (1-u_j)^{lambda_i}].
inline cplx sfF_lambda_det(const Composition& lambda, std::span<const cplx> u) {
  const int n = static_cast<int>(lambda.size());
  std::vector<std::vector<cplx>> a(n, std::vector<cplx>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = ipow(u[j], i) * ipow(1.0 - u[j], lambda[i]);
  cplx v = determinant(a);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v /= u[j] - u[i];
  return v;
}

/// xi_mu(u) = prod_j ((1 - q u_j)/(1 - u_j))^{mu_j}
inline cplx xi_mu(const Composition& mu, std::span<const cplx> u, cplx q) {
  cplx v(1.0);
  for (std::size_t j = 0; j < mu.size(); ++j) v *= ipow((1.0 - q * u[j]) / (1.0 - u[j]), mu[j]);
  return v;
}

/// Partition function G_{mu/nu}(y_1..y_l) with leftward weights; colour i enters at the
/// bottom of column mu_i and leaves through the top of column nu_i.
inline cplx G_mu_nu(const Composition& mu, const Composition& nu, std::span<const cplx> y, cplx q, cplx s) {
  const int n = static_cast<int>(mu.size());
  require(static_cast<int>(nu.size()) == n && n >= 1, "mu and nu lengths differ");
  for (int i = 0; i < n; ++i)
    if (nu[i] > mu[i]) return 0.0;
  std::int64_t lo = *std::min_element(nu.begin(), nu.end());
  std::int64_t hi = *std::max_element(mu.begin(), mu.end());
  if (hi - lo > 4096) throw ResourceLimitError("lattice too wide");
  const int W = static_cast<int>(hi - lo + 1);
  using Key = std::vector<int>;  // W*n column counts
  Key start(W * n, 0), target(W * n, 0);
  for (int c = 0; c < n; ++c) {
    ++start[(mu[c] - lo) * n + c];
    ++target[(nu[c] - lo) * n + c];
  }
  std::map<Key, cplx> cur{{start, 1.0}};
  for (std::size_t r = 0; r < y.size(); ++r) {
    std::map<Key, cplx> row;  // column counts followed by the horizontal colour
    for (auto& [k, w] : cur) {
      Key kk(k);
      kk.push_back(0);
      row[kk] += w;
    }
    for (int col = W - 1; col >= 0; --col) {
      std::map<Key, cplx> next;
      for (auto& [key, w] : row) {
        int j = key.back();
        ColourState I(key.begin() + col * n, key.begin() + (col + 1) * n);
        for (int l = 0; l <= n; ++l) {
          ColourState K(I);
          if (j) ++K[j - 1];
          if (l) {
            if (K[l - 1] == 0) continue;
            --K[l - 1];
          }
          cplx wt = weight_M(I, j, K, l, y[r], q, s);
          if (wt == cplx(0.0)) continue;
          Key nk(key);
          std::copy(K.begin(), K.end(), nk.begin() + col * n);
          nk.back() = l;
          next[nk] += w * wt;
        }
      }
      row.swap(next);
    }
    cur.clear();
    for (auto& [key, w] : row)
      if (key.back() == 0) cur[Key(key.begin(), key.end() - 1)] += w;
  }
  auto it = cur.find(target);
  return it == cur.end() ? cplx(0.0) : it->second;
}

// ---------------------------------------------------------------- property checks

struct CheckReport {
  std::string name;
  int cases = 0;
  double max_error = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

inline CheckReport finish_report(CheckReport r) {
  r.pass = r.max_error < r.threshold;
  return r;
}

/// All vertical states with n colours and at most `max_total` paths.
inline std::vector<ColourState> colour_states(int n, int max_total) {
  std::vector<ColourState> out;
  ColourState I(n, 0);
  std::function<void(int, int)> rec = [&](int c, int left) {
    if (c == n) {
      out.push_back(I);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      I[c] = k;
      rec(c + 1, left - k);
    }
    I[c] = 0;
  };
  rec(0, max_total);
  return out;
}

/// Multiplies one tabulated weight by `factor`, for negative controls of the checks.
struct WeightPerturbation {
  ColourState I;
  int j = -1;
  ColourState K;
  int l = -1;
  double factor = 1.0;
  bool matches(const ColourState& a, int b, const ColourState& c, int d) const {
    return factor != 1.0 && a == I && b == j && c == K && d == l;
  }
};

struct VertexParams {
  cplx z{0.1};
  cplx q{2.0};
  cplx s{0.3};
};

/// Sum-to-unity of both weight families over every outgoing state, for all incoming
/// states with n colours and at most max_total paths.
inline CheckReport stochastic_weights_check(int n, int max_total, const std::vector<VertexParams>& params,
                                            const WeightPerturbation& perturb = {}) {
  CheckReport r{"vertex sum-to-unity", 0, 0.0, 1e-12, false, ""};
  for (auto& p : params)
    for (auto& I : colour_states(n, max_total))
      for (int j = 0; j <= n; ++j) {
        cplx sumL(0.0), sumM(0.0);
        for (int l = 0; l <= n; ++l) {
          ColourState K(I);
          if (j) ++K[j - 1];
          if (l) {
            if (K[l - 1] == 0) continue;
            --K[l - 1];
          }
          cplx wl = weight_L(I, j, K, l, p.z, p.q, p.s);
          cplx wm = weight_M(I, j, K, l, p.z, p.q, p.s);
          if (perturb.matches(I, j, K, l)) {
            wl *= perturb.factor;
            wm *= perturb.factor;
          }
          sumL += wl * (l >= 1 ? -p.s : cplx(1.0));
          sumM += wm * (j >= 1 ? 1.0 / (-p.s) : cplx(1.0));
        }
        r.max_error = std::max({r.max_error, std::abs(sumL - 1.0), std::abs(sumM - 1.0)});
        ++r.cases;
      }
  return finish_report(r);
}

/// Non-negativity of the stochastic weights L(-s)^{1_{l>=1}} at the given real parameters.
inline CheckReport positivity_check(int n, int max_total, const VertexParams& p) {
  CheckReport r{"vertex positivity", 0, 0.0, 1e-15, false, ""};
  for (auto& I : colour_states(n, max_total))
    for (int j = 0; j <= n; ++j)
      for (int l = 0; l <= n; ++l) {
        ColourState K(I);
        if (j) ++K[j - 1];
        if (l) {
          if (K[l - 1] == 0) continue;
          --K[l - 1];
        }
        cplx w = weight_L(I, j, K, l, p.z, p.q, p.s) * (l >= 1 ? -p.s : cplx(1.0));
        r.max_error = std::max({r.max_error, std::abs(w.imag()), std::max(0.0, -w.real())});
        ++r.cases;
      }
  return finish_report(r);
}

/// Admissible circles about the origin: radii r_i = r0 g^i with g > max(q, 1),
/// enclosing s and excluding 1/s.
inline std::vector<Contour> admissible_circles(int n, double q, double s, double r0 = 0.0, double g = 0.0) {
  if (g <= 0.0) g = std::max(std::abs(q), 1.0) * 1.25;
  if (r0 <= 0.0) r0 = 2.0 * std::abs(s);
  require(g > std::max(std::abs(q), 1.0), "ratio must exceed max(|q|, 1)");
  auto cs = geometric_circles(n, r0, g);
  for (auto& c : cs) {
    if (!(c.radius > std::abs(s))) throw ConfigurationError("contour does not surround s");
    if (!(c.radius < 1.0 / std::abs(s))) throw ConfigurationError("contour surrounds 1/s");
  }
  return cs;
}

/// (2 pi i)^{-n} \oint dz/z prod_{i<j} (z_j - z_i)/(z_j - q z_i) f_nu(1/z) g*_mu(z).
inline QuadratureResult orthogonality_integral(const Composition& mu, const Composition& nu, double q, double s,
                                               const std::vector<Contour>& contours,
                                               const QuadratureOptions& opt = {}) {
  const int n = static_cast<int>(mu.size());
  require(static_cast<int>(nu.size()) == n && static_cast<int>(contours.size()) == n, "size mismatch");
  auto f = [&](std::span<const cplx> z) {
    std::vector<cplx> zi(n);
    cplx v(1.0);
    for (int i = 0; i < n; ++i) {
      zi[i] = 1.0 / z[i];
      v /= z[i];
      for (int j = i + 1; j < n; ++j) v *= (z[j] - z[i]) / (z[j] - q * z[i]);
    }
    return v * f_mu(nu, std::span<const cplx>(zi), q, s) * g_star(mu, z, q, s);
  };
  return product_integrate(f, contours, opt);
}

struct CauchyCheck {
  cplx lhs{0.0};
  cplx rhs{0.0};
  double abs_error = 0.0;
  double tail_bound = 0.0;
  int depth = 0;
  bool pass = false;
};

/// Truncated Cauchy identity sum_kappa f_kappa(z) G_{kappa/nu}(y) against its product form,
/// summing kappa_i in [nu_i, nu_i + depth].
inline CauchyCheck cauchy_check(const Composition& nu, std::span<const cplx> z, std::span<const cplx> y, cplx q,
                                cplx s, int depth) {
  const int n = static_cast<int>(nu.size());
  double ratio = 0.0;
  for (auto yi : y)
    for (auto zj : z)
      ratio = std::max(ratio, std::abs((yi - s) * (zj - s) / ((1.0 - s * yi) * (1.0 - s * zj))));
  require(ratio < 1.0, "Cauchy sum does not converge at these parameters");
  CauchyCheck c;
  c.depth = depth;
  KahanSum<cplx> acc;
  double shell = 0.0;
  std::vector<int> off(n, 0);
  while (true) {
    Composition kappa(nu);
    int mx = 0;
    for (int i = 0; i < n; ++i) {
      kappa[i] += off[i];
      mx = std::max(mx, off[i]);
    }
    cplx term = f_mu(kappa, z, q, s) * G_mu_nu(kappa, nu, y, q, s);
    acc.add(term);
    if (mx == depth) shell += std::abs(term);
    int k = n - 1;
    while (k >= 0 && off[k] == depth) off[k--] = 0;
    if (k < 0) break;
    ++off[k];
  }
  c.lhs = acc.value();
  cplx prod = ipow(q, -static_cast<std::int64_t>(y.size()) * n);
  for (auto yi : y)
    for (auto zj : z) prod *= (1.0 - q * yi * zj) / (1.0 - yi * zj);
  c.rhs = prod * f_mu(nu, z, q, s);
  c.abs_error = std::abs(c.lhs - c.rhs);
  // Beyond the last shell, terms decay at least geometrically in the offset.
  c.tail_bound = shell * n * ratio / (1.0 - ratio) * std::pow(1.0 + 1.0 / std::max(depth, 1), n) + 1e-13;
  c.pass = c.abs_error <= c.tail_bound;
  return c;
}

}  // namespace masep
