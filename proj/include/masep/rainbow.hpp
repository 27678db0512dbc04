#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "formula_common.hpp"
#include "vertex.hpp"

namespace masep {

// Multi-species ASEP formulas. Colour i sits at coordinate mu_i; larger colours
// overtake smaller ones at rate 1 and are overtaken at rate q.

/// Radius of the circles about z = 1: excludes 1/q and the images q*z of the other circles.
inline double around_one_radius(double q) {
  require(q >= 0.0 && std::isfinite(q) && q != 1.0, "q must be finite, non-negative and != 1");
  double r = std::min(0.2, std::abs(q - 1.0) / 3.0);
  if (q > 0.0) r = std::min(r, std::abs(1.0 - 1.0 / q) / 3.0);
  return r;
}

/// Negatively oriented circles about 1 with slightly different radii, so that removable
/// coincidences z_i = z_j never land on quadrature nodes.
inline std::vector<Contour> around_one_contours(int n, double q) {
  double r = around_one_radius(q);
  std::vector<Contour> cs;
  for (int i = 0; i < n; ++i) cs.push_back({1.0, r * (1.0 - 0.3 * i / std::max(n, 1)), -1});
  return cs;
}

namespace detail {

inline cplx asep_kernel(cplx z, double q, double t) {
  cplx a = 1.0 - z, b = 1.0 - q * z;
  return std::exp((1.0 - q) * (1.0 - q) * z * t / (a * b));
}

inline cplx cross_factor(std::span<const cplx> z, double q) {
  cplx v(1.0);
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j) v *= (z[j] - z[i]) / (z[j] - q * z[i]);
  return v;
}

inline void require_strictly_decreasing(const Composition& c, const char* what) {
  for (std::size_t i = 1; i < c.size(); ++i)
    require(c[i - 1] > c[i], std::string(what) + " must be strictly decreasing");
}

inline void require_strictly_increasing(const Composition& c, const char* what) {
  for (std::size_t i = 1; i < c.size(); ++i)
    require(c[i - 1] < c[i], std::string(what) + " must be strictly increasing");
}

inline void require_distinct(const Composition& c, const char* what) {
  auto s = c;
  std::sort(s.begin(), s.end());
  require(std::adjacent_find(s.begin(), s.end()) == s.end(), std::string(what) + " must have distinct parts");
}

}  // namespace detail

/// P_t(mu -> nu) for the rainbow ASEP, mu_1 > ... > mu_n (colour 1 rightmost), nu strict.
inline FormulaResult r_asep_transition(const Composition& mu, const Composition& nu, double q, double t,
                                       const EvalOptions& opt = {}) {
  const int n = static_cast<int>(mu.size());
  require(n >= 1 && static_cast<int>(nu.size()) == n, "mu and nu lengths differ");
  detail::require_strictly_decreasing(mu, "mu");
  detail::require_distinct(nu, "nu");
  require(q > 0.0, "this integral needs q > 0; use the block formulas at q = 0");
  require(t >= 0.0 && std::isfinite(t), "time must be finite and non-negative");
  if (opt.method == Method::laurent) throw ValidationError("no exact-residue path for this formula");
  const double sq = std::sqrt(q), s = 1.0 / sq;
  std::int64_t nu_total = 0;
  for (auto v : nu) nu_total = checked_add(nu_total, v);
  const cplx pre = ipow(cplx(-s), nu_total);
  auto f = [&](std::span<const cplx> z) {
    std::vector<cplx> x(n);
    cplx v = pre * detail::cross_factor(z, q);
    for (int j = 0; j < n; ++j) {
      x[j] = s / z[j];
      v *= detail::asep_kernel(z[j], q, t) / (z[j] * (1.0 - z[j])) * ipow((1.0 - q * z[j]) / (1.0 - z[j]), mu[j]);
    }
    return v * f_mu(nu, std::span<const cplx>(x), q, s);
  };
  return finish(product_integrate(f, around_one_contours(n, q), opt.quad), opt);
}

/// Total crossing mu_1 > ... > mu_n to nu_1 < ... < nu_n in the rainbow ASEP.
inline FormulaResult rainbow_total_crossing(const Composition& mu, const Composition& nu, double q, double t,
                                            const EvalOptions& opt = {}) {
  const int n = static_cast<int>(mu.size());
  require(n >= 1 && static_cast<int>(nu.size()) == n, "mu and nu lengths differ");
  detail::require_strictly_decreasing(mu, "mu");
  detail::require_strictly_increasing(nu, "nu");
  if (opt.method == Method::laurent) throw ValidationError("no exact-residue path for this formula");
  auto f = [&](std::span<const cplx> z) {
    cplx v = ipow(cplx(1.0 - q), n) * detail::cross_factor(z, q);
    for (int j = 0; j < n; ++j)
      v *= detail::asep_kernel(z[j], q, t) / ((1.0 - z[j]) * (1.0 - q * z[j])) *
           ipow((1.0 - q * z[j]) / (1.0 - z[j]), mu[j] - nu[j]);
    return v;
  };
  return finish(product_integrate(f, around_one_contours(n, q), opt.quad), opt);
}

/// Blocks of colours: block k holds n_k particles of species k.
struct BlockSpec {
  std::vector<Composition> mu;
  std::vector<Composition> lambda;

  int size() const {
    int n = 0;
    for (auto& b : mu) n += static_cast<int>(b.size());
    return n;
  }

  /// Block k starts entirely to the right of block k+1 and ends entirely to its left;
  /// within a block both mu and lambda decrease strictly.
  void validate() const {
    require(!mu.empty() && mu.size() == lambda.size(), "need matching initial and final blocks");
    for (std::size_t k = 0; k < mu.size(); ++k) {
      require(!mu[k].empty() && mu[k].size() == lambda[k].size(), "block sizes differ");
      detail::require_strictly_decreasing(mu[k], "block of mu");
      detail::require_strictly_decreasing(lambda[k], "block of lambda");
    }
    for (std::size_t i = 0; i < mu.size(); ++i)
      for (std::size_t j = i + 1; j < mu.size(); ++j) {
        require(mu[i].back() > mu[j].front(), "initial blocks must be ordered right to left");
        require(lambda[i].front() < lambda[j].back(), "final blocks must be ordered left to right");
      }
  }

  /// Two-species configurations: block 1 is type 1, block 2 is type 2.
  static BlockSpec from_two_species(const ParticleConfig& initial, const ParticleConfig& final_) {
    BlockSpec b;
    b.mu.resize(2);
    b.lambda.resize(2);
    for (int i = initial.size() - 1; i >= 0; --i) b.mu[initial.species()[i] - 1].push_back(initial.positions()[i]);
    for (int i = final_.size() - 1; i >= 0; --i)
      b.lambda[final_.species()[i] - 1].push_back(final_.positions()[i]);
    return b;
  }
};

/// Predicate for final states that fully reverse the initial block order: block k holds
/// species k, and every species-k particle must end left of every species-(k+1) particle.
inline std::function<bool(const ParticleConfig&)> crossing_configs(const std::vector<Composition>& mu) {
  require(!mu.empty(), "need at least one block");
  std::vector<int> sizes;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    require(!mu[k].empty(), "empty block");
    detail::require_strictly_decreasing(mu[k], "block of mu");
    if (k > 0) require(mu[k - 1].back() > mu[k].front(), "initial blocks must be ordered right to left");
    sizes.push_back(static_cast<int>(mu[k].size()));
  }
  return [sizes](const ParticleConfig& c) {
    std::vector<int> expect;
    for (std::size_t k = 0; k < sizes.size(); ++k) expect.insert(expect.end(), sizes[k], static_cast<int>(k) + 1);
    return c.species() == expect;
  };
}

/// Total crossing of blocks for general q, as an n-fold integral about z = 1.
inline FormulaResult block_crossing(const BlockSpec& spec, double q, double t, const EvalOptions& opt = {}) {
  spec.validate();
  require(t >= 0.0 && std::isfinite(t), "time must be finite and non-negative");
  if (opt.method == Method::laurent) throw ValidationError("exact residues are available at q = 0 only");
  const int n = spec.size();
  auto f = [&](std::span<const cplx> z) {
    cplx v = ipow(cplx(1.0 - q), n) * detail::cross_factor(z, q);
    for (int j = 0; j < n; ++j) v *= detail::asep_kernel(z[j], q, t) / ((1.0 - z[j]) * (1.0 - q * z[j]));
    std::size_t off = 0;
    for (std::size_t k = 0; k < spec.mu.size(); ++k) {
      auto zk = z.subspan(off, spec.mu[k].size());
      v *= xi_mu(spec.mu[k], zk, q) * sfF_lambda(spec.lambda[k], zk, q);
      off += spec.mu[k].size();
    }
    return v;
  };
  return finish(product_integrate(f, around_one_contours(n, q), opt.quad), opt);
}

/// Single-species ASEP transition mu -> lambda (both strictly decreasing), as one n-fold
/// integral about z = 1 with the permutation sum written out.
inline FormulaResult asep_single_species(const Composition& mu, const Composition& lambda, double q, double t,
                                         const EvalOptions& opt = {}) {
  const int n = static_cast<int>(mu.size());
  require(n >= 1 && static_cast<int>(lambda.size()) == n, "mu and lambda lengths differ");
  detail::require_strictly_decreasing(mu, "mu");
  detail::require_strictly_decreasing(lambda, "lambda");
  require(t >= 0.0 && std::isfinite(t), "time must be finite and non-negative");
  if (opt.method == Method::laurent) throw ValidationError("no exact-residue path for this formula");
  const auto& perms = permutations_cached(n);
  auto f = [&](std::span<const cplx> z) {
    cplx v = ipow(cplx(1.0 - q), n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) v *= (z[j] - z[i]) / (z[j] - q * z[i]);
    std::vector<cplx> ratio(n);
    for (int j = 0; j < n; ++j) {
      cplx a = 1.0 - z[j], b = 1.0 - q * z[j];
      ratio[j] = a / b;
      v *= std::exp((1.0 - q) * (1.0 - q) * z[j] * t / (a * b)) / (a * b) * ipow(b / a, mu[j]);
    }
    cplx sum(0.0);
    for (const auto& sg : perms.perms) {
      cplx term(1.0);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) term *= (z[sg[j]] - q * z[sg[i]]) / (z[sg[j]] - z[sg[i]]);
        term *= ipow(ratio[sg[i]], lambda[i]);
      }
      sum += term;
    }
    return v * sum;
  };
  return finish(product_integrate(f, around_one_contours(n, q), opt.quad), opt);
}

namespace detail {

// Variables are ordered block by block; entry (i, j) of block k is
// z_j^{i-j-N_k} (1-z_j)^{lambda_i - mu_j - 1}.
inline SeparableSum tasep_block_expansion(const BlockSpec& spec) {
  const int n = spec.size();
  SeparableSum s = SeparableSum::constant(n, 1.0);
  std::vector<int> start;
  int off = 0;
  for (auto& b : spec.mu) {
    start.push_back(off);
    off += static_cast<int>(b.size());
  }
  const int r = static_cast<int>(spec.mu.size());
  for (int k = 0; k < r; ++k)
    for (int l = k + 1; l < r; ++l)
      for (std::size_t i = 0; i < spec.mu[k].size(); ++i)
        for (std::size_t j = 0; j < spec.mu[l].size(); ++j)
          s = s * SeparableSum::difference(n, start[l] + j, start[k] + i);
  for (int k = 0; k < r; ++k) {
    const int nk = static_cast<int>(spec.mu[k].size());
    std::vector<std::vector<SeparableSum>> m(nk, std::vector<SeparableSum>(nk));
    for (int i = 0; i < nk; ++i)
      for (int j = 0; j < nk; ++j)
        m[i][j] = SeparableSum::monomial(n, start[k] + j, i - j - start[k],
                                         static_cast<int>(spec.lambda[k][i] - spec.mu[k][j] - 1));
    s = s * separable_determinant(m, n);
  }
  return s;
}

}  // namespace detail

/// Total crossing of blocks in the multi-species TASEP (q = 0), as determinants.
inline FormulaResult tasep_block_crossing(const BlockSpec& spec, double t, const EvalOptions& opt = {}) {
  spec.validate();
  require(t >= 0.0 && std::isfinite(t), "time must be finite and non-negative");
  auto s = detail::tasep_block_expansion(spec);
  if (opt.method != Method::quadrature) {
    cplx v = s.integrate([&](int, int a, int b) { return kernels::around_one_exp(t, a, b); });
    return finish(v, 0.0, "laurent", opt);
  }
  const int n = spec.size();
  auto f = [&](std::span<const cplx> z) {
    cplx base(1.0);
    for (int j = 0; j < n; ++j) base *= std::exp(z[j] * t / (1.0 - z[j]));
    KahanSum<cplx> acc;
    for (auto& [e, c] : s.terms()) {
      cplx v = c;
      for (int j = 0; j < n; ++j) v *= ipow(z[j], e[2 * j]) * ipow(1.0 - z[j], e[2 * j + 1]);
      acc.add(v);
    }
    return base * acc.value();
  };
  return finish(product_integrate(f, around_one_contours(n, 0.0), opt.quad), opt);
}

/// (-s)^{|nu|-|mu|} G_{mu/nu}(y) as an n-fold integral; mu weakly decreasing.
inline QuadratureResult discrete_transition(const Composition& mu, const Composition& nu, std::span<const cplx> y,
                                            double q, double s, const std::vector<Contour>& contours,
                                            const QuadratureOptions& opt = {}) {
  const int n = static_cast<int>(mu.size());
  require(static_cast<int>(nu.size()) == n && static_cast<int>(contours.size()) == n, "size mismatch");
  for (int i = 1; i < n; ++i) require(mu[i - 1] >= mu[i], "mu must be weakly decreasing");
  for (auto& c : contours)
    for (auto yi : y)
      if (!(std::abs(yi - c.center) < c.radius)) throw ConfigurationError("contours must enclose every y");
  std::int64_t diff = 0;
  for (int i = 0; i < n; ++i) diff += nu[i] - mu[i];
  const cplx pre = ipow(cplx(-s), diff) * ipow(cplx(q), -static_cast<std::int64_t>(y.size()) * n);
  auto f = [&](std::span<const cplx> z) {
    std::vector<cplx> zi(n);
    cplx v = pre * detail::cross_factor(z, q);
    for (int i = 0; i < n; ++i) {
      zi[i] = 1.0 / z[i];
      v /= z[i] * (1.0 - s * z[i]);
      v *= ipow((z[i] - s) / (1.0 - s * z[i]), mu[i]);
      for (auto yj : y) v *= (z[i] - q * yj) / (z[i] - yj);
    }
    return v * f_mu(nu, std::span<const cplx>(zi), q, s);
  };
  return product_integrate(f, contours, opt);
}

}  // namespace masep
