#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "vertex.hpp"

namespace masep {

namespace detail {

struct VertexSampler {
  std::mt19937_64 gen;
  explicit VertexSampler(std::uint64_t seed) : gen(seed) {}
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  cplx annulus(double r_lo, double r_hi) { return std::polar(real(r_lo, r_hi), real(-3.14159, 3.14159)); }

  // Spectral parameters with |z| in [0.2, 0.9], pairwise separated; s and q real.
  std::vector<cplx> spectral(int n, double min_gap = 0.05) {
    std::vector<cplx> z;
    while (static_cast<int>(z.size()) < n) {
      cplx c = annulus(0.2, 0.9);
      bool ok = true;
      for (auto w : z) ok = ok && std::abs(c - w) > min_gap;
      if (ok) z.push_back(c);
    }
    return z;
  }
};

inline double rel_gap(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace detail

/// Sum-to-unity for n <= 2, at most two paths, at `points` random real parameters.
inline CheckReport vertex_sum_to_unity(int points = 20, std::uint64_t seed = 31, const WeightPerturbation& perturb = {}) {
  detail::VertexSampler rs(seed);
  std::vector<VertexParams> ps;
  for (int k = 0; k < points; ++k) ps.push_back({rs.real(0.05, 0.9), rs.real(0.3, 3.0), rs.real(0.1, 0.8)});
  CheckReport r{"vertex sum-to-unity", 0, 0.0, 1e-12, false, ""};
  for (int n = 1; n <= 2; ++n) {
    auto c = stochastic_weights_check(n, 2, ps, perturb);
    r.cases += c.cases;
    r.max_error = std::max(r.max_error, c.max_error);
  }
  return finish_report(r);
}

/// Weakly increasing compositions: f_mu equals its product form.
inline CheckReport f_factor_check(int points = 100, std::uint64_t seed = 32) {
  detail::VertexSampler rs(seed);
  CheckReport r{"f factorization", points, 0.0, 1e-10, false, ""};
  for (int k = 0; k < points; ++k) {
    int n = rs.integer(1, 3);
    Composition d(n);
    for (auto& x : d) x = rs.integer(0, 3);
    std::sort(d.begin(), d.end());
    auto z = rs.spectral(n);
    double q = rs.real(0.3, 2.0), s = rs.real(0.1, 0.7);
    r.max_error = std::max(r.max_error, detail::rel_gap(f_mu(d, z, q, s), f_antidominant(d, z, q, s)));
  }
  return finish_report(r);
}

/// Compositions made of two blocks whose parts are ordered across blocks factorize.
inline CheckReport block_factorization_check(int points = 100, std::uint64_t seed = 33) {
  detail::VertexSampler rs(seed);
  CheckReport r{"block factorization", points, 0.0, 1e-10, false, ""};
  for (int k = 0; k < points; ++k) {
    int n = rs.integer(2, 4), n1 = rs.integer(1, n - 1);
    Composition mu(n);
    for (int i = 0; i < n; ++i) mu[i] = i < n1 ? rs.integer(0, 2) : rs.integer(3, 5);
    auto z = rs.spectral(n);
    double q = rs.real(0.3, 2.0), s = rs.real(0.1, 0.7);
    Composition a(mu.begin(), mu.begin() + n1), b(mu.begin() + n1, mu.end());
    std::vector<cplx> za(z.begin(), z.begin() + n1), zb(z.begin() + n1, z.end());
    cplx rhs = f_mu(a, za, q, s) * f_mu(b, zb, q, s);
    r.max_error = std::max(r.max_error, detail::rel_gap(f_mu(mu, z, q, s), rhs));
  }
  return finish_report(r);
}

/// f_{mu + k^n} = prod ((z - s)/(1 - s z))^k f_mu.
inline CheckReport stability_check(int points = 100, std::uint64_t seed = 34) {
  detail::VertexSampler rs(seed);
  CheckReport r{"stability", points, 0.0, 1e-10, false, ""};
  for (int k = 0; k < points; ++k) {
    int n = rs.integer(1, 3), shift = rs.integer(1, 3);
    Composition mu(n), up(n);
    for (int i = 0; i < n; ++i) {
      mu[i] = rs.integer(0, 3);
      up[i] = mu[i] + shift;
    }
    auto z = rs.spectral(n);
    double q = rs.real(0.3, 2.0), s = rs.real(0.1, 0.7);
    cplx rhs = f_mu(mu, z, q, s);
    for (auto zi : z) rhs *= ipow((zi - s) / (1.0 - s * zi), shift);
    r.max_error = std::max(r.max_error, detail::rel_gap(f_mu(up, z, q, s), rhs));
  }
  return finish_report(r);
}

/// Sum of f_mu over rearrangements of lambda equals the symmetrized F_lambda, n <= 3, |lambda| <= 4.
inline CheckReport f_to_F_check(int points = 100, std::uint64_t seed = 35) {
  detail::VertexSampler rs(seed);
  CheckReport r{"f to F symmetrization", points, 0.0, 1e-10, false, ""};
  for (int k = 0; k < points; ++k) {
    int n = rs.integer(1, 3);
    Composition lam(n, 0);
    int budget = 4;
    for (auto& x : lam) {
      x = rs.integer(0, budget);
      budget -= static_cast<int>(x);
    }
    std::sort(lam.rbegin(), lam.rend());
    auto z = rs.spectral(n, 0.1);
    double q = rs.real(0.3, 2.0), s = rs.real(0.1, 0.7);
    r.max_error = std::max(r.max_error, detail::rel_gap(f_rearrangement_sum(lam, z, q, s), F_lambda_sym(lam, z, q, s)));
  }
  return finish_report(r);
}

/// q = 0: the permutation sum for sfF equals its Vandermonde-normalized determinant.
inline CheckReport sfF_determinant_check(int points = 100, std::uint64_t seed = 36) {
  detail::VertexSampler rs(seed);
  CheckReport r{"q = 0 determinant", points, 0.0, 1e-10, false, ""};
  const Composition lam{4, 2, 0};
  for (int k = 0; k < points; ++k) {
    auto u = rs.spectral(3, 0.1);
    r.max_error = std::max(r.max_error, detail::rel_gap(sfF_lambda(lam, u, 0.0), sfF_lambda_det(lam, u)));
  }
  return finish_report(r);
}

/// Self-orthogonality for n <= 2 at s = 0.1, q = 2 on admissible circles.
inline CheckReport orthogonality_check(QuadratureOptions opt = {1e-9}) {
  CheckReport r{"orthogonality", 0, 0.0, 1e-6, false, ""};
  const double q = 2.0, s = 0.1;
  std::vector<Composition> one{{0}, {1}, {2}}, two{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 0}};
  for (auto* set : {&one, &two})
    for (auto& mu : *set)
      for (auto& nu : *set) {
        auto cs = admissible_circles(static_cast<int>(mu.size()), q, s, 0.2, 4.0);
        auto v = orthogonality_integral(mu, nu, q, s, cs, opt);
        double expect = mu == nu ? 1.0 : 0.0;
        r.max_error = std::max(r.max_error, std::abs(v.value - expect));
        ++r.cases;
      }
  return finish_report(r);
}

/// Truncated Cauchy identity, n <= 2 and one dual row; each case must sit inside its tail bound.
inline CheckReport cauchy_identity_check(int depth = 24) {
  CheckReport r{"truncated Cauchy identity", 0, 0.0, 1.0, false, ""};
  const double q = 0.6, s = 0.3;
  struct Case {
    Composition nu;
    std::vector<cplx> z;
  };
  std::vector<Case> cases{{{0}, {cplx(0.35, 0.05)}},
                          {{1}, {cplx(0.25, -0.1)}},
                          {{0, 1}, {cplx(0.32, 0.04), cplx(0.27, -0.06)}},
                          {{1, 0}, {cplx(0.28, 0.05), cplx(0.36, 0.02)}}};
  std::vector<cplx> y{cplx(0.3, 0.03)};
  double worst = 0.0;
  for (auto& c : cases) {
    auto res = cauchy_check(c.nu, c.z, y, q, s, depth);
    // Ratio of the observed error to the reported bound; below 1 means inside the bound.
    worst = std::max(worst, res.abs_error / res.tail_bound);
    ++r.cases;
  }
  r.max_error = worst;
  return finish_report(r);
}

/// All vertex-layer checks at default sampling. A non-trivial perturbation is applied to
/// the weight table used by sum-to-unity.
inline std::vector<CheckReport> vertex_suite(const WeightPerturbation& perturb = {}) {
  std::vector<CheckReport> out;
  out.push_back(vertex_sum_to_unity(20, 31, perturb));
  out.push_back(positivity_check(2, 2, {0.1, 2.0, 0.3}));
  out.push_back(f_factor_check());
  out.push_back(block_factorization_check());
  out.push_back(stability_check());
  out.push_back(f_to_F_check());
  out.push_back(sfF_determinant_check());
  out.push_back(orthogonality_check());
  out.push_back(cauchy_identity_check());
  return out;
}

}  // namespace masep
