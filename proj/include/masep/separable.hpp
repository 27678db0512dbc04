#pragma once

#include <array>
#include <map>
#include <vector>

#include "core.hpp"

namespace masep {

/// Finite sum of terms c * prod_v x_v^{a_v} (1 - x_v)^{b_v}. Integrating such a sum over
/// a product of contours reduces to one-dimensional integrals J_v(a, b).
class SeparableSum {
 public:
  explicit SeparableSum(int nvars = 0) : nvars_(nvars) {}

  static SeparableSum constant(int nvars, cplx c) {
    SeparableSum s(nvars);
    if (c != cplx(0.0)) s.terms_[std::vector<int>(2 * nvars, 0)] = c;
    return s;
  }

  static SeparableSum monomial(int nvars, int var, int a, int b, cplx c = 1.0) {
    std::vector<int> e(2 * nvars, 0);
    e[2 * var] = a;
    e[2 * var + 1] = b;
    SeparableSum s(nvars);
    s.terms_[e] = c;
    return s;
  }

  /// x_i - x_j
  static SeparableSum difference(int nvars, int i, int j) {
    SeparableSum s = monomial(nvars, i, 1, 0);
    s += monomial(nvars, j, 1, 0, -1.0);
    return s;
  }

  int vars() const { return nvars_; }
  std::size_t size() const { return terms_.size(); }
  const std::map<std::vector<int>, cplx>& terms() const { return terms_; }

  SeparableSum& operator+=(const SeparableSum& o) {
    for (auto& [e, c] : o.terms_) {
      auto& slot = terms_[e];
      slot += c;
      if (slot == cplx(0.0)) terms_.erase(e);
    }
    return *this;
  }

  SeparableSum operator*(const SeparableSum& o) const {
    require(nvars_ == o.nvars_, "variable count mismatch");
    SeparableSum r(nvars_);
    for (auto& [e1, c1] : terms_)
      for (auto& [e2, c2] : o.terms_) {
        std::vector<int> e(e1.size());
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = e1[k] + e2[k];
        r.terms_[e] += c1 * c2;
      }
    return r;
  }

  SeparableSum scaled(cplx c) const {
    SeparableSum r = *this;
    for (auto& [e, v] : r.terms_) v *= c;
    return r;
  }

  /// Sum over terms of c * prod_v J(v, a_v, b_v), caching each J value.
  template <class J>
  cplx integrate(J&& one_dim) const {
    std::map<std::array<int, 3>, cplx> cache;
    auto get = [&](int v, int a, int b) {
      auto key = std::array<int, 3>{v, a, b};
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
      cplx val = one_dim(v, a, b);
      cache.emplace(key, val);
      return val;
    };
    KahanSum<cplx> acc;
    for (auto& [e, c] : terms_) {
      cplx prod = c;
      for (int v = 0; v < nvars_ && prod != cplx(0.0); ++v) prod *= get(v, e[2 * v], e[2 * v + 1]);
      acc.add(prod);
    }
    return acc.value();
  }

 private:
  int nvars_;
  std::map<std::vector<int>, cplx> terms_;
};

/// Leibniz expansion of a square matrix of separable entries.
inline SeparableSum separable_determinant(const std::vector<std::vector<SeparableSum>>& m, int nvars) {
  const int n = static_cast<int>(m.size());
  const auto& pt = permutations_cached(n);
  SeparableSum total(nvars);
  for (std::size_t k = 0; k < pt.perms.size(); ++k) {
    SeparableSum prod = SeparableSum::constant(nvars, double(pt.signs[k]));
    for (int i = 0; i < n; ++i) prod = prod * m[i][pt.perms[k][i]];
    total += prod;
  }
  return total;
}

}  // namespace masep
