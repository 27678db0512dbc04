#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace masep {

using cplx = std::complex<double>;

inline constexpr const char* version = "0.4.0";

// Error taxonomy; the CLI maps each family to an exit code.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : Error {
  using Error::Error;
};
struct ConfigurationError : ValidationError {
  using ValidationError::ValidationError;
};
struct PoleError : ValidationError {
  using ValidationError::ValidationError;
};
struct UnsupportedDescriptor : ValidationError {
  using ValidationError::ValidationError;
};
struct AccuracyError : Error {
  using Error::Error;
};
struct ResourceLimitError : Error {
  using Error::Error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ValidationError("position arithmetic overflow");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw ValidationError("position arithmetic overflow");
  return r;
}

/// Integer power by repeated squaring; negative exponents invert.
inline cplx ipow(cplx z, std::int64_t k) {
  if (k < 0) return cplx(1.0) / ipow(z, -k);
  cplx r(1.0);
  while (k) {
    if (k & 1) r *= z;
    z *= z;
    k >>= 1;
  }
  return r;
}

inline double ipow(double x, std::int64_t k) {
  if (k < 0) return 1.0 / ipow(x, -k);
  double r = 1.0;
  while (k) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}

/// Compensated (Neumaier) accumulator.
template <class T>
class KahanSum {
 public:
  void add(T x) {
    if constexpr (std::is_same_v<T, cplx>) {
      re_.add(x.real());
      im_.add(x.imag());
    } else {
      T t = sum_ + x;
      if (std::abs(sum_) >= std::abs(x))
        c_ += (sum_ - t) + x;
      else
        c_ += (x - t) + sum_;
      sum_ = t;
    }
  }
  T value() const {
    if constexpr (std::is_same_v<T, cplx>)
      return cplx(re_.value(), im_.value());
    else
      return sum_ + c_;
  }

 private:
  struct Empty {};
  T sum_{};
  T c_{};
  std::conditional_t<std::is_same_v<T, cplx>, KahanSum<double>, Empty> re_{}, im_{};
};

// ---------------------------------------------------------------- permutations

inline int permutation_sign(const std::vector<int>& p) {
  int inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

/// All permutations of {0..n-1} in lexicographic order, with signs.
struct PermutationTable {
  std::vector<std::vector<int>> perms;
  std::vector<int> signs;
};

inline std::size_t factorial_cap = 9;

inline PermutationTable permutations(int n) {
  if (n < 0) throw ValidationError("negative permutation size");
  if (static_cast<std::size_t>(n) > factorial_cap)
    throw ResourceLimitError("permutation sum of size " + std::to_string(n) + " exceeds cap " +
                             std::to_string(factorial_cap));
  PermutationTable t;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    t.perms.push_back(p);
    t.signs.push_back(permutation_sign(p));
  } while (std::next_permutation(p.begin(), p.end()));
  return t;
}

/// Cached permutation table for small n.
inline const PermutationTable& permutations_cached(int n) {
  static const std::vector<PermutationTable> cache = [] {
    std::vector<PermutationTable> c;
    for (int k = 0; k <= 7; ++k) c.push_back(permutations(k));
    return c;
  }();
  if (n >= 0 && n <= 7) return cache[n];
  thread_local PermutationTable big;
  big = permutations(n);
  return big;
}

/// Determinant by partial-pivot elimination.
inline cplx determinant(std::vector<std::vector<cplx>> a) {
  const std::size_t n = a.size();
  cplx det(1.0);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == cplx(0.0)) return cplx(0.0);
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      cplx f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

// ---------------------------------------------------------------- configurations

/// Particles on Z: strictly increasing positions, one species label per particle.
/// Species run 1..r; larger species overtake smaller ones.
class ParticleConfig {
 public:
  ParticleConfig() = default;
  ParticleConfig(std::vector<std::int64_t> positions, std::vector<int> species)
      : pos_(std::move(positions)), sp_(std::move(species)) {
    validate();
  }

  /// Two-species configuration from positions and the 1-based indices of type-2 particles.
  static ParticleConfig two_species(std::vector<std::int64_t> positions,
                                    const std::vector<int>& type2_indices) {
    std::vector<int> sp(positions.size(), 1);
    for (std::size_t k = 0; k < type2_indices.size(); ++k) {
      int i = type2_indices[k];
      require(i >= 1 && i <= static_cast<int>(positions.size()), "type-2 index out of range");
      require(k == 0 || type2_indices[k - 1] < i, "type-2 indices must be strictly increasing");
      sp[i - 1] = 2;
    }
    return ParticleConfig(std::move(positions), std::move(sp));
  }

  /// Rainbow configuration: colour c sits at coords[c-1].
  static ParticleConfig rainbow(const std::vector<std::int64_t>& coords) {
    std::vector<int> idx(coords.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return coords[a] < coords[b]; });
    std::vector<std::int64_t> pos;
    std::vector<int> sp;
    for (int i : idx) {
      pos.push_back(coords[i]);
      sp.push_back(i + 1);
    }
    return ParticleConfig(std::move(pos), std::move(sp));
  }

  const std::vector<std::int64_t>& positions() const { return pos_; }
  const std::vector<int>& species() const { return sp_; }
  int size() const { return static_cast<int>(pos_.size()); }
  int species_count() const { return sp_.empty() ? 0 : *std::max_element(sp_.begin(), sp_.end()); }

  /// 1-based indices of particles of the given species.
  std::vector<int> indices_of(int species) const {
    std::vector<int> r;
    for (int i = 0; i < size(); ++i)
      if (sp_[i] == species) r.push_back(i + 1);
    return r;
  }
  std::vector<int> type2_indices() const { return indices_of(2); }

  bool is_rainbow() const {
    std::vector<int> s = sp_;
    std::sort(s.begin(), s.end());
    for (int i = 0; i < size(); ++i)
      if (s[i] != i + 1) return false;
    return true;
  }

  /// Position of each colour (colour c at index c-1); requires a rainbow configuration.
  std::vector<std::int64_t> colour_coords() const {
    require(is_rainbow(), "configuration is not a rainbow (distinct colours 1..n)");
    std::vector<std::int64_t> c(size());
    for (int i = 0; i < size(); ++i) c[sp_[i] - 1] = pos_[i];
    return c;
  }

  bool operator==(const ParticleConfig&) const = default;
  auto operator<=>(const ParticleConfig&) const = default;

 private:
  void validate() const {
    require(pos_.size() == sp_.size(), "positions and species lengths differ");
    for (std::size_t i = 1; i < pos_.size(); ++i)
      require(pos_[i - 1] < pos_[i], "positions must be strictly increasing");
    for (int s : sp_) require(s >= 1, "species labels must be >= 1");
  }

  std::vector<std::int64_t> pos_;
  std::vector<int> sp_;
};

/// Standard regime for the two-species Green function: nu_i >= mu_i and p_j >= p0_j.
inline bool in_standard_regime(const ParticleConfig& initial, const ParticleConfig& final_) {
  if (initial.size() != final_.size()) return false;
  for (int i = 0; i < initial.size(); ++i)
    if (final_.positions()[i] < initial.positions()[i]) return false;
  auto p0 = initial.type2_indices();
  auto p = final_.type2_indices();
  if (p0.size() != p.size()) return false;
  for (std::size_t j = 0; j < p.size(); ++j)
    if (p[j] < p0[j]) return false;
  return true;
}

/// Multiplicity table of a composition: value -> count.
inline std::vector<std::pair<std::int64_t, int>> multiplicities(const std::vector<std::int64_t>& mu) {
  std::vector<std::int64_t> s = mu;
  std::sort(s.begin(), s.end());
  std::vector<std::pair<std::int64_t, int>> out;
  for (auto v : s) {
    if (!out.empty() && out.back().first == v)
      ++out.back().second;
    else
      out.push_back({v, 1});
  }
  return out;
}

inline std::int64_t inversions(const std::vector<std::int64_t>& mu) {
  std::int64_t c = 0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = i + 1; j < mu.size(); ++j)
      if (mu[i] < mu[j]) ++c;
  return c;
}

/// (a; q)_m = prod_{k=0}^{m-1} (1 - a q^k).
inline cplx q_pochhammer(cplx a, cplx q, int m) {
  cplx r(1.0), qk(1.0);
  for (int k = 0; k < m; ++k) {
    r *= cplx(1.0) - a * qk;
    qk *= q;
  }
  return r;
}

}  // namespace masep
