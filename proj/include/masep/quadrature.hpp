#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "parallel.hpp"

namespace masep {

/// Circle in C traversed with the given orientation (+1 counterclockwise).
struct Contour {
  cplx center{0.0};
  double radius{0.45};
  int orientation{+1};
};

struct QuadratureOptions {
  double tol = 1e-12;
  int start_nodes = 16;
  int max_nodes = 4096;
  std::uint64_t eval_budget = std::uint64_t{1} << 26;
  int max_dimension = 5;
};

struct QuadratureResult {
  cplx value{0.0};
  double error = 0.0;
  int nodes = 0;
  std::uint64_t evaluations = 0;
};

/// Refinement could not reach the requested tolerance; carries the best estimate.
struct QuadratureAccuracyError : AccuracyError {
  QuadratureAccuracyError(const std::string& msg, QuadratureResult best)
      : AccuracyError(msg), best(best) {}
  QuadratureResult best;
};

inline void validate_contour(const Contour& c) {
  if (!(c.radius > 0.0) || !std::isfinite(c.radius))
    throw ConfigurationError("contour radius must be positive and finite");
  if (c.orientation != 1 && c.orientation != -1)
    throw ConfigurationError("contour orientation must be +1 or -1");
}

/// Throws if a marked point lies within `margin` of the circle.
inline void require_off_contour(const Contour& c, cplx point, double margin, const char* what) {
  double d = std::abs(std::abs(point - c.center) - c.radius);
  if (d < margin) throw ConfigurationError(std::string("contour passes through or near ") + what);
}

/// Nested admissible circles r_i = r0 * g^i about the origin.
inline std::vector<Contour> geometric_circles(int n, double r0, double g) {
  std::vector<Contour> out;
  double r = r0;
  for (int i = 0; i < n; ++i, r *= g) out.push_back({0.0, r, +1});
  return out;
}

namespace detail {

struct Grid {
  std::vector<cplx> points;
  std::vector<cplx> weights;
};

// Phase shift per dimension keeps equal-radius circles from sharing nodes.
inline Grid make_grid(const Contour& c, int nodes, int dim) {
  Grid g;
  g.points.resize(nodes);
  g.weights.resize(nodes);
  const double phase = std::fmod(0.381966011250105 * dim, 1.0);
  for (int k = 0; k < nodes; ++k) {
    double th = 2.0 * std::numbers::pi * (k + phase) / nodes;
    cplx e(std::cos(th), std::sin(th));
    cplx dz = c.radius * e;
    g.points[k] = c.center + dz;
    g.weights[k] = double(c.orientation) * dz / double(nodes);
  }
  return g;
}

template <class F>
cplx tensor_sum(F& f, const std::vector<Grid>& grids) {
  const std::size_t d = grids.size();
  const std::size_t n0 = grids[0].points.size();
  std::vector<cplx> rows(n0);
  parallel_for(n0, [&](std::size_t i0) {
    std::vector<cplx> z(d);
    std::vector<std::size_t> idx(d, 0);
    idx[0] = i0;
    z[0] = grids[0].points[i0];
    cplx w0 = grids[0].weights[i0];
    KahanSum<cplx> acc;
    for (std::size_t k = 1; k < d; ++k) z[k] = grids[k].points[0];
    while (true) {
      cplx w = w0;
      for (std::size_t k = 1; k < d; ++k) w *= grids[k].weights[idx[k]];
      acc.add(w * f(std::span<const cplx>(z)));
      std::size_t k = d - 1;
      while (k >= 1) {
        if (++idx[k] < grids[k].points.size()) {
          z[k] = grids[k].points[idx[k]];
          break;
        }
        idx[k] = 0;
        z[k] = grids[k].points[0];
        --k;
      }
      if (k == 0) break;
    }
    rows[i0] = acc.value();
  });
  KahanSum<cplx> total;
  for (auto& r : rows) total.add(r);
  return total.value();
}

}  // namespace detail

/// (1/2 pi i) times the contour integral of f, by the N-point trapezoid rule.
template <class F>
cplx circle_integrate(F&& f, const Contour& c, int nodes) {
  validate_contour(c);
  if (nodes < 1) throw ConfigurationError("node count must be positive");
  auto g = detail::make_grid(c, nodes, 0);
  KahanSum<cplx> acc;
  for (int k = 0; k < nodes; ++k) acc.add(g.weights[k] * f(g.points[k]));
  return acc.value();
}

/// (2 pi i)^{-d} times the integral over a product of circles of f(z_1..z_d).
/// Nodes per dimension double until the error estimate drops below opt.tol. The estimate is
/// the last difference d_k, or d_k^2 / d_{k-1} once d_k <= d_{k-1} / 10 shows geometric decay.
/// f receives a std::span<const cplx> and must be safe to call concurrently.
template <class F>
QuadratureResult product_integrate(F&& f, const std::vector<Contour>& contours,
                                   const QuadratureOptions& opt = {}) {
  const int d = static_cast<int>(contours.size());
  if (d == 0) {
    std::vector<cplx> none;
    return {f(std::span<const cplx>(none)), 0.0, 0, 1};
  }
  if (d > opt.max_dimension)
    throw ResourceLimitError("integration dimension " + std::to_string(d) + " exceeds budget " +
                             std::to_string(opt.max_dimension));
  for (auto& c : contours) validate_contour(c);
  auto level_cost = [&](int nodes) { return std::pow(double(nodes), d); };
  if (level_cost(opt.start_nodes) > double(opt.eval_budget))
    throw ResourceLimitError("initial quadrature grid exceeds the evaluation budget");

  QuadratureResult best;
  bool have_prev = false;
  cplx prev{0.0};
  double last_diff = std::numeric_limits<double>::infinity();
  std::uint64_t evals = 0;
  for (int nodes = opt.start_nodes;; nodes *= 2) {
    std::vector<detail::Grid> grids;
    for (int k = 0; k < d; ++k) grids.push_back(detail::make_grid(contours[k], nodes, k));
    cplx v = detail::tensor_sum(f, grids);
    evals += static_cast<std::uint64_t>(level_cost(nodes));
    best.value = v;
    best.nodes = nodes;
    best.evaluations = evals;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw AccuracyError("integrand produced a non-finite value on the contour");
    double diff = have_prev ? std::abs(v - prev) : std::numeric_limits<double>::infinity();
    best.error = std::isfinite(last_diff) && diff <= 0.1 * last_diff ? diff * diff / last_diff : diff;
    last_diff = diff;
    if (have_prev && best.error < opt.tol) return best;
    have_prev = true;
    prev = v;
    if (nodes * 2 > opt.max_nodes || double(evals) + level_cost(nodes * 2) > double(opt.eval_budget))
      throw QuadratureAccuracyError("quadrature did not reach tolerance within the node budget", best);
  }
}

// ---------------------------------------------------------------- exact residues

/// (z - center)^exponent
struct PoleFactor {
  cplx center{0.0};
  double exponent{0.0};
};

/// coefficient * exp(exp_rate*z + exp_shift) * z^z_power * prod (z - c_k)^{e_k},
/// with residues summed over the listed points.
struct LaurentDescriptor {
  cplx coefficient{1.0};
  cplx exp_rate{0.0};
  cplx exp_shift{0.0};
  double z_power{0.0};
  std::vector<PoleFactor> factors;
  std::vector<cplx> poles;
};

namespace detail {

inline long integral_exponent(double e) {
  if (!std::isfinite(e) || e != std::round(e))
    throw UnsupportedDescriptor("pole order must be an integer");
  return static_cast<long>(e);
}

// Taylor coefficients of (d + w)^e up to degree deg, d != 0.
inline std::vector<cplx> binomial_series(cplx d, long e, int deg) {
  std::vector<cplx> s(deg + 1);
  cplx lead = ipow(d, e);
  cplx b(1.0);
  for (int r = 0; r <= deg; ++r) {
    s[r] = lead * b;
    b *= double(e - r) / double(r + 1) / d;
  }
  return s;
}

inline void series_mul(std::vector<cplx>& a, const std::vector<cplx>& b) {
  const int deg = static_cast<int>(a.size()) - 1;
  std::vector<cplx> r(deg + 1, 0.0);
  for (int i = 0; i <= deg; ++i)
    for (int j = 0; i + j <= deg; ++j) r[i + j] += a[i] * b[j];
  a = std::move(r);
}

}  // namespace detail

/// Sum of residues of a rational-times-exponential function at the requested points.
/// Every singularity is a pole of finite integer order, so the Taylor expansion used
/// at each pole terminates exactly at the pole order; order_cap bounds that length.
inline cplx laurent_residue(const LaurentDescriptor& d, int order_cap = 128) {
  struct Merged {
    cplx c;
    long e;
  };
  std::vector<Merged> fs{{cplx(0.0), detail::integral_exponent(d.z_power)}};
  for (auto& f : d.factors) {
    long e = detail::integral_exponent(f.exponent);
    bool merged = false;
    for (auto& m : fs)
      if (m.c == f.center) {
        m.e += e;
        merged = true;
      }
    if (!merged) fs.push_back({f.center, e});
  }
  KahanSum<cplx> total;
  for (std::size_t pi = 0; pi < d.poles.size(); ++pi) {
    cplx p = d.poles[pi];
    for (std::size_t pj = 0; pj < pi; ++pj)
      if (d.poles[pj] == p) throw UnsupportedDescriptor("duplicate pole in descriptor");
    long order = 0;
    for (auto& m : fs)
      if (m.c == p) order = -m.e;
    if (order <= 0) continue;
    if (order > order_cap) throw UnsupportedDescriptor("pole order exceeds cap");
    const int deg = static_cast<int>(order - 1);
    std::vector<cplx> s(deg + 1, 0.0);
    cplx e0 = std::exp(d.exp_rate * p + d.exp_shift);
    cplx term(1.0);
    for (int r = 0; r <= deg; ++r) {
      s[r] = e0 * term;
      term *= d.exp_rate / double(r + 1);
    }
    for (auto& m : fs) {
      if (m.c == p || m.e == 0) continue;
      detail::series_mul(s, detail::binomial_series(p - m.c, m.e, deg));
    }
    total.add(d.coefficient * s[deg]);
  }
  return total.value();
}

}  // namespace masep
