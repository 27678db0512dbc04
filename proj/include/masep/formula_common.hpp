#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include "core.hpp"
#include "quadrature.hpp"
#include "separable.hpp"

namespace masep {

enum class Method { automatic, quadrature, laurent };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::quadrature: return "quadrature";
    case Method::laurent: return "laurent";
    default: return "auto";
  }
}

inline Method parse_method(const std::string& s) {
  if (s == "auto") return Method::automatic;
  if (s == "quadrature") return Method::quadrature;
  if (s == "laurent") return Method::laurent;
  throw ValidationError("unknown method '" + s + "'");
}

struct EvalOptions {
  Method method = Method::automatic;
  QuadratureOptions quad{};
  double z_radius = 0.45;
  double u_radius = 0.80;
  bool fast_path = true;
  double imag_tol = 1e-9;
  double negative_tol = 1e-9;
};

struct FormulaResult {
  double value = 0.0;
  double error = 0.0;
  double imag = 0.0;
  std::string method;
  std::uint64_t evaluations = 0;
  int nodes = 0;
};

/// Converts a complex integral to a real result; a probability may be clamped at zero
/// only within negative_tol.
inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline FormulaResult finish(cplx raw, double err, const std::string& method, const EvalOptions& opt,
                            bool probability = true, std::uint64_t evals = 0, int nodes = 0) {
  if (!std::isfinite(raw.real()) || !std::isfinite(raw.imag()))
    throw AccuracyError("non-finite formula value");
  if (std::abs(raw.imag()) > opt.imag_tol)
    throw AccuracyError("imaginary part " + sci(raw.imag()) + " exceeds tolerance " + sci(opt.imag_tol));
  FormulaResult r;
  r.value = raw.real();
  r.imag = raw.imag();
  r.error = err;
  r.method = method;
  r.evaluations = evals;
  r.nodes = nodes;
  if (probability && r.value < 0.0) {
    if (r.value < -opt.negative_tol)
      throw AccuracyError("negative probability " + sci(r.value));
    r.value = 0.0;
  }
  return r;
}

inline FormulaResult finish(const QuadratureResult& q, const EvalOptions& opt, bool probability = true) {
  return finish(q.value, q.error, "quadrature", opt, probability, q.evaluations, q.nodes);
}

namespace kernels {

// (1/2 pi i) \oint_{|x|<1} e^{(1/x - 1)t} x^a (1-x)^b / (1 - c x)^k around the origin,
// via x = 1/v: e^{(v-1)t} v^{-a-b-2+k} (v-1)^b (v-c)^{-k}, residues at 0, 1, c.
inline cplx origin_exp(double t, int a, int b, double c = 0.0, int k = 0) {
  LaurentDescriptor d;
  d.exp_rate = t;
  d.exp_shift = -t;
  d.z_power = -a - b - 2 + k;
  d.factors = {{1.0, double(b)}};
  d.poles = {0.0, 1.0};
  if (k != 0) {
    d.factors.push_back({c, double(-k)});
    if (c != 0.0 && c != 1.0) d.poles.push_back(c);
  }
  return laurent_residue(d);
}

// (1/2 pi i) \oint e^{x t/(1-x)} x^a (1-x)^b over a negatively oriented small circle about 1,
// via x = 1 - 1/v: e^{(v-1)t} (v-1)^a v^{-a-b-2}, residues at 0 and 1.
inline cplx around_one_exp(double t, int a, int b) {
  LaurentDescriptor d;
  d.exp_rate = t;
  d.exp_shift = -t;
  d.z_power = -a - b - 2;
  d.factors = {{1.0, double(a)}};
  d.poles = {0.0, 1.0};
  return laurent_residue(d);
}

// (1/2 pi i) \oint e^{(x-1)t} x^a (1-x)^b (x - c)^{-k} around the listed points.
inline cplx inverted_exp(double t, int a, int b, std::vector<cplx> poles, double c = 0.0, int k = 0) {
  LaurentDescriptor d;
  d.coefficient = (b % 2 == 0) ? 1.0 : -1.0;
  d.exp_rate = t;
  d.exp_shift = -t;
  d.z_power = a;
  d.factors = {{1.0, double(b)}};
  if (k != 0) d.factors.push_back({c, double(-k)});
  d.poles = std::move(poles);
  return laurent_residue(d);
}

}  // namespace kernels

}  // namespace masep
