#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <masep/masep.hpp>

#include "record.hpp"

namespace masep::cli {

/// Overrides from command-line flags; unset fields leave the config alone.
struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> budget;
  std::optional<double> tol;
  int threads = 0;
};

enum ExitCode : int { ok = 0, verification_failed = 1, validation = 2, accuracy = 3, resource = 4 };

namespace detail {

inline const json& need(const json& q, const char* key) {
  if (!q.contains(key)) throw ValidationError(std::string("query is missing '") + key + "'");
  return q.at(key);
}

template <class T>
T get(const json& q, const char* key) {
  try {
    return need(q, key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("query field '") + key + "': " + e.what());
  }
}

template <class T>
T get_or(const json& q, const char* key, T fallback) {
  return q.contains(key) ? get<T>(q, key) : fallback;
}

inline ParticleConfig config_of(const json& j) {
  try {
    auto pos = j.at("positions").get<std::vector<std::int64_t>>();
    std::vector<int> sp;
    if (j.contains("species"))
      sp = j.at("species").get<std::vector<int>>();
    else
      sp.assign(pos.size(), 1);
    return ParticleConfig(std::move(pos), std::move(sp));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad particle configuration: ") + e.what());
  }
}

inline json config_json(const ParticleConfig& c) { return {{"positions", c.positions()}, {"species", c.species()}}; }

inline EvalOptions eval_options(const RunConfig& c, const GlobalOptions& g) {
  EvalOptions o;
  o.method = parse_method(c.method);
  const json& qd = c.quadrature;
  o.quad.tol = get_or(qd, "tol", o.quad.tol);
  o.quad.start_nodes = get_or(qd, "start_nodes", o.quad.start_nodes);
  o.quad.max_nodes = get_or(qd, "max_nodes", o.quad.max_nodes);
  o.quad.eval_budget = get_or(qd, "eval_budget", o.quad.eval_budget);
  o.z_radius = get_or(qd, "z_radius", o.z_radius);
  o.u_radius = get_or(qd, "u_radius", o.u_radius);
  if (g.tol) o.quad.tol = *g.tol;
  if (g.budget) o.quad.eval_budget = *g.budget;
  return o;
}

inline void fill(ResultRecord& r, const FormulaResult& f) {
  r.value = f.value;
  r.error = f.error;
  r.method = f.method;
  r.extra["evaluations"] = f.evaluations;
  r.extra["nodes"] = f.nodes;
}

inline void check_samples(std::uint64_t samples, const GlobalOptions& g) {
  if (samples == 0) throw ValidationError("sample count must be positive");
  if (g.budget && samples > *g.budget)
    throw ResourceLimitError("sample count " + std::to_string(samples) + " exceeds budget " +
                             std::to_string(*g.budget));
}

}  // namespace detail

/// Transition probability: two-species TASEP at q = 0, rainbow ASEP at q > 0.
inline ResultRecord cmd_green(const RunConfig& c, const GlobalOptions& g) {
  const json& q = c.query;
  ResultRecord r;
  auto initial = detail::config_of(detail::need(q, "initial"));
  auto final_ = detail::config_of(detail::need(q, "final"));
  double t = detail::get<double>(q, "t"), rate = detail::get_or(q, "q", 0.0);
  auto opt = detail::eval_options(c, g);
  if (rate == 0.0) {
    detail::fill(r, two_tasep_green(initial, final_, t, opt));
  } else {
    if (!initial.is_rainbow() || !final_.is_rainbow())
      throw UnsupportedDescriptor("at q > 0 both configurations must be rainbows");
    detail::fill(r, r_asep_transition(initial.colour_coords(), final_.colour_coords(), rate, t, opt));
  }
  if (detail::get_or(q, "oracle", false)) {
    auto e = expm_transition(initial, final_, rate, t);
    r.extra["oracle"] = e.value;
    r.extra["oracle_sink_mass"] = e.sink_mass;
  }
  return r;
}

/// Total-crossing probabilities: blocks (any q), rainbow, or the two-species determinant form.
inline ResultRecord cmd_crossing(const RunConfig& c, const GlobalOptions& g) {
  const json& q = c.query;
  ResultRecord r;
  auto opt = detail::eval_options(c, g);
  double t = detail::get<double>(q, "t"), rate = detail::get_or(q, "q", 0.0);
  std::string kind = detail::get_or<std::string>(q, "kind", "block");
  if (kind == "two_tasep") {
    auto initial = detail::config_of(detail::need(q, "initial"));
    auto final_ = detail::config_of(detail::need(q, "final"));
    detail::fill(r, two_tasep_crossing(initial, final_, t, opt));
  } else if (kind == "rainbow") {
    detail::fill(r, rainbow_total_crossing(detail::get<Composition>(q, "mu"), detail::get<Composition>(q, "nu"), rate,
                                           t, opt));
  } else if (kind == "block") {
    BlockSpec spec{detail::get<std::vector<Composition>>(q, "mu"), detail::get<std::vector<Composition>>(q, "lambda")};
    detail::fill(r, rate == 0.0 ? tasep_block_crossing(spec, t, opt) : block_crossing(spec, rate, t, opt));
  } else {
    throw ValidationError("unknown crossing kind '" + kind + "'");
  }
  return r;
}

/// Cumulative crossing past walls s1 < s2, and the one-species wall probability.
inline ResultRecord cmd_wall(const RunConfig& c, const GlobalOptions& g) {
  const json& q = c.query;
  ResultRecord r;
  auto opt = detail::eval_options(c, g);
  std::string form = detail::get_or<std::string>(q, "form", "direct");
  if (form == "gamma") {
    detail::fill(r, gamma_wall(detail::get<int>(q, "n"), detail::get<std::int64_t>(q, "s"), detail::get<double>(q, "t"),
                               opt));
    return r;
  }
  WallQuery w;
  w.s1 = detail::get<std::int64_t>(q, "s1");
  w.s2 = detail::get<std::int64_t>(q, "s2");
  w.rho = detail::get_or(q, "rho", 1.0);
  w.n = detail::get<int>(q, "n");
  w.m = detail::get<int>(q, "m");
  w.t = detail::get<double>(q, "t");
  if (form == "direct")
    detail::fill(r, bernoulli_direct(w, opt));
  else if (form == "inverted")
    detail::fill(r, bernoulli_inverted(w, opt));
  else if (form == "one_wall")
    detail::fill(r, bernoulli_one_wall(w, opt));
  else if (form == "cauchy_binet")
    detail::fill(r, bernoulli_cauchy_binet(w, opt));
  else if (form == "step") {
    auto mu = q.contains("mu") ? detail::get<std::vector<std::int64_t>>(q, "mu") : step_step_positions(w.n, w.m);
    detail::fill(r, cumulative_crossing_step(mu, w.m, w.s1, w.s2, w.t, opt));
  } else
    throw ValidationError("unknown wall form '" + form + "'");
  return r;
}

/// Event of the cumulative crossing: type 1 ends in [s1, s2), type 2 at or beyond s2.
inline bool wall_event(const ParticleConfig& c, std::int64_t s1, std::int64_t s2) {
  for (int i = 0; i < c.size(); ++i) {
    auto x = c.positions()[i];
    if (c.species()[i] == 2 ? x < s2 : (x < s1 || x >= s2)) return false;
  }
  return true;
}

/// Stochastic simulation: single trajectory, transition estimate, Bernoulli sampler, wall estimate.
inline ResultRecord cmd_simulate(const RunConfig& c, const GlobalOptions& g) {
  const json& q = c.query;
  ResultRecord r;
  const std::uint64_t seed = g.seed.value_or(c.seed);
  std::string mode = detail::get_or<std::string>(q, "mode", "trajectory");
  double rate = detail::get_or(q, "q", 0.0);
  r.extra["seed"] = seed;
  if (mode == "trajectory") {
    auto initial = detail::config_of(detail::need(q, "initial"));
    auto end = gillespie_sample(initial, rate, detail::get<double>(q, "t"), seed, 0);
    r.method = "gillespie";
    r.extra["state"] = detail::config_json(end);
  } else if (mode == "bernoulli") {
    CounterRng rng(seed, 0);
    auto c0 = bernoulli_step_initial(detail::get<int>(q, "n"), detail::get<int>(q, "m"), detail::get<double>(q, "rho"),
                                     rng);
    r.method = "bernoulli-sampler";
    r.value = bernoulli_initial_weight(c0, detail::get<int>(q, "m"), detail::get<double>(q, "rho"));
    r.extra["state"] = detail::config_json(c0);
  } else if (mode == "estimate") {
    auto samples = detail::get<std::uint64_t>(q, "samples");
    detail::check_samples(samples, g);
    auto e = estimate_transition(detail::config_of(detail::need(q, "initial")),
                                 detail::config_of(detail::need(q, "target")), rate, detail::get<double>(q, "t"),
                                 samples, seed);
    r.method = "monte-carlo";
    r.value = e.mean;
    r.error = e.stderr_;
    r.extra["hits"] = e.hits;
    r.extra["samples"] = e.samples;
  } else if (mode == "wall") {
    auto samples = detail::get<std::uint64_t>(q, "samples");
    detail::check_samples(samples, g);
    int n = detail::get<int>(q, "n"), m = detail::get<int>(q, "m");
    double rho = detail::get<double>(q, "rho");
    auto s1 = detail::get<std::int64_t>(q, "s1"), s2 = detail::get<std::int64_t>(q, "s2");
    auto e = estimate_probability([&](CounterRng& rng) { return bernoulli_step_initial(n, m, rho, rng); },
                                  [&](const ParticleConfig& x) { return wall_event(x, s1, s2); }, rate,
                                  detail::get<double>(q, "t"), samples, seed);
    r.method = "monte-carlo";
    r.value = e.mean;
    r.error = e.stderr_;
    r.extra["hits"] = e.hits;
    r.extra["samples"] = e.samples;
  } else {
    throw ValidationError("unknown simulate mode '" + mode + "'");
  }
  return r;
}

inline json report_json(const CheckReport& c) {
  return {{"name", c.name},           {"cases", c.cases}, {"max_error", c.max_error},
          {"threshold", c.threshold}, {"pass", c.pass},   {"detail", c.detail}};
}

/// Identity and vertex suites. Value is the number of failed checks.
inline ResultRecord cmd_verify(const RunConfig& c, const GlobalOptions&) {
  const json& q = c.query;
  auto suites = detail::get_or<std::vector<std::string>>(q, "suites", {"identities", "vertex"});
  if (suites.empty()) throw ValidationError("empty suite selection");
  WeightPerturbation perturb;
  if (detail::get_or(q, "perturb", false)) perturb = {{1, 0}, 2, {0, 1}, 1, 1.01};
  std::vector<CheckReport> all;
  for (auto& s : suites) {
    std::vector<CheckReport> part;
    if (s == "identities")
      part = identity_suite();
    else if (s == "vertex")
      part = vertex_suite(perturb);
    else
      throw ValidationError("unknown suite '" + s + "'");
    all.insert(all.end(), part.begin(), part.end());
  }
  ResultRecord r;
  r.method = "suite";
  json checks = json::array();
  int failed = 0;
  for (auto& c : all) {
    checks.push_back(report_json(c));
    failed += c.pass ? 0 : 1;
  }
  r.value = failed;
  r.extra["checks"] = checks;
  return r;
}

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"green", "crossing", "wall", "simulate", "verify"};
  return names;
}

/// Runs one config line; input echo, version and wall-clock are filled in here.
inline ResultRecord run_command(const std::string& command, RunConfig c, const GlobalOptions& g) {
  if (!c.command.empty() && c.command != command)
    throw ValidationError("config command '" + c.command + "' does not match '" + command + "'");
  c.command = command;
  if (g.threads > 0) set_threads(g.threads);
  auto start = std::chrono::steady_clock::now();
  ResultRecord r;
  if (command == "green")
    r = cmd_green(c, g);
  else if (command == "crossing")
    r = cmd_crossing(c, g);
  else if (command == "wall")
    r = cmd_wall(c, g);
  else if (command == "simulate")
    r = cmd_simulate(c, g);
  else if (command == "verify")
    r = cmd_verify(c, g);
  else
    throw ValidationError("unknown command '" + command + "'");
  r.command = command;
  r.input = to_json(c);
  r.input.erase("out");
  r.version = masep::version;
  r.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Exit code for an exception escaping a command.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ResourceLimitError*>(&e)) return resource;
  if (dynamic_cast<const AccuracyError*>(&e)) return accuracy;
  return validation;
}

}  // namespace masep::cli
