#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "core.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace masep {

// Multi-species ASEP on Z. Adjacent sites holding (a, b), a != b, with 0 a hole:
// swap to (b, a) at rate 1 if a > b and at rate q if a < b.

/// One trajectory sample at time t, drawn from the stream (seed, sample_index).
inline ParticleConfig gillespie_sample(const ParticleConfig& initial, double q, double t,
                                       std::uint64_t seed, std::uint64_t sample_index) {
  require(q >= 0.0 && std::isfinite(q), "q must be a finite non-negative rate");
  require(t >= 0.0 && std::isfinite(t), "time must be finite and non-negative");
  CounterRng rng(seed, sample_index);
  std::vector<std::int64_t> x = initial.positions();
  std::vector<int> s = initial.species();
  const int n = static_cast<int>(x.size());
  struct Move {
    int i;
    int kind;  // 0 right hop, 1 left hop, 2 swap with right neighbour
    double rate;
  };
  std::vector<Move> moves;
  double now = 0.0;
  while (true) {
    moves.clear();
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      bool right_adj = i + 1 < n && x[i + 1] == x[i] + 1;
      if (right_adj) {
        double r = s[i] > s[i + 1] ? 1.0 : (s[i] < s[i + 1] ? q : 0.0);
        if (r > 0) moves.push_back({i, 2, r});
      } else {
        moves.push_back({i, 0, 1.0});
      }
      bool left_free = i == 0 || x[i - 1] < x[i] - 1;
      if (left_free && q > 0) moves.push_back({i, 1, q});
    }
    for (auto& m : moves) total += m.rate;
    if (total <= 0.0) break;
    now += rng.exponential(total);
    if (now > t) break;
    double u = rng.uniform() * total;
    std::size_t k = 0;
    for (; k + 1 < moves.size(); ++k) {
      if (u < moves[k].rate) break;
      u -= moves[k].rate;
    }
    const Move& m = moves[k];
    if (m.kind == 0)
      x[m.i] = checked_add(x[m.i], 1);
    else if (m.kind == 1)
      x[m.i] = checked_sub(x[m.i], 1);
    else
      std::swap(s[m.i], s[m.i + 1]);
  }
  return ParticleConfig(std::move(x), std::move(s));
}

/// Two-species initial condition: type 1 at 0..n-m-1 and m type-2 particles at the
/// rightmost occupied negative sites of a Bernoulli(rho) product measure.
inline ParticleConfig bernoulli_step_initial(int n, int m, double rho, CounterRng& rng) {
  require(n >= 1 && m >= 0 && m <= n, "need 0 <= m <= n, n >= 1");
  require(rho > 0.0 && rho <= 1.0, "rho must lie in (0, 1]");
  std::vector<std::int64_t> neg;
  for (std::int64_t x = -1; static_cast<int>(neg.size()) < m; --x)
    if (rho >= 1.0 || rng.uniform() < rho) neg.push_back(x);
  std::vector<std::int64_t> pos(neg.rbegin(), neg.rend());
  std::vector<int> sp(m, 2);
  for (int i = 0; i < n - m; ++i) {
    pos.push_back(i);
    sp.push_back(1);
  }
  return ParticleConfig(std::move(pos), std::move(sp));
}

/// Probability of a given Bernoulli initial condition: rho^m (1-rho)^{-mu_1-m}.
inline double bernoulli_initial_weight(const ParticleConfig& c, int m, double rho) {
  if (m == 0) return 1.0;
  std::int64_t mu1 = c.positions().front();
  return std::pow(rho, m) * std::pow(1.0 - rho, double(-mu1 - m));
}

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
};

/// Fraction of samples whose state at time t satisfies `event`. `initial` draws the
/// starting configuration from the sample's own stream.
inline McEstimate estimate_probability(
    const std::function<ParticleConfig(CounterRng&)>& initial,
    const std::function<bool(const ParticleConfig&)>& event, double q, double t,
    std::uint64_t samples, std::uint64_t seed) {
  require(samples > 0, "sample count must be positive");
  const std::uint64_t block = 4096;
  const std::uint64_t blocks = (samples + block - 1) / block;
  std::vector<std::uint64_t> hits(blocks, 0);
  parallel_for(blocks, [&](std::size_t b) {
    std::uint64_t lo = b * block, hi = std::min(samples, lo + block), h = 0;
    for (std::uint64_t k = lo; k < hi; ++k) {
      // Stream 2k seeds the initial condition, stream 2k+1 the dynamics.
      CounterRng init_rng(seed, 2 * k);
      ParticleConfig c0 = initial(init_rng);
      if (event(gillespie_sample(c0, q, t, seed, 2 * k + 1))) ++h;
    }
    hits[b] = h;
  });
  McEstimate e;
  for (auto h : hits) e.hits += h;
  e.samples = samples;
  e.mean = double(e.hits) / double(samples);
  e.stderr_ = std::sqrt(std::max(e.mean * (1.0 - e.mean), 1.0 / double(samples)) / double(samples));
  return e;
}

inline McEstimate estimate_transition(const ParticleConfig& from, const ParticleConfig& to, double q,
                                      double t, std::uint64_t samples, std::uint64_t seed) {
  return estimate_probability([&](CounterRng&) { return from; },
                              [&](const ParticleConfig& c) { return c == to; }, q, t, samples, seed);
}

// ---------------------------------------------------------------- window generator

inline constexpr std::size_t max_window_states = 200000;

/// Sites [lo, hi] with a single sink state collecting all mass that leaves the window.
struct Window {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t width() const { return hi - lo + 1; }
};

/// Window that holds a transition mu -> nu over time t with negligible leakage.
inline Window default_window(const ParticleConfig& from, const ParticleConfig& to, double t, double q = 0.0) {
  std::int64_t lo = std::min(from.positions().front(), to.positions().front());
  std::int64_t hi = std::max(from.positions().back(), to.positions().back());
  std::int64_t spread = static_cast<std::int64_t>(std::ceil(4.0 * std::sqrt(t)));
  std::int64_t left = spread + 2 + static_cast<std::int64_t>(std::ceil(q * t));
  std::int64_t right = static_cast<std::int64_t>(std::ceil(t)) + spread + 2;
  return {checked_sub(lo, left), checked_add(hi, right)};
}

class WindowGenerator {
 public:
  struct Edge {
    std::uint32_t to;
    double rate;
  };

  /// Enumerates every placement of the given species multiset in the window.
  WindowGenerator(Window w, std::vector<int> species_multiset, double q) : w_(w), q_(q) {
    require(w.hi >= w.lo, "empty window");
    require(q >= 0.0 && std::isfinite(q), "q must be a finite non-negative rate");
    std::sort(species_multiset.begin(), species_multiset.end());
    species_ = species_multiset;
    const int W = static_cast<int>(w.width()), n = static_cast<int>(species_.size());
    require(n <= W, "window too narrow for the particles");
    double count = std::exp(std::lgamma(W + 1.0) - std::lgamma(n + 1.0) - std::lgamma(W - n + 1.0));
    double arrangements = std::exp(std::lgamma(n + 1.0));
    for (auto& [v, k] : multiplicities(std::vector<std::int64_t>(species_.begin(), species_.end())))
      arrangements /= std::exp(std::lgamma(k + 1.0));
    if (count * arrangements > double(max_window_states) + 0.5)
      throw ResourceLimitError("window state space exceeds " + std::to_string(max_window_states));
    enumerate();
    build_edges();
  }

  std::size_t size() const { return states_.size(); }
  std::size_t sink() const { return states_.size(); }
  const Window& window() const { return w_; }
  double uniformization_rate() const { return lambda_; }

  /// State index of a configuration; throws if it does not fit the window.
  std::size_t index_of(const ParticleConfig& c) const {
    auto it = index_.find(encode(c));
    if (it == index_.end()) throw ValidationError("configuration outside the window state space");
    return it->second;
  }

  ParticleConfig config_of(std::size_t i) const {
    const std::string& occ = states_[i];
    std::vector<std::int64_t> pos;
    std::vector<int> sp;
    for (std::size_t k = 0; k < occ.size(); ++k)
      if (occ[k]) {
        pos.push_back(w_.lo + static_cast<std::int64_t>(k));
        sp.push_back(occ[k]);
      }
    return ParticleConfig(std::move(pos), std::move(sp));
  }

  const std::vector<Edge>& edges(std::size_t i) const { return edges_[i]; }
  double exit_rate(std::size_t i) const { return exit_[i]; }

 private:
  std::string encode(const ParticleConfig& c) const {
    std::string occ(static_cast<std::size_t>(w_.width()), '\0');
    for (int i = 0; i < c.size(); ++i) {
      std::int64_t x = c.positions()[i];
      if (x < w_.lo || x > w_.hi) throw ValidationError("configuration outside the window");
      occ[static_cast<std::size_t>(x - w_.lo)] = static_cast<char>(c.species()[i]);
    }
    return occ;
  }

  void enumerate() {
    const int W = static_cast<int>(w_.width()), n = static_cast<int>(species_.size());
    std::vector<int> sites(n);
    std::iota(sites.begin(), sites.end(), 0);
    while (true) {
      std::vector<int> sp = species_;
      do {
        std::string occ(W, '\0');
        for (int k = 0; k < n; ++k) occ[sites[k]] = static_cast<char>(sp[k]);
        index_.emplace(occ, states_.size());
        states_.push_back(std::move(occ));
      } while (std::next_permutation(sp.begin(), sp.end()));
      int k = n - 1;
      while (k >= 0 && sites[k] == W - n + k) --k;
      if (k < 0) break;
      ++sites[k];
      for (int j = k + 1; j < n; ++j) sites[j] = sites[j - 1] + 1;
    }
  }

  void build_edges() {
    const std::size_t D = states_.size();
    edges_.assign(D, {});
    exit_.assign(D, 0.0);
    lambda_ = 0.0;
    for (std::size_t i = 0; i < D; ++i) {
      const std::string& occ = states_[i];
      const int W = static_cast<int>(occ.size());
      auto add = [&](std::size_t to, double r) {
        if (r <= 0.0) return;
        edges_[i].push_back({static_cast<std::uint32_t>(to), r});
        exit_[i] += r;
      };
      for (int x = 0; x + 1 < W; ++x) {
        int a = occ[x], b = occ[x + 1];
        if (a == b) continue;
        std::string nxt = occ;
        std::swap(nxt[x], nxt[x + 1]);
        add(index_.at(nxt), a > b ? 1.0 : q_);
      }
      if (occ[W - 1] > 0) add(D, 1.0);
      if (occ[0] > 0) add(D, q_);
      lambda_ = std::max(lambda_, exit_[i]);
    }
  }

  Window w_;
  double q_;
  std::vector<int> species_;
  std::vector<std::string> states_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<double> exit_;
  double lambda_ = 0.0;
};

/// Row e_from * exp(Q t) by uniformization; the last entry is the sink mass.
inline std::vector<double> transient_distribution(const WindowGenerator& g, std::size_t from, double t) {
  require(t >= 0.0 && std::isfinite(t), "time must be finite and non-negative");
  const std::size_t D = g.size() + 1;
  std::vector<double> v(D, 0.0);
  v.at(from) = 1.0;
  const double lam = g.uniformization_rate();
  if (lam <= 0.0 || t == 0.0) return v;
  const int chunks = std::max(1, static_cast<int>(std::ceil(lam * t / 30.0)));
  const double a = lam * t / chunks;
  std::vector<double> term(D), next(D), acc(D);
  for (int c = 0; c < chunks; ++c) {
    term = v;
    double w = std::exp(-a);
    for (std::size_t i = 0; i < D; ++i) acc[i] = w * term[i];
    for (int k = 1; double(k) <= a || w > 1e-18; ++k) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t i = 0; i + 1 < D; ++i) {
        double vi = term[i];
        if (vi == 0.0) continue;
        next[i] += vi * (1.0 - g.exit_rate(i) / lam);
        for (auto& e : g.edges(i)) next[e.to] += vi * e.rate / lam;
      }
      next[D - 1] += term[D - 1];
      term.swap(next);
      w *= a / k;
      for (std::size_t i = 0; i < D; ++i) acc[i] += w * term[i];
    }
    v = acc;
  }
  return v;
}

struct ExpmResult {
  double value = 0.0;
  double sink_mass = 0.0;
  std::size_t states = 0;
};

/// P(from -> to; t) on the truncated window.
inline ExpmResult expm_transition(const WindowGenerator& g, const ParticleConfig& from,
                                  const ParticleConfig& to, double t) {
  auto v = transient_distribution(g, g.index_of(from), t);
  return {v[g.index_of(to)], v.back(), g.size()};
}

inline ExpmResult expm_transition(const ParticleConfig& from, const ParticleConfig& to, double q, double t) {
  std::vector<int> sp = from.species();
  WindowGenerator g(default_window(from, to, t, q), sp, q);
  return expm_transition(g, from, to, t);
}

}  // namespace masep
