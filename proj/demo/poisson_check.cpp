// Compares the exact formulas with the matrix-exponential oracle and with simulation
// on a handful of small two-species TASEP transitions.
#include <cmath>
#include <cstdio>
#include <string>

#include <masep/masep.hpp>

namespace {

std::string show(const masep::ParticleConfig& c) {
  std::string s;
  for (int i = 0; i < c.size(); ++i)
    s += (i ? " " : "") + std::to_string(c.positions()[i]) + ":" + std::to_string(c.species()[i]);
  return "[" + s + "]";
}

}  // namespace

int main() {
  using namespace masep;
  struct Case {
    ParticleConfig from, to;
    double t;
  };
  std::vector<Case> cases{
      {ParticleConfig({0}, {1}), ParticleConfig({2}, {1}), 1.0},
      {ParticleConfig({0, 1}, {2, 1}), ParticleConfig({1, 3}, {1, 2}), 1.0},
      {ParticleConfig({0, 1, 2}, {2, 1, 1}), ParticleConfig({1, 2, 3}, {1, 1, 2}), 1.5},
      {ParticleConfig({0, 2}, {1, 2}), ParticleConfig({1, 3}, {1, 2}), 0.8},
  };
  std::printf("%-28s %-28s %16s %16s %16s\n", "from", "to", "formula", "oracle", "monte carlo");
  int worst = 0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    auto& c = cases[k];
    double f = two_tasep_green(c.from, c.to, c.t).value;
    double o = expm_transition(c.from, c.to, 0.0, c.t).value;
    auto mc = estimate_transition(c.from, c.to, 0.0, c.t, 200000, 11 + k);
    std::printf("%-28s %-28s %16.12f %16.12f %9.6f+-%.0e\n", show(c.from).c_str(), show(c.to).c_str(), f,
                o, mc.mean, mc.stderr_);
    if (std::abs(f - o) > 1e-9) worst = 1;
  }
  return worst;
}
