// Total-crossing probability of two blocks as a function of time, for several q.
#include <cstdio>

#include <masep/masep.hpp>

int main() {
  using namespace masep;
  BlockSpec spec{{{2, 1}, {0}}, {{1, 0}, {3}}};
  const double qs[] = {0.0, 0.2, 0.4, 0.6};
  std::printf("%6s", "t");
  for (double q : qs) std::printf("     q = %.1f", q);
  std::printf("\n");
  for (double t = 0.5; t <= 2.51; t += 0.5) {
    std::printf("%6.2f", t);
    for (double q : qs) {
      double v = q == 0.0 ? tasep_block_crossing(spec, t).value : block_crossing(spec, q, t).value;
      std::printf("  %10.8f", v);
    }
    std::printf("\n");
  }
  return 0;
}
