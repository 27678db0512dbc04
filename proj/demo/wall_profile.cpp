// Cumulative crossing for a Bernoulli-step start as the right wall moves, with the
// collapsed and determinant forms side by side.
#include <cstdio>

#include <masep/masep.hpp>

int main() {
  using namespace masep;
  std::printf("%4s %18s %18s %18s\n", "s2", "direct", "one wall", "cauchy-binet");
  for (std::int64_t s2 = -1; s2 <= 5; ++s2) {
    WallQuery w{-4, s2, 0.6, 3, 2, 2.0};
    double d = bernoulli_direct(w).value;
    double o = bernoulli_one_wall(w).value;
    double c = bernoulli_cauchy_binet(w).value;
    std::printf("%4lld %18.14f %18.14f %18.14f\n", static_cast<long long>(s2), d, o, c);
  }
  return 0;
}
