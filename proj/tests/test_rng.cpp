#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "cfair/rng.hpp"

using cfair::Rng;
using cfair::mix_seed;

TEST_CASE("same seed reproduces the stream exactly") {
  Rng a(12345), b(12345);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(12345), d(12345);
  for (int i = 0; i < 1000; ++i) CHECK(c.uniform() == d.uniform());
}

TEST_CASE("different seeds diverge") {
  Rng a(1), b(2);
  int same = 0;
  for (int i = 0; i < 100; ++i) same += (a.next_u64() == b.next_u64()) ? 1 : 0;
  CHECK(same == 0);
}

TEST_CASE("uniform stays in [0, 1) and covers the range") {
  Rng rng(7);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo < 0.001);
  CHECK(hi > 0.999);
  CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("uniform_below respects the bound and is roughly uniform") {
  Rng rng(99);
  std::vector<int> counts(10, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const uint64_t v = rng.uniform_below(10);
    REQUIRE(v < 10);
    counts[static_cast<size_t>(v)]++;
  }
  for (int c : counts) {
    CHECK(c > n / 10 - 600);
    CHECK(c < n / 10 + 600);
  }
  CHECK(rng.uniform_below(1) == 0);
  CHECK(rng.uniform_below(0) == 0);
}

TEST_CASE("normal deviates have the right first two moments") {
  Rng rng(5);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("bernoulli edge probabilities") {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) CHECK_FALSE(rng.bernoulli(0.0));
  for (int i = 0; i < 100; ++i) CHECK(rng.bernoulli(1.0));
  int hits = 0;
  for (int i = 0; i < 100000; ++i) hits += rng.bernoulli(0.3) ? 1 : 0;
  CHECK(std::abs(hits / 100000.0 - 0.3) < 0.01);
}

TEST_CASE("mix_seed separates tags, indices and bases") {
  std::set<uint64_t> seen;
  seen.insert(mix_seed(42, "alpha"));
  seen.insert(mix_seed(42, "beta"));
  seen.insert(mix_seed(42, "alpha", 1));
  seen.insert(mix_seed(42, "alpha", 2));
  seen.insert(mix_seed(43, "alpha"));
  CHECK(seen.size() == 5);
  CHECK(mix_seed(42, "alpha", 7) == mix_seed(42, "alpha", 7));
}

TEST_CASE("mix_seed child streams look independent") {
  Rng a(mix_seed(42, "left"));
  Rng b(mix_seed(42, "right"));
  int same = 0;
  for (int i = 0; i < 100; ++i) same += (a.next_u64() == b.next_u64()) ? 1 : 0;
  CHECK(same == 0);
}
