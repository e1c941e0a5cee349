#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "atlas/rng.hpp"

using atlas::SplitRng;

TEST_SUITE_BEGIN("rng");

TEST_CASE("same seed, same stream") {
  SplitRng a(42), b(42);
  for (int i = 0; i < 50; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge") {
  SplitRng a(1), b(2);
  int equal = 0;
  for (int i = 0; i < 50; ++i) equal += a.next_u64() == b.next_u64();
  CHECK(equal == 0);
}

TEST_CASE("split is pure") {
  SplitRng parent(7);
  SplitRng first = parent.split(13);
  for (int i = 0; i < 10; ++i) parent.next_u64();  // advancing must not matter
  SplitRng second = parent.split(13);
  for (int i = 0; i < 20; ++i) CHECK(first.next_u64() == second.next_u64());
}

TEST_CASE("distinct tokens give distinct streams") {
  SplitRng parent(7);
  SplitRng a = parent.split(1), b = parent.split(2);
  int equal = 0;
  for (int i = 0; i < 50; ++i) equal += a.next_u64() == b.next_u64();
  CHECK(equal == 0);

  SplitRng c = parent.split(1).split(3), d = parent.split(1).split(4);
  equal = 0;
  for (int i = 0; i < 50; ++i) equal += c.next_u64() == d.next_u64();
  CHECK(equal == 0);
}

TEST_CASE("real-token splits separate nearby values") {
  SplitRng parent(7);
  SplitRng a = parent.split_real(0.1), b = parent.split_real(0.2);
  int equal = 0;
  for (int i = 0; i < 50; ++i) equal += a.next_u64() == b.next_u64();
  CHECK(equal == 0);
}

TEST_CASE("uniform range and mean") {
  SplitRng rng(5);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));

  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform(2.0, 3.5);
    CHECK(u >= 2.0);
    CHECK(u < 3.5);
  }
}

TEST_CASE("normal moments") {
  SplitRng rng(9);
  const int n = 40000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::sqrt(var) == doctest::Approx(1.0).epsilon(0.03));
  CHECK(rng.normal(10.0, 0.0) == 10.0);
}

TEST_CASE("exponential moments and domain") {
  SplitRng rng(13);
  const int n = 40000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = rng.exponential(10.0);
    CHECK(e >= 0.0);
    sum += e;
  }
  CHECK(sum / n == doctest::Approx(10.0).epsilon(0.05));
  CHECK_THROWS_AS(rng.exponential(0.0), std::invalid_argument);
  CHECK_THROWS_AS(rng.exponential(-1.0), std::invalid_argument);
}

TEST_CASE("bounded draws") {
  SplitRng rng(21);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 5000; ++i) {
    const std::uint64_t v = rng.below(10);
    CHECK(v < 10);
    seen.insert(v);
  }
  CHECK(seen.size() == 10);
  for (int i = 0; i < 100; ++i) CHECK(rng.below(1) == 0);
  CHECK_THROWS_AS(rng.below(0), std::invalid_argument);
}

TEST_CASE("shuffle permutes") {
  SplitRng rng(31);
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  const std::vector<int> identity = v;
  rng.shuffle(std::span<int>(v));
  CHECK(v != identity);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == identity);

  // Same stream, same permutation.
  std::vector<int> w(100);
  std::iota(w.begin(), w.end(), 0);
  SplitRng rng2(31);
  rng2.shuffle(std::span<int>(w));
  CHECK(w == v);
}

TEST_SUITE_END();
