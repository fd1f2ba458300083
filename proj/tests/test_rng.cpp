#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "wrslab/rng.hpp"

using namespace wrs;

TEST_CASE("derived streams are distinct across replicas") {
  std::set<std::uint64_t> seen;
  const SeedSpec base{123456789ULL, 0};
  for (std::uint64_t r = 0; r < 4096; ++r) {
    seen.insert(derive_stream(base.with_replica(r), stream_salt::kRademacher));
  }
  CHECK(seen.size() == 4096);
}

TEST_CASE("derived streams are pure functions of (seed, replica, salt)") {
  const SeedSpec a{42, 7};
  CHECK(derive_stream(a, 1) == derive_stream(a, 1));
  CHECK(derive_stream(a, 1) != derive_stream(a, 2));
  CHECK(derive_stream(a, 1) != derive_stream(SeedSpec{43, 7}, 1));
}

TEST_CASE("identical seeds give identical sequences") {
  Rng a(SeedSpec{99, 5}, stream_salt::kFgn);
  Rng b(SeedSpec{99, 5}, stream_salt::kFgn);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
}

TEST_CASE("uniform01 stays in [0, 1)") {
  Rng rng(SeedSpec{1, 0}, 0x10);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("gaussian moments") {
  Rng rng(SeedSpec{2, 0}, 0x11);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.gaussian();
    sum += z;
    sum2 += z * z;
    sum4 += z * z * z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sum4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("rademacher draw is symmetric and two-valued") {
  Rng rng(SeedSpec{3, 0}, 0x12);
  long up = 0;
  const long n = 100000;
  for (long i = 0; i < n; ++i) {
    const double x = rng.rademacher();
    CHECK((x == 1.0 || x == -1.0));
    if (x > 0) ++up;
  }
  CHECK(std::abs(up - n / 2) < 5 * std::sqrt(0.25 * n));
}
