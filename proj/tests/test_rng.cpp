#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <cstdint>

#include "renyi_reach/rng.hpp"

using renyi_reach::philox4x64_10;
using renyi_reach::Rng;
using renyi_reach::RngSeed;

namespace {

using Block = std::array<std::uint64_t, 4>;

}  // namespace

// Known-answer vectors, cross-checked against NumPy's Philox bit generator.
TEST_CASE("philox4x64-10 known answers", "[rng]") {
  CHECK(philox4x64_10({0, 0, 0, 0}, {0, 0}) ==
        Block{0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL, 0xd7e772cee186176bULL, 0x7e68b68aec7ba23bULL});
  CHECK(philox4x64_10({1, 0, 0, 0}, {0, 0}) ==
        Block{0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL, 0x907d7a052fd5b4dcULL});
  CHECK(philox4x64_10({2, 2, 3, 4}, {0x0123456789abcdefULL, 0xfedcba9876543210ULL}) ==
        Block{0x88e941281d6fe907ULL, 0x5823687dd5272472ULL, 0x246fd1b93a04f59dULL, 0x5f18e9daf3d87de6ULL});
  const std::uint64_t ones = ~0ULL;
  CHECK(philox4x64_10({ones, ones, ones, ones}, {ones, ones}) ==
        Block{0x87b092c3013fe90bULL, 0x438c3c67be8d0224ULL, 0x9cc7d7c69cd777b6ULL, 0xa09caebf594f0ba0ULL});
}

TEST_CASE("streams are reproducible and distinct", "[rng]") {
  Rng a(RngSeed{7, 3}, 1);
  Rng b(RngSeed{7, 3}, 1);
  Rng other_stream(RngSeed{7, 4}, 1);
  Rng other_lane(RngSeed{7, 3}, 2);
  int same_stream = 0, same_lane = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    REQUIRE(x == b.next_u64());
    same_stream += x == other_stream.next_u64();
    same_lane += x == other_lane.next_u64();
  }
  CHECK(same_stream == 0);
  CHECK(same_lane == 0);
  CHECK(RngSeed{7, 0}.with_stream(9) == RngSeed{7, 9});
}

TEST_CASE("uniform and normal draws have the right moments", "[rng]") {
  Rng rng(RngSeed{42, 0});
  const int n = 200000;
  double su = 0.0, sn = 0.0, sn2 = 0.0, sre2 = 0.0, sim2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    const auto c = rng.complex_normal();
    sre2 += c.real() * c.real();
    sim2 += c.imag() * c.imag();
  }
  // 5-sigma windows for each sample mean.
  CHECK(std::abs(su / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sn / n) < 5.0 / std::sqrt(n));
  CHECK(std::abs(sn2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(sre2 / n - 0.5) < 5.0 * std::sqrt(0.5 / n));
  CHECK(std::abs(sim2 / n - 0.5) < 5.0 * std::sqrt(0.5 / n));
}

TEST_CASE("ginibre matrices are deterministic", "[rng]") {
  Rng a(RngSeed{1, 2});
  Rng b(RngSeed{1, 2});
  CHECK(renyi_reach::ginibre(3, 4, a) == renyi_reach::ginibre(3, 4, b));
}
