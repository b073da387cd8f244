#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "renyi_reach/divergences.hpp"
#include "renyi_reach/error.hpp"
#include "renyi_reach/majorization.hpp"
#include "support/oracles.hpp"

using namespace renyi_reach;
using Catch::Matchers::WithinAbs;

namespace {

ProbVector pv(std::initializer_list<double> v) { return ProbVector::create(std::vector<double>(v)); }

/// Random y majorized by x: apply a random T-transform chain to x.
ProbVector majorized_by(const ProbVector& x, oracle::Sampler& rng) {
  auto v = x.values();
  const int n = static_cast<int>(v.size());
  for (int s = 0; s < 3; ++s) {
    const auto i = static_cast<std::size_t>(rng.integer(0, n - 1));
    const auto j = static_cast<std::size_t>(rng.integer(0, n - 1));
    const double t = rng.uniform();
    const double a = v[i], b = v[j];
    v[i] = t * a + (1.0 - t) * b;
    v[j] = (1.0 - t) * a + t * b;
  }
  return ProbVector::create(v);
}

}  // namespace

TEST_CASE("majorizes examples", "[majorization]") {
  CHECK(majorizes(pv({1.0, 0.0}), pv({0.5, 0.5})));
  CHECK_FALSE(majorizes(pv({0.5, 0.5}), pv({1.0, 0.0})));
  CHECK(majorizes(pv({0.9, 0.1}), pv({0.7, 0.3})));
  CHECK(majorizes(pv({1.0}), pv({0.5, 0.5})));
  CHECK(majorizes(pv({0.5, 0.5}), pv({0.4, 0.3, 0.3})));
}

TEST_CASE("majorizes is reflexive and transitive", "[majorization][property]") {
  oracle::Sampler rng(41);
  for (int t = 0; t < 300; ++t) {
    const int n = rng.integer(2, 6);
    const auto x = ProbVector::create(rng.probabilities(n));
    REQUIRE(majorizes(x, x));
    const auto y = majorized_by(x, rng);
    const auto z = majorized_by(y, rng);
    REQUIRE(majorizes(x, y));
    REQUIRE(majorizes(y, z));
    REQUIRE(majorizes(x, z));
  }
}

TEST_CASE("pairing_function examples", "[majorization]") {
  for (double a : {0.3, 0.5, 2.0, 4.0}) CHECK_THAT(pairing_function(pv({0.5, 0.5}), pv({0.5, 0.5}), a), WithinAbs(1.0, 1e-15));
  CHECK_THAT(pairing_function(pv({0.6, 0.4}), pv({0.9, 0.1}), 2.0), WithinAbs(34.0 / 9.0, 1e-13));
  CHECK_THAT(pairing_function(pv({0.6, 0.4}), pv({0.9, 0.1}), 0.5), WithinAbs(0.844948974278318, 1e-13));
  CHECK(pairing_function(pv({0.6, 0.4}), pv({1.0, 0.0}), 2.0) == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(pairing_function(pv({0.5, 0.5}), pv({0.2, 0.3, 0.5}), 2.0), Error);
  CHECK_THROWS_AS(pairing_function(pv({0.5, 0.5}), pv({0.5, 0.5}), 1.0), Error);
}

TEST_CASE("pairing against a uniform vector", "[majorization][property]") {
  oracle::Sampler rng(42);
  for (int t = 0; t < 100; ++t) {
    const int d = rng.integer(2, 6);
    const auto x = ProbVector::create(rng.probabilities(d));
    const ProbVector u = ProbVector::create(std::vector<double>(static_cast<std::size_t>(d), 1.0 / d));
    for (double a : {0.5, 2.0}) {
      double direct = 0.0;
      for (double v : x.values()) direct += std::pow(v, 1.0 - a);
      REQUIRE_THAT(pairing_function(u, x, a), WithinAbs(direct * std::pow(static_cast<double>(d), -a), 1e-12));
    }
  }
}

TEST_CASE("schur_direction_check examples", "[majorization]") {
  CHECK(schur_direction_check(pv({0.6, 0.4}), pv({1.0, 0.0}), pv({0.5, 0.5}), 2.0));
  CHECK(schur_direction_check(pv({0.6, 0.4}), pv({0.9, 0.1}), pv({0.7, 0.3}), 2.0));
  CHECK(schur_direction_check(pv({0.6, 0.4}), pv({0.9, 0.1}), pv({0.7, 0.3}), 0.5));
  // Both sides by direct sums.
  CHECK_THAT(pairing_function(pv({0.6, 0.4}), pv({0.7, 0.3}), 2.0), WithinAbs(1.42857142857143, 1e-13));
  CHECK_THAT(pairing_function(pv({0.6, 0.4}), pv({0.7, 0.3}), 0.5),
             WithinAbs(std::sqrt(0.28) + std::sqrt(0.18), 1e-13));
  try {
    schur_direction_check(pv({0.6, 0.4}), pv({0.7, 0.3}), pv({0.9, 0.1}), 2.0);
    FAIL("expected PreconditionViolated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionViolated);
  }
}

TEST_CASE("schur direction holds for random majorized pairs", "[majorization][property]") {
  oracle::Sampler rng(43);
  for (int t = 0; t < 300; ++t) {
    const int n = rng.integer(2, 6);
    const auto a = ProbVector::create(rng.probabilities(n));
    const auto x = ProbVector::create(rng.probabilities(n));
    const auto y = majorized_by(x, rng);
    for (double alpha : {0.3, 0.5, 0.9, 1.5, 2.0}) REQUIRE(schur_direction_check(a, x, y, alpha));
  }
}

TEST_CASE("Schur-Ostrowski finite-difference sign test", "[majorization][property]") {
  oracle::Sampler rng(44);
  const double h = 1e-6;
  for (int t = 0; t < 200; ++t) {
    const int n = rng.integer(2, 5);
    const auto a = rng.probabilities(n);
    // Interior point sorted descending, so pairing sorts stay fixed under +-h.
    auto x = rng.probabilities(n);
    std::sort(x.begin(), x.end(), std::greater<>());
    std::vector<double> as = a;
    std::sort(as.begin(), as.end());
    const auto i = static_cast<std::size_t>(rng.integer(0, n - 1));
    auto j = static_cast<std::size_t>(rng.integer(0, n - 1));
    if (i == j) j = (i + 1) % static_cast<std::size_t>(n);
    for (double alpha : {0.5, 2.0}) {
      // f(x) = sum a_up^alpha x^(1-alpha) evaluated in a fixed pairing.
      auto f = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) s += std::pow(as[k], alpha) * std::pow(v[k], 1.0 - alpha);
        return s;
      };
      auto partial = [&](std::size_t k) {
        auto up = x, down = x;
        up[k] += h;
        down[k] -= h;
        return (f(up) - f(down)) / (2.0 * h);
      };
      const double s = (x[i] - x[j]) * (partial(i) - partial(j));
      if (alpha < 1.0) REQUIRE(s <= 1e-9);
      else REQUIRE(s >= -1e-9);
    }
  }
}

TEST_CASE("von_neumann_check examples and sweep", "[majorization]") {
  const auto aligned = von_neumann_check(ComplexMatrix::diagonal(std::vector<double>{0.9, 0.1}),
                                         ComplexMatrix::diagonal(std::vector<double>{0.8, 0.2}));
  CHECK_THAT(aligned.mid, WithinAbs(0.74, 1e-14));
  CHECK_THAT(aligned.upper, WithinAbs(0.74, 1e-14));
  CHECK_THAT(aligned.lower, WithinAbs(0.26, 1e-14));
  const auto half = ComplexMatrix::identity(2) * cdouble(0.5);
  const auto s = von_neumann_check(half, half);
  CHECK_THAT(s.lower, WithinAbs(0.5, 1e-15));
  CHECK_THAT(s.mid, WithinAbs(0.5, 1e-15));
  CHECK_THAT(s.upper, WithinAbs(0.5, 1e-15));
  oracle::Sampler rng(45);
  for (int t = 0; t < 300; ++t) {
    const int d = rng.integer(1, 5);
    const auto a = oracle::from_eigen(rng.density(d));
    const auto b = oracle::from_eigen(rng.density(d));
    const auto r = von_neumann_check(a, b);
    REQUIRE(r.lower - 1e-9 <= r.mid);
    REQUIRE(r.mid <= r.upper + 1e-9);
  }
  CHECK_THROWS_AS(von_neumann_check(half, ComplexMatrix::identity(3)), Error);
}

TEST_CASE("schur_horn_check examples and sweep", "[majorization]") {
  CHECK(schur_horn_check(ComplexMatrix::diagonal(std::vector<double>{0.2, -1.0, 3.0})));
  CHECK(schur_horn_check(ComplexMatrix(2, 2, {0.5, 0.5, 0.5, 0.5})));
  oracle::Sampler rng(46);
  for (int t = 0; t < 200; ++t) REQUIRE(schur_horn_check(oracle::from_eigen(rng.hermitian(rng.integer(1, 6)))));
  CHECK_THROWS_AS(schur_horn_check(ComplexMatrix(2, 2, {0.0, 1.0, 0.0, 0.0})), Error);
}
