#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "renyi_reach/error.hpp"
#include "renyi_reach/divergences.hpp"
#include "renyi_reach/harness.hpp"
#include "renyi_reach/spectral_bounds.hpp"
#include "support/oracles.hpp"

using namespace renyi_reach;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Spectrum sp(std::initializer_list<double> v) { return Spectrum::from_values(std::vector<double>(v)); }

const Spectrum& ls() {
  static const Spectrum s = sp({0.6, 0.4});
  return s;
}

const Spectrum& le() {
  static const Spectrum s = sp({0.9, 0.1});
  return s;
}

// Closed forms for the running example (lambda_S = [0.6, 0.4], lambda_E = [0.9, 0.1]):
// the second-moment pairing is 0.16/0.9 + 0.36/0.1 = 34/9.
constexpr double kS = 34.0 / 9.0;

}  // namespace

TEST_CASE("joint_spectrum examples", "[bounds]") {
  const auto j = joint_spectrum(ls(), le());
  const std::vector<double> expect{0.54, 0.36, 0.06, 0.04};
  for (std::size_t i = 0; i < 4; ++i) CHECK_THAT(j.values[i], WithinAbs(expect[i], 1e-15));
  const auto trivial = joint_spectrum(sp({0.3, 0.7}), sp({1.0}));
  CHECK(trivial.values == std::vector<double>{0.7, 0.3});
  CHECK(joint_spectrum(sp({0.5, 0.5}), sp({0.5, 0.5})).values == std::vector<double>(4, 0.25));
}

TEST_CASE("block_sums and optimal_spectrum examples", "[bounds]") {
  const auto c = block_sums(joint_spectrum(ls(), le()));
  CHECK_THAT(c[0], WithinAbs(0.9, 1e-15));
  CHECK_THAT(c[1], WithinAbs(1.0, 1e-15));
  const auto pure = block_sums(JointSpectrum{{0.7, 0.3, 0.0, 0.0}, 2, 2});
  CHECK(pure == std::vector<double>{1.0, 1.0});
  CHECK(block_sums(JointSpectrum{{0.25, 0.25, 0.25, 0.25}, 2, 2}) == std::vector<double>{0.5, 1.0});

  const auto o = optimal_spectrum(std::vector<double>{0.9, 1.0}).values();
  CHECK_THAT(o[0], WithinAbs(0.9, 1e-15));
  CHECK_THAT(o[1], WithinAbs(0.1, 1e-15));
  CHECK(optimal_spectrum(std::vector<double>{1.0, 1.0}).values() == std::vector<double>{1.0, 0.0});
  CHECK(optimal_spectrum(std::vector<double>{0.5, 1.0}).values() == std::vector<double>{0.5, 0.5});
}

TEST_CASE("divergence_bound examples", "[bounds]") {
  CHECK_THAT(divergence_bound(ls(), le(), 2.0), WithinAbs(std::log(kS), 1e-12));
  CHECK_THAT(divergence_bound(ls(), le(), 2.0), WithinAbs(1.329136, 1e-6));
  // -2 ln(sqrt(0.36) + sqrt(0.06)) = 0.336958077835371.
  CHECK_THAT(divergence_bound(ls(), le(), 0.5), WithinAbs(0.336958077835371, 1e-12));
  for (double a : {0.5, 0.9, 1.5, 2.0}) CHECK_THAT(divergence_bound(sp({0.5, 0.5}), sp({0.5, 0.5}), a), WithinAbs(0.0, 1e-15));
  CHECK(divergence_bound(sp({0.7, 0.3}), sp({1.0, 0.0}), 2.0) == kInf);
  CHECK_THROWS_AS(divergence_bound(ls(), le(), 1.0), Error);
}

TEST_CASE("bures_bound examples", "[bounds]") {
  CHECK_THAT(bures_bound(ls(), le()), WithinAbs(0.564326569395972, 1e-12));
  CHECK_THAT(bures_bound(ls(), le()), WithinAbs(std::acos(0.844949), 1e-6));
  CHECK_THAT(bures_bound(sp({0.5, 0.5}), sp({0.5, 0.5})), WithinAbs(0.0, 1e-7));
  CHECK_THAT(bures_bound(sp({0.7, 0.3}), sp({1.0, 0.0})), WithinAbs(0.991156586431192, 1e-12));
}

TEST_CASE("tur_bound examples", "[bounds]") {
  CHECK_THAT(tur_bound(ls(), le()), WithinAbs(0.36, 1e-12));
  CHECK(tur_bound(sp({0.5, 0.5}), sp({0.5, 0.5})) == kInf);
  CHECK(tur_bound(sp({0.7, 0.3}), sp({1.0, 0.0})) == 0.0);
}

TEST_CASE("estimator_bound examples", "[bounds]") {
  CHECK(estimator_bound(ls(), le(), 1) == tur_bound(ls(), le()));
  CHECK_THAT(estimator_bound(ls(), le(), 1), WithinAbs(0.36, 1e-12));
  CHECK_THAT(estimator_bound(ls(), le(), 2), WithinAbs(81.0 / 1075.0, 1e-14));
  CHECK_THAT(estimator_bound(ls(), le(), 2), WithinAbs(0.0753489, 1e-7));
  // 1 / ((34/9)^4 - 1) = 6561 / 1329775.
  CHECK_THAT(estimator_bound(ls(), le(), 4), WithinAbs(6561.0 / 1329775.0, 1e-15));
  CHECK_THROWS_AS(estimator_bound(ls(), le(), 0), Error);
  double previous = kInf;
  for (int r = 1; r <= 8; ++r) {
    const double b = estimator_bound(ls(), le(), r);
    CHECK(b < previous);
    previous = b;
  }
}

TEST_CASE("eigen_divergence_bound examples", "[bounds]") {
  // ln(0.01/0.9 + 0.81/0.1) = ln(8.1111...) = 2.09323486381217.
  CHECK_THAT(eigen_divergence_bound(sp({0.9, 0.1}), sp({0.9, 0.1}), 2.0), WithinAbs(2.09323486381217, 1e-12));
  CHECK(eigen_divergence_bound(sp({1.0}), sp({1.0}), 1.5) == 0.0);
  oracle::Sampler rng(51);
  for (int t = 0; t < 100; ++t) {
    const oracle::Mat r = rng.density(3), s = rng.density(3);
    const auto rho = oracle::density(r), sigma = oracle::density(s);
    REQUIRE(eigen_divergence_bound(spectrum_of(rho), spectrum_of(sigma), 1.5) >=
            petz_renyi(rho, sigma, 1.5).value - 1e-9);
  }
}

TEST_CASE("bound chain consistency and the trivial environment", "[bounds][property]") {
  oracle::Sampler rng(52);
  for (int t = 0; t < 100; ++t) {
    const auto a = Spectrum::from_values(rng.probabilities(rng.integer(1, 4)));
    const auto b = Spectrum::from_values(rng.probabilities(rng.integer(1, 4)));
    for (double alpha : {0.5, 0.9, 1.5, 2.0}) {
      const auto opt = optimal_spectrum(a, b);
      REQUIRE(divergence_bound(a, b, alpha) == eigen_divergence_bound(a, Spectrum::from_values(opt.values()), alpha));
      REQUIRE_THAT(divergence_bound(a, sp({1.0}), alpha), WithinAbs(eigen_divergence_bound(a, a, alpha), 1e-12));
    }
    const auto c = block_sums(joint_spectrum(a, b));
    REQUIRE(std::is_sorted(c.begin(), c.end()));
    REQUIRE_THAT(c.back(), WithinAbs(1.0, 1e-10));
    const auto o = optimal_spectrum(c).values();
    REQUIRE(std::is_sorted(o.rbegin(), o.rend()));
  }
}

TEST_CASE("divergence_bound equals the brute-force permutation optimum", "[bounds][oracle]") {
  oracle::Sampler rng(53);
  const std::vector<std::pair<int, int>> dims{{2, 2}, {2, 3}, {3, 2}, {2, 4}, {4, 2}};
  for (const auto& [ds, de] : dims) {
    for (int t = 0; t < 5; ++t) {
      const auto a = rng.probabilities(ds);
      const auto b = rng.probabilities(de);
      for (double alpha : {0.5, 0.9, 1.5, 2.0}) {
        const double brute = oracle::permutation_max_divergence(a, b, alpha);
        REQUIRE_THAT(divergence_bound(Spectrum::from_values(a), Spectrum::from_values(b), alpha),
                     WithinAbs(brute, 1e-10 * std::max(1.0, brute)));
      }
    }
  }
  // Running example by brute force as well.
  CHECK_THAT(oracle::permutation_max_divergence({0.6, 0.4}, {0.9, 0.1}, 2.0), WithinAbs(std::log(kS), 1e-12));
}

TEST_CASE("extremal_unitary examples", "[bounds]") {
  const auto rs = DensityMatrix::diagonal(std::vector<double>{0.6, 0.4});
  const auto re = DensityMatrix::diagonal(std::vector<double>{0.9, 0.1});
  const auto sigma = evolve(rs, re, extremal_unitary(rs, re));
  const auto ev = spectrum_of(sigma).descending();
  CHECK_THAT(ev[0], WithinAbs(0.9, 1e-12));
  CHECK_THAT(ev[1], WithinAbs(0.1, 1e-12));
  CHECK_THAT(petz_renyi(rs, sigma, 2.0).value, WithinAbs(std::log(kS), 1e-12));

  const auto mixed = DensityMatrix::diagonal(std::vector<double>{0.5, 0.5});
  const auto same = evolve(mixed, mixed, extremal_unitary(mixed, mixed));
  CHECK(max_abs_diff(same.matrix(), mixed.matrix()) <= 1e-14);
  for (double a : {0.5, 2.0}) CHECK_THAT(petz_renyi(mixed, same, a).value, WithinAbs(0.0, 1e-14));

  const auto r73 = DensityMatrix::diagonal(std::vector<double>{0.7, 0.3});
  const auto pure = DensityMatrix::diagonal(std::vector<double>{1.0, 0.0});
  const auto out = evolve(r73, pure, extremal_unitary(r73, pure));
  CHECK_THAT(spectrum_of(out).descending()[0], WithinAbs(1.0, 1e-12));
  CHECK_THAT(bures_angle(r73, out), WithinAbs(std::acos(std::sqrt(0.3)), 1e-9));
  CHECK_THAT(bures_angle(r73, out), WithinAbs(bures_bound(spectrum_of(r73), spectrum_of(pure)), 1e-9));
}

TEST_CASE("extremal_unitary saturates for random non-diagonal states", "[bounds][property]") {
  oracle::Sampler rng(54);
  for (int t = 0; t < 60; ++t) {
    const int ds = rng.integer(1, 4), de = rng.integer(1, 4);
    const auto rs = oracle::density(rng.density(ds));
    const auto re = oracle::density(rng.density(de));
    const auto sigma = evolve(rs, re, extremal_unitary(rs, re));
    const auto opt = optimal_spectrum(spectrum_of(rs), spectrum_of(re)).values();
    const auto got = spectrum_of(sigma).descending();
    for (std::size_t k = 0; k < opt.size(); ++k) REQUIRE_THAT(got[k], WithinAbs(opt[k], 1e-9));
    const ComplexMatrix comm = rs.matrix() * sigma.matrix() - sigma.matrix() * rs.matrix();
    REQUIRE(comm.max_abs() <= 1e-9);
    for (double a : {0.5, 0.9, 1.5, 2.0}) {
      REQUIRE_THAT(petz_renyi(rs, sigma, a).value, WithinAbs(divergence_bound(spectrum_of(rs), spectrum_of(re), a), 1e-8));
    }
  }
}

TEST_CASE("compute_bounds collects everything", "[bounds]") {
  const auto b = compute_bounds(ls(), le(), 2.0, {1, 2, 4});
  CHECK_THAT(b.divergence_bound, WithinAbs(std::log(kS), 1e-12));
  CHECK_THAT(b.bures_bound, WithinAbs(0.564326569395972, 1e-12));
  CHECK(b.tur_bound == b.estimator_bounds.at(1));
  CHECK(b.estimator_bounds.size() == 3);
  CHECK_THAT(b.optimal_spectrum[0], WithinAbs(0.9, 1e-15));
}
