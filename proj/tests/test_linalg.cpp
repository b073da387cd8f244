#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "renyi_reach/error.hpp"
#include "renyi_reach/linalg.hpp"
#include "support/oracles.hpp"

using namespace renyi_reach;
using Catch::Matchers::WithinAbs;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected renyi_reach::Error");
  return ErrorCode::InvalidConfig;
}

ComplexMatrix diag(std::initializer_list<double> v) {
  const std::vector<double> d(v);
  return ComplexMatrix::diagonal(d);
}

}  // namespace

TEST_CASE("ComplexMatrix validates shape and finiteness", "[matrix]") {
  CHECK(code_of([] { ComplexMatrix(2, 2, std::vector<cdouble>(3)); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([] {
          ComplexMatrix(1, 1, {cdouble(std::numeric_limits<double>::quiet_NaN(), 0.0)});
        }) == ErrorCode::NonFinite);
  const ComplexMatrix m(2, 2, {1.0, cdouble(0, 2), 3.0, 4.0});
  CHECK(m.adjoint()(0, 1) == cdouble(3.0, 0.0));
  CHECK(m.adjoint()(1, 0) == cdouble(0.0, -2.0));
  CHECK(m.trace() == cdouble(5.0, 0.0));
  CHECK(m.transpose()(0, 1) == 3.0);
  CHECK(code_of([&] { max_abs_diff(m, ComplexMatrix(3, 3)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("validate_density examples", "[linalg]") {
  const DensityMatrix ok = validate_density(diag({0.6, 0.4}));
  CHECK(ok.dim() == 2);
  CHECK(code_of([] { validate_density(diag({0.6, 0.5})); }) == ErrorCode::TraceNotOne);
  CHECK(code_of([] { validate_density(diag({1.2, -0.2})); }) == ErrorCode::NotPositive);
  CHECK(code_of([] { validate_density(ComplexMatrix(2, 3)); }) == ErrorCode::NotSquare);
  const ComplexMatrix skew(2, 2, {0.5, 0.3, -0.3, 0.5});
  CHECK(code_of([&] { validate_density(skew); }) == ErrorCode::NotHermitian);
  try {
    validate_density(diag({0.6, 0.5}));
  } catch (const Error& e) {
    CHECK_THAT(e.residual(), WithinAbs(0.1, 1e-12));
  }
}

TEST_CASE("hermitian_eig examples", "[linalg]") {
  const auto id = hermitian_eig(ComplexMatrix::identity(3));
  CHECK(id.values == std::vector<double>{1.0, 1.0, 1.0});
  const auto d = hermitian_eig(diag({0.1, 0.9}));
  CHECK_THAT(d.values[0], WithinAbs(0.9, 1e-15));
  CHECK_THAT(d.values[1], WithinAbs(0.1, 1e-15));
  const auto h = hermitian_eig(ComplexMatrix(2, 2, {0.5, 0.5, 0.5, 0.5}));
  CHECK_THAT(h.values[0], WithinAbs(1.0, 1e-14));
  CHECK_THAT(h.values[1], WithinAbs(0.0, 1e-14));
  CHECK(code_of([] { hermitian_eig(ComplexMatrix(2, 2, {0.0, 1.0, 0.0, 0.0})); }) == ErrorCode::NotHermitian);
}

TEST_CASE("hermitian_eig reconstructs and matches Eigen", "[linalg][property]") {
  oracle::Sampler rng(21);
  for (int t = 0; t < 200; ++t) {
    const int d = rng.integer(1, 8);
    const oracle::Mat h = rng.hermitian(d);
    const ComplexMatrix m = oracle::from_eigen(h);
    const auto eig = hermitian_eig(m);
    REQUIRE(std::is_sorted(eig.values.rbegin(), eig.values.rend()));
    std::vector<cdouble> w(eig.values.begin(), eig.values.end());
    const ComplexMatrix back = spectral_reconstruct(eig.vectors, w);
    REQUIRE(max_abs_diff(back, m) <= 1e-10 * d);
    const auto ref = oracle::eigenvalues(h);
    for (int i = 0; i < d; ++i) REQUIRE_THAT(eig.values[i], WithinAbs(ref[i], 1e-10));
    const ComplexMatrix vv = multiply_adjoint(eig.vectors.adjoint(), eig.vectors.adjoint());
    REQUIRE(max_abs_diff(vv, ComplexMatrix::identity(d)) <= 1e-12);
  }
}

TEST_CASE("hermitian_eig handles degenerate spectra", "[linalg]") {
  oracle::Sampler rng(22);
  const oracle::Mat q = oracle::to_eigen(haar_unitary(5, RngSeed{3, 0}).matrix());
  Eigen::VectorXd lam(5);
  lam << 0.3, 0.3, 0.3, 0.1, 0.0;
  const oracle::Mat m = q * lam.cast<oracle::cd>().asDiagonal() * q.adjoint();
  const auto eig = hermitian_eig(oracle::from_eigen(m));
  for (int i = 0; i < 5; ++i) CHECK_THAT(eig.values[i], WithinAbs(lam(i), 1e-12));
}

TEST_CASE("tensor_product uses the system-major index", "[linalg]") {
  CHECK(tensor_product(ComplexMatrix::identity(2), ComplexMatrix::identity(2)) == ComplexMatrix::identity(4));
  const auto t = tensor_product(diag({0.6, 0.4}), diag({0.9, 0.1}));
  const std::vector<double> expect{0.54, 0.06, 0.36, 0.04};
  for (std::size_t i = 0; i < 4; ++i) CHECK_THAT(t(i, i).real(), WithinAbs(expect[i], 1e-15));
  const ComplexMatrix x(2, 2, {0.0, 1.0, 1.0, 0.0});
  const auto xk = tensor_product(x, diag({1.0, 0.0}));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const bool one = (i == 0 && j == 2) || (i == 2 && j == 0);
      CHECK(xk(i, j) == cdouble(one ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("partial_trace_env examples", "[linalg]") {
  const auto rs = diag({0.6, 0.4});
  const auto re = diag({0.9, 0.1});
  CHECK(max_abs_diff(partial_trace_env(tensor_product(rs, re), 2, 2), rs) <= 1e-15);
  ComplexMatrix mixed = ComplexMatrix::identity(4);
  mixed *= 0.25;
  CHECK(max_abs_diff(partial_trace_env(mixed, 2, 2), ComplexMatrix::identity(2) * cdouble(0.5)) <= 1e-15);
  const auto sorted = partial_trace_env(diag({0.54, 0.36, 0.06, 0.04}), 2, 2);
  CHECK_THAT(sorted(0, 0).real(), WithinAbs(0.90, 1e-15));
  CHECK_THAT(sorted(1, 1).real(), WithinAbs(0.10, 1e-15));
  CHECK(code_of([] { partial_trace_env(ComplexMatrix::identity(4), 3, 2); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("partial trace properties", "[linalg][property]") {
  oracle::Sampler rng(23);
  for (int t = 0; t < 100; ++t) {
    const int ds = rng.integer(1, 4);
    const int de = rng.integer(1, 4);
    const oracle::Mat m = rng.gaussian(ds * de, ds * de);
    const oracle::Mat a = rng.gaussian(ds, ds);
    const ComplexMatrix pm = partial_trace_env(oracle::from_eigen(m), ds, de);
    REQUIRE(std::abs(pm.trace() - m.trace()) <= 1e-12);
    REQUIRE(max_abs_diff(pm, oracle::from_eigen(oracle::partial_trace(m, ds, de))) <= 1e-12);
    const oracle::Mat lhs = oracle::to_eigen(tensor_product(oracle::from_eigen(a), ComplexMatrix::identity(de))) * m;
    const oracle::cd rhs = (a * oracle::to_eigen(pm)).trace();
    REQUIRE(std::abs(lhs.trace() - rhs) <= 1e-10);
  }
}

TEST_CASE("joint spectrum of a product state is the pairwise products", "[linalg][property]") {
  oracle::Sampler rng(24);
  for (int t = 0; t < 50; ++t) {
    const int ds = rng.integer(1, 4), de = rng.integer(1, 4);
    const oracle::Mat a = rng.density(ds), b = rng.density(de);
    const auto la = oracle::eigenvalues(a), lb = oracle::eigenvalues(b);
    std::vector<double> products;
    for (double x : la) {
      for (double y : lb) products.push_back(x * y);
    }
    std::sort(products.begin(), products.end(), std::greater<>());
    const auto got = hermitian_eig(tensor_product(oracle::from_eigen(a), oracle::from_eigen(b))).values;
    for (std::size_t i = 0; i < got.size(); ++i) REQUIRE_THAT(got[i], WithinAbs(products[i], 1e-10));
  }
}

TEST_CASE("matrix_power_psd examples and conventions", "[linalg]") {
  const auto r = matrix_power_psd(diag({0.25, 1.0}), 0.5);
  CHECK(max_abs_diff(r, diag({0.5, 1.0})) <= 1e-15);
  oracle::Sampler rng(25);
  const ComplexMatrix m = oracle::from_eigen(rng.density(3));
  CHECK(max_abs_diff(matrix_power_psd(m, 1.0), m) <= 1e-14);
  const auto inv = matrix_power_psd(diag({0.9, 0.1}), -1.0);
  CHECK_THAT(inv(0, 0).real(), WithinAbs(1.0 / 0.9, 1e-13));
  CHECK_THAT(inv(1, 1).real(), WithinAbs(10.0, 1e-12));
  const auto support = matrix_power_psd(diag({1.0, 0.0}), -0.5);
  CHECK(max_abs_diff(support, diag({1.0, 0.0})) <= 1e-15);
  CHECK(max_abs_diff(matrix_power_psd(diag({0.7, -1e-11}), 0.5), diag({std::sqrt(0.7), 0.0})) <= 1e-15);
  CHECK(code_of([] { matrix_power_psd(diag({1.1, -0.1}), 0.5); }) == ErrorCode::NotPositive);
}

TEST_CASE("haar_unitary examples", "[linalg]") {
  for (std::size_t d : {1u, 2u, 3u, 8u, 16u}) {
    const auto u = haar_unitary(d, RngSeed{d, 1});
    CHECK(max_abs_diff(multiply_adjoint(u.matrix().adjoint(), u.matrix().adjoint()), ComplexMatrix::identity(d)) <=
          1e-12);
  }
  CHECK_THAT(std::abs(haar_unitary(1, RngSeed{5, 0}).matrix()(0, 0)), WithinAbs(1.0, 1e-15));
  CHECK(haar_unitary(2, RngSeed{7, 0}).matrix() == haar_unitary(2, RngSeed{7, 0}).matrix());
  CHECK_FALSE(haar_unitary(2, RngSeed{7, 0}).matrix() == haar_unitary(2, RngSeed{7, 1}).matrix());
}

TEST_CASE("Haar invariance smoke test", "[linalg][property]") {
  for (std::size_t d : {2u, 3u, 4u}) {
    oracle::Sampler rng(26);
    const ComplexMatrix v = haar_unitary(d, RngSeed{99, 0}).matrix();
    const int n = 10000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const ComplexMatrix vu = v * haar_unitary(d, RngSeed{1234, static_cast<std::uint64_t>(i)}).matrix();
      const double x = std::norm(vu(0, 0));
      s += x;
      s2 += x * x;
    }
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / n);
    CHECK(std::abs(mean - 1.0 / static_cast<double>(d)) <= 5.0 * se);
  }
}

TEST_CASE("random densities", "[linalg]") {
  Rng rng(RngSeed{3, 0});
  const auto pure = random_density_fixed(Spectrum::from_values({1.0, 0.0}), rng);
  const auto pv = hermitian_eig(pure.matrix()).values;
  CHECK_THAT(pv[0], WithinAbs(1.0, 1e-12));
  CHECK_THAT(pv[1], WithinAbs(0.0, 1e-12));
  const auto hs = random_density_hs(2, rng);
  CHECK_NOTHROW(validate_density(hs.matrix()));
  Rng seeded(RngSeed{3, 0});
  const auto fixed = random_density_fixed(Spectrum::from_values({0.6, 0.4}), seeded);
  const auto fv = hermitian_eig(fixed.matrix()).values;
  CHECK_THAT(fv[0], WithinAbs(0.6, 1e-10));
  CHECK_THAT(fv[1], WithinAbs(0.4, 1e-10));
}

TEST_CASE("random_povm and Povm validation", "[linalg]") {
  Rng rng(RngSeed{4, 0});
  for (std::size_t k : {2u, 3u, 4u}) {
    for (std::size_t d : {2u, 3u}) {
      const Povm p = random_povm(d, k, rng);
      ComplexMatrix sum(d, d);
      for (const auto& e : p.elements()) {
        sum += e;
        CHECK(hermitian_eig(e).values.back() >= -1e-12);
      }
      CHECK(max_abs_diff(sum, ComplexMatrix::identity(d)) <= 1e-10);
      CHECK(p.outcomes().size() == k);
      CHECK(p.outcomes()[k - 1] == static_cast<double>(k - 1));
    }
  }
  CHECK_NOTHROW(Povm::create({0.0, 1.0}, {diag({1.0, 0.0}), diag({0.0, 1.0})}));
  CHECK(code_of([] { Povm::create({0.0, 0.0}, {diag({1.0, 0.0}), diag({0.0, 1.0})}); }) == ErrorCode::InvalidPovm);
  CHECK(code_of([] { Povm::create({0.0, 1.0}, {diag({1.0, 0.0}), diag({0.0, 0.9})}); }) == ErrorCode::InvalidPovm);
  CHECK(code_of([] { Povm::create({0.0, 1.0}, {diag({1.2, 0.0}), diag({-0.2, 1.0})}); }) == ErrorCode::InvalidPovm);
  CHECK(code_of([&] { random_povm(2, 1, rng); }) == ErrorCode::InvalidPovm);
}

TEST_CASE("Spectrum construction", "[linalg]") {
  const auto s = Spectrum::from_values({0.3, 0.5, 0.2});
  CHECK(s.descending() == std::vector<double>{0.5, 0.3, 0.2});
  CHECK(s.ascending() == std::vector<double>{0.2, 0.3, 0.5});
  CHECK(code_of([] { Spectrum::from_values({0.6, 0.5}); }) == ErrorCode::InvalidSpectrum);
  CHECK(code_of([] { Spectrum::from_values({1.5, -0.5}); }) == ErrorCode::InvalidSpectrum);
  CHECK(code_of([] { Spectrum::from_values({0.4, 0.6}, SpectrumOrder::Descending); }) ==
        ErrorCode::InvalidSpectrum);
  const auto clipped = Spectrum::from_values({1.0 + 5e-11, -5e-11});
  CHECK(clipped.values()[0] == 1.0);
  CHECK(clipped.values()[1] == 0.0);
}

TEST_CASE("unitary_exp and swap", "[linalg]") {
  const ComplexMatrix swap = swap_operator(2);
  const ComplexMatrix expect_swap(4, 4, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1});
  CHECK(swap == expect_swap);
  // SWAP^2 = I so exp(-i t SWAP) = cos t I - i sin t SWAP.
  const double t = 0.3;
  const auto u = unitary_exp(swap, t);
  const ComplexMatrix expect = ComplexMatrix::identity(4) * cdouble(std::cos(t)) + swap * cdouble(0.0, -std::sin(t));
  CHECK(max_abs_diff(u.matrix(), expect) <= 1e-14);
  CHECK(code_of([] { UnitaryMatrix::from_matrix(ComplexMatrix(2, 2, {1.0, 0.1, 0.0, 1.0})); }) ==
        ErrorCode::NotUnitary);
}
