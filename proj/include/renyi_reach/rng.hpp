#pragma once

#include <array>
#include <cstdint>

#include "renyi_reach/matrix.hpp"

namespace renyi_reach {

/// Addresses an independent random stream: (seed, stream) fully determines
/// every draw, so trial i of a campaign uses stream i regardless of schedule.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  [[nodiscard]] RngSeed with_stream(std::uint64_t s) const { return {seed, s}; }
  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

/// Philox4x64-10 block function (Salmon et al., Random123).
std::array<std::uint64_t, 4> philox4x64_10(std::array<std::uint64_t, 4> counter,
                                           std::array<std::uint64_t, 2> key);

/// Counter-based generator. Key = (seed, stream); counter = (block, lane, 0, 0).
/// Distinct lanes give independent sub-streams of the same (seed, stream).
class Rng {
 public:
  explicit Rng(RngSeed seed, std::uint64_t lane = 0);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller (pairs are cached).
  double normal();
  /// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
  cdouble complex_normal();

 private:
  std::array<std::uint64_t, 2> key_;
  std::uint64_t lane_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 4> buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Matrix of iid standard complex Gaussians.
ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace renyi_reach
