#pragma once

#include <cstdint>

namespace simbloom::sizing {

// m is taken to be the bucket size kappa.
struct SizingParams {
  std::uint64_t m = 1;
  std::uint64_t k = 1;
  std::uint64_t n = 0;
  double fpp = 0.5;
};

/// (1 - (1 - 1/m)^(k n))^k. Throws for m == 0 or k == 0.
[[nodiscard]] auto false_positive_probability(std::uint64_t m, std::uint64_t k, std::uint64_t n) -> double;

/// ceil(-n ln(fpp) / (ln 2)^2), at least 1. Requires n >= 1 and 0 < fpp < 1.
[[nodiscard]] auto optimal_m(std::uint64_t n, double fpp) -> std::uint64_t;

/// ceil((m / n) ln 2), at least 1. Requires m >= 1 and n >= 1.
[[nodiscard]] auto optimal_k(std::uint64_t m, std::uint64_t n) -> std::uint64_t;

/// Optimal (m, k) for n elements at a deliberately high target fpp so that
/// membership queries drown in collisions. fpp in the result is recomputed
/// from (m, k, n), not copied from the target.
[[nodiscard]] auto obfuscating_params(std::uint64_t n, double target_fpp) -> SizingParams;

/// Same derivation for any target; obfuscating_params is the high-fpp use.
[[nodiscard]] auto params_for(std::uint64_t n, double target_fpp) -> SizingParams;

}  // namespace simbloom::sizing
