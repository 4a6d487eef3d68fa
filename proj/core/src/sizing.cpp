#include "simbloom/sizing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "simbloom/error.hpp"

namespace simbloom::sizing {

namespace {

void require_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(Errc::invalid_parameter, "false-positive probability must lie in (0, 1)");
  }
}

}  // namespace

auto false_positive_probability(std::uint64_t m, std::uint64_t k, std::uint64_t n) -> double {
  if (m == 0 || k == 0) {
    throw Error(Errc::invalid_parameter, "m and k must be at least 1");
  }
  if (n == 0) return 0.0;
  const double kd = static_cast<double>(k);
  // (1 - 1/m)^(kn) via log1p keeps precision for large m; log1p(-1) = -inf gives 0 for m = 1.
  const double empty_slot = std::exp(kd * static_cast<double>(n) * std::log1p(-1.0 / static_cast<double>(m)));
  return std::clamp(std::pow(1.0 - empty_slot, kd), 0.0, 1.0);
}

auto optimal_m(std::uint64_t n, double fpp) -> std::uint64_t {
  require_probability(fpp);
  if (n == 0) {
    throw Error(Errc::invalid_parameter, "n must be at least 1");
  }
  const double ln2 = std::numbers::ln2;
  const double m = std::ceil(-static_cast<double>(n) * std::log(fpp) / (ln2 * ln2));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(m));
}

auto optimal_k(std::uint64_t m, std::uint64_t n) -> std::uint64_t {
  if (n == 0 || m == 0) {
    throw Error(Errc::invalid_parameter, "m and n must be at least 1");
  }
  const double k = std::ceil(static_cast<double>(m) / static_cast<double>(n) * std::numbers::ln2);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(k));
}

auto params_for(std::uint64_t n, double target_fpp) -> SizingParams {
  SizingParams p;
  p.n = n;
  p.m = optimal_m(n, target_fpp);
  p.k = optimal_k(p.m, n);
  p.fpp = false_positive_probability(p.m, p.k, n);
  return p;
}

auto obfuscating_params(std::uint64_t n, double target_fpp) -> SizingParams {
  return params_for(n, target_fpp);
}

}  // namespace simbloom::sizing
