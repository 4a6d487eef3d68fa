#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "simbloom/bloom_filter.hpp"

namespace simbloom {

/// Non-overlapping chunks of nu characters, in order. A trailing chunk shorter
/// than nu is kept as-is. Characters are UTF-8 code points.
[[nodiscard]] auto ngrams(std::string_view text, unsigned nu) -> std::vector<std::string>;

/// Inserts every n-gram of `text`. An empty filter adopts `nu`; a non-empty
/// filter with a different grade raises Error(configuration).
void qinsert(BloomFilter& filter, std::string_view text, unsigned nu);

// Overlap of two filters' true bits. delta = 2 * gamma / (k1 + k2), which is
// the Dice form of the coefficient; two empty filters compare as delta = 1.
struct DistanceReport {
  std::uint64_t gamma = 0;
  std::uint64_t k1 = 0;
  std::uint64_t k2 = 0;
  double delta = 1.0;
};

// Throws Error(incompatible) unless kappa, grade and hash functions agree.
void require_comparable(const BloomFilter& a, const BloomFilter& b);

[[nodiscard]] auto distance(const BloomFilter& a, const BloomFilter& b) -> DistanceReport;

/// Levenshtein distance over UTF-8 characters with unit costs.
[[nodiscard]] auto edit_distance(std::string_view a, std::string_view b) -> std::size_t;

}  // namespace simbloom
