#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "simbloom/hash_family.hpp"
#include "simbloom/text.hpp"

namespace simbloom {

/// Bit bucket of kappa slots indexed by a HashFamily.
///
/// nu records the n-gram grade of the content (0 means whole items were
/// inserted). inserted_count counts insert events, duplicates included; it is
/// an in-process diagnostic and is not part of the file format.
///
/// Concurrent check() calls are safe; insert() needs exclusive access.
class BloomFilter {
public:
  // Throws Error(invalid_parameter) for kappa == 0.
  [[nodiscard]] static auto create(HashFamily family, std::uint64_t kappa, unsigned nu = 0) -> BloomFilter;

  // Rebuilds a filter from its persisted parts. `octets` holds ceil(kappa/8)
  // bytes, bit i at octet i/8, position i%8 (least significant first).
  [[nodiscard]] static auto from_octets(HashFamily family, std::uint64_t kappa, unsigned nu,
                                        std::span<const std::uint8_t> octets) -> BloomFilter;

  void insert(std::span<const std::uint8_t> item);
  void insert(std::string_view item) { insert(as_bytes(item)); }

  // False means definitely absent; true means present or a collision.
  [[nodiscard]] auto check(std::span<const std::uint8_t> item) const -> bool;
  [[nodiscard]] auto check(std::string_view item) const -> bool { return check(as_bytes(item)); }

  [[nodiscard]] auto true_bit_count() const noexcept -> std::uint64_t;

  // Popcount of the intersection; both filters must have the same kappa.
  [[nodiscard]] auto common_bit_count(const BloomFilter& other) const -> std::uint64_t;

  [[nodiscard]] auto test_bit(std::uint64_t index) const -> bool;
  [[nodiscard]] auto to_octets() const -> Bytes;

  [[nodiscard]] auto kappa() const noexcept -> std::uint64_t { return kappa_; }
  [[nodiscard]] auto family() const noexcept -> const HashFamily& { return family_; }
  [[nodiscard]] auto nu() const noexcept -> unsigned { return nu_; }
  [[nodiscard]] auto inserted_count() const noexcept -> std::uint64_t { return inserted_; }
  [[nodiscard]] auto empty() const noexcept -> bool { return inserted_ == 0 && true_bit_count() == 0; }

  // Only legal while the filter is empty; used by n-gram insertion.
  void set_nu(unsigned nu);

  // Same bits, kappa, grade and hash functions.
  [[nodiscard]] auto same_content(const BloomFilter& other) const noexcept -> bool;

private:
  BloomFilter(HashFamily family, std::uint64_t kappa, unsigned nu);

  HashFamily family_;
  std::uint64_t kappa_;
  unsigned nu_;
  std::uint64_t inserted_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace simbloom
