#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

#include "simbloom/bloom_filter.hpp"
#include "simbloom/text.hpp"

namespace simbloom::persistence {

// Filter file layout, all integers little-endian:
//
//   offset  size        field
//   0       4           magic "SBF1"
//   4       2           version (1)
//   6       1           digest id (0 = MD5, 1 = SHA-256, 2 = SHA3-256)
//   7       1           origin flag (0 = salts inline, 1 = keyed; key not stored)
//   8       8           kappa
//   16      4           k
//   20      1           nu
//   21      4           salt length
//   25      k*salt_len  salts, in family order
//   ...     ceil(kappa/8) bits; bit i is octet i/8, mask 1 << (i % 8)
//
// Padding bits past kappa in the last octet are zero.
inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderSize = 25;

[[nodiscard]] auto serialized_size(std::uint64_t kappa, std::uint64_t k, std::uint64_t salt_len) -> std::uint64_t;

[[nodiscard]] auto serialize(const BloomFilter& filter) -> Bytes;

// Errors: format (bad magic, bad header values, trailing data), truncated,
// unsupported (version, digest id), canonical_form (nonzero padding bits).
[[nodiscard]] auto parse(std::span<const std::uint8_t> data) -> BloomFilter;

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomically(const std::filesystem::path& path, std::span<const std::uint8_t> data);
[[nodiscard]] auto read_file(const std::filesystem::path& path) -> Bytes;

void save_filter(const std::filesystem::path& path, const BloomFilter& filter);
[[nodiscard]] auto load_filter(const std::filesystem::path& path) -> BloomFilter;

}  // namespace simbloom::persistence
