#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace simbloom {

using Bytes = std::vector<std::uint8_t>;

/// View the octets of a UTF-8 string without copying.
[[nodiscard]] inline auto as_bytes(std::string_view s) noexcept -> std::span<const std::uint8_t> {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

// Splits UTF-8 text into characters (one string per code point). Bytes that do
// not start a well-formed sequence are returned as single-octet characters, so
// arbitrary octet strings are accepted.
[[nodiscard]] auto split_characters(std::string_view text) -> std::vector<std::string_view>;

[[nodiscard]] auto to_hex(std::span<const std::uint8_t> bytes) -> std::string;
// Throws Error(invalid_parameter) on odd length or non-hex digits.
[[nodiscard]] auto from_hex(std::string_view hex) -> Bytes;

}  // namespace simbloom
