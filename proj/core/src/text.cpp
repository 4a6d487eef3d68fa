#include "simbloom/text.hpp"

#include "simbloom/error.hpp"

namespace simbloom {

namespace {

auto sequence_length(std::uint8_t lead) noexcept -> std::size_t {
  if (lead < 0x80) return 1;
  if (lead >= 0xC2 && lead <= 0xDF) return 2;
  if (lead >= 0xE0 && lead <= 0xEF) return 3;
  if (lead >= 0xF0 && lead <= 0xF4) return 4;
  return 0;
}

auto is_continuation(std::uint8_t b) noexcept -> bool { return (b & 0xC0) == 0x80; }

auto hex_value(char c) -> int {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

auto split_characters(std::string_view text) -> std::vector<std::string_view> {
  std::vector<std::string_view> out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<std::uint8_t>(text[i]);
    std::size_t len = sequence_length(lead);
    if (len == 0 || i + len > text.size()) {
      len = 1;
    } else {
      for (std::size_t j = 1; j < len; ++j) {
        if (!is_continuation(static_cast<std::uint8_t>(text[i + j]))) {
          len = 1;
          break;
        }
      }
    }
    out.push_back(text.substr(i, len));
    i += len;
  }
  return out;
}

auto to_hex(std::span<const std::uint8_t> bytes) -> std::string {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0F]);
  }
  return out;
}

auto from_hex(std::string_view hex) -> Bytes {
  if (hex.size() % 2 != 0) {
    throw Error(Errc::invalid_parameter, "hex string has odd length");
  }
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    const int hi = hex_value(hex[i]);
    const int lo = hex_value(hex[i + 1]);
    if (hi < 0 || lo < 0) {
      throw Error(Errc::invalid_parameter, "invalid hex digit");
    }
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

}  // namespace simbloom
