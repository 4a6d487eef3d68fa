#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "simbloom/text.hpp"

namespace simbloom {

// Numeric values are part of the filter file format.
enum class DigestId : std::uint8_t {
  md5 = 0,
  sha256 = 1,
  sha3_256 = 2,
};

[[nodiscard]] auto digest_name(DigestId id) noexcept -> std::string_view;
[[nodiscard]] auto parse_digest_name(std::string_view name) -> std::optional<DigestId>;
[[nodiscard]] auto digest_from_code(std::uint8_t code) -> std::optional<DigestId>;
[[nodiscard]] auto digest_size(DigestId id) noexcept -> std::size_t;

enum class FamilyOrigin : std::uint8_t {
  random,  // salts drawn from an entropy source
  fixed,   // salts supplied by the caller or reloaded from a file
  keyed,   // salts derived from a SecretKey
};

[[nodiscard]] auto origin_name(FamilyOrigin origin) noexcept -> std::string_view;

class Salt {
public:
  // Throws Error(invalid_parameter) for an empty salt.
  explicit Salt(Bytes bytes);
  explicit Salt(std::string_view text) : Salt(Bytes(text.begin(), text.end())) {}

  [[nodiscard]] auto bytes() const noexcept -> std::span<const std::uint8_t> { return bytes_; }
  [[nodiscard]] auto size() const noexcept -> std::size_t { return bytes_.size(); }

  friend auto operator==(const Salt&, const Salt&) -> bool = default;

private:
  Bytes bytes_;
};

class SecretKey {
public:
  static constexpr std::size_t kSize = 16;

  explicit SecretKey(const std::array<std::uint8_t, kSize>& bytes) noexcept : bytes_(bytes) {}
  // Accepts exactly 32 hex digits.
  [[nodiscard]] static auto from_hex(std::string_view hex) -> SecretKey;

  [[nodiscard]] auto bytes() const noexcept -> std::span<const std::uint8_t, kSize> { return bytes_; }

  friend auto operator==(const SecretKey&, const SecretKey&) -> bool = default;

private:
  std::array<std::uint8_t, kSize> bytes_;
};

/// Source of random octets for salt generation.
class EntropySource {
public:
  virtual ~EntropySource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;
};

// Operating-system entropy (std::random_device, backed by getrandom/urandom).
class OsEntropy final : public EntropySource {
public:
  void fill(std::span<std::uint8_t> out) override;

private:
  std::random_device device_;
};

// Reproducible stream for tests and benchmarks. Not for production salts.
class SeededEntropy final : public EntropySource {
public:
  explicit SeededEntropy(std::uint64_t seed) : engine_(seed) {}
  void fill(std::span<std::uint8_t> out) override;

private:
  std::mt19937_64 engine_;
};

/// Digest of salt || item, first 8 octets read big-endian, reduced mod kappa.
/// The modulo bias is below 2^-40 for every kappa used in practice.
[[nodiscard]] auto index_of(DigestId digest, std::span<const std::uint8_t> salt,
                            std::span<const std::uint8_t> item, std::uint64_t kappa) -> std::uint64_t;
[[nodiscard]] auto index_of(const Salt& salt, std::span<const std::uint8_t> item, std::uint64_t kappa)
    -> std::uint64_t;

/// The ordered set of salted hash functions shared by comparable filters.
/// Immutable once built; concurrent readers need no synchronisation.
class HashFamily {
public:
  // Throws Error(invalid_parameter) when salts is empty or lengths differ.
  HashFamily(std::vector<Salt> salts, DigestId digest, FamilyOrigin origin);

  [[nodiscard]] auto salts() const noexcept -> const std::vector<Salt>& { return salts_; }
  [[nodiscard]] auto size() const noexcept -> std::size_t { return salts_.size(); }
  [[nodiscard]] auto salt_length() const noexcept -> std::size_t { return salts_.front().size(); }
  [[nodiscard]] auto digest() const noexcept -> DigestId { return digest_; }
  [[nodiscard]] auto origin() const noexcept -> FamilyOrigin { return origin_; }

  // Index produced by the i-th function.
  [[nodiscard]] auto index(std::size_t function, std::span<const std::uint8_t> item,
                           std::uint64_t kappa) const -> std::uint64_t;

  // Two families define the same functions when digest and ordered salts
  // agree; origin is bookkeeping only.
  [[nodiscard]] auto same_functions(const HashFamily& other) const noexcept -> bool {
    return digest_ == other.digest_ && salts_ == other.salts_;
  }

private:
  std::vector<Salt> salts_;
  DigestId digest_;
  FamilyOrigin origin_;
};

/// k distinct salts of salt_len octets each. Duplicates are redrawn, so
/// k > 256^salt_len is rejected as an invalid parameter.
[[nodiscard]] auto generate_random_family(std::size_t k, std::size_t salt_len, EntropySource& entropy,
                                          DigestId digest = DigestId::md5) -> HashFamily;

/// salt_i = AES-128(key, i as a 16-octet big-endian counter), i = 0..k-1.
[[nodiscard]] auto generate_keyed_family(const SecretKey& key, std::size_t k,
                                         DigestId digest = DigestId::md5) -> HashFamily;

}  // namespace simbloom
