#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "simbloom/bloom_filter.hpp"
#include "simbloom/hash_family.hpp"

namespace simbloom {

struct StoreConfig {
  std::uint64_t kappa = 65536;
  std::uint32_t k = 2;
  unsigned nu = 2;
  std::uint32_t salt_len = 10;
  DigestId digest = DigestId::md5;
  bool keyed = false;
};

struct StoreEntry {
  std::string label;
  std::string path;  // relative to the store directory
  std::string created_at;
  unsigned nu = 0;
};

/// A password history: one filter file per label plus manifest.json.
///
/// Random-salt stores keep their hash family in family.sbf (an empty filter)
/// so later additions stay comparable. Keyed stores keep no family on disk
/// and rebuild it from the caller's SecretKey.
///
/// Not synchronised; callers serialise mutations.
class FilterStore {
public:
  // Creates the directory layout. Throws Error(io) if a store already exists there.
  static auto init(const std::filesystem::path& dir, const StoreConfig& config, EntropySource& entropy)
      -> FilterStore;
  // Throws Error(io) when the manifest is missing or unreadable.
  static auto open(const std::filesystem::path& dir) -> FilterStore;

  [[nodiscard]] auto directory() const noexcept -> const std::filesystem::path& { return dir_; }
  [[nodiscard]] auto config() const noexcept -> const StoreConfig& { return config_; }
  [[nodiscard]] auto entries() const noexcept -> const std::vector<StoreEntry>& { return entries_; }
  [[nodiscard]] auto contains(std::string_view label) const noexcept -> bool;

  // Hash family for new filters. Keyed stores require `key`.
  [[nodiscard]] auto family(const std::optional<SecretKey>& key = std::nullopt) const -> HashFamily;
  [[nodiscard]] auto new_filter(const std::optional<SecretKey>& key = std::nullopt) const -> BloomFilter;

  // Persists the filter and the updated manifest. Duplicate labels raise
  // Error(duplicate_label) and leave the store untouched.
  void add(const std::string& label, const BloomFilter& filter);

  // Throws Error(missing_label).
  [[nodiscard]] auto load(std::string_view label) const -> BloomFilter;

private:
  FilterStore(std::filesystem::path dir, StoreConfig config, std::vector<StoreEntry> entries,
              std::optional<HashFamily> family);

  void write_manifest() const;
  [[nodiscard]] auto next_file_name() const -> std::string;

  std::filesystem::path dir_;
  StoreConfig config_;
  std::vector<StoreEntry> entries_;
  std::optional<HashFamily> family_;
};

[[nodiscard]] auto utc_timestamp() -> std::string;

}  // namespace simbloom
