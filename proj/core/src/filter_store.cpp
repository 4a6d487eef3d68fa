#include "simbloom/filter_store.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <string>

#include "json.hpp"
#include "simbloom/error.hpp"
#include "simbloom/persistence.hpp"

namespace simbloom {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kFamilyFile = "family.sbf";
constexpr const char* kFilterDir = "filters";

auto config_to_json(const StoreConfig& c) -> json {
  return json{{"kappa", c.kappa},
              {"k", c.k},
              {"nu", c.nu},
              {"salt_len", c.salt_len},
              {"digest", std::string(digest_name(c.digest))},
              {"origin", c.keyed ? "keyed" : "random"}};
}

auto config_from_json(const json& j) -> StoreConfig {
  StoreConfig c;
  c.kappa = j.at("kappa").get<std::uint64_t>();
  c.k = j.at("k").get<std::uint32_t>();
  c.nu = j.at("nu").get<unsigned>();
  c.salt_len = j.at("salt_len").get<std::uint32_t>();
  const auto digest = parse_digest_name(j.at("digest").get<std::string>());
  if (!digest) {
    throw Error(Errc::unsupported, "manifest names an unknown digest");
  }
  c.digest = *digest;
  c.keyed = j.at("origin").get<std::string>() == "keyed";
  return c;
}

void validate_config(const StoreConfig& c) {
  if (c.kappa == 0 || c.k == 0 || c.nu == 0 || c.nu > 255) {
    throw Error(Errc::invalid_parameter, "store needs kappa >= 1, k >= 1 and 1 <= nu <= 255");
  }
  if (!c.keyed && c.salt_len == 0) {
    throw Error(Errc::invalid_parameter, "salt length must be at least 1");
  }
}

}  // namespace

auto utc_timestamp() -> std::string {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

FilterStore::FilterStore(fs::path dir, StoreConfig config, std::vector<StoreEntry> entries,
                         std::optional<HashFamily> family)
    : dir_(std::move(dir)), config_(config), entries_(std::move(entries)), family_(std::move(family)) {}

auto FilterStore::init(const fs::path& dir, const StoreConfig& config, EntropySource& entropy) -> FilterStore {
  validate_config(config);
  std::error_code ec;
  if (fs::exists(dir / kManifest, ec)) {
    throw Error(Errc::io, "a store already exists at " + dir.string());
  }
  fs::create_directories(dir / kFilterDir, ec);
  if (ec) {
    throw Error(Errc::io, "cannot create " + (dir / kFilterDir).string() + ": " + ec.message());
  }
  StoreConfig stored = config;
  std::optional<HashFamily> family;
  if (config.keyed) {
    stored.salt_len = SecretKey::kSize;
  } else {
    family = generate_random_family(config.k, config.salt_len, entropy, config.digest);
    persistence::save_filter(dir / kFamilyFile, BloomFilter::create(*family, config.kappa, config.nu));
  }
  FilterStore store(dir, stored, {}, std::move(family));
  store.write_manifest();
  return store;
}

auto FilterStore::open(const fs::path& dir) -> FilterStore {
  const auto manifest_path = dir / kManifest;
  std::error_code ec;
  if (!fs::exists(manifest_path, ec)) {
    throw Error(Errc::io, "no store at " + dir.string() + " (missing " + kManifest + ")");
  }
  const auto raw = persistence::read_file(manifest_path);
  json doc;
  StoreConfig config;
  std::vector<StoreEntry> entries;
  try {
    doc = json::parse(raw.begin(), raw.end());
    config = config_from_json(doc.at("config"));
    for (const auto& e : doc.at("entries")) {
      entries.push_back(StoreEntry{e.at("label").get<std::string>(), e.at("path").get<std::string>(),
                                   e.at("created_at").get<std::string>(), e.at("nu").get<unsigned>()});
    }
  } catch (const json::exception& ex) {
    throw Error(Errc::format, std::string("malformed store manifest: ") + ex.what());
  }
  validate_config(config);
  std::optional<HashFamily> family;
  if (!config.keyed) {
    family = persistence::load_filter(dir / kFamilyFile).family();
  }
  return FilterStore(dir, config, std::move(entries), std::move(family));
}

auto FilterStore::contains(std::string_view label) const noexcept -> bool {
  return std::any_of(entries_.begin(), entries_.end(), [&](const StoreEntry& e) { return e.label == label; });
}

auto FilterStore::family(const std::optional<SecretKey>& key) const -> HashFamily {
  if (!config_.keyed) return *family_;
  if (!key) {
    throw Error(Errc::configuration, "keyed store: a secret key is required");
  }
  return generate_keyed_family(*key, config_.k, config_.digest);
}

auto FilterStore::new_filter(const std::optional<SecretKey>& key) const -> BloomFilter {
  return BloomFilter::create(family(key), config_.kappa, config_.nu);
}

void FilterStore::add(const std::string& label, const BloomFilter& filter) {
  if (label.empty()) {
    throw Error(Errc::invalid_parameter, "label must not be empty");
  }
  if (contains(label)) {
    throw Error(Errc::duplicate_label, "label already stored: " + label);
  }
  if (filter.kappa() != config_.kappa || filter.family().size() != config_.k ||
      filter.family().digest() != config_.digest || (filter.nu() != config_.nu && !filter.empty())) {
    throw Error(Errc::incompatible, "filter parameters do not match the store configuration");
  }
  if (family_ && !filter.family().same_functions(*family_)) {
    throw Error(Errc::incompatible, "filter uses a different hash family than the store");
  }
  const std::string rel = std::string(kFilterDir) + "/" + next_file_name();
  persistence::save_filter(dir_ / rel, filter);
  entries_.push_back(StoreEntry{label, rel, utc_timestamp(), config_.nu});
  try {
    write_manifest();
  } catch (...) {
    entries_.pop_back();
    std::error_code ignored;
    fs::remove(dir_ / rel, ignored);
    throw;
  }
}

auto FilterStore::load(std::string_view label) const -> BloomFilter {
  const auto it =
      std::find_if(entries_.begin(), entries_.end(), [&](const StoreEntry& e) { return e.label == label; });
  if (it == entries_.end()) {
    throw Error(Errc::missing_label, "no such label: " + std::string(label));
  }
  return persistence::load_filter(dir_ / it->path);
}

void FilterStore::write_manifest() const {
  json doc;
  doc["format"] = "simbloom-store";
  doc["version"] = 1;
  doc["config"] = config_to_json(config_);
  if (!config_.keyed) doc["family_file"] = kFamilyFile;
  doc["entries"] = json::array();
  for (const auto& e : entries_) {
    doc["entries"].push_back({{"label", e.label}, {"path", e.path}, {"created_at", e.created_at}, {"nu", e.nu}});
  }
  const auto text = doc.dump(2) + "\n";
  persistence::write_file_atomically(dir_ / kManifest, as_bytes(text));
}

auto FilterStore::next_file_name() const -> std::string {
  for (std::size_t n = entries_.size() + 1;; ++n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06zu.sbf", n);
    std::error_code ec;
    if (!fs::exists(dir_ / kFilterDir / buf, ec)) return buf;
  }
}

}  // namespace simbloom
