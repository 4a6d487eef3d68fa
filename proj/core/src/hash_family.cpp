#include "simbloom/hash_family.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <memory>
#include <set>
#include <string>

#include "simbloom/error.hpp"

namespace simbloom {

namespace {

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const noexcept { EVP_MD_CTX_free(ctx); }
};
struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const noexcept { EVP_CIPHER_CTX_free(ctx); }
};

auto fetch_md(const char* name) -> const EVP_MD* {
  const EVP_MD* md = EVP_MD_fetch(nullptr, name, nullptr);
  if (md == nullptr) {
    throw Error(Errc::unsupported, std::string("digest not available: ") + name);
  }
  return md;
}

// Explicitly fetched digests avoid the implicit per-call fetch of EVP_md5() and friends.
auto evp_digest(DigestId id) -> const EVP_MD* {
  switch (id) {
    case DigestId::md5: {
      static const EVP_MD* md = fetch_md("MD5");
      return md;
    }
    case DigestId::sha256: {
      static const EVP_MD* md = fetch_md("SHA2-256");
      return md;
    }
    case DigestId::sha3_256: {
      static const EVP_MD* md = fetch_md("SHA3-256");
      return md;
    }
  }
  throw Error(Errc::unsupported, "unknown digest id");
}

auto thread_md_ctx() -> EVP_MD_CTX* {
  thread_local std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx{EVP_MD_CTX_new()};
  if (!ctx) throw Error(Errc::resource, "EVP_MD_CTX_new failed");
  return ctx.get();
}

}  // namespace

auto digest_name(DigestId id) noexcept -> std::string_view {
  switch (id) {
    case DigestId::md5: return "md5";
    case DigestId::sha256: return "sha256";
    case DigestId::sha3_256: return "sha3-256";
  }
  return "unknown";
}

auto parse_digest_name(std::string_view name) -> std::optional<DigestId> {
  if (name == "md5") return DigestId::md5;
  if (name == "sha256" || name == "sha-256") return DigestId::sha256;
  if (name == "sha3-256" || name == "sha3_256") return DigestId::sha3_256;
  return std::nullopt;
}

auto digest_from_code(std::uint8_t code) -> std::optional<DigestId> {
  if (code <= static_cast<std::uint8_t>(DigestId::sha3_256)) {
    return static_cast<DigestId>(code);
  }
  return std::nullopt;
}

auto digest_size(DigestId id) noexcept -> std::size_t {
  return id == DigestId::md5 ? 16 : 32;
}

auto origin_name(FamilyOrigin origin) noexcept -> std::string_view {
  switch (origin) {
    case FamilyOrigin::random: return "random";
    case FamilyOrigin::fixed: return "fixed";
    case FamilyOrigin::keyed: return "keyed";
  }
  return "unknown";
}

Salt::Salt(Bytes bytes) : bytes_(std::move(bytes)) {
  if (bytes_.empty()) {
    throw Error(Errc::invalid_parameter, "salt must be at least one octet");
  }
}

auto SecretKey::from_hex(std::string_view hex) -> SecretKey {
  if (hex.size() != 2 * kSize) {
    throw Error(Errc::invalid_parameter, "secret key must be 32 hex digits (16 octets)");
  }
  const Bytes raw = simbloom::from_hex(hex);
  std::array<std::uint8_t, kSize> bytes{};
  std::copy(raw.begin(), raw.end(), bytes.begin());
  return SecretKey(bytes);
}

void OsEntropy::fill(std::span<std::uint8_t> out) {
  // random_device yields 32-bit words; draw one per octet so the cost scales
  // with the salt length like a byte-oriented /dev/urandom read.
  for (auto& b : out) {
    b = static_cast<std::uint8_t>(device_() & 0xFF);
  }
}

void SeededEntropy::fill(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t word = engine_();
    for (int j = 0; j < 8 && i < out.size(); ++j, ++i) {
      out[i] = static_cast<std::uint8_t>(word & 0xFF);
      word >>= 8;
    }
  }
}

auto index_of(DigestId digest, std::span<const std::uint8_t> salt, std::span<const std::uint8_t> item,
              std::uint64_t kappa) -> std::uint64_t {
  if (kappa == 0) {
    throw Error(Errc::invalid_parameter, "kappa must be at least 1");
  }
  EVP_MD_CTX* ctx = thread_md_ctx();
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int md_len = 0;
  if (EVP_DigestInit_ex(ctx, evp_digest(digest), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, salt.data(), salt.size()) != 1 ||
      EVP_DigestUpdate(ctx, item.data(), item.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, md.data(), &md_len) != 1 || md_len < 8) {
    throw Error(Errc::resource, "digest computation failed");
  }
  std::uint64_t value = 0;
  for (int i = 0; i < 8; ++i) {
    value = (value << 8) | md[static_cast<std::size_t>(i)];
  }
  return value % kappa;
}

auto index_of(const Salt& salt, std::span<const std::uint8_t> item, std::uint64_t kappa) -> std::uint64_t {
  return index_of(DigestId::md5, salt.bytes(), item, kappa);
}

HashFamily::HashFamily(std::vector<Salt> salts, DigestId digest, FamilyOrigin origin)
    : salts_(std::move(salts)), digest_(digest), origin_(origin) {
  if (salts_.empty()) {
    throw Error(Errc::invalid_parameter, "hash family needs at least one salt");
  }
  const auto len = salts_.front().size();
  for (const auto& s : salts_) {
    if (s.size() != len) {
      throw Error(Errc::invalid_parameter, "all salts in a family must have the same length");
    }
  }
}

auto HashFamily::index(std::size_t function, std::span<const std::uint8_t> item, std::uint64_t kappa) const
    -> std::uint64_t {
  return index_of(digest_, salts_.at(function).bytes(), item, kappa);
}

auto generate_random_family(std::size_t k, std::size_t salt_len, EntropySource& entropy, DigestId digest)
    -> HashFamily {
  if (k == 0 || salt_len == 0) {
    throw Error(Errc::invalid_parameter, "k and salt_len must be at least 1");
  }
  // 256^salt_len distinct salts exist; only short salts can run out.
  if (salt_len < 8) {
    const std::uint64_t space = std::uint64_t{1} << (8 * salt_len);
    if (k > space) {
      throw Error(Errc::invalid_parameter,
                  "cannot draw " + std::to_string(k) + " distinct salts of length " + std::to_string(salt_len));
    }
  }
  std::vector<Salt> salts;
  salts.reserve(k);
  std::set<Bytes> seen;
  Bytes buf(salt_len);
  while (salts.size() < k) {
    entropy.fill(buf);
    if (seen.insert(buf).second) {
      salts.emplace_back(buf);
    }
  }
  return HashFamily(std::move(salts), digest, FamilyOrigin::random);
}

auto generate_keyed_family(const SecretKey& key, std::size_t k, DigestId digest) -> HashFamily {
  if (k == 0) {
    throw Error(Errc::invalid_parameter, "k must be at least 1");
  }
  std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter> ctx{EVP_CIPHER_CTX_new()};
  if (!ctx || EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_ecb(), nullptr, key.bytes().data(), nullptr) != 1) {
    throw Error(Errc::resource, "AES-128 initialisation failed");
  }
  EVP_CIPHER_CTX_set_padding(ctx.get(), 0);

  std::vector<Salt> salts;
  salts.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::array<std::uint8_t, 16> counter{};
    std::uint64_t v = i;
    for (int j = 15; j >= 8; --j) {
      counter[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(v & 0xFF);
      v >>= 8;
    }
    Bytes block(16);
    int out_len = 0;
    if (EVP_EncryptUpdate(ctx.get(), block.data(), &out_len, counter.data(), 16) != 1 || out_len != 16) {
      throw Error(Errc::resource, "AES-128 block encryption failed");
    }
    salts.emplace_back(std::move(block));
  }
  return HashFamily(std::move(salts), digest, FamilyOrigin::keyed);
}

}  // namespace simbloom
