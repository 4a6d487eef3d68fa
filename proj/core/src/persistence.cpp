#include "simbloom/persistence.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <system_error>

#include "simbloom/error.hpp"

namespace simbloom::persistence {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'S', 'B', 'F', '1'};

template <typename T>
void put_le(Bytes& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF));
  }
}

template <typename T>
auto get_le(std::span<const std::uint8_t> data, std::size_t offset) -> T {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= std::uint64_t{data[offset + i]} << (8 * i);
  }
  return static_cast<T>(v);
}

}  // namespace

auto serialized_size(std::uint64_t kappa, std::uint64_t k, std::uint64_t salt_len) -> std::uint64_t {
  return kHeaderSize + k * salt_len + (kappa + 7) / 8;
}

auto serialize(const BloomFilter& filter) -> Bytes {
  const auto& family = filter.family();
  if (filter.nu() > std::numeric_limits<std::uint8_t>::max()) {
    throw Error(Errc::invalid_parameter, "n-gram grade does not fit the file format");
  }
  Bytes out;
  out.reserve(serialized_size(filter.kappa(), family.size(), family.salt_length()));
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  put_le<std::uint16_t>(out, kFormatVersion);
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(family.digest()));
  put_le<std::uint8_t>(out, family.origin() == FamilyOrigin::keyed ? 1 : 0);
  put_le<std::uint64_t>(out, filter.kappa());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(family.size()));
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(filter.nu()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(family.salt_length()));
  for (const auto& salt : family.salts()) {
    out.insert(out.end(), salt.bytes().begin(), salt.bytes().end());
  }
  const auto bits = filter.to_octets();
  out.insert(out.end(), bits.begin(), bits.end());
  return out;
}

auto parse(std::span<const std::uint8_t> data) -> BloomFilter {
  if (data.size() >= kMagic.size() && !std::equal(kMagic.begin(), kMagic.end(), data.begin())) {
    throw Error(Errc::format, "bad magic: not a filter file");
  }
  if (data.size() < kHeaderSize) {
    throw Error(Errc::truncated, "truncated header: expected at least " + std::to_string(kHeaderSize) +
                                     " octets, got " + std::to_string(data.size()));
  }
  const auto version = get_le<std::uint16_t>(data, 4);
  if (version != kFormatVersion) {
    throw Error(Errc::unsupported, "unsupported format version " + std::to_string(version));
  }
  const auto digest_code = get_le<std::uint8_t>(data, 6);
  const auto digest = digest_from_code(digest_code);
  if (!digest) {
    throw Error(Errc::unsupported, "unsupported digest id " + std::to_string(digest_code));
  }
  const auto origin_flag = get_le<std::uint8_t>(data, 7);
  if (origin_flag > 1) {
    throw Error(Errc::format, "invalid origin flag " + std::to_string(origin_flag));
  }
  const auto kappa = get_le<std::uint64_t>(data, 8);
  const auto k = get_le<std::uint32_t>(data, 16);
  const auto nu = get_le<std::uint8_t>(data, 20);
  const auto salt_len = get_le<std::uint32_t>(data, 21);
  if (kappa == 0 || k == 0 || salt_len == 0) {
    throw Error(Errc::format, "kappa, k and salt length must be nonzero");
  }
  // k * salt_len < 2^64; kappa / 8 < 2^61.
  const std::uint64_t expected = serialized_size(kappa, k, salt_len);
  if (data.size() < expected) {
    throw Error(Errc::truncated, "truncated payload: expected " + std::to_string(expected) + " octets, got " +
                                     std::to_string(data.size()));
  }
  if (data.size() > expected) {
    throw Error(Errc::format, "trailing data: expected " + std::to_string(expected) + " octets, got " +
                                  std::to_string(data.size()));
  }

  std::vector<Salt> salts;
  salts.reserve(k);
  std::size_t offset = kHeaderSize;
  for (std::uint32_t i = 0; i < k; ++i) {
    salts.emplace_back(Bytes(data.begin() + static_cast<std::ptrdiff_t>(offset),
                             data.begin() + static_cast<std::ptrdiff_t>(offset + salt_len)));
    offset += salt_len;
  }
  const auto bits = data.subspan(offset);
  if (const auto used = kappa % 8; used != 0) {
    const auto padding_mask = static_cast<std::uint8_t>(0xFF << used);
    if ((bits.back() & padding_mask) != 0) {
      throw Error(Errc::canonical_form, "nonzero padding bits after bit " + std::to_string(kappa - 1));
    }
  }
  HashFamily family(std::move(salts), *digest, origin_flag == 1 ? FamilyOrigin::keyed : FamilyOrigin::fixed);
  return BloomFilter::from_octets(std::move(family), kappa, nu, bits);
}

void write_file_atomically(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  std::random_device rd;
  auto tmp = path;
  tmp += ".tmp-" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(Errc::io, "cannot open " + tmp.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(Errc::io, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw Error(Errc::io, "cannot rename into " + path.string() + ": " + ec.message());
  }
}

auto read_file(const std::filesystem::path& path) -> Bytes {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::io, "cannot open " + path.string());
  }
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error(Errc::io, "read failed for " + path.string());
  }
  return data;
}

void save_filter(const std::filesystem::path& path, const BloomFilter& filter) {
  write_file_atomically(path, serialize(filter));
}

auto load_filter(const std::filesystem::path& path) -> BloomFilter { return parse(read_file(path)); }

}  // namespace simbloom::persistence
