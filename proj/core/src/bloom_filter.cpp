#include "simbloom/bloom_filter.hpp"

#include <bit>
#include <string>

#include "simbloom/error.hpp"

namespace simbloom {

BloomFilter::BloomFilter(HashFamily family, std::uint64_t kappa, unsigned nu)
    : family_(std::move(family)), kappa_(kappa), nu_(nu), words_((kappa + 63) / 64, 0) {}

auto BloomFilter::create(HashFamily family, std::uint64_t kappa, unsigned nu) -> BloomFilter {
  if (kappa == 0) {
    throw Error(Errc::invalid_parameter, "kappa must be at least 1");
  }
  return BloomFilter(std::move(family), kappa, nu);
}

auto BloomFilter::from_octets(HashFamily family, std::uint64_t kappa, unsigned nu,
                              std::span<const std::uint8_t> octets) -> BloomFilter {
  auto filter = create(std::move(family), kappa, nu);
  const std::uint64_t expected = (kappa + 7) / 8;
  if (octets.size() != expected) {
    throw Error(Errc::truncated, "bit payload has " + std::to_string(octets.size()) + " octets, expected " +
                                     std::to_string(expected));
  }
  for (std::size_t i = 0; i < octets.size(); ++i) {
    filter.words_[i / 8] |= std::uint64_t{octets[i]} << (8 * (i % 8));
  }
  return filter;
}

void BloomFilter::insert(std::span<const std::uint8_t> item) {
  for (std::size_t f = 0; f < family_.size(); ++f) {
    const auto bit = family_.index(f, item, kappa_);
    words_[bit >> 6] |= std::uint64_t{1} << (bit & 63);
  }
  ++inserted_;
}

auto BloomFilter::check(std::span<const std::uint8_t> item) const -> bool {
  for (std::size_t f = 0; f < family_.size(); ++f) {
    if (!test_bit(family_.index(f, item, kappa_))) {
      return false;
    }
  }
  return true;
}

auto BloomFilter::true_bit_count() const noexcept -> std::uint64_t {
  std::uint64_t total = 0;
  for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

auto BloomFilter::common_bit_count(const BloomFilter& other) const -> std::uint64_t {
  if (other.kappa_ != kappa_) {
    throw Error(Errc::incompatible, "bucket sizes differ");
  }
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    total += static_cast<std::uint64_t>(std::popcount(words_[i] & other.words_[i]));
  }
  return total;
}

auto BloomFilter::test_bit(std::uint64_t index) const -> bool {
  if (index >= kappa_) {
    throw Error(Errc::invalid_parameter, "bit index out of range");
  }
  return ((words_[index >> 6] >> (index & 63)) & 1U) != 0;
}

auto BloomFilter::to_octets() const -> Bytes {
  Bytes out((kappa_ + 7) / 8, 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>((words_[i / 8] >> (8 * (i % 8))) & 0xFF);
  }
  return out;
}

void BloomFilter::set_nu(unsigned nu) {
  if (nu == nu_) return;
  if (!empty()) {
    throw Error(Errc::configuration, "cannot change the n-gram grade of a non-empty filter");
  }
  nu_ = nu;
}

auto BloomFilter::same_content(const BloomFilter& other) const noexcept -> bool {
  return kappa_ == other.kappa_ && nu_ == other.nu_ && family_.same_functions(other.family_) &&
         words_ == other.words_;
}

}  // namespace simbloom
