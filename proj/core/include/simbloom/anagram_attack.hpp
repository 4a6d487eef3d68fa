#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simbloom/bloom_filter.hpp"

namespace simbloom::attack {

using BigInt = boost::multiprecision::cpp_int;

// Upper bound on |alphabet|^nu for any enumeration.
inline constexpr std::uint64_t kEnumerationLimit = 100'000'000;

/// Octet alphabet, sorted and deduplicated so enumeration is lexicographic.
class Alphabet {
public:
  // Throws Error(invalid_parameter) for an empty character set.
  explicit Alphabet(std::string_view chars);

  // Codes 32..126, the 95 printable ASCII characters.
  [[nodiscard]] static auto printable_ascii() -> Alphabet;

  [[nodiscard]] auto chars() const noexcept -> const std::string& { return chars_; }
  [[nodiscard]] auto size() const noexcept -> std::size_t { return chars_.size(); }
  [[nodiscard]] auto contains(char c) const noexcept -> bool;

private:
  std::string chars_;
};

struct AttackConfig {
  Alphabet alphabet = Alphabet::printable_ascii();
  unsigned nu = 2;
  std::size_t min_len = 1;
  std::size_t max_len = 16;
  std::optional<std::vector<std::string>> dictionary;
};

/// All |alphabet|^length strings of the given length, lexicographic.
/// Throws Error(resource) above kEnumerationLimit.
[[nodiscard]] auto enumerate_grams(const Alphabet& alphabet, unsigned nu) -> std::vector<std::string>;

/// Every enumerated nu-gram the filter reports as present. Superset of the
/// grams actually inserted; may contain false positives.
[[nodiscard]] auto recover_grams(const BloomFilter& filter, const AttackConfig& config)
    -> std::vector<std::string>;

/// binomial(gram_count, length/nu), or binomial(gram_count + length/nu - 1,
/// length/nu) when repetitions are allowed. nu must divide length.
[[nodiscard]] auto count_combinations(std::uint64_t gram_count, std::uint64_t length, unsigned nu,
                                      bool with_repetition) -> BigInt;

struct RangeCount {
  BigInt value;
  // No length in [min_len, max_len] is a multiple of nu.
  bool empty_range = false;
};

/// Sum of count_combinations(gram_count, i, nu, true) over the lengths i in
/// [min_len, max_len] divisible by nu. Other lengths are skipped.
[[nodiscard]] auto count_combinations_range(std::uint64_t gram_count, std::uint64_t min_len,
                                            std::uint64_t max_len, unsigned nu) -> RangeCount;

struct ReconstructOutcome {
  std::uint64_t emitted = 0;
  bool truncated = false;
};

using CandidateSink = std::function<void(std::string_view)>;

/// Streams candidate passwords built from recovered grams, shortest first and
/// lexicographic within a length. Each candidate's non-overlapping grams all
/// test present in the filter; a trailing partial gram is checked the same
/// way. With a dictionary only matching words are emitted. At most `limit`
/// candidates are produced; `truncated` reports that more were available.
auto reconstruct(const BloomFilter& filter, const AttackConfig& config, std::uint64_t limit,
                 const CandidateSink& sink) -> ReconstructOutcome;

struct AttackReport {
  std::vector<std::string> candidate_grams;
  // Search space over the recovered grams for [min_len, max_len].
  BigInt combination_count;
  // Same bound over every gram of the alphabet, i.e. without the filter.
  BigInt unpruned_combination_count;
  bool empty_range = false;
  std::vector<std::string> candidates;
  std::uint64_t candidates_emitted = 0;
  bool truncated = false;
};

/// Recovery, search-space accounting and bounded reconstruction in one pass.
[[nodiscard]] auto run_attack(const BloomFilter& filter, const AttackConfig& config, std::uint64_t limit)
    -> AttackReport;

}  // namespace simbloom::attack
