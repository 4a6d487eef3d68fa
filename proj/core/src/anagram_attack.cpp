#include "simbloom/anagram_attack.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "simbloom/error.hpp"
#include "simbloom/similarity.hpp"

namespace simbloom::attack {

namespace {

auto unsigned_less(char a, char b) noexcept -> bool {
  return static_cast<unsigned char>(a) < static_cast<unsigned char>(b);
}

auto checked_power(std::uint64_t base, unsigned exp) -> std::uint64_t {
  std::uint64_t total = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && total > kEnumerationLimit / base) {
      throw Error(Errc::resource, "enumeration of " + std::to_string(base) + "^" + std::to_string(exp) +
                                      " grams exceeds the limit of " + std::to_string(kEnumerationLimit));
    }
    total *= base;
  }
  return total;
}

auto binomial(const BigInt& n, std::uint64_t r) -> BigInt {
  if (r == 0) return 1;
  if (n < r) return 0;
  BigInt result = 1;
  for (std::uint64_t i = 0; i < r; ++i) {
    // result * (n - i) is divisible by i + 1 at every step.
    result *= (n - i);
    result /= (i + 1);
  }
  return result;
}

auto range_sum(const BigInt& gram_count, std::uint64_t min_len, std::uint64_t max_len, unsigned nu)
    -> RangeCount {
  if (nu == 0) {
    throw Error(Errc::invalid_parameter, "n-gram grade must be at least 1");
  }
  if (min_len > max_len) {
    throw Error(Errc::invalid_parameter, "min_len must not exceed max_len");
  }
  RangeCount out;
  out.empty_range = true;
  const std::uint64_t first = (min_len + nu - 1) / nu * nu;
  for (std::uint64_t len = first; len <= max_len; len += nu) {
    const std::uint64_t r = len / nu;
    out.value += gram_count == 0 && r == 0 ? BigInt{1} : binomial(gram_count + r - 1, r);
    out.empty_range = false;
  }
  return out;
}

auto in_alphabet(const Alphabet& alphabet, std::string_view s) -> bool {
  return std::all_of(s.begin(), s.end(), [&](char c) { return alphabet.contains(c); });
}

auto character_count(std::string_view s) -> std::size_t { return split_characters(s).size(); }

// Grams of each length the reconstruction needs, recovered lazily.
class GramPool {
public:
  GramPool(const BloomFilter& filter, const Alphabet& alphabet) : filter_(filter), alphabet_(alphabet) {}

  auto of_length(unsigned len) -> const std::vector<std::string>& {
    auto it = cache_.find(len);
    if (it == cache_.end()) {
      std::vector<std::string> present;
      for (auto& g : enumerate_grams(alphabet_, len)) {
        if (filter_.check(g)) present.push_back(std::move(g));
      }
      it = cache_.emplace(len, std::move(present)).first;
    }
    return it->second;
  }

private:
  const BloomFilter& filter_;
  const Alphabet& alphabet_;
  std::map<unsigned, std::vector<std::string>> cache_;
};

class Composer {
public:
  Composer(GramPool& pool, unsigned nu, std::uint64_t limit, const CandidateSink& sink)
      : pool_(pool), nu_(nu), limit_(limit), sink_(sink) {}

  // Returns false once the limit stops the search.
  auto compose_length(std::size_t length) -> bool {
    const std::size_t full = length / nu_;
    const auto remainder = static_cast<unsigned>(length % nu_);
    const auto& grams = pool_.of_length(nu_);
    const std::vector<std::string>* tail = remainder == 0 ? nullptr : &pool_.of_length(remainder);
    std::string prefix;
    prefix.reserve(length);
    return descend(grams, tail, full, prefix);
  }

  [[nodiscard]] auto outcome() const noexcept -> ReconstructOutcome { return outcome_; }

private:
  auto emit(std::string_view candidate) -> bool {
    if (outcome_.emitted == limit_) {
      outcome_.truncated = true;
      return false;
    }
    sink_(candidate);
    ++outcome_.emitted;
    return true;
  }

  auto descend(const std::vector<std::string>& grams, const std::vector<std::string>* tail,
               std::size_t remaining, std::string& prefix) -> bool {
    if (remaining == 0) {
      if (tail == nullptr) return emit(prefix);
      for (const auto& t : *tail) {
        const auto size = prefix.size();
        prefix += t;
        const bool go_on = emit(prefix);
        prefix.resize(size);
        if (!go_on) return false;
      }
      return true;
    }
    for (const auto& g : grams) {
      const auto size = prefix.size();
      prefix += g;
      const bool go_on = descend(grams, tail, remaining - 1, prefix);
      prefix.resize(size);
      if (!go_on) return false;
    }
    return true;
  }

  GramPool& pool_;
  unsigned nu_;
  std::uint64_t limit_;
  const CandidateSink& sink_;
  ReconstructOutcome outcome_;
};

void validate(const AttackConfig& config) {
  if (config.nu == 0) {
    throw Error(Errc::invalid_parameter, "n-gram grade must be at least 1");
  }
  if (config.min_len > config.max_len) {
    throw Error(Errc::invalid_parameter, "min_len must not exceed max_len");
  }
}

}  // namespace

Alphabet::Alphabet(std::string_view chars) : chars_(chars) {
  std::sort(chars_.begin(), chars_.end(), unsigned_less);
  chars_.erase(std::unique(chars_.begin(), chars_.end()), chars_.end());
  if (chars_.empty()) {
    throw Error(Errc::invalid_parameter, "alphabet must contain at least one character");
  }
}

auto Alphabet::printable_ascii() -> Alphabet {
  std::string chars;
  for (int c = 32; c < 127; ++c) chars.push_back(static_cast<char>(c));
  return Alphabet(chars);
}

auto Alphabet::contains(char c) const noexcept -> bool {
  return std::binary_search(chars_.begin(), chars_.end(), c, unsigned_less);
}

auto enumerate_grams(const Alphabet& alphabet, unsigned nu) -> std::vector<std::string> {
  if (nu == 0) {
    throw Error(Errc::invalid_parameter, "n-gram grade must be at least 1");
  }
  const std::uint64_t total = checked_power(alphabet.size(), nu);
  const auto& chars = alphabet.chars();
  std::vector<std::string> out;
  out.reserve(total);
  std::vector<std::size_t> digits(nu, 0);
  std::string gram(nu, chars.front());
  for (std::uint64_t i = 0; i < total; ++i) {
    out.push_back(gram);
    // Odometer increment, last position fastest.
    for (std::size_t pos = nu; pos-- > 0;) {
      if (++digits[pos] < chars.size()) {
        gram[pos] = chars[digits[pos]];
        break;
      }
      digits[pos] = 0;
      gram[pos] = chars.front();
    }
  }
  return out;
}

auto recover_grams(const BloomFilter& filter, const AttackConfig& config) -> std::vector<std::string> {
  validate(config);
  std::vector<std::string> present;
  for (auto& g : enumerate_grams(config.alphabet, config.nu)) {
    if (filter.check(g)) present.push_back(std::move(g));
  }
  return present;
}

auto count_combinations(std::uint64_t gram_count, std::uint64_t length, unsigned nu, bool with_repetition)
    -> BigInt {
  if (nu == 0) {
    throw Error(Errc::invalid_parameter, "n-gram grade must be at least 1");
  }
  if (length % nu != 0) {
    throw Error(Errc::invalid_parameter, "length " + std::to_string(length) + " is not a multiple of nu=" +
                                             std::to_string(nu));
  }
  const std::uint64_t r = length / nu;
  if (!with_repetition) return binomial(BigInt{gram_count}, r);
  if (r == 0) return 1;
  return binomial(BigInt{gram_count} + r - 1, r);
}

auto count_combinations_range(std::uint64_t gram_count, std::uint64_t min_len, std::uint64_t max_len, unsigned nu)
    -> RangeCount {
  return range_sum(BigInt{gram_count}, min_len, max_len, nu);
}

auto reconstruct(const BloomFilter& filter, const AttackConfig& config, std::uint64_t limit,
                 const CandidateSink& sink) -> ReconstructOutcome {
  validate(config);
  if (limit == 0) {
    return ReconstructOutcome{0, true};
  }

  if (config.dictionary) {
    std::set<std::pair<std::size_t, std::string>> accepted;
    for (const auto& word : *config.dictionary) {
      const auto len = character_count(word);
      if (len == 0 || len < config.min_len || len > config.max_len) continue;
      const auto grams = ngrams(word, config.nu);
      const bool all_present = std::all_of(grams.begin(), grams.end(), [&](const std::string& g) {
        return in_alphabet(config.alphabet, g) && filter.check(g);
      });
      if (all_present) accepted.emplace(len, word);
    }
    ReconstructOutcome out;
    for (const auto& [len, word] : accepted) {
      if (out.emitted == limit) {
        out.truncated = true;
        break;
      }
      sink(word);
      ++out.emitted;
    }
    return out;
  }

  GramPool pool(filter, config.alphabet);
  Composer composer(pool, config.nu, limit, sink);
  for (std::size_t len = std::max<std::size_t>(config.min_len, 1); len <= config.max_len; ++len) {
    if (!composer.compose_length(len)) break;
  }
  return composer.outcome();
}

auto run_attack(const BloomFilter& filter, const AttackConfig& config, std::uint64_t limit) -> AttackReport {
  AttackReport report;
  report.candidate_grams = recover_grams(filter, config);
  auto pruned = count_combinations_range(report.candidate_grams.size(), config.min_len, config.max_len, config.nu);
  report.combination_count = std::move(pruned.value);
  report.empty_range = pruned.empty_range;

  BigInt all_grams = 1;
  for (unsigned i = 0; i < config.nu; ++i) all_grams *= config.alphabet.size();
  report.unpruned_combination_count = range_sum(all_grams, config.min_len, config.max_len, config.nu).value;

  const auto outcome = reconstruct(filter, config, limit, [&](std::string_view c) {
    report.candidates.emplace_back(c);
  });
  report.candidates_emitted = outcome.emitted;
  report.truncated = outcome.truncated;
  return report;
}

}  // namespace simbloom::attack
