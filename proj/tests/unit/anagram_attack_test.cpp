#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "simbloom/anagram_attack.hpp"
#include "simbloom/similarity.hpp"
#include "simbloom/sizing.hpp"

using namespace simbloom;
using namespace simbloom::attack;

namespace {

auto family(std::size_t k = 2, std::uint64_t seed = 17) -> HashFamily {
  SeededEntropy entropy(seed);
  return generate_random_family(k, 10, entropy);
}

auto filter_of(const std::string& text, unsigned nu = 2, std::uint64_t kappa = 1 << 16, std::size_t k = 2,
               std::uint64_t seed = 17) -> BloomFilter {
  auto f = BloomFilter::create(family(k, seed), kappa);
  qinsert(f, text, nu);
  return f;
}

auto collect(const BloomFilter& f, const AttackConfig& cfg, std::uint64_t limit, ReconstructOutcome* outcome = nullptr)
    -> std::vector<std::string> {
  std::vector<std::string> out;
  const auto r = reconstruct(f, cfg, limit, [&](std::string_view s) { out.emplace_back(s); });
  if (outcome != nullptr) *outcome = r;
  return out;
}

}  // namespace

TEST(Alphabet, SortedDeduplicated) {
  EXPECT_EQ(Alphabet("cabca").chars(), "abc");
  EXPECT_EQ(Alphabet::printable_ascii().size(), 95u);
  EXPECT_EQ(Alphabet::printable_ascii().chars().front(), ' ');
  EXPECT_EQ(Alphabet::printable_ascii().chars().back(), '~');
  expect_errc(Errc::invalid_parameter, [] { Alphabet(""); });
}

TEST(EnumerateGrams, Examples) {
  EXPECT_EQ(enumerate_grams(Alphabet::printable_ascii(), 2).size(), 9025u);
  EXPECT_EQ(enumerate_grams(Alphabet("ab"), 1), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(enumerate_grams(Alphabet("ba"), 3),
            (std::vector<std::string>{"aaa", "aab", "aba", "abb", "baa", "bab", "bba", "bbb"}));
}

TEST(EnumerateGrams, LexicographicAndDistinct) {
  const auto grams = enumerate_grams(Alphabet::printable_ascii(), 2);
  EXPECT_TRUE(std::is_sorted(grams.begin(), grams.end()));
  EXPECT_EQ(std::set<std::string>(grams.begin(), grams.end()).size(), grams.size());
}

TEST(EnumerateGrams, GuardsAgainstExplosion) {
  // 95^5 > 10^8; 10^8 itself is allowed only by count, so use a cheaper check.
  expect_errc(Errc::resource, [] { (void)enumerate_grams(Alphabet::printable_ascii(), 5); });
  expect_errc(Errc::invalid_parameter, [] { (void)enumerate_grams(Alphabet("ab"), 0); });
}

TEST(RecoverGrams, PasswordBangBang) {
  const auto f = filter_of("password!!");
  const auto grams = recover_grams(f, AttackConfig{});
  const std::set<std::string> got(grams.begin(), grams.end());
  for (const auto* g : {"pa", "ss", "wo", "rd", "!!"}) EXPECT_TRUE(got.count(g)) << g;
  EXPECT_LE(got.size(), 5u + 20u);
}

TEST(RecoverGrams, EmptyFilter) {
  const auto f = BloomFilter::create(family(), 1 << 16);
  EXPECT_TRUE(recover_grams(f, AttackConfig{}).empty());
}

TEST(RecoverGrams, UndersizedFilterDrownsInFalsePositives) {
  // 5 grams at target 0.5: m = 8, k = 2.
  const auto p = sizing::obfuscating_params(5, 0.5);
  const auto f = filter_of("password!!", 2, p.m, p.k);
  const auto recovered = static_cast<double>(recover_grams(f, AttackConfig{}).size());
  const double predicted = p.fpp * 9025.0;
  EXPECT_GT(recovered, predicted / 2);
  EXPECT_LT(recovered, predicted * 2);
}

TEST(RecoverGrams, SoundOverRandomInputs) {
  std::mt19937_64 rng(3);
  AttackConfig cfg;
  cfg.alphabet = Alphabet("abcdefghij0123");
  for (int i = 0; i < 50; ++i) {
    std::string pw(2 + rng() % 12, 'a');
    for (auto& c : pw) c = cfg.alphabet.chars()[rng() % cfg.alphabet.size()];
    const auto f = filter_of(pw, 2, 1 + rng() % 4096, 1 + rng() % 4, rng());
    const auto grams = recover_grams(f, cfg);
    const std::set<std::string> got(grams.begin(), grams.end());
    for (const auto& g : oracle::chunks(pw, 2)) {
      if (g.size() == 2) ASSERT_TRUE(got.count(g)) << pw << " " << g;
    }
  }
}

TEST(CountCombinations, Examples) {
  EXPECT_EQ(count_combinations(9025, 8, 2, false), BigInt("276241444060400"));
  EXPECT_EQ(count_combinations(9025, 8, 2, true), BigInt("276608990010225"));
  for (std::uint64_t g : {1u, 7u, 9025u}) EXPECT_EQ(count_combinations(g, 3, 3, false), BigInt(g));
  EXPECT_EQ(count_combinations(3, 8, 2, false), BigInt(0));
  expect_errc(Errc::invalid_parameter, [] { (void)count_combinations(10, 4, 0, false); });
  expect_errc(Errc::invalid_parameter, [] { (void)count_combinations(10, 5, 2, false); });
}

TEST(CountCombinations, MatchesBruteForce) {
  for (std::uint64_t g = 1; g <= 12; ++g) {
    for (std::uint64_t r = 1; r <= 4; ++r) {
      for (unsigned nu : {1u, 2u, 3u}) {
        ASSERT_EQ(count_combinations(g, r * nu, nu, false), BigInt(oracle::count_selections(g, r, false)));
        ASSERT_EQ(count_combinations(g, r * nu, nu, true), BigInt(oracle::count_selections(g, r, true)));
      }
    }
  }
}

TEST(CountCombinations, ExactBigInteger) {
  EXPECT_EQ(count_combinations(9031, 7, 1, false), oracle::binomial(9031, 7));
  EXPECT_EQ(count_combinations(9031, 7, 1, false), BigInt("969862665827377924767825"));
}

TEST(CountRange, Examples) {
  const auto r = count_combinations_range(9025, 8, 14, 2);
  EXPECT_FALSE(r.empty_range);
  EXPECT_EQ(r.value, BigInt("970614913878312574021380"));
  const double ratio = r.value.convert_to<double>() / 9.96e23;
  EXPECT_NEAR(ratio, 1.0, 0.05);

  EXPECT_EQ(count_combinations_range(50, 6, 6, 2).value, count_combinations(50, 6, 2, true));

  const auto empty = count_combinations_range(2, 1, 1, 2);
  EXPECT_TRUE(empty.empty_range);
  EXPECT_EQ(empty.value, BigInt(0));
  expect_errc(Errc::invalid_parameter, [] { (void)count_combinations_range(2, 5, 4, 2); });
}

TEST(Reconstruct, TwoCharacterCase) {
  AttackConfig cfg;
  cfg.alphabet = Alphabet("ab");
  cfg.min_len = 2;
  cfg.max_len = 2;
  const auto f = filter_of("ab");
  const auto grams = recover_grams(f, cfg);
  const auto out = collect(f, cfg, 100);
  EXPECT_NE(std::find(out.begin(), out.end(), "ab"), out.end());
  for (const auto& c : out) EXPECT_NE(std::find(grams.begin(), grams.end(), c), grams.end()) << c;
}

TEST(Reconstruct, DictionaryPrunes) {
  AttackConfig cfg;
  cfg.min_len = 1;
  cfg.max_len = 16;
  cfg.dictionary = std::vector<std::string>{"password!!", "hunter2xx"};
  const auto out = collect(filter_of("password!!"), cfg, 100);
  EXPECT_EQ(out, (std::vector<std::string>{"password!!"}));
}

TEST(Reconstruct, ZeroLimitTruncates) {
  ReconstructOutcome r;
  const auto out = collect(filter_of("ab"), AttackConfig{}, 0, &r);
  EXPECT_TRUE(out.empty());
  EXPECT_TRUE(r.truncated);
  EXPECT_EQ(r.emitted, 0u);
}

TEST(Reconstruct, LimitIsRespected) {
  AttackConfig cfg;
  cfg.alphabet = Alphabet("abc");
  cfg.min_len = 1;
  cfg.max_len = 6;
  // A saturated filter accepts every gram.
  const auto f = filter_of("abcabcaabbcc", 1, 1, 1);
  ReconstructOutcome r;
  const auto out = collect(f, cfg, 10, &r);
  EXPECT_EQ(out.size(), 10u);
  EXPECT_TRUE(r.truncated);
}

TEST(Reconstruct, OrderedByLengthThenLexicographic) {
  AttackConfig cfg;
  cfg.alphabet = Alphabet("xyz");
  cfg.nu = 2;
  cfg.min_len = 1;
  cfg.max_len = 5;
  const auto f = filter_of("xyzzy", 2, 64, 2);
  const auto out = collect(f, cfg, 100000);
  for (std::size_t i = 1; i < out.size(); ++i) {
    const auto& a = out[i - 1];
    const auto& b = out[i];
    ASSERT_TRUE(a.size() < b.size() || (a.size() == b.size() && a < b)) << a << " " << b;
  }
  for (const auto& c : out) {
    ASSERT_GE(c.size(), 1u);
    ASSERT_LE(c.size(), 5u);
    for (const auto& g : oracle::chunks(c, 2)) ASSERT_TRUE(f.check(g)) << c;
  }
}

// Desk-scale completeness: the inserted password is always among the candidates.
TEST(Reconstruct, CompleteForSmallAlphabets) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 40; ++i) {
    std::string chars;
    const auto size = 2 + rng() % 29;
    for (std::size_t c = 0; c < size; ++c) chars.push_back(static_cast<char>('!' + rng() % 90));
    AttackConfig cfg;
    cfg.alphabet = Alphabet(chars);
    cfg.nu = 1 + static_cast<unsigned>(rng() % 2);
    cfg.min_len = 1;
    cfg.max_len = 1 + rng() % 6;
    std::string pw(1 + rng() % cfg.max_len, ' ');
    for (auto& c : pw) c = cfg.alphabet.chars()[rng() % cfg.alphabet.size()];
    const auto f = filter_of(pw, cfg.nu, 1 << 16, 2, rng());
    std::vector<std::string> out;
    const auto r = reconstruct(f, cfg, 10'000'000, [&](std::string_view s) { out.emplace_back(s); });
    ASSERT_FALSE(r.truncated);
    ASSERT_NE(std::find(out.begin(), out.end(), pw), out.end()) << pw << " alphabet " << cfg.alphabet.chars();
  }
}

TEST(RunAttack, Report) {
  AttackConfig cfg;
  cfg.min_len = 8;
  cfg.max_len = 14;
  cfg.dictionary = std::vector<std::string>{"password!!", "hunter2xx"};
  const auto report = run_attack(filter_of("password!!"), cfg, 10);
  EXPECT_GE(report.candidate_grams.size(), 5u);
  EXPECT_EQ(report.unpruned_combination_count, BigInt("970614913878312574021380"));
  EXPECT_EQ(report.combination_count,
            count_combinations_range(report.candidate_grams.size(), 8, 14, 2).value);
  EXPECT_EQ(report.candidates, (std::vector<std::string>{"password!!"}));
  EXPECT_FALSE(report.truncated);
}
