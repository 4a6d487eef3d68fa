#include <gtest/gtest.h>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "simbloom/bloom_filter.hpp"

using namespace simbloom;

namespace {

auto family(std::size_t k, std::uint64_t seed = 42) -> HashFamily {
  SeededEntropy entropy(seed);
  return generate_random_family(k, 10, entropy);
}

}  // namespace

TEST(BloomCreate, EighteenSlotBucket) {
  const auto f = BloomFilter::create(family(2), 18);
  EXPECT_EQ(f.kappa(), 18u);
  EXPECT_EQ(f.true_bit_count(), 0u);
  EXPECT_EQ(f.inserted_count(), 0u);
  EXPECT_EQ(f.to_octets().size(), 3u);
  for (std::uint64_t i = 0; i < 18; ++i) EXPECT_FALSE(f.test_bit(i));
}

TEST(BloomCreate, SingleBitAndZeroRejected) {
  auto f = BloomFilter::create(family(2), 1);
  EXPECT_EQ(f.kappa(), 1u);
  f.insert("anything");
  EXPECT_EQ(f.true_bit_count(), 1u);
  expect_errc(Errc::invalid_parameter, [] { (void)BloomFilter::create(family(2), 0); });
}

TEST(BloomInsert, SetsAtMostKBits) {
  auto f = BloomFilter::create(family(2), 18);
  f.insert("password1234");
  EXPECT_GE(f.true_bit_count(), 1u);
  EXPECT_LE(f.true_bit_count(), 2u);
  EXPECT_EQ(f.inserted_count(), 1u);

  std::set<std::uint64_t> expected;
  for (std::size_t i = 0; i < 2; ++i) expected.insert(f.family().index(i, as_bytes("password1234"), 18));
  EXPECT_EQ(f.true_bit_count(), expected.size());
  for (auto b : expected) EXPECT_TRUE(f.test_bit(b));
}

TEST(BloomInsert, IdempotentBits) {
  auto f = BloomFilter::create(family(3), 1000);
  f.insert("password1234");
  const auto once = f.to_octets();
  f.insert("password1234");
  EXPECT_EQ(f.to_octets(), once);
  EXPECT_EQ(f.inserted_count(), 2u);
}

TEST(BloomInsert, EmptyItemIsLegal) {
  auto f = BloomFilter::create(family(2), 4096);
  f.insert("");
  EXPECT_TRUE(f.check(""));
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_TRUE(f.test_bit(f.family().index(i, {}, 4096)));
  }
}

TEST(BloomCheck, FreshFilterHasNothing) {
  const auto f = BloomFilter::create(family(2), 64);
  EXPECT_FALSE(f.check("password1234"));
  EXPECT_FALSE(f.check(""));
}

TEST(BloomCheck, AbsentItemWithLargeBucket) {
  auto f = BloomFilter::create(family(2), 1 << 16);
  f.insert("password1234");
  EXPECT_TRUE(f.check("password1234"));
  EXPECT_FALSE(f.check("helloworld"));
}

TEST(BloomCheck, ReadOnly) {
  auto f = BloomFilter::create(family(2), 512);
  f.insert("a");
  const auto before = f.to_octets();
  for (int i = 0; i < 100; ++i) (void)f.check(std::to_string(i));
  EXPECT_EQ(f.to_octets(), before);
  EXPECT_EQ(f.inserted_count(), 1u);
}

TEST(BloomBits, SaturatedFilterCountsKappa) {
  auto f = BloomFilter::create(family(4), 13);
  for (int i = 0; i < 500; ++i) f.insert(std::to_string(i));
  EXPECT_EQ(f.true_bit_count(), 13u);
}

// Property: random item sets, random configurations.
TEST(BloomProperty, NoFalseNegativesAndMonotonePopcount) {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 200; ++round) {
    const std::size_t k = 1 + rng() % 8;
    const std::uint64_t kappa = 1 + rng() % 4096;
    auto f = BloomFilter::create(family(k, rng()), kappa);
    std::vector<std::string> items;
    std::uint64_t last = 0;
    const auto n = rng() % 64;
    for (std::uint64_t i = 0; i < n; ++i) {
      items.push_back(oracle::random_ascii(rng, rng() % 20));
      f.insert(items.back());
      const auto pop = f.true_bit_count();
      ASSERT_GE(pop, last);
      ASSERT_LE(pop, k * f.inserted_count());
      last = pop;
    }
    for (const auto& item : items) ASSERT_TRUE(f.check(item)) << "round " << round;
  }
}

TEST(BloomOctets, RoundTripAndPadding) {
  auto f = BloomFilter::create(family(3), 21);
  for (int i = 0; i < 5; ++i) f.insert(std::to_string(i));
  const auto octets = f.to_octets();
  ASSERT_EQ(octets.size(), 3u);
  EXPECT_EQ(octets[2] & 0xE0, 0);  // bits 21..23 are padding
  const auto g = BloomFilter::from_octets(f.family(), 21, 0, octets);
  EXPECT_TRUE(g.same_content(f));
  expect_errc(Errc::truncated, [&] { (void)BloomFilter::from_octets(f.family(), 21, 0, std::span(octets).first(2)); });
}

TEST(BloomIntersect, CommonBitsRequireSameKappa) {
  auto a = BloomFilter::create(family(2), 100);
  auto b = BloomFilter::create(family(2), 101);
  expect_errc(Errc::incompatible, [&] { (void)a.common_bit_count(b); });
}
