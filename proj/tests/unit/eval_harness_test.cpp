#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "oracles.hpp"
#include "simbloom/eval_harness.hpp"

using namespace simbloom;
using namespace simbloom::eval;

TEST(Scripts, InsertCheck) {
  SeededEntropy entropy(1);
  const auto t = run_insert_check_script(entropy);
  ASSERT_EQ(t.steps.size(), 6u);
  EXPECT_EQ(t.steps[3].query, "Check(AAAA)");
  EXPECT_EQ(t.steps[3].result, "true");
  EXPECT_EQ(t.steps[4].result, "false");
  EXPECT_EQ(t.steps[5].result, "true");
  for (const auto& s : t.steps) EXPECT_GE(s.micros, 0.0);
}

TEST(Scripts, Distance) {
  SeededEntropy entropy(2);
  const auto r = run_distance_script(entropy);
  EXPECT_EQ(r.transcript.steps.size(), 8u);
  EXPECT_NEAR(r.delta_12, oracle::set_dice("thisismypassword", "thisismyp4ssword", 2), 0.05);
  EXPECT_NEAR(r.delta_13, oracle::set_dice("thisismypassword", "thisismypassw0rd", 2), 0.05);
  EXPECT_NEAR(r.delta_12, 6.0 / 7.0, 0.05);
}

TEST(Bench, OneRowPerLength) {
  OsEntropy entropy;
  const std::vector<std::size_t> one{10};
  const auto rows = bench_salt_length(one, 5, entropy, BenchOptions{2, 1024, 4});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].salt_length, 10u);
  EXPECT_GT(rows[0].mean_micros, 0.0);
}

TEST(Fit, ExactLine) {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{3, 5, 7, 9};
  const auto f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(Spearman, RanksWithTies) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> down{10, 8, 8, 4, 1};
  EXPECT_NEAR(spearman(x, x), 1.0, 1e-12);
  // Ranks of `down`: 5, 3.5, 3.5, 2, 1.
  EXPECT_NEAR(spearman(x, down), -0.9746794344808963, 1e-12);
  const std::vector<double> flat{1, 1, 1, 1, 1};
  EXPECT_EQ(spearman(x, flat), 0.0);
}

TEST(Mutations, NamesRoundTrip) {
  for (auto k : {MutationKind::substitute_leet, MutationKind::increment_suffix, MutationKind::append_symbol,
                 MutationKind::swap_adjacent, MutationKind::random_unrelated}) {
    EXPECT_EQ(parse_mutation(mutation_name(k)), k);
  }
  EXPECT_FALSE(parse_mutation("nonsense").has_value());
}

TEST(Mutations, IncrementSuffix) {
  std::mt19937_64 rng(1);
  EXPECT_EQ(mutate("password2019", {MutationKind::increment_suffix, 1}, rng), "password2020");
}

TEST(Mutations, RandomUnrelatedKeepsLength) {
  std::mt19937_64 rng(2);
  const auto v = mutate("password2019", {MutationKind::random_unrelated, 1}, rng);
  EXPECT_EQ(v.size(), 12u);
  EXPECT_NE(v, "password2019");
}

TEST(Mutations, BasesInRange) {
  std::mt19937_64 rng(3);
  for (const auto& b : generate_bases(500, rng)) {
    ASSERT_GE(b.size(), 8u);
    ASSERT_LE(b.size(), 14u);
  }
}

TEST(Corpus, IncrementSuffixExample) {
  const std::vector<std::string> bases{"password2019"};
  const auto r = evaluate_corpus(bases, MutationSpec{MutationKind::increment_suffix, 1}, EvalOptions{});
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].variant, "password2020");
  EXPECT_EQ(r.records[0].edit_dist, 2u);
  // {pa,ss,wo,rd,20,19} vs {pa,ss,wo,rd,20}: 2*5/11.
  EXPECT_NEAR(r.records[0].delta, 10.0 / 11.0, 0.05);
  EXPECT_GE(r.records[0].delta, 0.6);
}

TEST(Corpus, UnchangedVariantIsIdentical) {
  const std::vector<std::string> bases{"abcdefgh12"};
  // Zero-step swaps are not expressible, so compare the base with itself via edit distance 0 records.
  const auto r = evaluate_corpus(bases, MutationSpec{MutationKind::swap_adjacent, 2}, EvalOptions{});
  for (const auto& rec : r.records) {
    if (rec.edit_dist == 0) EXPECT_DOUBLE_EQ(rec.delta, 1.0);
    if (rec.edit_dist > 0) EXPECT_LT(rec.delta, 1.0);
  }
}

TEST(Corpus, UnrelatedMedianLow) {
  std::mt19937_64 rng(4);
  const auto bases = generate_bases(1000, rng);
  const auto r = evaluate_corpus(bases, MutationSpec{MutationKind::random_unrelated, 1}, EvalOptions{});
  ASSERT_EQ(r.records.size(), 1000u);
  EXPECT_LT(r.summary.median_unrelated_delta, 0.2);
}

TEST(Corpus, EditZeroIffIdenticalFilter) {
  std::mt19937_64 rng(5);
  const auto bases = generate_bases(200, rng);
  std::vector<MutationSpec> specs;
  for (auto k : {MutationKind::substitute_leet, MutationKind::increment_suffix, MutationKind::append_symbol,
                 MutationKind::swap_adjacent, MutationKind::random_unrelated}) {
    specs.push_back({k, 1});
  }
  const auto r = evaluate_corpus(bases, specs, EvalOptions{});
  ASSERT_EQ(r.records.size(), 1000u);
  for (const auto& rec : r.records) {
    ASSERT_EQ(rec.edit_dist, oracle::levenshtein(rec.base, rec.variant));
    if (rec.edit_dist == 0) ASSERT_DOUBLE_EQ(rec.delta, 1.0) << rec.base;
    // Different strings can share every distinct gram, e.g. "abab" vs "ab".
    if (rec.delta == 1.0 && rec.edit_dist != 0) {
      ASSERT_DOUBLE_EQ(oracle::set_dice(rec.base, rec.variant, 2), 1.0) << rec.base << " " << rec.variant;
    }
  }
  EXPECT_LE(r.summary.spearman, -0.5);
}

TEST(Corpus, CsvHeader) {
  const std::vector<std::string> bases{"password2019"};
  const auto r = evaluate_corpus(bases, MutationSpec{MutationKind::increment_suffix, 1}, EvalOptions{});
  std::ostringstream out;
  write_records_csv(out, r.records);
  const auto text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "base,variant,kind,edit_dist,delta,m,k,n,fpp");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST(Fpp, MeasuredNearPrediction) {
  const auto m = measure_false_positive_rate(18, 2, 12, 20000, 7);
  EXPECT_GT(m.rate(), m.params.fpp / 2);
  EXPECT_LT(m.rate(), m.params.fpp * 2);
}
