#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "simbloom/hash_family.hpp"
#include "simbloom/sizing.hpp"

namespace simbloom::eval {

struct TranscriptStep {
  std::string query;
  std::string result;
  double micros = 0.0;
};

struct Transcript {
  std::vector<TranscriptStep> steps;
};

// Create, Insert AAAA, Insert BBBB, Check AAAA, Check CCCC, Check BBBB.
[[nodiscard]] auto run_insert_check_script(EntropySource& entropy, std::uint64_t kappa = 65536,
                                           std::size_t k = 2, std::size_t salt_len = 10) -> Transcript;

struct DistanceScriptResult {
  Transcript transcript;
  double delta_12 = 0.0;  // thisismypassword vs thisismyp4ssword
  double delta_13 = 0.0;  // thisismypassword vs thisismypassw0rd
};

// Three grade-2 filters over one family, then the two distances.
[[nodiscard]] auto run_distance_script(EntropySource& entropy, std::uint64_t kappa = 65536, std::size_t k = 2,
                                       std::size_t salt_len = 10) -> DistanceScriptResult;

struct SaltTiming {
  std::size_t salt_length = 0;
  double mean_micros = 0.0;
};

struct BenchOptions {
  std::size_t k = 16;
  std::uint64_t kappa = 65536;
  // Filters created per timed sample; the mean is per filter.
  std::size_t batch = 64;
};

/// Mean wall-clock time to draw a random family and create a filter, per salt
/// length. Requires repetitions >= 1 (5 matches the reference protocol).
[[nodiscard]] auto bench_salt_length(std::span<const std::size_t> lengths, std::size_t repetitions,
                                     EntropySource& entropy, const BenchOptions& options = {})
    -> std::vector<SaltTiming>;

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares. Requires at least two distinct x values.
[[nodiscard]] auto fit_line(std::span<const double> x, std::span<const double> y) -> LinearFit;

enum class MutationKind {
  substitute_leet,
  increment_suffix,
  append_symbol,
  swap_adjacent,
  random_unrelated,
};

[[nodiscard]] auto mutation_name(MutationKind kind) noexcept -> std::string_view;
[[nodiscard]] auto parse_mutation(std::string_view name) -> std::optional<MutationKind>;

struct MutationSpec {
  MutationKind kind = MutationKind::substitute_leet;
  std::size_t count = 1;  // mutations applied per base
};

/// Applies spec.count mutations of spec.kind. random_unrelated ignores the
/// base except for its length.
[[nodiscard]] auto mutate(std::string_view base, const MutationSpec& spec, std::mt19937_64& rng) -> std::string;

/// Synthetic password corpus: word + digits/year + optional symbol, 8-14 chars.
[[nodiscard]] auto generate_bases(std::size_t count, std::mt19937_64& rng) -> std::vector<std::string>;

struct EvalRecord {
  std::string base;
  std::string variant;
  MutationKind kind = MutationKind::substitute_leet;
  std::size_t edit_dist = 0;
  double delta = 0.0;
  sizing::SizingParams params;
};

struct EvalSummary {
  std::size_t pairs = 0;
  double spearman = 0.0;  // edit distance vs delta
  double threshold = 0.6;
  // "similar" is predicted when delta >= threshold; every mutation kind
  // except random_unrelated is labelled similar.
  double precision = 0.0;
  double recall = 0.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  std::size_t true_negatives = 0;
  double median_unrelated_delta = 0.0;
};

struct EvalResult {
  std::vector<EvalRecord> records;
  EvalSummary summary;
};

struct EvalOptions {
  std::uint64_t kappa = 65536;
  std::size_t k = 2;
  unsigned nu = 2;
  std::size_t salt_len = 10;
  double threshold = 0.6;
  std::uint64_t seed = 2024;
};

/// One variant per (base, spec) pair, scored with a shared random family.
[[nodiscard]] auto evaluate_corpus(std::span<const std::string> bases, std::span<const MutationSpec> specs,
                                   const EvalOptions& options) -> EvalResult;
[[nodiscard]] auto evaluate_corpus(std::span<const std::string> bases, const MutationSpec& spec,
                                   const EvalOptions& options) -> EvalResult;

[[nodiscard]] auto summarize(std::span<const EvalRecord> records, double threshold) -> EvalSummary;

// Average ranks for ties. Returns 0 when either side is constant.
[[nodiscard]] auto spearman(std::span<const double> x, std::span<const double> y) -> double;

void write_records_csv(std::ostream& out, std::span<const EvalRecord> records);

struct FppMeasurement {
  sizing::SizingParams params;  // fpp holds the analytic prediction
  std::uint64_t probes = 0;
  std::uint64_t false_positives = 0;
  [[nodiscard]] auto rate() const noexcept -> double {
    return probes == 0 ? 0.0 : static_cast<double>(false_positives) / static_cast<double>(probes);
  }
};

/// Inserts n random 16-octet items into an (m, k) filter, then probes with
/// fresh random items that were not inserted.
[[nodiscard]] auto measure_false_positive_rate(std::uint64_t m, std::size_t k, std::uint64_t n,
                                               std::uint64_t probes, std::uint64_t seed) -> FppMeasurement;

}  // namespace simbloom::eval
