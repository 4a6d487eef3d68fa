#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "simbloom/filter_store.hpp"
#include "simbloom/similarity.hpp"

namespace simbloom {

inline constexpr double kDefaultThreshold = 0.6;

enum class Verdict { accept, warn };

[[nodiscard]] auto verdict_name(Verdict v) noexcept -> std::string_view;

struct LabelDelta {
  std::string label;
  double delta = 0.0;
};

// Warn when the candidate is at least `threshold` similar to any stored
// password. delta is a similarity (1 = identical), so a high value is the
// dangerous one.
struct CheckDecision {
  std::vector<LabelDelta> per_label;
  double max_delta = 0.0;
  double threshold = kDefaultThreshold;
  Verdict verdict = Verdict::accept;
};

struct LabeledFilter {
  std::string label;
  BloomFilter filter;
};

/// Compares an already-built candidate filter with each history entry.
[[nodiscard]] auto check_against(const BloomFilter& probe, std::span<const LabeledFilter> history, double threshold)
    -> CheckDecision;

[[nodiscard]] auto load_history(const FilterStore& store) -> std::vector<LabeledFilter>;

/// Builds a filter for `candidate` with the store's family and compares it
/// with every stored filter. An incompatible stored filter raises
/// Error(incompatible). The candidate is never written anywhere.
[[nodiscard]] auto check_candidate(const FilterStore& store, std::string_view candidate, double threshold,
                                   const std::optional<SecretKey>& key = std::nullopt) -> CheckDecision;

/// JSON text: {"per_label":[{"label":..,"delta":..}],"max_delta":..,"threshold":..,"verdict":".."}
[[nodiscard]] auto to_json_text(const CheckDecision& decision, int indent = -1) -> std::string;
[[nodiscard]] auto to_json_text(const DistanceReport& report, int indent = -1) -> std::string;

}  // namespace simbloom
