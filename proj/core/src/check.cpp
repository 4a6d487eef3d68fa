#include "simbloom/check.hpp"

#include "json.hpp"
#include "simbloom/error.hpp"

namespace simbloom {

auto verdict_name(Verdict v) noexcept -> std::string_view { return v == Verdict::warn ? "warn" : "accept"; }

auto check_against(const BloomFilter& probe, std::span<const LabeledFilter> history, double threshold)
    -> CheckDecision {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(Errc::invalid_parameter, "threshold must lie in [0, 1]");
  }
  CheckDecision decision;
  decision.threshold = threshold;
  for (const auto& entry : history) {
    const auto report = distance(probe, entry.filter);
    decision.per_label.push_back(LabelDelta{entry.label, report.delta});
    decision.max_delta = std::max(decision.max_delta, report.delta);
  }
  decision.verdict = !decision.per_label.empty() && decision.max_delta >= threshold ? Verdict::warn : Verdict::accept;
  return decision;
}

auto load_history(const FilterStore& store) -> std::vector<LabeledFilter> {
  std::vector<LabeledFilter> history;
  history.reserve(store.entries().size());
  for (const auto& entry : store.entries()) {
    history.push_back(LabeledFilter{entry.label, store.load(entry.label)});
  }
  return history;
}

auto check_candidate(const FilterStore& store, std::string_view candidate, double threshold,
                     const std::optional<SecretKey>& key) -> CheckDecision {
  auto probe = store.new_filter(key);
  qinsert(probe, candidate, store.config().nu);
  return check_against(probe, load_history(store), threshold);
}

auto to_json_text(const CheckDecision& decision, int indent) -> std::string {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : decision.per_label) {
    rows.push_back({{"label", row.label}, {"delta", row.delta}});
  }
  const nlohmann::json doc{{"per_label", rows},
                           {"max_delta", decision.max_delta},
                           {"threshold", decision.threshold},
                           {"verdict", std::string(verdict_name(decision.verdict))}};
  return doc.dump(indent);
}

auto to_json_text(const DistanceReport& report, int indent) -> std::string {
  const nlohmann::json doc{
      {"gamma", report.gamma}, {"k1", report.k1}, {"k2", report.k2}, {"delta", report.delta}};
  return doc.dump(indent);
}

}  // namespace simbloom
