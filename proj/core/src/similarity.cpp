#include "simbloom/similarity.hpp"

#include <algorithm>
#include <numeric>

#include "simbloom/error.hpp"

namespace simbloom {

auto ngrams(std::string_view text, unsigned nu) -> std::vector<std::string> {
  if (nu == 0) {
    throw Error(Errc::invalid_parameter, "n-gram grade must be at least 1");
  }
  const auto chars = split_characters(text);
  std::vector<std::string> grams;
  grams.reserve((chars.size() + nu - 1) / nu);
  for (std::size_t i = 0; i < chars.size(); i += nu) {
    std::string gram;
    for (std::size_t j = i; j < std::min<std::size_t>(i + nu, chars.size()); ++j) {
      gram.append(chars[j]);
    }
    grams.push_back(std::move(gram));
  }
  return grams;
}

void qinsert(BloomFilter& filter, std::string_view text, unsigned nu) {
  const auto grams = ngrams(text, nu);
  if (grams.empty()) return;
  if (filter.nu() != nu) {
    if (!filter.empty()) {
      throw Error(Errc::configuration, "filter holds grade-" + std::to_string(filter.nu()) +
                                           " content; cannot insert grade-" + std::to_string(nu) + " grams");
    }
    filter.set_nu(nu);
  }
  for (const auto& g : grams) {
    filter.insert(g);
  }
}

void require_comparable(const BloomFilter& a, const BloomFilter& b) {
  if (a.kappa() != b.kappa()) {
    throw Error(Errc::incompatible, "bucket sizes differ (" + std::to_string(a.kappa()) + " vs " +
                                        std::to_string(b.kappa()) + ")");
  }
  if (!a.family().same_functions(b.family())) {
    throw Error(Errc::incompatible, "filters use different hash families");
  }
  if (a.nu() != b.nu()) {
    throw Error(Errc::incompatible, "n-gram grades differ (" + std::to_string(a.nu()) + " vs " +
                                        std::to_string(b.nu()) + ")");
  }
}

auto distance(const BloomFilter& a, const BloomFilter& b) -> DistanceReport {
  require_comparable(a, b);
  DistanceReport r;
  r.gamma = a.common_bit_count(b);
  r.k1 = a.true_bit_count();
  r.k2 = b.true_bit_count();
  const auto total = r.k1 + r.k2;
  r.delta = total == 0 ? 1.0 : (2.0 * static_cast<double>(r.gamma)) / static_cast<double>(total);
  return r;
}

auto edit_distance(std::string_view a, std::string_view b) -> std::size_t {
  auto s = split_characters(a);
  auto t = split_characters(b);
  if (s.size() < t.size()) std::swap(s, t);
  // Two-row dynamic programme over the shorter string.
  std::vector<std::size_t> prev(t.size() + 1);
  std::vector<std::size_t> cur(t.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= s.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= t.size(); ++j) {
      const std::size_t subst = prev[j - 1] + (s[i - 1] == t[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[t.size()];
}

}  // namespace simbloom
