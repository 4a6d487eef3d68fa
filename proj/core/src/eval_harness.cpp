#include "simbloom/eval_harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cctype>
#include <cmath>
#include <numeric>
#include <ostream>

#include "simbloom/bloom_filter.hpp"
#include "simbloom/error.hpp"
#include "simbloom/similarity.hpp"

namespace simbloom::eval {

namespace {

using Clock = std::chrono::steady_clock;

auto micros_since(Clock::time_point start) -> double {
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

template <typename Fn>
auto timed(Transcript& t, std::string query, Fn&& fn) {
  const auto start = Clock::now();
  auto result = fn();
  t.steps.push_back(TranscriptStep{std::move(query), result, micros_since(start)});
  return result;
}

auto bool_text(bool b) -> std::string { return b ? "true" : "false"; }

constexpr std::array<std::string_view, 40> kWords = {
    "password", "dragon",  "monkey",   "sunshine", "princess", "football", "shadow",  "master",
    "letmein",  "welcome", "flower",   "summer",   "winter",   "autumn",   "spring",  "michael",
    "jessica",  "charlie", "freedom",  "trustno",  "hunter",   "ranger",   "buster",  "soccer",
    "harley",   "pepper",  "ginger",   "coffee",   "orange",   "purple",   "silver",  "tigger",
    "matrix",   "falcon",  "thunder",  "rainbow",  "cookie",   "banana",   "marina",  "secret"};

constexpr std::string_view kSymbols = "!@#$%&*?";
constexpr std::string_view kDigits = "0123456789";

auto pick(std::mt19937_64& rng, std::size_t n) -> std::size_t {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

auto leet_of(char c) -> char {
  switch (c) {
    case 'a': case 'A': return '4';
    case 'e': case 'E': return '3';
    case 'i': case 'I': return '1';
    case 'o': case 'O': return '0';
    case 's': case 'S': return '5';
    case 't': case 'T': return '7';
    case 'l': case 'L': return '|';
    case 'g': case 'G': return '9';
    case 'b': case 'B': return '8';
    default: return '\0';
  }
}

void substitute_leet(std::string& s, std::mt19937_64& rng) {
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (leet_of(s[i]) != '\0') candidates.push_back(i);
  }
  if (candidates.empty()) {
    if (s.empty()) {
      s.push_back(kDigits[pick(rng, kDigits.size())]);
      return;
    }
    const auto pos = pick(rng, s.size());
    s[pos] = s[pos] == '0' ? '1' : '0';
    return;
  }
  const auto pos = candidates[pick(rng, candidates.size())];
  s[pos] = leet_of(s[pos]);
}

void increment_suffix(std::string& s) {
  std::size_t start = s.size();
  while (start > 0 && std::isdigit(static_cast<unsigned char>(s[start - 1])) != 0) --start;
  if (start == s.size()) {
    s.push_back('1');
    return;
  }
  // Decimal increment of the trailing digit run, growing it on overflow.
  std::size_t i = s.size();
  while (i > start) {
    --i;
    if (s[i] != '9') {
      ++s[i];
      return;
    }
    s[i] = '0';
  }
  s.insert(s.begin() + static_cast<std::ptrdiff_t>(start), '1');
}

void swap_adjacent(std::string& s, std::mt19937_64& rng) {
  if (s.size() < 2) {
    s.push_back(kSymbols[pick(rng, kSymbols.size())]);
    return;
  }
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] != s[i + 1]) candidates.push_back(i);
  }
  if (candidates.empty()) {
    s[0] = s[0] == 'x' ? 'y' : 'x';
    return;
  }
  const auto pos = candidates[pick(rng, candidates.size())];
  std::swap(s[pos], s[pos + 1]);
}

auto random_text(std::size_t len, std::mt19937_64& rng) -> std::string {
  std::string out(len, ' ');
  std::uniform_int_distribution<int> printable(33, 126);
  for (auto& c : out) c = static_cast<char>(printable(rng));
  return out;
}

auto ranks(std::span<const double> v) -> std::vector<double> {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
    i = j + 1;
  }
  return r;
}

auto pearson(std::span<const double> x, std::span<const double> y) -> double {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

auto csv_field(std::string_view s) -> std::string {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

auto run_insert_check_script(EntropySource& entropy, std::uint64_t kappa, std::size_t k, std::size_t salt_len)
    -> Transcript {
  Transcript t;
  const auto start = Clock::now();
  auto filter = BloomFilter::create(generate_random_family(k, salt_len, entropy), kappa);
  t.steps.push_back({"Create(Gamma, " + std::to_string(kappa) + ")", "created", micros_since(start)});
  timed(t, "Insert(AAAA)", [&] { filter.insert("AAAA"); return std::string("ok"); });
  timed(t, "Insert(BBBB)", [&] { filter.insert("BBBB"); return std::string("ok"); });
  timed(t, "Check(AAAA)", [&] { return bool_text(filter.check("AAAA")); });
  timed(t, "Check(CCCC)", [&] { return bool_text(filter.check("CCCC")); });
  timed(t, "Check(BBBB)", [&] { return bool_text(filter.check("BBBB")); });
  return t;
}

auto run_distance_script(EntropySource& entropy, std::uint64_t kappa, std::size_t k, std::size_t salt_len)
    -> DistanceScriptResult {
  DistanceScriptResult out;
  auto& t = out.transcript;
  const auto family = generate_random_family(k, salt_len, entropy);

  auto make = [&](const std::string& name, std::string_view password) {
    auto start = Clock::now();
    auto f = BloomFilter::create(family, kappa);
    t.steps.push_back({name + " <- Create(Gamma, " + std::to_string(kappa) + ")", "created", micros_since(start)});
    start = Clock::now();
    qinsert(f, password, 2);
    t.steps.push_back({"QInsert(" + name + ", " + std::string(password) + ", 2)", "ok", micros_since(start)});
    return f;
  };
  const auto b1 = make("beta1", "thisismypassword");
  const auto b2 = make("beta2", "thisismyp4ssword");
  const auto b3 = make("beta3", "thisismypassw0rd");

  auto start = Clock::now();
  out.delta_12 = distance(b1, b2).delta;
  t.steps.push_back({"Distance(beta1, beta2)", std::to_string(out.delta_12), micros_since(start)});
  start = Clock::now();
  out.delta_13 = distance(b1, b3).delta;
  t.steps.push_back({"Distance(beta1, beta3)", std::to_string(out.delta_13), micros_since(start)});
  return out;
}

auto bench_salt_length(std::span<const std::size_t> lengths, std::size_t repetitions, EntropySource& entropy,
                       const BenchOptions& options) -> std::vector<SaltTiming> {
  if (repetitions == 0 || options.batch == 0) {
    throw Error(Errc::invalid_parameter, "repetitions and batch must be at least 1");
  }
  std::vector<SaltTiming> rows;
  rows.reserve(lengths.size());
  for (const auto len : lengths) {
    double total = 0.0;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      const auto start = Clock::now();
      for (std::size_t b = 0; b < options.batch; ++b) {
        auto filter = BloomFilter::create(generate_random_family(options.k, len, entropy), options.kappa);
        // Keep the construction observable.
        if (filter.kappa() != options.kappa) throw Error(Errc::resource, "unexpected filter size");
      }
      total += micros_since(start) / static_cast<double>(options.batch);
    }
    rows.push_back(SaltTiming{len, total / static_cast<double>(repetitions)});
  }
  return rows;
}

auto fit_line(std::span<const double> x, std::span<const double> y) -> LinearFit {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(Errc::invalid_parameter, "need at least two points of matching size");
  }
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) {
    throw Error(Errc::invalid_parameter, "x values must not all be equal");
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

auto mutation_name(MutationKind kind) noexcept -> std::string_view {
  switch (kind) {
    case MutationKind::substitute_leet: return "substitute-leet";
    case MutationKind::increment_suffix: return "increment-suffix";
    case MutationKind::append_symbol: return "append-symbol";
    case MutationKind::swap_adjacent: return "swap-adjacent";
    case MutationKind::random_unrelated: return "random-unrelated";
  }
  return "unknown";
}

auto parse_mutation(std::string_view name) -> std::optional<MutationKind> {
  for (auto kind : {MutationKind::substitute_leet, MutationKind::increment_suffix, MutationKind::append_symbol,
                    MutationKind::swap_adjacent, MutationKind::random_unrelated}) {
    if (mutation_name(kind) == name) return kind;
  }
  return std::nullopt;
}

auto mutate(std::string_view base, const MutationSpec& spec, std::mt19937_64& rng) -> std::string {
  if (spec.count == 0) {
    throw Error(Errc::invalid_parameter, "mutation count must be at least 1");
  }
  std::string s(base);
  if (spec.kind == MutationKind::random_unrelated) {
    return random_text(std::max<std::size_t>(s.size(), 1), rng);
  }
  for (std::size_t i = 0; i < spec.count; ++i) {
    switch (spec.kind) {
      case MutationKind::substitute_leet: substitute_leet(s, rng); break;
      case MutationKind::increment_suffix: increment_suffix(s); break;
      case MutationKind::append_symbol: s.push_back(kSymbols[pick(rng, kSymbols.size())]); break;
      case MutationKind::swap_adjacent: swap_adjacent(s, rng); break;
      case MutationKind::random_unrelated: break;
    }
  }
  return s;
}

auto generate_bases(std::size_t count, std::mt19937_64& rng) -> std::vector<std::string> {
  std::vector<std::string> out;
  out.reserve(count);
  while (out.size() < count) {
    std::string s(kWords[pick(rng, kWords.size())]);
    if (pick(rng, 3) == 0) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    if (pick(rng, 2) == 0) {
      s += std::to_string(1970 + pick(rng, 56));
    } else {
      const auto digits = 2 + pick(rng, 3);
      for (std::size_t d = 0; d < digits; ++d) s.push_back(kDigits[pick(rng, kDigits.size())]);
    }
    if (pick(rng, 3) == 0) s.push_back(kSymbols[pick(rng, kSymbols.size())]);
    while (s.size() < 8) s.push_back(kDigits[pick(rng, kDigits.size())]);
    if (s.size() > 14) s.resize(14);
    out.push_back(std::move(s));
  }
  return out;
}

auto spearman(std::span<const double> x, std::span<const double> y) -> double {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(Errc::invalid_parameter, "spearman needs two equally sized samples of at least two values");
  }
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  return pearson(rx, ry);
}

auto summarize(std::span<const EvalRecord> records, double threshold) -> EvalSummary {
  EvalSummary s;
  s.pairs = records.size();
  s.threshold = threshold;
  std::vector<double> edits;
  std::vector<double> deltas;
  std::vector<double> unrelated;
  for (const auto& r : records) {
    edits.push_back(static_cast<double>(r.edit_dist));
    deltas.push_back(r.delta);
    const bool similar = r.kind != MutationKind::random_unrelated;
    const bool predicted = r.delta >= threshold;
    if (similar && predicted) ++s.true_positives;
    if (!similar && predicted) ++s.false_positives;
    if (similar && !predicted) ++s.false_negatives;
    if (!similar && !predicted) ++s.true_negatives;
    if (!similar) unrelated.push_back(r.delta);
  }
  if (records.size() >= 2) s.spearman = spearman(edits, deltas);
  const auto predicted_pos = s.true_positives + s.false_positives;
  const auto actual_pos = s.true_positives + s.false_negatives;
  s.precision = predicted_pos == 0 ? 0.0 : static_cast<double>(s.true_positives) / static_cast<double>(predicted_pos);
  s.recall = actual_pos == 0 ? 0.0 : static_cast<double>(s.true_positives) / static_cast<double>(actual_pos);
  if (!unrelated.empty()) {
    std::sort(unrelated.begin(), unrelated.end());
    const auto mid = unrelated.size() / 2;
    s.median_unrelated_delta =
        unrelated.size() % 2 == 1 ? unrelated[mid] : (unrelated[mid - 1] + unrelated[mid]) / 2.0;
  }
  return s;
}

auto evaluate_corpus(std::span<const std::string> bases, std::span<const MutationSpec> specs,
                     const EvalOptions& options) -> EvalResult {
  SeededEntropy entropy(options.seed);
  const auto family = generate_random_family(options.k, options.salt_len, entropy);
  std::mt19937_64 rng(options.seed ^ 0x9E3779B97F4A7C15ULL);

  EvalResult result;
  result.records.reserve(bases.size() * specs.size());
  for (const auto& base : bases) {
    auto base_filter = BloomFilter::create(family, options.kappa);
    qinsert(base_filter, base, options.nu);
    sizing::SizingParams params;
    params.m = options.kappa;
    params.k = options.k;
    params.n = ngrams(base, options.nu).size();
    params.fpp = sizing::false_positive_probability(params.m, params.k, params.n);
    for (const auto& spec : specs) {
      EvalRecord rec;
      rec.base = base;
      rec.variant = mutate(base, spec, rng);
      rec.kind = spec.kind;
      rec.edit_dist = edit_distance(rec.base, rec.variant);
      auto variant_filter = BloomFilter::create(family, options.kappa);
      qinsert(variant_filter, rec.variant, options.nu);
      if (variant_filter.empty()) variant_filter.set_nu(base_filter.nu());
      rec.delta = distance(base_filter, variant_filter).delta;
      rec.params = params;
      result.records.push_back(std::move(rec));
    }
  }
  result.summary = summarize(result.records, options.threshold);
  return result;
}

auto evaluate_corpus(std::span<const std::string> bases, const MutationSpec& spec, const EvalOptions& options)
    -> EvalResult {
  return evaluate_corpus(bases, std::span<const MutationSpec>(&spec, 1), options);
}

void write_records_csv(std::ostream& out, std::span<const EvalRecord> records) {
  out << "base,variant,kind,edit_dist,delta,m,k,n,fpp\n";
  for (const auto& r : records) {
    out << csv_field(r.base) << ',' << csv_field(r.variant) << ',' << mutation_name(r.kind) << ',' << r.edit_dist
        << ',' << r.delta << ',' << r.params.m << ',' << r.params.k << ',' << r.params.n << ',' << r.params.fpp
        << '\n';
  }
}

auto measure_false_positive_rate(std::uint64_t m, std::size_t k, std::uint64_t n, std::uint64_t probes,
                                 std::uint64_t seed) -> FppMeasurement {
  SeededEntropy entropy(seed);
  auto filter = BloomFilter::create(generate_random_family(k, 10, entropy), m);
  std::array<std::uint8_t, 16> item{};
  // Leading octet separates the inserted population from the probes.
  for (std::uint64_t i = 0; i < n; ++i) {
    entropy.fill(item);
    item[0] = 0x00;
    filter.insert(item);
  }
  FppMeasurement out;
  out.params = sizing::SizingParams{m, k, n, sizing::false_positive_probability(m, k, n)};
  out.probes = probes;
  for (std::uint64_t i = 0; i < probes; ++i) {
    entropy.fill(item);
    item[0] = 0x01;
    if (filter.check(item)) ++out.false_positives;
  }
  return out;
}

}  // namespace simbloom::eval
