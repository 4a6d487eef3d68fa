#include "cli.hpp"

#include <termios.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "simbloom/anagram_attack.hpp"
#include "simbloom/check.hpp"
#include "simbloom/error.hpp"
#include "simbloom/eval_harness.hpp"
#include "simbloom/filter_store.hpp"
#include "simbloom/persistence.hpp"
#include "simbloom/service.hpp"
#include "simbloom/sizing.hpp"

namespace simbloom::cli {

namespace {

using nlohmann::json;

auto exit_code_for(Errc code) -> int {
  switch (code) {
    case Errc::incompatible:
    case Errc::format:
    case Errc::truncated:
    case Errc::unsupported:
    case Errc::canonical_form: return kExitData;
    case Errc::io: return kExitIo;
    default: return kExitUsage;
  }
}

auto key_from_env() -> std::optional<SecretKey> {
  const char* hex = std::getenv("SIMBLOOM_KEY");
  if (hex == nullptr || *hex == '\0') return std::nullopt;
  return SecretKey::from_hex(hex);
}

auto default_store_dir() -> std::string {
  const char* dir = std::getenv("SIMBLOOM_STORE");
  return dir != nullptr && *dir != '\0' ? dir : "simbloom-store";
}

// Reads one line; disables terminal echo when `in` is an interactive stdin.
auto read_secret(std::istream& in, std::ostream& err, const char* prompt) -> std::string {
  const bool tty = &in == &std::cin && isatty(STDIN_FILENO) == 1;
  termios saved{};
  if (tty) {
    err << prompt << std::flush;
    tcgetattr(STDIN_FILENO, &saved);
    termios silent = saved;
    silent.c_lflag &= ~static_cast<tcflag_t>(ECHO);
    tcsetattr(STDIN_FILENO, TCSANOW, &silent);
  }
  std::string line;
  const bool ok = static_cast<bool>(std::getline(in, line));
  if (tty) {
    tcsetattr(STDIN_FILENO, TCSANOW, &saved);
    err << '\n';
  }
  if (!ok && line.empty()) {
    throw Error(Errc::io, "no password on standard input");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

auto split_sizes(const std::string& csv) -> std::vector<std::size_t> {
  std::vector<std::size_t> out;
  std::stringstream ss(csv);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    try {
      out.push_back(static_cast<std::size_t>(std::stoull(part)));
    } catch (const std::exception&) {
      throw Error(Errc::invalid_parameter, "not a length: " + part);
    }
  }
  return out;
}

auto read_lines(const std::string& path) -> std::vector<std::string> {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

}  // namespace

auto run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) -> int {
  CLI::App app{"Password similarity checks over salted n-gram Bloom filters"};
  app.require_subcommand(1);
  std::string store_dir = default_store_dir();
  app.add_option("--store", store_dir, "Store directory (env SIMBLOOM_STORE)");

  // init
  StoreConfig init_cfg;
  std::string init_digest = "md5";
  bool init_keyed = false;
  auto* init = app.add_subcommand("init", "Create an empty password-history store");
  init->add_option("--kappa", init_cfg.kappa, "Bucket size in bits")->check(CLI::PositiveNumber);
  init->add_option("--k", init_cfg.k, "Number of hash functions")->check(CLI::PositiveNumber);
  init->add_option("--nu", init_cfg.nu, "n-gram grade")->check(CLI::Range(1, 255));
  init->add_option("--salt-len", init_cfg.salt_len, "Random salt length in octets")->check(CLI::PositiveNumber);
  init->add_option("--digest", init_digest, "md5 | sha256 | sha3-256");
  init->add_flag("--keyed", init_keyed, "Derive salts from SIMBLOOM_KEY (32 hex digits)");

  // add
  std::string add_label;
  auto* add = app.add_subcommand("add", "Store a password (read from stdin) under a label");
  add->add_option("label", add_label)->required();

  // check
  double threshold = kDefaultThreshold;
  auto* check = app.add_subcommand("check", "Compare a candidate (read from stdin) with the history");
  check->add_option("--threshold", threshold, "Warn when delta >= threshold")->check(CLI::Range(0.0, 1.0));

  // distance
  std::string dist_a;
  std::string dist_b;
  auto* dist = app.add_subcommand("distance", "Similarity coefficient between two stored filters");
  dist->add_option("label1", dist_a)->required();
  dist->add_option("label2", dist_b)->required();

  // size
  std::uint64_t size_n = 0;
  double size_fpp = 0.0;
  auto* size = app.add_subcommand("size", "Optimal bucket size and hash count");
  size->add_option("--n", size_n, "Expected number of inserted elements")->required()->check(CLI::PositiveNumber);
  size->add_option("--fpp", size_fpp, "Target false-positive probability in (0,1)")->required();

  // attack
  std::string atk_file;
  std::string atk_alphabet = "ascii";
  std::string atk_chars;
  std::size_t atk_min = 1;
  std::size_t atk_max = 8;
  unsigned atk_nu = 0;
  std::string atk_dictionary;
  std::uint64_t atk_limit = 1000;
  auto* atk = app.add_subcommand("attack", "Anagram attack against a filter file");
  atk->add_option("filter-file", atk_file)->required();
  atk->add_option("--alphabet", atk_alphabet, "ascii | custom")->check(CLI::IsMember({"ascii", "custom"}));
  atk->add_option("--chars", atk_chars, "Characters of a custom alphabet");
  atk->add_option("--min-len", atk_min);
  atk->add_option("--max-len", atk_max);
  atk->add_option("--nu", atk_nu, "n-gram grade (default: the filter's)");
  atk->add_option("--dictionary", atk_dictionary, "Word list, one per line");
  atk->add_option("--limit", atk_limit, "Maximum candidates to emit");

  // bench
  std::string bench_lengths = "1,10,100,1000";
  std::size_t bench_reps = 5;
  eval::BenchOptions bench_opts;
  std::string bench_csv;
  auto* bench = app.add_subcommand("bench", "Filter creation time against salt length");
  bench->add_option("--lengths", bench_lengths, "Comma-separated salt lengths");
  bench->add_option("--repetitions", bench_reps)->check(CLI::PositiveNumber);
  bench->add_option("--k", bench_opts.k)->check(CLI::PositiveNumber);
  bench->add_option("--batch", bench_opts.batch, "Filters per timed sample")->check(CLI::PositiveNumber);
  bench->add_option("--csv", bench_csv, "Write the timing table as CSV");

  // eval
  std::size_t eval_bases = 120;
  eval::EvalOptions eval_opts;
  std::vector<std::string> eval_kinds{"substitute-leet", "increment-suffix", "append-symbol", "swap-adjacent",
                                      "random-unrelated"};
  std::size_t eval_count = 1;
  std::string eval_csv;
  auto* ev = app.add_subcommand("eval", "Filter similarity against edit distance on a synthetic corpus");
  ev->add_option("--bases", eval_bases)->check(CLI::PositiveNumber);
  ev->add_option("--seed", eval_opts.seed);
  ev->add_option("--threshold", eval_opts.threshold)->check(CLI::Range(0.0, 1.0));
  ev->add_option("--kappa", eval_opts.kappa)->check(CLI::PositiveNumber);
  ev->add_option("--k", eval_opts.k)->check(CLI::PositiveNumber);
  ev->add_option("--nu", eval_opts.nu)->check(CLI::Range(1, 255));
  ev->add_option("--kinds", eval_kinds, "Mutation kinds")->delimiter(',');
  ev->add_option("--count", eval_count, "Mutations per variant")->check(CLI::PositiveNumber);
  ev->add_option("--csv", eval_csv, "Write per-pair records as CSV");

  // serve
  ServiceOptions serve_opts;
  auto* serve = app.add_subcommand("serve", "Local HTTP service over the store");
  serve->add_option("--port", serve_opts.port)->check(CLI::Range(0, 65535));
  serve->add_option("--host", serve_opts.host, "Bind address (loopback by default)");
  serve->add_option("--threshold", serve_opts.threshold)->check(CLI::Range(0.0, 1.0));
  serve->add_option("--allow-origin", serve_opts.allow_origin, "CORS origin for a browser front end");
  serve->add_flag("--log-requests", serve_opts.log_requests, "Log method, path and status");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*init) {
      const auto digest = parse_digest_name(init_digest);
      if (!digest) throw Error(Errc::invalid_parameter, "unknown digest: " + init_digest);
      init_cfg.digest = *digest;
      init_cfg.keyed = init_keyed;
      if (init_keyed && !key_from_env()) {
        throw Error(Errc::configuration, "--keyed needs SIMBLOOM_KEY (32 hex digits)");
      }
      OsEntropy entropy;
      const auto store = FilterStore::init(store_dir, init_cfg, entropy);
      const auto& c = store.config();
      out << json{{"store", store_dir},
                  {"kappa", c.kappa},
                  {"k", c.k},
                  {"nu", c.nu},
                  {"salt_len", c.salt_len},
                  {"digest", std::string(digest_name(c.digest))},
                  {"origin", c.keyed ? "keyed" : "random"}}
                 .dump(2)
          << '\n';
      return kExitOk;
    }

    if (*add) {
      auto store = FilterStore::open(store_dir);
      if (store.contains(add_label)) {
        throw Error(Errc::duplicate_label, "label already stored: " + add_label);
      }
      const auto password = read_secret(in, err, "Password: ");
      auto filter = store.new_filter(key_from_env());
      qinsert(filter, password, store.config().nu);
      store.add(add_label, filter);
      out << "added " << add_label << '\n';
      return kExitOk;
    }

    if (*check) {
      const auto store = FilterStore::open(store_dir);
      const auto candidate = read_secret(in, err, "Candidate password: ");
      const auto decision = check_candidate(store, candidate, threshold, key_from_env());
      out << to_json_text(decision, 2) << '\n';
      return decision.verdict == Verdict::warn ? kExitWarn : kExitOk;
    }

    if (*dist) {
      const auto store = FilterStore::open(store_dir);
      const auto report = distance(store.load(dist_a), store.load(dist_b));
      out << to_json_text(report, 2) << '\n';
      return kExitOk;
    }

    if (*size) {
      const auto p = sizing::params_for(size_n, size_fpp);
      out << json{{"n", p.n}, {"target_fpp", size_fpp}, {"m", p.m}, {"k", p.k}, {"fpp", p.fpp}}.dump(2) << '\n';
      return kExitOk;
    }

    if (*atk) {
      const auto filter = persistence::load_filter(atk_file);
      attack::AttackConfig config;
      if (atk_alphabet == "custom") {
        if (atk_chars.empty()) throw Error(Errc::invalid_parameter, "--alphabet custom needs --chars");
        config.alphabet = attack::Alphabet(atk_chars);
      }
      config.nu = atk_nu != 0 ? atk_nu : (filter.nu() != 0 ? filter.nu() : 2);
      config.min_len = atk_min;
      config.max_len = atk_max;
      if (!atk_dictionary.empty()) config.dictionary = read_lines(atk_dictionary);
      const auto report = attack::run_attack(filter, config, atk_limit);
      out << json{{"nu", config.nu},
                  {"alphabet_size", config.alphabet.size()},
                  {"min_len", config.min_len},
                  {"max_len", config.max_len},
                  {"candidate_grams", report.candidate_grams},
                  {"candidate_gram_count", report.candidate_grams.size()},
                  {"combination_count", report.combination_count.str()},
                  {"unpruned_combination_count", report.unpruned_combination_count.str()},
                  {"empty_range", report.empty_range},
                  {"candidates", report.candidates},
                  {"candidates_emitted", report.candidates_emitted},
                  {"truncated", report.truncated}}
                 .dump(2)
          << '\n';
      return kExitOk;
    }

    if (*bench) {
      const auto lengths = split_sizes(bench_lengths);
      if (lengths.empty()) throw Error(Errc::invalid_parameter, "--lengths is empty");
      OsEntropy entropy;
      const auto rows = eval::bench_salt_length(lengths, bench_reps, entropy, bench_opts);
      json doc{{"repetitions", bench_reps}, {"k", bench_opts.k}, {"batch", bench_opts.batch}};
      doc["rows"] = json::array();
      std::vector<double> xs;
      std::vector<double> ys;
      for (const auto& r : rows) {
        doc["rows"].push_back({{"salt_length", r.salt_length}, {"mean_micros", r.mean_micros}});
        xs.push_back(static_cast<double>(r.salt_length));
        ys.push_back(r.mean_micros);
      }
      if (rows.size() >= 2) {
        const auto fit = eval::fit_line(xs, ys);
        doc["fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
      }
      if (!bench_csv.empty()) {
        std::ofstream csv(bench_csv);
        if (!csv) throw Error(Errc::io, "cannot write " + bench_csv);
        csv << "salt_length,mean_micros\n";
        for (const auto& r : rows) csv << r.salt_length << ',' << r.mean_micros << '\n';
      }
      out << doc.dump(2) << '\n';
      return kExitOk;
    }

    if (*ev) {
      std::vector<eval::MutationSpec> specs;
      for (const auto& name : eval_kinds) {
        const auto kind = eval::parse_mutation(name);
        if (!kind) throw Error(Errc::invalid_parameter, "unknown mutation kind: " + name);
        specs.push_back(eval::MutationSpec{*kind, eval_count});
      }
      std::mt19937_64 rng(eval_opts.seed);
      const auto bases = eval::generate_bases(eval_bases, rng);
      const auto result = eval::evaluate_corpus(bases, specs, eval_opts);
      if (!eval_csv.empty()) {
        std::ofstream csv(eval_csv);
        if (!csv) throw Error(Errc::io, "cannot write " + eval_csv);
        eval::write_records_csv(csv, result.records);
      }
      const auto& s = result.summary;
      out << json{{"pairs", s.pairs},
                  {"spearman", s.spearman},
                  {"threshold", s.threshold},
                  {"precision", s.precision},
                  {"recall", s.recall},
                  {"true_positives", s.true_positives},
                  {"false_positives", s.false_positives},
                  {"false_negatives", s.false_negatives},
                  {"true_negatives", s.true_negatives},
                  {"median_unrelated_delta", s.median_unrelated_delta},
                  {"kappa", eval_opts.kappa},
                  {"k", eval_opts.k},
                  {"nu", eval_opts.nu}}
                 .dump(2)
          << '\n';
      return kExitOk;
    }

    if (*serve) {
      serve_opts.key = key_from_env();
      Service service(store_dir, serve_opts);
      const int port = service.bind();
      if (port < 0) throw Error(Errc::io, "cannot bind " + serve_opts.host + ":" + std::to_string(serve_opts.port));
      err << "listening on http://" << serve_opts.host << ':' << port << '\n';
      g_interrupted = false;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::thread watcher([&] {
        while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        service.stop();
      });
      const bool ok = service.listen();
      g_interrupted = true;
      watcher.join();
      return ok ? kExitOk : kExitIo;
    }
  } catch (const Error& e) {
    err << "simbloom: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "simbloom: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace simbloom::cli
