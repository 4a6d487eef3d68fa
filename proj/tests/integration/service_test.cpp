#include <gtest/gtest.h>

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <thread>

#include "oracles.hpp"
#include "simbloom/check.hpp"
#include "simbloom/service.hpp"

using namespace simbloom;
using nlohmann::json;

namespace {

class Running {
public:
  explicit Running(const std::filesystem::path& dir, ServiceOptions opts = {}) : service_(dir, [&] {
    opts.port = 0;
    return opts;
  }()) {
    port_ = service_.bind();
    if (port_ > 0) {
      thread_ = std::thread([this] { service_.listen(); });
      service_.wait_until_ready();
    }
  }
  ~Running() {
    service_.stop();
    if (thread_.joinable()) thread_.join();
  }
  Running(const Running&) = delete;
  auto operator=(const Running&) -> Running& = delete;

  [[nodiscard]] auto port() const -> int { return port_; }
  [[nodiscard]] auto client() const -> httplib::Client { return httplib::Client("127.0.0.1", port_); }

private:
  Service service_;
  int port_ = -1;
  std::thread thread_;
};

auto password_body(const std::string& pw) -> std::string { return json{{"password", pw}}.dump(); }

auto init_store(const std::filesystem::path& dir) -> FilterStore {
  SeededEntropy entropy(9);
  return FilterStore::init(dir, StoreConfig{}, entropy);
}

}  // namespace

TEST(Service, EmptyStoreListsNothing) {
  oracle::TempDir dir;
  (void)init_store(dir.path());
  Running svc(dir.path());
  ASSERT_GT(svc.port(), 0);
  auto res = svc.client().Get("/v1/filters");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body), json::array());
}

TEST(Service, AddListCheck) {
  oracle::TempDir dir;
  (void)init_store(dir.path());
  Running svc(dir.path());
  auto cli = svc.client();

  auto created = cli.Post("/v1/filters/old", password_body("P4ssword123!"), "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  EXPECT_EQ(json::parse(created->body).at("label"), "old");

  auto dup = cli.Post("/v1/filters/old", password_body("other"), "application/json");
  ASSERT_TRUE(dup);
  EXPECT_EQ(dup->status, 409);

  auto list = cli.Get("/v1/filters");
  ASSERT_TRUE(list);
  const auto entries = json::parse(list->body);
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].at("label"), "old");
  EXPECT_EQ(entries[0].at("nu"), 2);

  EXPECT_EQ(cli.Get("/v1/filters/old")->status, 200);
  EXPECT_EQ(cli.Get("/v1/filters/nope")->status, 404);

  auto check = cli.Post("/v1/check", password_body("P4ssw0rd123!"), "application/json");
  ASSERT_TRUE(check);
  EXPECT_EQ(check->status, 200);
  const auto decision = json::parse(check->body);
  EXPECT_EQ(decision.at("verdict"), "warn");
  EXPECT_NEAR(decision.at("max_delta").get<double>(), 10.0 / 12.0, 0.05);

  // Same store, same candidate: the library path gives the same document.
  const auto store = FilterStore::open(dir.path());
  EXPECT_EQ(json::parse(to_json_text(check_candidate(store, "P4ssw0rd123!", kDefaultThreshold))), decision);
}

TEST(Service, MalformedBodies) {
  oracle::TempDir dir;
  (void)init_store(dir.path());
  Running svc(dir.path());
  auto cli = svc.client();
  for (const std::string body : {"", "not json", "[]", R"({"pw":"x"})", R"({"password":42})"}) {
    auto res = cli.Post("/v1/check", body, "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 422) << body;
    auto add = cli.Post("/v1/filters/x", body, "application/json");
    ASSERT_TRUE(add);
    EXPECT_EQ(add->status, 422) << body;
  }
  EXPECT_EQ(json::parse(cli.Get("/v1/filters")->body), json::array());
}

TEST(Service, UnreadableStoreIs503) {
  oracle::TempDir dir;
  Running svc(dir.path() / "missing");
  auto cli = svc.client();
  EXPECT_EQ(cli.Get("/v1/filters")->status, 503);
  EXPECT_EQ(cli.Post("/v1/check", password_body("x"), "application/json")->status, 503);

  // Recovers once the store appears.
  (void)init_store(dir.path() / "missing");
  EXPECT_EQ(cli.Get("/v1/filters")->status, 200);
}

TEST(Service, ConcurrentChecks) {
  oracle::TempDir dir;
  auto store = init_store(dir.path());
  for (int i = 0; i < 5; ++i) {
    auto f = store.new_filter();
    qinsert(f, "history-password-" + std::to_string(i), 2);
    store.add("h" + std::to_string(i), f);
  }
  Running svc(dir.path());
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      auto cli = svc.client();
      for (int i = 0; i < 10; ++i) {
        if (t == 0 && i % 3 == 0) {
          (void)cli.Post("/v1/filters/new" + std::to_string(i), password_body("fresh" + std::to_string(i)),
                         "application/json");
        }
        auto res = cli.Post("/v1/check", password_body("history-password-3"), "application/json");
        if (res && res->status == 200 && json::parse(res->body).at("max_delta") == 1.0) ++ok;
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(ok.load(), 80);
}

TEST(Service, CorsAndLogging) {
  oracle::TempDir dir;
  (void)init_store(dir.path());
  ServiceOptions opts;
  opts.allow_origin = "http://localhost:5173";
  Running svc(dir.path(), opts);
  auto cli = svc.client();
  auto res = cli.Get("/v1/filters");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "http://localhost:5173");
  auto pre = cli.Options("/v1/check");
  ASSERT_TRUE(pre);
  EXPECT_EQ(pre->status, 204);
}

TEST(Service, NoCleartextAfterSession) {
  oracle::TempDir dir;
  (void)init_store(dir.path());
  {
    ServiceOptions opts;
    opts.log_requests = true;
    Running svc(dir.path(), opts);
    auto cli = svc.client();
    testing::internal::CaptureStderr();
    testing::internal::CaptureStdout();
    (void)cli.Post("/v1/filters/a", password_body("Sup3rSecretValue!"), "application/json");
    (void)cli.Post("/v1/check", password_body("Sup3rSecretValu3!"), "application/json");
    // The logger runs after the response is written.
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
    const auto logged = testing::internal::GetCapturedStdout() + testing::internal::GetCapturedStderr();
    EXPECT_EQ(logged.find("Sup3rSecret"), std::string::npos);
    EXPECT_NE(logged.find("/v1/check"), std::string::npos);
  }
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir.path())) {
    if (e.is_regular_file()) {
      EXPECT_EQ(oracle::read_text(e.path()).find("Sup3rSecret"), std::string::npos) << e.path();
    }
  }
}
