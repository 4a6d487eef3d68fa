#include "simbloom/service.hpp"

#include <iostream>
#include <mutex>
#include <shared_mutex>

#include "httplib.h"
#include "json.hpp"
#include "simbloom/error.hpp"

namespace simbloom {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, json{{"error", message}});
}

// Extracts the "password" string member; nullopt for anything else.
auto password_from(const httplib::Request& req) -> std::optional<std::string> {
  const auto doc = json::parse(req.body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
  const auto it = doc.find("password");
  if (it == doc.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

auto status_for(Errc code) -> int {
  switch (code) {
    case Errc::duplicate_label: return 409;
    case Errc::missing_label: return 404;
    case Errc::invalid_parameter: return 422;
    case Errc::incompatible:
    case Errc::configuration: return 409;
    default: return 503;
  }
}

auto entry_json(const StoreEntry& e) -> json {
  return json{{"label", e.label}, {"created_at", e.created_at}, {"nu", e.nu}};
}

}  // namespace

struct Service::Impl {
  Impl(std::filesystem::path dir, ServiceOptions opts) : store_dir(std::move(dir)), options(std::move(opts)) {}

  std::filesystem::path store_dir;
  ServiceOptions options;
  httplib::Server server;

  mutable std::shared_mutex mutex;
  std::optional<FilterStore> store;
  std::vector<LabeledFilter> history;

  // Caller holds the exclusive lock.
  void load_locked() {
    auto opened = FilterStore::open(store_dir);
    auto loaded = load_history(opened);
    store.emplace(std::move(opened));
    history = std::move(loaded);
  }

  // Shared lock if the store is already loaded, otherwise load it first.
  auto ensure_loaded() -> std::shared_lock<std::shared_mutex> {
    {
      std::shared_lock lock(mutex);
      if (store) return lock;
    }
    {
      std::unique_lock lock(mutex);
      if (!store) load_locked();
    }
    return std::shared_lock(mutex);
  }

  void list_filters(httplib::Response& res) {
    auto lock = ensure_loaded();
    json out = json::array();
    for (const auto& e : store->entries()) out.push_back(entry_json(e));
    send_json(res, 200, out);
  }

  void get_filter(const std::string& label, httplib::Response& res) {
    auto lock = ensure_loaded();
    for (const auto& e : store->entries()) {
      if (e.label == label) {
        send_json(res, 200, entry_json(e));
        return;
      }
    }
    send_error(res, 404, "unknown label");
  }

  void add_filter(const std::string& label, const httplib::Request& req, httplib::Response& res) {
    const auto password = password_from(req);
    if (!password) {
      send_error(res, 422, "body must be a JSON object with a string \"password\"");
      return;
    }
    ensure_loaded().unlock();
    std::unique_lock lock(mutex);
    if (store->contains(label)) {
      send_error(res, 409, "label already exists");
      return;
    }
    auto filter = store->new_filter(options.key);
    qinsert(filter, *password, store->config().nu);
    store->add(label, filter);
    history.push_back(LabeledFilter{label, std::move(filter)});
    send_json(res, 201, entry_json(store->entries().back()));
  }

  void check(const httplib::Request& req, httplib::Response& res) {
    const auto password = password_from(req);
    if (!password) {
      send_error(res, 422, "body must be a JSON object with a string \"password\"");
      return;
    }
    auto lock = ensure_loaded();
    auto probe = store->new_filter(options.key);
    qinsert(probe, *password, store->config().nu);
    const auto decision = check_against(probe, history, options.threshold);
    res.status = 200;
    res.set_content(to_json_text(decision), "application/json");
  }

  // Wraps a handler so library errors map onto HTTP statuses.
  template <typename Fn>
  auto guarded(Fn fn) {
    return [this, fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        send_error(res, status_for(e.code()), e.what());
      } catch (const std::exception& e) {
        send_error(res, 503, e.what());
      }
    };
  }

  void routes() {
    server.Get("/v1/filters", guarded([this](const httplib::Request&, httplib::Response& res) {
                 list_filters(res);
               }));
    server.Get(R"(/v1/filters/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 get_filter(req.matches[1], res);
               }));
    server.Post(R"(/v1/filters/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                  add_filter(req.matches[1], req, res);
                }));
    server.Post("/v1/check", guarded([this](const httplib::Request& req, httplib::Response& res) {
                  check(req, res);
                }));
    if (!options.allow_origin.empty()) {
      server.set_default_headers({{"Access-Control-Allow-Origin", options.allow_origin},
                                  {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                  {"Access-Control-Allow-Headers", "Content-Type"}});
      server.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    }
    if (options.log_requests) {
      server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
        std::clog << req.method << ' ' << req.path << ' ' << res.status << '\n';
      });
    }
  }
};

Service::Service(std::filesystem::path store_dir, ServiceOptions options)
    : impl_(std::make_unique<Impl>(std::move(store_dir), std::move(options))) {
  try {
    std::unique_lock lock(impl_->mutex);
    impl_->load_locked();
  } catch (const std::exception&) {
    // Served as 503 until the store becomes readable.
  }
  impl_->routes();
}

Service::~Service() { stop(); }

auto Service::bind() -> int {
  if (impl_->options.port == 0) {
    return impl_->server.bind_to_any_port(impl_->options.host);
  }
  return impl_->server.bind_to_port(impl_->options.host, impl_->options.port) ? impl_->options.port : -1;
}

auto Service::listen() -> bool { return impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace simbloom
