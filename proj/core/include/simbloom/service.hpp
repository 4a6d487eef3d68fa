#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "simbloom/check.hpp"
#include "simbloom/hash_family.hpp"

namespace simbloom {

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8787;  // 0 binds an ephemeral port
  double threshold = kDefaultThreshold;
  std::optional<SecretKey> key;
  // Sent as Access-Control-Allow-Origin when non-empty.
  std::string allow_origin;
  // Method, path and status per request. Bodies are never logged.
  bool log_requests = false;
};

/// Local HTTP front end for a FilterStore.
///
///   GET  /v1/filters          200 [{"label","created_at","nu"}]
///   GET  /v1/filters/{label}  200 metadata, 404 unknown label
///   POST /v1/filters/{label}  {"password": ".."} -> 201, 409 duplicate, 422 bad body
///   POST /v1/check            {"password": ".."} -> 200 CheckDecision
///
/// 503 when the store cannot be read. Checks share a read lock over the
/// loaded history; additions take the write lock.
class Service {
public:
  Service(std::filesystem::path store_dir, ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  auto operator=(const Service&) -> Service& = delete;

  // Returns the bound port, or -1 on failure.
  auto bind() -> int;
  // Blocks until stop(). Requires a successful bind().
  auto listen() -> bool;
  void stop();
  void wait_until_ready() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace simbloom
