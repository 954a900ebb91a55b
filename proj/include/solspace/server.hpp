#pragma once

// JSON-over-HTTP session around one loaded run. handle_request is the whole
// API; HttpServer only adapts it to sockets.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "solspace/baseline.hpp"
#include "solspace/problem.hpp"
#include "solspace/run_io.hpp"
#include "solspace/solver.hpp"

namespace solspace {

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

/// Readers take a shared lock on the current state; mutations (tradeoff,
/// solve) compute outside the lock and commit under an exclusive one, so a
/// reader sees either the old or the new box. At most one mutation runs at a
/// time; a second one is answered with 409 instead of being queued.
class RunSession {
 public:
  RunSession(Problem bound, BaselineResult baseline, BoxFile box, SolverTrace trace);
  ~RunSession();
  RunSession(const RunSession&) = delete;
  RunSession& operator=(const RunSession&) = delete;

  /// Rebinds the stored problem document to the stored requirements.
  static std::unique_ptr<RunSession> from_run(const RunRecord& run);

  ApiResponse handle_request(const ApiRequest& request);

  std::uint64_t revision() const;
  bool solving() const { return solving_.load(); }
  /// Blocks until a running asynchronous solve has committed or failed.
  void wait_idle();

 private:
  struct State {
    BoxFile box;
    SolverTrace trace;
    std::uint64_t revision = 0;
    std::optional<std::string> last_error;
  };

  State snapshot() const;
  ApiResponse with_revision(int status, nlohmann::json body, std::uint64_t revision) const;
  ApiResponse error(int status, std::string code, std::string message) const;
  std::optional<ApiResponse> acquire_mutation(const nlohmann::json& body);
  void commit(BoxFile box, SolverTrace trace);

  ApiResponse get_problem();
  ApiResponse get_box();
  ApiResponse get_section(const ApiRequest& request);
  ApiResponse get_trace();
  ApiResponse get_baseline();
  ApiResponse post_tradeoff(const ApiRequest& request);
  ApiResponse post_solve(const ApiRequest& request);

  const Problem problem_;
  const BaselineResult baseline_;
  mutable std::shared_mutex mutex_;
  State state_;
  std::atomic<bool> busy_{false};
  std::atomic<bool> solving_{false};
  std::jthread worker_;
};

class HttpServer {
 public:
  explicit HttpServer(RunSession& session, std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~HttpServer();

  /// Binds host:port (port 0 picks a free one) and returns the bound port.
  /// Throws Error when binding fails.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace solspace
