#include <httplib.h>

#include "solspace/errors.hpp"
#include "solspace/server.hpp"

namespace solspace {

struct HttpServer::Impl {
  explicit Impl(RunSession& s) : session(s) {}
  RunSession& session;
  httplib::Server server;
  int port = -1;
};

namespace {

constexpr const char* kNoUiPage =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>solspace</title></head>"
    "<body><p>No UI assets configured. The JSON API is served under /api/.</p></body></html>\n";

}  // namespace

HttpServer::HttpServer(RunSession& session, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(session)) {
  auto adapt = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    ApiResponse out = impl_->session.handle_request(r);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  impl_->server.Get(R"(/api/.*)", adapt);
  impl_->server.Post(R"(/api/.*)", adapt);
  if (static_dir) {
    if (!impl_->server.set_mount_point("/", static_dir->string())) {
      throw Error("static asset directory not found: " + static_dir->string());
    }
  } else {
    impl_->server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kNoUiPage, "text/html");
    });
  }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
  } else {
    impl_->port = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  if (impl_->port < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return impl_->port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace solspace
