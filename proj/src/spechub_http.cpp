// The only translation unit that includes httplib.
#include <httplib.h>

#include <mutex>

#include "papar/spechub.hpp"

namespace papar {

namespace {

std::optional<int> version_param(const httplib::Request& req) {
  if (!req.has_param("v")) return std::nullopt;
  try {
    return std::stoi(req.get_param_value("v"));
  } catch (const std::exception&) {
    return -1;
  }
}

bool flag_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return false;
  const std::string v = req.get_param_value(name);
  return v.empty() || v == "1" || v == "true";
}

void send(httplib::Response& res, const HubResponse& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

}  // namespace

struct HubServer::Impl {
  SpecHub& hub;
  httplib::Server server;
  // Guards the window between listen() being called and the server running,
  // so a stop() in that window is not lost.
  std::mutex mu;
  bool listening = false;
  bool stopped = false;
  explicit Impl(SpecHub& h) : hub(h) {}
};

HubServer::HubServer(SpecHub& hub, std::optional<std::filesystem::path> ui_dir) : impl_(std::make_unique<Impl>(hub)) {
  auto& s = impl_->server;
  SpecHub* h = &hub;
  constexpr const char* kId = "/specs/([0-9a-f]{16})";

  s.Post("/specs", [h](const httplib::Request& req, httplib::Response& res) {
    send(res, h->publish(req.body, flag_param(req, "force")));
  });
  s.Post(kId, [h](const httplib::Request& req, httplib::Response& res) {
    send(res, h->publish(req.body, flag_param(req, "force"), req.matches[1].str()));
  });
  s.Get(kId, [h](const httplib::Request& req, httplib::Response& res) {
    send(res, h->fetch_spec(req.matches[1].str(), version_param(req)));
  });
  s.Get(std::string(kId) + "/virtual", [h](const httplib::Request& req, httplib::Response& res) {
    send(res, h->fetch_virtual(req.matches[1].str(), version_param(req)));
  });
  s.Get(std::string(kId) + "/reference", [h](const httplib::Request& req, httplib::Response& res) {
    send(res, h->fetch_reference(req.matches[1].str(), version_param(req)));
  });
  s.Get(std::string(kId) + "/anchor", [h](const httplib::Request& req, httplib::Response& res) {
    send(res, h->fetch_anchor(req.matches[1].str(), version_param(req)));
  });
  s.Post("/compile", [h](const httplib::Request& req, httplib::Response& res) { send(res, h->compile(req.body)); });
  s.Post("/validate", [h](const httplib::Request& req, httplib::Response& res) { send(res, h->validate(req.body)); });
  if (ui_dir) s.set_mount_point("/", ui_dir->string());

  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send(res, error_response(res.status, "NotFound", "no such route"));
  });
  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    send(res, error_response(500, "Internal", what));
  });
}

HubServer::~HubServer() { stop(); }

int HubServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HubServer::listen() {
  {
    std::lock_guard lock(impl_->mu);
    if (impl_->stopped) return;
    impl_->listening = true;
  }
  impl_->server.listen_after_bind();
}

void HubServer::stop() {
  if (!impl_) return;
  bool listening = false;
  {
    std::lock_guard lock(impl_->mu);
    impl_->stopped = true;
    listening = impl_->listening;
  }
  if (listening) impl_->server.wait_until_ready();
  impl_->server.stop();
}

struct HubClient::Impl {
  httplib::Client client;
  explicit Impl(const std::string& url) : client(url) {
    client.set_connection_timeout(5);
    client.set_read_timeout(30);
  }
};

HubClient::HubClient(std::string base_url) : impl_(std::make_unique<Impl>(base_url)) {}
HubClient::~HubClient() = default;

namespace {

HubResponse convert(const httplib::Result& r) {
  if (!r) {
    return error_response(0, "Unreachable", httplib::to_string(r.error()));
  }
  HubResponse out;
  out.status = r->status;
  out.content_type = r->get_header_value("Content-Type");
  out.body = r->body;
  return out;
}

}  // namespace

HubResponse HubClient::post(const std::string& path, const std::string& body) {
  return convert(impl_->client.Post(path, body, "application/json"));
}

HubResponse HubClient::get(const std::string& path) { return convert(impl_->client.Get(path)); }

}  // namespace papar
