#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace papar {

struct HubResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;

  nlohmann::json json() const { return nlohmann::json::parse(body); }
};

// One directory per id holding v<N>.pv.json, v<N>.static.svg and meta.json.
// Version files are written once (temp file + rename) and never touched again.
class SpecStore {
 public:
  explicit SpecStore(std::filesystem::path root);

  bool has(const std::string& id) const;
  // 0 if the id is unknown.
  int latest_version(const std::string& id) const;
  std::optional<std::string> read(const std::string& id, int version, std::string_view suffix) const;
  // Writes the version files and appends to meta.json. Caller serializes.
  void write_version(const std::string& id, int version, const std::string& spec_bytes,
                     const std::string& static_svg, std::int64_t published_at);

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path dir(const std::string& id) const { return root_ / id; }
  std::filesystem::path root_;
};

class SpecHub {
 public:
  using Clock = std::function<std::int64_t()>;

  SpecHub(std::filesystem::path store_dir, std::string base_url, Clock clock = {});

  // POST /specs (no id) or POST /specs/{id}. 201 new version, 200 no-op,
  // 400 InvalidSpec, 404 UnknownId, 409 ValidationFailed.
  HubResponse publish(const std::string& body, bool force, const std::optional<std::string>& id = {});
  HubResponse fetch_spec(const std::string& id, std::optional<int> version = {}) const;
  HubResponse fetch_virtual(const std::string& id, std::optional<int> version = {}) const;
  HubResponse fetch_reference(const std::string& id, std::optional<int> version = {}) const;
  HubResponse fetch_anchor(const std::string& id, std::optional<int> version = {}) const;
  // Stateless helpers for the editor: composed preview SVG, validation report.
  HubResponse compile(const std::string& body) const;
  HubResponse validate(const std::string& body) const;

  const std::string& base_url() const { return base_url_; }
  const SpecStore& store() const { return store_; }

 private:
  // Resolves the version or returns the 404 response.
  std::variant<int, HubResponse> resolve(const std::string& id, std::optional<int> version) const;
  nlohmann::json receipt(const std::string& id, int version, const std::string& spec_bytes) const;

  SpecStore store_;
  std::string base_url_;
  Clock clock_;
  std::mutex writer_;
};

HubResponse error_response(int status, const std::string& code, nlohmann::json detail);

// HTTP front end. Routes: POST /specs, POST /specs/{id}, GET /specs/{id},
// /specs/{id}/virtual, /specs/{id}/reference, /specs/{id}/anchor (all with
// optional ?v=N), POST /compile, POST /validate; static files from `ui_dir`.
class HubServer {
 public:
  HubServer(SpecHub& hub, std::optional<std::filesystem::path> ui_dir = {});
  ~HubServer();
  HubServer(const HubServer&) = delete;
  HubServer& operator=(const HubServer&) = delete;

  // Binds to `port` (0 picks a free one) and returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Minimal client for the routes above.
class HubClient {
 public:
  explicit HubClient(std::string base_url);
  ~HubClient();

  HubResponse post(const std::string& path, const std::string& body);
  HubResponse get(const std::string& path);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace papar
