#include "papar/spechub.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "papar/compile.hpp"
#include "papar/error.hpp"
#include "papar/spec.hpp"
#include "papar/validator.hpp"

namespace papar {

namespace fs = std::filesystem;

namespace {

std::optional<std::string> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_atomic(const fs::path& p, const std::string& bytes) {
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << bytes;
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, p);
}

std::string version_file(int version, std::string_view suffix) {
  return "v" + std::to_string(version) + std::string(suffix);
}

}  // namespace

SpecStore::SpecStore(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

bool SpecStore::has(const std::string& id) const { return latest_version(id) > 0; }

int SpecStore::latest_version(const std::string& id) const {
  if (id.size() != 16 || id.find_first_not_of("0123456789abcdef") != std::string::npos) return 0;
  auto meta = slurp(dir(id) / "meta.json");
  if (!meta) return 0;
  auto j = nlohmann::json::parse(*meta, nullptr, false);
  if (j.is_discarded() || !j.contains("versions")) return 0;
  return static_cast<int>(j["versions"].size());
}

std::optional<std::string> SpecStore::read(const std::string& id, int version, std::string_view suffix) const {
  if (version < 1 || version > latest_version(id)) return std::nullopt;
  return slurp(dir(id) / version_file(version, suffix));
}

void SpecStore::write_version(const std::string& id, int version, const std::string& spec_bytes,
                              const std::string& static_svg, std::int64_t published_at) {
  fs::create_directories(dir(id));
  write_atomic(dir(id) / version_file(version, ".pv.json"), spec_bytes);
  write_atomic(dir(id) / version_file(version, ".static.svg"), static_svg);
  nlohmann::json meta = {{"id", id}, {"versions", nlohmann::json::array()}};
  if (auto old = slurp(dir(id) / "meta.json")) meta = nlohmann::json::parse(*old);
  meta["versions"].push_back({{"version", version}, {"publishedAt", published_at}});
  write_atomic(dir(id) / "meta.json", meta.dump(2) + "\n");
}

HubResponse error_response(int status, const std::string& code, nlohmann::json detail) {
  return {status, "application/json", nlohmann::json{{"error", code}, {"detail", std::move(detail)}}.dump()};
}

namespace {

HubResponse svg(std::string body) { return {200, "image/svg+xml", std::move(body)}; }

nlohmann::json issues_json(const std::vector<SchemaIssue>& issues) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& i : issues) out.push_back({{"code", i.code}, {"path", i.path}, {"message", i.message}});
  return out;
}

nlohmann::json error_json(const Error& e) {
  nlohmann::json j = {{"code", std::string(to_string(e.code()))}, {"path", e.path()}, {"message", e.what()}};
  if (e.stage) j["stage"] = *e.stage;
  if (e.dataset) j["dataset"] = *e.dataset;
  if (e.line) {
    j["line"] = e.line;
    j["column"] = e.column;
  }
  return j;
}

// Parses and schema-checks; on failure fills `error`.
std::optional<Spec> load(const std::string& body, HubResponse& error) {
  try {
    Spec spec = parse_spec(body);
    auto issues = validate_schema(spec);
    if (!issues.empty()) {
      error = error_response(400, "InvalidSpec", {{"issues", issues_json(issues)}});
      return std::nullopt;
    }
    return spec;
  } catch (const Error& e) {
    error = error_response(400, "InvalidSpec", {{"issues", nlohmann::json::array({error_json(e)})}});
    return std::nullopt;
  }
}

}  // namespace

SpecHub::SpecHub(fs::path store_dir, std::string base_url, Clock clock)
    : store_(std::move(store_dir)), base_url_(std::move(base_url)), clock_(std::move(clock)) {
  if (!clock_) {
    clock_ = [] {
      return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
          .count();
    };
  }
}

nlohmann::json SpecHub::receipt(const std::string& id, int version, const std::string& spec_bytes) const {
  const Spec spec = parse_spec(spec_bytes);
  const std::string v = "?v=" + std::to_string(version);
  nlohmann::json r = {{"id", id},
                      {"version", version},
                      {"anchor", anchor_payload(spec, id, version, base_url_)},
                      {"staticRenderURL", base_url_ + "/specs/" + id + "/reference" + v}};
  if (spec.ar) r["virtualURL"] = base_url_ + "/specs/" + id + "/virtual" + v;
  return r;
}

HubResponse SpecHub::publish(const std::string& body, bool force, const std::optional<std::string>& target) {
  HubResponse error;
  auto spec = load(body, error);
  if (!spec) return error;
  const std::string canonical = canonicalize(*spec);

  CompiledDesign design;
  try {
    design = compile_design(*spec);
  } catch (const Error& e) {
    return error_response(400, "InvalidSpec", {{"issues", nlohmann::json::array({error_json(e)})}});
  }

  std::lock_guard lock(writer_);
  const std::string id = target.value_or(spec_id(canonical));
  const int latest = store_.latest_version(id);
  if (target && latest == 0) return error_response(404, "UnknownId", id);

  // Republishing stored bytes is a no-op.
  if (latest > 0) {
    if (target) {
      if (store_.read(id, latest, ".pv.json") == canonical) return {200, "application/json", receipt(id, latest, canonical).dump()};
    } else {
      for (int v = latest; v >= 1; --v) {
        if (store_.read(id, v, ".pv.json") == canonical) return {200, "application/json", receipt(id, v, canonical).dump()};
      }
    }
  }

  const ValidationReport report = papar::validate(design);
  if (report.verdict == Verdict::Invalid && !force) {
    return error_response(409, "ValidationFailed", report_to_json(report));
  }

  const int version = latest + 1;
  const std::string reference = render_static_svg(design, anchor_payload(*spec, id, version, base_url_));
  store_.write_version(id, version, canonical, reference, clock_());
  return {201, "application/json", receipt(id, version, canonical).dump()};
}

std::variant<int, HubResponse> SpecHub::resolve(const std::string& id, std::optional<int> version) const {
  const int latest = store_.latest_version(id);
  if (latest == 0) return error_response(404, "UnknownId", id);
  const int v = version.value_or(latest);
  if (v < 1 || v > latest) return error_response(404, "UnknownVersion", {{"id", id}, {"version", v}});
  return v;
}

HubResponse SpecHub::fetch_spec(const std::string& id, std::optional<int> version) const {
  auto r = resolve(id, version);
  if (auto* e = std::get_if<HubResponse>(&r)) return *e;
  return {200, "application/json", *store_.read(id, std::get<int>(r), ".pv.json")};
}

HubResponse SpecHub::fetch_reference(const std::string& id, std::optional<int> version) const {
  auto r = resolve(id, version);
  if (auto* e = std::get_if<HubResponse>(&r)) return *e;
  return svg(*store_.read(id, std::get<int>(r), ".static.svg"));
}

HubResponse SpecHub::fetch_anchor(const std::string& id, std::optional<int> version) const {
  auto r = resolve(id, version);
  if (auto* e = std::get_if<HubResponse>(&r)) return *e;
  const int v = std::get<int>(r);
  const Spec spec = parse_spec(*store_.read(id, v, ".pv.json"));
  return {200, "application/json", anchor_payload(spec, id, v, base_url_).dump()};
}

HubResponse SpecHub::fetch_virtual(const std::string& id, std::optional<int> version) const {
  auto r = resolve(id, version);
  if (auto* e = std::get_if<HubResponse>(&r)) return *e;
  const Spec spec = parse_spec(*store_.read(id, std::get<int>(r), ".pv.json"));
  if (!spec.ar) return error_response(422, "NoArBlock", "spec has no ar block");
  try {
    return svg(render_virtual_svg(compile_design(spec)));
  } catch (const Error& e) {
    return error_response(422, std::string(to_string(e.code())), error_json(e));
  }
}

HubResponse SpecHub::compile(const std::string& body) const {
  HubResponse error;
  auto spec = load(body, error);
  if (!spec) return error;
  try {
    return svg(render_preview_svg(compile_design(*spec)));
  } catch (const Error& e) {
    return error_response(422, std::string(to_string(e.code())), error_json(e));
  }
}

HubResponse SpecHub::validate(const std::string& body) const {
  HubResponse error;
  auto spec = load(body, error);
  if (!spec) return error;
  try {
    return {200, "application/json", report_to_json(papar::validate(*spec)).dump()};
  } catch (const Error& e) {
    return error_response(422, std::string(to_string(e.code())), error_json(e));
  }
}

}  // namespace papar
