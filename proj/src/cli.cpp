#include "papar/cli.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "papar/compile.hpp"
#include "papar/error.hpp"
#include "papar/spechub.hpp"
#include "papar/validator.hpp"

namespace papar {

namespace fs = std::filesystem;

void watch_file(const fs::path& path, const std::function<void()>& action, const std::atomic<bool>& stop,
                std::chrono::milliseconds debounce) {
  using clock = std::chrono::steady_clock;
  auto mtime = [&]() -> std::optional<fs::file_time_type> {
    std::error_code ec;
    auto t = fs::last_write_time(path, ec);
    if (ec) return std::nullopt;
    return t;
  };
  action();
  auto seen = mtime();
  std::optional<clock::time_point> changed_at;
  while (!stop.load()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    const auto now = mtime();
    if (now != seen) {
      seen = now;
      changed_at = clock::now();
    } else if (changed_at && clock::now() - *changed_at >= debounce) {
      changed_at.reset();
      action();
    }
  }
}

namespace {

struct CliFailure {
  int code;
};

std::string read_file(const fs::path& p, std::ostream& err) {
  std::ifstream in(p, std::ios::binary);
  if (!in) {
    err << "error: cannot read " << p.string() << "\n";
    throw CliFailure{kExitUsage};
  }
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& bytes, std::ostream& err) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << bytes;
  if (!out) {
    err << "error: cannot write " << p.string() << "\n";
    throw CliFailure{kExitUsage};
  }
}

std::string describe(const Error& e) {
  std::string msg = std::string(to_string(e.code())) + ": " + e.what();
  if (e.stage) msg += " (dataset '" + e.dataset.value_or("?") + "', stage " + std::to_string(*e.stage) + ")";
  if (e.line) msg += " at line " + std::to_string(e.line) + ", column " + std::to_string(e.column);
  if (!e.path().empty()) msg += " [" + e.path() + "]";
  return msg;
}

// Parses and schema-checks, mapping failures to exit 3.
Spec load_spec(const fs::path& p, std::ostream& err) {
  const std::string text = read_file(p, err);
  try {
    Spec spec = parse_spec(text);
    auto issues = validate_schema(spec);
    if (!issues.empty()) {
      for (const auto& i : issues) err << "error: " << i.code << " at " << i.path << ": " << i.message << "\n";
      throw CliFailure{kExitCompile};
    }
    return spec;
  } catch (const Error& e) {
    err << "error: " << describe(e) << "\n";
    throw CliFailure{kExitCompile};
  }
}

CompiledDesign compile_or_fail(const Spec& spec, std::optional<std::uint64_t> seed, std::ostream& err) {
  try {
    return compile_design(spec, seed);
  } catch (const Error& e) {
    err << "error: " << describe(e) << "\n";
    throw CliFailure{kExitCompile};
  }
}

std::string default_hub() {
  const char* env = std::getenv("PAPAR_HUB");
  return env && *env ? env : kDefaultHub;
}

int cmd_compile(const fs::path& spec_path, const fs::path& out_dir, std::optional<std::uint64_t> seed,
                const std::string& hub, std::ostream& out, std::ostream& err) {
  const Spec spec = load_spec(spec_path, err);
  const CompiledDesign d = compile_or_fail(spec, seed, err);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const auto anchor = anchor_payload(spec, spec_id(canonicalize(spec)), 1, hub);
  write_file(out_dir / "static.svg", render_static_svg(d, anchor), err);
  if (d.has_ar()) {
    write_file(out_dir / "virtual.svg", render_virtual_svg(d), err);
  } else {
    err << "note: spec has no ar block; virtual.svg not written\n";
  }
  write_file(out_dir / "preview.svg", render_preview_svg(d), err);
  write_file(out_dir / "anchor.json", anchor.dump() + "\n", err);
  out << "wrote " << (d.has_ar() ? 4 : 3) << " files to " << out_dir.string() << "\n";
  return kExitOk;
}

int cmd_validate(const fs::path& spec_path, bool json, std::optional<std::uint64_t> seed, std::ostream& out,
                 std::ostream& err) {
  const Spec spec = load_spec(spec_path, err);
  const CompiledDesign d = compile_or_fail(spec, seed, err);
  const ValidationReport r = validate(d);
  if (json) {
    out << report_to_json(r).dump(2) << "\n";
  } else {
    out << report_to_text(r);
  }
  return r.verdict == Verdict::Invalid ? kExitInvalid : kExitOk;
}

int cmd_mock(const fs::path& spec_path, std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err) {
  const Spec spec = load_spec(spec_path, err);
  nlohmann::json result = nlohmann::json::array();
  if (spec.ar) {
    const ArBlock expanded = expand_placeholders(*spec.ar, seed);
    for (const auto& a : expanded.appends) {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& row : std::get<std::vector<Record>>(a.source)) {
        nlohmann::json r = nlohmann::json::object();
        for (const auto& [k, v] : row) r[k] = to_json(v);
        rows.push_back(std::move(r));
      }
      result.push_back({{"dataset", a.dataset}, {"values", std::move(rows)}});
    }
  }
  out << result.dump(2) << "\n";
  return kExitOk;
}

int cmd_publish(const fs::path& spec_path, const std::string& hub, const std::optional<std::string>& id, bool force,
                std::ostream& out, std::ostream& err) {
  const Spec spec = load_spec(spec_path, err);
  const CompiledDesign d = compile_or_fail(spec, std::nullopt, err);
  const ValidationReport r = validate(d);
  if (r.verdict == Verdict::Invalid) {
    if (!force) {
      err << report_to_text(r) << "error: design is invalid; not published (use --force to publish anyway)\n";
      return kExitInvalid;
    }
    err << "warning: publishing an invalid design because of --force\n" << report_to_text(r);
  }
  HubClient client(hub);
  std::string path = id ? "/specs/" + *id : "/specs";
  if (force) path += "?force=1";
  const HubResponse res = client.post(path, canonicalize(spec));
  if (res.status == 0) {
    err << "error: hub " << hub << " unreachable: " << res.body << "\n";
    return kExitUsage;
  }
  if (res.status != 200 && res.status != 201) {
    err << "error: hub answered " << res.status << ": " << res.body << "\n";
    if (res.status == 409) return kExitInvalid;
    if (res.status == 400) return kExitCompile;
    return kExitUsage;
  }
  out << res.body << "\n";
  return kExitOk;
}

std::atomic<bool> g_stop{false};
HubServer* g_server = nullptr;

extern "C" void on_signal(int) {
  g_stop = true;
  if (g_server) g_server->stop();
}

int cmd_serve(const std::string& host, int port, const fs::path& store, std::optional<std::string> base_url,
              const std::optional<fs::path>& ui, std::ostream& out, std::ostream& err) {
  SpecHub hub(store, base_url.value_or("http://localhost:" + std::to_string(port)));
  HubServer server(hub, ui);
  const int bound = server.bind(host, port);
  if (bound < 0) {
    err << "error: cannot bind " << host << ":" << port << "\n";
    return kExitUsage;
  }
  out << "serving " << store.string() << " on " << host << ":" << bound << "\n" << std::flush;
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen();
  g_server = nullptr;
  return kExitOk;
}

// Runs `body` once or under watch, mapping failures to exit codes.
int run_guarded(const std::function<int()>& body, bool watch, const fs::path& spec, std::ostream& err) {
  auto once = [&]() -> int {
    try {
      return body();
    } catch (const CliFailure& f) {
      return f.code;
    } catch (const Error& e) {
      err << "error: " << describe(e) << "\n";
      return kExitCompile;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  };
  if (!watch) return once();
  int last = kExitOk;
  g_stop = false;
  std::signal(SIGINT, on_signal);
  watch_file(spec, [&] { last = once(); }, g_stop);
  return last;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"papar: compile, validate and publish augmented static visualizations", "papar"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool watch = false;
  bool json = false;
  bool force = false;
  std::string hub = default_hub();
  std::optional<std::string> id;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string store = "papar-store";
  std::optional<std::string> base_url;
  std::optional<std::string> ui;

  auto* compile = app.add_subcommand("compile", "write static.svg, virtual.svg, preview.svg and anchor.json");
  compile->add_option("spec", spec_path, "spec file (.pv.json)")->required();
  compile->add_option("-o,--out", out_dir, "output directory");
  compile->add_option("--seed", seed, "placeholder seed override");
  compile->add_option("--hub", hub, "hub URL recorded in the anchor payload");
  compile->add_flag("-w,--watch", watch, "recompile when the file changes");

  auto* validate_cmd = app.add_subcommand("validate", "check that the augmentation keeps the static layer intact");
  validate_cmd->add_option("spec", spec_path, "spec file (.pv.json)")->required();
  validate_cmd->add_flag("--json", json, "print the report as JSON");
  validate_cmd->add_option("--seed", seed, "placeholder seed override");
  validate_cmd->add_flag("-w,--watch", watch, "revalidate when the file changes");

  auto* mock = app.add_subcommand("mock", "print the generated placeholder rows");
  mock->add_option("spec", spec_path, "spec file (.pv.json)")->required();
  mock->add_option("--seed", seed, "placeholder seed override");

  auto* publish = app.add_subcommand("publish", "upload the spec to a hub");
  publish->add_option("spec", spec_path, "spec file (.pv.json)")->required();
  publish->add_option("--hub", hub, "hub URL (default $PAPAR_HUB or " + std::string(kDefaultHub) + ")");
  publish->add_option("--id", id, "publish a new version of an existing id");
  publish->add_flag("--force", force, "publish even if validation fails");

  auto* serve = app.add_subcommand("serve", "run the hub");
  serve->add_option("--host", host, "bind address");
  serve->add_option("-p,--port", port, "port (0 picks a free one)");
  serve->add_option("--store", store, "store directory");
  serve->add_option("--base-url", base_url, "public URL written into receipts and anchors");
  serve->add_option("--ui", ui, "directory of editor assets served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (compile->parsed()) {
    return run_guarded([&] { return cmd_compile(spec_path, out_dir, seed, hub, out, err); }, watch, spec_path, err);
  }
  if (validate_cmd->parsed()) {
    return run_guarded([&] { return cmd_validate(spec_path, json, seed, out, err); }, watch, spec_path, err);
  }
  if (mock->parsed()) return run_guarded([&] { return cmd_mock(spec_path, seed, out, err); }, false, spec_path, err);
  if (publish->parsed()) {
    return run_guarded([&] { return cmd_publish(spec_path, hub, id, force, out, err); }, false, spec_path, err);
  }
  std::optional<fs::path> ui_dir;
  if (ui) ui_dir = *ui;
  return run_guarded([&] { return cmd_serve(host, port, store, base_url, ui_dir, out, err); }, false, {}, err);
}

}  // namespace papar
