#include <gtest/gtest.h>

#include <thread>

#include "papar/compile.hpp"
#include "papar/spechub.hpp"
#include "support/fixtures.hpp"
#include "support/tempdir.hpp"

using namespace papar;

namespace {

const char* kBase = "http://hub.test";

SpecHub make_hub(const TempDir& dir) {
  return SpecHub(dir.path() / "store", kBase, [] { return std::int64_t{1700000000}; });
}

}  // namespace

TEST(SpecHub, PublishCreatesVersionOne) {
  TempDir dir;
  SpecHub hub = make_hub(dir);
  const std::string body = fixtures::text("bar_extend");
  const HubResponse r = hub.publish(body, false);
  ASSERT_EQ(r.status, 201) << r.body;
  const auto j = r.json();
  const std::string id = spec_id(canonicalize(fixtures::spec("bar_extend")));
  EXPECT_EQ(j["id"], id);
  EXPECT_EQ(j["version"], 1);
  EXPECT_EQ(j["anchor"]["id"], id);
  EXPECT_EQ(j["anchor"]["hub"], kBase);
  EXPECT_EQ(j["virtualURL"], std::string(kBase) + "/specs/" + id + "/virtual?v=1");
  EXPECT_EQ(j["staticRenderURL"], std::string(kBase) + "/specs/" + id + "/reference?v=1");
  EXPECT_EQ(hub.fetch_spec(id).body, canonicalize(fixtures::spec("bar_extend")));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "store" / id / "v1.pv.json"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "store" / id / "meta.json"));
}

TEST(SpecHub, RepublishIsNoOp) {
  TempDir dir;
  SpecHub hub = make_hub(dir);
  const HubResponse first = hub.publish(fixtures::text("bar_extend"), false);
  const HubResponse again = hub.publish(fixtures::text("bar_extend"), false);
  EXPECT_EQ(again.status, 200);
  EXPECT_EQ(again.body, first.body);
  EXPECT_EQ(hub.store().latest_version(first.json()["id"]), 1);
}

TEST(SpecHub, NewVersionUnderExistingId) {
  TempDir dir;
  SpecHub hub = make_hub(dir);
  const std::string id = hub.publish(fixtures::text("bar_extend"), false).json()["id"];
  Spec v2 = fixtures::spec("bar_extend");
  std::get<std::vector<Record>>(v2.ar->appends[0].source).push_back({{"cat", "D"}, {"v", 2}});
  const HubResponse r = hub.publish(canonicalize(v2), false, id);
  ASSERT_EQ(r.status, 201) << r.body;
  EXPECT_EQ(r.json()["version"], 2);
  EXPECT_EQ(hub.fetch_spec(id).body, canonicalize(v2));
  EXPECT_EQ(hub.fetch_spec(id, 1).body, canonicalize(fixtures::spec("bar_extend")));
  EXPECT_NE(hub.fetch_virtual(id, 1).body, hub.fetch_virtual(id, 2).body);
  EXPECT_EQ(hub.fetch_reference(id, 1).body, hub.fetch_reference(id, 1).body);
}

TEST(SpecHub, InvalidDesignIsRefusedUnlessForced) {
  TempDir dir;
  SpecHub hub = make_hub(dir);
  const HubResponse r = hub.publish(fixtures::text("tree_cluster"), false);
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(r.json()["error"], "ValidationFailed");
  EXPECT_EQ(r.json()["detail"]["verdict"], "invalid");
  const auto store = dir.path() / "store";
  EXPECT_TRUE(!std::filesystem::exists(store) || std::filesystem::is_empty(store));
  EXPECT_EQ(hub.publish(fixtures::text("tree_cluster"), true).status, 201);
}

TEST(SpecHub, BadBodies) {
  TempDir dir;
  SpecHub hub = make_hub(dir);
  const HubResponse syntax = hub.publish("{", false);
  EXPECT_EQ(syntax.status, 400);
  EXPECT_EQ(syntax.json()["error"], "InvalidSpec");
  nlohmann::json doc = nlohmann::json::parse(fixtures::text("bar_static"));
  doc["marks"][0]["from"] = "nope";
  EXPECT_EQ(hub.publish(doc.dump(), false).status, 400);
}

TEST(SpecHub, NotFound) {
  TempDir dir;
  SpecHub hub = make_hub(dir);
  EXPECT_EQ(hub.fetch_spec("0123456789abcdef").status, 404);
  EXPECT_EQ(hub.fetch_spec("0123456789abcdef").json()["error"], "UnknownId");
  EXPECT_EQ(hub.publish(fixtures::text("bar_extend"), false, std::string("0123456789abcdef")).status, 404);
  const std::string id = hub.publish(fixtures::text("bar_extend"), false).json()["id"];
  const HubResponse r = hub.fetch_reference(id, 5);
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(r.json()["error"], "UnknownVersion");
}

TEST(SpecHub, VirtualNeedsArBlock) {
  TempDir dir;
  SpecHub hub = make_hub(dir);
  const std::string id = hub.publish(fixtures::text("bar_static"), false).json()["id"];
  EXPECT_EQ(hub.fetch_virtual(id).status, 422);
  EXPECT_EQ(hub.fetch_reference(id).status, 200);
}

TEST(SpecHub, AnchorAndReference) {
  TempDir dir;
  SpecHub hub = make_hub(dir);
  const auto receipt = hub.publish(fixtures::text("bar_extend"), false).json();
  const std::string id = receipt["id"];
  EXPECT_EQ(hub.fetch_anchor(id).json(), receipt["anchor"]);
  const HubResponse ref = hub.fetch_reference(id);
  EXPECT_EQ(ref.content_type, "image/svg+xml");
  EXPECT_NE(ref.body.find("data-anchor"), std::string::npos);
}

TEST(SpecHub, StatelessCompileAndValidate) {
  TempDir dir;
  SpecHub hub = make_hub(dir);
  const HubResponse c = hub.compile(fixtures::text("bar_extend"));
  EXPECT_EQ(c.status, 200);
  EXPECT_EQ(c.body, render_preview_svg(compile_design(fixtures::spec("bar_extend"))));
  const HubResponse v = hub.validate(fixtures::text("treemap_extend"));
  EXPECT_EQ(v.status, 200);
  EXPECT_EQ(v.json()["verdict"], "invalid");
}

TEST(HubServer, RoundTripOverHttp) {
  TempDir dir;
  SpecHub hub(dir.path() / "store", "http://127.0.0.1");
  HubServer server(hub);
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread t([&] { server.listen(); });
  HubClient client("http://127.0.0.1:" + std::to_string(port));

  const HubResponse pub = client.post("/specs", fixtures::text("bar_extend"));
  ASSERT_EQ(pub.status, 201) << pub.body;
  const std::string id = pub.json()["id"];
  const HubResponse virt = client.get("/specs/" + id + "/virtual?v=1");
  EXPECT_EQ(virt.status, 200);
  EXPECT_EQ(virt.body, render_virtual_svg(compile_design(fixtures::spec("bar_extend"))));
  EXPECT_EQ(client.get("/specs/" + id).body, canonicalize(fixtures::spec("bar_extend")));
  EXPECT_EQ(client.get("/specs/ffffffffffffffff").status, 404);
  EXPECT_EQ(client.post("/specs", fixtures::text("tree_cluster")).status, 409);
  EXPECT_EQ(client.post("/specs?force=1", fixtures::text("tree_cluster")).status, 201);
  EXPECT_EQ(client.post("/validate", fixtures::text("bar_extend")).json()["verdict"], "valid");
  EXPECT_EQ(client.post("/compile", fixtures::text("bar_extend")).status, 200);

  server.stop();
  t.join();
  EXPECT_EQ(client.get("/specs/" + id).status, 0);
}
