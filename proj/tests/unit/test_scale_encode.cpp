#include <gtest/gtest.h>

#include "papar/compile.hpp"
#include "papar/error.hpp"
#include "papar/scale.hpp"
#include "papar/scene.hpp"
#include "support/fixtures.hpp"

using namespace papar;

namespace {

ScaleDecl linear(std::vector<Value> domain, std::vector<double> range) {
  ScaleDecl d;
  d.name = "s";
  d.kind = ScaleKind::Linear;
  d.domain = std::move(domain);
  d.range = std::move(range);
  return d;
}

}  // namespace

TEST(LinearScale, MapsDomainOntoRange) {
  const ResolvedScale s = resolve_scale(linear({0, 10}, {0, 100}), {});
  EXPECT_DOUBLE_EQ(s.position(5), 50);
  EXPECT_DOUBLE_EQ(s.position(-1), -10);
  const ResolvedScale inv = resolve_scale(linear({0, 10}, {150, 0}), {});
  EXPECT_DOUBLE_EQ(inv.position(5), 75);
}

TEST(LinearScale, DataDrivenWithZero) {
  const Spec spec = fixtures::spec("bar_static");
  const TraceMap traces = run_spec(spec);
  ScaleDecl d;
  d.name = "s";
  d.domain = DataRef{"totals", {"sum_v"}};
  d.range = {0, 30};
  d.zero = true;
  const ResolvedScale s = resolve_scale(d, traces);
  EXPECT_EQ(s.domain_lo, 0);
  EXPECT_EQ(s.domain_hi, 3);
}

TEST(LinearScale, NonNumericDomain) {
  try {
    resolve_scale(linear({"a", "b"}, {0, 1}), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonNumericDomain);
  }
}

TEST(BandScale, StepBandwidthAndOffset) {
  const Spec spec = fixtures::spec("bar_static");
  const ScaleMap scales = resolve_scales(spec, run_spec(spec));
  const ResolvedScale& x = scales.at("x");
  EXPECT_DOUBLE_EQ(x.step, 50);
  EXPECT_DOUBLE_EQ(x.bandwidth, 45);
  EXPECT_DOUBLE_EQ(x.position("A"), 2.5);
  EXPECT_DOUBLE_EQ(x.position("B"), 52.5);
  EXPECT_THROW(x.position("Z"), Error);
}

TEST(BandScale, EmptyDomain) {
  Spec spec = fixtures::spec("bar_static");
  spec.datasets[0].values.clear();
  spec.datasets[0].fields = std::vector<std::string>{"cat", "v"};
  try {
    resolve_scales(spec, run_spec(spec));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyDomain);
  }
}

TEST(BandScale, GrowKeepsStepAndExtendsRange) {
  const Spec base = fixtures::spec("bar_static");
  const ScaleMap b = resolve_scales(base, run_spec(base));
  Spec aug = base;
  aug.datasets[0].values.push_back({{"cat", "C"}, {"v", 4}});
  const ScaleMap a = resolve_scales(aug, run_spec(aug), &b);
  const ResolvedScale& x = a.at("x");
  EXPECT_EQ(x.domain, (std::vector<Value>{"A", "B", "C"}));
  EXPECT_DOUBLE_EQ(x.step, 50);
  EXPECT_DOUBLE_EQ(x.range_end, 150);
  EXPECT_DOUBLE_EQ(x.position("A"), 2.5);
  EXPECT_DOUBLE_EQ(x.position("C"), 102.5);
}

TEST(BandScale, RefitRecomputesStep) {
  Spec base = fixtures::spec("bar_static");
  base.scales[0].extend = ScaleExtend::Refit;
  const ScaleMap b = resolve_scales(base, run_spec(base));
  Spec aug = base;
  aug.datasets[0].values.push_back({{"cat", "C"}, {"v", 4}});
  const ScaleMap a = resolve_scales(aug, run_spec(aug), &b);
  EXPECT_LT(a.at("x").step, 50);
}

TEST(PointScale, Positions) {
  ScaleDecl d;
  d.name = "p";
  d.kind = ScaleKind::Point;
  d.domain = std::vector<Value>{"a", "b", "c"};
  d.range = {0, 100};
  d.padding_outer = 0;
  const ResolvedScale s = resolve_scale(d, {});
  EXPECT_DOUBLE_EQ(s.position("a"), 0);
  EXPECT_DOUBLE_EQ(s.position("b"), 50);
  EXPECT_DOUBLE_EQ(s.position("c"), 100);
}

TEST(OrdinalScale, CyclesPalette) {
  ScaleDecl d;
  d.name = "c";
  d.kind = ScaleKind::Ordinal;
  std::vector<Value> dom;
  for (int i = 0; i < 12; ++i) dom.emplace_back(i);
  d.domain = dom;
  const ResolvedScale s = resolve_scale(d, {});
  EXPECT_EQ(s.color(0), std::string(kPalette[0]));
  EXPECT_EQ(s.color(3), std::string(kPalette[3]));
  EXPECT_EQ(s.color(10), std::string(kPalette[0]));
}

TEST(Encode, BarRects) {
  const Spec spec = fixtures::spec("bar_static");
  const TraceMap traces = run_spec(spec);
  const SceneGraph scene = encode_marks(spec, traces, resolve_scales(spec, traces), Layer::Static);
  EXPECT_EQ(scene.frame, (Rect{0, 0, 200, 160}));
  ASSERT_EQ(scene.items.size(), 2u);
  EXPECT_EQ(scene.items[0].geometry, Geometry(RectGeom{2.5, 105, 45, 45}));
  EXPECT_EQ(scene.items[1].geometry, Geometry(RectGeom{52.5, 105, 45, 45}));
  EXPECT_EQ(scene.items[0].style, "#4c78a8");
  EXPECT_EQ(scene.items[0].layer, Layer::Static);
  EXPECT_EQ(scene.items[0].dataset, "totals");
}

TEST(Encode, ZeroRowsGiveEmptyScene) {
  Spec spec = fixtures::spec("bar_static");
  spec.datasets[0].transforms.clear();
  spec.datasets[0].values.clear();
  spec.datasets[0].fields = std::vector<std::string>{"cat", "sum_v"};
  spec.scales[0].domain = std::vector<Value>{"A"};
  const TraceMap traces = run_spec(spec);
  const SceneGraph scene = encode_marks(spec, traces, resolve_scales(spec, traces), Layer::Static);
  EXPECT_TRUE(scene.items.empty());
}

// One item per final-stage row per mark for every fixture.
TEST(Encode, Totality) {
  for (const char* name : fixtures::kAll) {
    const Spec spec = fixtures::spec(name);
    const TraceMap traces = run_spec(spec);
    const SceneGraph scene = encode_marks(spec, traces, resolve_scales(spec, traces), Layer::Static);
    std::size_t expected = 0;
    for (const auto& m : spec.marks) expected += traces.at(m.from).output().rows.size();
    EXPECT_EQ(scene.items.size(), expected) << name;
  }
}

TEST(Encode, MissingScale) {
  Spec spec = fixtures::spec("bar_static");
  spec.marks[0].encode["y"].scale = "nope";
  const TraceMap traces = run_spec(spec);
  try {
    encode_marks(spec, traces, resolve_scales(spec, traces), Layer::Static);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingScale);
  }
}

TEST(BoundingBox, ArcSectorExtent) {
  MarkItem quarter;
  quarter.kind = MarkKind::Arc;
  quarter.geometry = ArcGeom{100, 100, 0, 10, 0, 1.5707963267948966};
  const Rect b = bounding_box(quarter);
  EXPECT_NEAR(b.x, 100, 1e-9);
  EXPECT_NEAR(b.y, 90, 1e-9);
  EXPECT_NEAR(b.width, 10, 1e-9);
  EXPECT_NEAR(b.height, 10, 1e-9);
  EXPECT_FALSE(bounding_box(std::vector<MarkItem>{}).has_value());
}
