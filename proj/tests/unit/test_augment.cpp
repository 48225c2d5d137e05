#include <gtest/gtest.h>

#include <cmath>

#include "papar/augment.hpp"
#include "papar/compile.hpp"
#include "papar/error.hpp"
#include "support/fixtures.hpp"

using namespace papar;

namespace {

PlaceholderField quantitative(const std::string& name, double lo, double hi) {
  PlaceholderField f;
  f.name = name;
  f.kind = FieldKind::Quantitative;
  f.range = std::make_pair(lo, hi);
  return f;
}

PlaceholderField categorical(const std::string& name, const std::string& pattern) {
  PlaceholderField f;
  f.name = name;
  f.kind = FieldKind::Categorical;
  f.pattern = pattern;
  return f;
}

SceneGraph scene_with(Rect frame, std::vector<Rect> boxes) {
  SceneGraph s{frame, {}};
  std::uint64_t pid = 1;
  for (const Rect& b : boxes) {
    MarkItem m;
    m.geometry = RectGeom{b.x, b.y, b.width, b.height};
    m.style = "#000000";
    m.pid = pid++;
    s.items.push_back(m);
  }
  return s;
}

}  // namespace

TEST(Classify, FourModes) {
  auto cls = [](const char* name) { return classify_augmentation(fixtures::spec(name)); };
  EXPECT_EQ(cls("bar_extend"), (AugmentationClass{ArMode::Extend, Encodings::Same, Composition::Integrated}));
  EXPECT_EQ(cls("composite_overlay"),
            (AugmentationClass{ArMode::Composite, Encodings::Different, Composition::Integrated}));
  EXPECT_EQ(cls("small_multiple"),
            (AugmentationClass{ArMode::SmallMultiple, Encodings::Same, Composition::Separate}));
  EXPECT_EQ(cls("multiple_view"),
            (AugmentationClass{ArMode::MultipleView, Encodings::Different, Composition::Separate}));
}

TEST(Classify, NoArBlock) {
  try {
    classify_augmentation(fixtures::spec("bar_static"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoArBlock);
  }
}

TEST(Classify, ShapeConflicts) {
  auto path_of = [](const Spec& s) {
    try {
      classify_augmentation(s);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ModeShapeConflict);
      return e.path();
    }
    return std::string("no error");
  };
  Spec extend_nested = fixtures::spec("bar_extend");
  extend_nested.ar->nested = fixtures::spec("bar_static");
  EXPECT_EQ(path_of(extend_nested), "ar.nested");
  Spec extend_empty = fixtures::spec("bar_extend");
  extend_empty.ar->appends.clear();
  EXPECT_EQ(path_of(extend_empty), "ar.appends");
  Spec composite_bare = fixtures::spec("composite_overlay");
  composite_bare.ar->nested = Boxed<Spec>();
  EXPECT_EQ(path_of(composite_bare), "ar.nested");
}

TEST(Placeholder, PatternNumbersFromOne) {
  PlaceholderSpec p;
  p.count = 3;
  p.fields = {categorical("id", "Node-*")};
  const auto rows = generate_placeholder_rows(p);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].at("id"), Value("Node-1"));
  EXPECT_EQ(rows[1].at("id"), Value("Node-2"));
  EXPECT_EQ(rows[2].at("id"), Value("Node-3"));
}

// Reference values computed outside the library from the generator's recurrence.
TEST(Placeholder, SeededValuesArePinned) {
  PlaceholderSpec p;
  p.count = 2;
  p.seed = 42;
  p.fields = {quantitative("v", 0, 10)};
  const auto rows = generate_placeholder_rows(p);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(*rows[0].at("v").as_number(), 5.682303266439076);
  EXPECT_DOUBLE_EQ(*rows[1].at("v").as_number(), 2.254634289477513);
}

TEST(Placeholder, SeedOverride) {
  PlaceholderSpec p;
  p.count = 2;
  p.seed = 7;
  p.fields = {quantitative("v", 0, 10)};
  EXPECT_EQ(generate_placeholder_rows(p, 42)[0].at("v"), Value(5.682303266439076));
  EXPECT_NE(generate_placeholder_rows(p)[0].at("v"), Value(5.682303266439076));
}

TEST(Placeholder, ZeroCount) {
  PlaceholderSpec p;
  p.fields = {quantitative("v", 0, 10)};
  EXPECT_TRUE(generate_placeholder_rows(p).empty());
}

TEST(Placeholder, FixtureExpansion) {
  const ArBlock ar = expand_placeholders(*fixtures::spec("bar_placeholder").ar);
  const auto& rows = std::get<std::vector<Record>>(ar.appends.at(0).source);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].at("cat"), Value("New-1"));
  EXPECT_EQ(rows[1].at("cat"), Value("New-2"));
  EXPECT_DOUBLE_EQ(*rows[0].at("v").as_number(), 2.254634289477513);
  EXPECT_DOUBLE_EQ(*rows[1].at("v").as_number(), 6.303980498395979);
}

TEST(Placeholder, TemporalAndOptions) {
  PlaceholderSpec p;
  p.count = 3;
  PlaceholderField t;
  t.name = "d";
  t.kind = FieldKind::Temporal;
  t.span = TemporalSpan{"2020-01-01", "2020-01-10", 86400};
  PlaceholderField o;
  o.name = "k";
  o.options = {"x", "y"};
  p.fields = {t, o};
  for (const auto& row : generate_placeholder_rows(p, 3)) {
    const double secs = *row.at("d").as_number();
    EXPECT_GE(secs, 1577836800);
    EXPECT_LE(secs, 1578614400);
    EXPECT_EQ(std::fmod(secs - 1577836800, 86400), 0);
    EXPECT_TRUE(row.at("k") == Value("x") || row.at("k") == Value("y"));
  }
}

TEST(BuildAugmented, ExtendAppendsRowsAndCountsBase) {
  const AugmentedSpec a = build_augmented_spec(fixtures::spec("bar_extend"));
  EXPECT_FALSE(a.base.ar.has_value());
  EXPECT_EQ(a.base_rows.at("totals"), 3u);
  EXPECT_EQ(a.aug.find_dataset("totals")->values.size(), 4u);
}

TEST(BuildAugmented, ExtendGrowsBandScale) {
  const CompiledDesign d = compile_design(fixtures::spec("bar_extend"));
  const ResolvedScale& x = d.aug_scales.at("x");
  EXPECT_EQ(x.domain, (std::vector<Value>{"A", "B", "C"}));
  EXPECT_DOUBLE_EQ(x.range_end, d.base_scales.at("x").range_end + x.step);
}

TEST(BuildAugmented, AppendSchemaMismatch) {
  Spec s = fixtures::spec("bar_extend");
  s.ar->appends[0].source = std::vector<Record>{{{"cat", "C"}, {"w", 1}}};
  try {
    build_augmented_spec(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AppendSchemaMismatch);
    EXPECT_EQ(e.path().rfind("ar.appends[0]", 0), 0u);
  }
}

TEST(BuildAugmented, MultipleViewUsesNested) {
  const Spec s = fixtures::spec("multiple_view");
  const AugmentedSpec a = build_augmented_spec(s);
  EXPECT_EQ(a.aug, *s.ar->nested);
}

TEST(BuildAugmented, SmallMultipleUnits) {
  const AugmentedSpec a = build_augmented_spec(fixtures::spec("small_multiple"));
  ASSERT_EQ(a.multiples.size(), 2u);
  EXPECT_EQ(a.multiples[1].find_dataset("totals")->values.size(), 3u);
  EXPECT_EQ(a.multiples[0].marks, a.base.marks);
}

TEST(Compose, RightWithGap) {
  const SceneGraph st = scene_with({0, 0, 300, 200}, {{0, 0, 10, 10}});
  const SceneGraph vi = scene_with({0, 0, 100, 100}, {{0, 0, 10, 10}});
  Placement p;
  p.direction = Direction::Right;
  p.gap = 10;
  const ComposedScene c = compose_preview(st, vi, p);
  EXPECT_EQ(c.dx, 310);
  EXPECT_EQ(c.dy, 0);
  EXPECT_EQ(c.virtual_frame, (Rect{310, 0, 100, 100}));
  EXPECT_EQ(c.union_view_box, (Rect{0, 0, 410, 200}));
}

TEST(Compose, OtherDirections) {
  const SceneGraph st = scene_with({0, 0, 300, 200}, {});
  const SceneGraph vi = scene_with({0, 0, 100, 50}, {{0, 0, 1, 1}});
  Placement p;
  p.gap = 5;
  p.direction = Direction::Left;
  EXPECT_EQ(compose_preview(st, vi, p).dx, -105);
  p.direction = Direction::Top;
  EXPECT_EQ(compose_preview(st, vi, p).dy, -55);
  p.direction = Direction::Bottom;
  EXPECT_EQ(compose_preview(st, vi, p).dy, 205);
  p.direction = Direction::Overlay;
  p.dx = 50;
  p.dy = 60;
  const ComposedScene c = compose_preview(st, vi, p);
  EXPECT_EQ(c.dx, 50);
  EXPECT_EQ(c.dy, 60);
  EXPECT_EQ(c.virtual_translated().items[0].geometry, Geometry(RectGeom{50, 60, 1, 1}));
  EXPECT_EQ(c.virtual_translated().items[0].layer, Layer::Virtual);
}

TEST(Compose, EmptyVirtualMatchesStaticDocument) {
  const SceneGraph st = scene_with({0, 0, 300, 200}, {{0, 0, 10, 10}, {20, 0, 10, 10}});
  const ComposedScene c = compose_preview(st, SceneGraph{{0, 0, 50, 50}, {}}, Placement{});
  EXPECT_EQ(c.union_view_box, st.frame);
  EXPECT_EQ(emit_composed(c, false), emit_svg(st, st.frame));
}

// The static layer's markup is the same with or without the virtual layer.
TEST(Compose, StaticGroupUnchangedByAugmentation) {
  for (const char* name : fixtures::kAll) {
    const CompiledDesign d = compile_design(fixtures::spec(name));
    const std::string group = emit_layer_group(d.static_scene.items, Layer::Static);
    EXPECT_NE(render_preview_svg(d).find(group), std::string::npos) << name;
  }
}
