#include <gtest/gtest.h>

#include <set>

#include "papar/compile.hpp"
#include "papar/error.hpp"
#include "papar/validator.hpp"
#include "support/fixtures.hpp"

using namespace papar;

namespace {

// Base traces of `spec` and split traces with `extra` rows appended to dataset `ds`.
std::pair<DataflowTrace, DataflowTrace> traces_with(const Spec& spec, const std::string& ds,
                                                    std::vector<Record> extra) {
  Spec aug = spec;
  DatasetDecl* d = nullptr;
  for (auto& x : aug.datasets) {
    if (x.name == ds) d = &x;
  }
  const std::size_t n = d->values.size();
  for (auto& r : extra) d->values.push_back(std::move(r));
  return {run_spec(spec).at(ds), run_spec_split(aug, {{ds, n}}).at(ds)};
}

MarkItem box(double x, double y, double w, double h, std::uint64_t pid = 1, std::size_t mark = 0) {
  MarkItem m;
  m.geometry = RectGeom{x, y, w, h};
  m.style = "#000000";
  m.pid = pid;
  m.mark_index = mark;
  return m;
}

}  // namespace

TEST(DiffTraces, NewGroupLeavesBaseRowsAlone) {
  const auto [b, a] = traces_with(fixtures::spec("bar_static"), "totals", {{{"cat", "C"}, {"v", 4}}});
  EXPECT_TRUE(diff_traces(b, a).empty());
}

TEST(DiffTraces, ChangedAggregateIsReported) {
  const auto [b, a] = traces_with(fixtures::spec("bar_static"), "totals", {{{"cat", "A"}, {"v", 4}}});
  const auto diffs = diff_traces(b, a);
  ASSERT_EQ(diffs.size(), 1u);
  EXPECT_EQ(diffs[0].stage_index, 0u);
  EXPECT_EQ(diffs[0].transform, TransformKind::Aggregate);
  ASSERT_EQ(diffs[0].mismatches.size(), 1u);
  const Mismatch& m = diffs[0].mismatches[0];
  EXPECT_EQ(m.pid, group_pid({Value("A")}));
  EXPECT_EQ(m.field, "sum_v");
  EXPECT_EQ(m.base, Value(3));
  EXPECT_EQ(m.aug, Value(7));
  EXPECT_FALSE(m.missing);
  EXPECT_EQ(diffs[0].hint.id, "aggregate");
}

TEST(DiffTraces, VanishedRowIsMissing) {
  const DataflowTrace b = run_spec(fixtures::spec("bar_static")).at("totals");
  DataflowTrace a = b;
  a.stages[0].output.rows.erase(a.stages[0].output.rows.begin());
  const auto diffs = diff_traces(b, a);
  ASSERT_EQ(diffs.size(), 1u);
  ASSERT_EQ(diffs[0].mismatches.size(), 1u);
  EXPECT_TRUE(diffs[0].mismatches[0].missing);
  EXPECT_EQ(diffs[0].mismatches[0].pid, b.stages[0].output.rows[0].pid);
}

TEST(DiffTraces, ShapeMismatch) {
  const Spec s = fixtures::spec("bar_static");
  DataflowTrace b = run_spec(s).at("totals");
  DataflowTrace a = b;
  a.stages.clear();
  try {
    diff_traces(b, a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PipelineShapeMismatch);
  }
}

TEST(DiffTraces, EveryChangedStageIsListed) {
  const CompiledDesign d = compile_design(fixtures::spec("bin_unnoticeable"));
  const auto diffs = diff_traces(d.base_traces.begin()->second, d.aug_traces.begin()->second);
  ASSERT_GE(diffs.size(), 1u);
  EXPECT_EQ(diffs[0].transform, TransformKind::Bin);
  EXPECT_EQ(diffs[0].hint.id, "bin");
  for (std::size_t i = 1; i < diffs.size(); ++i) EXPECT_GT(diffs[i].stage_index, diffs[i - 1].stage_index);
}

TEST(CheckScales, LinearMappingChange) {
  ResolvedScale b;
  b.name = "y";
  b.domain_lo = 0;
  b.domain_hi = 10;
  b.range_lo = 100;
  b.range_hi = 0;
  ResolvedScale a = b;
  EXPECT_TRUE(check_scales({{"y", b}}, {{"y", a}}).empty());
  a.domain_hi = 20;
  const auto d = check_scales({{"y", b}}, {{"y", a}});
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].scale, "y");
  EXPECT_EQ(d[0].kind, ScaleKind::Linear);
}

TEST(CheckScales, SameMappingDifferentDomainIsFine) {
  ResolvedScale b;
  b.domain_lo = 0;
  b.domain_hi = 10;
  b.range_lo = 0;
  b.range_hi = 100;
  ResolvedScale a = b;
  a.domain_hi = 20;
  a.range_hi = 200;
  EXPECT_TRUE(check_scales({{"x", b}}, {{"x", a}}).empty());
}

TEST(CheckScales, BandPrefixAndStep) {
  ResolvedScale b;
  b.kind = ScaleKind::Band;
  b.domain = {"A", "B"};
  b.step = 50;
  b.bandwidth = 45;
  ResolvedScale a = b;
  a.domain = {"A", "B", "C"};
  EXPECT_TRUE(check_scales({{"x", b}}, {{"x", a}}).empty());
  a.domain = {"C", "A", "B"};
  EXPECT_EQ(check_scales({{"x", b}}, {{"x", a}}).size(), 1u);
  a.domain = {"A", "B", "C"};
  a.step = 40;
  a.bandwidth = 36;
  EXPECT_EQ(check_scales({{"x", b}}, {{"x", a}}).size(), 1u);
}

TEST(CheckScales, OrdinalColorChange) {
  ResolvedScale b;
  b.kind = ScaleKind::Ordinal;
  b.domain = {"A", "B"};
  ResolvedScale a = b;
  a.domain = {"A", "B", "C"};
  EXPECT_TRUE(check_scales({{"c", b}}, {{"c", a}}).empty());
  a.domain = {"C", "A", "B"};
  EXPECT_EQ(check_scales({{"c", b}}, {{"c", a}}).size(), 1u);
}

TEST(Occlusion, OverlapArea) {
  EXPECT_EQ(overlap_area({0, 0, 10, 10}, {5, 5, 10, 10}), 25);
  EXPECT_EQ(overlap_area({0, 0, 10, 10}, {10, 0, 10, 10}), 0);
  EXPECT_EQ(overlap_area({0, 0, 10, 10}, {20, 20, 1, 1}), 0);
}

TEST(Occlusion, ProtectedAndStaticTargets) {
  const std::vector<MarkItem> virt = {box(5, 5, 10, 10, kAugmentPidStart)};
  const auto hits = detect_occlusion(virt, {box(0, 0, 10, 10, 7, 2)}, {{0, 0, 6, 6}});
  ASSERT_EQ(hits.size(), 2u);
  std::set<OcclusionTarget::Kind> kinds;
  for (const auto& h : hits) {
    kinds.insert(h.target.kind);
    EXPECT_EQ(h.virtual_pid, kAugmentPidStart);
    if (h.target.kind == OcclusionTarget::Kind::StaticItem) {
      EXPECT_EQ(h.overlap_area, 25);
      EXPECT_EQ(h.target.pid, 7u);
      EXPECT_EQ(h.target.mark_index, 2u);
    } else {
      EXPECT_EQ(h.overlap_area, 1);
    }
  }
  EXPECT_EQ(kinds.size(), 2u);
}

TEST(Occlusion, SmallGrazeOfStaticItemIsIgnored) {
  // 1 px^2 over a 100 px^2 item stays under the 5% threshold.
  const auto hits = detect_occlusion({box(9, 9, 10, 10)}, {box(0, 0, 10, 10)}, {});
  EXPECT_TRUE(hits.empty());
}

TEST(Validate, NoArBlockIsValidWithoutMode) {
  const ValidationReport r = validate(fixtures::spec("bar_static"));
  EXPECT_EQ(r.verdict, Verdict::Valid);
  EXPECT_FALSE(r.mode.has_value());
}

TEST(Validate, FixtureVerdicts) {
  const std::vector<std::pair<const char*, Verdict>> expected = {
      {"bar_extend", Verdict::Valid},           {"bar_placeholder", Verdict::Valid},
      {"tree_tidy", Verdict::Valid},            {"multiple_view", Verdict::Valid},
      {"composite_overlay", Verdict::Warnings}, {"small_multiple", Verdict::Warnings},
      {"pie_extend", Verdict::Invalid},         {"tree_cluster", Verdict::Invalid},
      {"treemap_extend", Verdict::Invalid},     {"bin_unnoticeable", Verdict::Invalid}};
  for (const auto& [name, v] : expected) EXPECT_EQ(validate(fixtures::spec(name)).verdict, v) << name;
}

TEST(Validate, CompositeOverlapsProtectedRegion) {
  const ValidationReport r = validate(fixtures::spec("composite_overlay"));
  ASSERT_FALSE(r.occlusions.empty());
  EXPECT_EQ(r.occlusions[0].target.kind, OcclusionTarget::Kind::Protected);
  EXPECT_TRUE(r.stage_diffs.empty());
}

TEST(Validate, ReportJsonShape) {
  const nlohmann::json j = report_to_json(validate(fixtures::spec("tree_cluster")));
  EXPECT_EQ(j["verdict"], "invalid");
  EXPECT_EQ(j["mode"]["mode"], "extend");
  ASSERT_FALSE(j["stageDiffs"].empty());
  const auto& d = j["stageDiffs"][0];
  EXPECT_EQ(d["stageIndex"], 1);
  EXPECT_EQ(d["transform"], "treelayout");
  EXPECT_EQ(d["hint"]["id"], "treelayout.cluster");
  EXPECT_TRUE(d["mismatches"][0].contains("pid"));
}

TEST(Hints, EveryTransformHasOne) {
  std::set<std::string> ids;
  for (const auto& h : hint_table()) {
    EXPECT_FALSE(h.text.empty()) << h.id;
    ids.insert(h.id);
  }
  for (TransformKind k : kAllTransformKinds) {
    TransformParams p;
    switch (k) {
      case TransformKind::Filter: p = FilterParams{}; break;
      case TransformKind::Formula: p = FormulaParams{}; break;
      case TransformKind::Aggregate: p = AggregateParams{}; break;
      case TransformKind::Sort: p = SortParams{}; break;
      case TransformKind::Stack: p = StackParams{}; break;
      case TransformKind::Pie: p = PieParams{}; break;
      case TransformKind::Bin: p = BinParams{}; break;
      case TransformKind::Hierarchy: p = HierarchyParams{}; break;
      case TransformKind::TreeLayout: p = TreeLayoutParams{}; break;
      case TransformKind::Treemap: p = TreemapParams{}; break;
    }
    const Hint h = hint_for(TransformDecl{p});
    EXPECT_TRUE(ids.count(h.id)) << to_string(k);
  }
  TreeLayoutParams cluster;
  cluster.method = TreeMethod::Cluster;
  EXPECT_EQ(hint_for(TransformDecl{cluster}).id, "treelayout.cluster");
  EXPECT_EQ(hint_for(TransformDecl{TreemapParams{}}).text,
            "avoid 'treemap' when new nodes are added to the internal nodes");
}

TEST(SceneOracle, IdenticalScenesAreValid) {
  const SceneGraph s{{0, 0, 10, 10}, {box(0, 0, 1, 1, 1), box(2, 0, 1, 1, 2)}};
  const OracleResult r = scene_oracle(s, s);
  EXPECT_TRUE(r.valid);
  EXPECT_EQ(r.max_displacement, 0);
}

TEST(SceneOracle, MovedAndMissingItems) {
  const SceneGraph base{{0, 0, 10, 10}, {box(0, 0, 1, 1, 1), box(2, 0, 1, 1, 2)}};
  SceneGraph aug{{0, 0, 10, 10}, {box(0.25, 0, 1, 1, 1), box(5, 5, 1, 1, kAugmentPidStart)}};
  aug.items[1].source = SourceTag::Augment;
  const OracleResult r = scene_oracle(base, aug);
  EXPECT_FALSE(r.valid);
  EXPECT_EQ(r.flagged.size(), 2u);
  EXPECT_DOUBLE_EQ(r.max_displacement, 0.25);
}

TEST(SceneOracle, StyleChangeIsFlagged) {
  const SceneGraph base{{0, 0, 10, 10}, {box(0, 0, 1, 1, 1)}};
  SceneGraph aug = base;
  aug.items[0].style = "#ffffff";
  EXPECT_FALSE(scene_oracle(base, aug).valid);
}
