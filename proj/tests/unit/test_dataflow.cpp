#include <gtest/gtest.h>

#include <cmath>

#include "papar/compile.hpp"
#include "papar/dataflow.hpp"
#include "papar/error.hpp"
#include "support/fixtures.hpp"

using namespace papar;

namespace {

DatasetDecl decl(const std::string& name, std::vector<Record> values) {
  DatasetDecl d;
  d.name = name;
  d.values = std::move(values);
  return d;
}

DataTable table(std::vector<Record> values, SourceTag tag = SourceTag::Base) {
  const DatasetDecl d = decl("t", std::move(values));
  return ingest(d, d.values, tag);
}

TransformDecl t(TransformParams p) { return TransformDecl{std::move(p)}; }

double num(const DataTable& tab, std::size_t row, std::string_view field) {
  return *tab.cell(tab.rows[row], field).as_number();
}

}  // namespace

TEST(Ingest, BasePidsStartAtOne) {
  const DataTable tab = table({{{"v", 1}}, {{"v", 2}}});
  ASSERT_EQ(tab.rows.size(), 2u);
  EXPECT_EQ(tab.rows[0].pid, 1u);
  EXPECT_EQ(tab.rows[1].pid, 2u);
  EXPECT_EQ(tab.rows[0].tag, SourceTag::Base);
}

TEST(Ingest, AugmentPidsStartAtTwoToTheThirtyTwo) {
  const DataTable tab = table({{{"v", 1}}, {{"v", 2}}}, SourceTag::Augment);
  EXPECT_EQ(tab.rows[0].pid, 4294967296u);
  EXPECT_EQ(tab.rows[1].pid, 4294967297u);
  EXPECT_EQ(tab.rows[1].tag, SourceTag::Augment);
}

TEST(Ingest, EmptyTableKeepsDeclaredColumns) {
  DatasetDecl d = decl("t", {});
  d.fields = std::vector<std::string>{"a", "b"};
  const DataTable tab = ingest(d, {}, SourceTag::Base);
  EXPECT_TRUE(tab.rows.empty());
  EXPECT_EQ(tab.columns, (std::vector<std::string>{"a", "b"}));
}

TEST(Ingest, HeterogeneousRowsAreRejected) {
  try {
    table({{{"v", 1}}, {{"w", 2}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::HeterogeneousRows);
  }
}

TEST(Ingest, DateParsing) {
  DatasetDecl d = decl("t", {{{"d", "1970-01-02"}}});
  d.parse["d"] = "date";
  const DataTable tab = ingest(d, d.values, SourceTag::Base);
  ASSERT_TRUE(tab.rows[0].cells[0].is_timestamp());
  EXPECT_EQ(tab.rows[0].cells[0].timestamp().seconds, 86400);
}

TEST(Aggregate, SumAndCountByCategory) {
  const DataTable in = table({{{"cat", "A"}, {"v", 1}}, {{"cat", "A"}, {"v", 2}}, {{"cat", "B"}, {"v", 3}}});
  AggregateParams p;
  p.groupby = {"cat"};
  p.ops = {AggregateOp::Sum, AggregateOp::Count};
  p.fields = {std::string("v"), std::nullopt};
  p.as = {"sum_v", "count"};
  const DataTable out = apply_transform(t(p), in);
  ASSERT_EQ(out.rows.size(), 2u);
  EXPECT_EQ(out.cell(out.rows[0], "cat"), Value("A"));
  EXPECT_EQ(num(out, 0, "sum_v"), 3);
  EXPECT_EQ(num(out, 0, "count"), 2);
  EXPECT_EQ(out.cell(out.rows[1], "cat"), Value("B"));
  EXPECT_EQ(num(out, 1, "sum_v"), 3);
  EXPECT_EQ(out.rows[0].pid, group_pid({Value("A")}));
  EXPECT_NE(out.rows[0].pid & kGroupPidBit, 0u);
}

TEST(Aggregate, GroupPidIgnoresOtherGroups) {
  const DataTable a = table({{{"cat", "A"}, {"v", 1}}});
  const DataTable b = table({{{"cat", "Z"}, {"v", 5}}, {{"cat", "A"}, {"v", 1}}});
  AggregateParams p;
  p.groupby = {"cat"};
  p.ops = {AggregateOp::Sum};
  p.fields = {std::string("v")};
  p.as = {"sum_v"};
  EXPECT_EQ(apply_transform(t(p), a).rows[0].pid, apply_transform(t(p), b).rows[1].pid);
}

TEST(Pie, AnglesAreProportional) {
  const DataTable in = table({{{"v", 1}}, {{"v", 1}}, {{"v", 2}}});
  const DataTable out = apply_transform(t(PieParams{"v", 0}), in);
  const double pi = 3.141592653589793;
  EXPECT_DOUBLE_EQ(num(out, 0, "startAngle"), 0);
  EXPECT_DOUBLE_EQ(num(out, 0, "endAngle"), pi / 2);
  EXPECT_DOUBLE_EQ(num(out, 1, "endAngle"), pi);
  EXPECT_DOUBLE_EQ(num(out, 2, "endAngle"), 2 * pi);
}

TEST(Filter, KeepsMatchingRowsAndPids) {
  const DataTable in = table({{{"v", 1}}, {{"v", 5}}, {{"v", 3}}});
  const DataTable out = apply_transform(t(FilterParams{"datum.v > 2"}), in);
  ASSERT_EQ(out.rows.size(), 2u);
  EXPECT_EQ(out.rows[0].pid, 2u);
  EXPECT_EQ(out.rows[1].pid, 3u);
}

TEST(Formula, AddsColumn) {
  const DataTable out = apply_transform(t(FormulaParams{"datum.v * 2", "w"}), table({{{"v", 4}}}));
  EXPECT_EQ(num(out, 0, "w"), 8);
}

TEST(Sort, StableDescending) {
  const DataTable in = table({{{"k", "a"}, {"v", 1}}, {{"k", "b"}, {"v", 3}}, {{"k", "c"}, {"v", 1}}});
  const DataTable out = apply_transform(t(SortParams{"v", SortOrder::Descending}), in);
  EXPECT_EQ(out.rows[0].pid, 2u);
  EXPECT_EQ(out.rows[1].pid, 1u);
  EXPECT_EQ(out.rows[2].pid, 3u);
}

TEST(Stack, RunningSumsWithinGroup) {
  const DataTable in = table({{{"c", "A"}, {"v", 1}}, {{"c", "B"}, {"v", 2}}, {{"c", "A"}, {"v", 3}}});
  StackParams p;
  p.groupby = {"c"};
  p.field = "v";
  const DataTable out = apply_transform(t(p), in);
  auto by_pid = [&](std::uint64_t pid) {
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
      if (out.rows[i].pid == pid) return i;
    }
    return out.rows.size();
  };
  EXPECT_EQ(num(out, by_pid(1), "y0"), 0);
  EXPECT_EQ(num(out, by_pid(1), "y1"), 1);
  EXPECT_EQ(num(out, by_pid(3), "y0"), 1);
  EXPECT_EQ(num(out, by_pid(3), "y1"), 4);
  EXPECT_EQ(num(out, by_pid(2), "y1"), 2);
}

TEST(Bin, NiceStep) {
  EXPECT_EQ(nice_bin_step(8.5, 10), 1);
  EXPECT_EQ(nice_bin_step(100, 10), 10);
  EXPECT_EQ(nice_bin_step(101, 10), 20);
  EXPECT_DOUBLE_EQ(nice_bin_step(0.3, 10), 0.05);
}

TEST(Bin, AnchoredAtMinimum) {
  const DataTable in = table({{{"v", 0.5}}, {{"v", 3}}, {{"v", 9}}});
  const DataTable out = apply_transform(t(BinParams{"v", std::nullopt, 10}), in);
  EXPECT_EQ(num(out, 0, "bin0"), 0.5);
  EXPECT_EQ(num(out, 0, "bin1"), 1.5);
  EXPECT_EQ(num(out, 1, "bin0"), 2.5);
  EXPECT_EQ(num(out, 2, "bin0"), 8.5);
  EXPECT_EQ(num(out, 2, "bin1"), 9.5);
}

TEST(Hierarchy, DepthAndErrors) {
  const DataTable in = table({{{"id", "r"}, {"parent", Null{}}}, {{"id", "a"}, {"parent", "r"}},
                              {{"id", "b"}, {"parent", "a"}}});
  const DataTable out = apply_transform(t(HierarchyParams{}), in);
  EXPECT_EQ(num(out, 2, "depth"), 2);

  auto code_of = [](const DataTable& tab) {
    try {
      apply_transform(t(HierarchyParams{}), tab);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidSpec;
  };
  EXPECT_EQ(code_of(table({{{"id", "a"}, {"parent", "b"}}, {{"id", "b"}, {"parent", "a"}}})),
            ErrorCode::CyclicHierarchy);
  EXPECT_EQ(code_of(table({{{"id", "a"}, {"parent", Null{}}}, {{"id", "a"}, {"parent", Null{}}}})),
            ErrorCode::DuplicateNodeId);
  EXPECT_EQ(code_of(table({{{"id", "a"}, {"parent", "zz"}}})), ErrorCode::UnknownParent);
}

TEST(TreeLayout, TidyKeepsDepthRows) {
  DataTable in = table({{{"id", "r"}, {"parent", Null{}}}, {{"id", "a"}, {"parent", "r"}},
                        {{"id", "b"}, {"parent", "r"}}});
  in = apply_transform(t(HierarchyParams{}), in);
  TreeLayoutParams p;
  p.width = 100;
  p.height = 100;
  p.leaf_step = 20;
  const DataTable out = apply_transform(t(p), in);
  EXPECT_EQ(num(out, 1, "x"), 0);
  EXPECT_EQ(num(out, 2, "x"), 20);
  EXPECT_EQ(num(out, 0, "x"), 10);
  EXPECT_EQ(num(out, 0, "y"), 0);
  EXPECT_EQ(num(out, 1, "y"), 40);
  EXPECT_EQ(num(out, 1, "px"), 10);
  EXPECT_EQ(num(out, 1, "py"), 0);
}

TEST(Treemap, SliceDiceAreas) {
  DataTable in = table({{{"id", "r"}, {"parent", Null{}}, {"v", 0}}, {{"id", "a"}, {"parent", "r"}, {"v", 1}},
                        {{"id", "b"}, {"parent", "r"}, {"v", 3}}});
  in = apply_transform(t(HierarchyParams{}), in);
  TreemapParams p;
  p.field = "v";
  p.width = 100;
  p.height = 40;
  const DataTable out = apply_transform(t(p), in);
  EXPECT_EQ(num(out, 0, "x1"), 100);
  // depth-0 parent splits along y
  EXPECT_EQ(num(out, 1, "y0"), 0);
  EXPECT_EQ(num(out, 1, "y1"), 10);
  EXPECT_EQ(num(out, 2, "y0"), 10);
  EXPECT_EQ(num(out, 2, "y1"), 40);
}

TEST(Pipeline, StageErrorCarriesIndexAndDataset) {
  Spec s;
  s.width = s.height = 10;
  DatasetDecl d = decl("t", {{{"v", 1}}});
  d.transforms = {t(FormulaParams{"datum.v + 1", "w"}), t(SortParams{"missing", SortOrder::Ascending})};
  s.datasets.push_back(d);
  try {
    run_spec(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingField);
    ASSERT_TRUE(e.stage.has_value());
    EXPECT_EQ(*e.stage, 1u);
    EXPECT_EQ(e.dataset.value_or(""), "t");
  }
}

TEST(Pipeline, TraceKeepsEveryStage) {
  const TraceMap traces = run_spec(fixtures::spec("bin_unnoticeable"));
  const DataflowTrace& tr = traces.begin()->second;
  EXPECT_EQ(tr.stages.size(), 3u);
  EXPECT_EQ(tr.stages[0].transform.kind(), TransformKind::Bin);
  EXPECT_EQ(tr.input.rows.size(), 10u);
  EXPECT_EQ(tr.stages[1].output.column_index("unit").has_value(), true);
}

TEST(Pipeline, SplitTagsAugmentRows) {
  Spec s = fixtures::spec("bar_static");
  s.datasets[0].values.push_back({{"cat", "C"}, {"v", 4}});
  const TraceMap traces = run_spec_split(s, {{"totals", 3}});
  const DataTable& in = traces.at("totals").input;
  ASSERT_EQ(in.rows.size(), 4u);
  EXPECT_EQ(in.rows[2].pid, 3u);
  EXPECT_EQ(in.rows[3].pid, kAugmentPidStart);
  EXPECT_EQ(in.rows[3].tag, SourceTag::Augment);
}

// Non-aggregating transforms pass provenance through untouched.
TEST(Pipeline, ProvenancePreserved) {
  const DataTable in = table({{{"v", 3}}, {{"v", 1}}, {{"v", 2}}}, SourceTag::Augment);
  for (const TransformDecl& tr : {t(FilterParams{"datum.v >= 0"}), t(FormulaParams{"1", "u"}),
                                  t(SortParams{"v", SortOrder::Ascending}), t(PieParams{"v", 0}),
                                  t(BinParams{"v", std::nullopt, 5})}) {
    const DataTable out = apply_transform(tr, in);
    ASSERT_EQ(out.rows.size(), 3u);
    for (const Row& r : out.rows) {
      EXPECT_EQ(r.tag, SourceTag::Augment);
      EXPECT_GE(r.pid, kAugmentPidStart);
    }
  }
}

TEST(Pipeline, Deterministic) {
  for (const char* name : fixtures::kAll) {
    const Spec s = fixtures::spec(name);
    EXPECT_EQ(run_spec(s), run_spec(s)) << name;
  }
}
