#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "papar/boxed.hpp"
#include "papar/value.hpp"

namespace papar {

struct Rect {
  double x = 0;
  double y = 0;
  double width = 0;
  double height = 0;

  double right() const { return x + width; }
  double bottom() const { return y + height; }
  bool operator==(const Rect&) const = default;
};

// ---------------------------------------------------------------------------
// Transforms

enum class TransformKind { Filter, Formula, Aggregate, Sort, Stack, Pie, Bin, Hierarchy, TreeLayout, Treemap };

inline constexpr TransformKind kAllTransformKinds[] = {
    TransformKind::Filter, TransformKind::Formula,   TransformKind::Aggregate,  TransformKind::Sort,
    TransformKind::Stack,  TransformKind::Pie,       TransformKind::Bin,        TransformKind::Hierarchy,
    TransformKind::TreeLayout, TransformKind::Treemap};

std::string_view to_string(TransformKind kind);
std::optional<TransformKind> transform_kind_from(std::string_view name);

struct FilterParams {
  std::string expr;
  bool operator==(const FilterParams&) const = default;
};

struct FormulaParams {
  std::string expr;
  std::string as;
  bool operator==(const FormulaParams&) const = default;
};

enum class AggregateOp { Sum, Count, Mean, Min, Max };
std::string_view to_string(AggregateOp op);

struct AggregateParams {
  std::vector<std::string> groupby;
  std::vector<AggregateOp> ops;
  // Parallel to ops; nullopt only for count.
  std::vector<std::optional<std::string>> fields;
  // Output names, parallel to ops (defaults "<op>_<field>" / "count").
  std::vector<std::string> as;
  bool operator==(const AggregateParams&) const = default;
};

enum class SortOrder { Ascending, Descending };

struct SortParams {
  std::string field;
  SortOrder order = SortOrder::Ascending;
  bool operator==(const SortParams&) const = default;
};

struct StackParams {
  std::vector<std::string> groupby;
  std::string field;
  std::optional<std::string> sort_field;
  std::string as_start = "y0";
  std::string as_end = "y1";
  bool operator==(const StackParams&) const = default;
};

// Adds startAngle / endAngle (radians, clockwise from 12 o'clock).
struct PieParams {
  std::string field;
  double start_angle = 0;
  bool operator==(const PieParams&) const = default;
};

// Adds bin0 / bin1. No extent means auto: [min, max] of the data.
struct BinParams {
  std::string field;
  std::optional<std::pair<double, double>> extent;
  int maxbins = 10;
  bool operator==(const BinParams&) const = default;
};

// Adds depth (root = 0).
struct HierarchyParams {
  std::string key = "id";
  std::string parent_key = "parent";
  bool operator==(const HierarchyParams&) const = default;
};

enum class TreeMethod { Tidy, Cluster };

// Adds x, y and the parent's coordinates px, py (a root's own coordinates).
struct TreeLayoutParams {
  TreeMethod method = TreeMethod::Tidy;
  double width = 0;
  double height = 0;
  double level_gap = 40;
  double leaf_step = 24;
  std::string key = "id";
  std::string parent_key = "parent";
  bool operator==(const TreeLayoutParams&) const = default;
};

// Slice-dice; adds x0, y0, x1, y1.
struct TreemapParams {
  std::string field;
  double width = 0;
  double height = 0;
  std::string key = "id";
  std::string parent_key = "parent";
  bool operator==(const TreemapParams&) const = default;
};

using TransformParams = std::variant<FilterParams, FormulaParams, AggregateParams, SortParams, StackParams,
                                     PieParams, BinParams, HierarchyParams, TreeLayoutParams, TreemapParams>;

struct TransformDecl {
  TransformParams params;

  TransformKind kind() const { return static_cast<TransformKind>(params.index()); }
  bool operator==(const TransformDecl&) const = default;
};

// ---------------------------------------------------------------------------
// Datasets, scales, marks

struct DatasetDecl {
  std::string name;
  std::vector<Record> values;
  // Explicit column list; otherwise the sorted keys of the first row.
  std::optional<std::vector<std::string>> fields;
  // field -> "date": ISO-8601 strings become timestamps on ingest.
  std::map<std::string, std::string> parse;
  std::vector<TransformDecl> transforms;
  bool operator==(const DatasetDecl&) const = default;
};

enum class ScaleKind { Linear, Band, Point, Ordinal };
std::string_view to_string(ScaleKind kind);

struct DataRef {
  std::string dataset;
  std::vector<std::string> fields;
  bool operator==(const DataRef&) const = default;
};

// How an Extended View re-resolves a scale over the augmented data.
//   grow:  band/point keep step and paddings and extend the range; linear keeps
//          slope and intercept. Base marks keep their positions.
//   refit: resolve from the augmented data as if it were a fresh chart.
enum class ScaleExtend { Grow, Refit };

struct ScaleDecl {
  std::string name;
  ScaleKind kind = ScaleKind::Linear;
  std::variant<std::vector<Value>, DataRef> domain;
  // [lo, hi] pixels; for ordinal scales, palette indices (empty = whole palette).
  std::vector<double> range;
  double padding_inner = 0.1;
  double padding_outer = 0.05;
  bool zero = false;
  ScaleExtend extend = ScaleExtend::Grow;
  bool operator==(const ScaleDecl&) const = default;
};

enum class MarkKind { Rect, Symbol, Line, Arc, Path, Text };
std::string_view to_string(MarkKind kind);

// One encoding channel. Forms:
//   {scale, field}  data value through a scale
//   {scale, value}  literal data value through a scale
//   {scale, band}   band scale bandwidth times `band`
//   {field}         raw field value
//   {value}         literal (pixels, color, or text)
// `offset` is added to numeric results.
struct ChannelRef {
  std::optional<std::string> scale;
  std::optional<std::string> field;
  std::optional<Value> value;
  std::optional<double> band;
  double offset = 0;
  bool operator==(const ChannelRef&) const = default;
};

struct MarkDecl {
  MarkKind kind = MarkKind::Rect;
  std::string from;
  std::map<std::string, ChannelRef> encode;
  bool operator==(const MarkDecl&) const = default;
};

// Channels accepted per mark kind.
const std::vector<std::string>& mark_channels(MarkKind kind);

// ---------------------------------------------------------------------------
// The `ar` block

enum class ArMode { Extend, Composite, SmallMultiple, MultipleView };
std::string_view to_string(ArMode mode);

enum class FieldKind { Categorical, Quantitative, Temporal };
std::string_view to_string(FieldKind kind);

struct TemporalSpan {
  std::string start;
  std::string end;
  double step_seconds = 86400;
  bool operator==(const TemporalSpan&) const = default;
};

struct PlaceholderField {
  std::string name;
  FieldKind kind = FieldKind::Categorical;
  std::optional<std::string> pattern;
  std::optional<std::pair<double, double>> range;
  std::optional<TemporalSpan> span;
  std::vector<Value> options;
  bool operator==(const PlaceholderField&) const = default;
};

struct PlaceholderSpec {
  std::int64_t count = 0;
  std::vector<PlaceholderField> fields;
  std::uint64_t seed = 1;
  bool operator==(const PlaceholderSpec&) const = default;
};

struct AppendDecl {
  std::string dataset;
  std::variant<std::vector<Record>, PlaceholderSpec> source;
  bool operator==(const AppendDecl&) const = default;
};

enum class Direction { Right, Left, Top, Bottom, Overlay };
std::string_view to_string(Direction d);

struct Placement {
  Direction direction = Direction::Right;
  double dx = 0;
  double dy = 0;
  double gap = 0;
  std::optional<double> width_hint;
  std::optional<double> height_hint;
  bool operator==(const Placement&) const = default;
};

struct Spec;

struct ArBlock {
  ArMode mode = ArMode::Extend;
  std::vector<AppendDecl> appends;
  Boxed<Spec> nested;
  Placement placement;
  std::optional<Rect> anchor;
  bool operator==(const ArBlock&) const = default;
};

struct Spec {
  int width = 0;
  int height = 0;
  std::vector<DatasetDecl> datasets;
  std::vector<ScaleDecl> scales;
  std::vector<MarkDecl> marks;
  std::vector<Rect> protected_regions;
  std::optional<ArBlock> ar;

  const DatasetDecl* find_dataset(std::string_view name) const;
  const ScaleDecl* find_scale(std::string_view name) const;
  bool operator==(const Spec&) const = default;
};

// ---------------------------------------------------------------------------
// Operations

// Throws Error{SyntaxError | UnknownField | TypeMismatch | ModeConflict}.
Spec parse_spec(std::string_view text);
Spec spec_from_json(const nlohmann::json& doc);

struct SchemaIssue {
  std::string code;
  std::string path;
  std::string message;
  bool operator==(const SchemaIssue&) const = default;
};

// Empty iff every structural invariant holds.
std::vector<SchemaIssue> validate_schema(const Spec& spec);

nlohmann::json spec_to_json(const Spec& spec);
// Sorted keys, order-preserving arrays, shortest numbers, no whitespace.
std::string canonicalize(const Spec& spec);

// Column inference used by schema validation and the engine.
std::vector<std::string> dataset_columns(const DatasetDecl& decl);
std::vector<std::string> transform_output_columns(const TransformDecl& t, const std::vector<std::string>& input);
std::vector<std::string> aggregate_output_names(const AggregateParams& p);

// Anchor box from the ar block, or a 32px square in the bottom-right corner.
Rect effective_anchor(const Spec& spec);

}  // namespace papar
