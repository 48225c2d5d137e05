#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "papar/spec.hpp"
#include "papar/value.hpp"

namespace papar {

enum class SourceTag { Base, Augment };
std::string_view to_string(SourceTag tag);

// Base rows are numbered from 1, augment rows from 2^32. Aggregate outputs get
// hashed ids with the top bit set, so the three ranges never meet.
inline constexpr std::uint64_t kAugmentPidStart = std::uint64_t{1} << 32;
inline constexpr std::uint64_t kGroupPidBit = std::uint64_t{1} << 63;

struct Row {
  std::uint64_t pid = 0;
  SourceTag tag = SourceTag::Base;
  std::vector<Value> cells;
  bool operator==(const Row&) const = default;
};

struct DataTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<Row> rows;

  std::optional<std::size_t> column_index(std::string_view field) const;
  // Throws Error{MissingField}.
  std::size_t require_column(std::string_view field) const;
  const Value& cell(const Row& row, std::string_view field) const { return row.cells[require_column(field)]; }
  bool operator==(const DataTable&) const = default;
};

// Columns come from the declaration (explicit fields, else the first declared
// row, else the first supplied row). `first_pid` 0 means the tag's default.
// Throws Error{HeterogeneousRows} with the row index in the path.
DataTable ingest(const DatasetDecl& decl, const std::vector<Record>& rows, SourceTag tag,
                 std::uint64_t first_pid = 0);

// Appends `more`'s rows; columns must match.
DataTable concat(DataTable base, const DataTable& more);

// FNV-1a of the group key tuple, top bit set.
std::uint64_t group_pid(const std::vector<Value>& key);

// Throws Error{MissingField | CyclicHierarchy | DuplicateNodeId | UnknownParent | ExprSyntax | UnknownField}.
DataTable apply_transform(const TransformDecl& t, const DataTable& in);

struct TraceStage {
  TransformDecl transform;
  DataTable output;
  bool operator==(const TraceStage&) const = default;
};

// Every intermediate state of one dataset's pipeline, held by value.
struct DataflowTrace {
  std::string dataset;
  DataTable input;
  std::vector<TraceStage> stages;

  const DataTable& output() const { return stages.empty() ? input : stages.back().output; }
  bool operator==(const DataflowTrace&) const = default;
};

using TraceMap = std::map<std::string, DataflowTrace>;

// One trace per dataset declared in `spec`. Errors carry the stage index and
// dataset name.
TraceMap run_pipeline(const Spec& spec, const std::map<std::string, DataTable>& tables);

// Bin step for a span: the smallest {1,2,5}x10^k with ceil(span/step) <= maxbins.
double nice_bin_step(double span, int maxbins);

}  // namespace papar
