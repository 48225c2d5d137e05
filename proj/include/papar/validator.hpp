#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "papar/augment.hpp"
#include "papar/compile.hpp"
#include "papar/dataflow.hpp"
#include "papar/scale.hpp"
#include "papar/scene.hpp"

namespace papar {

struct Hint {
  std::string id;
  std::string text;
  bool operator==(const Hint&) const = default;
};

// Hint for a transform whose base-restricted output changed.
Hint hint_for(const TransformDecl& t);
// The raw table: (id, text) for every entry.
const std::vector<Hint>& hint_table();

struct Mismatch {
  std::uint64_t pid = 0;
  std::string field;
  Value base;
  Value aug;
  // The base row has no counterpart in the augmented stage.
  bool missing = false;
  bool operator==(const Mismatch&) const = default;
};

struct StageDiff {
  std::string dataset;
  std::size_t stage_index = 0;
  TransformKind transform = TransformKind::Filter;
  std::vector<Mismatch> mismatches;
  Hint hint;
  bool operator==(const StageDiff&) const = default;
};

// Every stage whose base-provenance rows differ, in stage order. Rows are
// matched by pid (aggregate groups carry a pid derived from their key).
// Throws Error{PipelineShapeMismatch}.
std::vector<StageDiff> diff_traces(const DataflowTrace& base, const DataflowTrace& aug);

struct ScaleDiff {
  std::string scale;
  ScaleKind kind = ScaleKind::Linear;
  std::string reason;
  bool operator==(const ScaleDiff&) const = default;
};

std::vector<ScaleDiff> check_scales(const ScaleMap& base, const ScaleMap& aug);

struct OcclusionTarget {
  enum class Kind { Protected, StaticItem } kind = Kind::Protected;
  std::size_t region = 0;
  std::size_t mark_index = 0;
  std::uint64_t pid = 0;
  bool operator==(const OcclusionTarget&) const = default;
};

struct Occlusion {
  std::size_t virtual_mark = 0;
  std::uint64_t virtual_pid = 0;
  OcclusionTarget target;
  double overlap_area = 0;
  bool operator==(const Occlusion&) const = default;
};

double overlap_area(const Rect& a, const Rect& b);

// `virtual_items` must already be in static coordinates.
std::vector<Occlusion> detect_occlusion(const std::vector<MarkItem>& virtual_items,
                                        const std::vector<MarkItem>& static_items,
                                        const std::vector<Rect>& protected_regions);

enum class Verdict { Valid, Invalid, Warnings };
std::string_view to_string(Verdict v);

struct ValidationReport {
  Verdict verdict = Verdict::Valid;
  std::optional<AugmentationClass> mode;
  std::vector<StageDiff> stage_diffs;
  std::vector<ScaleDiff> scale_diffs;
  std::vector<Occlusion> occlusions;
  std::vector<std::string> warnings;
};

ValidationReport validate(const CompiledDesign& design);
ValidationReport validate(const Spec& spec, std::optional<std::uint64_t> seed = {});

nlohmann::json report_to_json(const ValidationReport& r);
// Human-readable summary, one finding per line.
std::string report_to_text(const ValidationReport& r);

struct OracleResult {
  bool valid = true;
  // Base items whose geometry or style changed, or that disappeared.
  std::vector<std::pair<std::size_t, std::uint64_t>> flagged;
  // Largest bounding-box coordinate shift among matched base items (px).
  double max_displacement = 0;
};

// Independent check: every base-provenance item of `base` must reappear in
// `aug` (same mark, same pid) with equal geometry and style.
OracleResult scene_oracle(const SceneGraph& base, const SceneGraph& aug);

}  // namespace papar
