#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "papar/dataflow.hpp"
#include "papar/scale.hpp"
#include "papar/spec.hpp"

namespace papar {

enum class Layer { Static, Virtual };
std::string_view to_string(Layer layer);

struct RectGeom {
  double x = 0, y = 0, width = 0, height = 0;
  bool operator==(const RectGeom&) const = default;
};
struct SymbolGeom {
  double cx = 0, cy = 0, r = 0;
  bool operator==(const SymbolGeom&) const = default;
};
// Straight segment (line marks) or link curve (path marks) from (x1,y1) to (x2,y2).
struct SegmentGeom {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  bool operator==(const SegmentGeom&) const = default;
};
// Angles in radians, clockwise from 12 o'clock.
struct ArcGeom {
  double cx = 0, cy = 0, inner = 0, outer = 0, start = 0, end = 0;
  bool operator==(const ArcGeom&) const = default;
};
// Text carries its own box; nothing is measured.
struct TextGeom {
  double x = 0, y = 0, width = 0, height = 0;
  std::string text;
  bool operator==(const TextGeom&) const = default;
};

using Geometry = std::variant<RectGeom, SymbolGeom, SegmentGeom, ArcGeom, TextGeom>;

struct MarkItem {
  MarkKind kind = MarkKind::Rect;
  Geometry geometry;
  // Fill color (stroke color for line/path).
  std::string style;
  Layer layer = Layer::Static;
  std::uint64_t pid = 0;
  SourceTag source = SourceTag::Base;
  std::string dataset;
  std::size_t mark_index = 0;
  bool operator==(const MarkItem&) const = default;
};

struct SceneGraph {
  // Canvas of this scene in its own coordinates.
  Rect frame;
  std::vector<MarkItem> items;
  bool operator==(const SceneGraph&) const = default;
};

// Axis-aligned bounding box of the item's geometry (arcs use the exact sector extent).
Rect bounding_box(const MarkItem& item);
// Bounding box of all items; nullopt for an empty list.
std::optional<Rect> bounding_box(const std::vector<MarkItem>& items);

Geometry translate(const Geometry& g, double dx, double dy);

// One item per final-stage row per mark declaration, ordered by (mark, row).
// Throws Error{ChannelScaleMismatch | MissingScale | MissingDataset | MissingField}.
SceneGraph encode_marks(const Spec& spec, const TraceMap& traces, const ScaleMap& scales, Layer layer);

// ---------------------------------------------------------------------------
// SVG

inline constexpr std::string_view kStaticBorderColor = "#FF8C00";
inline constexpr std::string_view kVirtualBorderColor = "#1E90FF";

struct AnchorGlyph {
  Rect box;
  // Serialized anchor payload, written to the data-anchor attribute.
  std::string payload;
};

struct EmitOptions {
  bool border_boxes = false;
  std::optional<Rect> static_border;
  std::optional<Rect> virtual_border;
  std::optional<AnchorGlyph> anchor;
};

// Fixed-point with at most 6 decimals, trailing zeros trimmed, no "-0".
std::string format_svg_number(double v);

// The <g data-layer="..."> group for the items of one layer; empty if none.
std::string emit_layer_group(const std::vector<MarkItem>& items, Layer layer);

// Deterministic SVG 1.1: static group, virtual group, border boxes, anchor glyph.
std::string emit_svg(const SceneGraph& scene, const Rect& view_box, const EmitOptions& options = {});

}  // namespace papar
