#include <algorithm>
#include <cmath>
#include <numbers>

#include "papar/error.hpp"
#include "papar/scene.hpp"

namespace papar {

std::string_view to_string(Layer layer) { return layer == Layer::Static ? "static" : "virtual"; }

namespace {

Rect arc_box(const ArcGeom& a) {
  // Sector extent: the arc endpoints on both radii, plus any axis extreme crossed.
  std::vector<double> angles{a.start, a.end};
  const double lo = std::min(a.start, a.end);
  const double hi = std::max(a.start, a.end);
  const double quarter = std::numbers::pi / 2;
  for (double k = std::ceil(lo / quarter); k * quarter <= hi; k += 1) angles.push_back(k * quarter);
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  for (double r : {a.inner, a.outer}) {
    for (double t : angles) {
      const double x = a.cx + r * std::sin(t);
      const double y = a.cy - r * std::cos(t);
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  return Rect{x0, y0, x1 - x0, y1 - y0};
}

}  // namespace

Rect bounding_box(const MarkItem& item) {
  return std::visit(
      [](const auto& g) -> Rect {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, RectGeom>) {
          return Rect{g.x, g.y, g.width, g.height};
        } else if constexpr (std::is_same_v<T, SymbolGeom>) {
          return Rect{g.cx - g.r, g.cy - g.r, 2 * g.r, 2 * g.r};
        } else if constexpr (std::is_same_v<T, SegmentGeom>) {
          const double x = std::min(g.x1, g.x2);
          const double y = std::min(g.y1, g.y2);
          return Rect{x, y, std::max(g.x1, g.x2) - x, std::max(g.y1, g.y2) - y};
        } else if constexpr (std::is_same_v<T, ArcGeom>) {
          return arc_box(g);
        } else {
          return Rect{g.x, g.y, g.width, g.height};
        }
      },
      item.geometry);
}

std::optional<Rect> bounding_box(const std::vector<MarkItem>& items) {
  if (items.empty()) return std::nullopt;
  Rect box = bounding_box(items.front());
  double x1 = box.right(), y1 = box.bottom();
  for (const auto& it : items) {
    const Rect b = bounding_box(it);
    box.x = std::min(box.x, b.x);
    box.y = std::min(box.y, b.y);
    x1 = std::max(x1, b.right());
    y1 = std::max(y1, b.bottom());
  }
  box.width = x1 - box.x;
  box.height = y1 - box.y;
  return box;
}

Geometry translate(const Geometry& g, double dx, double dy) {
  return std::visit(
      [&](auto v) -> Geometry {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SymbolGeom> || std::is_same_v<T, ArcGeom>) {
          v.cx += dx;
          v.cy += dy;
        } else if constexpr (std::is_same_v<T, SegmentGeom>) {
          v.x1 += dx;
          v.x2 += dx;
          v.y1 += dy;
          v.y2 += dy;
        } else {
          v.x += dx;
          v.y += dy;
        }
        return v;
      },
      g);
}

namespace {

class ChannelEval {
 public:
  ChannelEval(const MarkDecl& mark, const DataTable& table, const ScaleMap& scales)
      : mark_(mark), table_(table), scales_(scales) {
    for (const auto& [name, c] : mark.encode) {
      if (c.field) columns_[name] = table.require_column(*c.field);
      if (c.scale && !scales.count(*c.scale)) {
        throw Error(ErrorCode::MissingScale, "unknown scale '" + *c.scale + "'", *c.scale);
      }
    }
  }

  bool has(const std::string& ch) const { return mark_.encode.count(ch) > 0; }

  double number(const std::string& ch, const Row& row, double fallback = 0) const {
    auto it = mark_.encode.find(ch);
    if (it == mark_.encode.end()) return fallback;
    const ChannelRef& c = it->second;
    double result = 0;
    if (c.band) {
      const auto& s = scale(c);
      result = s.bandwidth * *c.band;
    } else {
      const Value v = c.field ? row.cells[columns_.at(ch)] : c.value.value_or(Value{});
      if (c.scale) {
        result = scale(c).position(v);
      } else {
        auto n = v.as_number();
        if (!n) {
          throw Error(ErrorCode::ChannelScaleMismatch,
                      "channel '" + ch + "' needs a number, got " + to_display(v), ch);
        }
        result = *n;
      }
    }
    result += c.offset;
    if (!std::isfinite(result)) {
      throw Error(ErrorCode::ChannelScaleMismatch, "channel '" + ch + "' produced a non-finite value", ch);
    }
    return result;
  }

  std::string text(const std::string& ch, const Row& row, std::string fallback) const {
    auto it = mark_.encode.find(ch);
    if (it == mark_.encode.end()) return fallback;
    const ChannelRef& c = it->second;
    const Value v = c.field ? row.cells[columns_.at(ch)] : c.value.value_or(Value{});
    if (c.scale) return scale(c).color(v);
    return to_display(v);
  }

 private:
  const ResolvedScale& scale(const ChannelRef& c) const {
    if (!c.scale) throw Error(ErrorCode::ChannelScaleMismatch, "band channel without a scale");
    const auto& s = scales_.at(*c.scale);
    if (c.band && s.kind != ScaleKind::Band && s.kind != ScaleKind::Point) {
      throw Error(ErrorCode::ChannelScaleMismatch, "band channel on non-band scale '" + s.name + "'", s.name);
    }
    return s;
  }

  const MarkDecl& mark_;
  const DataTable& table_;
  const ScaleMap& scales_;
  std::map<std::string, std::size_t> columns_;
};

constexpr std::string_view kDefaultStroke = "#666666";

Geometry encode_geometry(const MarkDecl& m, const ChannelEval& ch, const Row& row, std::string& style) {
  switch (m.kind) {
    case MarkKind::Rect: {
      const double x = ch.number("x", row);
      const double x2 = ch.has("x2") ? ch.number("x2", row) : x + ch.number("width", row);
      const double y = ch.number("y", row);
      const double y2 = ch.has("y2") ? ch.number("y2", row) : y + ch.number("height", row);
      style = ch.text("fill", row, std::string(kPalette[0]));
      return RectGeom{std::min(x, x2), std::min(y, y2), std::fabs(x2 - x), std::fabs(y2 - y)};
    }
    case MarkKind::Symbol:
      style = ch.text("fill", row, std::string(kPalette[0]));
      return SymbolGeom{ch.number("x", row), ch.number("y", row), std::fabs(ch.number("size", row, 4))};
    case MarkKind::Line:
    case MarkKind::Path:
      style = ch.text("stroke", row, std::string(kDefaultStroke));
      return SegmentGeom{ch.number("x", row), ch.number("y", row), ch.number("x2", row), ch.number("y2", row)};
    case MarkKind::Arc:
      style = ch.text("fill", row, std::string(kPalette[0]));
      return ArcGeom{ch.number("x", row),          ch.number("y", row),          ch.number("innerRadius", row, 0),
                     ch.number("outerRadius", row), ch.number("startAngle", row), ch.number("endAngle", row)};
    case MarkKind::Text:
      style = ch.text("fill", row, "#000000");
      return TextGeom{ch.number("x", row), ch.number("y", row), ch.number("width", row), ch.number("height", row),
                      ch.text("text", row, "")};
  }
  return RectGeom{};
}

}  // namespace

SceneGraph encode_marks(const Spec& spec, const TraceMap& traces, const ScaleMap& scales, Layer layer) {
  SceneGraph scene;
  scene.frame = Rect{0, 0, static_cast<double>(spec.width), static_cast<double>(spec.height)};
  for (std::size_t m = 0; m < spec.marks.size(); ++m) {
    const MarkDecl& decl = spec.marks[m];
    auto it = traces.find(decl.from);
    if (it == traces.end()) {
      throw Error(ErrorCode::MissingDataset, "mark " + std::to_string(m) + " uses unknown dataset '" + decl.from + "'",
                  decl.from);
    }
    const DataTable& table = it->second.output();
    const ChannelEval channels(decl, table, scales);
    for (const auto& row : table.rows) {
      MarkItem item;
      item.kind = decl.kind;
      item.geometry = encode_geometry(decl, channels, row, item.style);
      item.layer = layer;
      item.pid = row.pid;
      item.source = row.tag;
      item.dataset = decl.from;
      item.mark_index = m;
      scene.items.push_back(std::move(item));
    }
  }
  return scene;
}

}  // namespace papar
