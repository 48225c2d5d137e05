#include <cmath>
#include <cstdio>
#include <numbers>

#include "papar/scene.hpp"

namespace papar {

std::string format_svg_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

namespace {

std::string escape_xml(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

class Attrs {
 public:
  Attrs& num(std::string_view name, double v) {
    s_ += ' ';
    s_ += name;
    s_ += "=\"" + format_svg_number(v) + '"';
    return *this;
  }
  Attrs& str(std::string_view name, std::string_view v) {
    s_ += ' ';
    s_ += name;
    s_ += "=\"" + escape_xml(v) + '"';
    return *this;
  }
  const std::string& get() const { return s_; }

 private:
  std::string s_;
};

std::string point(double x, double y) { return format_svg_number(x) + "," + format_svg_number(y); }

std::string arc_path(const ArcGeom& a) {
  auto at = [&](double r, double t) { return point(a.cx + r * std::sin(t), a.cy - r * std::cos(t)); };
  const double sweep = a.end - a.start;
  if (std::fabs(sweep) < 1e-12 || a.outer <= 0) return "M" + point(a.cx, a.cy) + "Z";
  // A full circle cannot be one SVG arc command; split it at the midpoint.
  const bool full = std::fabs(sweep) >= 2 * std::numbers::pi - 1e-9;
  const double mid = a.start + sweep / 2;
  const std::string large = std::fabs(sweep) > std::numbers::pi && !full ? "1" : "0";
  const std::string dir = sweep > 0 ? "1" : "0";
  const std::string rdir = sweep > 0 ? "0" : "1";
  auto radius = [](double r) { return format_svg_number(r) + "," + format_svg_number(r); };
  std::string d = "M" + at(a.outer, a.start);
  if (full) {
    d += "A" + radius(a.outer) + " 0 0," + dir + " " + at(a.outer, mid);
  }
  d += "A" + radius(a.outer) + " 0 " + large + "," + dir + " " + at(a.outer, a.end);
  if (a.inner > 0) {
    d += "L" + at(a.inner, a.end);
    if (full) d += "A" + radius(a.inner) + " 0 0," + rdir + " " + at(a.inner, mid);
    d += "A" + radius(a.inner) + " 0 " + large + "," + rdir + " " + at(a.inner, a.start);
  } else {
    d += "L" + point(a.cx, a.cy);
  }
  return d + "Z";
}

std::string emit_item(const MarkItem& item) {
  Attrs common;
  common.str("data-pid", std::to_string(item.pid)).num("data-mark", static_cast<double>(item.mark_index));
  return std::visit(
      [&](const auto& g) -> std::string {
        using T = std::decay_t<decltype(g)>;
        Attrs a = common;
        if constexpr (std::is_same_v<T, RectGeom>) {
          a.num("x", g.x).num("y", g.y).num("width", g.width).num("height", g.height).str("fill", item.style);
          return "<rect" + a.get() + "/>";
        } else if constexpr (std::is_same_v<T, SymbolGeom>) {
          a.num("cx", g.cx).num("cy", g.cy).num("r", g.r).str("fill", item.style);
          return "<circle" + a.get() + "/>";
        } else if constexpr (std::is_same_v<T, SegmentGeom>) {
          if (item.kind == MarkKind::Line) {
            a.num("x1", g.x1).num("y1", g.y1).num("x2", g.x2).num("y2", g.y2).str("stroke", item.style);
            return "<line" + a.get() + "/>";
          }
          // Link from (x2,y2) to (x1,y1) with vertical tangents.
          const double my = (g.y1 + g.y2) / 2;
          const std::string d = "M" + point(g.x2, g.y2) + "C" + point(g.x2, my) + " " + point(g.x1, my) + " " +
                                point(g.x1, g.y1);
          a.str("d", d).str("fill", "none").str("stroke", item.style);
          return "<path" + a.get() + "/>";
        } else if constexpr (std::is_same_v<T, ArcGeom>) {
          a.str("d", arc_path(g)).str("fill", item.style);
          return "<path" + a.get() + "/>";
        } else {
          a.num("x", g.x).num("y", g.y + g.height).num("data-width", g.width).num("data-height", g.height);
          a.num("font-size", g.height).str("fill", item.style);
          return "<text" + a.get() + ">" + escape_xml(g.text) + "</text>";
        }
      },
      item.geometry);
}

std::string border(const Rect& r, std::string_view layer, std::string_view color) {
  Attrs a;
  a.str("data-border", layer).num("x", r.x).num("y", r.y).num("width", r.width).num("height", r.height);
  a.str("fill", "none").str("stroke", color).num("stroke-width", 2);
  return "<rect" + a.get() + "/>\n";
}

std::string anchor_glyph(const AnchorGlyph& g) {
  const Rect& b = g.box;
  const double cell = std::min(b.width, b.height) / 7;
  std::string out = "<g" + Attrs().str("data-anchor", g.payload).get() + ">\n";
  out += "<rect" + Attrs().num("x", b.x).num("y", b.y).num("width", b.width).num("height", b.height)
                       .str("fill", "#ffffff").str("stroke", "#000000").get() + "/>\n";
  // Finder squares in three corners, QR style.
  for (auto [cx, cy] : {std::pair{0.0, 0.0}, {4.0, 0.0}, {0.0, 4.0}}) {
    out += "<rect" + Attrs().num("x", b.x + cx * cell).num("y", b.y + cy * cell).num("width", 3 * cell)
                         .num("height", 3 * cell).str("fill", "#000000").get() + "/>\n";
  }
  out += "</g>\n";
  return out;
}

}  // namespace

std::string emit_layer_group(const std::vector<MarkItem>& items, Layer layer) {
  std::string body;
  for (const auto& item : items) {
    if (item.layer == layer) body += emit_item(item) + "\n";
  }
  if (body.empty()) return {};
  return "<g data-layer=\"" + std::string(to_string(layer)) + "\">\n" + body + "</g>\n";
}

std::string emit_svg(const SceneGraph& scene, const Rect& vb, const EmitOptions& options) {
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"";
  out += Attrs()
             .str("viewBox", format_svg_number(vb.x) + " " + format_svg_number(vb.y) + " " +
                                 format_svg_number(vb.width) + " " + format_svg_number(vb.height))
             .num("width", vb.width)
             .num("height", vb.height)
             .get();
  out += ">\n";
  out += emit_layer_group(scene.items, Layer::Static);
  out += emit_layer_group(scene.items, Layer::Virtual);
  if (options.border_boxes) {
    if (options.static_border) out += border(*options.static_border, "static", kStaticBorderColor);
    if (options.virtual_border) out += border(*options.virtual_border, "virtual", kVirtualBorderColor);
  }
  if (options.anchor) out += anchor_glyph(*options.anchor);
  out += "</svg>\n";
  return out;
}

}  // namespace papar
