#include "papar/augment.hpp"

#include <algorithm>
#include <cmath>

#include "papar/error.hpp"
#include "papar/iso_time.hpp"

namespace papar {

std::string_view to_string(Encodings e) { return e == Encodings::Same ? "same" : "different"; }
std::string_view to_string(Composition c) { return c == Composition::Integrated ? "integrated" : "separate"; }

AugmentationClass classify_augmentation(const Spec& spec) {
  if (!spec.ar) throw Error(ErrorCode::NoArBlock, "spec has no ar block", "ar");
  const ArBlock& ar = *spec.ar;
  switch (ar.mode) {
    case ArMode::Extend:
      if (ar.nested) throw Error(ErrorCode::ModeShapeConflict, "extend mode cannot carry a nested spec", "ar.nested");
      if (ar.appends.empty()) throw Error(ErrorCode::ModeShapeConflict, "extend mode needs appends", "ar.appends");
      return {ArMode::Extend, Encodings::Same, Composition::Integrated};
    case ArMode::Composite:
      if (!ar.nested) throw Error(ErrorCode::ModeShapeConflict, "composite mode needs a nested spec", "ar.nested");
      return {ArMode::Composite, Encodings::Different, Composition::Integrated};
    case ArMode::SmallMultiple:
      if (ar.nested) {
        throw Error(ErrorCode::ModeShapeConflict, "smallMultiple mode cannot carry a nested spec", "ar.nested");
      }
      if (ar.appends.empty()) throw Error(ErrorCode::ModeShapeConflict, "smallMultiple mode needs appends", "ar.appends");
      return {ArMode::SmallMultiple, Encodings::Same, Composition::Separate};
    case ArMode::MultipleView:
      if (!ar.nested) throw Error(ErrorCode::ModeShapeConflict, "multipleView mode needs a nested spec", "ar.nested");
      return {ArMode::MultipleView, Encodings::Different, Composition::Separate};
  }
  throw Error(ErrorCode::ModeShapeConflict, "unknown mode", "ar.mode");
}

std::vector<Record> generate_placeholder_rows(const PlaceholderSpec& p, std::optional<std::uint64_t> seed) {
  std::uint64_t s = seed.value_or(p.seed);
  std::vector<Record> rows;
  rows.reserve(static_cast<std::size_t>(std::max<std::int64_t>(p.count, 0)));
  for (std::int64_t r = 0; r < p.count; ++r) {
    Record row;
    for (const auto& f : p.fields) {
      s = lcg_next(s);
      const double u = lcg_uniform(s);
      switch (f.kind) {
        case FieldKind::Categorical:
          if (!f.options.empty()) {
            const auto i = static_cast<std::size_t>(std::floor(u * static_cast<double>(f.options.size())));
            row[f.name] = f.options[std::min(i, f.options.size() - 1)];
          } else {
            std::string text = f.pattern.value_or("*");
            const auto star = text.find('*');
            if (star != std::string::npos) text.replace(star, 1, std::to_string(r + 1));
            row[f.name] = text;
          }
          break;
        case FieldKind::Quantitative: {
          const auto [lo, hi] = f.range.value_or(std::pair{0.0, 1.0});
          row[f.name] = lo + u * (hi - lo);
          break;
        }
        case FieldKind::Temporal: {
          const TemporalSpan span = f.span.value_or(TemporalSpan{});
          const double start = parse_iso8601(span.start).value_or(0);
          const double end = parse_iso8601(span.end).value_or(start);
          const double steps = span.step_seconds > 0 ? (end - start) / span.step_seconds : 0;
          row[f.name] = Timestamp{start + std::floor(u * steps) * span.step_seconds};
          break;
        }
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ArBlock expand_placeholders(const ArBlock& ar, std::optional<std::uint64_t> seed) {
  ArBlock out = ar;
  for (auto& a : out.appends) {
    if (auto* p = std::get_if<PlaceholderSpec>(&a.source)) a.source = generate_placeholder_rows(*p, seed);
  }
  return out;
}

namespace {

void check_append_schema(const DatasetDecl& decl, const std::vector<Record>& rows, std::size_t append_index) {
  const auto columns = dataset_columns(decl);
  if (columns.empty()) return;
  for (const auto& row : rows) {
    for (const auto& c : columns) {
      if (!row.count(c)) {
        throw Error(ErrorCode::AppendSchemaMismatch,
                    "append rows for '" + decl.name + "' lack field '" + c + "'",
                    "ar.appends[" + std::to_string(append_index) + "]." + c);
      }
    }
    for (const auto& [k, v] : row) {
      if (std::find(columns.begin(), columns.end(), k) == columns.end()) {
        throw Error(ErrorCode::AppendSchemaMismatch,
                    "append rows for '" + decl.name + "' have unknown field '" + k + "'",
                    "ar.appends[" + std::to_string(append_index) + "]." + k);
      }
    }
  }
}

DatasetDecl& dataset_for(Spec& spec, const std::string& name, std::size_t append_index) {
  for (auto& d : spec.datasets) {
    if (d.name == name) return d;
  }
  throw Error(ErrorCode::MissingDataset, "append targets unknown dataset '" + name + "'",
              "ar.appends[" + std::to_string(append_index) + "].dataset");
}

}  // namespace

AugmentedSpec build_augmented_spec(const Spec& spec, std::optional<std::uint64_t> seed) {
  AugmentedSpec out;
  out.cls = classify_augmentation(spec);
  const ArBlock ar = expand_placeholders(*spec.ar, seed);
  out.base = spec;
  out.base.ar.reset();

  switch (ar.mode) {
    case ArMode::Extend: {
      out.aug = out.base;
      for (const auto& d : out.aug.datasets) out.base_rows[d.name] = d.values.size();
      for (std::size_t i = 0; i < ar.appends.size(); ++i) {
        const auto& rows = std::get<std::vector<Record>>(ar.appends[i].source);
        DatasetDecl& decl = dataset_for(out.aug, ar.appends[i].dataset, i);
        check_append_schema(decl, rows, i);
        decl.values.insert(decl.values.end(), rows.begin(), rows.end());
      }
      break;
    }
    case ArMode::Composite:
    case ArMode::MultipleView:
      out.aug = *ar.nested;
      out.aug.ar.reset();
      break;
    case ArMode::SmallMultiple: {
      for (std::size_t i = 0; i < ar.appends.size(); ++i) {
        Spec unit = out.base;
        const auto& rows = std::get<std::vector<Record>>(ar.appends[i].source);
        DatasetDecl& decl = dataset_for(unit, ar.appends[i].dataset, i);
        check_append_schema(decl, rows, i);
        decl.values = rows;
        out.multiples.push_back(std::move(unit));
      }
      out.aug = out.multiples.front();
      break;
    }
  }
  return out;
}

SceneGraph ComposedScene::virtual_translated() const {
  SceneGraph out;
  out.frame = virtual_frame;
  out.items.reserve(virtual_scene.items.size());
  for (const auto& item : virtual_scene.items) {
    MarkItem moved = item;
    moved.geometry = translate(item.geometry, dx, dy);
    out.items.push_back(std::move(moved));
  }
  return out;
}

SceneGraph ComposedScene::merged() const {
  SceneGraph out = static_scene;
  out.frame = union_view_box;
  for (auto& item : virtual_translated().items) out.items.push_back(std::move(item));
  return out;
}

ComposedScene compose_preview(const SceneGraph& static_scene, const SceneGraph& virtual_scene,
                              const Placement& placement) {
  ComposedScene c;
  c.static_scene = static_scene;
  c.virtual_scene = virtual_scene;
  for (auto& item : c.virtual_scene.items) item.layer = Layer::Virtual;

  Rect vf = virtual_scene.frame;
  if (placement.width_hint) vf.width = *placement.width_hint;
  if (placement.height_hint) vf.height = *placement.height_hint;
  const Rect& sf = static_scene.frame;

  switch (placement.direction) {
    case Direction::Right:
      c.dx = sf.right() + placement.gap - vf.x;
      c.dy = placement.dy;
      break;
    case Direction::Left:
      c.dx = sf.x - (vf.right() + placement.gap);
      c.dy = placement.dy;
      break;
    case Direction::Top:
      c.dx = placement.dx;
      c.dy = sf.y - (vf.bottom() + placement.gap);
      break;
    case Direction::Bottom:
      c.dx = placement.dx;
      c.dy = sf.bottom() + placement.gap - vf.y;
      break;
    case Direction::Overlay:
      c.dx = placement.dx;
      c.dy = placement.dy;
      break;
  }
  c.virtual_frame = Rect{vf.x + c.dx, vf.y + c.dy, vf.width, vf.height};

  c.union_view_box = sf;
  if (!c.virtual_scene.items.empty()) {
    const double x0 = std::min(sf.x, c.virtual_frame.x);
    const double y0 = std::min(sf.y, c.virtual_frame.y);
    const double x1 = std::max(sf.right(), c.virtual_frame.right());
    const double y1 = std::max(sf.bottom(), c.virtual_frame.bottom());
    c.union_view_box = Rect{x0, y0, x1 - x0, y1 - y0};
  }
  return c;
}

std::string emit_composed(const ComposedScene& c, bool border_boxes, const std::optional<AnchorGlyph>& anchor) {
  EmitOptions opts;
  opts.border_boxes = border_boxes;
  opts.static_border = c.static_scene.frame;
  if (!c.virtual_scene.items.empty()) opts.virtual_border = c.virtual_frame;
  opts.anchor = anchor;
  return emit_svg(c.merged(), c.union_view_box, opts);
}

}  // namespace papar
