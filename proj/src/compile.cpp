#include "papar/compile.hpp"

#include <openssl/evp.h>

#include <cstdio>

#include "papar/error.hpp"

namespace papar {

TraceMap run_spec(const Spec& spec, SourceTag tag) {
  std::map<std::string, DataTable> tables;
  for (const auto& d : spec.datasets) tables.emplace(d.name, ingest(d, d.values, tag));
  return run_pipeline(spec, tables);
}

TraceMap run_spec_split(const Spec& spec, const std::map<std::string, std::size_t>& base_rows) {
  std::map<std::string, DataTable> tables;
  for (const auto& d : spec.datasets) {
    auto it = base_rows.find(d.name);
    const std::size_t n = std::min(it == base_rows.end() ? d.values.size() : it->second, d.values.size());
    const std::vector<Record> head(d.values.begin(), d.values.begin() + static_cast<std::ptrdiff_t>(n));
    const std::vector<Record> tail(d.values.begin() + static_cast<std::ptrdiff_t>(n), d.values.end());
    DataTable base = ingest(d, head, SourceTag::Base);
    if (!tail.empty()) {
      DataTable more = ingest(d, tail, SourceTag::Augment);
      if (base.rows.empty()) base.columns = more.columns;
      base = concat(std::move(base), more);
    }
    tables.emplace(d.name, std::move(base));
  }
  return run_pipeline(spec, tables);
}

namespace {

SceneGraph augment_items(const SceneGraph& scene) {
  SceneGraph out;
  for (const auto& item : scene.items) {
    if (item.source != SourceTag::Augment) continue;
    MarkItem v = item;
    v.layer = Layer::Virtual;
    out.items.push_back(std::move(v));
  }
  out.frame = bounding_box(out.items).value_or(Rect{});
  return out;
}

SceneGraph relabel(SceneGraph scene, Layer layer) {
  for (auto& item : scene.items) item.layer = layer;
  return scene;
}

}  // namespace

CompiledDesign compile_design(const Spec& spec, std::optional<std::uint64_t> seed) {
  CompiledDesign d;
  d.spec = spec;
  Spec base = spec;
  base.ar.reset();
  d.base_traces = run_spec(base);
  d.base_scales = resolve_scales(base, d.base_traces);
  d.static_scene = encode_marks(base, d.base_traces, d.base_scales, Layer::Static);

  if (!spec.ar) {
    d.composed = compose_preview(d.static_scene, SceneGraph{}, Placement{});
    return d;
  }
  d.augmented = build_augmented_spec(spec, seed);
  const AugmentedSpec& a = *d.augmented;
  const Placement& placement = spec.ar->placement;

  switch (a.cls.mode) {
    case ArMode::Extend: {
      d.aug_traces = run_spec_split(a.aug, a.base_rows);
      d.aug_scales = resolve_scales(a.aug, d.aug_traces, &d.base_scales);
      d.aug_scene = encode_marks(a.aug, d.aug_traces, d.aug_scales, Layer::Static);
      // Integrated: the new marks land in the chart's own coordinates.
      Placement in_place;
      in_place.direction = Direction::Overlay;
      d.composed = compose_preview(d.static_scene, augment_items(d.aug_scene), in_place);
      break;
    }
    case ArMode::Composite:
    case ArMode::MultipleView: {
      d.aug_traces = run_spec(a.aug, SourceTag::Augment);
      d.aug_scales = resolve_scales(a.aug, d.aug_traces);
      d.aug_scene = encode_marks(a.aug, d.aug_traces, d.aug_scales, Layer::Virtual);
      d.composed = compose_preview(d.static_scene, d.aug_scene, placement);
      break;
    }
    case ArMode::SmallMultiple: {
      const double w = d.static_scene.frame.width;
      const double h = d.static_scene.frame.height;
      const bool vertical = placement.direction == Direction::Top || placement.direction == Direction::Bottom;
      SceneGraph strip;
      for (std::size_t k = 0; k < a.multiples.size(); ++k) {
        UnitRender u;
        u.traces = run_spec(a.multiples[k], SourceTag::Augment);
        u.scales = resolve_scales(a.multiples[k], u.traces, &d.base_scales);
        u.scene = encode_marks(a.multiples[k], u.traces, u.scales, Layer::Virtual);
        const double shift = static_cast<double>(k) * ((vertical ? h : w) + placement.gap);
        for (const auto& item : u.scene.items) {
          MarkItem moved = item;
          moved.geometry = translate(item.geometry, vertical ? 0 : shift, vertical ? shift : 0);
          strip.items.push_back(std::move(moved));
        }
        d.units.push_back(std::move(u));
      }
      const double n = static_cast<double>(a.multiples.size());
      const double along = n * (vertical ? h : w) + (n - 1) * placement.gap;
      strip.frame = vertical ? Rect{0, 0, w, along} : Rect{0, 0, along, h};
      d.aug_traces = d.units.front().traces;
      d.aug_scales = d.units.front().scales;
      d.aug_scene = d.units.front().scene;
      d.composed = compose_preview(d.static_scene, strip, placement);
      break;
    }
  }
  d.composed.virtual_scene = relabel(std::move(d.composed.virtual_scene), Layer::Virtual);
  return d;
}

nlohmann::json anchor_payload(const Spec& spec, const std::string& id, int version, const std::string& hub) {
  const Rect box = effective_anchor(spec);
  nlohmann::json j;
  j["papar"] = 1;
  j["id"] = id;
  j["ver"] = version;
  j["hub"] = hub;
  j["box"] = nlohmann::json::array({to_json(Value{box.x}), to_json(Value{box.y}), to_json(Value{box.width}),
                                    to_json(Value{box.height})});
  return j;
}

std::string spec_id(const std::string& canonical_bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(canonical_bytes.data(), canonical_bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < 8; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string render_static_svg(const CompiledDesign& d, const nlohmann::json& anchor) {
  EmitOptions opts;
  opts.anchor = AnchorGlyph{effective_anchor(d.spec), anchor.dump()};
  return emit_svg(d.static_scene, d.static_scene.frame, opts);
}

std::string render_virtual_svg(const CompiledDesign& d) {
  if (!d.has_ar()) throw Error(ErrorCode::NoArBlock, "spec has no ar block", "ar");
  return emit_svg(d.composed.virtual_translated(), d.composed.union_view_box);
}

std::string render_preview_svg(const CompiledDesign& d) { return emit_composed(d.composed, true); }

}  // namespace papar
