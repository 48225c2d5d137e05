#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "papar/augment.hpp"
#include "papar/dataflow.hpp"
#include "papar/scale.hpp"
#include "papar/scene.hpp"
#include "papar/spec.hpp"

namespace papar {

inline constexpr const char* kDefaultHub = "http://localhost:8080";

// Ingests every dataset's inline values (tagged `tag`) and runs the pipelines.
TraceMap run_spec(const Spec& spec, SourceTag tag = SourceTag::Base);

// Extend mode: the first base_rows[d] rows of each dataset are base rows,
// the rest are augment rows numbered from 2^32.
TraceMap run_spec_split(const Spec& spec, const std::map<std::string, std::size_t>& base_rows);

// One small-multiple unit's traces, scales and scene.
struct UnitRender {
  TraceMap traces;
  ScaleMap scales;
  SceneGraph scene;
};

struct CompiledDesign {
  Spec spec;
  std::optional<AugmentedSpec> augmented;

  TraceMap base_traces;
  ScaleMap base_scales;
  SceneGraph static_scene;

  // Extend: the whole augmented chart. Composite / multipleView: the nested
  // chart. smallMultiple: the first unit.
  TraceMap aug_traces;
  ScaleMap aug_scales;
  SceneGraph aug_scene;
  std::vector<UnitRender> units;

  ComposedScene composed;

  bool has_ar() const { return augmented.has_value(); }
};

// Throws Error from any stage (stage index and dataset attached for transforms).
CompiledDesign compile_design(const Spec& spec, std::optional<std::uint64_t> seed = {});

// {"box":[x,y,w,h],"hub":..,"id":..,"papar":1,"ver":..}
nlohmann::json anchor_payload(const Spec& spec, const std::string& id, int version, const std::string& hub);

// First 16 hex digits of SHA-256 over the canonical bytes.
std::string spec_id(const std::string& canonical_bytes);

// Static layer with the anchor glyph reserved in its box.
std::string render_static_svg(const CompiledDesign& d, const nlohmann::json& anchor);
// Translated virtual items in the composed coordinate system; requires ar.
std::string render_virtual_svg(const CompiledDesign& d);
// Both layers with orange/blue border boxes.
std::string render_preview_svg(const CompiledDesign& d);

}  // namespace papar
