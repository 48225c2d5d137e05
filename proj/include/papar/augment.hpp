#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "papar/scene.hpp"
#include "papar/spec.hpp"

namespace papar {

enum class Encodings { Same, Different };
enum class Composition { Integrated, Separate };
std::string_view to_string(Encodings e);
std::string_view to_string(Composition c);

struct AugmentationClass {
  ArMode mode = ArMode::Extend;
  Encodings encodings = Encodings::Same;
  Composition composition = Composition::Integrated;
  bool operator==(const AugmentationClass&) const = default;
};

// Throws Error{NoArBlock | ModeShapeConflict}.
AugmentationClass classify_augmentation(const Spec& spec);

// The generator state after one LCG step.
inline std::uint64_t lcg_next(std::uint64_t s) {
  return s * 6364136223846793005ULL + 1442695040888963407ULL;
}
// Uniform in [0, 1) from the top 53 bits.
inline double lcg_uniform(std::uint64_t s) { return static_cast<double>(s >> 11) / 9007199254740992.0; }

// Rows for one placeholder spec; `seed` overrides the spec's own seed.
std::vector<Record> generate_placeholder_rows(const PlaceholderSpec& p, std::optional<std::uint64_t> seed = {});

// Every placeholder append replaced by its generated rows.
ArBlock expand_placeholders(const ArBlock& ar, std::optional<std::uint64_t> seed = {});

struct AugmentedSpec {
  AugmentationClass cls;
  // The spec without its ar block.
  Spec base;
  // extend: base plus the appended rows. composite / multipleView: the nested
  // spec. smallMultiple: the first unit (see `multiples`).
  Spec aug;
  // extend: per dataset, how many leading rows of aug's values are base rows.
  std::map<std::string, std::size_t> base_rows;
  // smallMultiple: one unit per append, each the base encodings over the
  // replacement dataset.
  std::vector<Spec> multiples;
};

// Expands placeholders first. Throws Error{NoArBlock | ModeShapeConflict | AppendSchemaMismatch}.
AugmentedSpec build_augmented_spec(const Spec& spec, std::optional<std::uint64_t> seed = {});

struct ComposedScene {
  SceneGraph static_scene;
  // Untranslated; items carry Layer::Virtual.
  SceneGraph virtual_scene;
  double dx = 0;
  double dy = 0;
  // Virtual frame after the offset.
  Rect virtual_frame;
  Rect union_view_box;

  // Static items followed by the translated virtual items.
  SceneGraph merged() const;
  // Only the translated virtual items.
  SceneGraph virtual_translated() const;
};

// Offset by direction: right (staticW + gap, dy), left (-(virtualW + gap), dy),
// top (dx, -(virtualH + gap)), bottom (dx, staticH + gap), overlay (dx, dy).
// The virtual frame is virtual.frame with the placement's size hints applied.
ComposedScene compose_preview(const SceneGraph& static_scene, const SceneGraph& virtual_scene,
                              const Placement& placement);

// Composed document. With borders, the static frame is outlined orange and
// (if there are virtual items) the virtual frame blue.
std::string emit_composed(const ComposedScene& c, bool border_boxes, const std::optional<AnchorGlyph>& anchor = {});

}  // namespace papar
