#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "papar/dataflow.hpp"
#include "papar/spec.hpp"

namespace papar {

// Fixed ordinal palette.
inline constexpr std::array<std::string_view, 10> kPalette = {"#4c78a8", "#f58518", "#e45756", "#72b7b2", "#54a24b",
                                                              "#eeca3b", "#b279a2", "#ff9da6", "#9d755d", "#bab0ac"};

struct ResolvedScale {
  std::string name;
  ScaleKind kind = ScaleKind::Linear;

  // linear
  double domain_lo = 0;
  double domain_hi = 1;
  double range_lo = 0;
  double range_hi = 1;

  // band / point / ordinal
  std::vector<Value> domain;
  double range_start = 0;
  double range_end = 0;
  double step = 0;
  double bandwidth = 0;
  double padding_inner = 0;
  double padding_outer = 0;
  // ordinal: palette index per domain position (cycled)
  std::vector<int> palette;

  double slope() const { return (range_hi - range_lo) / (domain_hi - domain_lo); }
  double intercept() const { return range_lo - domain_lo * slope(); }

  std::optional<std::size_t> index_of(const Value& v) const;
  // Pixel position (linear, band, point). Throws Error{ChannelScaleMismatch}.
  double position(const Value& v) const;
  // Ordinal color. Throws Error{ChannelScaleMismatch}.
  std::string color(const Value& v) const;

  bool operator==(const ResolvedScale&) const = default;
};

using ScaleMap = std::map<std::string, ResolvedScale>;

// Resolves against the traces' final stages. With `base` set and the decl's
// extend policy "grow", the result keeps base's mapping and only extends it.
// Throws Error{EmptyDomain | NonNumericDomain | MissingDataset | MissingField}.
ResolvedScale resolve_scale(const ScaleDecl& decl, const TraceMap& traces, const ResolvedScale* base = nullptr);

ScaleMap resolve_scales(const Spec& spec, const TraceMap& traces, const ScaleMap* base = nullptr);

// Values a data-driven domain draws from (final stage, all listed fields, row order).
std::vector<Value> domain_values(const DataRef& ref, const TraceMap& traces);

}  // namespace papar
