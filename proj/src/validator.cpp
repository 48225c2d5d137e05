#include "papar/validator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "papar/error.hpp"

namespace papar {

const std::vector<Hint>& hint_table() {
  static const std::vector<Hint> table = {
      {"filter", "the filter decides differently for existing rows once new data is added; filter on fields the "
                 "new rows cannot affect"},
      {"formula", "the formula gives existing rows new values; compute it from fields of the row itself"},
      {"aggregate", "new rows fall into existing groups and change their aggregates; append new group keys only, "
                    "or show the new data in a separate view"},
      {"sort", "sorting interleaves new rows with existing ones; sort on a field that places new rows last"},
      {"stack", "new rows are stacked beneath existing ones; append them after the existing rows of each stack"},
      {"pie", "pie angles are shares of the total, so any new value resizes every existing slice; use an "
              "extensible chart such as a bar chart, or put the new data in a separate view"},
      {"bin", "bin boundaries follow the data extent; give the bin transform an explicit extent that covers the "
              "new values"},
      {"hierarchy", "new nodes change the depth of existing nodes; attach new nodes without re-parenting existing "
                    "ones"},
      {"treelayout.cluster", "change the treelayout method from 'cluster' to 'tidy' so that deeper new nodes do not "
                             "move existing ones"},
      {"treelayout.tidy", "new nodes shift existing leaves; attach new nodes below existing leaves"},
      {"treemap", "avoid 'treemap' when new nodes are added to the internal nodes"},
  };
  return table;
}

Hint hint_for(const TransformDecl& t) {
  std::string id(to_string(t.kind()));
  if (const auto* p = std::get_if<TreeLayoutParams>(&t.params)) {
    id += p->method == TreeMethod::Cluster ? ".cluster" : ".tidy";
  }
  for (const auto& h : hint_table()) {
    if (h.id == id) return h;
  }
  return {id, "this transform changes existing rows when new data is added"};
}

std::vector<StageDiff> diff_traces(const DataflowTrace& base, const DataflowTrace& aug) {
  if (base.stages.size() != aug.stages.size()) {
    throw Error(ErrorCode::PipelineShapeMismatch, "pipelines of '" + base.dataset + "' have different lengths",
                base.dataset);
  }
  std::vector<StageDiff> out;
  for (std::size_t i = 0; i < base.stages.size(); ++i) {
    if (!(base.stages[i].transform == aug.stages[i].transform)) {
      throw Error(ErrorCode::PipelineShapeMismatch,
                  "stage " + std::to_string(i) + " of '" + base.dataset + "' differs between runs", base.dataset);
    }
    const DataTable& b = base.stages[i].output;
    const DataTable& a = aug.stages[i].output;
    std::map<std::uint64_t, const Row*> by_pid;
    for (const auto& row : a.rows) by_pid.emplace(row.pid, &row);
    std::vector<std::optional<std::size_t>> colmap;
    for (const auto& c : b.columns) colmap.push_back(a.column_index(c));

    StageDiff diff;
    diff.dataset = base.dataset;
    diff.stage_index = i;
    diff.transform = base.stages[i].transform.kind();
    for (const auto& row : b.rows) {
      auto it = by_pid.find(row.pid);
      if (it == by_pid.end()) {
        diff.mismatches.push_back({row.pid, "", Value{}, Value{}, true});
        continue;
      }
      for (std::size_t c = 0; c < b.columns.size(); ++c) {
        const Value aug_value = colmap[c] ? it->second->cells[*colmap[c]] : Value{};
        if (!colmap[c] || !approx_equal(row.cells[c], aug_value)) {
          diff.mismatches.push_back({row.pid, b.columns[c], row.cells[c], aug_value, false});
        }
      }
    }
    if (!diff.mismatches.empty()) {
      diff.hint = hint_for(base.stages[i].transform);
      out.push_back(std::move(diff));
    }
  }
  return out;
}

std::vector<ScaleDiff> check_scales(const ScaleMap& base, const ScaleMap& aug) {
  std::vector<ScaleDiff> out;
  for (const auto& [name, b] : base) {
    auto it = aug.find(name);
    if (it == aug.end()) {
      out.push_back({name, b.kind, "scale is missing from the augmented chart"});
      continue;
    }
    const ResolvedScale& a = it->second;
    auto add = [&](std::string reason) { out.push_back({name, b.kind, std::move(reason)}); };
    switch (b.kind) {
      case ScaleKind::Linear:
        if (!approx_equal(b.slope(), a.slope()) || !approx_equal(b.intercept(), a.intercept())) {
          std::ostringstream s;
          s << "mapping changed: slope " << format_number(b.slope()) << " -> " << format_number(a.slope())
            << ", intercept " << format_number(b.intercept()) << " -> " << format_number(a.intercept());
          add(s.str());
        }
        break;
      case ScaleKind::Band:
      case ScaleKind::Point: {
        const bool prefix = a.domain.size() >= b.domain.size() &&
                            std::equal(b.domain.begin(), b.domain.end(), a.domain.begin());
        if (!prefix) add("base domain is not a prefix of the augmented domain");
        if (!approx_equal(b.step, a.step) || !approx_equal(b.bandwidth, a.bandwidth)) {
          add("step changed: " + format_number(b.step) + " -> " + format_number(a.step));
        }
        if (!approx_equal(b.padding_inner, a.padding_inner) || !approx_equal(b.padding_outer, a.padding_outer)) {
          add("paddings changed");
        }
        if (!approx_equal(b.range_start, a.range_start)) {
          add("range start changed: " + format_number(b.range_start) + " -> " + format_number(a.range_start));
        }
        break;
      }
      case ScaleKind::Ordinal:
        for (const auto& v : b.domain) {
          const std::string before = b.color(v);
          const std::string after = a.index_of(v) ? a.color(v) : std::string("none");
          if (before != after) {
            add("color of " + to_display(v) + " changed: " + before + " -> " + after);
            break;
          }
        }
        break;
    }
  }
  return out;
}

double overlap_area(const Rect& a, const Rect& b) {
  const double w = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double h = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  return w > 0 && h > 0 ? w * h : 0.0;
}

std::vector<Occlusion> detect_occlusion(const std::vector<MarkItem>& virtual_items,
                                        const std::vector<MarkItem>& static_items,
                                        const std::vector<Rect>& protected_regions) {
  std::vector<Rect> static_boxes;
  static_boxes.reserve(static_items.size());
  for (const auto& s : static_items) static_boxes.push_back(bounding_box(s));

  std::vector<Occlusion> out;
  for (const auto& v : virtual_items) {
    const Rect vb = bounding_box(v);
    for (std::size_t r = 0; r < protected_regions.size(); ++r) {
      const double area = overlap_area(vb, protected_regions[r]);
      if (area > 0) {
        Occlusion o{v.mark_index, v.pid, {}, area};
        o.target.kind = OcclusionTarget::Kind::Protected;
        o.target.region = r;
        out.push_back(o);
      }
    }
    for (std::size_t s = 0; s < static_items.size(); ++s) {
      const double area = overlap_area(vb, static_boxes[s]);
      if (area > 0.05 * static_boxes[s].width * static_boxes[s].height && area > 0) {
        Occlusion o{v.mark_index, v.pid, {}, area};
        o.target.kind = OcclusionTarget::Kind::StaticItem;
        o.target.mark_index = static_items[s].mark_index;
        o.target.pid = static_items[s].pid;
        out.push_back(o);
      }
    }
  }
  return out;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Valid: return "valid";
    case Verdict::Invalid: return "invalid";
    case Verdict::Warnings: return "warnings";
  }
  return "valid";
}

namespace {

void scalability_warnings(const CompiledDesign& d, ValidationReport& r) {
  const Spec& base = d.augmented->base;
  for (std::size_t k = 0; k < d.units.size(); ++k) {
    for (const auto& decl : base.scales) {
      const auto* ref = std::get_if<DataRef>(&decl.domain);
      if (!ref) continue;
      const ResolvedScale& bs = d.base_scales.at(decl.name);
      std::vector<Value> values;
      try {
        values = domain_values(*ref, d.units[k].traces);
      } catch (const Error&) {
        continue;
      }
      std::size_t outside = 0;
      for (const auto& v : values) {
        if (v.is_null()) continue;
        if (bs.kind == ScaleKind::Linear) {
          auto n = v.as_number();
          if (n && (*n < bs.domain_lo - 1e-12 || *n > bs.domain_hi + 1e-12)) ++outside;
        } else if (!bs.index_of(v)) {
          ++outside;
        }
      }
      if (outside > 0) {
        r.warnings.push_back("multiple " + std::to_string(k) + ": " + std::to_string(outside) +
                             " value(s) fall outside the base domain of scale '" + decl.name + "'");
      }
    }
  }
}

}  // namespace

ValidationReport validate(const CompiledDesign& d) {
  ValidationReport r;
  if (!d.has_ar()) return r;
  r.mode = d.augmented->cls;
  const SceneGraph moved = d.composed.virtual_translated();
  const auto& protected_regions = d.augmented->base.protected_regions;

  switch (r.mode->mode) {
    case ArMode::Extend:
      for (const auto& [name, trace] : d.base_traces) {
        auto it = d.aug_traces.find(name);
        if (it == d.aug_traces.end()) continue;
        for (auto& diff : diff_traces(trace, it->second)) r.stage_diffs.push_back(std::move(diff));
      }
      r.scale_diffs = check_scales(d.base_scales, d.aug_scales);
      r.occlusions = detect_occlusion(moved.items, d.static_scene.items, protected_regions);
      break;
    case ArMode::Composite:
      r.occlusions = detect_occlusion(moved.items, d.static_scene.items, protected_regions);
      break;
    case ArMode::SmallMultiple:
      scalability_warnings(d, r);
      r.occlusions = detect_occlusion(moved.items, d.static_scene.items, protected_regions);
      break;
    case ArMode::MultipleView:
      if (overlap_area(d.composed.virtual_frame, d.static_scene.frame) > 0) {
        r.warnings.push_back("the virtual view overlaps the static canvas; check the placement");
      }
      break;
  }

  if (!r.stage_diffs.empty() || !r.scale_diffs.empty()) {
    r.verdict = Verdict::Invalid;
  } else if (!r.occlusions.empty() || !r.warnings.empty()) {
    r.verdict = Verdict::Warnings;
  }
  return r;
}

ValidationReport validate(const Spec& spec, std::optional<std::uint64_t> seed) {
  return validate(compile_design(spec, seed));
}

nlohmann::json report_to_json(const ValidationReport& r) {
  using nlohmann::json;
  json j;
  j["verdict"] = std::string(to_string(r.verdict));
  if (r.mode) {
    j["mode"] = {{"mode", std::string(to_string(r.mode->mode))},
                 {"encodings", std::string(to_string(r.mode->encodings))},
                 {"composition", std::string(to_string(r.mode->composition))}};
  } else {
    j["mode"] = nullptr;
  }
  j["stageDiffs"] = json::array();
  for (const auto& d : r.stage_diffs) {
    json m = json::array();
    for (const auto& x : d.mismatches) {
      json e = {{"pid", x.pid}, {"field", x.field}, {"base", to_json(x.base)}, {"aug", to_json(x.aug)}};
      if (x.missing) e["missing"] = true;
      m.push_back(std::move(e));
    }
    j["stageDiffs"].push_back({{"dataset", d.dataset},
                               {"stageIndex", d.stage_index},
                               {"transform", std::string(to_string(d.transform))},
                               {"mismatches", std::move(m)},
                               {"hint", {{"id", d.hint.id}, {"text", d.hint.text}}}});
  }
  j["scaleDiffs"] = json::array();
  for (const auto& d : r.scale_diffs) {
    j["scaleDiffs"].push_back({{"scale", d.scale}, {"kind", std::string(to_string(d.kind))}, {"reason", d.reason}});
  }
  j["occlusions"] = json::array();
  for (const auto& o : r.occlusions) {
    json target;
    if (o.target.kind == OcclusionTarget::Kind::Protected) {
      target = {{"kind", "protected"}, {"region", o.target.region}};
    } else {
      target = {{"kind", "static"}, {"mark", o.target.mark_index}, {"pid", o.target.pid}};
    }
    j["occlusions"].push_back({{"virtualItem", {{"mark", o.virtual_mark}, {"pid", o.virtual_pid}}},
                               {"target", std::move(target)},
                               {"overlapArea", to_json(Value{o.overlap_area})}});
  }
  j["warnings"] = r.warnings;
  return j;
}

std::string report_to_text(const ValidationReport& r) {
  std::ostringstream s;
  s << to_string(r.verdict);
  if (r.mode) s << " (" << to_string(r.mode->mode) << ")";
  s << "\n";
  for (const auto& d : r.stage_diffs) {
    s << "  " << d.dataset << " stage " << d.stage_index << " '" << to_string(d.transform) << "': "
      << d.mismatches.size() << " mismatch(es)\n    hint: " << d.hint.text << "\n";
  }
  for (const auto& d : r.scale_diffs) s << "  scale '" << d.scale << "': " << d.reason << "\n";
  for (const auto& o : r.occlusions) {
    s << "  occlusion: virtual mark " << o.virtual_mark << " pid " << o.virtual_pid << " covers ";
    if (o.target.kind == OcclusionTarget::Kind::Protected) {
      s << "protected region " << o.target.region;
    } else {
      s << "static mark " << o.target.mark_index << " pid " << o.target.pid;
    }
    s << " (" << format_number(o.overlap_area) << " px2)\n";
  }
  for (const auto& w : r.warnings) s << "  warning: " << w << "\n";
  return s.str();
}

namespace {

bool geometry_equal(const Geometry& a, const Geometry& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, RectGeom>) {
          return approx_equal(x.x, y.x) && approx_equal(x.y, y.y) && approx_equal(x.width, y.width) &&
                 approx_equal(x.height, y.height);
        } else if constexpr (std::is_same_v<T, SymbolGeom>) {
          return approx_equal(x.cx, y.cx) && approx_equal(x.cy, y.cy) && approx_equal(x.r, y.r);
        } else if constexpr (std::is_same_v<T, SegmentGeom>) {
          return approx_equal(x.x1, y.x1) && approx_equal(x.y1, y.y1) && approx_equal(x.x2, y.x2) &&
                 approx_equal(x.y2, y.y2);
        } else if constexpr (std::is_same_v<T, ArcGeom>) {
          return approx_equal(x.cx, y.cx) && approx_equal(x.cy, y.cy) && approx_equal(x.inner, y.inner) &&
                 approx_equal(x.outer, y.outer) && approx_equal(x.start, y.start) && approx_equal(x.end, y.end);
        } else {
          return approx_equal(x.x, y.x) && approx_equal(x.y, y.y) && approx_equal(x.width, y.width) &&
                 approx_equal(x.height, y.height) && x.text == y.text;
        }
      },
      a);
}

}  // namespace

OracleResult scene_oracle(const SceneGraph& base, const SceneGraph& aug) {
  std::map<std::pair<std::size_t, std::uint64_t>, const MarkItem*> index;
  for (const auto& item : aug.items) index.emplace(std::pair{item.mark_index, item.pid}, &item);

  OracleResult r;
  for (const auto& item : base.items) {
    if (item.source != SourceTag::Base) continue;
    const auto key = std::pair{item.mark_index, item.pid};
    auto it = index.find(key);
    if (it == index.end()) {
      r.flagged.push_back(key);
      continue;
    }
    const MarkItem& other = *it->second;
    const Rect a = bounding_box(item);
    const Rect b = bounding_box(other);
    r.max_displacement = std::max({r.max_displacement, std::fabs(a.x - b.x), std::fabs(a.y - b.y),
                                   std::fabs(a.right() - b.right()), std::fabs(a.bottom() - b.bottom())});
    if (item.kind != other.kind || item.style != other.style || !geometry_equal(item.geometry, other.geometry)) {
      r.flagged.push_back(key);
    }
  }
  r.valid = r.flagged.empty();
  return r;
}

}  // namespace papar
