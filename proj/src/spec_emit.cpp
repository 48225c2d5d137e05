#include <cmath>

#include "papar/spec.hpp"

namespace papar {

using nlohmann::json;

namespace {

json num(double v) { return to_json(Value{v}); }

json rect_json(const Rect& r) {
  return json{{"x", num(r.x)}, {"y", num(r.y)}, {"width", num(r.width)}, {"height", num(r.height)}};
}

json records_json(const std::vector<Record>& rows) {
  json arr = json::array();
  for (const auto& row : rows) {
    json obj = json::object();
    for (const auto& [k, v] : row) obj[k] = to_json(v);
    arr.push_back(std::move(obj));
  }
  return arr;
}

json values_json(const std::vector<Value>& values) {
  json arr = json::array();
  for (const auto& v : values) arr.push_back(to_json(v));
  return arr;
}

json transform_json(const TransformDecl& t) {
  json j = json::object();
  j["type"] = std::string(to_string(t.kind()));
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FilterParams>) {
          j["expr"] = p.expr;
        } else if constexpr (std::is_same_v<T, FormulaParams>) {
          j["expr"] = p.expr;
          j["as"] = p.as;
        } else if constexpr (std::is_same_v<T, AggregateParams>) {
          j["groupby"] = p.groupby;
          json ops = json::array();
          json fields = json::array();
          for (std::size_t i = 0; i < p.ops.size(); ++i) {
            ops.push_back(std::string(to_string(p.ops[i])));
            fields.push_back(p.fields[i] ? json(*p.fields[i]) : json(nullptr));
          }
          j["ops"] = ops;
          j["fields"] = fields;
          j["as"] = p.as;
        } else if constexpr (std::is_same_v<T, SortParams>) {
          j["field"] = p.field;
          j["order"] = p.order == SortOrder::Ascending ? "ascending" : "descending";
        } else if constexpr (std::is_same_v<T, StackParams>) {
          j["groupby"] = p.groupby;
          j["field"] = p.field;
          if (p.sort_field) j["sortField"] = *p.sort_field;
          j["as"] = json::array({p.as_start, p.as_end});
        } else if constexpr (std::is_same_v<T, PieParams>) {
          j["field"] = p.field;
          j["startAngle"] = num(p.start_angle);
        } else if constexpr (std::is_same_v<T, BinParams>) {
          j["field"] = p.field;
          j["extent"] = p.extent ? json::array({num(p.extent->first), num(p.extent->second)}) : json("auto");
          j["maxbins"] = p.maxbins;
        } else if constexpr (std::is_same_v<T, HierarchyParams>) {
          j["key"] = p.key;
          j["parentKey"] = p.parent_key;
        } else if constexpr (std::is_same_v<T, TreeLayoutParams>) {
          j["method"] = p.method == TreeMethod::Tidy ? "tidy" : "cluster";
          j["size"] = json::array({num(p.width), num(p.height)});
          j["levelGap"] = num(p.level_gap);
          j["leafStep"] = num(p.leaf_step);
          j["key"] = p.key;
          j["parentKey"] = p.parent_key;
        } else if constexpr (std::is_same_v<T, TreemapParams>) {
          j["field"] = p.field;
          j["size"] = json::array({num(p.width), num(p.height)});
          j["method"] = "slice-dice";
          j["key"] = p.key;
          j["parentKey"] = p.parent_key;
        }
      },
      t.params);
  return j;
}

json dataset_json(const DatasetDecl& d) {
  json j = json::object();
  j["name"] = d.name;
  j["values"] = records_json(d.values);
  if (d.fields) j["fields"] = *d.fields;
  if (!d.parse.empty()) j["parse"] = d.parse;
  json transforms = json::array();
  for (const auto& t : d.transforms) transforms.push_back(transform_json(t));
  j["transform"] = transforms;
  return j;
}

json scale_json(const ScaleDecl& s) {
  json j = json::object();
  j["name"] = s.name;
  j["type"] = std::string(to_string(s.kind));
  if (const auto* list = std::get_if<std::vector<Value>>(&s.domain)) {
    j["domain"] = values_json(*list);
  } else {
    const auto& ref = std::get<DataRef>(s.domain);
    j["domain"] = json{{"data", ref.dataset}, {"fields", ref.fields}};
  }
  json range = json::array();
  for (double r : s.range) range.push_back(num(r));
  j["range"] = range;
  j["paddingInner"] = num(s.padding_inner);
  j["paddingOuter"] = num(s.padding_outer);
  j["zero"] = s.zero;
  j["extend"] = s.extend == ScaleExtend::Grow ? "grow" : "refit";
  return j;
}

json mark_json(const MarkDecl& m) {
  json j = json::object();
  j["type"] = std::string(to_string(m.kind));
  j["from"] = m.from;
  json enc = json::object();
  for (const auto& [name, c] : m.encode) {
    json cj = json::object();
    if (c.scale) cj["scale"] = *c.scale;
    if (c.field) cj["field"] = *c.field;
    if (c.value) cj["value"] = to_json(*c.value);
    if (c.band) cj["band"] = num(*c.band);
    if (c.offset != 0) cj["offset"] = num(c.offset);
    enc[name] = cj;
  }
  j["encode"] = enc;
  return j;
}

json placeholder_json(const PlaceholderSpec& p) {
  json j = json::object();
  j["count"] = p.count;
  j["seed"] = p.seed;
  json fields = json::array();
  for (const auto& f : p.fields) {
    json fj = json::object();
    fj["name"] = f.name;
    fj["kind"] = std::string(to_string(f.kind));
    if (f.pattern) fj["pattern"] = *f.pattern;
    if (f.range) fj["range"] = json::array({num(f.range->first), num(f.range->second)});
    if (f.span) fj["span"] = json::array({f.span->start, f.span->end, num(f.span->step_seconds)});
    if (!f.options.empty()) fj["options"] = values_json(f.options);
    fields.push_back(std::move(fj));
  }
  j["fields"] = fields;
  return j;
}

json ar_json(const ArBlock& ar) {
  json j = json::object();
  j["mode"] = std::string(to_string(ar.mode));
  json appends = json::array();
  for (const auto& a : ar.appends) {
    json aj = json::object();
    aj["dataset"] = a.dataset;
    if (const auto* rows = std::get_if<std::vector<Record>>(&a.source)) {
      aj["values"] = records_json(*rows);
    } else {
      aj["placeholder"] = placeholder_json(std::get<PlaceholderSpec>(a.source));
    }
    appends.push_back(std::move(aj));
  }
  j["appends"] = appends;
  if (ar.nested) j["nested"] = spec_to_json(*ar.nested);
  json pl = json::object();
  pl["direction"] = std::string(to_string(ar.placement.direction));
  pl["dx"] = num(ar.placement.dx);
  pl["dy"] = num(ar.placement.dy);
  pl["gap"] = num(ar.placement.gap);
  if (ar.placement.width_hint) pl["widthHint"] = num(*ar.placement.width_hint);
  if (ar.placement.height_hint) pl["heightHint"] = num(*ar.placement.height_hint);
  j["placement"] = pl;
  if (ar.anchor) j["anchor"] = rect_json(*ar.anchor);
  return j;
}

}  // namespace

json spec_to_json(const Spec& spec) {
  json j = json::object();
  j["width"] = spec.width;
  j["height"] = spec.height;
  json data = json::array();
  for (const auto& d : spec.datasets) data.push_back(dataset_json(d));
  j["data"] = data;
  json scales = json::array();
  for (const auto& s : spec.scales) scales.push_back(scale_json(s));
  j["scales"] = scales;
  json marks = json::array();
  for (const auto& m : spec.marks) marks.push_back(mark_json(m));
  j["marks"] = marks;
  json prot = json::array();
  for (const auto& r : spec.protected_regions) prot.push_back(rect_json(r));
  j["protected"] = prot;
  if (spec.ar) j["ar"] = ar_json(*spec.ar);
  return j;
}

std::string canonicalize(const Spec& spec) { return spec_to_json(spec).dump(); }

}  // namespace papar
