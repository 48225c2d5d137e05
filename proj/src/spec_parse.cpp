#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "papar/error.hpp"
#include "papar/spec.hpp"

namespace papar {

using nlohmann::json;

std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::Filter: return "filter";
    case TransformKind::Formula: return "formula";
    case TransformKind::Aggregate: return "aggregate";
    case TransformKind::Sort: return "sort";
    case TransformKind::Stack: return "stack";
    case TransformKind::Pie: return "pie";
    case TransformKind::Bin: return "bin";
    case TransformKind::Hierarchy: return "hierarchy";
    case TransformKind::TreeLayout: return "treelayout";
    case TransformKind::Treemap: return "treemap";
  }
  return "?";
}

std::optional<TransformKind> transform_kind_from(std::string_view name) {
  for (auto k : kAllTransformKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(AggregateOp op) {
  switch (op) {
    case AggregateOp::Sum: return "sum";
    case AggregateOp::Count: return "count";
    case AggregateOp::Mean: return "mean";
    case AggregateOp::Min: return "min";
    case AggregateOp::Max: return "max";
  }
  return "?";
}

std::string_view to_string(ScaleKind kind) {
  switch (kind) {
    case ScaleKind::Linear: return "linear";
    case ScaleKind::Band: return "band";
    case ScaleKind::Point: return "point";
    case ScaleKind::Ordinal: return "ordinal";
  }
  return "?";
}

std::string_view to_string(MarkKind kind) {
  switch (kind) {
    case MarkKind::Rect: return "rect";
    case MarkKind::Symbol: return "symbol";
    case MarkKind::Line: return "line";
    case MarkKind::Arc: return "arc";
    case MarkKind::Path: return "path";
    case MarkKind::Text: return "text";
  }
  return "?";
}

std::string_view to_string(ArMode mode) {
  switch (mode) {
    case ArMode::Extend: return "extend";
    case ArMode::Composite: return "composite";
    case ArMode::SmallMultiple: return "smallMultiple";
    case ArMode::MultipleView: return "multipleView";
  }
  return "?";
}

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::Categorical: return "categorical";
    case FieldKind::Quantitative: return "quantitative";
    case FieldKind::Temporal: return "temporal";
  }
  return "?";
}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::Right: return "right";
    case Direction::Left: return "left";
    case Direction::Top: return "top";
    case Direction::Bottom: return "bottom";
    case Direction::Overlay: return "overlay";
  }
  return "?";
}

const std::vector<std::string>& mark_channels(MarkKind kind) {
  static const std::vector<std::string> rect{"x", "x2", "width", "y", "y2", "height", "fill"};
  static const std::vector<std::string> symbol{"x", "y", "size", "fill"};
  static const std::vector<std::string> line{"x", "y", "x2", "y2", "stroke"};
  static const std::vector<std::string> arc{"x",          "y",        "innerRadius", "outerRadius",
                                            "startAngle", "endAngle", "fill"};
  static const std::vector<std::string> text{"x", "y", "width", "height", "text", "fill"};
  switch (kind) {
    case MarkKind::Rect: return rect;
    case MarkKind::Symbol: return symbol;
    case MarkKind::Line: return line;
    case MarkKind::Arc: return arc;
    case MarkKind::Path: return line;
    case MarkKind::Text: return text;
  }
  return rect;
}

const DatasetDecl* Spec::find_dataset(std::string_view name) const {
  for (const auto& d : datasets) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

const ScaleDecl* Spec::find_scale(std::string_view name) const {
  for (const auto& s : scales) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

namespace {

[[noreturn]] void type_mismatch(const std::string& path, std::string_view expected) {
  throw Error(ErrorCode::TypeMismatch, "expected " + std::string(expected) + " at " + path, path);
}

// Tracks which keys of an object were consumed so leftovers can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) type_mismatch(path_.empty() ? "$" : path_, "object");
  }

  std::string child(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* opt(std::string_view key) {
    seen_.insert(std::string(key));
    auto it = j_.find(std::string(key));
    return it == j_.end() ? nullptr : &*it;
  }

  const json& req(std::string_view key) {
    const json* v = opt(key);
    if (v == nullptr) {
      throw Error(ErrorCode::TypeMismatch, "missing required field " + child(key), child(key));
    }
    return *v;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw Error(ErrorCode::UnknownField, "unknown field " + child(it.key()), child(it.key()));
      }
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) type_mismatch(path, "string");
  return j.get<std::string>();
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) type_mismatch(path, "number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !(j.is_number_float() && std::trunc(j.get<double>()) == j.get<double>())) {
    type_mismatch(path, "integer");
  }
  const double v = j.get<double>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) type_mismatch(path, "integer");
  return static_cast<int>(v);
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) type_mismatch(path, "boolean");
  return j.get<bool>();
}

const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) type_mismatch(path, "array");
  return j;
}

std::vector<std::string> string_list(const json& j, const std::string& path) {
  std::vector<std::string> out;
  const auto& arr = as_array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(as_string(arr[i], index_path(path, i)));
  return out;
}

std::vector<double> number_list(const json& j, const std::string& path) {
  std::vector<double> out;
  const auto& arr = as_array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(as_number(arr[i], index_path(path, i)));
  return out;
}

std::pair<double, double> number_pair(const json& j, const std::string& path) {
  auto v = number_list(j, path);
  if (v.size() != 2) type_mismatch(path, "[lo, hi]");
  return {v[0], v[1]};
}

Value scalar(const json& j, const std::string& path) {
  auto v = value_from_json(j);
  if (!v) type_mismatch(path, "scalar (null, boolean, number or string)");
  return *v;
}

std::vector<Value> scalar_list(const json& j, const std::string& path) {
  std::vector<Value> out;
  const auto& arr = as_array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(scalar(arr[i], index_path(path, i)));
  return out;
}

std::vector<Record> records(const json& j, const std::string& path) {
  std::vector<Record> out;
  const auto& arr = as_array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto p = index_path(path, i);
    if (!arr[i].is_object()) type_mismatch(p, "object");
    Record r;
    for (auto it = arr[i].begin(); it != arr[i].end(); ++it) r[it.key()] = scalar(*it, p + "." + it.key());
    out.push_back(std::move(r));
  }
  return out;
}

Rect parse_rect(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  Rect out;
  out.x = as_number(r.req("x"), r.child("x"));
  out.y = as_number(r.req("y"), r.child("y"));
  out.width = as_number(r.req("width"), r.child("width"));
  out.height = as_number(r.req("height"), r.child("height"));
  r.finish();
  return out;
}

template <typename Enum, std::size_t N>
Enum parse_enum(const json& j, const std::string& path, const std::pair<std::string_view, Enum> (&table)[N]) {
  const auto s = as_string(j, path);
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  std::string expected = "one of {";
  for (std::size_t i = 0; i < N; ++i) expected += (i ? ", " : "") + std::string(table[i].first);
  type_mismatch(path, expected + "}");
}

TransformDecl parse_transform(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  const auto type_path = r.child("type");
  const auto type = as_string(r.req("type"), type_path);
  const auto kind = transform_kind_from(type);
  if (!kind) {
    type_mismatch(type_path,
                  "transform type (filter, formula, aggregate, sort, stack, pie, bin, hierarchy, "
                  "treelayout, treemap)");
  }
  auto str = [&](std::string_view key) { return as_string(r.req(key), r.child(key)); };
  auto opt_str = [&](std::string_view key, std::string def) {
    const json* v = r.opt(key);
    return v ? as_string(*v, r.child(key)) : def;
  };
  auto opt_num = [&](std::string_view key, double def) {
    const json* v = r.opt(key);
    return v ? as_number(*v, r.child(key)) : def;
  };
  auto size_pair = [&]() {
    return number_pair(r.req("size"), r.child("size"));
  };

  TransformDecl out;
  switch (*kind) {
    case TransformKind::Filter: out.params = FilterParams{str("expr")}; break;
    case TransformKind::Formula: out.params = FormulaParams{str("expr"), str("as")}; break;
    case TransformKind::Aggregate: {
      AggregateParams p;
      if (const json* g = r.opt("groupby")) p.groupby = string_list(*g, r.child("groupby"));
      static constexpr std::pair<std::string_view, AggregateOp> ops[] = {{"sum", AggregateOp::Sum},
                                                                         {"count", AggregateOp::Count},
                                                                         {"mean", AggregateOp::Mean},
                                                                         {"min", AggregateOp::Min},
                                                                         {"max", AggregateOp::Max}};
      const auto& ops_json = as_array(r.req("ops"), r.child("ops"));
      for (std::size_t i = 0; i < ops_json.size(); ++i) {
        p.ops.push_back(parse_enum(ops_json[i], index_path(r.child("ops"), i), ops));
      }
      if (const json* f = r.opt("fields")) {
        const auto& arr = as_array(*f, r.child("fields"));
        for (std::size_t i = 0; i < arr.size(); ++i) {
          if (arr[i].is_null()) {
            p.fields.emplace_back(std::nullopt);
          } else {
            p.fields.emplace_back(as_string(arr[i], index_path(r.child("fields"), i)));
          }
        }
      }
      if (p.fields.size() < p.ops.size()) p.fields.resize(p.ops.size());
      if (p.fields.size() != p.ops.size()) type_mismatch(r.child("fields"), "one entry per op");
      if (const json* a = r.opt("as")) {
        p.as = string_list(*a, r.child("as"));
        if (p.as.size() != p.ops.size()) type_mismatch(r.child("as"), "one name per op");
      } else {
        p.as = aggregate_output_names(p);
      }
      out.params = std::move(p);
      break;
    }
    case TransformKind::Sort: {
      SortParams p;
      p.field = str("field");
      static constexpr std::pair<std::string_view, SortOrder> orders[] = {{"ascending", SortOrder::Ascending},
                                                                          {"descending", SortOrder::Descending}};
      if (const json* o = r.opt("order")) p.order = parse_enum(*o, r.child("order"), orders);
      out.params = p;
      break;
    }
    case TransformKind::Stack: {
      StackParams p;
      if (const json* g = r.opt("groupby")) p.groupby = string_list(*g, r.child("groupby"));
      p.field = str("field");
      if (const json* s = r.opt("sortField")) p.sort_field = as_string(*s, r.child("sortField"));
      if (const json* a = r.opt("as")) {
        auto names = string_list(*a, r.child("as"));
        if (names.size() != 2) type_mismatch(r.child("as"), "[start, end] names");
        p.as_start = names[0];
        p.as_end = names[1];
      }
      out.params = p;
      break;
    }
    case TransformKind::Pie: out.params = PieParams{str("field"), opt_num("startAngle", 0)}; break;
    case TransformKind::Bin: {
      BinParams p;
      p.field = str("field");
      if (const json* e = r.opt("extent")) {
        if (e->is_string()) {
          if (e->get<std::string>() != "auto") type_mismatch(r.child("extent"), "\"auto\" or [lo, hi]");
        } else {
          p.extent = number_pair(*e, r.child("extent"));
        }
      }
      if (const json* m = r.opt("maxbins")) p.maxbins = as_int(*m, r.child("maxbins"));
      out.params = p;
      break;
    }
    case TransformKind::Hierarchy:
      out.params = HierarchyParams{opt_str("key", "id"), opt_str("parentKey", "parent")};
      break;
    case TransformKind::TreeLayout: {
      TreeLayoutParams p;
      static constexpr std::pair<std::string_view, TreeMethod> methods[] = {{"tidy", TreeMethod::Tidy},
                                                                            {"cluster", TreeMethod::Cluster}};
      if (const json* m = r.opt("method")) p.method = parse_enum(*m, r.child("method"), methods);
      std::tie(p.width, p.height) = size_pair();
      p.level_gap = opt_num("levelGap", 40);
      p.leaf_step = opt_num("leafStep", 24);
      p.key = opt_str("key", "id");
      p.parent_key = opt_str("parentKey", "parent");
      out.params = p;
      break;
    }
    case TransformKind::Treemap: {
      TreemapParams p;
      p.field = str("field");
      std::tie(p.width, p.height) = size_pair();
      if (const json* m = r.opt("method")) {
        if (as_string(*m, r.child("method")) != "slice-dice") type_mismatch(r.child("method"), "\"slice-dice\"");
      }
      p.key = opt_str("key", "id");
      p.parent_key = opt_str("parentKey", "parent");
      out.params = p;
      break;
    }
  }
  r.finish();
  return out;
}

DatasetDecl parse_dataset(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  DatasetDecl d;
  d.name = as_string(r.req("name"), r.child("name"));
  if (const json* v = r.opt("values")) d.values = records(*v, r.child("values"));
  if (const json* f = r.opt("fields")) d.fields = string_list(*f, r.child("fields"));
  if (const json* p = r.opt("parse")) {
    ObjectReader pr(*p, r.child("parse"));
    for (auto it = p->begin(); it != p->end(); ++it) {
      const auto kind = as_string(*pr.opt(it.key()), pr.child(it.key()));
      if (kind != "date") type_mismatch(pr.child(it.key()), "\"date\"");
      d.parse[it.key()] = kind;
    }
  }
  if (const json* t = r.opt("transform")) {
    const auto& arr = as_array(*t, r.child("transform"));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      d.transforms.push_back(parse_transform(arr[i], index_path(r.child("transform"), i)));
    }
  }
  r.finish();
  return d;
}

ScaleDecl parse_scale(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  ScaleDecl s;
  s.name = as_string(r.req("name"), r.child("name"));
  static constexpr std::pair<std::string_view, ScaleKind> kinds[] = {{"linear", ScaleKind::Linear},
                                                                     {"band", ScaleKind::Band},
                                                                     {"point", ScaleKind::Point},
                                                                     {"ordinal", ScaleKind::Ordinal}};
  s.kind = parse_enum(r.req("type"), r.child("type"), kinds);
  const json& dom = r.req("domain");
  if (dom.is_array()) {
    s.domain = scalar_list(dom, r.child("domain"));
  } else {
    ObjectReader dr(dom, r.child("domain"));
    DataRef ref;
    ref.dataset = as_string(dr.req("data"), dr.child("data"));
    const json* field = dr.opt("field");
    const json* fields = dr.opt("fields");
    if (field && fields) type_mismatch(dr.child("field"), "either field or fields");
    if (field) {
      ref.fields.push_back(as_string(*field, dr.child("field")));
    } else if (fields) {
      ref.fields = string_list(*fields, dr.child("fields"));
    } else {
      type_mismatch(dr.child("field"), "field or fields");
    }
    dr.finish();
    s.domain = std::move(ref);
  }
  if (const json* rg = r.opt("range")) s.range = number_list(*rg, r.child("range"));
  if (const json* p = r.opt("paddingInner")) s.padding_inner = as_number(*p, r.child("paddingInner"));
  if (const json* p = r.opt("paddingOuter")) s.padding_outer = as_number(*p, r.child("paddingOuter"));
  if (const json* z = r.opt("zero")) s.zero = as_bool(*z, r.child("zero"));
  static constexpr std::pair<std::string_view, ScaleExtend> extends[] = {{"grow", ScaleExtend::Grow},
                                                                         {"refit", ScaleExtend::Refit}};
  if (const json* e = r.opt("extend")) s.extend = parse_enum(*e, r.child("extend"), extends);
  r.finish();
  return s;
}

ChannelRef parse_channel(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  ChannelRef c;
  if (const json* s = r.opt("scale")) c.scale = as_string(*s, r.child("scale"));
  if (const json* f = r.opt("field")) c.field = as_string(*f, r.child("field"));
  if (const json* v = r.opt("value")) c.value = scalar(*v, r.child("value"));
  if (const json* b = r.opt("band")) c.band = as_number(*b, r.child("band"));
  if (const json* o = r.opt("offset")) c.offset = as_number(*o, r.child("offset"));
  r.finish();
  return c;
}

MarkDecl parse_mark(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  MarkDecl m;
  static constexpr std::pair<std::string_view, MarkKind> kinds[] = {
      {"rect", MarkKind::Rect}, {"symbol", MarkKind::Symbol}, {"line", MarkKind::Line},
      {"arc", MarkKind::Arc},   {"path", MarkKind::Path},     {"text", MarkKind::Text}};
  m.kind = parse_enum(r.req("type"), r.child("type"), kinds);
  m.from = as_string(r.req("from"), r.child("from"));
  if (const json* e = r.opt("encode")) {
    ObjectReader er(*e, r.child("encode"));
    for (auto it = e->begin(); it != e->end(); ++it) {
      m.encode[it.key()] = parse_channel(*er.opt(it.key()), er.child(it.key()));
    }
  }
  r.finish();
  return m;
}

PlaceholderSpec parse_placeholder(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  PlaceholderSpec p;
  const json& count = r.req("count");
  if (!count.is_number_integer()) type_mismatch(r.child("count"), "integer");
  p.count = count.get<std::int64_t>();
  if (const json* s = r.opt("seed")) {
    if (!s->is_number_unsigned()) type_mismatch(r.child("seed"), "unsigned integer");
    p.seed = s->get<std::uint64_t>();
  }
  const auto& fields = as_array(r.req("fields"), r.child("fields"));
  for (std::size_t i = 0; i < fields.size(); ++i) {
    ObjectReader fr(fields[i], index_path(r.child("fields"), i));
    PlaceholderField f;
    f.name = as_string(fr.req("name"), fr.child("name"));
    static constexpr std::pair<std::string_view, FieldKind> kinds[] = {{"categorical", FieldKind::Categorical},
                                                                       {"quantitative", FieldKind::Quantitative},
                                                                       {"temporal", FieldKind::Temporal}};
    f.kind = parse_enum(fr.req("kind"), fr.child("kind"), kinds);
    if (const json* v = fr.opt("pattern")) f.pattern = as_string(*v, fr.child("pattern"));
    if (const json* v = fr.opt("range")) f.range = number_pair(*v, fr.child("range"));
    if (const json* v = fr.opt("span")) {
      const auto sp = fr.child("span");
      const auto& arr = as_array(*v, sp);
      if (arr.size() != 3) type_mismatch(sp, "[startISO, endISO, stepSeconds]");
      f.span = TemporalSpan{as_string(arr[0], index_path(sp, 0)), as_string(arr[1], index_path(sp, 1)),
                            as_number(arr[2], index_path(sp, 2))};
    }
    if (const json* v = fr.opt("options")) f.options = scalar_list(*v, fr.child("options"));
    fr.finish();
    p.fields.push_back(std::move(f));
  }
  r.finish();
  return p;
}

ArBlock parse_ar(const json& j, const std::string& path);

Spec parse_spec_object(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  Spec s;
  s.width = as_int(r.req("width"), r.child("width"));
  s.height = as_int(r.req("height"), r.child("height"));
  if (const json* d = r.opt("data")) {
    const auto& arr = as_array(*d, r.child("data"));
    for (std::size_t i = 0; i < arr.size(); ++i) s.datasets.push_back(parse_dataset(arr[i], index_path(r.child("data"), i)));
  }
  if (const json* sc = r.opt("scales")) {
    const auto& arr = as_array(*sc, r.child("scales"));
    for (std::size_t i = 0; i < arr.size(); ++i) s.scales.push_back(parse_scale(arr[i], index_path(r.child("scales"), i)));
  }
  if (const json* m = r.opt("marks")) {
    const auto& arr = as_array(*m, r.child("marks"));
    for (std::size_t i = 0; i < arr.size(); ++i) s.marks.push_back(parse_mark(arr[i], index_path(r.child("marks"), i)));
  }
  if (const json* p = r.opt("protected")) {
    const auto& arr = as_array(*p, r.child("protected"));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      s.protected_regions.push_back(parse_rect(arr[i], index_path(r.child("protected"), i)));
    }
  }
  if (const json* a = r.opt("ar")) s.ar = parse_ar(*a, r.child("ar"));
  r.finish();
  return s;
}

ArBlock parse_ar(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  ArBlock ar;
  static constexpr std::pair<std::string_view, ArMode> modes[] = {{"extend", ArMode::Extend},
                                                                  {"composite", ArMode::Composite},
                                                                  {"smallMultiple", ArMode::SmallMultiple},
                                                                  {"multipleView", ArMode::MultipleView}};
  ar.mode = parse_enum(r.req("mode"), r.child("mode"), modes);
  if (const json* a = r.opt("appends")) {
    const auto& arr = as_array(*a, r.child("appends"));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      ObjectReader ar_r(arr[i], index_path(r.child("appends"), i));
      AppendDecl decl;
      decl.dataset = as_string(ar_r.req("dataset"), ar_r.child("dataset"));
      const json* values = ar_r.opt("values");
      const json* placeholder = ar_r.opt("placeholder");
      if (values && placeholder) {
        throw Error(ErrorCode::ModeConflict, "append has both values and placeholder at " + ar_r.child("placeholder"),
                    ar_r.child("placeholder"));
      }
      if (placeholder) {
        decl.source = parse_placeholder(*placeholder, ar_r.child("placeholder"));
      } else if (values) {
        decl.source = records(*values, ar_r.child("values"));
      } else {
        type_mismatch(ar_r.child("values"), "values or placeholder");
      }
      ar_r.finish();
      ar.appends.push_back(std::move(decl));
    }
  }
  if (const json* n = r.opt("nested")) {
    if (ar.mode == ArMode::Extend) {
      throw Error(ErrorCode::ModeConflict, "mode extend does not accept a nested spec at " + r.child("nested"),
                  r.child("nested"));
    }
    ar.nested = parse_spec_object(*n, r.child("nested"));
  }
  if (const json* p = r.opt("placement")) {
    ObjectReader pr(*p, r.child("placement"));
    static constexpr std::pair<std::string_view, Direction> dirs[] = {{"right", Direction::Right},
                                                                      {"left", Direction::Left},
                                                                      {"top", Direction::Top},
                                                                      {"bottom", Direction::Bottom},
                                                                      {"overlay", Direction::Overlay}};
    if (const json* d = pr.opt("direction")) ar.placement.direction = parse_enum(*d, pr.child("direction"), dirs);
    if (const json* v = pr.opt("dx")) ar.placement.dx = as_number(*v, pr.child("dx"));
    if (const json* v = pr.opt("dy")) ar.placement.dy = as_number(*v, pr.child("dy"));
    if (const json* v = pr.opt("gap")) ar.placement.gap = as_number(*v, pr.child("gap"));
    if (const json* v = pr.opt("widthHint")) ar.placement.width_hint = as_number(*v, pr.child("widthHint"));
    if (const json* v = pr.opt("heightHint")) ar.placement.height_hint = as_number(*v, pr.child("heightHint"));
    pr.finish();
  }
  if (const json* a = r.opt("anchor")) ar.anchor = parse_rect(*a, r.child("anchor"));
  r.finish();
  return ar;
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::vector<std::string> aggregate_output_names(const AggregateParams& p) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < p.ops.size(); ++i) {
    if (i < p.as.size()) {
      names.push_back(p.as[i]);
    } else if (p.ops[i] == AggregateOp::Count && (i >= p.fields.size() || !p.fields[i])) {
      names.emplace_back("count");
    } else {
      const std::string field = i < p.fields.size() && p.fields[i] ? *p.fields[i] : "";
      names.push_back(std::string(to_string(p.ops[i])) + "_" + field);
    }
  }
  return names;
}

Spec spec_from_json(const json& doc) { return parse_spec_object(doc, ""); }

Spec parse_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto byte = e.byte > 0 ? e.byte - 1 : 0;
    const auto [line, col] = line_col(text, byte);
    Error err(ErrorCode::SyntaxError,
              "syntax error at line " + std::to_string(line) + ", column " + std::to_string(col));
    err.line = line;
    err.column = col;
    throw err;
  }
  return spec_from_json(doc);
}

}  // namespace papar
