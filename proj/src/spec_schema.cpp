#include <algorithm>
#include <cmath>
#include <set>

#include "papar/error.hpp"
#include "papar/expr.hpp"
#include "papar/iso_time.hpp"
#include "papar/spec.hpp"

namespace papar {

namespace {

void add_column(std::vector<std::string>& cols, const std::string& name) {
  if (std::find(cols.begin(), cols.end(), name) == cols.end()) cols.push_back(name);
}

bool has_column(const std::vector<std::string>& cols, const std::string& name) {
  return std::find(cols.begin(), cols.end(), name) != cols.end();
}

std::vector<std::string> required_fields(const TransformDecl& t) {
  std::vector<std::string> out;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FilterParams> || std::is_same_v<T, FormulaParams>) {
          try {
            out = Expr::parse(p.expr).fields();
          } catch (const Error&) {
          }
        } else if constexpr (std::is_same_v<T, AggregateParams>) {
          out = p.groupby;
          for (const auto& f : p.fields) {
            if (f) out.push_back(*f);
          }
        } else if constexpr (std::is_same_v<T, SortParams> || std::is_same_v<T, PieParams> ||
                             std::is_same_v<T, BinParams>) {
          out.push_back(p.field);
        } else if constexpr (std::is_same_v<T, StackParams>) {
          out = p.groupby;
          out.push_back(p.field);
          if (p.sort_field) out.push_back(*p.sort_field);
        } else if constexpr (std::is_same_v<T, HierarchyParams>) {
          out = {p.key, p.parent_key};
        } else if constexpr (std::is_same_v<T, TreeLayoutParams>) {
          out = {p.key, p.parent_key, "depth"};
        } else if constexpr (std::is_same_v<T, TreemapParams>) {
          out = {p.field, p.key, p.parent_key, "depth"};
        }
      },
      t.params);
  return out;
}

class SchemaChecker {
 public:
  explicit SchemaChecker(std::vector<SchemaIssue>& out) : out_(out) {}

  void check(const Spec& s, const std::string& prefix) {
    auto p = [&](const std::string& rest) { return prefix.empty() ? rest : prefix + "." + rest; };
    if (s.width <= 0 || s.height <= 0) issue("BadDimensions", p("width"), "width and height must be > 0");

    std::map<std::string, std::vector<std::string>> final_columns;
    std::set<std::string> names;
    for (std::size_t i = 0; i < s.datasets.size(); ++i) {
      const auto& d = s.datasets[i];
      const auto dp = p("data[" + std::to_string(i) + "]");
      if (!names.insert(d.name).second) issue("DuplicateDataset", dp + ".name", "duplicate dataset '" + d.name + "'");
      auto cols = dataset_columns(d);
      check_rows(d.values, cols, dp + ".values");
      for (std::size_t t = 0; t < d.transforms.size(); ++t) {
        const auto tp = dp + ".transform[" + std::to_string(t) + "]";
        check_transform(d.transforms[t], cols, tp);
        cols = transform_output_columns(d.transforms[t], cols);
      }
      final_columns[d.name] = cols;
    }

    std::set<std::string> scale_names;
    for (std::size_t i = 0; i < s.scales.size(); ++i) {
      const auto& sc = s.scales[i];
      const auto sp = p("scales[" + std::to_string(i) + "]");
      if (!scale_names.insert(sc.name).second) issue("DuplicateScale", sp + ".name", "duplicate scale '" + sc.name + "'");
      check_scale(sc, final_columns, sp);
    }

    for (std::size_t i = 0; i < s.marks.size(); ++i) {
      check_mark(s, s.marks[i], final_columns, p("marks[" + std::to_string(i) + "]"));
    }

    for (std::size_t i = 0; i < s.protected_regions.size(); ++i) {
      const auto& r = s.protected_regions[i];
      if (r.width < 0 || r.height < 0) {
        issue("BadRect", p("protected[" + std::to_string(i) + "]"), "rect width/height must be >= 0");
      }
    }

    if (s.ar) check_ar(s, *s.ar, p("ar"));
  }

 private:
  void issue(std::string code, std::string path, std::string message) {
    out_.push_back(SchemaIssue{std::move(code), std::move(path), std::move(message)});
  }

  void check_rows(const std::vector<Record>& rows, const std::vector<std::string>& cols, const std::string& path) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      bool same = rows[r].size() == cols.size();
      for (const auto& c : cols) same = same && rows[r].count(c);
      if (!same) {
        issue("HeterogeneousRows", path + "[" + std::to_string(r) + "]", "row fields differ from the dataset columns");
        return;
      }
    }
  }

  void check_transform(const TransformDecl& t, const std::vector<std::string>& cols, const std::string& path) {
    if (const auto* f = std::get_if<FilterParams>(&t.params)) check_expr(f->expr, path + ".expr");
    if (const auto* f = std::get_if<FormulaParams>(&t.params)) check_expr(f->expr, path + ".expr");
    for (const auto& field : required_fields(t)) {
      if (!has_column(cols, field)) issue("MissingField", path, "field '" + field + "' is not available here");
    }
    if (const auto* a = std::get_if<AggregateParams>(&t.params)) {
      if (a->ops.empty()) issue("BadParameter", path + ".ops", "aggregate needs at least one op");
      for (std::size_t i = 0; i < a->ops.size(); ++i) {
        if (a->ops[i] != AggregateOp::Count && !a->fields[i]) {
          issue("BadParameter", path + ".fields[" + std::to_string(i) + "]", "op needs a field");
        }
      }
    }
    if (const auto* b = std::get_if<BinParams>(&t.params)) {
      if (b->maxbins < 1) issue("BadParameter", path + ".maxbins", "maxbins must be >= 1");
      if (b->extent && !(b->extent->first < b->extent->second)) {
        issue("BadParameter", path + ".extent", "extent needs lo < hi");
      }
    }
    if (const auto* tl = std::get_if<TreeLayoutParams>(&t.params)) {
      if (tl->width < 0 || tl->height < 0 || tl->level_gap < 0 || tl->leaf_step <= 0) {
        issue("BadParameter", path, "treelayout size/levelGap must be >= 0 and leafStep > 0");
      }
    }
    if (const auto* tm = std::get_if<TreemapParams>(&t.params)) {
      if (tm->width < 0 || tm->height < 0) issue("BadParameter", path + ".size", "treemap size must be >= 0");
    }
  }

  void check_expr(const std::string& source, const std::string& path) {
    try {
      (void)Expr::parse(source);
    } catch (const Error& e) {
      issue("BadExpression", path, e.what());
    }
  }

  void check_scale(const ScaleDecl& sc, const std::map<std::string, std::vector<std::string>>& final_columns,
                   const std::string& path) {
    if (const auto* ref = std::get_if<DataRef>(&sc.domain)) {
      auto it = final_columns.find(ref->dataset);
      if (it == final_columns.end()) {
        issue("MissingDataset", path + ".domain.data", "unknown dataset '" + ref->dataset + "'");
      } else {
        if (ref->fields.empty()) issue("MissingField", path + ".domain", "domain needs a field");
        for (const auto& f : ref->fields) {
          if (!has_column(it->second, f)) issue("MissingField", path + ".domain", "field '" + f + "' not in dataset");
        }
      }
    } else {
      const auto& list = std::get<std::vector<Value>>(sc.domain);
      if (sc.kind == ScaleKind::Linear) {
        if (list.size() != 2 || !list[0].is_numeric() || !list[1].is_numeric() ||
            !(*list[0].as_number() < *list[1].as_number())) {
          issue("BadDomain", path + ".domain", "linear domain must be [lo, hi] with lo < hi");
        }
      } else {
        for (std::size_t i = 0; i < list.size(); ++i) {
          for (std::size_t j = 0; j < i; ++j) {
            if (list[i] == list[j]) {
              issue("BadDomain", path + ".domain", "domain values must be unique");
              i = list.size();
              break;
            }
          }
        }
      }
    }
    if (sc.kind == ScaleKind::Ordinal) {
      for (double idx : sc.range) {
        if (idx < 0 || idx >= 10 || std::trunc(idx) != idx) {
          issue("BadRange", path + ".range", "ordinal range entries are palette indices 0..9");
          break;
        }
      }
    } else if (sc.range.size() != 2) {
      issue("BadRange", path + ".range", "range must be [lo, hi]");
    }
    if (sc.padding_inner < 0 || sc.padding_inner > 1 || sc.padding_outer < 0) {
      issue("BadRange", path, "paddings must satisfy 0 <= paddingInner <= 1, paddingOuter >= 0");
    }
  }

  void check_mark(const Spec& s, const MarkDecl& m, const std::map<std::string, std::vector<std::string>>& final_columns,
                  const std::string& path) {
    auto it = final_columns.find(m.from);
    if (it == final_columns.end()) {
      issue("MissingDataset", path + ".from", m.from);
      return;
    }
    const auto& allowed = mark_channels(m.kind);
    for (const auto& [name, c] : m.encode) {
      const auto cp = path + ".encode." + name;
      if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
        issue("UnknownChannel", cp, "channel '" + name + "' is not valid for " + std::string(to_string(m.kind)));
        continue;
      }
      const ScaleDecl* scale = nullptr;
      if (c.scale) {
        scale = s.find_scale(*c.scale);
        if (!scale) issue("MissingScale", cp + ".scale", "unknown scale '" + *c.scale + "'");
      }
      if (c.field && !has_column(it->second, *c.field)) {
        issue("MissingField", cp + ".field", "field '" + *c.field + "' not in dataset '" + m.from + "'");
      }
      const int forms = (c.field ? 1 : 0) + (c.value ? 1 : 0) + (c.band ? 1 : 0);
      if (forms != 1) issue("BadChannel", cp, "channel needs exactly one of field, value, band");
      if (c.band && (!scale || (scale->kind != ScaleKind::Band && scale->kind != ScaleKind::Point))) {
        issue("BadChannel", cp, "band channels need a band or point scale");
      }
    }
    auto has = [&](const char* ch) { return m.encode.count(ch) > 0; };
    std::vector<std::string> missing;
    auto need = [&](bool ok, const char* what) {
      if (!ok) missing.emplace_back(what);
    };
    switch (m.kind) {
      case MarkKind::Rect:
        need(has("x"), "x");
        need(has("x2") || has("width"), "x2|width");
        need(has("y"), "y");
        need(has("y2") || has("height"), "y2|height");
        break;
      case MarkKind::Symbol:
        need(has("x"), "x");
        need(has("y"), "y");
        break;
      case MarkKind::Line:
      case MarkKind::Path:
        for (const char* ch : {"x", "y", "x2", "y2"}) need(has(ch), ch);
        break;
      case MarkKind::Arc:
        for (const char* ch : {"x", "y", "outerRadius", "startAngle", "endAngle"}) need(has(ch), ch);
        break;
      case MarkKind::Text:
        for (const char* ch : {"x", "y", "width", "height", "text"}) need(has(ch), ch);
        break;
    }
    for (const auto& ch : missing) issue("MissingChannel", path + ".encode", "missing channel " + ch);
  }

  void check_placeholder(const PlaceholderSpec& ph, const std::string& path) {
    if (ph.count < 0) issue("BadCount", path + ".count", "count must be >= 0");
    for (std::size_t i = 0; i < ph.fields.size(); ++i) {
      const auto& f = ph.fields[i];
      const auto fp = path + ".fields[" + std::to_string(i) + "]";
      switch (f.kind) {
        case FieldKind::Categorical:
          if (f.pattern) {
            if (std::count(f.pattern->begin(), f.pattern->end(), '*') != 1) {
              issue("BadPattern", fp + ".pattern", "pattern must contain exactly one '*'");
            }
          } else if (f.options.empty()) {
            issue("BadPattern", fp + ".pattern", "categorical fields need a pattern or options");
          }
          break;
        case FieldKind::Quantitative:
          if (!f.range) {
            if (f.options.empty()) issue("BadRange", fp + ".range", "quantitative fields need a range or options");
          } else if (f.range->first > f.range->second) {
            issue("BadRange", fp + ".range", "range needs lo <= hi");
          }
          break;
        case FieldKind::Temporal:
          if (!f.span) {
            if (f.options.empty()) issue("BadSpan", fp + ".span", "temporal fields need a span or options");
          } else {
            const auto start = parse_iso8601(f.span->start);
            const auto end = parse_iso8601(f.span->end);
            if (!start || !end || *end < *start || !(f.span->step_seconds > 0)) {
              issue("BadSpan", fp + ".span", "span needs ISO start <= end and step > 0");
            }
          }
          break;
      }
    }
  }

  void check_ar(const Spec& s, const ArBlock& ar, const std::string& path) {
    switch (ar.mode) {
      case ArMode::Extend:
        if (ar.nested) issue("ModeConflict", path + ".nested", "extend does not take a nested spec");
        if (ar.appends.empty()) issue("EmptyAppends", path + ".appends", "extend needs at least one append");
        break;
      case ArMode::Composite:
      case ArMode::MultipleView:
        if (!ar.nested) issue("MissingNested", path + ".nested", std::string(to_string(ar.mode)) + " needs a nested spec");
        break;
      case ArMode::SmallMultiple:
        if (ar.nested) issue("ModeConflict", path + ".nested", "smallMultiple does not take a nested spec");
        if (ar.appends.empty()) issue("EmptyAppends", path + ".appends", "smallMultiple needs replacement datasets");
        break;
    }
    for (std::size_t i = 0; i < ar.appends.size(); ++i) {
      const auto& a = ar.appends[i];
      const auto ap = path + ".appends[" + std::to_string(i) + "]";
      const DatasetDecl* target = s.find_dataset(a.dataset);
      if (!target) issue("MissingDataset", ap + ".dataset", a.dataset);
      if (const auto* ph = std::get_if<PlaceholderSpec>(&a.source)) check_placeholder(*ph, ap + ".placeholder");
    }
    if (ar.placement.gap < 0) issue("BadPlacement", path + ".placement.gap", "gap must be >= 0");
    if (ar.anchor) {
      const Rect& b = *ar.anchor;
      if (b.width < 0 || b.height < 0 || b.x < 0 || b.y < 0 || b.right() > s.width || b.bottom() > s.height) {
        issue("AnchorOutOfBounds", path + ".anchor", "anchor box must lie inside the canvas");
      }
    }
    if (ar.nested) check(*ar.nested, path + ".nested");
  }

  std::vector<SchemaIssue>& out_;
};

}  // namespace

std::vector<std::string> dataset_columns(const DatasetDecl& decl) {
  if (decl.fields) return *decl.fields;
  std::vector<std::string> cols;
  if (!decl.values.empty()) {
    for (const auto& [k, v] : decl.values.front()) cols.push_back(k);
  }
  return cols;
}

std::vector<std::string> transform_output_columns(const TransformDecl& t, const std::vector<std::string>& input) {
  std::vector<std::string> cols = input;
  switch (t.kind()) {
    case TransformKind::Filter:
    case TransformKind::Sort: break;
    case TransformKind::Formula: add_column(cols, std::get<FormulaParams>(t.params).as); break;
    case TransformKind::Aggregate: {
      const auto& p = std::get<AggregateParams>(t.params);
      cols = p.groupby;
      for (const auto& n : aggregate_output_names(p)) add_column(cols, n);
      break;
    }
    case TransformKind::Stack: {
      const auto& p = std::get<StackParams>(t.params);
      add_column(cols, p.as_start);
      add_column(cols, p.as_end);
      break;
    }
    case TransformKind::Pie:
      add_column(cols, "startAngle");
      add_column(cols, "endAngle");
      break;
    case TransformKind::Bin:
      add_column(cols, "bin0");
      add_column(cols, "bin1");
      break;
    case TransformKind::Hierarchy: add_column(cols, "depth"); break;
    case TransformKind::TreeLayout:
      for (const char* c : {"x", "y", "px", "py"}) add_column(cols, c);
      break;
    case TransformKind::Treemap:
      for (const char* c : {"x0", "y0", "x1", "y1"}) add_column(cols, c);
      break;
  }
  return cols;
}

std::vector<SchemaIssue> validate_schema(const Spec& spec) {
  std::vector<SchemaIssue> issues;
  SchemaChecker(issues).check(spec, "");
  return issues;
}

Rect effective_anchor(const Spec& spec) {
  if (spec.ar && spec.ar->anchor) return *spec.ar->anchor;
  const double size = std::min({32.0, static_cast<double>(spec.width), static_cast<double>(spec.height)});
  return Rect{spec.width - size, spec.height - size, size, size};
}

}  // namespace papar
