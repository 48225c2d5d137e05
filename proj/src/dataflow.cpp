#include "papar/dataflow.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include "papar/error.hpp"
#include "papar/expr.hpp"
#include "papar/iso_time.hpp"

namespace papar {

std::string_view to_string(SourceTag tag) { return tag == SourceTag::Base ? "base" : "augment"; }

std::optional<std::size_t> DataTable::column_index(std::string_view field) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == field) return i;
  }
  return std::nullopt;
}

std::size_t DataTable::require_column(std::string_view field) const {
  if (auto i = column_index(field)) return *i;
  throw Error(ErrorCode::MissingField, "missing field '" + std::string(field) + "' in '" + name + "'",
              std::string(field));
}

DataTable ingest(const DatasetDecl& decl, const std::vector<Record>& rows, SourceTag tag, std::uint64_t first_pid) {
  DataTable t;
  t.name = decl.name;
  t.columns = dataset_columns(decl);
  if (t.columns.empty() && !rows.empty()) {
    for (const auto& [k, v] : rows.front()) t.columns.push_back(k);
  }
  std::uint64_t pid = first_pid != 0 ? first_pid : (tag == SourceTag::Base ? 1 : kAugmentPidStart);
  t.rows.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& rec = rows[r];
    if (rec.size() != t.columns.size()) {
      throw Error(ErrorCode::HeterogeneousRows, "row " + std::to_string(r) + " of '" + decl.name + "' has different fields",
                  decl.name + "[" + std::to_string(r) + "]");
    }
    Row row{pid++, tag, {}};
    row.cells.reserve(t.columns.size());
    for (const auto& c : t.columns) {
      auto it = rec.find(c);
      if (it == rec.end()) {
        throw Error(ErrorCode::HeterogeneousRows, "row " + std::to_string(r) + " of '" + decl.name + "' lacks '" + c + "'",
                    decl.name + "[" + std::to_string(r) + "]");
      }
      Value v = it->second;
      auto parse = decl.parse.find(c);
      if (parse != decl.parse.end() && v.is_string()) {
        auto ts = parse_iso8601(v.string());
        if (!ts) throw Error(ErrorCode::TypeMismatch, "cannot parse '" + v.string() + "' as a date", c);
        v = Value{Timestamp{*ts}};
      }
      row.cells.push_back(std::move(v));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

DataTable concat(DataTable base, const DataTable& more) {
  if (base.columns != more.columns && !more.rows.empty()) {
    throw Error(ErrorCode::HeterogeneousRows, "cannot concatenate tables with different columns", base.name);
  }
  base.rows.insert(base.rows.end(), more.rows.begin(), more.rows.end());
  return base;
}

std::uint64_t group_pid(const std::vector<Value>& key) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& v : key) {
    const unsigned char tag = static_cast<unsigned char>(v.storage().index());
    mix(&tag, 1);
    if (auto n = v.as_number()) {
      double d = *n == 0 ? 0.0 : *n;
      mix(&d, sizeof d);
    } else if (v.is_string()) {
      const std::uint64_t len = v.string().size();
      mix(&len, sizeof len);
      mix(v.string().data(), v.string().size());
    } else if (v.is_bool()) {
      const unsigned char b = v.boolean() ? 1 : 0;
      mix(&b, 1);
    }
  }
  return h | kGroupPidBit;
}

double nice_bin_step(double span, int maxbins) {
  if (!(span > 0) || maxbins < 1) return 1;
  const double base = std::pow(10.0, std::floor(std::log10(span / maxbins)) - 1);
  for (int k = 0; k < 6; ++k) {
    for (double m : {1.0, 2.0, 5.0}) {
      const double step = m * base * std::pow(10.0, k);
      if (std::ceil(span / step - 1e-9) <= maxbins) return step;
    }
  }
  return span;
}

namespace {

double number_or_zero(const Value& v) {
  auto n = v.as_number();
  return n && std::isfinite(*n) ? *n : 0.0;
}

std::size_t ensure_column(DataTable& t, const std::string& name) {
  if (auto i = t.column_index(name)) return *i;
  t.columns.push_back(name);
  for (auto& r : t.rows) r.cells.emplace_back();
  return t.columns.size() - 1;
}

struct KeyLess {
  bool operator()(const std::vector<Value>& a, const std::vector<Value>& b) const {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
      if (int c = compare_values(a[i], b[i]); c != 0) return c < 0;
    }
    return a.size() < b.size();
  }
};

std::vector<Value> key_of(const Row& row, const std::vector<std::size_t>& idx) {
  std::vector<Value> key;
  key.reserve(idx.size());
  for (auto i : idx) key.push_back(row.cells[i]);
  return key;
}

std::vector<std::size_t> column_indices(const DataTable& t, const std::vector<std::string>& fields) {
  std::vector<std::size_t> out;
  for (const auto& f : fields) out.push_back(t.require_column(f));
  return out;
}

DataTable do_filter(const FilterParams& p, const DataTable& in) {
  Expr e = Expr::parse(p.expr);
  e.bind(in.columns);
  DataTable out{in.name, in.columns, {}};
  for (const auto& r : in.rows) {
    if (truthy(e.eval(r.cells))) out.rows.push_back(r);
  }
  return out;
}

DataTable do_formula(const FormulaParams& p, const DataTable& in) {
  Expr e = Expr::parse(p.expr);
  e.bind(in.columns);
  std::vector<Value> results;
  results.reserve(in.rows.size());
  for (const auto& r : in.rows) results.push_back(e.eval(r.cells));
  DataTable out = in;
  const auto col = ensure_column(out, p.as);
  for (std::size_t i = 0; i < out.rows.size(); ++i) out.rows[i].cells[col] = std::move(results[i]);
  return out;
}

DataTable do_aggregate(const AggregateParams& p, const DataTable& in) {
  const auto group_idx = column_indices(in, p.groupby);
  std::vector<std::optional<std::size_t>> field_idx;
  for (const auto& f : p.fields) field_idx.push_back(f ? std::optional(in.require_column(*f)) : std::nullopt);

  struct Group {
    std::vector<Value> key;
    std::vector<const Row*> rows;
  };
  std::vector<Group> groups;
  std::map<std::vector<Value>, std::size_t, KeyLess> index;
  for (const auto& r : in.rows) {
    auto key = key_of(r, group_idx);
    auto [it, inserted] = index.try_emplace(key, groups.size());
    if (inserted) groups.push_back(Group{std::move(key), {}});
    groups[it->second].rows.push_back(&r);
  }

  DataTable out;
  out.name = in.name;
  out.columns = p.groupby;
  const auto names = aggregate_output_names(p);
  for (const auto& n : names) out.columns.push_back(n);

  for (const auto& g : groups) {
    Row row;
    row.pid = group_pid(g.key);
    row.tag = std::all_of(g.rows.begin(), g.rows.end(), [](const Row* r) { return r->tag == SourceTag::Base; })
                  ? SourceTag::Base
                  : SourceTag::Augment;
    row.cells = g.key;
    for (std::size_t k = 0; k < p.ops.size(); ++k) {
      if (p.ops[k] == AggregateOp::Count) {
        row.cells.emplace_back(static_cast<double>(g.rows.size()));
        continue;
      }
      double sum = 0;
      std::size_t n = 0;
      std::optional<double> lo, hi;
      for (const Row* r : g.rows) {
        auto v = r->cells[*field_idx[k]].as_number();
        if (!v) continue;
        sum += *v;
        ++n;
        lo = lo ? std::min(*lo, *v) : *v;
        hi = hi ? std::max(*hi, *v) : *v;
      }
      switch (p.ops[k]) {
        case AggregateOp::Sum: row.cells.emplace_back(sum); break;
        case AggregateOp::Mean: row.cells.push_back(n ? Value{sum / static_cast<double>(n)} : Value{}); break;
        case AggregateOp::Min: row.cells.push_back(lo ? Value{*lo} : Value{}); break;
        case AggregateOp::Max: row.cells.push_back(hi ? Value{*hi} : Value{}); break;
        case AggregateOp::Count: break;
      }
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

DataTable do_sort(const SortParams& p, const DataTable& in) {
  const auto col = in.require_column(p.field);
  DataTable out = in;
  std::stable_sort(out.rows.begin(), out.rows.end(), [&](const Row& a, const Row& b) {
    const int c = compare_values(a.cells[col], b.cells[col]);
    return p.order == SortOrder::Ascending ? c < 0 : c > 0;
  });
  return out;
}

DataTable do_stack(const StackParams& p, const DataTable& in) {
  const auto group_idx = column_indices(in, p.groupby);
  const auto field = in.require_column(p.field);
  const std::optional<std::size_t> sort_col =
      p.sort_field ? std::optional(in.require_column(*p.sort_field)) : std::nullopt;

  std::map<std::vector<Value>, std::vector<std::size_t>, KeyLess> groups;
  for (std::size_t i = 0; i < in.rows.size(); ++i) groups[key_of(in.rows[i], group_idx)].push_back(i);

  DataTable out = in;
  const auto c0 = ensure_column(out, p.as_start);
  const auto c1 = ensure_column(out, p.as_end);
  for (auto& [key, members] : groups) {
    if (sort_col) {
      std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
        return compare_values(in.rows[a].cells[*sort_col], in.rows[b].cells[*sort_col]) < 0;
      });
    }
    double prefix = 0;
    for (auto i : members) {
      const double v = number_or_zero(in.rows[i].cells[field]);
      out.rows[i].cells[c0] = Value{prefix};
      out.rows[i].cells[c1] = Value{prefix + v};
      prefix += v;
    }
  }
  return out;
}

DataTable do_pie(const PieParams& p, const DataTable& in) {
  const auto field = in.require_column(p.field);
  double total = 0;
  for (const auto& r : in.rows) total += std::max(0.0, number_or_zero(r.cells[field]));
  DataTable out = in;
  const auto c0 = ensure_column(out, "startAngle");
  const auto c1 = ensure_column(out, "endAngle");
  double prefix = 0;
  for (auto& r : out.rows) {
    const double v = std::max(0.0, number_or_zero(r.cells[field]));
    const double a0 = total > 0 ? p.start_angle + 2 * std::numbers::pi * prefix / total : p.start_angle;
    prefix += v;
    const double a1 = total > 0 ? p.start_angle + 2 * std::numbers::pi * prefix / total : p.start_angle;
    r.cells[c0] = Value{a0};
    r.cells[c1] = Value{a1};
  }
  return out;
}

DataTable do_bin(const BinParams& p, const DataTable& in) {
  const auto field = in.require_column(p.field);
  std::optional<double> lo, hi;
  if (p.extent) {
    lo = p.extent->first;
    hi = p.extent->second;
  } else {
    for (const auto& r : in.rows) {
      if (auto v = r.cells[field].as_number(); v && std::isfinite(*v)) {
        lo = lo ? std::min(*lo, *v) : *v;
        hi = hi ? std::max(*hi, *v) : *v;
      }
    }
  }
  DataTable out = in;
  const auto c0 = ensure_column(out, "bin0");
  const auto c1 = ensure_column(out, "bin1");
  if (!lo) return out;
  const double span = *hi - *lo;
  const double step = nice_bin_step(span, p.maxbins);
  const double nbins = std::max(1.0, std::ceil(span / step - 1e-9));
  for (auto& r : out.rows) {
    auto v = r.cells[field].as_number();
    if (!v || !std::isfinite(*v)) {
      r.cells[c0] = Value{};
      r.cells[c1] = Value{};
      continue;
    }
    double idx = std::floor((*v - *lo) / step + 1e-9);
    if (idx > nbins - 1 && *v <= *hi) idx = nbins - 1;
    const double b0 = *lo + idx * step;
    r.cells[c0] = Value{b0};
    r.cells[c1] = Value{b0 + step};
  }
  return out;
}

// Parent/child structure over a table's rows, children kept in row order.
struct Tree {
  std::vector<std::optional<std::size_t>> parent;
  std::vector<std::vector<std::size_t>> children;
  std::vector<std::size_t> roots;
  std::vector<int> depth;
};

Tree build_tree(const DataTable& in, const std::string& key_field, const std::string& parent_field) {
  const auto key_col = in.require_column(key_field);
  const auto parent_col = in.require_column(parent_field);
  const std::size_t n = in.rows.size();
  std::map<std::vector<Value>, std::size_t, KeyLess> by_key;
  for (std::size_t i = 0; i < n; ++i) {
    const Value& k = in.rows[i].cells[key_col];
    if (!by_key.try_emplace({k}, i).second) {
      throw Error(ErrorCode::DuplicateNodeId, "duplicate node id " + to_display(k), to_display(k));
    }
  }
  Tree t;
  t.parent.resize(n);
  t.children.resize(n);
  t.depth.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const Value& pk = in.rows[i].cells[parent_col];
    if (pk.is_null()) {
      t.roots.push_back(i);
      continue;
    }
    auto it = by_key.find({pk});
    if (it == by_key.end()) {
      throw Error(ErrorCode::UnknownParent, "node " + to_display(in.rows[i].cells[key_col]) + " has unknown parent " +
                                                to_display(pk),
                  to_display(pk));
    }
    t.parent[i] = it->second;
    t.children[it->second].push_back(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    // Walk to the root; a walk longer than n nodes means a cycle.
    std::size_t steps = 0;
    std::optional<std::size_t> cur = i;
    while (cur && t.depth[*cur] < 0 && t.parent[*cur]) {
      cur = t.parent[*cur];
      if (++steps > n) {
        throw Error(ErrorCode::CyclicHierarchy, "cycle through node " + to_display(in.rows[i].cells[key_col]),
                    to_display(in.rows[i].cells[key_col]));
      }
    }
    // Fill depths along the path.
    std::vector<std::size_t> path;
    for (std::optional<std::size_t> c = i; c && t.depth[*c] < 0; c = t.parent[*c]) path.push_back(*c);
    int d = 0;
    if (!path.empty()) {
      const auto top = path.back();
      d = t.parent[top] ? t.depth[*t.parent[top]] + 1 : 0;
    }
    for (auto it = path.rbegin(); it != path.rend(); ++it) t.depth[*it] = d++;
  }
  return t;
}

DataTable do_hierarchy(const HierarchyParams& p, const DataTable& in) {
  const Tree tree = build_tree(in, p.key, p.parent_key);
  DataTable out = in;
  const auto c = ensure_column(out, "depth");
  for (std::size_t i = 0; i < out.rows.size(); ++i) out.rows[i].cells[c] = Value{static_cast<double>(tree.depth[i])};
  return out;
}

DataTable do_treelayout(const TreeLayoutParams& p, const DataTable& in) {
  in.require_column("depth");
  const Tree tree = build_tree(in, p.key, p.parent_key);
  const std::size_t n = in.rows.size();
  std::vector<double> x(n, 0), y(n, 0);
  double next_leaf = 0;
  // Iterative post-order so deep chains cannot overflow the stack.
  for (auto root : tree.roots) {
    std::vector<std::pair<std::size_t, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [node, expanded] = stack.back();
      stack.pop_back();
      const auto& kids = tree.children[node];
      if (kids.empty()) {
        x[node] = next_leaf++ * p.leaf_step;
      } else if (!expanded) {
        stack.emplace_back(node, true);
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, false);
      } else {
        double sum = 0;
        for (auto k : kids) sum += x[k];
        x[node] = sum / static_cast<double>(kids.size());
      }
    }
  }
  int max_depth = 0;
  for (int d : tree.depth) max_depth = std::max(max_depth, d);
  for (std::size_t i = 0; i < n; ++i) {
    if (p.method == TreeMethod::Tidy) {
      y[i] = tree.depth[i] * p.level_gap;
    } else {
      y[i] = max_depth > 0 ? static_cast<double>(tree.depth[i]) / max_depth * p.height : 0.0;
    }
  }
  DataTable out = in;
  const auto cx = ensure_column(out, "x");
  const auto cy = ensure_column(out, "y");
  const auto cpx = ensure_column(out, "px");
  const auto cpy = ensure_column(out, "py");
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t par = tree.parent[i].value_or(i);
    out.rows[i].cells[cx] = Value{x[i]};
    out.rows[i].cells[cy] = Value{y[i]};
    out.rows[i].cells[cpx] = Value{x[par]};
    out.rows[i].cells[cpy] = Value{y[par]};
  }
  return out;
}

DataTable do_treemap(const TreemapParams& p, const DataTable& in) {
  in.require_column("depth");
  const auto field = in.require_column(p.field);
  const Tree tree = build_tree(in, p.key, p.parent_key);
  const std::size_t n = in.rows.size();

  // Post-order sums: leaves contribute their own value, internal nodes the sum of children.
  std::vector<double> sum(n, 0);
  std::vector<std::size_t> order;
  for (auto root : tree.roots) {
    std::vector<std::size_t> stack{root};
    while (!stack.empty()) {
      auto node = stack.back();
      stack.pop_back();
      order.push_back(node);
      for (auto k : tree.children[node]) stack.push_back(k);
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto node = *it;
    if (tree.children[node].empty()) {
      sum[node] = std::max(0.0, number_or_zero(in.rows[node].cells[field]));
    } else {
      double s = 0;
      for (auto k : tree.children[node]) s += sum[k];
      sum[node] = s;
    }
  }

  std::vector<Rect> rect(n);
  // Partition `area` among `members` along x (horizontal) or y.
  auto partition = [&](const std::vector<std::size_t>& members, const Rect& area, bool horizontal) {
    double total = 0;
    for (auto m : members) total += sum[m];
    double offset = 0;
    for (auto m : members) {
      const double frac = total > 0 ? sum[m] / total : 0.0;
      if (horizontal) {
        rect[m] = Rect{area.x + offset * area.width, area.y, frac * area.width, area.height};
      } else {
        rect[m] = Rect{area.x, area.y + offset * area.height, area.width, frac * area.height};
      }
      offset += frac;
    }
  };
  partition(tree.roots, Rect{0, 0, p.width, p.height}, true);
  for (auto node : order) {
    if (!tree.children[node].empty()) partition(tree.children[node], rect[node], tree.depth[node] % 2 == 1);
  }

  DataTable out = in;
  const auto c0 = ensure_column(out, "x0");
  const auto c1 = ensure_column(out, "y0");
  const auto c2 = ensure_column(out, "x1");
  const auto c3 = ensure_column(out, "y1");
  for (std::size_t i = 0; i < n; ++i) {
    out.rows[i].cells[c0] = Value{rect[i].x};
    out.rows[i].cells[c1] = Value{rect[i].y};
    out.rows[i].cells[c2] = Value{rect[i].right()};
    out.rows[i].cells[c3] = Value{rect[i].bottom()};
  }
  return out;
}

}  // namespace

DataTable apply_transform(const TransformDecl& t, const DataTable& in) {
  return std::visit(
      [&](const auto& p) -> DataTable {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FilterParams>) return do_filter(p, in);
        else if constexpr (std::is_same_v<T, FormulaParams>) return do_formula(p, in);
        else if constexpr (std::is_same_v<T, AggregateParams>) return do_aggregate(p, in);
        else if constexpr (std::is_same_v<T, SortParams>) return do_sort(p, in);
        else if constexpr (std::is_same_v<T, StackParams>) return do_stack(p, in);
        else if constexpr (std::is_same_v<T, PieParams>) return do_pie(p, in);
        else if constexpr (std::is_same_v<T, BinParams>) return do_bin(p, in);
        else if constexpr (std::is_same_v<T, HierarchyParams>) return do_hierarchy(p, in);
        else if constexpr (std::is_same_v<T, TreeLayoutParams>) return do_treelayout(p, in);
        else return do_treemap(p, in);
      },
      t.params);
}

TraceMap run_pipeline(const Spec& spec, const std::map<std::string, DataTable>& tables) {
  TraceMap traces;
  for (const auto& decl : spec.datasets) {
    auto it = tables.find(decl.name);
    if (it == tables.end()) {
      throw Error(ErrorCode::MissingDataset, "no table for dataset '" + decl.name + "'", decl.name);
    }
    DataflowTrace trace{decl.name, it->second, {}};
    trace.stages.reserve(decl.transforms.size());
    for (std::size_t i = 0; i < decl.transforms.size(); ++i) {
      try {
        trace.stages.push_back(TraceStage{decl.transforms[i], apply_transform(decl.transforms[i], trace.output())});
      } catch (Error& e) {
        e.stage = i;
        e.dataset = decl.name;
        throw;
      }
    }
    traces.emplace(decl.name, std::move(trace));
  }
  return traces;
}

}  // namespace papar
