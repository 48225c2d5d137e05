#include "papar/scale.hpp"

#include <algorithm>
#include <cmath>

#include "papar/error.hpp"

namespace papar {

std::optional<std::size_t> ResolvedScale::index_of(const Value& v) const {
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (domain[i] == v) return i;
  }
  if (auto n = v.as_number()) {
    for (std::size_t i = 0; i < domain.size(); ++i) {
      if (auto d = domain[i].as_number(); d && *d == *n) return i;
    }
  }
  return std::nullopt;
}

double ResolvedScale::position(const Value& v) const {
  switch (kind) {
    case ScaleKind::Linear: {
      auto n = v.as_number();
      if (!n) {
        throw Error(ErrorCode::ChannelScaleMismatch,
                    "scale '" + name + "' is linear but got " + to_display(v), name);
      }
      return range_lo + (*n - domain_lo) * slope();
    }
    case ScaleKind::Band:
    case ScaleKind::Point: {
      auto i = index_of(v);
      if (!i) {
        throw Error(ErrorCode::ChannelScaleMismatch,
                    "value " + to_display(v) + " is not in the domain of scale '" + name + "'", name);
      }
      return range_start + padding_outer * step + static_cast<double>(*i) * step;
    }
    case ScaleKind::Ordinal: break;
  }
  throw Error(ErrorCode::ChannelScaleMismatch, "ordinal scale '" + name + "' has no positions", name);
}

std::string ResolvedScale::color(const Value& v) const {
  if (kind != ScaleKind::Ordinal) {
    throw Error(ErrorCode::ChannelScaleMismatch, "scale '" + name + "' does not produce colors", name);
  }
  auto i = index_of(v);
  if (!i) {
    throw Error(ErrorCode::ChannelScaleMismatch,
                "value " + to_display(v) + " is not in the domain of scale '" + name + "'", name);
  }
  const int idx = palette.empty() ? static_cast<int>(*i % kPalette.size()) : palette[*i % palette.size()];
  return std::string(kPalette[static_cast<std::size_t>(idx) % kPalette.size()]);
}

std::vector<Value> domain_values(const DataRef& ref, const TraceMap& traces) {
  auto it = traces.find(ref.dataset);
  if (it == traces.end()) {
    throw Error(ErrorCode::MissingDataset, "scale domain references unknown dataset '" + ref.dataset + "'", ref.dataset);
  }
  const DataTable& table = it->second.output();
  std::vector<std::size_t> cols;
  for (const auto& f : ref.fields) cols.push_back(table.require_column(f));
  std::vector<Value> out;
  for (const auto& row : table.rows) {
    for (auto c : cols) out.push_back(row.cells[c]);
  }
  return out;
}

namespace {

std::vector<Value> distinct(const std::vector<Value>& values) {
  std::vector<Value> out;
  for (const auto& v : values) {
    if (v.is_null()) continue;
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

void layout_band(ResolvedScale& s, double start, double end) {
  const double n = static_cast<double>(s.domain.size());
  const double span = end - start;
  const double denom = s.kind == ScaleKind::Band ? n - s.padding_inner + 2 * s.padding_outer
                                                 : n - 1 + 2 * s.padding_outer;
  s.range_start = start;
  s.range_end = end;
  if (denom > 0) {
    s.step = span / denom;
  } else {
    // Single point without padding: centre it.
    s.step = 0;
    s.range_start = start + span / 2;
  }
  s.bandwidth = s.kind == ScaleKind::Band ? std::fabs(s.step) * (1 - s.padding_inner) : 0.0;
}

void extend_band(ResolvedScale& s) {
  const double n = static_cast<double>(s.domain.size());
  const double units = s.kind == ScaleKind::Band ? n - s.padding_inner + 2 * s.padding_outer
                                                 : n - 1 + 2 * s.padding_outer;
  s.range_end = s.range_start + s.step * units;
}

}  // namespace

ResolvedScale resolve_scale(const ScaleDecl& decl, const TraceMap& traces, const ResolvedScale* base) {
  const bool grow = base != nullptr && decl.extend == ScaleExtend::Grow;
  ResolvedScale s;
  s.name = decl.name;
  s.kind = decl.kind;
  s.padding_inner = decl.kind == ScaleKind::Band ? decl.padding_inner : 0.0;
  s.padding_outer = decl.padding_outer;

  const auto* ref = std::get_if<DataRef>(&decl.domain);
  const auto* explicit_domain = std::get_if<std::vector<Value>>(&decl.domain);

  if (decl.kind == ScaleKind::Linear) {
    if (grow) return *base;
    if (explicit_domain) {
      if (explicit_domain->size() != 2 || !(*explicit_domain)[0].is_numeric() || !(*explicit_domain)[1].is_numeric()) {
        throw Error(ErrorCode::NonNumericDomain, "linear scale '" + decl.name + "' needs a numeric [lo, hi] domain",
                    decl.name);
      }
      s.domain_lo = *(*explicit_domain)[0].as_number();
      s.domain_hi = *(*explicit_domain)[1].as_number();
    } else {
      std::optional<double> lo, hi;
      for (const auto& v : domain_values(*ref, traces)) {
        if (v.is_null()) continue;
        auto n = v.as_number();
        if (!n) {
          throw Error(ErrorCode::NonNumericDomain,
                      "linear scale '" + decl.name + "' got non-numeric value " + to_display(v), decl.name);
        }
        lo = lo ? std::min(*lo, *n) : *n;
        hi = hi ? std::max(*hi, *n) : *n;
      }
      if (!lo) throw Error(ErrorCode::EmptyDomain, "scale '" + decl.name + "' has an empty domain", decl.name);
      if (decl.zero) {
        lo = std::min(*lo, 0.0);
        hi = std::max(*hi, 0.0);
      }
      s.domain_lo = *lo;
      s.domain_hi = *hi;
    }
    if (!(s.domain_lo < s.domain_hi)) s.domain_hi = s.domain_lo + 1;
    s.range_lo = decl.range.size() > 0 ? decl.range[0] : 0.0;
    s.range_hi = decl.range.size() > 1 ? decl.range[1] : 1.0;
    return s;
  }

  if (explicit_domain) {
    s.domain = *explicit_domain;
  } else {
    s.domain = distinct(domain_values(*ref, traces));
  }
  if (s.domain.empty()) throw Error(ErrorCode::EmptyDomain, "scale '" + decl.name + "' has an empty domain", decl.name);

  if (decl.kind == ScaleKind::Ordinal) {
    for (double idx : decl.range) s.palette.push_back(static_cast<int>(idx));
    return s;
  }

  if (grow) {
    s.step = base->step;
    s.bandwidth = base->bandwidth;
    s.padding_inner = base->padding_inner;
    s.padding_outer = base->padding_outer;
    s.range_start = base->range_start;
    extend_band(s);
    return s;
  }
  const double start = decl.range.size() > 0 ? decl.range[0] : 0.0;
  const double end = decl.range.size() > 1 ? decl.range[1] : 1.0;
  layout_band(s, start, end);
  return s;
}

ScaleMap resolve_scales(const Spec& spec, const TraceMap& traces, const ScaleMap* base) {
  ScaleMap out;
  for (const auto& decl : spec.scales) {
    const ResolvedScale* b = nullptr;
    if (base) {
      auto it = base->find(decl.name);
      if (it != base->end()) b = &it->second;
    }
    out.emplace(decl.name, resolve_scale(decl, traces, b));
  }
  return out;
}

}  // namespace papar
