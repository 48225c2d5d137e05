#include "papar/value.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "papar/error.hpp"
#include "papar/iso_time.hpp"

namespace papar {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownField: return "UnknownField";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::ModeConflict: return "ModeConflict";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::HeterogeneousRows: return "HeterogeneousRows";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::CyclicHierarchy: return "CyclicHierarchy";
    case ErrorCode::DuplicateNodeId: return "DuplicateNodeId";
    case ErrorCode::UnknownParent: return "UnknownParent";
    case ErrorCode::ExprSyntax: return "ExprSyntax";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::NonNumericDomain: return "NonNumericDomain";
    case ErrorCode::ChannelScaleMismatch: return "ChannelScaleMismatch";
    case ErrorCode::MissingScale: return "MissingScale";
    case ErrorCode::MissingDataset: return "MissingDataset";
    case ErrorCode::ModeShapeConflict: return "ModeShapeConflict";
    case ErrorCode::AppendSchemaMismatch: return "AppendSchemaMismatch";
    case ErrorCode::NoArBlock: return "NoArBlock";
    case ErrorCode::PipelineShapeMismatch: return "PipelineShapeMismatch";
  }
  return "Unknown";
}

std::optional<double> Value::as_number() const {
  if (is_number()) return number();
  if (is_timestamp()) return timestamp().seconds;
  return std::nullopt;
}

bool approx_equal(double a, double b) {
  if (a == b) return true;
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= std::max(1e-12, 1e-9 * scale);
}

bool approx_equal(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) return approx_equal(a.number(), b.number());
  if (a.is_timestamp() && b.is_timestamp()) {
    return approx_equal(a.timestamp().seconds, b.timestamp().seconds);
  }
  return a == b;
}

namespace {

int type_rank(const Value& v) {
  if (v.is_null()) return 0;
  if (v.is_bool()) return 1;
  if (v.is_numeric()) return 2;
  return 3;
}

}  // namespace

int compare_values(const Value& a, const Value& b) {
  const int ra = type_rank(a);
  const int rb = type_rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (ra) {
    case 0: return 0;
    case 1: return static_cast<int>(a.boolean()) - static_cast<int>(b.boolean());
    case 2: {
      const double x = *a.as_number();
      const double y = *b.as_number();
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    default: return a.string().compare(b.string()) < 0 ? -1 : (a.string() == b.string() ? 0 : 1);
  }
}

std::string format_number(double v) {
  if (v == 0) return "0";
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_display(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Null>) {
          return "null";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, Timestamp>) {
          return format_iso8601(x.seconds);
        } else {
          return x;
        }
      },
      v.storage());
}

nlohmann::json to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> nlohmann::json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Null>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (std::isfinite(x) && std::trunc(x) == x && std::fabs(x) < 9007199254740992.0) {
            return static_cast<std::int64_t>(x);
          }
          return x;
        } else if constexpr (std::is_same_v<T, Timestamp>) {
          return format_iso8601(x.seconds);
        } else {
          return x;
        }
      },
      v.storage());
}

std::optional<Value> value_from_json(const nlohmann::json& j) {
  if (j.is_null()) return Value{};
  if (j.is_boolean()) return Value{j.get<bool>()};
  if (j.is_number()) return Value{j.get<double>()};
  if (j.is_string()) return Value{j.get<std::string>()};
  return std::nullopt;
}

}  // namespace papar
