#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

namespace papar {

struct Null {
  bool operator==(const Null&) const = default;
};

// Epoch seconds (UTC).
struct Timestamp {
  double seconds = 0;
  bool operator==(const Timestamp&) const = default;
};

// A cell value: null, number (IEEE double), string, boolean or timestamp.
class Value {
 public:
  using Storage = std::variant<Null, double, std::string, bool, Timestamp>;

  Value() = default;
  Value(Null) {}
  Value(double v) : v_(v) {}
  Value(int v) : v_(static_cast<double>(v)) {}
  Value(std::int64_t v) : v_(static_cast<double>(v)) {}
  Value(std::uint64_t v) : v_(static_cast<double>(v)) {}
  Value(bool v) : v_(v) {}
  Value(std::string v) : v_(std::move(v)) {}
  Value(const char* v) : v_(std::string(v)) {}
  Value(Timestamp v) : v_(v) {}

  bool is_null() const { return std::holds_alternative<Null>(v_); }
  bool is_number() const { return std::holds_alternative<double>(v_); }
  bool is_string() const { return std::holds_alternative<std::string>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_timestamp() const { return std::holds_alternative<Timestamp>(v_); }
  // Numbers and timestamps.
  bool is_numeric() const { return is_number() || is_timestamp(); }

  double number() const { return std::get<double>(v_); }
  const std::string& string() const { return std::get<std::string>(v_); }
  bool boolean() const { return std::get<bool>(v_); }
  Timestamp timestamp() const { return std::get<Timestamp>(v_); }

  // Numeric view of numbers and timestamps; nullopt otherwise.
  std::optional<double> as_number() const;

  const Storage& storage() const { return v_; }

  // Exact structural equality (used for grouping and spec round trips).
  bool operator==(const Value&) const = default;

 private:
  Storage v_;
};

// Relative 1e-9 tolerance, absolute 1e-12 near zero.
bool approx_equal(double a, double b);
// Structural equality with approx_equal on numbers and timestamps.
bool approx_equal(const Value& a, const Value& b);

// Total order: null < bool < numeric < string.
int compare_values(const Value& a, const Value& b);

// Shortest round-trip decimal form of a double ("300", "0.1", "1e-07").
std::string format_number(double v);

// Display form used in messages and mock output.
std::string to_display(const Value& v);

// JSON conversion. Timestamps serialize as ISO-8601 strings; integral doubles
// serialize as JSON integers so canonical output has no trailing ".0".
nlohmann::json to_json(const Value& v);
// Scalars only (null, bool, number, string); anything else returns nullopt.
std::optional<Value> value_from_json(const nlohmann::json& j);

// A row as written in a spec: field -> value, keys sorted.
using Record = std::map<std::string, Value>;

}  // namespace papar
