#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace papar {

// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SS" and "YYYY-MM-DDTHH:MM:SSZ" (UTC).
std::optional<double> parse_iso8601(std::string_view text);

// "YYYY-MM-DDTHH:MM:SSZ"; fractional seconds are truncated.
std::string format_iso8601(double epoch_seconds);

}  // namespace papar
