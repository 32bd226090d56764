#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace aisdet {

// Epoch milliseconds, UTC. All interval arithmetic is done in integer
// milliseconds so two-month spans never accumulate float drift.
using EpochMs = std::int64_t;

// Accepts ISO-8601 UTC with optional fractional seconds ("2024-11-01T00:00:00.000Z")
// or a plain integer epoch-ms string.
std::optional<EpochMs> parse_time_utc(std::string_view text);

// Canonical form: "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string format_time_utc(EpochMs t);

// Calendar UTC day index (days since 1970-01-01), floored for negative times.
inline std::int64_t utc_day(EpochMs t) {
  constexpr std::int64_t day_ms = 86'400'000;
  return t >= 0 ? t / day_ms : (t - (day_ms - 1)) / day_ms;
}

}  // namespace aisdet
