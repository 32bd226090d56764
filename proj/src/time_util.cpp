#include "aisdet/time_util.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace aisdet {

namespace {

// Howard Hinnant's civil-date algorithms; valid over the full int64 ms range.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

bool parse_uint(std::string_view s, std::size_t pos, std::size_t len, unsigned& out) {
  if (pos + len > s.size()) return false;
  unsigned v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    const char c = s[i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<unsigned>(c - '0');
  }
  out = v;
  return true;
}

}  // namespace

std::optional<EpochMs> parse_time_utc(std::string_view text) {
  if (text.empty()) return std::nullopt;

  // Integer epoch-ms form.
  const bool numeric = text.find_first_not_of("0123456789-") == std::string_view::npos;
  if (numeric) {
    EpochMs v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return v;
  }

  // YYYY-MM-DDTHH:MM:SS[.fff]Z
  if (text.size() < 20) return std::nullopt;
  unsigned year, month, day, hour, minute, second;
  if (!parse_uint(text, 0, 4, year) || text[4] != '-' ||
      !parse_uint(text, 5, 2, month) || text[7] != '-' ||
      !parse_uint(text, 8, 2, day) || (text[10] != 'T' && text[10] != ' ') ||
      !parse_uint(text, 11, 2, hour) || text[13] != ':' ||
      !parse_uint(text, 14, 2, minute) || text[16] != ':' ||
      !parse_uint(text, 17, 2, second)) {
    return std::nullopt;
  }
  std::size_t pos = 19;
  unsigned millis = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    unsigned scale = 100;
    std::size_t digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9' && digits < 3) {
      millis += static_cast<unsigned>(text[pos] - '0') * scale;
      scale /= 10;
      ++pos;
      ++digits;
    }
    if (digits == 0) return std::nullopt;
  }
  if (pos >= text.size() || text[pos] != 'Z' || pos + 1 != text.size()) return std::nullopt;
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60) {
    return std::nullopt;
  }

  const std::int64_t days = days_from_civil(static_cast<std::int64_t>(year), month, day);
  return ((days * 24 + hour) * 60 + minute) * 60'000 + second * 1000 + millis;
}

std::string format_time_utc(EpochMs t) {
  constexpr std::int64_t day_ms = 86'400'000;
  std::int64_t days = t >= 0 ? t / day_ms : (t - (day_ms - 1)) / day_ms;
  std::int64_t rem = t - days * day_ms;
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  const unsigned hour = static_cast<unsigned>(rem / 3'600'000);
  rem %= 3'600'000;
  const unsigned minute = static_cast<unsigned>(rem / 60'000);
  rem %= 60'000;
  const unsigned second = static_cast<unsigned>(rem / 1000);
  const unsigned millis = static_cast<unsigned>(rem % 1000);

  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%04lld-%02u-%02uT%02u:%02u:%02u.%03uZ",
                static_cast<long long>(y), m, d, hour, minute, second, millis);
  return std::string(buf.data());
}

}  // namespace aisdet
