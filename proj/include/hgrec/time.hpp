#pragma once

// UTC timestamps at one-second resolution plus the calendar-month arithmetic
// used by the monthly evaluation protocol.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>

#include "hgrec/error.hpp"

namespace hgrec {

using Timestamp = std::chrono::sys_seconds;

namespace detail {

inline bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  const char* first = s.data() + pos;
  const char* last = first + len;
  for (const char* p = first; p != last; ++p) {
    if (*p < '0' || *p > '9') return false;
  }
  return std::from_chars(first, last, out).ec == std::errc{};
}

}  // namespace detail

/// Parses an RFC 3339 date-time ("2020-06-30T12:00:00Z", optional fraction,
/// "Z" or "+hh:mm"/"-hh:mm" offset). Sub-second digits are truncated.
inline Timestamp parse_rfc3339(std::string_view text) {
  auto fail = [&]() -> DataError {
    return DataError("invalid RFC 3339 timestamp '" + std::string(text) + "'");
  };
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (text.size() < 20 || !detail::read_int(text, 0, 4, year) || text[4] != '-' ||
      !detail::read_int(text, 5, 2, month) || text[7] != '-' ||
      !detail::read_int(text, 8, 2, day) || (text[10] != 'T' && text[10] != 't' && text[10] != ' ') ||
      !detail::read_int(text, 11, 2, hour) || text[13] != ':' ||
      !detail::read_int(text, 14, 2, minute) || text[16] != ':' ||
      !detail::read_int(text, 17, 2, second)) {
    throw fail();
  }
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t digits_start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == digits_start) throw fail();
  }
  if (pos >= text.size()) throw fail();

  int offset_seconds = 0;
  const char zone = text[pos];
  if (zone == 'Z' || zone == 'z') {
    ++pos;
  } else if (zone == '+' || zone == '-') {
    int oh = 0, om = 0;
    if (!detail::read_int(text, pos + 1, 2, oh) || pos + 3 >= text.size() || text[pos + 3] != ':' ||
        !detail::read_int(text, pos + 4, 2, om) || oh > 23 || om > 59) {
      throw fail();
    }
    offset_seconds = (oh * 3600 + om * 60) * (zone == '+' ? 1 : -1);
    pos += 6;
  } else {
    throw fail();
  }
  if (pos != text.size()) throw fail();

  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  // Leap seconds (":60") are folded into the next second.
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 60) throw fail();
  return sys_days{ymd} + hours{hour} + minutes{minute} + seconds{second} - seconds{offset_seconds};
}

/// Formats as "YYYY-MM-DDThh:mm:ssZ".
inline std::string format_rfc3339(Timestamp t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

inline Timestamp from_epoch_seconds(std::int64_t s) { return Timestamp{std::chrono::seconds{s}}; }

inline std::int64_t to_epoch_seconds(Timestamp t) { return t.time_since_epoch().count(); }

/// Calendar month counter: year * 12 + (month - 1).
inline int absolute_month(Timestamp t) {
  using namespace std::chrono;
  const year_month_day ymd{floor<days>(t)};
  return static_cast<int>(ymd.year()) * 12 + static_cast<int>(static_cast<unsigned>(ymd.month())) - 1;
}

/// 00:00:00 UTC on the first day of the given absolute month.
inline Timestamp month_start(int abs_month) {
  using namespace std::chrono;
  const int y = abs_month >= 0 ? abs_month / 12 : -((-abs_month + 11) / 12);
  const int m = abs_month - y * 12;
  return Timestamp{sys_days{std::chrono::year{y} / std::chrono::month{static_cast<unsigned>(m + 1)} / 1}};
}

/// Seconds between two timestamps as a double.
inline double seconds_between(Timestamp from, Timestamp to) {
  return static_cast<double>((to - from).count());
}

}  // namespace hgrec
