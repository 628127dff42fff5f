#ifndef RANGESYNTH_VALUE_HPP
#define RANGESYNTH_VALUE_HPP

#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <variant>

namespace rangesynth {

// Seconds elapsed since 1800-01-01 00:00:00 UTC, the fixed casting epoch.
struct DateTime {
  std::int64_t secs = 0;
  friend auto operator<=>(const DateTime&, const DateTime&) = default;
};

// A typed cell. monostate is null; null is distinct from empty text.
using Value = std::variant<std::monostate, std::string, std::int64_t, double, bool, DateTime>;

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }

namespace detail {

// days since 1970-01-01 for a civil date (Howard Hinnant's algorithm).
constexpr std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = static_cast<int>(yr + (m <= 2));
}

// 1800-01-01 relative to the unix epoch, in days.
inline constexpr std::int64_t kEpochDays1800 = days_from_civil(1800, 1, 1);

}  // namespace detail

// Accepts "YYYY-MM-DD" optionally followed by " HH:MM:SS" or "THH:MM:SS",
// with an optional trailing "Z".
inline std::optional<DateTime> parse_datetime(std::string_view s) {
  if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);
  auto num = [&](std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    auto res = std::from_chars(s.data() + pos, s.data() + pos + len, out);
    return res.ec == std::errc{} && res.ptr == s.data() + pos + len;
  };
  int y, mo, d;
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!num(0, 4, y) || !num(5, 2, mo) || !num(8, 2, d)) return std::nullopt;
  if (mo < 1 || mo > 12 || d < 1 || d > 31) return std::nullopt;
  int hh = 0, mm = 0, ss = 0;
  if (s.size() > 10) {
    if (s.size() != 19 || (s[10] != ' ' && s[10] != 'T') || s[13] != ':' || s[16] != ':')
      return std::nullopt;
    if (!num(11, 2, hh) || !num(14, 2, mm) || !num(17, 2, ss)) return std::nullopt;
    if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  }
  std::int64_t days = detail::days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
  return DateTime{(days - detail::kEpochDays1800) * 86400 + hh * 3600 + mm * 60 + ss};
}

inline std::string format_datetime(DateTime dt) {
  std::int64_t total = dt.secs;
  std::int64_t days = total >= 0 ? total / 86400 : (total - 86399) / 86400;
  std::int64_t sod = total - days * 86400;
  int y;
  unsigned mo, d;
  detail::civil_from_days(days + detail::kEpochDays1800, y, mo, d);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", y, mo, d,
                static_cast<long long>(sod / 3600), static_cast<long long>(sod / 60 % 60),
                static_cast<long long>(sod % 60));
  return buf;
}

// Total order used when sorting rows on a stitch column. Null sorts first;
// mixed-kind comparison falls back to variant index.
inline bool value_less(const Value& a, const Value& b) {
  if (a.index() != b.index()) return a.index() < b.index();
  return a < b;
}

inline std::string value_to_string(const Value& v) {
  struct Fmt {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const {
      char buf[32];
      auto res = std::to_chars(buf, buf + sizeof buf, d);
      return std::string(buf, res.ptr);
    }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(DateTime dt) const { return format_datetime(dt); }
  };
  return std::visit(Fmt{}, v);
}

}  // namespace rangesynth

#endif
