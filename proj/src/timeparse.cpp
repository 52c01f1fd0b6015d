/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#include "trajgp/timeparse.hpp"

#include <cstdio>
#include <cstdlib>

#include "trajgp/errors.hpp"

namespace trajgp {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian civil date (Hinnant's
// shift-epoch arithmetic; exact for all representable dates).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

int parse_fixed_int(const char* s, int len, const char* what) {
  int v = 0;
  for (int i = 0; i < len; ++i) {
    if (s[i] < '0' || s[i] > '9') {
      throw data_error(std::string("timestamp: malformed ") + what);
    }
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

ParsedStamp parse_iso8601(const std::string& s) {
  // YYYY-MM-DDTHH:MM:SS.mmm(Z|±HH:MM) -> 24 or 29 characters.
  if (s.size() < 24 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != 't') ||
      s[13] != ':' || s[16] != ':' || s[19] != '.') {
    throw data_error("timestamp: expected ISO-8601 with milliseconds, got '" + s + "'");
  }
  CivilTime c;
  c.year = parse_fixed_int(s.data(), 4, "year");
  c.month = parse_fixed_int(s.data() + 5, 2, "month");
  c.day = parse_fixed_int(s.data() + 8, 2, "day");
  c.hour = parse_fixed_int(s.data() + 11, 2, "hour");
  c.minute = parse_fixed_int(s.data() + 14, 2, "minute");
  c.second = parse_fixed_int(s.data() + 17, 2, "second");
  c.millisecond = parse_fixed_int(s.data() + 20, 3, "millisecond");
  if (c.month < 1 || c.month > 12 || c.day < 1 || c.day > 31 || c.hour > 23 ||
      c.minute > 59 || c.second > 60) {
    throw data_error("timestamp: out-of-range field in '" + s + "'");
  }
  int offset_min = 0;
  const char tail = s[23];
  if (tail == 'Z' || tail == 'z') {
    if (s.size() != 24) throw data_error("timestamp: trailing characters in '" + s + "'");
  } else if (tail == '+' || tail == '-') {
    if (s.size() != 29 || s[26] != ':') {
      throw data_error("timestamp: malformed UTC offset in '" + s + "'");
    }
    const int oh = parse_fixed_int(s.data() + 24, 2, "offset hour");
    const int om = parse_fixed_int(s.data() + 27, 2, "offset minute");
    offset_min = oh * 60 + om;
    if (tail == '-') offset_min = -offset_min;
    if (oh > 18 || om > 59) throw data_error("timestamp: out-of-range UTC offset");
  } else {
    throw data_error("timestamp: missing UTC offset in '" + s + "' (use Z or ±HH:MM)");
  }
  ParsedStamp out;
  out.offset_min = offset_min;
  out.epoch_ms = epoch_ms_from_civil(c, offset_min);
  return out;
}

std::int64_t epoch_ms_from_civil(const CivilTime& c, int offset_min) {
  const std::int64_t days = days_from_civil(c.year, c.month, c.day);
  std::int64_t ms = days * 86400000LL + c.hour * 3600000LL + c.minute * 60000LL +
                    c.second * 1000LL + c.millisecond;
  return ms - static_cast<std::int64_t>(offset_min) * 60000LL;
}

CivilTime civil_from_epoch_ms(std::int64_t epoch_ms, int offset_min) {
  std::int64_t local = epoch_ms + static_cast<std::int64_t>(offset_min) * 60000LL;
  std::int64_t days = local / 86400000LL;
  std::int64_t rem = local % 86400000LL;
  if (rem < 0) {
    rem += 86400000LL;
    days -= 1;
  }
  CivilTime c;
  civil_from_days(days, c.year, c.month, c.day);
  c.hour = static_cast<int>(rem / 3600000LL);
  rem %= 3600000LL;
  c.minute = static_cast<int>(rem / 60000LL);
  rem %= 60000LL;
  c.second = static_cast<int>(rem / 1000LL);
  c.millisecond = static_cast<int>(rem % 1000LL);
  return c;
}

std::string format_iso8601(std::int64_t epoch_ms, int offset_min) {
  const CivilTime c = civil_from_epoch_ms(epoch_ms, offset_min);
  char buf[40];
  if (offset_min == 0) {
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", c.year,
                  c.month, c.day, c.hour, c.minute, c.second, c.millisecond);
  } else {
    const int a = offset_min >= 0 ? offset_min : -offset_min;
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03d%c%02d:%02d",
                  c.year, c.month, c.day, c.hour, c.minute, c.second, c.millisecond,
                  offset_min >= 0 ? '+' : '-', a / 60, a % 60);
  }
  return buf;
}

double local_hour(std::int64_t epoch_ms, int offset_min) {
  std::int64_t local = epoch_ms + static_cast<std::int64_t>(offset_min) * 60000LL;
  std::int64_t rem = local % 86400000LL;
  if (rem < 0) rem += 86400000LL;
  return static_cast<double>(rem) / 3600000.0;
}

}  // namespace trajgp
