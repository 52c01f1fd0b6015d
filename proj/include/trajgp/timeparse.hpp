/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#ifndef TRAJGP_TIMEPARSE_HPP_
#define TRAJGP_TIMEPARSE_HPP_

#include <cstdint>
#include <string>

namespace trajgp {

// Timestamps are ISO-8601 with milliseconds and an explicit UTC offset:
//   2017-05-01T07:00:00.000Z   or   2017-05-01T07:00:00.000-08:00
// Parsed into UTC epoch milliseconds plus the offset (needed to recover the
// local clock, which drives the hour-of-day regressor and the awake-time
// ingestion window).
struct ParsedStamp {
  std::int64_t epoch_ms = 0;  // UTC
  int offset_min = 0;         // local = UTC + offset
};

ParsedStamp parse_iso8601(const std::string& s);  // throws data_error
std::string format_iso8601(std::int64_t epoch_ms, int offset_min);

struct CivilTime {
  int year, month, day, hour, minute, second, millisecond;
};

CivilTime civil_from_epoch_ms(std::int64_t epoch_ms, int offset_min);  // local clock
std::int64_t epoch_ms_from_civil(const CivilTime& c, int offset_min);

// Local fractional hour of day in [0, 24).
double local_hour(std::int64_t epoch_ms, int offset_min);

}  // namespace trajgp

#endif  // TRAJGP_TIMEPARSE_HPP_
