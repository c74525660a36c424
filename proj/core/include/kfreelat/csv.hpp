#pragma once

#include <cstdio>
#include <string>

namespace kfreelat {

// Numbers in CSV output carry 12 significant digits, enough to reproduce
// every reported tolerance without drowning diffs in noise.
inline std::string csv_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

// RFC 4180 quoting: fields with commas, quotes, or newlines get wrapped.
inline std::string csv_field(const std::string& s) {
  bool needs_quote = s.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quote) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace kfreelat
