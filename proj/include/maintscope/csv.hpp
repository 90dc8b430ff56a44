#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace maintscope::csv {

// RFC-4180 quoting; UTF-8, LF line endings. Output files are byte-compared
// in the determinism tests, so formatting must stay exact.

inline std::string quote(const std::string& field) {
  bool needs = field.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

// Fixed 6 decimal places for floating fields.
inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

inline void write_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << quote(fields[i]);
  }
  os << '\n';
}

// Reads one record, honoring quoted fields that may span lines.
// Returns false at end of input.
inline bool read_row(std::istream& is, std::vector<std::string>& fields) {
  fields.clear();
  int c = is.get();
  if (c == EOF) return false;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  while (true) {
    if (c == EOF) {
      fields.push_back(field);
      return true;
    }
    char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        int next = is.peek();
        if (next == '"') {
          field += '"';
          is.get();
        } else {
          in_quotes = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"' && field.empty() && !any) {
      in_quotes = true;
    } else if (ch == ',') {
      fields.push_back(field);
      field.clear();
      any = false;
      c = is.get();
      continue;
    } else if (ch == '\n') {
      fields.push_back(field);
      return true;
    } else if (ch == '\r') {
      // swallow; \r\n handled when \n arrives
    } else {
      field += ch;
      any = true;
    }
    c = is.get();
  }
}

}  // namespace maintscope::csv
