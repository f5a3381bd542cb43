#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "geospec/errors.hpp"

namespace geospec::csv {

// RFC-4180 record reader. Handles quoted fields with embedded commas,
// doubled quotes, and embedded line breaks; accepts LF, CRLF, and bare CR
// record terminators. Blank lines are skipped.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Reads the next record into `fields`. Returns false at end of input.
  bool next(std::vector<std::string>& fields) {
    fields.clear();
    int c = in_.get();
    while (c == '\n' || c == '\r') {
      consume_newline(c);
      c = in_.get();
    }
    if (c == std::istream::traits_type::eof()) return false;
    record_line_ = line_;

    std::string field;
    bool in_quotes = false;
    bool was_quoted = false;
    for (;;) {
      if (c == std::istream::traits_type::eof()) {
        if (in_quotes) throw Error(errc::malformed_row, "unterminated quoted field", record_line_);
        fields.push_back(std::move(field));
        return true;
      }
      const char ch = static_cast<char>(c);
      if (in_quotes) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field += '"';
          } else {
            in_quotes = false;
          }
        } else {
          if (ch == '\n') ++line_;
          field += ch;
        }
      } else if (ch == ',') {
        fields.push_back(std::move(field));
        field.clear();
        was_quoted = false;
      } else if (ch == '\n' || ch == '\r') {
        consume_newline(c);
        fields.push_back(std::move(field));
        return true;
      } else if (ch == '"') {
        if (!field.empty() || was_quoted)
          throw Error(errc::malformed_row, "unexpected quote inside a field", line_);
        in_quotes = true;
        was_quoted = true;
      } else {
        if (was_quoted)
          throw Error(errc::malformed_row, "text after a closing quote", line_);
        field += ch;
      }
      c = in_.get();
    }
  }

  // 1-based line on which the most recent record started.
  std::size_t record_line() const { return record_line_; }

 private:
  void consume_newline(int c) {
    if (c == '\r' && in_.peek() == '\n') in_.get();
    ++line_;
  }

  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 1;
};

inline bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\r\n") != std::string::npos;
}

inline std::string quote(const std::string& field) {
  if (!needs_quoting(field)) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_record(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << quote(fields[i]);
  }
  out << '\n';
}

}  // namespace geospec::csv
