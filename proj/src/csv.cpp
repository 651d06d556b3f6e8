#include "newsgravity/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "newsgravity/errors.hpp"

namespace newsgravity {

std::vector<std::string> split_csv_line(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == sep) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

CsvReader::CsvReader(const std::string& path, char sep)
    : path_(path), sep_(sep), in_(path) {
  if (!in_) throw ParseError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in_, line)) throw ParseError("empty file '" + path + "'");
  // Strip a UTF-8 BOM if present.
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
    line.erase(0, 3);
  header_ = split_csv_line(line, sep_);
  line_number_ = 1;
}

std::optional<std::size_t> CsvReader::column(const std::string& name) const {
  auto it = std::find(header_.begin(), header_.end(), name);
  if (it == header_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header_.begin());
}

std::size_t CsvReader::require_column(const std::string& name) const {
  auto idx = column(name);
  if (!idx)
    throw ParseError("'" + path_ + "' is missing required column '" + name + "'");
  return *idx;
}

bool CsvReader::next(std::vector<std::string>& fields) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_number_;
    if (line.empty() || line == "\r") continue;
    fields = split_csv_line(line, sep_);
    return true;
  }
  return false;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
  if (!out_) throw Error("cannot write '" + path + "'");
}

std::string CsvWriter::quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << quote(fields[i]);
  }
  out_ << '\n';
}

double parse_double_field(const std::string& s, const std::string& context) {
  double v = 0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ParseError("invalid number '" + s + "' in " + context);
  return v;
}

long parse_long_field(const std::string& s, const std::string& context) {
  long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ParseError("invalid integer '" + s + "' in " + context);
  return v;
}

bool parse_bool_field(const std::string& s, const std::string& context) {
  std::string t;
  for (char c : s) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "1" || t == "true" || t == "yes") return true;
  if (t == "0" || t == "false" || t == "no" || t.empty()) return false;
  throw ParseError("invalid boolean '" + s + "' in " + context);
}

}  // namespace newsgravity
