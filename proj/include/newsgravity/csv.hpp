#ifndef NEWSGRAVITY_CSV_HPP
#define NEWSGRAVITY_CSV_HPP

#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace newsgravity {

/// Splits one CSV line. Handles double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(const std::string& line, char sep = ',');

/// Header-indexed CSV file reader.
class CsvReader {
public:
  /// Opens the file and reads the header row. Throws ParseError.
  explicit CsvReader(const std::string& path, char sep = ',');

  const std::vector<std::string>& header() const { return header_; }

  /// Column index by name, or nullopt.
  std::optional<std::size_t> column(const std::string& name) const;

  /// Column index by name; throws ParseError naming the file if absent.
  std::size_t require_column(const std::string& name) const;

  /// Reads the next record. Returns false at end of file.
  bool next(std::vector<std::string>& fields);

  std::size_t line_number() const { return line_number_; }
  const std::string& path() const { return path_; }

private:
  std::string path_;
  char sep_;
  std::ifstream in_;
  std::vector<std::string> header_;
  std::size_t line_number_ = 0;
};

/// CSV writer; numbers rendered with format_double (full precision).
class CsvWriter {
public:
  explicit CsvWriter(const std::string& path);
  void row(const std::vector<std::string>& fields);
  static std::string quote(const std::string& field);

private:
  std::ofstream out_;
};

double parse_double_field(const std::string& s, const std::string& context);
long parse_long_field(const std::string& s, const std::string& context);
bool parse_bool_field(const std::string& s, const std::string& context);

}  // namespace newsgravity

#endif
