#include "newsgravity/items.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "newsgravity/csv.hpp"
#include "newsgravity/errors.hpp"
#include "newsgravity/log.hpp"

namespace newsgravity {

namespace {

void normalize_countries(std::vector<std::string>& countries) {
  std::sort(countries.begin(), countries.end());
  countries.erase(std::unique(countries.begin(), countries.end()),
                  countries.end());
}

class JsonlItemReader final : public ItemReader {
public:
  explicit JsonlItemReader(const std::string& path) : path_(path), in_(path) {
    if (!in_) throw ParseError("cannot open '" + path + "'");
  }

  bool next(NewsItem& item, bool& ok) override {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      ok = parse(line, item);
      return true;
    }
    return false;
  }

private:
  bool parse(const std::string& line, NewsItem& item) {
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object() ||
        !rec.contains("media_code") || !rec.contains("published_at") ||
        !rec.contains("countries") || !rec["countries"].is_array()) {
      NEWSGRAVITY_LOG_DEBUG("malformed record at ", path_, ":", line_);
      return false;
    }
    try {
      item.media_code = rec["media_code"].get<std::string>();
      item.published_date =
          parse_datetime_utc_date(rec["published_at"].get<std::string>());
      item.countries.clear();
      for (const auto& c : rec["countries"])
        item.countries.push_back(c.get<std::string>());
    } catch (const std::exception&) {
      NEWSGRAVITY_LOG_DEBUG("malformed record at ", path_, ":", line_);
      return false;
    }
    normalize_countries(item.countries);
    return true;
  }

  std::string path_;
  std::ifstream in_;
  std::size_t line_ = 0;
};

class CsvItemReader final : public ItemReader {
public:
  explicit CsvItemReader(const std::string& path)
      : reader_(path),
        media_col_(reader_.require_column("media_code")),
        date_col_(reader_.require_column("published_at")),
        countries_col_(reader_.require_column("countries")) {}

  bool next(NewsItem& item, bool& ok) override {
    std::vector<std::string> fields;
    if (!reader_.next(fields)) return false;
    ok = parse(fields, item);
    return true;
  }

private:
  bool parse(const std::vector<std::string>& fields, NewsItem& item) {
    const std::size_t needed =
        std::max({media_col_, date_col_, countries_col_}) + 1;
    if (fields.size() < needed) return false;
    try {
      item.media_code = fields[media_col_];
      item.published_date = parse_datetime_utc_date(fields[date_col_]);
    } catch (const ParseError&) {
      NEWSGRAVITY_LOG_DEBUG("malformed record at ", reader_.path(), ":",
                            reader_.line_number());
      return false;
    }
    item.countries.clear();
    const std::string& joined = fields[countries_col_];
    std::string code;
    for (char c : joined) {
      if (c == ';') {
        if (!code.empty()) item.countries.push_back(code);
        code.clear();
      } else if (c != ' ') {
        code += c;
      }
    }
    if (!code.empty()) item.countries.push_back(code);
    normalize_countries(item.countries);
    return true;
  }

  CsvReader reader_;
  std::size_t media_col_;
  std::size_t date_col_;
  std::size_t countries_col_;
};

}  // namespace

std::vector<std::pair<std::string, double>> allocate_item(const NewsItem& item) {
  if (item.countries.empty())
    throw EmptyCountrySetError("item from '" + item.media_code +
                               "' mentions no countries");
  const double weight = 1.0 / static_cast<double>(item.countries.size());
  std::vector<std::pair<std::string, double>> out;
  out.reserve(item.countries.size());
  for (const auto& c : item.countries) out.emplace_back(c, weight);
  return out;
}

std::unique_ptr<ItemReader> open_items_file(const std::string& path,
                                            ItemFormat format) {
  if (format == ItemFormat::Auto) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0)
      format = ItemFormat::Csv;
    else
      format = ItemFormat::Jsonl;
  }
  if (format == ItemFormat::Csv) return std::make_unique<CsvItemReader>(path);
  return std::make_unique<JsonlItemReader>(path);
}

}  // namespace newsgravity
