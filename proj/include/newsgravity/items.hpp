#ifndef NEWSGRAVITY_ITEMS_HPP
#define NEWSGRAVITY_ITEMS_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "newsgravity/dates.hpp"

namespace newsgravity {

/// One dated story from one media outlet with its set of mentioned countries.
struct NewsItem {
  std::string media_code;
  CivilDate published_date;            // UTC calendar date
  std::vector<std::string> countries;  // deduplicated, sorted
};

/// Equal split of the item's unit mass over its k countries.
/// Throws EmptyCountrySetError when the country set is empty.
std::vector<std::pair<std::string, double>> allocate_item(const NewsItem& item);

/// Streaming reader over an items file.
class ItemReader {
public:
  virtual ~ItemReader() = default;

  /// Reads the next record. Returns false at end of input. A record that
  /// cannot be parsed sets ok=false and is returned so callers can count it.
  virtual bool next(NewsItem& item, bool& ok) = 0;
};

enum class ItemFormat { Auto, Csv, Jsonl };

/// Opens a JSONL or CSV items file. Format is inferred from the extension
/// when Auto. Throws ParseError when the file cannot be opened.
std::unique_ptr<ItemReader> open_items_file(const std::string& path,
                                            ItemFormat format = ItemFormat::Auto);

}  // namespace newsgravity

#endif
