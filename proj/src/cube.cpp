#include "newsgravity/cube.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "newsgravity/csv.hpp"
#include "newsgravity/errors.hpp"
#include "newsgravity/numerics.hpp"

namespace newsgravity {

namespace {

std::unordered_map<std::string, int> build_lookup(
    const std::vector<std::string>& values, const char* what) {
  std::unordered_map<std::string, int> lookup;
  lookup.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto [it, inserted] = lookup.emplace(values[i], static_cast<int>(i));
    if (!inserted)
      throw ConfigError(std::string(what) + " list contains duplicate '" +
                        values[i] + "'");
  }
  return lookup;
}

constexpr std::uint64_t kMaxSplit = 255;

}  // namespace

NewsCube::NewsCube(std::vector<std::string> media, WeekCalendar calendar,
                   std::vector<std::string> countries)
    : media_(std::move(media)),
      calendar_(calendar),
      countries_(std::move(countries)) {
  media_lookup_ = build_lookup(media_, "media");
  country_lookup_ = build_lookup(countries_, "country");
  const std::size_t cells =
      media_.size() * static_cast<std::size_t>(calendar_.n_weeks()) *
      countries_.size();
  raw_.assign(cells, 0.0);
  weighted_.assign(cells, 0.0);
}

std::optional<int> NewsCube::media_index(const std::string& code) const {
  auto it = media_lookup_.find(code);
  if (it == media_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> NewsCube::country_index(const std::string& iso3) const {
  auto it = country_lookup_.find(iso3);
  if (it == country_lookup_.end()) return std::nullopt;
  return it->second;
}

double NewsCube::rowsum(Layer layer, int m, int t) const {
  const std::vector<double>& data = layer == Layer::Raw ? raw_ : weighted_;
  const std::size_t base = index(m, t, 0);
  double sum = 0.0;
  for (int p = 0; p < country_count(); ++p) sum += data[base + p];
  return sum;
}

double NewsCube::grand_total(Layer layer) const {
  const std::vector<double>& data = layer == Layer::Raw ? raw_ : weighted_;
  double sum = 0.0;
  for (double v : data) sum += v;
  return sum;
}

void IngestReport::merge(const IngestReport& other) {
  total_records += other.total_records;
  ingested += other.ingested;
  malformed += other.malformed;
  unknown_media += other.unknown_media;
  out_of_window += other.out_of_window;
  empty_countries += other.empty_countries;
  rejected_unknown_country += other.rejected_unknown_country;
  dropped_country_codes += other.dropped_country_codes;
  for (const auto& [code, n] : other.unknown_code_counts)
    unknown_code_counts[code] += n;
}

CubeBuilder::CubeBuilder(std::vector<std::string> media, WeekCalendar calendar,
                         std::vector<std::string> countries,
                         UnknownCountryPolicy policy)
    : media_(std::move(media)),
      calendar_(calendar),
      countries_(std::move(countries)),
      policy_(policy) {
  media_lookup_ = build_lookup(media_, "media");
  country_lookup_ = build_lookup(countries_, "country");
}

void CubeBuilder::add(const NewsItem& item) {
  ++report_.total_records;

  auto media_it = media_lookup_.find(item.media_code);
  if (media_it == media_lookup_.end()) {
    ++report_.unknown_media;
    return;
  }
  if (!calendar_.contains(item.published_date)) {
    ++report_.out_of_window;
    return;
  }
  if (item.countries.empty()) {
    ++report_.empty_countries;
    return;
  }

  std::vector<int> known;
  known.reserve(item.countries.size());
  bool has_unknown = false;
  for (const auto& code : item.countries) {
    auto it = country_lookup_.find(code);
    if (it == country_lookup_.end()) {
      has_unknown = true;
      ++report_.unknown_code_counts[code];
    } else {
      known.push_back(it->second);
    }
  }
  if (has_unknown && policy_ == UnknownCountryPolicy::Reject) {
    ++report_.rejected_unknown_country;
    return;
  }
  if (known.empty()) {
    // Every mention dropped; nothing left to renormalize over.
    ++report_.rejected_unknown_country;
    return;
  }
  report_.dropped_country_codes +=
      static_cast<std::int64_t>(item.countries.size() - known.size());

  const std::uint64_t k = known.size();
  if (k > kMaxSplit)
    throw ParseError("item mentions more than 255 countries");
  const int t = calendar_.week_of(item.published_date);
  const int m = media_it->second;
  for (int p : known) {
    const std::uint64_t cell =
        (static_cast<std::uint64_t>(m) * calendar_.n_weeks() + t) *
            countries_.size() +
        p;
    ++tallies_[cell * (kMaxSplit + 1) + k];
  }
  ++report_.ingested;
}

void CubeBuilder::merge(const CubeBuilder& other) {
  for (const auto& [key, count] : other.tallies_) tallies_[key] += count;
  report_.merge(other.report_);
}

NewsCube CubeBuilder::finish() const {
  NewsCube cube(media_, calendar_, countries_);
  // Summing k-grouped tallies in sorted key order makes the result exact in
  // the count arithmetic and independent of item arrival order.
  std::vector<std::pair<std::uint64_t, std::int64_t>> sorted(tallies_.begin(),
                                                             tallies_.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t P = countries_.size();
  const std::size_t T = static_cast<std::size_t>(calendar_.n_weeks());
  for (const auto& [key, count] : sorted) {
    const std::uint64_t cell = key / (kMaxSplit + 1);
    const std::uint64_t k = key % (kMaxSplit + 1);
    const int p = static_cast<int>(cell % P);
    const int t = static_cast<int>((cell / P) % T);
    const int m = static_cast<int>(cell / (P * T));
    cube.add_raw(m, t, p, static_cast<double>(count) / static_cast<double>(k));
  }
  return cube;
}

WeightReport weight_cube(NewsCube& cube) {
  WeightReport report;
  const double grand = cube.grand_total(Layer::Raw);
  const double rows =
      static_cast<double>(cube.media_count()) * cube.week_count();
  report.constant = grand / rows;
  for (int m = 0; m < cube.media_count(); ++m) {
    for (int t = 0; t < cube.week_count(); ++t) {
      const double rowsum = cube.rowsum(Layer::Raw, m, t);
      if (rowsum <= 0.0) {
        report.zero_rows.emplace_back(m, t);
        continue;
      }
      const double scale = report.constant / rowsum;
      for (int p = 0; p < cube.country_count(); ++p)
        cube.set_weighted(m, t, p, cube.raw(m, t, p) * scale);
    }
  }
  cube.mark_weighted_filled();
  report.weighted_total = cube.grand_total(Layer::Weighted);
  return report;
}

std::vector<SalienceRow> salience_table(const NewsCube& cube,
                                        bool use_weighted) {
  const Layer layer = use_weighted ? Layer::Weighted : Layer::Raw;
  std::vector<SalienceRow> rows(cube.country_count());
  double total = 0.0;
  for (int p = 0; p < cube.country_count(); ++p) {
    rows[p].iso3 = cube.countries()[p];
    double count = 0.0;
    for (int m = 0; m < cube.media_count(); ++m)
      for (int t = 0; t < cube.week_count(); ++t) count += cube.value(layer, m, t, p);
    rows[p].count = count;
    total += count;
  }
  for (auto& row : rows)
    row.freq_pct = total > 0.0 ? 100.0 * row.count / total : 0.0;
  std::sort(rows.begin(), rows.end(), [](const SalienceRow& a, const SalienceRow& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.iso3 < b.iso3;
  });
  for (std::size_t i = 0; i < rows.size(); ++i)
    rows[i].rank = static_cast<int>(i) + 1;
  return rows;
}

DispersionStats dispersion_stats(const NewsCube& cube, Layer layer) {
  DispersionStats stats;
  const std::size_t n = cube.cell_count();
  if (n == 0) return stats;
  double sum = 0.0;
  for (int m = 0; m < cube.media_count(); ++m)
    for (int t = 0; t < cube.week_count(); ++t)
      for (int p = 0; p < cube.country_count(); ++p)
        sum += cube.value(layer, m, t, p);
  stats.mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (int m = 0; m < cube.media_count(); ++m)
    for (int t = 0; t < cube.week_count(); ++t)
      for (int p = 0; p < cube.country_count(); ++p) {
        const double d = cube.value(layer, m, t, p) - stats.mean;
        ss += d * d;
      }
  stats.sd = std::sqrt(ss / static_cast<double>(n));
  return stats;
}

void write_cube_csv(const NewsCube& cube, const std::string& path) {
  CsvWriter out(path);
  out.row({"media", "week", "country", "raw", "weighted"});
  for (int m = 0; m < cube.media_count(); ++m)
    for (int t = 0; t < cube.week_count(); ++t)
      for (int p = 0; p < cube.country_count(); ++p) {
        const double raw = cube.raw(m, t, p);
        const double weighted = cube.weighted(m, t, p);
        if (raw == 0.0 && weighted == 0.0) continue;
        out.row({cube.media()[m], std::to_string(t), cube.countries()[p],
                 format_double(raw), format_double(weighted)});
      }
}

void write_cube_meta(const NewsCube& cube, const WeightReport* weights,
                     const std::string& path) {
  nlohmann::json meta;
  meta["media"] = cube.media();
  meta["countries"] = cube.countries();
  meta["start"] = to_string(cube.calendar().start_date());
  meta["n_weeks"] = cube.calendar().n_weeks();
  meta["weighted_filled"] = cube.weighted_filled();
  meta["grand_total_raw"] = cube.grand_total(Layer::Raw);
  if (weights) {
    meta["weight_constant"] = weights->constant;
    nlohmann::json zero = nlohmann::json::array();
    for (const auto& [m, t] : weights->zero_rows)
      zero.push_back({cube.media()[m], t});
    meta["zero_media_weeks"] = zero;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << meta.dump(2) << '\n';
}

NewsCube load_cube(const std::string& csv_path, const std::string& meta_path) {
  std::ifstream meta_in(meta_path);
  if (!meta_in) throw ParseError("cannot open '" + meta_path + "'");
  nlohmann::json meta = nlohmann::json::parse(meta_in, nullptr, false);
  if (meta.is_discarded())
    throw ParseError("invalid JSON in '" + meta_path + "'");

  NewsCube cube(meta.at("media").get<std::vector<std::string>>(),
                WeekCalendar(parse_date(meta.at("start").get<std::string>()),
                             meta.at("n_weeks").get<int>()),
                meta.at("countries").get<std::vector<std::string>>());

  CsvReader reader(csv_path);
  const std::size_t media_col = reader.require_column("media");
  const std::size_t week_col = reader.require_column("week");
  const std::size_t country_col = reader.require_column("country");
  const std::size_t raw_col = reader.require_column("raw");
  const std::size_t weighted_col = reader.require_column("weighted");
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    const std::string context =
        csv_path + ":" + std::to_string(reader.line_number());
    auto m = cube.media_index(fields.at(media_col));
    auto p = cube.country_index(fields.at(country_col));
    if (!m) throw ParseError("unknown media '" + fields[media_col] + "' in " + context);
    if (!p)
      throw ParseError("unknown country '" + fields[country_col] + "' in " + context);
    const long t = parse_long_field(fields.at(week_col), context);
    if (t < 0 || t >= cube.week_count())
      throw ParseError("week out of range in " + context);
    cube.set_raw(*m, static_cast<int>(t), *p,
                 parse_double_field(fields.at(raw_col), context));
    cube.set_weighted(*m, static_cast<int>(t), *p,
                      parse_double_field(fields.at(weighted_col), context));
  }
  if (meta.value("weighted_filled", false)) cube.mark_weighted_filled();
  return cube;
}

}  // namespace newsgravity
