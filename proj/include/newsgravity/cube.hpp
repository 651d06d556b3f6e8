#ifndef NEWSGRAVITY_CUBE_HPP
#define NEWSGRAVITY_CUBE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "newsgravity/calendar.hpp"
#include "newsgravity/items.hpp"

namespace newsgravity {

enum class Layer { Raw, Weighted };

/// Story counts indexed by (media, week, country): a raw layer of allocated
/// unit masses and a weighted layer with equalized media-week row sums.
class NewsCube {
public:
  NewsCube(std::vector<std::string> media, WeekCalendar calendar,
           std::vector<std::string> countries);

  int media_count() const { return static_cast<int>(media_.size()); }
  int week_count() const { return calendar_.n_weeks(); }
  int country_count() const { return static_cast<int>(countries_.size()); }

  const std::vector<std::string>& media() const { return media_; }
  const std::vector<std::string>& countries() const { return countries_; }
  const WeekCalendar& calendar() const { return calendar_; }

  std::optional<int> media_index(const std::string& code) const;
  std::optional<int> country_index(const std::string& iso3) const;

  double raw(int m, int t, int p) const { return raw_[index(m, t, p)]; }
  double weighted(int m, int t, int p) const { return weighted_[index(m, t, p)]; }
  double value(Layer layer, int m, int t, int p) const {
    return layer == Layer::Raw ? raw(m, t, p) : weighted(m, t, p);
  }

  void set_raw(int m, int t, int p, double v) { raw_[index(m, t, p)] = v; }
  void set_weighted(int m, int t, int p, double v) {
    weighted_[index(m, t, p)] = v;
  }
  void add_raw(int m, int t, int p, double v) { raw_[index(m, t, p)] += v; }

  /// Sum over countries for one media-week, in fixed country order.
  double rowsum(Layer layer, int m, int t) const;

  double grand_total(Layer layer) const;

  bool weighted_filled() const { return weighted_filled_; }
  void mark_weighted_filled() { weighted_filled_ = true; }

  std::size_t cell_count() const { return raw_.size(); }

private:
  std::size_t index(int m, int t, int p) const {
    return (static_cast<std::size_t>(m) * calendar_.n_weeks() + t) *
               countries_.size() +
           p;
  }

  std::vector<std::string> media_;
  WeekCalendar calendar_;
  std::vector<std::string> countries_;
  std::vector<double> raw_;
  std::vector<double> weighted_;
  bool weighted_filled_ = false;
  std::unordered_map<std::string, int> media_lookup_;
  std::unordered_map<std::string, int> country_lookup_;
};

enum class UnknownCountryPolicy { Reject, DropAndRenormalize };

/// Per-category tallies of records seen during ingestion.
struct IngestReport {
  std::int64_t total_records = 0;
  std::int64_t ingested = 0;
  std::int64_t malformed = 0;
  std::int64_t unknown_media = 0;
  std::int64_t out_of_window = 0;
  std::int64_t empty_countries = 0;
  std::int64_t rejected_unknown_country = 0;
  std::int64_t dropped_country_codes = 0;
  std::map<std::string, std::int64_t> unknown_code_counts;

  void merge(const IngestReport& other);
};

/// Accumulates item allocations as exact integer tallies keyed by
/// (cell, split size), so the finished cube is identical for any item order
/// and partial builders merge by tally addition.
class CubeBuilder {
public:
  CubeBuilder(std::vector<std::string> media, WeekCalendar calendar,
              std::vector<std::string> countries,
              UnknownCountryPolicy policy = UnknownCountryPolicy::Reject);

  void add(const NewsItem& item);
  void add_malformed() {
    ++report_.total_records;
    ++report_.malformed;
  }

  void merge(const CubeBuilder& other);

  /// Raw layer filled; weighted layer zero.
  NewsCube finish() const;

  const IngestReport& report() const { return report_; }

private:
  std::vector<std::string> media_;
  WeekCalendar calendar_;
  std::vector<std::string> countries_;
  UnknownCountryPolicy policy_;
  std::unordered_map<std::string, int> media_lookup_;
  std::unordered_map<std::string, int> country_lookup_;
  std::unordered_map<std::uint64_t, std::int64_t> tallies_;
  IngestReport report_;
};

struct WeightReport {
  double constant = 0.0;  // equalized row sum: grand total / (M * T)
  std::vector<std::pair<int, int>> zero_rows;  // (media, week) with no stories
  double weighted_total = 0.0;
};

/// Fills the weighted layer: weighted = raw * C / rowsum(m,t) with
/// C = grand_total / (M*T). All-zero rows stay zero and are flagged.
WeightReport weight_cube(NewsCube& cube);

struct SalienceRow {
  std::string iso3;
  double count = 0.0;
  double freq_pct = 0.0;
  int rank = 0;
};

/// Per-country totals with share of attention and rank (descending count,
/// ties broken by ISO3 code).
std::vector<SalienceRow> salience_table(const NewsCube& cube, bool use_weighted);

struct DispersionStats {
  double mean = 0.0;
  double sd = 0.0;  // population standard deviation
};

DispersionStats dispersion_stats(const NewsCube& cube, Layer layer);

/// Sparse triple-list CSV: media,week,country,raw,weighted.
void write_cube_csv(const NewsCube& cube, const std::string& path);

/// Axes and window metadata required to reload the sparse CSV.
void write_cube_meta(const NewsCube& cube, const WeightReport* weights,
                     const std::string& path);

NewsCube load_cube(const std::string& csv_path, const std::string& meta_path);

}  // namespace newsgravity

#endif
