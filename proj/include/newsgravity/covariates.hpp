#ifndef NEWSGRAVITY_COVARIATES_HPP
#define NEWSGRAVITY_COVARIATES_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace newsgravity {

/// Haversine distance in km on a sphere of radius 6371 km.
double great_circle_distance(double lat1, double lon1, double lat2, double lon2);

/// Per-country size and elite covariates.
struct CountryAttributes {
  std::string iso3;
  double area_km2 = 0.0;
  double population = 0.0;
  double gdp_ppp = 0.0;
  bool p5 = false;
  bool g14 = false;
  bool vat = false;
  double capital_lat = 0.0;
  double capital_lon = 0.0;

  /// Throws NonpositiveCovariateError / ConfigError on invariant violations.
  void validate() const;

  /// Radius of the equal-area disc, the conventional internal distance.
  double internal_distance_km() const;
};

/// Symmetric country-pair proximity covariates.
struct Dyad {
  double distance_km = 0.0;
  bool common_language = false;
};

struct MediaInfo {
  std::string media_code;
  std::string home_iso3;
  std::string language;
};

/// Country attributes, dyads and media homes loaded from the CSV inputs.
class CovariateTables {
public:
  void add_country(CountryAttributes attrs);
  void add_dyad(const std::string& a, const std::string& b, Dyad dyad);
  void add_media(MediaInfo media);

  /// Throws MissingCovariateError when the country is absent.
  const CountryAttributes& country(const std::string& iso3) const;
  bool has_country(const std::string& iso3) const;

  /// Dyad for an unordered country pair; computes the capital great-circle
  /// distance when no explicit dyad was supplied and both capitals are known.
  /// For a == b the internal distance is used and common_language is true.
  Dyad dyad(const std::string& a, const std::string& b) const;

  /// Throws MissingCovariateError when the media code is absent.
  const MediaInfo& media(const std::string& code) const;

  /// ISO3 codes in input order.
  const std::vector<std::string>& country_codes() const { return country_order_; }
  const std::vector<MediaInfo>& media_list() const { return media_order_; }

private:
  std::map<std::string, CountryAttributes> countries_;
  std::vector<std::string> country_order_;
  std::map<std::pair<std::string, std::string>, Dyad> dyads_;
  std::map<std::string, MediaInfo> media_;
  std::vector<MediaInfo> media_order_;
};

/// countries.csv: iso3,area_km2,population,gdp_ppp,p5,g14,vat,capital_lat,capital_lon
void load_countries_csv(const std::string& path, CovariateTables& tables);

/// dyads.csv: home_iso3,guest_iso3,distance_km,common_language
/// (blank distance_km: computed from capitals)
void load_dyads_csv(const std::string& path, CovariateTables& tables);

/// media.csv: media_code,home_iso3,language
void load_media_csv(const std::string& path, CovariateTables& tables);

}  // namespace newsgravity

#endif
