#include "newsgravity/covariates.hpp"

#include <cmath>
#include <numbers>

#include "newsgravity/csv.hpp"
#include "newsgravity/errors.hpp"

namespace newsgravity {

namespace {
constexpr double kEarthRadiusKm = 6371.0;
constexpr double kDegToRad = std::numbers::pi / 180.0;
}  // namespace

double great_circle_distance(double lat1, double lon1, double lat2,
                             double lon2) {
  const double phi1 = lat1 * kDegToRad;
  const double phi2 = lat2 * kDegToRad;
  const double dphi = (lat2 - lat1) * kDegToRad;
  const double dlam = (lon2 - lon1) * kDegToRad;
  const double a = std::sin(dphi / 2) * std::sin(dphi / 2) +
                   std::cos(phi1) * std::cos(phi2) * std::sin(dlam / 2) *
                       std::sin(dlam / 2);
  return 2.0 * kEarthRadiusKm *
         std::atan2(std::sqrt(a), std::sqrt(std::max(0.0, 1.0 - a)));
}

void CountryAttributes::validate() const {
  auto positive = [this](double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw NonpositiveCovariateError("country " + iso3 + ": " + field +
                                      " must be strictly positive");
  };
  positive(area_km2, "area_km2");
  positive(population, "population");
  positive(gdp_ppp, "gdp_ppp");
  if (p5 && g14)
    throw ConfigError("country " + iso3 + ": p5 and g14 are mutually exclusive");
  if (vat && iso3 != "VAT")
    throw ConfigError("country " + iso3 + ": vat flag reserved for VAT");
  if (capital_lat < -90.0 || capital_lat > 90.0)
    throw ConfigError("country " + iso3 + ": latitude out of [-90, 90]");
  if (capital_lon < -180.0 || capital_lon > 180.0)
    throw ConfigError("country " + iso3 + ": longitude out of [-180, 180]");
}

double CountryAttributes::internal_distance_km() const {
  return 0.5 * std::sqrt(area_km2 / std::numbers::pi);
}

void CovariateTables::add_country(CountryAttributes attrs) {
  attrs.validate();
  auto [it, inserted] = countries_.emplace(attrs.iso3, attrs);
  if (!inserted) throw ConfigError("duplicate country '" + attrs.iso3 + "'");
  country_order_.push_back(attrs.iso3);
}

void CovariateTables::add_dyad(const std::string& a, const std::string& b,
                               Dyad dyad) {
  if (a != b && !(dyad.distance_km > 0.0))
    throw NonpositiveCovariateError("dyad " + a + "-" + b +
                                    ": distance_km must be strictly positive");
  const auto key = a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
  auto [it, inserted] = dyads_.emplace(key, dyad);
  if (!inserted) {
    if (it->second.distance_km != dyad.distance_km ||
        it->second.common_language != dyad.common_language)
      throw ConfigError("conflicting dyad rows for " + a + "-" + b);
  }
}

void CovariateTables::add_media(MediaInfo media) {
  auto [it, inserted] = media_.emplace(media.media_code, media);
  if (!inserted)
    throw ConfigError("duplicate media '" + media.media_code + "'");
  media_order_.push_back(media);
}

const CountryAttributes& CovariateTables::country(const std::string& iso3) const {
  auto it = countries_.find(iso3);
  if (it == countries_.end())
    throw MissingCovariateError("no attributes for country '" + iso3 + "'");
  return it->second;
}

bool CovariateTables::has_country(const std::string& iso3) const {
  return countries_.count(iso3) > 0;
}

Dyad CovariateTables::dyad(const std::string& a, const std::string& b) const {
  const auto key = a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
  auto it = dyads_.find(key);
  if (it != dyads_.end()) return it->second;
  if (a == b) {
    const CountryAttributes& attrs = country(a);
    return Dyad{attrs.internal_distance_km(), true};
  }
  if (!has_country(a) || !has_country(b))
    throw MissingCovariateError("no dyad for pair " + a + "-" + b);
  const CountryAttributes& ca = country(a);
  const CountryAttributes& cb = country(b);
  const double d = great_circle_distance(ca.capital_lat, ca.capital_lon,
                                         cb.capital_lat, cb.capital_lon);
  if (!(d > 0.0))
    throw MissingCovariateError("pair " + a + "-" + b +
                                " has coincident capitals; provide a dyad row");
  return Dyad{d, false};
}

const MediaInfo& CovariateTables::media(const std::string& code) const {
  auto it = media_.find(code);
  if (it == media_.end())
    throw MissingCovariateError("no media entry for '" + code + "'");
  return it->second;
}

void load_countries_csv(const std::string& path, CovariateTables& tables) {
  CsvReader reader(path);
  const auto iso3 = reader.require_column("iso3");
  const auto area = reader.require_column("area_km2");
  const auto pop = reader.require_column("population");
  const auto gdp = reader.require_column("gdp_ppp");
  const auto p5 = reader.require_column("p5");
  const auto g14 = reader.require_column("g14");
  const auto vat = reader.require_column("vat");
  const auto lat = reader.require_column("capital_lat");
  const auto lon = reader.require_column("capital_lon");
  std::vector<std::string> f;
  while (reader.next(f)) {
    const std::string ctx = path + ":" + std::to_string(reader.line_number());
    CountryAttributes attrs;
    attrs.iso3 = f.at(iso3);
    attrs.area_km2 = parse_double_field(f.at(area), ctx);
    attrs.population = parse_double_field(f.at(pop), ctx);
    attrs.gdp_ppp = parse_double_field(f.at(gdp), ctx);
    attrs.p5 = parse_bool_field(f.at(p5), ctx);
    attrs.g14 = parse_bool_field(f.at(g14), ctx);
    attrs.vat = parse_bool_field(f.at(vat), ctx);
    attrs.capital_lat = parse_double_field(f.at(lat), ctx);
    attrs.capital_lon = parse_double_field(f.at(lon), ctx);
    tables.add_country(attrs);
  }
}

void load_dyads_csv(const std::string& path, CovariateTables& tables) {
  CsvReader reader(path);
  const auto home = reader.require_column("home_iso3");
  const auto guest = reader.require_column("guest_iso3");
  const auto dist = reader.require_column("distance_km");
  const auto lang = reader.require_column("common_language");
  std::vector<std::string> f;
  while (reader.next(f)) {
    const std::string ctx = path + ":" + std::to_string(reader.line_number());
    Dyad dyad;
    dyad.common_language = parse_bool_field(f.at(lang), ctx);
    const std::string& a = f.at(home);
    const std::string& b = f.at(guest);
    if (f.at(dist).empty()) {
      const CountryAttributes& ca = tables.country(a);
      const CountryAttributes& cb = tables.country(b);
      dyad.distance_km =
          a == b ? ca.internal_distance_km()
                 : great_circle_distance(ca.capital_lat, ca.capital_lon,
                                         cb.capital_lat, cb.capital_lon);
    } else {
      dyad.distance_km = parse_double_field(f.at(dist), ctx);
    }
    tables.add_dyad(a, b, dyad);
  }
}

void load_media_csv(const std::string& path, CovariateTables& tables) {
  CsvReader reader(path);
  const auto code = reader.require_column("media_code");
  const auto home = reader.require_column("home_iso3");
  const auto lang = reader.column("language");
  std::vector<std::string> f;
  while (reader.next(f)) {
    MediaInfo info;
    info.media_code = f.at(code);
    info.home_iso3 = f.at(home);
    if (lang && *lang < f.size()) info.language = f[*lang];
    tables.add_media(info);
  }
}

}  // namespace newsgravity
