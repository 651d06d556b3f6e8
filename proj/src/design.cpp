#include "newsgravity/design.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "newsgravity/errors.hpp"
#include "newsgravity/numerics.hpp"

namespace newsgravity {

std::string family_name(Family family) {
  switch (family) {
    case Family::Poisson: return "poisson";
    case Family::NegBin: return "negbin";
    case Family::Zip: return "zip";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  if (name == "poisson") return Family::Poisson;
  if (name == "negbin") return Family::NegBin;
  if (name == "zip") return Family::Zip;
  throw ConfigError("unknown family '" + name +
                    "' (expected poisson, negbin or zip)");
}

const std::vector<std::string>& default_terms() {
  static const std::vector<std::string> terms = {
      "log_sup", "log_density", "log_gdpc", "pm5",    "g14",
      "vat",     "log_invdist", "lang",     "kickoff"};
  return terms;
}

void ModelSpec::validate() const {
  std::set<std::string> seen;
  const auto& known = default_terms();
  for (const auto& term : terms) {
    if (std::find(known.begin(), known.end(), term) == known.end())
      throw ConfigError("unknown model term '" + term + "'");
    if (!seen.insert(term).second)
      throw ConfigError("duplicate model term '" + term + "'");
  }
}

bool ModelSpec::has_term(const std::string& name) const {
  return std::find(terms.begin(), terms.end(), name) != terms.end();
}

std::string ModelSpec::summary() const {
  std::ostringstream os;
  os << family_name(family) << "|"
     << (response_layer == Layer::Raw ? "raw" : "weighted") << "|home:"
     << include_home << "|offsetcov:" << offset_as_covariate << "|terms:";
  for (const auto& t : terms) os << t << ",";
  return os.str();
}

DesignMatrix DesignMatrix::subset(const std::vector<Eigen::Index>& keep) const {
  DesignMatrix out;
  out.column_names = column_names;
  out.exclusions = exclusions;
  const Eigen::Index m = static_cast<Eigen::Index>(keep.size());
  out.X.resize(m, X.cols());
  out.y.resize(m);
  out.offset.resize(m);
  out.row_weight.resize(m);
  out.rows.resize(keep.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index src = keep[i];
    out.X.row(i) = X.row(src);
    out.y(i) = y(src);
    out.offset(i) = offset(src);
    out.row_weight(i) = row_weight(src);
    out.rows[i] = rows[src];
  }
  return out;
}

DesignMatrix DesignMatrix::filter(
    const std::function<bool(const RowRef&)>& keep) const {
  std::vector<Eigen::Index> idx;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (keep(rows[i])) idx.push_back(static_cast<Eigen::Index>(i));
  return subset(idx);
}

std::uint64_t DesignMatrix::content_digest() const {
  Fnv1a hash;
  for (const auto& name : column_names) hash.update(name);
  hash.update(X.data(), sizeof(double) * X.size());
  hash.update(y.data(), sizeof(double) * y.size());
  hash.update(offset.data(), sizeof(double) * offset.size());
  hash.update(row_weight.data(), sizeof(double) * row_weight.size());
  return hash.value();
}

int kickoff_indicator(const NewsCube& cube, int m, int p, int t) {
  if (t < 1)
    throw FirstWeekUndefinedError(
        "persistence indicator undefined at week 0 (no previous week)");
  return cube.raw(m, t - 1, p) > 0.0 ? 1 : 0;
}

DesignMatrix build_design(const NewsCube& cube, const CovariateTables& tables,
                          const ModelSpec& spec, const DesignOptions& options) {
  spec.validate();
  const int M = cube.media_count();
  const int T = cube.week_count();
  const int P = cube.country_count();
  const bool kickoff = spec.has_term("kickoff");
  const int first_week = kickoff ? 1 : 0;

  if (options.offset_override &&
      options.offset_override->size() != static_cast<std::size_t>(M) * T)
    throw ConfigError("offset override must have one value per media-week");

  // Per-country columns. Attribute validation happens at load; recheck the
  // log arguments here so a hand-built table cannot slip a zero through.
  struct CountryCols {
    double log_sup, log_density, log_gdpc, pm5, g14, vat;
  };
  std::vector<CountryCols> country_cols(P);
  for (int p = 0; p < P; ++p) {
    const std::string& iso3 = cube.countries()[p];
    const CountryAttributes& a = tables.country(iso3);
    if (!(a.area_km2 > 0) || !(a.population > 0) || !(a.gdp_ppp > 0))
      throw NonpositiveCovariateError("country " + iso3 +
                                      ": size covariates must be positive");
    country_cols[p] = {std::log(a.area_km2),
                       std::log(a.population / a.area_km2),
                       std::log(a.gdp_ppp / a.population),
                       a.p5 ? 1.0 : 0.0,
                       a.g14 ? 1.0 : 0.0,
                       a.vat ? 1.0 : 0.0};
  }

  // Per (media, country) dyad columns, shared across outlets with one home.
  std::vector<int> home_index(M, -1);
  Eigen::MatrixXd log_invdist(M, P);
  Eigen::MatrixXd lang(M, P);
  for (int m = 0; m < M; ++m) {
    const MediaInfo& info = tables.media(cube.media()[m]);
    if (auto idx = cube.country_index(info.home_iso3)) home_index[m] = *idx;
    for (int p = 0; p < P; ++p) {
      const std::string& guest = cube.countries()[p];
      if (!spec.include_home && guest == info.home_iso3) continue;
      const Dyad d = tables.dyad(info.home_iso3, guest);
      if (!(d.distance_km > 0))
        throw NonpositiveCovariateError("dyad " + info.home_iso3 + "-" + guest +
                                        ": distance_km must be positive");
      log_invdist(m, p) = -std::log(d.distance_km);
      lang(m, p) = d.common_language ? 1.0 : 0.0;
    }
  }

  DesignMatrix design;
  design.column_names.push_back("intercept");
  for (const auto& term : spec.terms) design.column_names.push_back(term);
  if (spec.offset_as_covariate) design.column_names.push_back("log_offset");
  const Eigen::Index k = static_cast<Eigen::Index>(design.column_names.size());

  design.exclusions.total_cells =
      static_cast<std::int64_t>(M) * T * P;

  // First pass: row sums and row count.
  Eigen::MatrixXd offsets(M, T);
  std::vector<char> zero_row(static_cast<std::size_t>(M) * T, 0);
  std::int64_t n = 0;
  for (int m = 0; m < M; ++m) {
    for (int t = 0; t < T; ++t) {
      const double rowsum = cube.rowsum(spec.response_layer, m, t);
      if (rowsum <= 0.0) {
        zero_row[static_cast<std::size_t>(m) * T + t] = 1;
        design.exclusions.zero_media_week_rows += P;
        continue;
      }
      offsets(m, t) =
          options.offset_override
              ? (*options.offset_override)[static_cast<std::size_t>(m) * T + t]
              : std::log(rowsum);
      if (t < first_week) {
        design.exclusions.week0_rows += P;
        continue;
      }
      for (int p = 0; p < P; ++p) {
        if (!spec.include_home && p == home_index[m]) {
          ++design.exclusions.home_rows;
          continue;
        }
        ++n;
      }
    }
  }
  design.exclusions.included = n;

  design.X.resize(n, k);
  design.y.resize(n);
  design.offset.resize(n);
  design.row_weight.setOnes(n);
  design.rows.resize(static_cast<std::size_t>(n));

  Eigen::Index row = 0;
  for (int m = 0; m < M; ++m) {
    for (int t = first_week; t < T; ++t) {
      if (zero_row[static_cast<std::size_t>(m) * T + t]) continue;
      for (int p = 0; p < P; ++p) {
        if (!spec.include_home && p == home_index[m]) continue;
        design.rows[static_cast<std::size_t>(row)] = RowRef{m, t, p};
        design.y(row) = cube.value(spec.response_layer, m, t, p);
        design.offset(row) = spec.offset_as_covariate ? 0.0 : offsets(m, t);
        Eigen::Index col = 0;
        design.X(row, col++) = 1.0;
        for (const auto& term : spec.terms) {
          double v = 0.0;
          if (term == "log_sup") v = country_cols[p].log_sup;
          else if (term == "log_density") v = country_cols[p].log_density;
          else if (term == "log_gdpc") v = country_cols[p].log_gdpc;
          else if (term == "pm5") v = country_cols[p].pm5;
          else if (term == "g14") v = country_cols[p].g14;
          else if (term == "vat") v = country_cols[p].vat;
          else if (term == "log_invdist") v = log_invdist(m, p);
          else if (term == "lang") v = lang(m, p);
          else if (term == "kickoff")
            v = static_cast<double>(kickoff_indicator(cube, m, p, t));
          design.X(row, col++) = v;
        }
        if (spec.offset_as_covariate) design.X(row, col++) = offsets(m, t);
        ++row;
      }
    }
  }

  if (!design.X.allFinite() || !design.y.allFinite() ||
      !design.offset.allFinite())
    throw InvalidDesignError("design contains non-finite entries");
  return design;
}

}  // namespace newsgravity
