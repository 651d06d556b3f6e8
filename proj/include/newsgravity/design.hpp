#ifndef NEWSGRAVITY_DESIGN_HPP
#define NEWSGRAVITY_DESIGN_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "newsgravity/covariates.hpp"
#include "newsgravity/cube.hpp"

namespace newsgravity {

enum class Family { Poisson, NegBin, Zip };

std::string family_name(Family family);
Family family_from_name(const std::string& name);

/// Covariate vocabulary, in output order.
const std::vector<std::string>& default_terms();

/// Model configuration: which covariates enter, which count family is fit,
/// and which cube layer is the response.
struct ModelSpec {
  std::vector<std::string> terms = default_terms();
  Family family = Family::NegBin;
  Layer response_layer = Layer::Weighted;
  bool include_home = false;
  /// When true the log row-sum enters as a fitted column instead of a
  /// fixed-coefficient offset (one extra degree of freedom).
  bool offset_as_covariate = false;

  void validate() const;
  bool has_term(const std::string& name) const;
  std::string summary() const;
};

struct RowRef {
  int media = 0;
  int week = 0;
  int country = 0;
};

struct ExclusionCounts {
  std::int64_t total_cells = 0;
  std::int64_t zero_media_week_rows = 0;
  std::int64_t week0_rows = 0;
  std::int64_t home_rows = 0;
  std::int64_t included = 0;
};

/// Log-linear design: response, covariate columns (intercept first), offset
/// with fixed unit coefficient, and optional row weights.
struct DesignMatrix {
  std::vector<std::string> column_names;
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  Eigen::VectorXd offset;
  Eigen::VectorXd row_weight;
  std::vector<RowRef> rows;
  ExclusionCounts exclusions;

  Eigen::Index n_rows() const { return X.rows(); }
  Eigen::Index n_cols() const { return X.cols(); }

  DesignMatrix subset(const std::vector<Eigen::Index>& keep) const;
  DesignMatrix filter(const std::function<bool(const RowRef&)>& keep) const;

  std::uint64_t content_digest() const;
};

struct DesignOptions {
  /// Log offsets per (media, week), flattened as m * n_weeks + t. Replaces
  /// the log row-sum offset; used to refit simulated cubes against the
  /// offsets that generated them.
  std::optional<std::vector<double>> offset_override;
};

/// Persistence indicator: 1 when the outlet published anything about the
/// country in the previous week (raw layer), else 0.
/// Throws FirstWeekUndefinedError for t == 0.
int kickoff_indicator(const NewsCube& cube, int m, int p, int t);

/// Assembles the design for the multiplicative model in log-linear form.
/// Columns: intercept, log area, log density, log GDP per capita, elite
/// dummies, log inverse distance, language, persistence. Rows in all-zero
/// media-weeks are dropped; week 0 is dropped when the persistence term is
/// present; home-country rows are dropped unless include_home.
DesignMatrix build_design(const NewsCube& cube, const CovariateTables& tables,
                          const ModelSpec& spec,
                          const DesignOptions& options = {});

}  // namespace newsgravity

#endif
