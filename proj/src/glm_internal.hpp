#ifndef NEWSGRAVITY_GLM_INTERNAL_HPP
#define NEWSGRAVITY_GLM_INTERNAL_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "newsgravity/glm.hpp"

namespace newsgravity::detail {

inline double xlogy(double x, double y) {
  return x > 0.0 ? x * std::log(y) : 0.0;
}

void validate_design(const DesignMatrix& design);

/// Solves (X' W X) b = X' W z. Throws SingularSystemError naming the most
/// involved column when the normal system is rank deficient.
Eigen::VectorXd solve_weighted(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& weights,
                               const Eigen::VectorXd& z,
                               const std::vector<std::string>& names);

/// Inverts a symmetric information matrix. Rank-deficient directions get
/// infinite variance; near_singular collects the affected column names.
Eigen::MatrixXd invert_information(const Eigen::MatrixXd& info,
                                   const std::vector<std::string>& names,
                                   std::vector<std::string>* near_singular);

/// Fills std_errors / z_values / p_values from a coefficient covariance.
void fill_wald(const Eigen::VectorXd& coefficients,
               const Eigen::MatrixXd& covariance, Eigen::VectorXd& std_errors,
               Eigen::VectorXd& z_values, Eigen::VectorXd& p_values);

struct IrlsResult {
  Eigen::VectorXd beta;
  Eigen::VectorXd mu;
  Eigen::VectorXd eta;
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Poisson IRLS core with prior weights and offset; used directly by the
/// Poisson fitter and as the count-part M step of the zero-inflated mixture.
/// theta = infinity selects the Poisson weighting, finite theta the NB2 one.
IrlsResult irls_log_link(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& offset,
                         const Eigen::VectorXd& prior_weight, double theta,
                         const Eigen::VectorXd& beta_init,
                         const std::vector<std::string>& names,
                         int max_iterations, double tol_beta,
                         double tol_loglik_rel);

double poisson_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                        const Eigen::VectorXd& w);

double negbin_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                       const Eigen::VectorXd& w, double theta);

/// Closed-form intercept-only Poisson mean: exp(b0 + offset) with
/// b0 = log(sum(w y) / sum(w exp(offset))).
Eigen::VectorXd poisson_null_mu(const Eigen::VectorXd& y,
                                const Eigen::VectorXd& offset,
                                const Eigen::VectorXd& w);

/// Marks coefficients that drifted to extreme magnitudes (separated or
/// degenerate strata) in the fit diagnostics.
void flag_extreme_coefficients(FitResult& fit);

/// Result skeleton for an identically-zero response, where the mean model
/// diverges; converged stays false.
FitResult degenerate_zero_response(const DesignMatrix& design, Family family);

constexpr double kEtaClamp = 300.0;
constexpr double kWeightFloor = 1e-12;
constexpr double kThetaMin = 1e-8;
constexpr double kThetaDivergence = 1e8;
constexpr double kZeroPartBound = 35.0;

}  // namespace newsgravity::detail

#endif
