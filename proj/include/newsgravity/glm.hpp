#ifndef NEWSGRAVITY_GLM_HPP
#define NEWSGRAVITY_GLM_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "newsgravity/design.hpp"

namespace newsgravity {

struct FitOptions {
  int max_iterations = 100;     // IRLS and outer dispersion alternation
  int max_em_iterations = 300;  // zero-inflated mixture EM
  double tol_beta = 1e-8;       // max |delta beta|
  double tol_loglik_rel = 1e-10;
};

/// Maximum-likelihood fit of one count model.
struct FitResult {
  Family family = Family::Poisson;
  std::vector<std::string> term_names;

  Eigen::VectorXd coefficients;
  Eigen::VectorXd std_errors;
  Eigen::VectorXd z_values;
  Eigen::VectorXd p_values;

  std::optional<double> theta;  // negbin dispersion (variance mu + mu^2/theta)
  bool theta_diverged = false;

  // Zero-mixture part (zip only): logistic model on the same covariates.
  Eigen::VectorXd zero_coefficients;
  Eigen::VectorXd zero_std_errors;
  Eigen::VectorXd zero_z_values;
  Eigen::VectorXd zero_p_values;

  double log_likelihood = 0.0;
  double aic = 0.0;
  int df = 0;
  double null_deviance = 0.0;
  double residual_deviance = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<std::string> diagnostics;
};

/// Poisson regression with log link by iteratively reweighted least squares.
/// An all-zero response returns converged=false with a diagnostic.
/// Throws SingularSystemError naming a collinear column.
FitResult fit_poisson(const DesignMatrix& design, const FitOptions& options = {});

/// NB2 negative binomial: alternates IRLS for the coefficients with a
/// safeguarded Newton (bisection fallback) for the dispersion on the profile
/// score. No overdispersion sets theta_diverged and reports the Poisson limit.
FitResult fit_negbin(const DesignMatrix& design, const FitOptions& options = {});

/// Zero-inflated Poisson fitted by expectation-maximization; the zero part
/// is a logistic model on the same covariates. Throws NoZerosError when the
/// response has no zero cells.
FitResult fit_zip(const DesignMatrix& design, const FitOptions& options = {});

FitResult fit_family(Family family, const DesignMatrix& design,
                     const FitOptions& options = {});

struct DevianceExplained {
  double value = 0.0;
  bool clamped = false;
};

/// 1 - residual/null deviance. Throws NullModelOnlyError when the null
/// deviance is zero.
DevianceExplained deviance_explained(const FitResult& fit);

struct WaldRow {
  std::string term;
  double estimate = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  double p = 0.0;
};

/// Coefficient table (zip zero-part rows carry a "zero_" prefix).
/// Requires a converged fit.
std::vector<WaldRow> wald_report(const FitResult& fit);

/// Expected response per design row under the fit.
Eigen::VectorXd predict_mean(const FitResult& fit, const DesignMatrix& design);

/// Response variance per design row under the fit.
Eigen::VectorXd predict_variance(const FitResult& fit,
                                 const DesignMatrix& design);

// Log likelihoods with analytic gradients, exposed for optimizer-free
// verification of the fitters.

double poisson_loglik(const DesignMatrix& design, const Eigen::VectorXd& beta,
                      Eigen::VectorXd* grad = nullptr);

double negbin_loglik(const DesignMatrix& design, const Eigen::VectorXd& beta,
                     double theta, Eigen::VectorXd* grad_beta = nullptr,
                     double* grad_theta = nullptr);

double zip_loglik(const DesignMatrix& design, const Eigen::VectorXd& beta,
                  const Eigen::VectorXd& gamma,
                  Eigen::VectorXd* grad_beta = nullptr,
                  Eigen::VectorXd* grad_gamma = nullptr);

/// Family score vector at the fitted optimum (first-order condition).
Eigen::VectorXd score_at_optimum(const FitResult& fit,
                                 const DesignMatrix& design);

}  // namespace newsgravity

#endif
