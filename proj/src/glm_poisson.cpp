#include <cmath>

#include "glm_internal.hpp"
#include "newsgravity/errors.hpp"

namespace newsgravity {

using detail::kEtaClamp;

double poisson_loglik(const DesignMatrix& design, const Eigen::VectorXd& beta,
                      Eigen::VectorXd* grad) {
  const Eigen::VectorXd eta = design.X * beta + design.offset;
  double ll = 0.0;
  Eigen::VectorXd residual(design.y.size());
  for (Eigen::Index i = 0; i < design.y.size(); ++i) {
    const double w = design.row_weight(i);
    const double mu = std::exp(std::min(eta(i), kEtaClamp));
    ll += w * (design.y(i) * eta(i) - mu - std::lgamma(design.y(i) + 1.0));
    residual(i) = w * (design.y(i) - mu);
  }
  if (grad) *grad = design.X.transpose() * residual;
  return ll;
}

FitResult fit_poisson(const DesignMatrix& design, const FitOptions& options) {
  detail::validate_design(design);
  const Eigen::VectorXd& y = design.y;
  const Eigen::VectorXd& w = design.row_weight;

  if ((w.array() * y.array()).sum() <= 0.0)
    return detail::degenerate_zero_response(design, Family::Poisson);

  detail::IrlsResult irls = detail::irls_log_link(
      design.X, y, design.offset, w, std::numeric_limits<double>::infinity(),
      Eigen::VectorXd::Zero(design.X.cols()), design.column_names,
      options.max_iterations, options.tol_beta, options.tol_loglik_rel);

  FitResult fit;
  fit.family = Family::Poisson;
  fit.term_names = design.column_names;
  fit.coefficients = irls.beta;
  fit.converged = irls.converged;
  fit.iterations = irls.iterations;
  fit.log_likelihood = irls.loglik;
  fit.df = static_cast<int>(design.X.cols());
  fit.aic = 2.0 * fit.df - 2.0 * fit.log_likelihood;

  // Observed information equals expected information under the log link.
  const Eigen::VectorXd info_weight = (w.array() * irls.mu.array()).matrix();
  const Eigen::MatrixXd info =
      design.X.transpose() *
      (design.X.array().colwise() * info_weight.array()).matrix();
  std::vector<std::string> near_singular;
  const Eigen::MatrixXd cov =
      detail::invert_information(info, design.column_names, &near_singular);
  for (const auto& name : near_singular)
    fit.diagnostics.push_back("information near-singular in column '" + name +
                              "'");
  detail::fill_wald(fit.coefficients, cov, fit.std_errors, fit.z_values,
                    fit.p_values);

  fit.residual_deviance = detail::poisson_deviance(y, irls.mu, w);
  fit.null_deviance =
      detail::poisson_deviance(y, detail::poisson_null_mu(y, design.offset, w), w);
  if (!fit.converged)
    fit.diagnostics.push_back("IRLS did not converge; best iterate returned");
  detail::flag_extreme_coefficients(fit);
  return fit;
}

}  // namespace newsgravity
