#include <cmath>
#include <limits>

#include "glm_internal.hpp"
#include "newsgravity/errors.hpp"
#include "newsgravity/numerics.hpp"

namespace newsgravity {

using detail::kThetaDivergence;
using detail::kThetaMin;

double negbin_loglik(const DesignMatrix& design, const Eigen::VectorXd& beta,
                     double theta, Eigen::VectorXd* grad_beta,
                     double* grad_theta) {
  const Eigen::VectorXd eta = design.X * beta + design.offset;
  double ll = 0.0;
  double dtheta = 0.0;
  Eigen::VectorXd residual(design.y.size());
  const double log_theta = std::log(theta);
  const double lgamma_theta = std::lgamma(theta);
  const double digamma_theta = digamma(theta);
  for (Eigen::Index i = 0; i < design.y.size(); ++i) {
    const double w = design.row_weight(i);
    const double yi = design.y(i);
    const double mu = std::exp(std::min(eta(i), detail::kEtaClamp));
    ll += w * (std::lgamma(yi + theta) - lgamma_theta -
               std::lgamma(yi + 1.0) + theta * log_theta + yi * eta(i) -
               (yi + theta) * std::log(theta + mu));
    residual(i) = w * (yi - mu) * theta / (theta + mu);
    dtheta += w * (digamma(yi + theta) - digamma_theta + log_theta + 1.0 -
                   std::log(theta + mu) - (yi + theta) / (theta + mu));
  }
  if (grad_beta) *grad_beta = design.X.transpose() * residual;
  if (grad_theta) *grad_theta = dtheta;
  return ll;
}

namespace {

// Profile score in theta at fixed means, and its derivative.
struct ThetaScore {
  double score = 0.0;
  double derivative = 0.0;
};

ThetaScore theta_score(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                       const Eigen::VectorXd& w, double theta) {
  ThetaScore out;
  const double log_theta = std::log(theta);
  const double digamma_theta = digamma(theta);
  const double trigamma_theta = trigamma(theta);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double tm = theta + mu(i);
    out.score += w(i) * (digamma(y(i) + theta) - digamma_theta + log_theta -
                         std::log(tm) + 1.0 - (y(i) + theta) / tm);
    out.derivative +=
        w(i) * (trigamma(y(i) + theta) - trigamma_theta + 1.0 / theta -
                1.0 / tm - (mu(i) - y(i)) / (tm * tm));
  }
  return out;
}

/// Maximizes the theta profile with bracketed Newton steps; bisection when a
/// step leaves the bracket. Returns +infinity when the score stays positive
/// at the divergence cap (no overdispersion).
double update_theta(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                    const Eigen::VectorXd& w, double theta) {
  if (theta_score(y, mu, w, kThetaDivergence).score >= 0.0)
    return std::numeric_limits<double>::infinity();
  if (theta_score(y, mu, w, kThetaMin).score <= 0.0) return kThetaMin;
  double lo = kThetaMin;
  double hi = kThetaDivergence;
  theta = std::clamp(theta, lo, hi);
  for (int iter = 0; iter < 50; ++iter) {
    const ThetaScore s = theta_score(y, mu, w, theta);
    if (s.score > 0.0)
      lo = theta;
    else
      hi = theta;
    double next;
    if (s.derivative < 0.0) {
      next = theta - s.score / s.derivative;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    } else {
      next = 0.5 * (lo + hi);
    }
    if (std::abs(next - theta) <= 1e-10 * theta) return next;
    theta = next;
  }
  return theta;
}

}  // namespace

FitResult fit_negbin(const DesignMatrix& design, const FitOptions& options) {
  detail::validate_design(design);
  const Eigen::VectorXd& y = design.y;
  const Eigen::VectorXd& w = design.row_weight;

  if ((w.array() * y.array()).sum() <= 0.0)
    return detail::degenerate_zero_response(design, Family::NegBin);

  // Poisson fit gives the starting means and the divergence fallback.
  FitResult poisson = fit_poisson(design, options);

  // Method-of-moments dispersion from the Poisson residuals.
  Eigen::VectorXd mu =
      (design.X * poisson.coefficients + design.offset).array()
          .min(detail::kEtaClamp)
          .exp();
  double excess = 0.0;
  double scale = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double r = y(i) - mu(i);
    excess += w(i) * (r * r - mu(i));
    scale += w(i) * mu(i) * mu(i);
  }
  double theta = excess > 0.0 ? std::clamp(scale / excess, 1e-4, 1e7) : 1e7;

  Eigen::VectorXd beta = poisson.coefficients;
  bool diverged = false;
  bool converged = false;
  int iterations = 0;
  double ll_prev = -std::numeric_limits<double>::infinity();

  for (int outer = 0; outer < options.max_iterations; ++outer) {
    detail::IrlsResult irls = detail::irls_log_link(
        design.X, y, design.offset, w, theta, beta, design.column_names, 30,
        options.tol_beta, options.tol_loglik_rel);
    const double beta_delta = (irls.beta - beta).cwiseAbs().maxCoeff();
    beta = irls.beta;
    mu = irls.mu;

    const double theta_new = update_theta(y, mu, w, theta);
    if (!std::isfinite(theta_new)) {
      diverged = true;
      break;
    }
    const double theta_delta = std::abs(theta_new - theta) / theta;
    theta = theta_new;

    const double ll = negbin_loglik(design, beta, theta);
    iterations = outer + 1;
    const bool ll_converged =
        std::isfinite(ll_prev) &&
        std::abs(ll - ll_prev) <= options.tol_loglik_rel * (std::abs(ll) + 0.1);
    ll_prev = ll;
    if ((beta_delta < options.tol_beta && theta_delta < 1e-8) || ll_converged) {
      converged = true;
      break;
    }
  }

  if (diverged) {
    FitResult fit = poisson;
    fit.family = Family::NegBin;
    fit.theta.reset();
    fit.theta_diverged = true;
    fit.df = static_cast<int>(design.X.cols()) + 1;
    fit.aic = 2.0 * fit.df - 2.0 * fit.log_likelihood;
    fit.diagnostics.push_back(
        "dispersion diverged (no overdispersion); Poisson-limit fit reported");
    return fit;
  }

  FitResult fit;
  fit.family = Family::NegBin;
  fit.term_names = design.column_names;
  fit.coefficients = beta;
  fit.theta = theta;
  fit.converged = converged;
  fit.iterations = iterations;
  fit.log_likelihood = ll_prev;
  fit.df = static_cast<int>(design.X.cols()) + 1;  // dispersion is estimated
  fit.aic = 2.0 * fit.df - 2.0 * fit.log_likelihood;

  // Observed information for the coefficients at (beta, theta).
  Eigen::VectorXd info_weight(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double tm = theta + mu(i);
    info_weight(i) = w(i) * (y(i) + theta) * theta * mu(i) / (tm * tm);
  }
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

  fit.residual_deviance = detail::negbin_deviance(y, mu, w, theta);

  // Null model keeps the dispersion fixed at the full-model estimate.
  detail::IrlsResult null_irls = detail::irls_log_link(
      Eigen::MatrixXd::Ones(y.size(), 1), y, design.offset, w, theta,
      Eigen::VectorXd::Zero(1), {"intercept"}, options.max_iterations,
      options.tol_beta, options.tol_loglik_rel);
  fit.null_deviance = detail::negbin_deviance(y, null_irls.mu, w, theta);

  if (!fit.converged)
    fit.diagnostics.push_back(
        "alternating estimation did not converge; best iterate returned");
  detail::flag_extreme_coefficients(fit);
  return fit;
}

}  // namespace newsgravity
