#include <cmath>
#include <limits>

#include "glm_internal.hpp"
#include "newsgravity/errors.hpp"

namespace newsgravity {

using detail::kEtaClamp;
using detail::kZeroPartBound;

namespace {

inline double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }
inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

double zip_loglik(const DesignMatrix& design, const Eigen::VectorXd& beta,
                  const Eigen::VectorXd& gamma, Eigen::VectorXd* grad_beta,
                  Eigen::VectorXd* grad_gamma) {
  const Eigen::VectorXd eta = design.X * beta + design.offset;
  const Eigen::VectorXd g = design.X * gamma;
  const bool want_grad = grad_beta || grad_gamma;
  Eigen::VectorXd d_eta, d_g;
  if (want_grad) {
    d_eta.resize(design.y.size());
    d_g.resize(design.y.size());
  }
  double ll = 0.0;
  for (Eigen::Index i = 0; i < design.y.size(); ++i) {
    const double w = design.row_weight(i);
    const double yi = design.y(i);
    const double mu = std::exp(std::min(eta(i), kEtaClamp));
    const double log_pi = -softplus(-g(i));
    const double log_1mpi = -softplus(g(i));
    if (yi == 0.0) {
      // log(pi + (1-pi) exp(-mu)) via log-sum-exp
      const double a = log_pi;
      const double b = log_1mpi - mu;
      const double hi = std::max(a, b);
      const double log_mix = hi + std::log1p(std::exp(std::min(a, b) - hi));
      ll += w * log_mix;
      if (want_grad) {
        const double pi = sigmoid(g(i));
        const double mix = std::exp(log_mix);
        d_g(i) = w * pi * (1.0 - pi) * (1.0 - std::exp(-mu)) / mix;
        d_eta(i) = -w * (1.0 - pi) * mu * std::exp(-mu) / mix;
      }
    } else {
      ll += w * (log_1mpi + yi * eta(i) - mu - std::lgamma(yi + 1.0));
      if (want_grad) {
        d_g(i) = -w * sigmoid(g(i));
        d_eta(i) = w * (yi - mu);
      }
    }
  }
  if (grad_beta) *grad_beta = design.X.transpose() * d_eta;
  if (grad_gamma) *grad_gamma = design.X.transpose() * d_g;
  return ll;
}

namespace {

Eigen::VectorXd logistic_irls(const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& z,
                              const Eigen::VectorXd& w,
                              Eigen::VectorXd gamma,
                              const std::vector<std::string>& names,
                              double tol_beta, bool* bounded) {
  for (int iter = 0; iter < 30; ++iter) {
    const Eigen::VectorXd g = X * gamma;
    Eigen::VectorXd weights(z.size());
    Eigen::VectorXd working(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double p = std::clamp(sigmoid(g(i)), 1e-10, 1.0 - 1e-10);
      const double v = p * (1.0 - p);
      weights(i) = std::max(w(i) * v, detail::kWeightFloor);
      working(i) = g(i) + (z(i) - p) / v;
    }
    Eigen::VectorXd next = detail::solve_weighted(X, weights, working, names);
    for (Eigen::Index j = 0; j < next.size(); ++j) {
      if (std::abs(next(j)) > kZeroPartBound) {
        next(j) = std::copysign(kZeroPartBound, next(j));
        if (bounded) *bounded = true;
      }
    }
    const double delta = (next - gamma).cwiseAbs().maxCoeff();
    gamma = next;
    if (delta < tol_beta) break;
  }
  return gamma;
}

Eigen::MatrixXd observed_information_fd(const DesignMatrix& design,
                                        const Eigen::VectorXd& beta,
                                        const Eigen::VectorXd& gamma) {
  const Eigen::Index k = beta.size();
  const Eigen::Index dim = 2 * k;
  auto gradient_at = [&](const Eigen::VectorXd& phi) {
    Eigen::VectorXd gb, gg;
    zip_loglik(design, phi.head(k), phi.tail(k), &gb, &gg);
    Eigen::VectorXd out(dim);
    out << gb, gg;
    return out;
  };
  Eigen::VectorXd phi(dim);
  phi << beta, gamma;
  // Differentiated analytic score; accurate enough for Wald variances.
  Eigen::MatrixXd hessian(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double h = 1e-5 * (1.0 + std::abs(phi(j)));
    Eigen::VectorXd hi = phi, lo = phi;
    hi(j) += h;
    lo(j) -= h;
    hessian.col(j) = (gradient_at(hi) - gradient_at(lo)) / (2.0 * h);
  }
  hessian = 0.5 * (hessian + hessian.transpose()).eval();
  return -hessian;
}

FitResult fit_zip_impl(const DesignMatrix& design, const FitOptions& options,
                       bool with_null) {
  detail::validate_design(design);
  const Eigen::VectorXd& y = design.y;
  const Eigen::VectorXd& w = design.row_weight;
  const Eigen::Index k = design.X.cols();

  if ((w.array() * y.array()).sum() <= 0.0) {
    FitResult fit = detail::degenerate_zero_response(design, Family::Zip);
    fit.zero_coefficients = Eigen::VectorXd::Zero(k);
    fit.zero_coefficients(0) = kZeroPartBound;
    fit.zero_std_errors =
        Eigen::VectorXd::Constant(k, std::numeric_limits<double>::infinity());
    fit.zero_z_values = Eigen::VectorXd::Zero(k);
    fit.zero_p_values = Eigen::VectorXd::Ones(k);
    fit.df = static_cast<int>(2 * k);
    fit.aic = 2.0 * fit.df;
    return fit;
  }

  double weight_total = 0.0;
  double zero_weight = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    weight_total += w(i);
    if (y(i) == 0.0) zero_weight += w(i);
  }
  if (zero_weight == 0.0)
    throw NoZerosError("zero-inflated model requires zero response cells");

  FitResult poisson = fit_poisson(design, options);
  Eigen::VectorXd beta = poisson.coefficients;

  // Start the mixing weight at the share of zeros unexplained by the
  // Poisson component.
  Eigen::VectorXd mu =
      (design.X * beta + design.offset).array().min(kEtaClamp).exp();
  double expected_zero = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    expected_zero += w(i) * std::exp(-mu(i));
  const double p0_obs = zero_weight / weight_total;
  const double p0_model = expected_zero / weight_total;
  const double excess =
      std::clamp((p0_obs - p0_model) / std::max(1.0 - p0_model, 1e-6), 0.02, 0.9);
  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(k);
  gamma(0) = std::log(excess / (1.0 - excess));

  double ll = zip_loglik(design, beta, gamma);
  bool converged = false;
  bool bounded = false;
  int iterations = 0;

  for (int iter = 0; iter < options.max_em_iterations; ++iter) {
    // E step: responsibility of the structural-zero component.
    const Eigen::VectorXd eta = design.X * beta + design.offset;
    const Eigen::VectorXd g = design.X * gamma;
    Eigen::VectorXd resp = Eigen::VectorXd::Zero(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (y(i) != 0.0) continue;
      const double mu_i = std::exp(std::min(eta(i), kEtaClamp));
      const double log_pi = -softplus(-g(i));
      const double log_1mpi = -softplus(g(i));
      resp(i) = 1.0 / (1.0 + std::exp(log_1mpi - mu_i - log_pi));
    }

    // M step: weighted Poisson for the count part, weighted logistic for
    // the zero part.
    const Eigen::VectorXd count_weight =
        (w.array() * (1.0 - resp.array())).matrix();
    detail::IrlsResult irls = detail::irls_log_link(
        design.X, y, design.offset, count_weight,
        std::numeric_limits<double>::infinity(), beta, design.column_names, 30,
        options.tol_beta, options.tol_loglik_rel);
    const double delta_beta = (irls.beta - beta).cwiseAbs().maxCoeff();
    beta = irls.beta;
    Eigen::VectorXd gamma_new =
        logistic_irls(design.X, resp, w, gamma, design.column_names,
                      options.tol_beta, &bounded);
    const double delta_gamma = (gamma_new - gamma).cwiseAbs().maxCoeff();
    gamma = gamma_new;

    const double ll_new = zip_loglik(design, beta, gamma);
    iterations = iter + 1;
    const bool ll_converged =
        std::abs(ll_new - ll) <= options.tol_loglik_rel * (std::abs(ll_new) + 0.1);
    ll = ll_new;
    if (ll_converged || std::max(delta_beta, delta_gamma) < options.tol_beta) {
      converged = true;
      break;
    }
  }

  FitResult fit;
  fit.family = Family::Zip;
  fit.term_names = design.column_names;
  fit.coefficients = beta;
  fit.zero_coefficients = gamma;
  fit.converged = converged;
  fit.iterations = iterations;
  fit.log_likelihood = ll;
  fit.df = static_cast<int>(2 * k);
  fit.aic = 2.0 * fit.df - 2.0 * fit.log_likelihood;
  if (bounded)
    fit.diagnostics.push_back(
        "zero-part coefficient clamped at the boundary (degenerate mixture)");

  const Eigen::MatrixXd info = observed_information_fd(design, beta, gamma);
  std::vector<std::string> stacked_names;
  for (const auto& name : design.column_names) stacked_names.push_back(name);
  for (const auto& name : design.column_names)
    stacked_names.push_back("zero_" + name);
  std::vector<std::string> near_singular;
  const Eigen::MatrixXd cov =
      detail::invert_information(info, stacked_names, &near_singular);
  for (const auto& name : near_singular)
    fit.diagnostics.push_back("information near-singular in column '" + name +
                              "'");
  Eigen::VectorXd stacked(2 * k);
  stacked << beta, gamma;
  Eigen::VectorXd se, z, p;
  detail::fill_wald(stacked, cov, se, z, p);
  fit.std_errors = se.head(k);
  fit.z_values = z.head(k);
  fit.p_values = p.head(k);
  fit.zero_std_errors = se.tail(k);
  fit.zero_z_values = z.tail(k);
  fit.zero_p_values = p.tail(k);

  // Deviance against the saturated mixture (every cell fitted exactly).
  double saturated = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y(i) > 0.0)
      saturated += w(i) * (y(i) * std::log(y(i)) - y(i) -
                           std::lgamma(y(i) + 1.0));
  fit.residual_deviance = 2.0 * (saturated - fit.log_likelihood);

  if (with_null) {
    DesignMatrix null_design;
    null_design.column_names = {"intercept"};
    null_design.X = Eigen::MatrixXd::Ones(y.size(), 1);
    null_design.y = y;
    null_design.offset = design.offset;
    null_design.row_weight = w;
    FitResult null_fit = fit_zip_impl(null_design, options, false);
    fit.null_deviance = 2.0 * (saturated - null_fit.log_likelihood);
  }

  if (!fit.converged)
    fit.diagnostics.push_back(
        "EM did not converge; best iterate returned");
  detail::flag_extreme_coefficients(fit);
  return fit;
}

}  // namespace

FitResult fit_zip(const DesignMatrix& design, const FitOptions& options) {
  return fit_zip_impl(design, options, true);
}

}  // namespace newsgravity
