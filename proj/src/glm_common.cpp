#include <cmath>
#include <limits>

#include "glm_internal.hpp"
#include "newsgravity/errors.hpp"
#include "newsgravity/numerics.hpp"

namespace newsgravity {

namespace detail {

void validate_design(const DesignMatrix& design) {
  if (design.X.rows() == 0) throw InvalidDesignError("design has no rows");
  if (design.X.rows() < design.X.cols())
    throw InvalidDesignError("design has fewer rows than columns");
  if (design.y.size() != design.X.rows() ||
      design.offset.size() != design.X.rows() ||
      design.row_weight.size() != design.X.rows())
    throw InvalidDesignError("design vectors have inconsistent lengths");
  if (static_cast<Eigen::Index>(design.column_names.size()) != design.X.cols())
    throw InvalidDesignError("design column names do not match the matrix");
  if (!design.X.allFinite() || !design.y.allFinite() ||
      !design.offset.allFinite() || !design.row_weight.allFinite())
    throw InvalidDesignError("design contains non-finite entries");
  if ((design.y.array() < 0.0).any())
    throw InvalidDesignError("response contains negative values");
  if ((design.row_weight.array() < 0.0).any())
    throw InvalidDesignError("row weights must be nonnegative");
}

Eigen::VectorXd solve_weighted(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& weights,
                               const Eigen::VectorXd& z,
                               const std::vector<std::string>& names) {
  const Eigen::MatrixXd WX = X.array().colwise() * weights.array();
  const Eigen::MatrixXd A = X.transpose() * WX;
  const Eigen::VectorXd b =
      X.transpose() * (weights.array() * z.array()).matrix();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  lu.setThreshold(1e-10);
  if (lu.rank() < A.cols()) {
    Eigen::VectorXd kernel = lu.kernel().col(0);
    Eigen::Index worst = 0;
    kernel.cwiseAbs().maxCoeff(&worst);
    throw SingularSystemError(
        "weighted normal system is rank deficient; column '" +
        names[static_cast<std::size_t>(worst)] +
        "' is collinear with the remaining columns");
  }
  return lu.solve(b);
}

Eigen::MatrixXd invert_information(const Eigen::MatrixXd& info,
                                   const std::vector<std::string>& names,
                                   std::vector<std::string>* near_singular) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
  lu.setThreshold(1e-12);
  if (lu.rank() == info.cols()) return lu.inverse();
  if (near_singular) {
    const Eigen::MatrixXd kernel = lu.kernel();
    for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
      Eigen::Index worst = 0;
      kernel.col(c).cwiseAbs().maxCoeff(&worst);
      near_singular->push_back(names[static_cast<std::size_t>(worst)]);
    }
  }
  // Pseudo-inverse; deficient directions surface as huge variances below.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(info);
  Eigen::MatrixXd cov = cod.pseudoInverse();
  return cov;
}

void fill_wald(const Eigen::VectorXd& coefficients,
               const Eigen::MatrixXd& covariance, Eigen::VectorXd& std_errors,
               Eigen::VectorXd& z_values, Eigen::VectorXd& p_values) {
  const Eigen::Index k = coefficients.size();
  std_errors.resize(k);
  z_values.resize(k);
  p_values.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double var = covariance(j, j);
    std_errors(j) = var > 0.0 ? std::sqrt(var)
                              : std::numeric_limits<double>::infinity();
    z_values(j) = std::isfinite(std_errors(j)) && std_errors(j) > 0.0
                      ? coefficients(j) / std_errors(j)
                      : 0.0;
    p_values(j) = two_sided_p(z_values(j));
  }
}

IrlsResult irls_log_link(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& offset,
                         const Eigen::VectorXd& prior_weight, double theta,
                         const Eigen::VectorXd& beta_init,
                         const std::vector<std::string>& names,
                         int max_iterations, double tol_beta,
                         double tol_loglik_rel) {
  const bool poisson = !std::isfinite(theta);
  IrlsResult result;
  result.beta = beta_init;

  auto loglik = [&](const Eigen::VectorXd& eta, const Eigen::VectorXd& mu) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double w = prior_weight(i);
      if (w == 0.0) continue;
      if (poisson) {
        ll += w * (y(i) * eta(i) - mu(i) - std::lgamma(y(i) + 1.0));
      } else {
        ll += w * (std::lgamma(y(i) + theta) - std::lgamma(theta) -
                   std::lgamma(y(i) + 1.0) + theta * std::log(theta) +
                   y(i) * eta(i) - (y(i) + theta) * std::log(theta + mu(i)));
      }
    }
    return ll;
  };

  Eigen::VectorXd eta, mu;
  if (beta_init.isZero(0.0)) {
    // Standard GLM warm start: mean initialized near the data.
    mu = y.array() + 0.1;
    eta = mu.array().log();
  } else {
    eta = X * beta_init + offset;
    mu = eta.array().min(kEtaClamp).exp();
  }
  double ll_prev = -std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < max_iterations; ++iter) {
    Eigen::VectorXd w_irls(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double m = std::max(mu(i), kWeightFloor);
      const double w =
          poisson ? m : m * theta / (theta + m);
      w_irls(i) = std::max(prior_weight(i) * w, kWeightFloor);
    }
    Eigen::VectorXd z(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double m = std::max(mu(i), kWeightFloor);
      z(i) = (eta(i) - offset(i)) + (y(i) - m) / m;
    }
    Eigen::VectorXd proposal = solve_weighted(X, w_irls, z, names);

    // Halve the step while the likelihood degrades.
    Eigen::VectorXd beta_new = proposal;
    Eigen::VectorXd eta_new, mu_new;
    double ll_new = 0.0;
    double step = 1.0;
    for (int half = 0; half < 30; ++half) {
      beta_new = result.beta + step * (proposal - result.beta);
      eta_new = X * beta_new + offset;
      mu_new = eta_new.array().min(kEtaClamp).exp();
      ll_new = loglik(eta_new, mu_new);
      if (std::isfinite(ll_new) &&
          (iter == 0 || ll_new >= ll_prev - 1e-10 * (std::abs(ll_prev) + 1.0)))
        break;
      step *= 0.5;
    }

    const double delta = (beta_new - result.beta).cwiseAbs().maxCoeff();
    result.beta = beta_new;
    eta = eta_new;
    mu = mu_new;
    result.iterations = iter + 1;
    const bool ll_converged =
        std::isfinite(ll_prev) &&
        std::abs(ll_new - ll_prev) <=
            tol_loglik_rel * (std::abs(ll_new) + 0.1);
    ll_prev = ll_new;
    if (delta < tol_beta || ll_converged) {
      result.converged = true;
      break;
    }
  }
  result.eta = eta;
  result.mu = mu;
  result.loglik = ll_prev;
  return result;
}

double poisson_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                        const Eigen::VectorXd& w) {
  double dev = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    dev += 2.0 * w(i) * (xlogy(y(i), y(i) / mu(i)) - (y(i) - mu(i)));
  return dev;
}

double negbin_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                       const Eigen::VectorXd& w, double theta) {
  double dev = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    dev += 2.0 * w(i) *
           (xlogy(y(i), y(i) / mu(i)) -
            (y(i) + theta) * std::log((y(i) + theta) / (mu(i) + theta)));
  return dev;
}

Eigen::VectorXd poisson_null_mu(const Eigen::VectorXd& y,
                                const Eigen::VectorXd& offset,
                                const Eigen::VectorXd& w) {
  const double num = (w.array() * y.array()).sum();
  const double den = (w.array() * offset.array().exp()).sum();
  const double b0 = std::log(num / den);
  return (offset.array() + b0).exp();
}

void flag_extreme_coefficients(FitResult& fit) {
  for (Eigen::Index j = 0; j < fit.coefficients.size(); ++j)
    if (std::abs(fit.coefficients(j)) > 25.0)
      fit.diagnostics.push_back(
          "coefficient on '" + fit.term_names[static_cast<std::size_t>(j)] +
          "' is extreme; separated or degenerate stratum suspected");
}

FitResult degenerate_zero_response(const DesignMatrix& design, Family family) {
  FitResult fit;
  fit.family = family;
  fit.term_names = design.column_names;
  const Eigen::Index k = design.X.cols();
  fit.coefficients = Eigen::VectorXd::Zero(k);
  fit.coefficients(0) = -690.0;  // exp underflows to an all-zero mean
  fit.std_errors =
      Eigen::VectorXd::Constant(k, std::numeric_limits<double>::infinity());
  fit.z_values = Eigen::VectorXd::Zero(k);
  fit.p_values = Eigen::VectorXd::Ones(k);
  fit.log_likelihood = 0.0;
  fit.df = static_cast<int>(k) + (family == Family::NegBin ? 1 : 0);
  fit.aic = 2.0 * fit.df;
  fit.null_deviance = 0.0;
  fit.residual_deviance = 0.0;
  fit.converged = false;
  fit.iterations = 0;
  fit.diagnostics.push_back(
      "response is identically zero; the mean model diverges and the "
      "intercept has no finite maximum");
  return fit;
}

}  // namespace detail

DevianceExplained deviance_explained(const FitResult& fit) {
  if (fit.null_deviance == 0.0)
    throw NullModelOnlyError("null deviance is zero; nothing to explain");
  DevianceExplained out;
  out.value = 1.0 - fit.residual_deviance / fit.null_deviance;
  if (out.value < 0.0) {
    out.value = 0.0;
    out.clamped = true;
  } else if (out.value > 1.0) {
    out.value = 1.0;
    out.clamped = true;
  }
  return out;
}

std::vector<WaldRow> wald_report(const FitResult& fit) {
  if (!fit.converged)
    throw Error("coefficient table requires a converged fit");
  for (Eigen::Index j = 0; j < fit.std_errors.size(); ++j)
    if (!std::isfinite(fit.std_errors(j)))
      throw Error(
          "observed information is not invertible; column '" +
          fit.term_names[static_cast<std::size_t>(j)] + "' is near-singular");
  std::vector<WaldRow> rows;
  for (Eigen::Index j = 0; j < fit.coefficients.size(); ++j)
    rows.push_back({fit.term_names[static_cast<std::size_t>(j)],
                    fit.coefficients(j), fit.std_errors(j), fit.z_values(j),
                    fit.p_values(j)});
  for (Eigen::Index j = 0; j < fit.zero_coefficients.size(); ++j)
    rows.push_back({"zero_" + fit.term_names[static_cast<std::size_t>(j)],
                    fit.zero_coefficients(j), fit.zero_std_errors(j),
                    fit.zero_z_values(j), fit.zero_p_values(j)});
  return rows;
}

FitResult fit_family(Family family, const DesignMatrix& design,
                     const FitOptions& options) {
  switch (family) {
    case Family::Poisson: return fit_poisson(design, options);
    case Family::NegBin: return fit_negbin(design, options);
    case Family::Zip: return fit_zip(design, options);
  }
  throw ConfigError("unknown family");
}

Eigen::VectorXd predict_mean(const FitResult& fit, const DesignMatrix& design) {
  const Eigen::VectorXd eta =
      design.X * fit.coefficients + design.offset;
  Eigen::VectorXd mu = eta.array().min(detail::kEtaClamp).exp();
  if (fit.family == Family::Zip) {
    const Eigen::VectorXd g = design.X * fit.zero_coefficients;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      const double pi = 1.0 / (1.0 + std::exp(-g(i)));
      mu(i) *= 1.0 - pi;
    }
  }
  return mu;
}

Eigen::VectorXd predict_variance(const FitResult& fit,
                                 const DesignMatrix& design) {
  const Eigen::VectorXd eta = design.X * fit.coefficients + design.offset;
  Eigen::VectorXd var(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double mu = std::exp(std::min(eta(i), detail::kEtaClamp));
    switch (fit.family) {
      case Family::Poisson:
        var(i) = mu;
        break;
      case Family::NegBin:
        var(i) = fit.theta ? mu + mu * mu / *fit.theta : mu;
        break;
      case Family::Zip: {
        const double g = design.X.row(i).dot(fit.zero_coefficients);
        const double pi = 1.0 / (1.0 + std::exp(-g));
        var(i) = (1.0 - pi) * mu * (1.0 + pi * mu);
        break;
      }
    }
  }
  return var;
}

Eigen::VectorXd score_at_optimum(const FitResult& fit,
                                 const DesignMatrix& design) {
  switch (fit.family) {
    case Family::Poisson: {
      Eigen::VectorXd grad;
      poisson_loglik(design, fit.coefficients, &grad);
      return grad;
    }
    case Family::NegBin: {
      if (!fit.theta) {
        Eigen::VectorXd grad;
        poisson_loglik(design, fit.coefficients, &grad);
        return grad;
      }
      Eigen::VectorXd grad;
      negbin_loglik(design, fit.coefficients, *fit.theta, &grad, nullptr);
      return grad;
    }
    case Family::Zip: {
      Eigen::VectorXd grad_beta, grad_gamma;
      zip_loglik(design, fit.coefficients, fit.zero_coefficients, &grad_beta,
                 &grad_gamma);
      Eigen::VectorXd stacked(grad_beta.size() + grad_gamma.size());
      stacked << grad_beta, grad_gamma;
      return stacked;
    }
  }
  throw ConfigError("unknown family");
}

}  // namespace newsgravity
