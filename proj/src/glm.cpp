#include "glm.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "design.hpp"
#include "error.hpp"
#include "stats.hpp"

namespace mif {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kGradTol = 1e-10;
constexpr int kMaxIter = 100;
constexpr double kSaturatedEta = 30.0;
constexpr double kDivergedEta = 300.0;

double bernoulli_loglik(const VectorXd& y, const VectorXd& eta) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    double t = eta[i];
    double log1pe = t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
    ll += y[i] * t - log1pe;
  }
  return ll;
}

MatrixXd inverse_information(const MatrixXd& H, const char* who) {
  Eigen::LDLT<MatrixXd> ldlt(H);
  double dmax = H.diagonal().maxCoeff();
  if (ldlt.info() != Eigen::Success || !(dmax > 0.0) ||
      ldlt.vectorD().minCoeff() < 1e-12 * dmax)
    throw NumericError(std::string(who) + ": singular information matrix");
  MatrixXd inv = ldlt.solve(MatrixXd::Identity(H.rows(), H.cols()));
  return ((inv + inv.transpose()) * 0.5).eval();
}

}  // namespace

FittedModel fit_logit(const DataTable& data, const std::string& ivar,
                      const std::vector<std::string>& predictors) {
  FitData fd = build_fit_data(data, ivar, predictors);
  const Eigen::Index n = fd.X.rows();
  const Eigen::Index k1 = fd.X.cols();
  if (n == 0) throw DataError("fit_logit: no observed rows for '" + ivar + "'");

  for (Eigen::Index i = 0; i < n; ++i)
    if (fd.y[i] != 0.0 && fd.y[i] != 1.0)
      throw DataError("fit_logit: '" + ivar + "' is not 0/1 on row " +
                      std::to_string(fd.rows[static_cast<std::size_t>(i)] + 1));

  double ybar = fd.y.mean();
  if (ybar == 0.0 || ybar == 1.0)
    throw NumericError("fit_logit: perfect prediction, '" + ivar +
                       "' is constant; no maximum likelihood estimate exists");
  if (!full_column_rank(fd.X))
    throw NumericError("fit_logit: singular information matrix (rank-deficient design)");

  VectorXd beta = VectorXd::Zero(k1);
  VectorXd eta = VectorXd::Zero(n);
  double ll = bernoulli_loglik(fd.y, eta);

  bool converged = false;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    VectorXd mu(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      mu[i] = expit(eta[i]);
      w[i] = mu[i] * (1.0 - mu[i]);
    }
    VectorXd grad = fd.X.transpose() * (fd.y - mu);
    if (grad.lpNorm<Eigen::Infinity>() < kGradTol) {
      converged = true;
      break;
    }
    MatrixXd H = fd.X.transpose() * w.asDiagonal() * fd.X;
    Eigen::LDLT<MatrixXd> ldlt(H);
    if (ldlt.info() != Eigen::Success ||
        ldlt.vectorD().minCoeff() < 1e-14 * H.diagonal().maxCoeff())
      throw NumericError("fit_logit: singular information matrix");
    VectorXd delta = ldlt.solve(grad);

    double slope = grad.dot(delta);
    double t = 1.0;
    VectorXd eta_try;
    double ll_try;
    while (true) {
      eta_try = eta + t * (fd.X * delta);
      ll_try = bernoulli_loglik(fd.y, eta_try);
      if (ll_try >= ll + 1e-4 * t * slope || t < 1e-12) break;
      t *= 0.5;
    }
    beta += t * delta;
    eta = eta_try;
    ll = ll_try;

    if (eta.lpNorm<Eigen::Infinity>() > kDivergedEta)
      throw NumericError("fit_logit: separation detected, estimates diverge");
  }
  if (!converged)
    throw NumericError("fit_logit: no convergence in " + std::to_string(kMaxIter) +
                       " iterations");

  FittedModel m;
  m.kind = ModelKind::logit;
  m.colnames = fd.colnames;
  m.n_obs = static_cast<long>(n);
  m.coef = beta.transpose();

  VectorXd mu(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mu[i] = expit(eta[i]);
    w[i] = mu[i] * (1.0 - mu[i]);
    if ((mu[i] < 1e-10 || mu[i] > 1.0 - 1e-10) && std::abs(eta[i]) > kSaturatedEta)
      m.perfect_prediction = true;
  }
  MatrixXd H = fd.X.transpose() * w.asDiagonal() * fd.X;
  m.cov = inverse_information(H, "fit_logit");
  return m;
}

FittedModel fit_mlogit(const DataTable& data, const std::string& ivar,
                       const std::vector<std::string>& predictors) {
  FitData fd = build_fit_data(data, ivar, predictors);
  const Eigen::Index n = fd.X.rows();
  const Eigen::Index k1 = fd.X.cols();
  if (n == 0) throw DataError("fit_mlogit: no observed rows for '" + ivar + "'");

  std::set<double> level_set;
  for (Eigen::Index i = 0; i < n; ++i) level_set.insert(fd.y[i]);
  std::vector<double> levels(level_set.begin(), level_set.end());
  const auto K = static_cast<Eigen::Index>(levels.size());
  if (K < 2)
    throw DataError("fit_mlogit: '" + ivar + "' takes a single value; need K >= 2 levels");
  if (!full_column_rank(fd.X))
    throw NumericError("fit_mlogit: singular information matrix (rank-deficient design)");

  std::vector<Eigen::Index> y_idx(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    auto it = std::lower_bound(levels.begin(), levels.end(), fd.y[i]);
    y_idx[static_cast<std::size_t>(i)] = it - levels.begin();
  }

  const Eigen::Index np = (K - 1) * k1;  // level-major stacked parameters
  VectorXd theta = VectorXd::Zero(np);

  // probabilities (n x K) and log-likelihood at the current parameters
  MatrixXd prob(n, K);
  auto refresh = [&](const VectorXd& par) -> double {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double mx = 0.0;
      for (Eigen::Index a = 1; a < K; ++a) {
        double eta = fd.X.row(i).dot(par.segment((a - 1) * k1, k1));
        prob(i, a) = eta;  // store eta temporarily
        mx = std::max(mx, eta);
      }
      double denom = std::exp(-mx);
      for (Eigen::Index a = 1; a < K; ++a) {
        prob(i, a) = std::exp(prob(i, a) - mx);
        denom += prob(i, a);
      }
      prob(i, 0) = std::exp(-mx) / denom;
      for (Eigen::Index a = 1; a < K; ++a) prob(i, a) /= denom;
      ll += std::log(std::max(prob(i, y_idx[static_cast<std::size_t>(i)]), 1e-300));
    }
    return ll;
  };

  double ll = refresh(theta);
  bool converged = false;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    VectorXd grad = VectorXd::Zero(np);
    MatrixXd H = MatrixXd::Zero(np, np);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto xi = fd.X.row(i).transpose();
      for (Eigen::Index a = 1; a < K; ++a) {
        double ind = y_idx[static_cast<std::size_t>(i)] == a ? 1.0 : 0.0;
        grad.segment((a - 1) * k1, k1) += (ind - prob(i, a)) * xi;
        for (Eigen::Index b = 1; b <= a; ++b) {
          double wab = prob(i, a) * ((a == b ? 1.0 : 0.0) - prob(i, b));
          H.block((a - 1) * k1, (b - 1) * k1, k1, k1) += wab * (xi * xi.transpose());
        }
      }
    }
    for (Eigen::Index a = 0; a < K - 1; ++a)
      for (Eigen::Index b = a + 1; b < K - 1; ++b)
        H.block(a * k1, b * k1, k1, k1) = H.block(b * k1, a * k1, k1, k1).transpose();

    if (grad.lpNorm<Eigen::Infinity>() < kGradTol) {
      converged = true;
      break;
    }
    Eigen::LDLT<MatrixXd> ldlt(H);
    if (ldlt.info() != Eigen::Success ||
        ldlt.vectorD().minCoeff() < 1e-14 * H.diagonal().maxCoeff())
      throw NumericError("fit_mlogit: singular information matrix");
    VectorXd delta = ldlt.solve(grad);

    double slope = grad.dot(delta);
    double t = 1.0;
    while (true) {
      double ll_try = refresh(theta + t * delta);
      if (ll_try >= ll + 1e-4 * t * slope || t < 1e-12) {
        theta += t * delta;
        ll = ll_try;
        break;
      }
      t *= 0.5;
    }

    if (theta.lpNorm<Eigen::Infinity>() > kDivergedEta)
      throw NumericError("fit_mlogit: separation detected, estimates diverge");
  }
  if (!converged)
    throw NumericError("fit_mlogit: no convergence in " + std::to_string(kMaxIter) +
                       " iterations");

  FittedModel m;
  m.kind = ModelKind::mlogit;
  m.colnames = fd.colnames;
  m.level_values = levels;
  m.n_obs = static_cast<long>(n);
  m.coef = MatrixXd::Zero(K, k1);
  for (Eigen::Index a = 1; a < K; ++a)
    m.coef.row(a) = theta.segment((a - 1) * k1, k1).transpose();

  refresh(theta);
  for (Eigen::Index i = 0; i < n && !m.perfect_prediction; ++i) {
    double eta_max = 0.0;
    for (Eigen::Index a = 1; a < K; ++a)
      eta_max = std::max(eta_max,
                         std::abs(fd.X.row(i).dot(theta.segment((a - 1) * k1, k1))));
    for (Eigen::Index a = 0; a < K; ++a)
      if ((prob(i, a) < 1e-10 || prob(i, a) > 1.0 - 1e-10) && eta_max > kSaturatedEta)
        m.perfect_prediction = true;
  }

  // final information for the covariance
  MatrixXd H = MatrixXd::Zero(np, np);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto xi = fd.X.row(i).transpose();
    for (Eigen::Index a = 1; a < K; ++a)
      for (Eigen::Index b = 1; b <= a; ++b) {
        double wab = prob(i, a) * ((a == b ? 1.0 : 0.0) - prob(i, b));
        H.block((a - 1) * k1, (b - 1) * k1, k1, k1) += wab * (xi * xi.transpose());
      }
  }
  for (Eigen::Index a = 0; a < K - 1; ++a)
    for (Eigen::Index b = a + 1; b < K - 1; ++b)
      H.block(a * k1, b * k1, k1, k1) = H.block(b * k1, a * k1, k1, k1).transpose();
  m.cov = inverse_information(H, "fit_mlogit");
  return m;
}

}  // namespace mif
