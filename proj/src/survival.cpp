#include "survival.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"

namespace mif {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void load_time_event(const DataTable& data, const std::string& time_col,
                     const std::string& event_col, std::vector<double>& time,
                     std::vector<double>& event) {
  const Column& tc = data.column(time_col);
  const Column& ec = data.column(event_col);
  time.resize(data.n_rows());
  event.resize(data.n_rows());
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    if (!tc.observed(i) || !ec.observed(i))
      throw DataError("survival: missing time/event on row " + std::to_string(i + 1));
    if (!(tc.value(i) > 0.0))
      throw DataError("survival: nonpositive time on row " + std::to_string(i + 1));
    if (ec.value(i) != 0.0 && ec.value(i) != 1.0)
      throw DataError("survival: event indicator not 0/1 on row " + std::to_string(i + 1));
    time[i] = tc.value(i);
    event[i] = ec.value(i);
  }
}

}  // namespace

SurvivalColumns nelson_aalen(const DataTable& data, const std::string& time_col,
                             const std::string& event_col) {
  SurvivalColumns out;
  load_time_event(data, time_col, event_col, out.time, out.event);
  const std::size_t n = out.time.size();
  out.cumhaz.assign(n, 0.0);
  if (n == 0) return out;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return out.time[a] < out.time[b]; });

  // walk distinct times in ascending order; at each, d/n_at_risk accrues
  double hazard = 0.0;
  std::size_t at_risk = n;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    double t = out.time[order[i]];
    std::size_t deaths = 0;
    while (j < n && out.time[order[j]] == t) {
      if (out.event[order[j]] == 1.0) ++deaths;
      ++j;
    }
    if (deaths > 0)
      hazard += static_cast<double>(deaths) / static_cast<double>(at_risk);
    for (std::size_t k = i; k < j; ++k) out.cumhaz[order[k]] = hazard;
    at_risk -= j - i;
    i = j;
  }
  return out;
}

CoxFit fit_cox(const DataTable& data, const std::string& time_col,
               const std::string& event_col, const std::vector<std::string>& terms) {
  std::vector<double> time, event;
  load_time_event(data, time_col, event_col, time, event);
  const auto n = static_cast<Eigen::Index>(time.size());
  const auto k = static_cast<Eigen::Index>(terms.size());
  if (k == 0) throw DataError("fit_cox: no model terms");

  MatrixXd X(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Column& c = data.column(terms[static_cast<std::size_t>(j)]);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!c.observed(static_cast<std::size_t>(i)))
        throw DataError("fit_cox: '" + terms[static_cast<std::size_t>(j)] +
                        "' missing on row " + std::to_string(i + 1));
      X(i, j) = c.value(static_cast<std::size_t>(i));
    }
  }

  std::size_t n_events = 0;
  for (double e : event) n_events += e == 1.0 ? 1 : 0;
  if (n_events == 0) throw NumericError("fit_cox: no events");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return time[static_cast<std::size_t>(a)] > time[static_cast<std::size_t>(b)];
  });

  // Breslow log partial likelihood with score and information; descending
  // time so the risk-set sums accumulate incrementally.
  auto evaluate = [&](const VectorXd& beta, VectorXd* grad, MatrixXd* info) -> double {
    VectorXd eta = X * beta;
    double shift = eta.maxCoeff();
    double ll = 0.0;
    double s0 = 0.0;
    VectorXd s1 = VectorXd::Zero(k);
    MatrixXd s2 = MatrixXd::Zero(k, k);
    if (grad) grad->setZero();
    if (info) info->setZero();

    std::size_t pos = 0;
    const auto total = static_cast<std::size_t>(n);
    while (pos < total) {
      double t = time[static_cast<std::size_t>(order[pos])];
      std::size_t first = pos;
      while (pos < total && time[static_cast<std::size_t>(order[pos])] == t) {
        Eigen::Index i = order[pos];
        double w = std::exp(eta[i] - shift);
        s0 += w;
        s1 += w * X.row(i).transpose();
        if (info) s2 += w * (X.row(i).transpose() * X.row(i));
        ++pos;
      }
      double deaths = 0.0;
      for (std::size_t q = first; q < pos; ++q) {
        Eigen::Index i = order[q];
        if (event[static_cast<std::size_t>(i)] == 1.0) {
          deaths += 1.0;
          ll += eta[i] - shift;
          if (grad) *grad += X.row(i).transpose();
        }
      }
      if (deaths > 0.0) {
        ll -= deaths * std::log(s0);
        VectorXd xbar = s1 / s0;
        if (grad) *grad -= deaths * xbar;
        if (info) *info += deaths * (s2 / s0 - xbar * xbar.transpose());
      }
    }
    return ll;
  };

  VectorXd beta = VectorXd::Zero(k);
  VectorXd grad(k);
  MatrixXd info(k, k);
  double ll = evaluate(beta, &grad, &info);

  bool converged = false;
  for (int iter = 0; iter < 100; ++iter) {
    if (grad.lpNorm<Eigen::Infinity>() < 1e-8) {
      converged = true;
      break;
    }
    Eigen::LDLT<MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success ||
        ldlt.vectorD().minCoeff() < 1e-12 * std::max(info.diagonal().maxCoeff(), 1e-300))
      throw NumericError("fit_cox: singular information (constant or collinear terms)");
    VectorXd delta = ldlt.solve(grad);

    double slope = grad.dot(delta);
    double t = 1.0;
    while (true) {
      double ll_try = evaluate(beta + t * delta, nullptr, nullptr);
      if (ll_try >= ll + 1e-4 * t * slope || t < 1e-12) break;
      t *= 0.5;
    }
    beta += t * delta;
    ll = evaluate(beta, &grad, &info);

    if ((X * beta).lpNorm<Eigen::Infinity>() > 300.0)
      throw NumericError("fit_cox: monotone partial likelihood, estimates diverge");
  }
  if (!converged) throw NumericError("fit_cox: no convergence in 100 iterations");

  CoxFit fit;
  fit.names = terms;
  fit.beta = beta;
  fit.loglik = ll;
  Eigen::LDLT<MatrixXd> ldlt(info);
  if (ldlt.info() != Eigen::Success ||
      ldlt.vectorD().minCoeff() < 1e-12 * std::max(info.diagonal().maxCoeff(), 1e-300))
    throw NumericError("fit_cox: singular information at the optimum");
  fit.cov = ldlt.solve(MatrixXd::Identity(k, k));
  fit.cov = ((fit.cov + fit.cov.transpose()) * 0.5).eval();
  return fit;
}

}  // namespace mif
