#include "qreg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "design.hpp"
#include "error.hpp"
#include "stats.hpp"

namespace mif {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double smoothed_loss(const VectorXd& u, double p, double eps) {
  double f = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    double t = -u[i] / eps;
    double sp = t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
    f += p * u[i] + eps * sp;
  }
  return f;
}

// One damped-Newton stage at fixed smoothing width.
void newton_stage(const MatrixXd& X, const VectorXd& y, double p, double eps,
                  double gtol, VectorXd& beta) {
  const Eigen::Index k1 = X.cols();
  VectorXd u = y - X * beta;
  for (int iter = 0; iter < 60; ++iter) {
    VectorXd s(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) s[i] = expit(-u[i] / eps);
    VectorXd grad = X.transpose() * (s.array() - p).matrix();
    if (grad.lpNorm<Eigen::Infinity>() < gtol) return;

    VectorXd w = (s.array() * (1.0 - s.array()) / eps).matrix();
    MatrixXd H = X.transpose() * w.asDiagonal() * X;
    double hscale = H.diagonal().maxCoeff() + 1e-300;

    VectorXd delta;
    double ridge = 0.0;
    while (true) {
      MatrixXd Hr = H;
      if (ridge > 0.0) Hr.diagonal().array() += ridge * hscale;
      Eigen::LDLT<MatrixXd> ldlt(Hr);
      delta = ldlt.solve(-grad);
      if (ldlt.info() == Eigen::Success && delta.dot(grad) < 0.0) break;
      ridge = ridge == 0.0 ? 1e-10 : ridge * 100.0;
      if (ridge > 1e6) {  // fall back to a gradient step
        delta = -grad / (hscale / eps + 1e-300);
        break;
      }
    }

    double f0 = smoothed_loss(u, p, eps);
    double slope = grad.dot(delta);
    double t = 1.0;
    VectorXd u_try;
    while (true) {
      u_try = u - t * (X * delta);
      if (smoothed_loss(u_try, p, eps) <= f0 + 1e-4 * t * slope) break;
      t *= 0.5;
      if (t < 1e-14) break;
    }
    beta += t * delta;
    u = u_try;
    if (t < 1e-14) return;
  }
  (void)k1;
}

// Exact minimizer over one coordinate: a weighted-quantile breakpoint of
// the piecewise-linear section t -> sum_i rho_p(r_i - a_i t).
double coordinate_min(const VectorXd& r, const VectorXd& a, double p, double fallback) {
  std::vector<std::pair<double, double>> bp;  // (breakpoint, |a|)
  bp.reserve(static_cast<std::size_t>(r.size()));
  double slope = 0.0;  // derivative left of every breakpoint
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (a[i] == 0.0) continue;
    bp.emplace_back(r[i] / a[i], std::abs(a[i]));
    slope -= a[i] > 0 ? a[i] * p : -a[i] * (1.0 - p);
  }
  if (bp.empty()) return fallback;
  std::sort(bp.begin(), bp.end());
  for (const auto& [t, jump] : bp) {
    slope += jump;
    if (slope >= 0.0) return t;
  }
  return bp.back().first;
}

void coordinate_polish(const MatrixXd& X, const VectorXd& y, double p, VectorXd& beta) {
  VectorXd u = y - X * beta;
  double f = check_loss(X, y, p, beta);
  for (int sweep = 0; sweep < 60; ++sweep) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      VectorXd r = u + X.col(j) * beta[j];
      double t = coordinate_min(r, X.col(j), p, beta[j]);
      if (t != beta[j]) {
        beta[j] = t;
        u = r - X.col(j) * t;
      }
    }
    double f_new = check_loss(X, y, p, beta);
    if (f_new >= f - 1e-14 * (1.0 + std::abs(f))) break;
    f = f_new;
  }
}

// A check-loss minimizer of a full-rank problem can be taken to interpolate
// k+1 observations; snapping onto that basic solution removes the residual
// smoothing bias whenever the active set was identified correctly.
void vertex_snap(const MatrixXd& X, const VectorXd& y, double p, VectorXd& beta) {
  const Eigen::Index k1 = X.cols();
  if (X.rows() < k1) return;
  VectorXd u = y - X * beta;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(u.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return std::abs(u[a]) < std::abs(u[b]); });

  MatrixXd B(k1, k1);
  VectorXd yb(k1);
  Eigen::Index picked = 0;
  for (Eigen::Index idx : order) {
    B.row(picked) = X.row(idx);
    yb[picked] = y[idx];
    Eigen::ColPivHouseholderQR<MatrixXd> qr(B.topRows(picked + 1));
    qr.setThreshold(1e-10);
    if (qr.rank() == picked + 1) {
      ++picked;
      if (picked == k1) break;
    }
  }
  if (picked < k1) return;

  VectorXd cand = B.colPivHouseholderQr().solve(yb);
  if (check_loss(X, y, p, cand) <= check_loss(X, y, p, beta)) beta = cand;
}

// Hall-Sheather bandwidth for sparsity estimation at quantile p.
double hall_sheather_bandwidth(double p, std::size_t n) {
  double zp = normal_quantile(p);
  double za = normal_quantile(0.975);
  double num = 1.5 * normal_pdf(zp) * normal_pdf(zp);
  double den = 2.0 * zp * zp + 1.0;
  return std::pow(static_cast<double>(n), -1.0 / 3.0) * std::pow(za, 2.0 / 3.0) *
         std::cbrt(num / den);
}

// Sparsity s(p) = d/dp of the residual quantile function, by difference
// quotient at the Hall-Sheather bandwidth.
double sparsity(const std::vector<double>& sorted_resid, double p, std::size_t n) {
  double h = hall_sheather_bandwidth(p, n);
  double lo = p - h;
  double hi = p + h;
  double edge = 1.0 / (static_cast<double>(n) + 1.0);
  lo = std::max(lo, edge);
  hi = std::min(hi, 1.0 - edge);
  if (hi <= lo) {
    lo = std::max(p - edge, 0.0);
    hi = std::min(p + edge, 1.0);
  }
  double q_hi = empirical_quantile_sorted(sorted_resid, hi);
  double q_lo = empirical_quantile_sorted(sorted_resid, lo);
  return std::max(q_hi - q_lo, 0.0) / (hi - lo);
}

}  // namespace

double check_loss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double p,
                  const Eigen::VectorXd& beta) {
  VectorXd u = y - X * beta;
  double f = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    f += u[i] >= 0.0 ? p * u[i] : (p - 1.0) * u[i];
  return f;
}

Eigen::VectorXd qreg_solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double p,
                           const Eigen::VectorXd* warm_start) {
  const Eigen::Index k1 = X.cols();
  VectorXd beta;
  if (warm_start && warm_start->size() == k1) {
    beta = *warm_start;
  } else {
    beta = X.colPivHouseholderQr().solve(y);
    // shift the intercept so the initial residuals sit at the target quantile
    std::vector<double> r(static_cast<std::size_t>(y.size()));
    VectorXd u = y - X * beta;
    for (Eigen::Index i = 0; i < u.size(); ++i) r[static_cast<std::size_t>(i)] = u[i];
    std::sort(r.begin(), r.end());
    beta[k1 - 1] += empirical_quantile_sorted(r, p);
  }

  VectorXd u0 = y - X * beta;
  double scale = 0.0;
  for (Eigen::Index i = 0; i < u0.size(); ++i) scale += std::abs(u0[i]);
  scale = std::max(scale / std::max<double>(1.0, static_cast<double>(u0.size())), 1e-8);

  double grad_scale = 0.0;
  for (Eigen::Index j = 0; j < k1; ++j)
    grad_scale = std::max(grad_scale, X.col(j).cwiseAbs().sum());
  double gtol = 1e-11 * std::max(1.0, grad_scale);

  for (double eps = 1e-2 * scale; eps >= 0.5e-10 * scale; eps *= 0.1)
    newton_stage(X, y, p, eps, gtol, beta);

  coordinate_polish(X, y, p, beta);
  vertex_snap(X, y, p, beta);
  return beta;
}

FittedModel fit_qreg99(const DataTable& data, const std::string& ivar,
                       const std::vector<std::string>& predictors) {
  FitData fd = build_fit_data(data, ivar, predictors);
  const std::size_t k1 = fd.colnames.size();
  const std::size_t n = fd.rows.size();

  std::size_t need = std::max<std::size_t>(30, 5 * k1);
  if (n < need)
    throw DataError("fit_qreg99: " + std::to_string(n) + " usable rows for '" + ivar +
                    "', need at least " + std::to_string(need));
  if (!full_column_rank(fd.X))
    throw NumericError("fit_qreg99: singular design matrix");

  Eigen::MatrixXd xtx_inv =
      (fd.X.transpose() * fd.X).ldlt().solve(Eigen::MatrixXd::Identity(
          static_cast<Eigen::Index>(k1), static_cast<Eigen::Index>(k1)));
  xtx_inv = ((xtx_inv + xtx_inv.transpose()) * 0.5).eval();

  FittedModel m;
  m.kind = ModelKind::qreg;
  m.colnames = fd.colnames;
  m.n_obs = static_cast<long>(n);
  m.coef.resize(kQregQuantiles, static_cast<Eigen::Index>(k1));
  m.cov.resize(kQregQuantiles * static_cast<Eigen::Index>(k1), static_cast<Eigen::Index>(k1));

  Eigen::VectorXd beta;
  for (int q = 1; q <= kQregQuantiles; ++q) {
    double p = q / 100.0;
    beta = qreg_solve(fd.X, fd.y, p, q == 1 ? nullptr : &beta);
    m.coef.row(q - 1) = beta.transpose();

    Eigen::VectorXd u = fd.y - fd.X * beta;
    std::vector<double> resid(n);
    for (std::size_t i = 0; i < n; ++i) resid[i] = u[static_cast<Eigen::Index>(i)];
    std::sort(resid.begin(), resid.end());
    double s = sparsity(resid, p, n);
    m.cov.block((q - 1) * static_cast<Eigen::Index>(k1), 0, static_cast<Eigen::Index>(k1),
                static_cast<Eigen::Index>(k1)) = p * (1.0 - p) * s * s * xtx_inv;
  }
  return m;
}

}  // namespace mif
