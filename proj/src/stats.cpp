#include "stats.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "error.hpp"

namespace mif {

namespace {
const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);
}

double normal_quantile(double p) { return boost::math::quantile(kStdNormal, p); }

double normal_cdf(double x) { return boost::math::cdf(kStdNormal, x); }

double normal_pdf(double x) { return boost::math::pdf(kStdNormal, x); }

double student_t_quantile(double p, double df) {
  if (!std::isfinite(df)) return normal_quantile(p);
  boost::math::students_t_distribution<double> t(df);
  return boost::math::quantile(t, p);
}

double student_t_sf(double t, double df) {
  if (!std::isfinite(df)) return 1.0 - normal_cdf(t);
  boost::math::students_t_distribution<double> dist(df);
  return boost::math::cdf(boost::math::complement(dist, t));
}

double empirical_quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw NumericError("quantile of empty sample");
  if (sorted.size() == 1) return sorted.front();
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  double pos = p * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(pos);
  double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace mif
