#pragma once

#include <cmath>
#include <vector>

namespace mif {

inline double expit(double t) {
  if (t >= 0.0) {
    double e = std::exp(-t);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(t);
  return e / (1.0 + e);
}

double normal_quantile(double p);
double normal_cdf(double x);
double normal_pdf(double x);
double student_t_quantile(double p, double df);  // df = +inf falls back to normal
double student_t_sf(double t, double df);        // P(T > t)

// Type-7 (linear interpolation) quantile of an ascending-sorted sample.
double empirical_quantile_sorted(const std::vector<double>& sorted, double p);

}  // namespace mif
