#include "qnn/stats.hpp"

#include <algorithm>
#include <cmath>

namespace qnn {

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / xs.size();
}

double variance(const std::vector<double>& xs) {
  size_t n = xs.size();
  if (n < 2) return 0.0;
  double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / (n - 1);
}

double std_error(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  return std::sqrt(variance(xs) / xs.size());
}

double blocked_std_error(const std::vector<double>& xs) {
  size_t n = xs.size();
  if (n < 4) return std_error(xs);
  size_t n_blocks = std::min<size_t>(64, static_cast<size_t>(std::sqrt(double(n))));
  size_t block = n / n_blocks;
  std::vector<double> means;
  means.reserve(n_blocks);
  for (size_t b = 0; b < n_blocks; ++b) {
    double s = 0.0;
    for (size_t i = b * block; i < (b + 1) * block; ++i) s += xs[i];
    means.push_back(s / block);
  }
  return std_error(means);
}

double integrated_autocorrelation_time(const std::vector<double>& xs) {
  size_t n = xs.size();
  if (n < 4) return 0.5;
  double m = mean(xs);
  double c0 = 0.0;
  for (double x : xs) c0 += (x - m) * (x - m);
  c0 /= n;
  if (c0 <= 0.0) return 0.5;
  double tau = 0.5;
  for (size_t t = 1; t < n / 4; ++t) {
    double ct = 0.0;
    for (size_t i = 0; i + t < n; ++i) ct += (xs[i] - m) * (xs[i + t] - m);
    ct /= (n - t);
    double rho = ct / c0;
    if (rho <= 0.0) break;
    tau += rho;
  }
  return tau;
}

}  // namespace qnn
