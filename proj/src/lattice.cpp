#include "qnn/lattice.hpp"

#include <cmath>

namespace qnn {

void LatticeConfig::check() const {
  if (n_slices < 8) throw std::invalid_argument("n_slices must be >= 8");
  if (!(total_time > 0.0)) throw std::invalid_argument("total_time must be > 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
}

void KinkSchedule::check(const LatticeConfig& cfg) const {
  cfg.check();
  if (centers.size() % 2 != 0)
    throw std::invalid_argument("kink schedule needs an even number of centers");
  double min_sep = 10.0 * cfg.dtau();
  for (size_t i = 0; i < centers.size(); ++i) {
    if (centers[i] < 0.0 || centers[i] >= cfg.total_time)
      throw std::invalid_argument("kink center outside [0, total_time)");
    if (i > 0 && centers[i] - centers[i - 1] < min_sep)
      throw std::invalid_argument("kink centers closer than 10 slices");
  }
}

double kinetic_action(const Path& path, const LatticeConfig& cfg) {
  int n = cfg.n_slices;
  double inv2dt = 1.0 / (2.0 * cfg.dtau());
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    double d = path[(j + 1) % n] - path[j];
    sum += d * d * inv2dt;
  }
  return sum;
}

double path_self_action(const Path& path, const LatticeConfig& cfg) {
  double pot = 0.0;
  for (double phi : path) pot += self_potential(phi, cfg.lambda);
  return kinetic_action(path, cfg) + cfg.dtau() * pot;
}

double kink_action_analytic(double lambda) {
  return 2.0 * std::sqrt(2.0 * lambda) / 3.0;
}

Path analytic_kink_path(const KinkSchedule& schedule, const LatticeConfig& cfg,
                        bool check_spacing) {
  if (check_spacing) schedule.check(cfg);
  else cfg.check();
  double width = std::sqrt(cfg.lambda / 2.0);
  Path path(cfg.n_slices);
  for (int j = 0; j < cfg.n_slices; ++j) {
    double tau = j * cfg.dtau();
    double v = 1.0;
    for (double c : schedule.centers) v *= std::tanh(width * (tau - c));
    path[j] = v;
  }
  return path;
}

std::vector<double> action_density(const Path& path, const LatticeConfig& cfg) {
  int n = cfg.n_slices;
  double inv2dt = 1.0 / (2.0 * cfg.dtau());
  std::vector<double> density(n);
  for (int j = 0; j < n; ++j) {
    double d = path[(j + 1) % n] - path[j];
    density[j] = d * d * inv2dt + cfg.dtau() * self_potential(path[j], cfg.lambda);
  }
  return density;
}

Path saw_path(const LatticeConfig& cfg) {
  Path path(cfg.n_slices);
  for (int j = 0; j < cfg.n_slices; ++j) path[j] = j % 2;
  return path;
}

}  // namespace qnn
