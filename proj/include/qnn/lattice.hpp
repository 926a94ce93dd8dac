#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qnn {

// Discretized periodic Euclidean time axis plus the double-well stiffness.
struct LatticeConfig {
  int n_slices = 512;
  double total_time = 0.7;
  double lambda = 5000.0;

  double dtau() const { return total_time / n_slices; }
  void check() const;  // throws std::invalid_argument on bad fields
};

// One particle's periodic trajectory, phi(tau_j) for j = 0..n_slices-1.
using Path = std::vector<double>;

// Kink/anti-kink center times, alternating orientation, +1 vacuum at tau=0.
struct KinkSchedule {
  std::vector<double> centers;

  void check(const LatticeConfig& cfg) const;
};

// V0(phi) = (lambda/4) (phi^2 - 1)^2, minima at phi = +-1.
inline double self_potential(double phi, double lambda) {
  double d = phi * phi - 1.0;
  return 0.25 * lambda * d * d;
}

// sum_j (phi_{j+1} - phi_j)^2 / (2 dtau), periodic wrap.
double kinetic_action(const Path& path, const LatticeConfig& cfg);

// kinetic + dtau * sum_j V0(phi_j)
double path_self_action(const Path& path, const LatticeConfig& cfg);

// Classical action of one vacuum-to-vacuum transition: 2 sqrt(2 lambda) / 3.
double kink_action_analytic(double lambda);

// Product of tanh(sqrt(lambda/2) (tau - c)) factors over schedule centers;
// empty schedule gives the +1 vacuum.
// Product of tanh profiles, one per center; +1 in the vacuum before the
// first kink. check_spacing guards input-signal fidelity and should stay on
// except for normalization constants evaluated on deliberately coarse grids.
Path analytic_kink_path(const KinkSchedule& schedule, const LatticeConfig& cfg,
                        bool check_spacing = true);

// Per-slice action: link kinetic term j -> j+1 plus dtau * V0 at j.
// Entries are >= 0 and sum to path_self_action.
std::vector<double> action_density(const Path& path, const LatticeConfig& cfg);

// Initial condition used by the sampler: phi_j = j mod 2.
Path saw_path(const LatticeConfig& cfg);

}  // namespace qnn
