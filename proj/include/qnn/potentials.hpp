#pragma once

#include <string>

#include "qnn/lattice.hpp"

namespace qnn {

struct NetworkSpec;
struct SystemState;

enum class CouplingType { Excitatory, Inhibitory };

// Excitatory: directed, spike in `from` promotes a spike in `to`.
// Inhibitory: undirected, canonical order from < to (by neuron index).
struct Coupling {
  CouplingType type = CouplingType::Excitatory;
  int from = -1;
  int to = -1;
  double epsilon = 0.0;
};

// eps * phi_target^2 * (phi_source^2 - 1)^2: vanishes while the source sits
// in a vacuum, pushes the target off its vacuum while the source spikes.
inline double excitatory_energy(double phi_source, double phi_target, double eps) {
  double s = phi_source * phi_source - 1.0;
  return eps * phi_target * phi_target * s * s;
}

// eps * (phi_a^2 - 1)^4 (phi_b^2 - 1)^4: punishes simultaneous spikes.
inline double inhibitory_energy(double phi_a, double phi_b, double eps) {
  double a = phi_a * phi_a - 1.0;
  double b = phi_b * phi_b - 1.0;
  double a4 = (a * a) * (a * a);
  double b4 = (b * b) * (b * b);
  return eps * a4 * b4;
}

inline double coupling_energy(const Coupling& c, double phi_from, double phi_to) {
  return c.type == CouplingType::Excitatory
             ? excitatory_energy(phi_from, phi_to, c.epsilon)
             : inhibitory_energy(phi_from, phi_to, c.epsilon);
}

// Self-action of every simulated neuron plus dtau-weighted coupling energy
// over all slices. Input paths contribute through couplings only.
double total_action(const SystemState& state, const NetworkSpec& net);

// S(new) - S(old) for moving one slice of one simulated neuron, touching the
// two adjacent links, the site's V0, and the couplings incident at the site.
double local_action_delta(const SystemState& state, const NetworkSpec& net,
                          int neuron, int slice, double proposed);

}  // namespace qnn
