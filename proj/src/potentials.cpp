#include "qnn/potentials.hpp"

#include "qnn/network.hpp"

namespace qnn {

double total_action(const SystemState& state, const NetworkSpec& net) {
  const LatticeConfig& cfg = net.lattice;
  for (const Path& p : state.paths)
    if (static_cast<int>(p.size()) != cfg.n_slices)
      throw std::invalid_argument("total_action: path length mismatch");

  double action = 0.0;
  for (size_t i = 0; i < net.neurons.size(); ++i)
    if (net.neurons[i].kind == NeuronKind::Simulated)
      action += path_self_action(state.paths[i], cfg);

  double coupling_sum = 0.0;
  for (const Coupling& c : net.connections) {
    const Path& from = state.paths[c.from];
    const Path& to = state.paths[c.to];
    for (int j = 0; j < cfg.n_slices; ++j)
      coupling_sum += coupling_energy(c, from[j], to[j]);
  }
  return action + cfg.dtau() * coupling_sum;
}

double local_action_delta(const SystemState& state, const NetworkSpec& net,
                          int neuron, int slice, double proposed) {
  const LatticeConfig& cfg = net.lattice;
  if (net.neurons[neuron].kind != NeuronKind::Simulated)
    throw std::invalid_argument("local_action_delta: neuron " +
                                net.neurons[neuron].id + " has a frozen path");
  const Path& path = state.paths[neuron];
  int n = cfg.n_slices;
  double dt = cfg.dtau();
  double old_phi = path[slice];
  double prev = path[(slice + n - 1) % n];
  double next = path[(slice + 1) % n];

  auto site_terms = [&](double phi) {
    double dl = phi - prev;
    double dr = next - phi;
    double s = (dl * dl + dr * dr) / (2.0 * dt) +
               dt * self_potential(phi, cfg.lambda);
    for (const Coupling& c : net.connections) {
      if (c.from == neuron)
        s += dt * coupling_energy(c, phi, state.paths[c.to][slice]);
      else if (c.to == neuron)
        s += dt * coupling_energy(c, state.paths[c.from][slice], phi);
    }
    return s;
  };
  return site_terms(proposed) - site_terms(old_phi);
}

}  // namespace qnn
