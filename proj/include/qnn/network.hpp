#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qnn/lattice.hpp"
#include "qnn/potentials.hpp"

namespace qnn {

enum class NeuronKind { Simulated, InputActive, InputPassive, InputGraded };

struct NeuronSpec {
  std::string id;
  NeuronKind kind = NeuronKind::Simulated;
  double brightness = 1.0;      // graded inputs only
  KinkSchedule schedule;        // active/graded inputs; empty = default schedule
};

struct NetworkSpec {
  LatticeConfig lattice;
  std::vector<NeuronSpec> neurons;
  std::vector<Coupling> connections;

  int index_of(const std::string& id) const;  // -1 if absent
};

// One path per neuron, same order as net.neurons. Input paths are frozen;
// only Simulated paths move during sampling.
struct SystemState {
  std::vector<Path> paths;
};

struct ActivityEntry {
  std::string neuron_id;
  double activity = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
};

struct ActivityReport {
  std::vector<ActivityEntry> entries;
};

// Canonical active-input signal: 6 kinks at tau = (2i+1) T/12. Six evenly
// spaced kinks keep the vacuum-fluctuation background below 10% of the
// reference potential energy while staying well separated at T = 0.7.
KinkSchedule default_active_schedule(const LatticeConfig& cfg);

Path build_input_path(const NeuronSpec& spec, const LatticeConfig& cfg);

// The canonical active path evaluated as a pure normalization constant;
// skips the input spacing check so coarse diagnostic lattices still have a
// well-defined activity denominator.
Path reference_activity_path(const LatticeConfig& cfg);

// Brightness map psi_hat = sqrt(sqrt(b) psi^2 - sqrt(b) + 1); satisfies
// (psi_hat^2 - 1) = sqrt(b) (psi^2 - 1) exactly.
Path graded_path(double b, const Path& base);

// dtau * sum_j V0 over one path; the activity observable's numerator.
double potential_integral(const Path& path, const LatticeConfig& cfg);

// Mean over samples of the neuron's potential integral divided by the
// reference path's, plus the standard error of that mean.
std::pair<double, double> activity(const std::vector<SystemState>& samples,
                                   int neuron, const Path& reference,
                                   const LatticeConfig& cfg);

// Empty iff all structural invariants hold; never throws.
std::vector<std::string> validate(const NetworkSpec& net);

// JSON round trip for network files; unknown keys are rejected.
NetworkSpec network_from_json(const std::string& text);
std::string network_to_json(const NetworkSpec& net);

}  // namespace qnn
