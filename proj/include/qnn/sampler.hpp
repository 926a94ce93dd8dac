#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qnn/network.hpp"

namespace qnn {

struct SamplerConfig {
  // Site-update attempts per simulated neuron before measurements start.
  long long thermalization_updates = 2'000'000;
  int measurement_sweeps = 5000;
  int measure_interval = 10;
  double step_size = 0.1;
  int levels = 4;
  std::uint64_t seed = 1;
  int n_chains = 1;

  void check(const LatticeConfig& cfg) const;
};

struct TunedStep {
  double step_size = 0.0;
  double acceptance = 0.0;
  bool in_band = false;
  int rounds = 0;
};

struct ChainStats {
  std::vector<double> level_acceptance;  // [0] = single-site, then block levels
  long long samples_taken = 0;
};

// Per-sample traces for one simulated neuron within one chain.
struct NeuronSeries {
  std::vector<double> pot_integral;  // dtau * sum_j V0(phi_j)
  std::vector<double> m1, m2, m4;    // path-averaged phi, phi^2, phi^4
};

struct ChainSeries {
  std::vector<NeuronSeries> neurons;  // aligned with SimulationResult::sim_neurons
};

struct SimulationResult {
  ActivityReport report;
  ChainStats stats;
  std::vector<int> sim_neurons;     // indices into net.neurons
  std::vector<ChainSeries> chains;
  double reference_integral = 0.0;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform01() { return (gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  int below(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 gen_;
};

// Decorrelated per-stream seed (splitmix64 over base ^ f(stream)).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Network folded for fast local updates: frozen-input couplings become
// per-slice drive tables, simulated-simulated couplings stay explicit.
class CompiledNetwork {
 public:
  explicit CompiledNetwork(const NetworkSpec& net);

  const LatticeConfig& cfg() const { return cfg_; }
  const std::vector<int>& sim_indices() const { return sim_; }

  // Action terms that depend on phi at (neuron, slice), kinetic links excluded.
  double site_potential(const SystemState& state, int neuron, int slice,
                        double phi) const;
  // Full local delta for a single-site proposal (two links + potentials).
  double site_delta(const SystemState& state, int neuron, int slice,
                    double proposed) const;
  // Exact delta for a rigid shift of `len` consecutive slices starting at
  // `start` (periodic wrap).
  double block_delta(const SystemState& state, int neuron, int start, int len,
                     double shift) const;

 private:
  struct DynExcOut { int to; double eps; };
  struct DynExcIn { int from; double eps; };
  struct DynInh { int partner; double eps; };
  struct CompiledNeuron {
    bool simulated = false;
    std::vector<double> exc_drive;  // sum eps (psi^2-1)^2 from frozen sources
    std::vector<double> inh_drive;  // sum eps (psi^2-1)^4 from frozen partners
    std::vector<DynExcOut> exc_out;
    std::vector<DynExcIn> exc_in;
    std::vector<DynInh> inh;
  };
  LatticeConfig cfg_;
  std::vector<CompiledNeuron> neurons_;
  std::vector<int> sim_;
};

SystemState init_state(const NetworkSpec& net);

// One pass of single-site proposals over every simulated neuron and slice.
// Returns accepted / attempted.
double metropolis_sweep(SystemState& state, const CompiledNetwork& compiled,
                        double step_size, Rng& rng);

// Rigid block shifts at dyadic sizes 2..2^(levels-1); accepted/attempted
// counts accumulate per level into the provided arrays (size levels-1).
void multilevel_sweep(SystemState& state, const CompiledNetwork& compiled,
                      const SamplerConfig& cfg, Rng& rng,
                      std::vector<long long>& accepted,
                      std::vector<long long>& attempted);

// Whole-path sign flips; every action term is even in each phi, so these are
// free moves that restore the +-vacuum symmetry of the ensemble.
void sign_flip_moves(SystemState& state, const CompiledNetwork& compiled, Rng& rng);

SimulationResult run_simulation(const NetworkSpec& net, const SamplerConfig& cfg,
                                bool parallel_chains = true);

// Serial reference for the chain loop; identical output to run_simulation.
SimulationResult run_simulation_serial(const NetworkSpec& net,
                                       const SamplerConfig& cfg);

// Pilot run nudging step_size until site acceptance lands in [0.3, 0.6].
TunedStep tune_step(const NetworkSpec& net, const SamplerConfig& cfg);

}  // namespace qnn
