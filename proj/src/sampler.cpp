#include "qnn/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qnn/stats.hpp"

namespace qnn {

void SamplerConfig::check(const LatticeConfig& cfg) const {
  if (thermalization_updates < 0)
    throw std::invalid_argument("thermalization_updates must be >= 0");
  if (measurement_sweeps < 1)
    throw std::invalid_argument("measurement_sweeps must be >= 1");
  if (measure_interval < 1)
    throw std::invalid_argument("measure_interval must be >= 1");
  if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be > 0");
  if (levels < 1) throw std::invalid_argument("levels must be >= 1");
  if (levels > 1 && (1 << (levels - 1)) > cfg.n_slices / 4)
    throw std::invalid_argument("largest block 2^(levels-1) exceeds n_slices/4");
  if (n_chains < 1) throw std::invalid_argument("n_chains must be >= 1");
  if (seed == 0) throw std::invalid_argument("seed must be nonzero");
}

static std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t s = splitmix64(base ^ splitmix64(stream + 0x632BE59BD9B4E019ull));
  return s ? s : 0x9E3779B97F4A7C15ull;
}

CompiledNetwork::CompiledNetwork(const NetworkSpec& net) : cfg_(net.lattice) {
  std::vector<std::string> errs = validate(net);
  if (!errs.empty()) {
    std::string msg = "invalid network:";
    for (const std::string& e : errs) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  int n = cfg_.n_slices;
  neurons_.resize(net.neurons.size());

  std::vector<Path> input_paths(net.neurons.size());
  for (size_t i = 0; i < net.neurons.size(); ++i) {
    neurons_[i].simulated = net.neurons[i].kind == NeuronKind::Simulated;
    if (neurons_[i].simulated)
      sim_.push_back(static_cast<int>(i));
    else
      input_paths[i] = build_input_path(net.neurons[i], cfg_);
  }

  auto exc_weight = [](double psi) {
    double d = psi * psi - 1.0;
    return d * d;
  };
  auto inh_weight = [](double psi) {
    double d = psi * psi - 1.0;
    double d2 = d * d;
    return d2 * d2;
  };

  for (const Coupling& c : net.connections) {
    bool from_sim = neurons_[c.from].simulated;
    bool to_sim = neurons_[c.to].simulated;
    if (c.type == CouplingType::Excitatory) {
      // validation guarantees to_sim
      if (from_sim) {
        neurons_[c.from].exc_out.push_back({c.to, c.epsilon});
        neurons_[c.to].exc_in.push_back({c.from, c.epsilon});
      } else {
        CompiledNeuron& t = neurons_[c.to];
        if (t.exc_drive.empty()) t.exc_drive.assign(n, 0.0);
        const Path& psi = input_paths[c.from];
        for (int s = 0; s < n; ++s)
          t.exc_drive[s] += c.epsilon * exc_weight(psi[s]);
      }
    } else {
      if (from_sim && to_sim) {
        neurons_[c.from].inh.push_back({c.to, c.epsilon});
        neurons_[c.to].inh.push_back({c.from, c.epsilon});
      } else if (from_sim || to_sim) {
        int sim_end = from_sim ? c.from : c.to;
        int fixed_end = from_sim ? c.to : c.from;
        CompiledNeuron& t = neurons_[sim_end];
        if (t.inh_drive.empty()) t.inh_drive.assign(n, 0.0);
        const Path& psi = input_paths[fixed_end];
        for (int s = 0; s < n; ++s)
          t.inh_drive[s] += c.epsilon * inh_weight(psi[s]);
      }
      // fixed-fixed pairs contribute a constant; irrelevant for sampling
    }
  }
}

double CompiledNetwork::site_potential(const SystemState& state, int neuron,
                                       int slice, double phi) const {
  const CompiledNeuron& cn = neurons_[neuron];
  double phi2 = phi * phi;
  double d = phi2 - 1.0;
  double d2 = d * d;
  double d4 = d2 * d2;
  double e = self_potential(phi, cfg_.lambda);
  if (!cn.exc_drive.empty()) e += phi2 * cn.exc_drive[slice];
  if (!cn.inh_drive.empty()) e += d4 * cn.inh_drive[slice];
  for (const DynExcOut& o : cn.exc_out) {
    double t = state.paths[o.to][slice];
    e += o.eps * t * t * d2;
  }
  for (const DynExcIn& in : cn.exc_in) {
    double f = state.paths[in.from][slice];
    double fd = f * f - 1.0;
    e += in.eps * phi2 * fd * fd;
  }
  for (const DynInh& h : cn.inh) {
    double p = state.paths[h.partner][slice];
    double q = p * p - 1.0;
    double q2 = q * q;
    e += h.eps * d4 * q2 * q2;
  }
  return cfg_.dtau() * e;
}

double CompiledNetwork::site_delta(const SystemState& state, int neuron,
                                   int slice, double proposed) const {
  const Path& p = state.paths[neuron];
  int n = cfg_.n_slices;
  double old_phi = p[slice];
  double prev = p[(slice + n - 1) % n];
  double next = p[(slice + 1) % n];
  double inv2dt = 1.0 / (2.0 * cfg_.dtau());
  double dl_new = proposed - prev, dr_new = next - proposed;
  double dl_old = old_phi - prev, dr_old = next - old_phi;
  double kin = (dl_new * dl_new + dr_new * dr_new - dl_old * dl_old -
                dr_old * dr_old) * inv2dt;
  return kin + site_potential(state, neuron, slice, proposed) -
         site_potential(state, neuron, slice, old_phi);
}

double CompiledNetwork::block_delta(const SystemState& state, int neuron,
                                    int start, int len, double shift) const {
  const Path& p = state.paths[neuron];
  int n = cfg_.n_slices;
  double delta = 0.0;
  for (int t = 0; t < len; ++t) {
    int s = (start + t) % n;
    delta += site_potential(state, neuron, s, p[s] + shift) -
             site_potential(state, neuron, s, p[s]);
  }
  if (len < n) {
    // interior links are unchanged by a rigid shift; only the two edges move
    int a = start % n;
    int before = (a + n - 1) % n;
    int b = (start + len - 1) % n;
    int after = (b + 1) % n;
    double inv2dt = 1.0 / (2.0 * cfg_.dtau());
    double dl_old = p[a] - p[before], dl_new = dl_old + shift;
    double dr_old = p[after] - p[b], dr_new = dr_old - shift;
    delta += (dl_new * dl_new - dl_old * dl_old + dr_new * dr_new -
              dr_old * dr_old) * inv2dt;
  }
  return delta;
}

SystemState init_state(const NetworkSpec& net) {
  std::vector<std::string> errs = validate(net);
  if (!errs.empty())
    throw std::invalid_argument("init_state: invalid network: " + errs.front());
  SystemState state;
  state.paths.reserve(net.neurons.size());
  for (const NeuronSpec& n : net.neurons)
    state.paths.push_back(n.kind == NeuronKind::Simulated
                              ? saw_path(net.lattice)
                              : build_input_path(n, net.lattice));
  return state;
}

static bool metropolis_accept(double delta, Rng& rng) {
  if (std::isnan(delta))
    throw std::runtime_error("action difference is NaN");
  if (delta <= 0.0) return true;
  return rng.uniform01() < std::exp(-delta);
}

double metropolis_sweep(SystemState& state, const CompiledNetwork& compiled,
                        double step_size, Rng& rng) {
  int n = compiled.cfg().n_slices;
  long long accepted = 0;
  for (int i : compiled.sim_indices()) {
    Path& p = state.paths[i];
    for (int s = 0; s < n; ++s) {
      double proposed = p[s] + rng.uniform(-step_size, step_size);
      if (metropolis_accept(compiled.site_delta(state, i, s, proposed), rng)) {
        p[s] = proposed;
        ++accepted;
      }
    }
  }
  long long attempted =
      static_cast<long long>(compiled.sim_indices().size()) * n;
  return attempted ? double(accepted) / double(attempted) : 0.0;
}

void multilevel_sweep(SystemState& state, const CompiledNetwork& compiled,
                      const SamplerConfig& cfg, Rng& rng,
                      std::vector<long long>& accepted,
                      std::vector<long long>& attempted) {
  int n = compiled.cfg().n_slices;
  for (int level = 2; level <= cfg.levels; ++level) {
    int len = 1 << (level - 1);
    int n_proposals = n / len;
    double block_step = cfg.step_size / std::sqrt(double(len));
    for (int i : compiled.sim_indices()) {
      Path& p = state.paths[i];
      for (int k = 0; k < n_proposals; ++k) {
        int start = rng.below(n);
        double shift = rng.uniform(-block_step, block_step);
        ++attempted[level - 2];
        if (metropolis_accept(compiled.block_delta(state, i, start, len, shift),
                              rng)) {
          for (int t = 0; t < len; ++t) p[(start + t) % n] += shift;
          ++accepted[level - 2];
        }
      }
    }
  }
}

void sign_flip_moves(SystemState& state, const CompiledNetwork& compiled,
                     Rng& rng) {
  // phi -> -phi leaves every action term unchanged (all are even in phi),
  // so the flip is always accepted.
  for (int i : compiled.sim_indices())
    if (rng.uniform01() < 0.5)
      for (double& v : state.paths[i]) v = -v;
}

namespace {

struct ChainOutput {
  ChainSeries series;
  std::vector<double> level_acceptance;
  long long samples = 0;
};

ChainOutput run_chain(const NetworkSpec& net, const CompiledNetwork& compiled,
                      const SamplerConfig& cfg, std::uint64_t chain_seed) {
  const LatticeConfig& lat = compiled.cfg();
  int n = lat.n_slices;
  Rng rng(chain_seed);
  SystemState state = init_state(net);

  const std::vector<int>& sim = compiled.sim_indices();
  int n_levels = std::max(1, cfg.levels);
  std::vector<long long> block_acc(n_levels - 1, 0), block_att(n_levels - 1, 0);
  long long site_acc = 0, site_att = 0;

  auto cycle = [&]() {
    double rate = metropolis_sweep(state, compiled, cfg.step_size, rng);
    long long att = static_cast<long long>(sim.size()) * n;
    site_acc += static_cast<long long>(rate * att + 0.5);
    site_att += att;
    multilevel_sweep(state, compiled, cfg, rng, block_acc, block_att);
    sign_flip_moves(state, compiled, rng);
  };

  long long therm_cycles = (cfg.thermalization_updates + n - 1) / n;
  for (long long t = 0; t < therm_cycles; ++t) cycle();

  ChainOutput out;
  out.series.neurons.resize(sim.size());
  double dt = lat.dtau();
  for (int s = 1; s <= cfg.measurement_sweeps; ++s) {
    cycle();
    if (s % cfg.measure_interval != 0) continue;
    for (size_t k = 0; k < sim.size(); ++k) {
      const Path& p = state.paths[sim[k]];
      double pot = 0.0, m1 = 0.0, m2 = 0.0, m4 = 0.0;
      for (double phi : p) {
        pot += self_potential(phi, lat.lambda);
        double phi2 = phi * phi;
        m1 += phi;
        m2 += phi2;
        m4 += phi2 * phi2;
      }
      NeuronSeries& ns = out.series.neurons[k];
      ns.pot_integral.push_back(dt * pot);
      ns.m1.push_back(m1 / n);
      ns.m2.push_back(m2 / n);
      ns.m4.push_back(m4 / n);
    }
    ++out.samples;
  }

  out.level_acceptance.push_back(site_att ? double(site_acc) / site_att : 0.0);
  for (int l = 0; l + 2 <= n_levels; ++l)
    out.level_acceptance.push_back(block_att[l] ? double(block_acc[l]) / block_att[l]
                                                : 0.0);
  return out;
}

SimulationResult pool_chains(const NetworkSpec& net,
                             const CompiledNetwork& compiled,
                             const SamplerConfig& cfg,
                             std::vector<ChainOutput>& chains) {
  const LatticeConfig& lat = net.lattice;
  SimulationResult result;
  result.sim_neurons = compiled.sim_indices();
  Path reference = reference_activity_path(lat);
  result.reference_integral = potential_integral(reference, lat);

  int n_chains = static_cast<int>(chains.size());
  long long total_samples = 0;
  for (ChainOutput& c : chains) {
    total_samples += c.samples;
    result.chains.push_back(std::move(c.series));
  }

  // Per neuron: average the chain means; the pooled error is the larger of
  // the within-chain (blocked) and between-chain estimates.
  std::vector<ActivityEntry> sim_entries(result.sim_neurons.size());
  for (size_t k = 0; k < result.sim_neurons.size(); ++k) {
    std::vector<double> chain_means;
    double se_sq = 0.0;
    for (const ChainSeries& cs : result.chains) {
      std::vector<double> ratios = cs.neurons[k].pot_integral;
      for (double& r : ratios) r /= result.reference_integral;
      chain_means.push_back(mean(ratios));
      double se = blocked_std_error(ratios);
      se_sq += se * se;
    }
    ActivityEntry& e = sim_entries[k];
    e.neuron_id = net.neurons[result.sim_neurons[k]].id;
    e.activity = mean(chain_means);
    e.std_error = std::max(std::sqrt(se_sq) / n_chains, std_error(chain_means));
    e.n_samples = total_samples;
  }

  size_t next_sim = 0;
  for (size_t i = 0; i < net.neurons.size(); ++i) {
    if (net.neurons[i].kind == NeuronKind::Simulated) {
      result.report.entries.push_back(sim_entries[next_sim++]);
    } else {
      ActivityEntry e;
      e.neuron_id = net.neurons[i].id;
      Path p = build_input_path(net.neurons[i], lat);
      e.activity = potential_integral(p, lat) / result.reference_integral;
      e.std_error = 0.0;
      e.n_samples = total_samples;
      result.report.entries.push_back(e);
    }
  }

  result.stats.samples_taken = total_samples;
  size_t n_levels = chains.empty() ? 0 : chains[0].level_acceptance.size();
  result.stats.level_acceptance.assign(n_levels, 0.0);
  for (const ChainOutput& c : chains)
    for (size_t l = 0; l < n_levels; ++l)
      result.stats.level_acceptance[l] += c.level_acceptance[l] / n_chains;
  return result;
}

}  // namespace

SimulationResult run_simulation(const NetworkSpec& net, const SamplerConfig& cfg,
                                bool parallel_chains) {
  cfg.check(net.lattice);
  CompiledNetwork compiled(net);
  std::vector<ChainOutput> chains(cfg.n_chains);
  if (parallel_chains) {
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < cfg.n_chains; ++c)
      chains[c] = run_chain(net, compiled, cfg, derive_seed(cfg.seed, c));
  } else {
    for (int c = 0; c < cfg.n_chains; ++c)
      chains[c] = run_chain(net, compiled, cfg, derive_seed(cfg.seed, c));
  }
  return pool_chains(net, compiled, cfg, chains);
}

SimulationResult run_simulation_serial(const NetworkSpec& net,
                                       const SamplerConfig& cfg) {
  return run_simulation(net, cfg, false);
}

TunedStep tune_step(const NetworkSpec& net, const SamplerConfig& cfg) {
  cfg.check(net.lattice);
  CompiledNetwork compiled(net);
  Rng rng(derive_seed(cfg.seed, 0x7e577e57ull));
  SystemState state = init_state(net);

  TunedStep out;
  out.step_size = cfg.step_size;
  for (int w = 0; w < 100; ++w)
    metropolis_sweep(state, compiled, out.step_size, rng);
  for (int round = 1; round <= 50; ++round) {
    double acc = 0.0;
    const int sweeps = 20;
    for (int s = 0; s < sweeps; ++s)
      acc += metropolis_sweep(state, compiled, out.step_size, rng);
    acc /= sweeps;
    out.acceptance = acc;
    out.rounds = round;
    if (acc < 0.3)
      out.step_size = std::max(out.step_size * 0.7, 1e-9);
    else if (acc > 0.6)
      out.step_size = std::min(out.step_size * 1.4, 100.0);
    else {
      out.in_band = true;
      break;
    }
  }
  return out;
}

}  // namespace qnn
