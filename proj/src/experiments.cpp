#include "qnn/experiments.hpp"

#include <algorithm>
#include <stdexcept>

namespace qnn {

LatticeConfig default_lattice() { return LatticeConfig{512, 0.7, 5000.0}; }

namespace {

NeuronSpec input(const std::string& id, bool on) {
  NeuronSpec n;
  n.id = id;
  n.kind = on ? NeuronKind::InputActive : NeuronKind::InputPassive;
  return n;
}

NeuronSpec simulated(const std::string& id) {
  NeuronSpec n;
  n.id = id;
  n.kind = NeuronKind::Simulated;
  return n;
}

Coupling exc(int from, int to, double eps) {
  return {CouplingType::Excitatory, from, to, eps};
}

Coupling inh(int a, int b, double eps) {
  if (a > b) std::swap(a, b);
  return {CouplingType::Inhibitory, a, b, eps};
}

}  // namespace

NetworkSpec two_neuron(double epsilon) {
  NetworkSpec net;
  net.lattice = default_lattice();
  net.neurons = {input("in", true), simulated("out")};
  if (epsilon > 0.0) net.connections = {exc(0, 1, epsilon)};
  return net;
}

NetworkSpec chain3(double k) {
  NetworkSpec net;
  net.lattice = default_lattice();
  net.neurons = {input("in", true), simulated("n1"), simulated("n2"),
                 simulated("n3")};
  if (k > 0.0)
    net.connections = {exc(0, 1, k * kChainEps1), exc(1, 2, k * kChainEps2),
                       exc(2, 3, k * kChainEps3)};
  return net;
}

NetworkSpec and_gate(bool input1_on, bool input2_on, double eps_hat) {
  NetworkSpec net;
  net.lattice = default_lattice();
  net.neurons = {input("in1", input1_on), input("in2", input2_on),
                 simulated("n1"), simulated("n2"), simulated("out")};
  net.connections = {exc(0, 2, eps_hat), exc(1, 3, eps_hat),
                     exc(2, 4, kAndOutputEps), exc(3, 4, kAndOutputEps)};
  return net;
}

NetworkSpec and_gate_scaled(double eps1, double eps2) {
  NetworkSpec net = and_gate(true, true);
  net.connections[0].epsilon = eps1;
  net.connections[1].epsilon = eps2;
  return net;
}

NetworkSpec not_pair(double eps1, double eps2, double eps_inh) {
  NetworkSpec net;
  net.lattice = default_lattice();
  net.neurons = {input("in", true), simulated("n1"), simulated("n2")};
  net.connections = {exc(0, 1, eps1), exc(0, 2, eps2)};
  if (eps_inh > 0.0) net.connections.push_back(inh(1, 2, eps_inh));
  return net;
}

NetworkSpec or_gate(double eps1, double eps2) {
  NetworkSpec net;
  net.lattice = default_lattice();
  net.neurons = {input("in1", true), input("in2", true), simulated("m1"),
                 simulated("m2"), simulated("out")};
  if (eps1 > 0.0) net.connections.push_back(exc(0, 2, eps1));
  if (eps2 > 0.0) net.connections.push_back(exc(1, 3, eps2));
  net.connections.push_back(inh(2, 3, kOrMutualInhibition));
  net.connections.push_back(exc(2, 4, kOrOutputEps));
  net.connections.push_back(exc(3, 4, kOrOutputEps));
  return net;
}

NetworkSpec xor_gate(double k1, double k2) {
  NetworkSpec net;
  net.lattice = default_lattice();
  net.neurons = {input("in1", true), input("in2", true), simulated("det"),
                 simulated("m1"), simulated("m2"), simulated("out")};
  if (k1 > 0.0) {
    net.connections.push_back(exc(0, 2, k1 * kXorAndBranchEps));
    net.connections.push_back(exc(0, 3, k1 * kXorOrBranchEps));
  }
  if (k2 > 0.0) {
    net.connections.push_back(exc(1, 2, k2 * kXorAndBranchEps));
    net.connections.push_back(exc(1, 4, k2 * kXorOrBranchEps));
  }
  net.connections.push_back(inh(3, 4, kXorMutualInhibition));
  net.connections.push_back(exc(3, 5, kXorOutputEps));
  net.connections.push_back(exc(4, 5, kXorOutputEps));
  net.connections.push_back(inh(2, 5, kXorVetoInhibition));
  return net;
}

ConvImage vertical_line_image(int col) {
  ConvImage img{};
  for (int r = 0; r < 4; ++r) img[r][col] = 1;
  return img;
}

ConvImage horizontal_line_image(int row) {
  ConvImage img{};
  for (int c = 0; c < 4; ++c) img[row][c] = 1;
  return img;
}

ConvImage diagonal_image() {
  ConvImage img{};
  for (int i = 0; i < 4; ++i) img[i][i] = 1;
  return img;
}

ConvImage blank_image() { return ConvImage{}; }

ConvImage full_image() {
  ConvImage img{};
  for (auto& row : img) row.fill(1);
  return img;
}

NetworkSpec conv_line_detector(const ConvImage& image, double k) {
  NetworkSpec net;
  net.lattice = default_lattice();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      int px = image[r][c];
      if (px != 0 && px != 1)
        throw std::invalid_argument("conv_line_detector: pixels must be 0 or 1");
      net.neurons.push_back(
          input("px" + std::to_string(r) + std::to_string(c), px == 1));
    }
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      net.neurons.push_back(simulated("f" + std::to_string(r) + std::to_string(c)));
  net.neurons.push_back(simulated("out"));
  int out = 20;

  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      int f = 16 + 2 * r + c;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          int px = 4 * (r + i) + (c + j);
          if (j == 1)
            net.connections.push_back(exc(px, f, k * kConvExcScale));
          else
            net.connections.push_back(inh(px, f, k * kConvInhScale));
        }
      net.connections.push_back(exc(f, out, k * kConvOutputEps));
    }
  return net;
}

NetworkSpec build_named(const std::string& builder, double k) {
  if (builder == "two_neuron") return two_neuron(k * kGateBranchEps);
  if (builder == "chain3") return chain3(k);
  if (builder == "and") return and_gate_scaled(kGateBranchEps, k * kGateBranchEps);
  if (builder == "not") return not_pair(kNotEps1, kNotEps2, k * kNotInhibition);
  if (builder == "or") return or_gate(kGateBranchEps, k * kGateBranchEps);
  if (builder == "xor") return xor_gate(k, 1.0);
  if (builder == "conv_line") return conv_line_detector(vertical_line_image(), k);
  throw std::invalid_argument("unknown builder \"" + builder + "\"");
}

std::string output_neuron(const std::string& builder) {
  if (builder == "two_neuron") return "out";
  if (builder == "chain3") return "n3";
  if (builder == "not") return "n2";
  if (builder == "and" || builder == "or" || builder == "xor" ||
      builder == "conv_line")
    return "out";
  throw std::invalid_argument("unknown builder \"" + builder + "\"");
}

SweepResult run_sweep(const SweepPlan& plan) {
  if (plan.k_values.empty())
    throw std::invalid_argument("run_sweep: empty k range");
  std::vector<double> ks = plan.k_values;
  std::sort(ks.begin(), ks.end());
  int n_points = static_cast<int>(ks.size());

  std::vector<std::vector<SweepRow>> point_rows(n_points);
  std::vector<std::string> point_errors(n_points);

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n_points; ++i) {
    try {
      NetworkSpec net = build_named(plan.builder, ks[i]);
      SamplerConfig scfg = plan.sampler;
      scfg.seed = derive_seed(plan.sampler.seed, static_cast<std::uint64_t>(i));
      if (plan.tune) scfg.step_size = tune_step(net, scfg).step_size;
      SimulationResult res = run_simulation(net, scfg, false);
      for (const ActivityEntry& e : res.report.entries) {
        int idx = net.index_of(e.neuron_id);
        if (net.neurons[idx].kind != NeuronKind::Simulated) continue;
        point_rows[i].push_back(
            {ks[i], e.neuron_id, e.activity, e.std_error, e.n_samples});
      }
    } catch (const std::exception& ex) {
      point_errors[i] = "k=" + std::to_string(ks[i]) + ": " + ex.what();
    }
  }

  SweepResult out;
  for (int i = 0; i < n_points; ++i) {
    for (SweepRow& r : point_rows[i]) out.rows.push_back(std::move(r));
    if (!point_errors[i].empty()) out.errors.push_back(point_errors[i]);
  }
  return out;
}

std::string activity_verdict(double activity) {
  if (activity > 0.5) return "on";
  if (activity < 0.2) return "off";
  return "ambiguous";
}

std::vector<TruthRow> gate_truth_table(const std::string& gate,
                                       const SamplerConfig& sampler,
                                       bool tune) {
  struct Case {
    std::string name;
    NetworkSpec net;
  };
  std::vector<Case> cases;
  std::string out_id = "out";
  if (gate == "and") {
    cases = {{"off_off", and_gate(false, false)},
             {"off_on", and_gate(false, true)},
             {"on_off", and_gate(true, false)},
             {"on_on", and_gate(true, true)}};
  } else if (gate == "or") {
    cases = {{"off_off", or_gate(0, 0)},
             {"off_on", or_gate(0, kGateBranchEps)},
             {"on_off", or_gate(kGateBranchEps, 0)},
             {"on_on", or_gate(kGateBranchEps, kGateBranchEps)}};
  } else if (gate == "not") {
    out_id = "n2";
    cases = {{"inh_off", not_pair(kNotEps1, kNotEps2, 0.0)},
             {"inh_on", not_pair(kNotEps1, kNotEps2, kNotInhibition)}};
  } else if (gate == "xor") {
    cases = {{"off_off", xor_gate(0, 0)},
             {"off_on", xor_gate(0, 1)},
             {"on_off", xor_gate(1, 0)},
             {"on_on", xor_gate(1, 1)}};
  } else if (gate == "conv_line") {
    cases = {{"vertical", conv_line_detector(vertical_line_image())},
             {"horizontal", conv_line_detector(horizontal_line_image())},
             {"diagonal", conv_line_detector(diagonal_image())},
             {"blank", conv_line_detector(blank_image())},
             {"full", conv_line_detector(full_image())}};
  } else {
    throw std::invalid_argument("unknown gate \"" + gate + "\"");
  }

  int n_cases = static_cast<int>(cases.size());
  std::vector<TruthRow> rows(n_cases);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n_cases; ++i) {
    SamplerConfig scfg = sampler;
    scfg.seed = derive_seed(sampler.seed, 0x77aa00ull + i);
    if (tune) scfg.step_size = tune_step(cases[i].net, scfg).step_size;
    SimulationResult res = run_simulation(cases[i].net, scfg, false);
    TruthRow row;
    row.case_name = cases[i].name;
    for (const ActivityEntry& e : res.report.entries)
      if (e.neuron_id == out_id) {
        row.output_activity = e.activity;
        row.std_error = e.std_error;
      }
    row.verdict = activity_verdict(row.output_activity);
    rows[i] = row;
  }
  return rows;
}

}  // namespace qnn
