#include <map>

#include "doctest.h"
#include "qnn/experiments.hpp"

using namespace qnn;

TEST_CASE("every prebuilt network validates") {
  for (const char* name : {"two_neuron", "chain3", "and", "not", "or", "xor",
                           "conv_line"}) {
    NetworkSpec net = build_named(name, 1.0);
    CHECK_MESSAGE(validate(net).empty(), name);
    CHECK(net.index_of(output_neuron(name)) >= 0);
  }
  CHECK_THROWS(build_named("nand", 1.0));
}

TEST_CASE("two neuron wiring") {
  NetworkSpec net = two_neuron(6000.0);
  REQUIRE(net.neurons.size() == 2);
  REQUIRE(net.connections.size() == 1);
  CHECK(net.neurons[net.connections[0].from].kind == NeuronKind::InputActive);
  CHECK(net.neurons[net.connections[0].to].kind == NeuronKind::Simulated);
  CHECK(net.connections[0].epsilon == doctest::Approx(6000.0));
}

TEST_CASE("chain ladder scales with k") {
  NetworkSpec net = chain3(0.5);
  REQUIRE(net.connections.size() == 3);
  std::map<std::string, double> eps;
  for (const Coupling& c : net.connections)
    eps[net.neurons[c.to].id] = c.epsilon;
  CHECK(eps["n1"] == doctest::Approx(7500.0));
  CHECK(eps["n2"] == doctest::Approx(5000.0));
  CHECK(eps["n3"] == doctest::Approx(2500.0));
  CHECK(validate(chain3(0.0)).empty());
}

TEST_CASE("conv detector wires column kernels and feature fan-in") {
  NetworkSpec net = conv_line_detector(vertical_line_image(1));
  REQUIRE(net.neurons.size() == 21);

  int active = 0, passive = 0, exc_px = 0, inh_px = 0, out_fan = 0;
  for (const NeuronSpec& n : net.neurons) {
    if (n.kind == NeuronKind::InputActive) ++active;
    if (n.kind == NeuronKind::InputPassive) ++passive;
  }
  CHECK(active == 4);
  CHECK(passive == 12);

  int out = net.index_of("out");
  for (const Coupling& c : net.connections) {
    if (c.to == out) {
      ++out_fan;
      CHECK(c.epsilon == doctest::Approx(kConvOutputEps));
      continue;
    }
    if (c.type == CouplingType::Excitatory) {
      ++exc_px;
      CHECK(c.epsilon == doctest::Approx(kConvExcScale));
    } else {
      ++inh_px;
      CHECK(c.epsilon == doctest::Approx(kConvInhScale));
    }
  }
  // 4 features x 3x3 kernel: middle column excites, the rest inhibit.
  CHECK(exc_px == 12);
  CHECK(inh_px == 24);
  CHECK(out_fan == 4);

  ConvImage bad = vertical_line_image(1);
  bad[0][0] = 7;
  CHECK_THROWS(conv_line_detector(bad));
}

TEST_CASE("test images light the expected pixels") {
  ConvImage v = vertical_line_image(2);
  ConvImage h = horizontal_line_image(0);
  ConvImage d = diagonal_image();
  int nv = 0, nh = 0, nd = 0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      CHECK(v[r][c] == (c == 2 ? 1 : 0));
      CHECK(h[r][c] == (r == 0 ? 1 : 0));
      nv += v[r][c];
      nh += h[r][c];
      nd += d[r][c];
      CHECK(blank_image()[r][c] == 0);
      CHECK(full_image()[r][c] == 1);
    }
  CHECK(nv == 4);
  CHECK(nh == 4);
  CHECK(nd == 4);
  for (int i = 0; i < 4; ++i) CHECK(d[i][i] == 1);
}

TEST_CASE("gate structure") {
  NetworkSpec band = and_gate(true, false);
  int on = 0, off = 0;
  for (const NeuronSpec& n : band.neurons) {
    if (n.kind == NeuronKind::InputActive) ++on;
    if (n.kind == NeuronKind::InputPassive) ++off;
  }
  CHECK(on == 1);
  CHECK(off == 1);

  NetworkSpec nnot = not_pair(kNotEps1, kNotEps2, kNotInhibition);
  REQUIRE(nnot.neurons.size() == 3);
  int inh_edges = 0;
  for (const Coupling& c : nnot.connections)
    if (c.type == CouplingType::Inhibitory) ++inh_edges;
  CHECK(inh_edges == 1);

  NetworkSpec nxor = xor_gate(1.0, 1.0);
  CHECK(nxor.neurons.size() == 6);
  CHECK(nxor.index_of("det") >= 0);
}

namespace {

SamplerConfig tiny_sampler() {
  SamplerConfig cfg;
  cfg.thermalization_updates = 2000;
  cfg.measurement_sweeps = 40;
  cfg.measure_interval = 4;
  cfg.n_chains = 1;
  cfg.seed = 9;
  return cfg;
}

}  // namespace

TEST_CASE("sweeps are sorted, labeled, and reproducible") {
  SweepPlan plan;
  plan.builder = "two_neuron";
  plan.k_values = {1.0, 0.0, 0.5};
  plan.sampler = tiny_sampler();
  plan.tune = false;

  SweepResult a = run_sweep(plan);
  SweepResult b = run_sweep(plan);
  REQUIRE(a.errors.empty());
  REQUIRE(a.rows.size() == 3);
  CHECK(a.rows[0].k == 0.0);
  CHECK(a.rows[1].k == 0.5);
  CHECK(a.rows[2].k == 1.0);
  for (const SweepRow& row : a.rows) {
    CHECK(row.neuron_id == "out");
    CHECK(row.n_samples == 10);
  }
  for (size_t i = 0; i < a.rows.size(); ++i)
    CHECK(a.rows[i].activity == b.rows[i].activity);
}

TEST_CASE("truth tables carry one labeled row per case") {
  SamplerConfig cfg = tiny_sampler();
  auto rows_and = gate_truth_table("and", cfg, false);
  REQUIRE(rows_and.size() == 4);
  CHECK(rows_and[0].case_name == "off_off");
  CHECK(rows_and[3].case_name == "on_on");

  auto rows_not = gate_truth_table("not", cfg, false);
  REQUIRE(rows_not.size() == 2);

  auto rows_conv = gate_truth_table("conv_line", cfg, false);
  REQUIRE(rows_conv.size() == 5);
  for (const TruthRow& r : rows_conv)
    CHECK(!r.verdict.empty());

  CHECK_THROWS(gate_truth_table("two_neuron", cfg, false));
}

TEST_CASE("verdict bands") {
  CHECK(activity_verdict(0.8) == "on");
  CHECK(activity_verdict(0.05) == "off");
  CHECK(activity_verdict(0.35) == "ambiguous");
}
