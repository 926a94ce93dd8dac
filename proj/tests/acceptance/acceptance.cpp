// Sign-off checks. Each criterion prints exactly one PASS/FAIL line; the
// binary exits 0 only if every selected criterion passes inside its time
// budget. `--only N` runs a single criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "qnn/experiments.hpp"
#include "qnn/io.hpp"
#include "qnn/mnist.hpp"
#include "qnn/sampler.hpp"
#include "qnn/stats.hpp"
#include "qnn/trainer.hpp"
#include "support/transfer_matrix.hpp"

using namespace qnn;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

std::string mnist_dir() {
  if (const char* env = std::getenv("QNN_MNIST_DIR")) return env;
  return "data/mnist";
}

Dataset load_split(const std::string& stem_images, const std::string& stem_labels) {
  std::string dir = mnist_dir();
  return load_mnist(dir + "/" + stem_images + "-idx3-ubyte.gz",
                    dir + "/" + stem_labels + "-idx1-ubyte.gz");
}

double entry_activity(const SimulationResult& r, const std::string& id,
                      double* se = nullptr) {
  for (const ActivityEntry& e : r.report.entries)
    if (e.neuron_id == id) {
      if (se) *se = e.std_error;
      return e.activity;
    }
  throw std::runtime_error("no activity entry for " + id);
}

// --- criterion 1: discrete kink-pair action ------------------------------

Outcome criterion_kink_action() {
  LatticeConfig cfg{512, 0.7, 5000.0};
  KinkSchedule s;
  s.centers = {cfg.total_time / 3.0, 2.0 * cfg.total_time / 3.0};
  double discrete = path_self_action(analytic_kink_path(s, cfg), cfg);
  double analytic = 2.0 * kink_action_analytic(cfg.lambda);
  double rel = std::fabs(discrete - analytic) / analytic;
  return {rel < 0.02,
          fmt("kink pair action %.4f vs %.4f, rel err %.3f%% (tol 2%%)",
              discrete, analytic, 100.0 * rel)};
}

// --- criterion 2: transfer-operator oracle --------------------------------

Outcome criterion_transfer_matrix() {
  NetworkSpec net;
  net.lattice = {16, 4.0, 1.0};
  net.neurons.push_back({"n", NeuronKind::Simulated, 1.0, {}});

  testsupport::TransferMoments oracle = testsupport::transfer_moments(net.lattice);

  SamplerConfig cfg;
  cfg.thermalization_updates = 200000;
  cfg.measurement_sweeps = 40000;
  cfg.measure_interval = 10;
  cfg.levels = 3;
  cfg.n_chains = 3;
  cfg.seed = 20260;
  cfg.step_size = 0.5;
  cfg.step_size = tune_step(net, cfg).step_size;
  SimulationResult r = run_simulation(net, cfg);

  auto pooled = [&](auto pick) {
    std::vector<double> mu, se;
    for (const ChainSeries& chain : r.chains) {
      const std::vector<double>& v = pick(chain.neurons[0]);
      mu.push_back(mean(v));
      se.push_back(blocked_std_error(v));
    }
    double quad = 0.0;
    for (double s : se) quad += s * s;
    double c = static_cast<double>(mu.size());
    double pooled_se = std::max(std::sqrt(quad) / c, std_error(mu));
    return std::pair<double, double>{mean(mu), pooled_se};
  };
  auto [m2, se2] = pooled([](const NeuronSeries& n) -> const std::vector<double>& {
    return n.m2;
  });
  auto [m4, se4] = pooled([](const NeuronSeries& n) -> const std::vector<double>& {
    return n.m4;
  });

  double band2 = 3.0 * se2 + oracle.m2_grid_error;
  double band4 = 3.0 * se4 + oracle.m4_grid_error;
  bool ok2 = std::fabs(m2 - oracle.m2) < band2;
  bool ok4 = std::fabs(m4 - oracle.m4) < band4;
  return {ok2 && ok4,
          fmt("<phi^2> %.5f vs %.5f (band %.5f), <phi^4> %.5f vs %.5f (band %.5f)",
              m2, oracle.m2, band2, m4, oracle.m4, band4)};
}

// --- criterion 3: two-neuron transmission ---------------------------------

Outcome criterion_transmission() {
  NetworkSpec net = two_neuron(6000.0);
  SamplerConfig cfg;
  cfg.measurement_sweeps = 6000;
  cfg.n_chains = 2;
  cfg.seed = 30303;
  cfg.step_size = tune_step(net, cfg).step_size;
  SimulationResult r = run_simulation(net, cfg);
  double se = 0.0;
  double a = entry_activity(r, "out", &se);
  bool ok = std::fabs(a - 0.92) <= 0.08;
  return {ok, fmt("output activity %.4f +- %.4f (want 0.92 +- 0.08)", a, se)};
}

// --- criterion 4: chain transparency sweep --------------------------------

Outcome criterion_chain_sweep() {
  SweepPlan plan;
  plan.builder = "chain3";
  plan.k_values = {0.0, 0.5, 1.0, 1.5, 2.0};
  plan.sampler.measurement_sweeps = 5000;
  plan.sampler.n_chains = 2;
  plan.sampler.seed = 40404;
  plan.tune = true;
  SweepResult res = run_sweep(plan);
  if (!res.errors.empty()) return {false, "sweep error: " + res.errors.front()};

  std::vector<double> a, se;
  for (const SweepRow& row : res.rows)
    if (row.neuron_id == "n3") {
      a.push_back(row.activity);
      se.push_back(row.std_error);
    }
  if (a.size() != 5) return {false, "expected 5 sweep points"};

  bool ends = a.front() < 0.1 && a.back() > 0.6;
  bool monotone = true;
  for (size_t i = 0; i + 1 < a.size(); ++i)
    if (a[i + 1] < a[i] - 2.0 * (se[i] + se[i + 1])) monotone = false;
  return {ends && monotone,
          fmt("a(k=0) %.4f (< 0.1), a(k=2) %.4f (> 0.6), monotone %s "
              "[%.3f %.3f %.3f %.3f %.3f]",
              a.front(), a.back(), monotone ? "yes" : "no", a[0], a[1], a[2],
              a[3], a[4])};
}

// --- criterion 5: gate truth tables ----------------------------------------

Outcome criterion_gates() {
  const std::map<std::string, std::map<std::string, bool>> expected = {
      {"and", {{"off_off", false}, {"off_on", false}, {"on_off", false}, {"on_on", true}}},
      {"or", {{"off_off", false}, {"off_on", true}, {"on_off", true}, {"on_on", true}}},
      {"not", {{"inh_off", true}, {"inh_on", false}}},
      {"xor", {{"off_off", false}, {"off_on", true}, {"on_off", true}, {"on_on", false}}},
  };

  SamplerConfig cfg;
  cfg.measurement_sweeps = 5000;
  cfg.n_chains = 2;
  cfg.seed = 50505;
  // The AND margins sit a few 1e-3 inside the bounds (see kAndOutputEps), so
  // that gate needs tighter errors than the others to resolve them.
  SamplerConfig and_cfg = cfg;
  and_cfg.measurement_sweeps = 20000;
  and_cfg.n_chains = 6;

  bool all_ok = true;
  std::string detail;
  for (const auto& [gate, truth] : expected) {
    std::vector<TruthRow> rows =
        gate_truth_table(gate, gate == "and" ? and_cfg : cfg);
    double min_on = 1e9, max_off = -1e9;
    for (const TruthRow& row : rows) {
      bool want_on = truth.at(row.case_name);
      if (want_on) min_on = std::min(min_on, row.output_activity);
      else max_off = std::max(max_off, row.output_activity);
    }
    double margin = min_on - max_off;
    bool ok = min_on > 0.5 && max_off < 0.2 && margin > 0.3;
    all_ok = all_ok && ok;
    detail += fmt("%s[min_on %.3f max_off %.3f margin %.3f] ", gate.c_str(),
                  min_on, max_off, margin);
  }
  return {all_ok, detail + "(want on > 0.5, off < 0.2, margin > 0.3)"};
}

// --- criterion 6: vertical-line detector -----------------------------------

Outcome criterion_conv() {
  SamplerConfig cfg;
  cfg.measurement_sweeps = 5000;
  cfg.n_chains = 2;
  cfg.seed = 60606;
  std::vector<TruthRow> rows = gate_truth_table("conv_line", cfg);
  std::map<std::string, double> act;
  for (const TruthRow& row : rows) act[row.case_name] = row.output_activity;

  bool ok = true;
  std::string detail = fmt("vertical %.4f vs", act.at("vertical"));
  for (const char* other : {"horizontal", "diagonal", "blank", "full"}) {
    detail += fmt(" %s %.4f", other, act.at(other));
    ok = ok && act.at("vertical") > act.at(other);
  }
  return {ok, detail};
}

// --- criterion 7: classical trainer ----------------------------------------

Outcome criterion_trainer() {
  Dataset train_set = load_split("train-images", "train-labels");
  Dataset test_set = load_split("t10k-images", "t10k-labels");
  TrainResult r = train(train_set, TrainConfig{});
  double acc = accuracy(r.weights, test_set);
  NormalizedWeights norm = normalize_weights(r.weights);
  double min_eps = *std::min_element(norm.eps_hat.begin(), norm.eps_hat.end());
  double max_eps = *std::max_element(norm.eps_hat.begin(), norm.eps_hat.end());
  bool ok = acc >= 0.88 && min_eps == 0.0 && max_eps == 1.0;
  return {ok, fmt("test accuracy %.4f (want >= 0.88), eps_hat range [%g, %g]",
                  acc, min_eps, max_eps)};
}

// --- criterion 8: end-to-end digit recognition -----------------------------

Outcome criterion_recognition() {
  Dataset train_set = load_split("train-images", "train-labels");
  Dataset test_set = load_split("t10k-images", "t10k-labels");
  TrainResult tr = train(train_set, TrainConfig{});
  NormalizedWeights norm = normalize_weights(tr.weights);

  // Candidate images: classically correct with confident softmax, distinct
  // labels so the check spans several digits.
  std::vector<int> candidates;
  std::vector<bool> label_used(10, false);
  for (int i = 0; i < test_set.n && candidates.size() < 5; ++i) {
    std::array<double, kClasses> scores = image_scores(tr.weights, test_set.image(i));
    std::vector<double> p = softmax_row({scores.begin(), scores.end()});
    int arg = int(std::max_element(p.begin(), p.end()) - p.begin());
    if (arg != test_set.labels[i] || p[arg] < 0.95) continue;
    if (label_used[arg]) continue;
    label_used[arg] = true;
    candidates.push_back(i);
  }
  if (candidates.size() < 5) return {false, "not enough confident classical hits"};

  LatticeConfig lattice{512, 0.7, 5000.0};
  int correct = 0;
  std::string detail;
  for (size_t c = 0; c < candidates.size(); ++c) {
    int idx = candidates[c];
    std::vector<double> image(kPixels);
    for (int p = 0; p < kPixels; ++p) image[p] = test_set.image(idx)[p];
    SamplerConfig cfg;
    cfg.measurement_sweeps = 3000;
    cfg.n_chains = 2;
    cfg.seed = derive_seed(80808, c);
    std::array<double, kClasses> scores = recognize(image, norm, lattice, cfg);
    int arg = int(std::max_element(scores.begin(), scores.end()) - scores.begin());
    bool hit = arg == test_set.labels[idx];
    correct += hit;
    detail += fmt("#%d:%d->%d%s ", idx, int(test_set.labels[idx]), arg,
                  hit ? "" : "(miss)");
  }
  return {correct >= 3, detail + fmt("(%d/5 correct, want >= 3)", correct)};
}

// --- criterion 9: exactness suite -------------------------------------------

Outcome criterion_exactness() {
  std::string detail;
  bool all_ok = true;
  auto check = [&](bool ok, const std::string& what) {
    all_ok = all_ok && ok;
    if (!ok) detail += what + " FAILED; ";
  };

  // Local delta vs global action difference.
  {
    NetworkSpec net;
    net.lattice = {64, 0.7, 50.0};
    net.neurons.push_back({"in", NeuronKind::InputActive, 1.0, {}});
    net.neurons.push_back({"a", NeuronKind::Simulated, 1.0, {}});
    net.neurons.push_back({"b", NeuronKind::Simulated, 1.0, {}});
    net.connections.push_back({CouplingType::Excitatory, 0, 1, 11.0});
    net.connections.push_back({CouplingType::Excitatory, 1, 2, 5.0});
    net.connections.push_back({CouplingType::Inhibitory, 1, 2, 9.0});
    SystemState st = init_state(net);
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-1.4, 1.4);
    bool ok = true;
    for (int t = 0; t < 150; ++t) {
      int n = 1 + int(gen() % 2), s = int(gen() % 64);
      double proposed = u(gen);
      double fast = local_action_delta(st, net, n, s, proposed);
      double before = total_action(st, net);
      double keep = st.paths[n][s];
      st.paths[n][s] = proposed;
      double slow = total_action(st, net) - before;
      st.paths[n][s] = keep;
      ok = ok && std::fabs(fast - slow) /
                     std::max({1.0, std::fabs(fast), std::fabs(slow)}) < 1e-9;
      if (t % 2) st.paths[n][s] = proposed;
    }
    check(ok, "local delta");
  }

  // Graded-path identity.
  {
    LatticeConfig cfg{512, 0.7, 5000.0};
    Path base = build_input_path({"a", NeuronKind::InputActive, 1.0, {}}, cfg);
    bool ok = true;
    for (double b : {0.0, 0.2, 0.7, 1.0}) {
      Path g = graded_path(b, base);
      for (int j = 0; j < cfg.n_slices; ++j) {
        double lhs = g[j] * g[j] - 1.0;
        double rhs = std::sqrt(b) * (base[j] * base[j] - 1.0);
        ok = ok && std::fabs(lhs - rhs) <= 1e-14 * std::max(1.0, std::fabs(rhs));
      }
    }
    check(ok, "graded identity");
  }

  // Softmax shift invariance and unit sum.
  {
    std::vector<double> s{2.0, -1.0, 0.25, 5.0, -3.0};
    std::vector<double> p = softmax_row(s);
    std::vector<double> shifted = s;
    for (double& v : shifted) v += 77.7;
    std::vector<double> q = softmax_row(shifted);
    bool ok = std::fabs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) < 1e-12;
    for (size_t i = 0; i < p.size(); ++i)
      ok = ok && std::fabs(p[i] - q[i]) < 1e-12;
    check(ok, "softmax");
  }

  // Analytic vs finite-difference gradient.
  {
    Dataset d;
    d.n = 16;
    d.rows = 28;
    d.cols = 28;
    d.images.assign(16 * 784, 0.0f);
    d.labels.resize(16);
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 16; ++i) {
      d.labels[i] = std::uint8_t(i % 10);
      for (int p = 0; p < 784; ++p)
        d.images[size_t(i) * 784 + p] = float(u(gen) < 0.3 ? u(gen) : 0.0);
    }
    std::vector<int> batch(16);
    std::iota(batch.begin(), batch.end(), 0);
    WeightMatrix W;
    std::uniform_real_distribution<double> w(-0.2, 0.2);
    for (double& v : W.w) v = w(gen);
    WeightMatrix G = gradient(W, d, batch, 5.0);
    bool ok = true;
    double h = 1e-6;
    for (int t = 0; t < 25; ++t) {
      int idx = int(gen() % (kPixels * kClasses));
      WeightMatrix plus = W, minus = W;
      plus.w[idx] += h;
      minus.w[idx] -= h;
      double fd =
          (loss(plus, d, batch, 5.0) - loss(minus, d, batch, 5.0)) / (2.0 * h);
      ok = ok && std::fabs(G.w[idx] - fd) /
                     std::max({1.0, std::fabs(fd), std::fabs(G.w[idx])}) < 1e-5;
    }
    check(ok, "gradient");
  }

  // Normalization preserves order.
  {
    WeightMatrix W;
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> u(-1.0, 2.0);
    for (double& v : W.w) v = u(gen);
    NormalizedWeights n = normalize_weights(W);
    bool ok = true;
    for (int t = 0; t < 1000; ++t) {
      int i = int(gen() % (kPixels * kClasses));
      int j = int(gen() % (kPixels * kClasses));
      if (W.w[i] <= W.w[j]) ok = ok && n.eps_hat[i] <= n.eps_hat[j];
    }
    check(ok, "normalize order");
  }

  // Seed determinism of a full simulation.
  {
    NetworkSpec net = two_neuron(2000.0);
    net.lattice = {64, 0.7, 200.0};
    SamplerConfig cfg;
    cfg.thermalization_updates = 10000;
    cfg.measurement_sweeps = 100;
    cfg.measure_interval = 5;
    cfg.n_chains = 2;
    cfg.levels = 3;
    cfg.seed = 90909;
    SimulationResult r1 = run_simulation(net, cfg);
    SimulationResult r2 = run_simulation_serial(net, cfg);
    bool ok = r1.report.entries.size() == r2.report.entries.size();
    for (size_t i = 0; ok && i < r1.report.entries.size(); ++i)
      ok = r1.report.entries[i].activity == r2.report.entries[i].activity &&
           r1.report.entries[i].std_error == r2.report.entries[i].std_error;
    check(ok, "seed determinism");
  }

  if (all_ok) detail = "local delta, graded identity, softmax, gradient, "
                       "normalize order, seed determinism all exact";
  return {all_ok, detail};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc)
      only = std::atoi(argv[++i]);
  }

  std::vector<Criterion> criteria = {
      {1, "kink action", 1.0, criterion_kink_action},
      {2, "transfer-operator oracle", 30.0, criterion_transfer_matrix},
      {3, "two-neuron transmission", 60.0, criterion_transmission},
      {4, "chain transparency", 600.0, criterion_chain_sweep},
      {5, "gate truth tables", 900.0, criterion_gates},
      {6, "vertical-line detector", 600.0, criterion_conv},
      {7, "classical trainer", 300.0, criterion_trainer},
      {8, "digit recognition", 1200.0, criterion_recognition},
      {9, "exactness suite", 10.0, criterion_exactness},
  };

  bool all_pass = true;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    bool in_budget = seconds < c.budget_seconds;
    bool pass = out.pass && in_budget;
    all_pass = all_pass && pass;
    std::printf("criterion %d %-26s %s (%.1f s / %.0f s) %s%s\n", c.id, c.name,
                pass ? "PASS" : "FAIL", seconds, c.budget_seconds,
                out.detail.c_str(),
                out.pass && !in_budget ? " [over budget]" : "");
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
