// Command-line front end: kink-check, simulate, sweep, train, recognize.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qnn/experiments.hpp"
#include "qnn/io.hpp"
#include "qnn/mnist.hpp"
#include "qnn/sampler.hpp"
#include "qnn/trainer.hpp"

using namespace qnn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct SamplerFlags {
  SamplerConfig cfg;
  bool no_tune = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", cfg.seed, "RNG seed (nonzero)");
    cmd->add_option("--chains", cfg.n_chains, "independent chains to pool");
    cmd->add_option("--therm", cfg.thermalization_updates,
                    "site-update attempts per neuron before measuring");
    cmd->add_option("--sweeps", cfg.measurement_sweeps, "measurement sweeps");
    cmd->add_option("--interval", cfg.measure_interval, "sweeps between samples");
    cmd->add_option("--step", cfg.step_size, "proposal half-width");
    cmd->add_option("--levels", cfg.levels, "block-update depth");
    cmd->add_flag("--no-tune", no_tune, "skip step-size tuning");
  }

  SamplerConfig tuned_for(const NetworkSpec& net) const {
    SamplerConfig out = cfg;
    if (!no_tune) out.step_size = tune_step(net, cfg).step_size;
    return out;
  }
};

std::vector<double> parse_range(const std::string& text) {
  double start = 0, stop = 0, step = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 ||
      step <= 0.0 || stop < start)
    throw CLI::ValidationError("--k", "expected start:stop:step with step > 0");
  std::vector<double> ks;
  int n = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (int i = 0; i < n; ++i) ks.push_back(start + i * step);
  return ks;
}

std::string mnist_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("QNN_MNIST_DIR")) return env;
  return "data/mnist";
}

std::string find_idx(const std::string& dir, const std::string& stem) {
  for (const char* suffix : {".gz", ""}) {
    std::string path = dir + "/" + stem + suffix;
    if (std::ifstream(path).good()) return path;
  }
  throw std::runtime_error("missing MNIST file " + dir + "/" + stem + "[.gz]");
}

nlohmann::json sampler_params(const SamplerConfig& c) {
  return {{"thermalization_updates", c.thermalization_updates},
          {"measurement_sweeps", c.measurement_sweeps},
          {"measure_interval", c.measure_interval},
          {"step_size", c.step_size},
          {"levels", c.levels},
          {"n_chains", c.n_chains}};
}

int cmd_kink_check(const LatticeConfig& cfg) {
  cfg.check();
  KinkSchedule pair;
  pair.centers = {cfg.total_time / 3.0, 2.0 * cfg.total_time / 3.0};
  double discrete = path_self_action(analytic_kink_path(pair, cfg), cfg);
  double analytic = 2.0 * kink_action_analytic(cfg.lambda);
  double rel = std::fabs(discrete - analytic) / analytic;
  std::printf("kink pair action  discrete %.6f  analytic %.6f  rel_error %.4f%%\n",
              discrete, analytic, 100.0 * rel);
  bool ok = rel < 0.02;
  std::printf("%s (tolerance 2%%)\n", ok ? "OK" : "FAILED");
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_simulate(const std::string& network_file, const std::string& out_file,
                 const SamplerFlags& flags) {
  NetworkSpec net = network_from_json(read_text_file(network_file));
  std::vector<std::string> violations = validate(net);
  if (!violations.empty()) {
    for (const std::string& v : violations)
      std::fprintf(stderr, "invalid network: %s\n", v.c_str());
    return kExitUsage;
  }
  SamplerConfig scfg = flags.tuned_for(net);
  SimulationResult res = run_simulation(net, scfg);
  std::string csv = activity_csv(res.report);
  write_text_file(out_file, csv);
  std::fputs(csv.c_str(), stdout);
  std::printf("# site acceptance %.3f, %lld samples\n",
              res.stats.level_acceptance.empty() ? 0.0
                                                 : res.stats.level_acceptance[0],
              res.stats.samples_taken);

  RunManifest m;
  m.command = "simulate";
  m.arguments = {network_file};
  m.inputs = {network_file};
  m.outputs = {out_file};
  m.seed = flags.cfg.seed;
  m.parameters_json = sampler_params(scfg).dump();
  write_manifest(m, out_file);
  return kExitOk;
}

int cmd_sweep(const std::string& builder, const std::string& range,
              bool truth_table, const std::string& out_file, bool plot,
              const SamplerFlags& flags) {
  RunManifest m;
  m.command = "sweep";
  m.outputs = {out_file};
  m.seed = flags.cfg.seed;

  if (truth_table) {
    std::vector<TruthRow> rows =
        gate_truth_table(builder, flags.cfg, !flags.no_tune);
    std::string csv = truth_table_csv(rows);
    write_text_file(out_file, csv);
    std::fputs(csv.c_str(), stdout);
    m.arguments = {builder, "--truth-table"};
    m.parameters_json = sampler_params(flags.cfg).dump();
    write_manifest(m, out_file);
    return kExitOk;
  }

  build_named(builder, 1.0);  // reject unknown builder names as usage errors

  SweepPlan plan;
  plan.builder = builder;
  plan.k_values = parse_range(range);
  plan.sampler = flags.cfg;
  plan.tune = !flags.no_tune;
  SweepResult res = run_sweep(plan);
  for (const std::string& e : res.errors)
    std::fprintf(stderr, "sweep point failed: %s\n", e.c_str());
  std::string csv = sweep_csv(res.rows);
  write_text_file(out_file, csv);
  std::fputs(csv.c_str(), stdout);
  if (plot) write_text_file(out_file + ".plot.py", sweep_plot_script(out_file));

  m.arguments = {builder, "--k", range};
  nlohmann::json params = sampler_params(flags.cfg);
  params["k_values"] = plan.k_values;
  m.parameters_json = params.dump();
  write_manifest(m, out_file);
  return res.errors.empty() ? kExitOk : kExitCheckFailed;
}

int cmd_train(const std::string& data_dir_flag, const TrainConfig& tcfg,
              const std::string& weights_out, const std::string& normalized_out) {
  std::string dir = mnist_dir(data_dir_flag);
  std::string train_images = find_idx(dir, "train-images-idx3-ubyte");
  std::string train_labels = find_idx(dir, "train-labels-idx1-ubyte");
  std::string test_images = find_idx(dir, "t10k-images-idx3-ubyte");
  std::string test_labels = find_idx(dir, "t10k-labels-idx1-ubyte");

  Dataset train_set = load_mnist(train_images, train_labels);
  Dataset test_set = load_mnist(test_images, test_labels);
  std::printf("loaded %d training / %d test images\n", train_set.n, test_set.n);

  TrainResult result = train(train_set, tcfg);
  double test_acc = accuracy(result.weights, test_set);
  double min_w = *std::min_element(result.weights.w.begin(),
                                   result.weights.w.end());
  std::printf("test accuracy %.4f\n", test_acc);
  std::printf("min weight %.3e (clamped to 0 for normalization)\n", min_w);

  NormalizedWeights norm = normalize_weights(result.weights);
  save_weight_grid(weights_out, result.weights.w);
  save_weight_grid(normalized_out, norm.eps_hat);

  RunManifest m;
  m.command = "train";
  m.inputs = {train_images, train_labels, test_images, test_labels};
  m.outputs = {weights_out, normalized_out};
  m.seed = tcfg.seed;
  m.parameters_json =
      nlohmann::json{{"learning_rate", tcfg.learning_rate},
                     {"lr_decay", tcfg.lr_decay},
                     {"batch_size", tcfg.batch_size},
                     {"epochs", tcfg.epochs},
                     {"penalty", tcfg.penalty},
                     {"test_accuracy", test_acc},
                     {"min_weight", min_w}}
          .dump();
  write_manifest(m, weights_out);
  write_manifest(m, normalized_out);
  return kExitOk;
}

int cmd_recognize(const std::string& weights_file, int test_index,
                  const std::string& image_file, const std::string& data_dir_flag,
                  double k, const SamplerFlags& flags) {
  NormalizedWeights norm;
  norm.eps_hat = load_weight_grid(weights_file);

  std::vector<double> image(kPixels, 0.0);
  std::vector<std::string> inputs = {weights_file};
  int true_label = -1;
  if (!image_file.empty()) {
    std::ifstream f(image_file, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + image_file);
    std::vector<unsigned char> bytes(kPixels);
    f.read(reinterpret_cast<char*>(bytes.data()), kPixels);
    if (f.gcount() != kPixels)
      throw std::runtime_error("image file must hold 784 raw bytes");
    for (int i = 0; i < kPixels; ++i) image[i] = bytes[i] / 255.0;
    inputs.push_back(image_file);
  } else {
    std::string dir = mnist_dir(data_dir_flag);
    Dataset test_set = load_mnist(find_idx(dir, "t10k-images-idx3-ubyte"),
                                  find_idx(dir, "t10k-labels-idx1-ubyte"));
    if (test_index < 0 || test_index >= test_set.n)
      throw std::runtime_error("test index out of range (0.." +
                               std::to_string(test_set.n - 1) + ")");
    const float* px = test_set.image(test_index);
    for (int i = 0; i < kPixels; ++i) image[i] = px[i];
    true_label = test_set.labels[test_index];
  }

  NetworkSpec net = build_digit_network(norm, image, k);
  SamplerConfig scfg = flags.tuned_for(net);
  std::array<double, kClasses> scores =
      recognize(image, norm, net.lattice, scfg);
  int arg = 0;
  for (int j = 1; j < kClasses; ++j)
    if (scores[j] > scores[arg]) arg = j;
  for (int j = 0; j < kClasses; ++j)
    std::printf("digit %d score %.4f\n", j, scores[j]);
  std::printf("argmax %d", arg);
  if (true_label >= 0) std::printf(" (true label %d)", true_label);
  std::printf("\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"path-integral Monte Carlo simulator for double-well neuron networks"};
  app.require_subcommand(1);

  // kink-check
  LatticeConfig kc_cfg;
  CLI::App* kink = app.add_subcommand(
      "kink-check", "compare the discrete kink-pair action to 2 * 2sqrt(2L)/3");
  kink->add_option("--n-slices", kc_cfg.n_slices);
  kink->add_option("--total-time", kc_cfg.total_time);
  kink->add_option("--lambda", kc_cfg.lambda);

  // simulate
  std::string sim_network, sim_out = "activity.csv";
  SamplerFlags sim_flags;
  CLI::App* sim = app.add_subcommand("simulate", "run one network file");
  sim->add_option("network", sim_network, "network JSON file")->required();
  sim->add_option("-o,--output", sim_out, "activity CSV path");
  sim_flags.attach(sim);

  // sweep
  std::string sweep_builder, sweep_range = "0:1:0.25", sweep_out = "sweep.csv";
  bool sweep_truth = false, sweep_plot = false;
  SamplerFlags sweep_flags;
  CLI::App* sweep = app.add_subcommand("sweep", "activity vs modulating factor k");
  sweep->add_option("builder", sweep_builder,
                    "two_neuron | chain3 | and | not | or | xor | conv_line")
      ->required();
  sweep->add_option("--k", sweep_range, "k range start:stop:step");
  sweep->add_flag("--truth-table", sweep_truth,
                  "run the gate's fixed input cases instead of a k sweep");
  sweep->add_flag("--plot-script", sweep_plot, "emit a python plot script");
  sweep->add_option("-o,--output", sweep_out, "sweep CSV path");
  sweep_flags.attach(sweep);

  // train
  std::string train_dir, train_weights = "weights.csv", train_norm = "eps_hat.csv";
  TrainConfig tcfg;
  CLI::App* tr = app.add_subcommand("train", "penalized softmax regression on MNIST");
  tr->add_option("--data-dir", train_dir, "MNIST directory (or QNN_MNIST_DIR)");
  tr->add_option("--epochs", tcfg.epochs);
  tr->add_option("--batch", tcfg.batch_size);
  tr->add_option("--lr", tcfg.learning_rate);
  tr->add_option("--decay", tcfg.lr_decay);
  tr->add_option("--penalty", tcfg.penalty);
  tr->add_option("--seed", tcfg.seed);
  tr->add_option("--weights-out", train_weights);
  tr->add_option("--normalized-out", train_norm);

  // recognize
  std::string rec_weights, rec_image, rec_dir;
  int rec_index = -1;
  double rec_k = 1000.0;
  SamplerFlags rec_flags;
  CLI::App* rec = app.add_subcommand("recognize", "score one image with the digit network");
  rec->add_option("--weights", rec_weights, "normalized weight grid")->required();
  rec->add_option("--test-index", rec_index, "index into the MNIST test set");
  rec->add_option("--image", rec_image, "raw 784-byte image file");
  rec->add_option("--data-dir", rec_dir, "MNIST directory (or QNN_MNIST_DIR)");
  rec->add_option("--k", rec_k, "coupling scale");
  rec_flags.attach(rec);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (kink->parsed()) return cmd_kink_check(kc_cfg);
    if (sim->parsed()) return cmd_simulate(sim_network, sim_out, sim_flags);
    if (sweep->parsed())
      return cmd_sweep(sweep_builder, sweep_range, sweep_truth, sweep_out,
                       sweep_plot, sweep_flags);
    if (tr->parsed()) return cmd_train(train_dir, tcfg, train_weights, train_norm);
    if (rec->parsed()) {
      if (rec_image.empty() && rec_index < 0)
        throw std::runtime_error("recognize needs --test-index or --image");
      return cmd_recognize(rec_weights, rec_index, rec_image, rec_dir, rec_k,
                           rec_flags);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
