#include "qnn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

namespace qnn {

std::vector<double> softmax_row(const std::vector<double>& scores) {
  double hi = *std::max_element(scores.begin(), scores.end());
  std::vector<double> p(scores.size());
  double sum = 0.0;
  for (size_t j = 0; j < scores.size(); ++j) {
    p[j] = std::exp(scores[j] - hi);
    sum += p[j];
  }
  for (double& v : p) v /= sum;
  return p;
}

std::array<double, kClasses> image_scores(const WeightMatrix& W, const float* image) {
  std::array<double, kClasses> s{};
  for (int i = 0; i < kPixels; ++i) {
    double x = image[i];
    if (x == 0.0) continue;
    const double* row = W.w.data() + size_t(i) * kClasses;
    for (int j = 0; j < kClasses; ++j) s[j] += x * row[j];
  }
  return s;
}

namespace {

// Softmax probabilities for a batch, plus the mean cross-entropy.
double batch_probs(const WeightMatrix& W, const Dataset& data,
                   const std::vector<int>& batch, std::vector<double>& probs) {
  int B = static_cast<int>(batch.size());
  probs.assign(size_t(B) * kClasses, 0.0);
  double ce = 0.0;
#pragma omp parallel for reduction(+ : ce)
  for (int b = 0; b < B; ++b) {
    std::array<double, kClasses> s = image_scores(W, data.image(batch[b]));
    double hi = *std::max_element(s.begin(), s.end());
    double sum = 0.0;
    for (int j = 0; j < kClasses; ++j) {
      s[j] = std::exp(s[j] - hi);
      sum += s[j];
    }
    double* row = probs.data() + size_t(b) * kClasses;
    for (int j = 0; j < kClasses; ++j) row[j] = s[j] / sum;
    ce += -std::log(row[data.labels[batch[b]]]);
  }
  return ce / B;
}

double penalty_term(const WeightMatrix& W, double penalty) {
  double s = 0.0;
  for (double v : W.w)
    if (v < 0.0) s -= v;
  return penalty * s;
}

template <bool Parallel>
WeightMatrix gradient_impl(const WeightMatrix& W, const Dataset& data,
                           const std::vector<int>& batch, double penalty) {
  if (batch.empty()) throw std::invalid_argument("gradient: empty batch");
  int B = static_cast<int>(batch.size());
  std::vector<double> probs;
  batch_probs(W, data, batch, probs);
  WeightMatrix G;
#pragma omp parallel for schedule(static) if (Parallel)
  for (int i = 0; i < kPixels; ++i) {
    double* g = G.w.data() + size_t(i) * kClasses;
    for (int b = 0; b < B; ++b) {
      double x = data.image(batch[b])[i];
      if (x == 0.0) continue;
      const double* p = probs.data() + size_t(b) * kClasses;
      int label = data.labels[batch[b]];
      for (int j = 0; j < kClasses; ++j)
        g[j] += x * (p[j] - (j == label ? 1.0 : 0.0));
    }
    for (int j = 0; j < kClasses; ++j) {
      g[j] /= B;
      if (W.w[size_t(i) * kClasses + j] < 0.0) g[j] -= penalty;
    }
  }
  return G;
}

}  // namespace

double loss(const WeightMatrix& W, const Dataset& data,
            const std::vector<int>& index_set, double penalty) {
  if (index_set.empty()) throw std::invalid_argument("loss: empty index set");
  std::vector<double> probs;
  double ce = batch_probs(W, data, index_set, probs);
  return ce + penalty_term(W, penalty);
}

WeightMatrix gradient(const WeightMatrix& W, const Dataset& data,
                      const std::vector<int>& batch, double penalty) {
  return gradient_impl<true>(W, data, batch, penalty);
}

WeightMatrix gradient_reference(const WeightMatrix& W, const Dataset& data,
                                const std::vector<int>& batch, double penalty) {
  return gradient_impl<false>(W, data, batch, penalty);
}

TrainResult train(const Dataset& data, const TrainConfig& cfg) {
  if (data.n == 0) throw std::invalid_argument("train: empty dataset");
  TrainResult result;
  WeightMatrix& W = result.weights;
  std::vector<int> order(data.n);
  std::iota(order.begin(), order.end(), 0);
  double lr = cfg.learning_rate;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::mt19937_64 shuffle_rng(derive_seed(cfg.seed, epoch));
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    int n_batches = 0;
    for (int start = 0; start < data.n; start += cfg.batch_size) {
      int stop = std::min(data.n, start + cfg.batch_size);
      std::vector<int> batch(order.begin() + start, order.begin() + stop);
      std::vector<double> probs;
      double ce = batch_probs(W, data, batch, probs);
      loss_sum += ce + penalty_term(W, cfg.penalty);
      ++n_batches;
      // Cross-entropy gradient step, then the hinge penalty through its
      // proximal map. A raw subgradient step of size lr * penalty would
      // catapult any slightly negative weight far past zero; the prox pulls
      // negatives up by at most that amount and parks them at 0.
      WeightMatrix G = gradient(W, data, batch, 0.0);
      double pull = lr * cfg.penalty;
      for (size_t t = 0; t < W.w.size(); ++t) {
        W.w[t] -= lr * G.w[t];
        if (W.w[t] < 0.0) W.w[t] = std::min(0.0, W.w[t] + pull);
      }
    }
    double epoch_loss = loss_sum / n_batches;
    if (!std::isfinite(epoch_loss))
      throw std::runtime_error("train: loss diverged at epoch " +
                               std::to_string(epoch) + " (lr " +
                               std::to_string(lr) + ")");
    result.epoch_mean_batch_loss.push_back(epoch_loss);
    lr *= cfg.lr_decay;
  }
  return result;
}

double accuracy(const WeightMatrix& W, const Dataset& data) {
  long long correct = 0;
#pragma omp parallel for reduction(+ : correct)
  for (int i = 0; i < data.n; ++i) {
    std::array<double, kClasses> s = image_scores(W, data.image(i));
    int arg = static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
    if (arg == data.labels[i]) ++correct;
  }
  return double(correct) / data.n;
}

NormalizedWeights normalize_weights(const WeightMatrix& W) {
  std::vector<double> clamped = W.w;
  for (double& v : clamped) v = std::max(v, 0.0);
  double lo = *std::min_element(clamped.begin(), clamped.end());
  double hi = *std::max_element(clamped.begin(), clamped.end());
  if (hi == lo)
    throw std::invalid_argument("normalize_weights: constant weight matrix");
  NormalizedWeights out;
  for (size_t t = 0; t < clamped.size(); ++t)
    out.eps_hat[t] = (clamped[t] - lo) / (hi - lo);
  return out;
}

NetworkSpec build_digit_network(const NormalizedWeights& eps_hat,
                                const std::vector<double>& image, double k,
                                double output_inhibition) {
  if (image.size() != kPixels)
    throw std::invalid_argument("build_digit_network: image must have 784 pixels");
  NetworkSpec net;
  net.lattice = LatticeConfig{512, 0.7, 5000.0};

  std::vector<int> pixel_neuron(kPixels, -1);
  for (int i = 0; i < kPixels; ++i) {
    double b = image[i];
    if (b < 0.0 || b > 1.0)
      throw std::invalid_argument("build_digit_network: brightness outside [0,1]");
    if (b == 0.0) continue;  // vacuum path, couples to nothing
    NeuronSpec n;
    n.id = "px" + std::to_string(i);
    n.kind = NeuronKind::InputGraded;
    n.brightness = b;
    pixel_neuron[i] = static_cast<int>(net.neurons.size());
    net.neurons.push_back(std::move(n));
  }
  int first_out = static_cast<int>(net.neurons.size());
  for (int j = 0; j < kClasses; ++j) {
    NeuronSpec n;
    n.id = "out" + std::to_string(j);
    n.kind = NeuronKind::Simulated;
    net.neurons.push_back(std::move(n));
  }

  for (int i = 0; i < kPixels; ++i) {
    if (pixel_neuron[i] < 0) continue;
    for (int j = 0; j < kClasses; ++j) {
      double eps = k * eps_hat.eps_hat[size_t(i) * kClasses + j];
      if (eps > 0.0)
        net.connections.push_back(
            {CouplingType::Excitatory, pixel_neuron[i], first_out + j, eps});
    }
  }
  for (int a = 0; a < kClasses; ++a)
    for (int b = a + 1; b < kClasses; ++b)
      net.connections.push_back({CouplingType::Inhibitory, first_out + a,
                                 first_out + b, output_inhibition});
  return net;
}

std::array<double, kClasses> recognize(const std::vector<double>& image,
                                       const NormalizedWeights& eps_hat,
                                       const LatticeConfig& cfg,
                                       const SamplerConfig& sampler) {
  NetworkSpec net = build_digit_network(eps_hat, image);
  net.lattice = cfg;
  SimulationResult res = run_simulation(net, sampler);
  std::vector<double> acts(kClasses, 0.0);
  for (const ActivityEntry& e : res.report.entries)
    for (int j = 0; j < kClasses; ++j)
      if (e.neuron_id == "out" + std::to_string(j)) acts[j] = e.activity;
  std::vector<double> p = softmax_row(acts);
  std::array<double, kClasses> scores{};
  std::copy(p.begin(), p.end(), scores.begin());
  return scores;
}

void save_weight_grid(const std::string& path, const std::vector<double>& w) {
  if (w.size() != size_t(kPixels) * kClasses)
    throw std::invalid_argument("save_weight_grid: expected 784x10 values");
  bool binary = path.size() > 4 && path.compare(path.size() - 4, 4, ".bin") == 0;
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw std::runtime_error("cannot write " + path);
  if (binary) {
    f.write(reinterpret_cast<const char*>(w.data()), w.size() * sizeof(double));
    return;
  }
  f << "# 784x10 row-major weight grid\n";
  char buf[32];
  for (int i = 0; i < kPixels; ++i) {
    for (int j = 0; j < kClasses; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", w[size_t(i) * kClasses + j]);
      f << buf << (j + 1 < kClasses ? "," : "\n");
    }
  }
}

std::vector<double> load_weight_grid(const std::string& path) {
  bool binary = path.size() > 4 && path.compare(path.size() - 4, 4, ".bin") == 0;
  std::ifstream f(path, binary ? std::ios::binary : std::ios::in);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::vector<double> w(size_t(kPixels) * kClasses);
  if (binary) {
    f.read(reinterpret_cast<char*>(w.data()), w.size() * sizeof(double));
    if (f.gcount() != std::streamsize(w.size() * sizeof(double)))
      throw std::runtime_error("weight grid " + path + " is truncated");
    return w;
  }
  std::string line;
  if (!std::getline(f, line) || line.empty() || line[0] != '#')
    throw std::runtime_error("weight grid " + path + " lacks its header line");
  for (int i = 0; i < kPixels; ++i) {
    if (!std::getline(f, line))
      throw std::runtime_error("weight grid " + path + " is truncated");
    size_t pos = 0;
    for (int j = 0; j < kClasses; ++j) {
      size_t next = line.find(',', pos);
      w[size_t(i) * kClasses + j] = std::stod(line.substr(pos, next - pos));
      pos = next == std::string::npos ? line.size() : next + 1;
    }
  }
  return w;
}

}  // namespace qnn
