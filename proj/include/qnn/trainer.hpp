#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qnn/mnist.hpp"
#include "qnn/network.hpp"
#include "qnn/sampler.hpp"

namespace qnn {

inline constexpr int kPixels = 784;
inline constexpr int kClasses = 10;

// Row-major pixel-by-class matrix: w[i * 10 + j].
struct WeightMatrix {
  std::vector<double> w = std::vector<double>(kPixels * kClasses, 0.0);
  double& at(int i, int j) { return w[size_t(i) * kClasses + j]; }
  double at(int i, int j) const { return w[size_t(i) * kClasses + j]; }
};

struct NormalizedWeights {
  std::vector<double> eps_hat = std::vector<double>(kPixels * kClasses, 0.0);
};

struct TrainConfig {
  double learning_rate = 0.5;
  double lr_decay = 0.9;  // per epoch
  int batch_size = 256;
  int epochs = 20;
  double penalty = 100.0;
  std::uint64_t seed = 42;
};

struct TrainResult {
  WeightMatrix weights;
  std::vector<double> epoch_mean_batch_loss;
};

// Probabilities via max-shifted exponentials; sums to 1.
std::vector<double> softmax_row(const std::vector<double>& scores);

// Class scores S_j = sum_i x_i W_ij for one image.
std::array<double, kClasses> image_scores(const WeightMatrix& W, const float* image);

// Mean cross-entropy over the index set plus penalty * sum max(-W, 0).
double loss(const WeightMatrix& W, const Dataset& data,
            const std::vector<int>& index_set, double penalty);

// (1/B) X^T (P - Y) - penalty * [W < 0]; OpenMP over pixel rows.
WeightMatrix gradient(const WeightMatrix& W, const Dataset& data,
                      const std::vector<int>& batch, double penalty);
// Same arithmetic, plain loops; results are bit-identical.
WeightMatrix gradient_reference(const WeightMatrix& W, const Dataset& data,
                                const std::vector<int>& batch, double penalty);

// Proximal mini-batch descent on the penalized loss: cross-entropy gradient
// step followed by the hinge penalty's proximal map, which lifts negative
// weights by at most lr * penalty per step and stops exactly at zero.
TrainResult train(const Dataset& data, const TrainConfig& cfg);

double accuracy(const WeightMatrix& W, const Dataset& data);

// Clamp residual negatives to zero, then affine-map into [0,1].
NormalizedWeights normalize_weights(const WeightMatrix& W);

// 28x28 graded inputs (blank pixels dropped) wired to 10 output neurons with
// eps = k * eps_hat; near-zero pairwise inhibition among the outputs.
NetworkSpec build_digit_network(const NormalizedWeights& eps_hat,
                                const std::vector<double>& image,
                                double k = 1000.0,
                                double output_inhibition = 1e-17);

// Simulate the digit network and softmax the 10 output activities.
std::array<double, kClasses> recognize(const std::vector<double>& image,
                                       const NormalizedWeights& eps_hat,
                                       const LatticeConfig& cfg,
                                       const SamplerConfig& sampler);

// 784x10 row-major weight files: CSV with one header line, or raw
// little-endian float64 (.bin).
void save_weight_grid(const std::string& path, const std::vector<double>& w);
std::vector<double> load_weight_grid(const std::string& path);

}  // namespace qnn
