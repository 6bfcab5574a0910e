// Copyright 2026 The ipte Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IPTE_NN_HPP_
#define IPTE_NN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ipte/capture.hpp"
#include "ipte/data.hpp"

namespace ipte::nn {

enum class Activation { kTanh, kRelu };

std::string ToString(Activation a);
// Throws ConfigError for anything but "tanh" or "relu".
Activation ParseActivation(const std::string& name);

// Fully connected net: input, one or more hidden layers, softmax output.
struct MlpSpec {
  std::vector<int> layer_widths;
  Activation hidden_activation = Activation::kTanh;

  // Throws ConfigError unless there are >= 3 layers, all widths >= 1.
  void Validate() const;
  std::size_t layer_count() const { return layer_widths.size(); }
};

// Hidden width used when a single-hidden-layer net is requested without one.
inline int DefaultHiddenWidth(int input_dim) {
  return input_dim * 2 > 8 ? input_dim * 2 : 8;
}

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;

  friend bool operator==(const DenseLayer& a, const DenseLayer& b) {
    return a.weights == b.weights && a.bias == b.bias;
  }
};

struct Params {
  MlpSpec spec;
  std::vector<DenseLayer> layers;  // layers[i] maps layer i to layer i + 1

  friend bool operator==(const Params& a, const Params& b) {
    return a.spec.layer_widths == b.spec.layer_widths &&
           a.spec.hidden_activation == b.spec.hidden_activation &&
           a.layers == b.layers;
  }
};

// Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero.
Params InitParams(const MlpSpec& spec, std::uint64_t seed);

Eigen::VectorXd Softmax(const Eigen::VectorXd& logits);

struct ForwardPass {
  // Input, every hidden post-activation, and the output probabilities.
  std::vector<Eigen::VectorXd> activations;
  // Pre-activations of layers 1..L-1 (index i belongs to activations[i + 1]).
  std::vector<Eigen::VectorXd> pre_activations;

  const Eigen::VectorXd& output() const { return activations.back(); }
};

// Throws DataError when the input length does not match the first layer.
ForwardPass Forward(const Params& params, const Eigen::VectorXd& input);

// Cross-entropy in nats against a target distribution (normally one-hot).
double Loss(const Params& params, const Eigen::VectorXd& input,
            const Eigen::VectorXd& target);

struct Gradients {
  std::vector<DenseLayer> layers;  // same shapes as Params::layers
};

struct Backward {
  double loss = 0.0;
  Gradients gradients;
  ForwardPass pass;
};

Backward ComputeGradients(const Params& params, const Eigen::VectorXd& input,
                          const Eigen::VectorXd& target);

struct StepResult {
  double loss = 0.0;
  ForwardPass pass;  // activations seen before the update
};

// One online gradient-descent update in place. Throws DivergenceError
// ("divergence") when the loss is not finite; params are left untouched.
StepResult TrainStep(Params& params, const Eigen::VectorXd& input,
                     const Eigen::VectorXd& target, double learning_rate);

struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 200;
  std::uint64_t seed = 0;
  bool shuffle_each_epoch = true;
  capture::CapturePolicy capture;

  void Validate() const;
};

struct EpochMetrics {
  int epoch = 0;
  double loss = 0.0;  // mean per-sample training loss during the epoch
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
};

struct RunResult {
  Params params;
  std::vector<EpochMetrics> epochs;
};

double Accuracy(const Params& params, const data::Dataset& ds);

Eigen::VectorXd OneHot(int label, int classes);

// Per-sample gradient descent. Each training step's forward activations are
// passed to `sink` (may be null); the step index is the position within the
// epoch. Metrics are measured after each epoch.
RunResult Train(const MlpSpec& spec, const TrainConfig& config,
                const data::Dataset& train, const data::Dataset& test,
                capture::ActivationSink* sink = nullptr);

}  // namespace ipte::nn

#endif  // IPTE_NN_HPP_
