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

#include "ipte/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ipte/error.hpp"

namespace ipte::nn {

namespace {

// Separates the shuffling stream from the initialization stream.
constexpr std::uint64_t kShuffleStream = 0x9E3779B97F4A7C15ULL;

Eigen::VectorXd Activate(Activation kind, const Eigen::VectorXd& z) {
  switch (kind) {
    case Activation::kTanh:
      return z.array().tanh();
    case Activation::kRelu:
      return z.cwiseMax(0.0);
  }
  return z;
}

// Derivative from the pre-activation z and the activation a = f(z).
Eigen::VectorXd ActivationDerivative(Activation kind, const Eigen::VectorXd& z,
                                     const Eigen::VectorXd& a) {
  switch (kind) {
    case Activation::kTanh:
      return 1.0 - a.array().square();
    case Activation::kRelu:
      return (z.array() > 0.0).cast<double>();
  }
  return Eigen::VectorXd::Ones(z.size());
}

double LogSumExp(const Eigen::VectorXd& z) {
  const double m = z.maxCoeff();
  return m + std::log((z.array() - m).exp().sum());
}

double CrossEntropy(const Eigen::VectorXd& logits,
                    const Eigen::VectorXd& target) {
  const double lse = LogSumExp(logits);
  return -(target.array() * (logits.array() - lse)).sum();
}

int ArgMax(const Eigen::VectorXd& v) {
  Eigen::Index index = 0;
  v.maxCoeff(&index);
  return static_cast<int>(index);
}

}  // namespace

std::string ToString(Activation a) {
  return a == Activation::kTanh ? "tanh" : "relu";
}

Activation ParseActivation(const std::string& name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "relu") return Activation::kRelu;
  throw ConfigError("unknown activation '" + name + "'");
}

void MlpSpec::Validate() const {
  if (layer_widths.size() < 3) {
    throw ConfigError("an MLP needs at least 3 layers (one hidden)");
  }
  for (int w : layer_widths) {
    if (w < 1) throw ConfigError("layer widths must be >= 1");
  }
}

Params InitParams(const MlpSpec& spec, std::uint64_t seed) {
  spec.Validate();
  Params params;
  params.spec = spec;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i + 1 < spec.layer_widths.size(); ++i) {
    const int fan_in = spec.layer_widths[i];
    const int fan_out = spec.layer_widths[i + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    DenseLayer layer;
    layer.weights.resize(fan_out, fan_in);
    for (Eigen::Index r = 0; r < fan_out; ++r) {
      for (Eigen::Index c = 0; c < fan_in; ++c) layer.weights(r, c) = dist(rng);
    }
    layer.bias = Eigen::VectorXd::Zero(fan_out);
    params.layers.push_back(std::move(layer));
  }
  return params;
}

Eigen::VectorXd Softmax(const Eigen::VectorXd& logits) {
  const Eigen::ArrayXd e = (logits.array() - logits.maxCoeff()).exp();
  return (e / e.sum()).matrix();
}

ForwardPass Forward(const Params& params, const Eigen::VectorXd& input) {
  if (input.size() != params.spec.layer_widths.front()) {
    throw DataError("input has " + std::to_string(input.size()) +
                    " values, network expects " +
                    std::to_string(params.spec.layer_widths.front()));
  }
  ForwardPass pass;
  pass.activations.reserve(params.layers.size() + 1);
  pass.activations.push_back(input);
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    const DenseLayer& layer = params.layers[i];
    Eigen::VectorXd z = layer.weights * pass.activations.back() + layer.bias;
    const bool is_output = i + 1 == params.layers.size();
    pass.activations.push_back(
        is_output ? Softmax(z) : Activate(params.spec.hidden_activation, z));
    pass.pre_activations.push_back(std::move(z));
  }
  return pass;
}

double Loss(const Params& params, const Eigen::VectorXd& input,
            const Eigen::VectorXd& target) {
  const ForwardPass pass = Forward(params, input);
  return CrossEntropy(pass.pre_activations.back(), target);
}

Backward ComputeGradients(const Params& params, const Eigen::VectorXd& input,
                          const Eigen::VectorXd& target) {
  Backward out;
  out.pass = Forward(params, input);
  const ForwardPass& pass = out.pass;
  if (target.size() != pass.output().size()) {
    throw DataError("target width does not match the output layer");
  }
  out.loss = CrossEntropy(pass.pre_activations.back(), target);

  const std::size_t count = params.layers.size();
  out.gradients.layers.resize(count);
  // dL/dz at the softmax layer.
  Eigen::VectorXd delta = pass.output() * target.sum() - target;
  for (std::size_t i = count; i-- > 0;) {
    DenseLayer& g = out.gradients.layers[i];
    g.weights = delta * pass.activations[i].transpose();
    g.bias = delta;
    if (i > 0) {
      delta = (params.layers[i].weights.transpose() * delta).cwiseProduct(
          ActivationDerivative(params.spec.hidden_activation,
                               pass.pre_activations[i - 1],
                               pass.activations[i]));
    }
  }
  return out;
}

StepResult TrainStep(Params& params, const Eigen::VectorXd& input,
                     const Eigen::VectorXd& target, double learning_rate) {
  Backward b = ComputeGradients(params, input, target);
  if (!std::isfinite(b.loss)) throw DivergenceError("divergence");
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    params.layers[i].weights -= learning_rate * b.gradients.layers[i].weights;
    params.layers[i].bias -= learning_rate * b.gradients.layers[i].bias;
  }
  return {b.loss, std::move(b.pass)};
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning rate must be > 0");
  }
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  capture.Validate();
}

Eigen::VectorXd OneHot(int label, int classes) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(classes);
  v(label) = 1.0;
  return v;
}

double Accuracy(const Params& params, const data::Dataset& ds) {
  if (ds.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Eigen::VectorXd x = ds.features.row(static_cast<Eigen::Index>(i)).transpose();
    if (ArgMax(Forward(params, x).output()) == ds.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.size());
}

RunResult Train(const MlpSpec& spec, const TrainConfig& config,
                const data::Dataset& train, const data::Dataset& test,
                capture::ActivationSink* sink) {
  spec.Validate();
  config.Validate();
  if (train.size() == 0) throw DataError("empty training set");
  if (train.feature_count() != spec.layer_widths.front()) {
    throw ConfigError("input width does not match the dataset feature count");
  }
  if (train.class_count != spec.layer_widths.back()) {
    throw ConfigError("output width does not match the dataset class count");
  }

  RunResult result;
  result.params = InitParams(spec, config.seed);
  std::mt19937_64 shuffle_rng(config.seed ^ kShuffleStream);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto epoch_length = static_cast<std::int64_t>(order.size());

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle_each_epoch) {
      std::shuffle(order.begin(), order.end(), shuffle_rng);
    }
    if (sink != nullptr) sink->BeginEpoch(epoch, epoch_length);
    double loss_sum = 0.0;
    for (std::int64_t step = 0; step < epoch_length; ++step) {
      const std::size_t i = order[static_cast<std::size_t>(step)];
      const Eigen::VectorXd x =
          train.features.row(static_cast<Eigen::Index>(i)).transpose();
      const StepResult r =
          TrainStep(result.params, x, OneHot(train.labels[i], train.class_count),
                    config.learning_rate);
      loss_sum += r.loss;
      if (sink != nullptr) sink->Record(epoch, step, r.pass.activations);
    }
    EpochMetrics m;
    m.epoch = epoch;
    m.loss = loss_sum / static_cast<double>(epoch_length);
    m.train_accuracy = Accuracy(result.params, train);
    m.test_accuracy = Accuracy(result.params, test);
    result.epochs.push_back(m);
  }
  return result;
}

}  // namespace ipte::nn
