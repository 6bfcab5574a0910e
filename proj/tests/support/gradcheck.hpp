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

#ifndef IPTE_TESTS_SUPPORT_GRADCHECK_HPP_
#define IPTE_TESTS_SUPPORT_GRADCHECK_HPP_

// Central finite differences over every weight and bias of an MLP.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "ipte/nn.hpp"

namespace ipte::testing {

struct GradCheck {
  double max_relative_error = 0.0;
  double max_absolute_error = 0.0;
  std::size_t parameters = 0;
};

// Relative error |a - n| / max(|a|, |n|); two exact zeros count as agreement.
inline GradCheck CheckGradients(const nn::Params& params,
                                const Eigen::VectorXd& x,
                                const Eigen::VectorXd& target,
                                double step = 1e-5) {
  const nn::Backward analytic = nn::ComputeGradients(params, x, target);
  GradCheck out;
  nn::Params probe = params;
  auto visit = [&](double& value, double grad) {
    const double saved = value;
    value = saved + step;
    const double up = nn::Loss(probe, x, target);
    value = saved - step;
    const double down = nn::Loss(probe, x, target);
    value = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double abs_err = std::abs(grad - numeric);
    const double scale = std::max(std::abs(grad), std::abs(numeric));
    out.max_absolute_error = std::max(out.max_absolute_error, abs_err);
    if (scale > 0.0) {
      out.max_relative_error = std::max(out.max_relative_error, abs_err / scale);
    }
    ++out.parameters;
  };
  for (std::size_t l = 0; l < probe.layers.size(); ++l) {
    nn::DenseLayer& layer = probe.layers[l];
    const nn::DenseLayer& g = analytic.gradients.layers[l];
    for (Eigen::Index i = 0; i < layer.weights.size(); ++i) {
      visit(layer.weights.data()[i], g.weights.data()[i]);
    }
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) {
      visit(layer.bias.data()[i], g.bias.data()[i]);
    }
  }
  return out;
}

}  // namespace ipte::testing

#endif  // IPTE_TESTS_SUPPORT_GRADCHECK_HPP_
