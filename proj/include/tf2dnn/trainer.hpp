// Copyright 2026 the tf2dnn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TF2DNN_TRAINER_HPP
#define TF2DNN_TRAINER_HPP

#include <span>
#include <utility>
#include <vector>

#include "tf2dnn/dataset.hpp"
#include "tf2dnn/network.hpp"

namespace tf2dnn {

/// Tied latent variables: one session factor row per session and one
/// speaker factor row per speaker.
struct LatentFactors {
  Matrix session;  // F x R1
  Matrix speaker;  // S x R2

  static LatentFactors zeros(int num_sessions, int num_speakers, int r1,
                             int r2);
  bool all_finite() const;
};

struct TrainConfig {
  int epochs = 50;
  int minibatch = 256;
  double lr_theta = 1e-3;    // alpha_1, Adam step size for the weights
  double lr_session = 1e-2;  // alpha_2, plain gradient rate for z^(1)
  double lr_speaker = 1e-2;  // alpha_3, plain gradient rate for z^(2)
  // Initialization prior scales (standard deviations).
  double prior_theta = 0.05;    // lambda_1; biases start at zero
  double prior_session = 1.0;   // lambda_2
  double prior_speaker = 1.0;   // lambda_3
  double dropout_p = 0.0;       // applied to the architecture's mask layers
  // Optional L2 pull of the factors toward zero with strength 1/lambda;
  // disabled by default, the training cost is plain MSE.
  bool factor_l2 = false;
  std::uint64_t seed = 0;
  AdamConfig adam;

  void validate() const;
};

/// Draws Theta ~ N(0, lambda_1^2) (biases zero), session factors
/// ~ N(0, lambda_2^2) and speaker factors ~ N(0, lambda_3^2),
/// deterministically from cfg.seed.
std::pair<NetworkParams, LatentFactors> init_model(const Architecture& arch,
                                                   const TrainConfig& cfg,
                                                   int num_sessions,
                                                   int num_speakers);

/// One Adam step on the mean frame cost over `batch` (ascending-order
/// accumulation). Each frame's forward uses its session and speaker
/// factor rows; the factors themselves are not touched. When
/// dropout_rng is non-null and the architecture has dropout layers, a
/// fresh mask is sampled per frame.
void step_theta(NetworkParams& params, AdamState& adam, const Dataset& data,
                const LatentFactors& factors, std::span<const int> batch,
                const TrainConfig& cfg, Rng* dropout_rng);

/// One tied-gradient descent step on every session and speaker factor:
/// per-frame factor gradients are summed over each session's / speaker's
/// frames in ascending frame order, all from the same pre-update state,
/// then applied with the plain rates (no Adam). Forward passes are
/// deterministic (no dropout).
void step_factors(const NetworkParams& params, const Dataset& data,
                  LatentFactors& factors, double rate_session,
                  double rate_speaker, double l2_session = 0.0,
                  double l2_speaker = 0.0);

/// Mean deterministic (dropout-off) frame cost over the whole dataset
/// with the current factors plugged in.
double dataset_cost(const NetworkParams& params, const Dataset& data,
                    const LatentFactors& factors);

struct TrainResult {
  NetworkParams params;
  LatentFactors factors;
  std::vector<double> epoch_loss;
};

/// Two-step backpropagation: per epoch, a seeded random permutation of
/// the frames is consumed in minibatches by step_theta, followed by one
/// full step_factors pass; the per-epoch deterministic cost is recorded.
/// Throws std::runtime_error if the loss turns non-finite.
TrainResult train(const Architecture& arch, const TrainConfig& cfg,
                  const Dataset& data);

}  // namespace tf2dnn

#endif  // TF2DNN_TRAINER_HPP
