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

#include "tf2dnn/trainer.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace tf2dnn {

LatentFactors LatentFactors::zeros(int num_sessions, int num_speakers, int r1,
                                   int r2) {
  LatentFactors z;
  z.session = Matrix::Zero(num_sessions, r1);
  z.speaker = Matrix::Zero(num_speakers, r2);
  return z;
}

bool LatentFactors::all_finite() const {
  return session.allFinite() && speaker.allFinite();
}

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("train config: epochs must be >= 1");
  if (minibatch < 1) {
    throw std::invalid_argument("train config: minibatch must be >= 1");
  }
  if (!(lr_theta > 0.0) || !(lr_session > 0.0) || !(lr_speaker > 0.0)) {
    throw std::invalid_argument("train config: learning rates must be > 0");
  }
  if (prior_theta < 0.0 || prior_session < 0.0 || prior_speaker < 0.0) {
    throw std::invalid_argument("train config: prior scales must be >= 0");
  }
  if (dropout_p < 0.0 || dropout_p >= 1.0) {
    throw std::invalid_argument("train config: dropout_p must lie in [0, 1)");
  }
}

namespace {

// Rng stream ids hanging off cfg.seed. Fixed: they are part of the
// reproducibility contract.
constexpr std::uint64_t kStreamTheta = 0;
constexpr std::uint64_t kStreamSession = 1;
constexpr std::uint64_t kStreamSpeaker = 2;
constexpr std::uint64_t kStreamShuffle = 3;
constexpr std::uint64_t kStreamDropout = 4;

void fill_gaussian(Matrix& m, Rng& rng, double stddev) {
  // Row-major fill order, fixed for reproducibility.
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) = stddev * rng.gaussian();
    }
  }
}

}  // namespace

std::pair<NetworkParams, LatentFactors> init_model(const Architecture& arch,
                                                   const TrainConfig& cfg,
                                                   int num_sessions,
                                                   int num_speakers) {
  cfg.validate();
  NetworkParams params = NetworkParams::zeros(arch);
  Rng master(cfg.seed);
  Rng theta_rng = master.fork(kStreamTheta);
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    fill_gaussian(params.weights[l], theta_rng, cfg.prior_theta);
    if (params.v_session[l].size() > 0) {
      fill_gaussian(params.v_session[l], theta_rng, cfg.prior_theta);
    }
    if (params.v_speaker[l].size() > 0) {
      fill_gaussian(params.v_speaker[l], theta_rng, cfg.prior_theta);
    }
  }
  LatentFactors factors = LatentFactors::zeros(num_sessions, num_speakers,
                                               arch.session_dim,
                                               arch.speaker_dim);
  Rng session_rng = master.fork(kStreamSession);
  fill_gaussian(factors.session, session_rng, cfg.prior_session);
  Rng speaker_rng = master.fork(kStreamSpeaker);
  fill_gaussian(factors.speaker, speaker_rng, cfg.prior_speaker);
  return {std::move(params), std::move(factors)};
}

namespace {

void check_shapes(const NetworkParams& params, const Dataset& data,
                  const LatentFactors& factors) {
  if (data.dim() != params.arch.input_dim()) {
    throw std::invalid_argument("trainer: dataset dim does not match network");
  }
  if (factors.session.rows() != data.num_sessions ||
      factors.speaker.rows() != data.num_speakers ||
      factors.session.cols() != params.arch.session_dim ||
      factors.speaker.cols() != params.arch.speaker_dim) {
    throw std::invalid_argument("trainer: latent factor shape mismatch");
  }
}

}  // namespace

void step_theta(NetworkParams& params, AdamState& adam, const Dataset& data,
                const LatentFactors& factors, std::span<const int> batch,
                const TrainConfig& cfg, Rng* dropout_rng) {
  if (batch.empty()) throw std::invalid_argument("step_theta: empty batch");
  check_shapes(params, data, factors);
  const bool use_dropout =
      dropout_rng != nullptr && params.arch.has_dropout();

  GradientBundle sum = GradientBundle::zeros(params.arch);
  Activations acts;
  for (int idx : batch) {
    if (idx < 0 || idx >= data.num_frames()) {
      throw std::invalid_argument("step_theta: frame index out of range");
    }
    const Vector x = data.frames.row(idx).transpose();
    const Vector z1 = factors.session.row(data.session_of[idx]).transpose();
    const Vector z2 = factors.speaker.row(data.speaker_of[idx]).transpose();
    DropoutMask mask;
    const DropoutMask* mask_ptr = nullptr;
    if (use_dropout) {
      mask = sample_dropout_mask(params.arch, *dropout_rng);
      mask_ptr = &mask;
    }
    forward(params, x, z1, z2, mask_ptr, acts);
    auto [cost, dj] = mse_cost(acts.output(), x);
    (void)cost;
    backward_accumulate(params, acts, dj, sum);
  }
  sum.scale(1.0 / static_cast<double>(batch.size()));
  adam_update(adam, params, sum, cfg.lr_theta);
}

void step_factors(const NetworkParams& params, const Dataset& data,
                  LatentFactors& factors, double rate_session,
                  double rate_speaker, double l2_session, double l2_speaker) {
  check_shapes(params, data, factors);
  const int r1 = params.arch.session_dim;
  const int r2 = params.arch.speaker_dim;
  Matrix grad_session = Matrix::Zero(data.num_sessions, r1);
  Matrix grad_speaker = Matrix::Zero(data.num_speakers, r2);

  Activations acts;
  Vector dz1, dz2;
  for (Index t = 0; t < data.num_frames(); ++t) {
    const Vector x = data.frames.row(t).transpose();
    const int f = data.session_of[t];
    const int s = data.speaker_of[t];
    const Vector z1 = factors.session.row(f).transpose();
    const Vector z2 = factors.speaker.row(s).transpose();
    forward(params, x, z1, z2, nullptr, acts);
    auto [cost, dj] = mse_cost(acts.output(), x);
    (void)cost;
    backward_factors(params, acts, dj, dz1, dz2);
    grad_session.row(f) += dz1.transpose();
    grad_speaker.row(s) += dz2.transpose();
  }
  if (l2_session > 0.0) grad_session += l2_session * factors.session;
  if (l2_speaker > 0.0) grad_speaker += l2_speaker * factors.speaker;

  factors.session -= rate_session * grad_session;
  factors.speaker -= rate_speaker * grad_speaker;
}

double dataset_cost(const NetworkParams& params, const Dataset& data,
                    const LatentFactors& factors) {
  check_shapes(params, data, factors);
  if (data.num_frames() == 0) return 0.0;
  double total = 0.0;
  Activations acts;
  for (Index t = 0; t < data.num_frames(); ++t) {
    const Vector x = data.frames.row(t).transpose();
    const Vector z1 = factors.session.row(data.session_of[t]).transpose();
    const Vector z2 = factors.speaker.row(data.speaker_of[t]).transpose();
    forward(params, x, z1, z2, nullptr, acts);
    total += mse_cost(acts.output(), x).first;
  }
  return total / static_cast<double>(data.num_frames());
}

TrainResult train(const Architecture& arch, const TrainConfig& cfg,
                  const Dataset& data) {
  cfg.validate();
  if (data.num_frames() == 0) {
    throw std::invalid_argument("train: empty dataset");
  }
  Architecture effective = arch;
  if (cfg.dropout_p > 0.0) {
    for (LayerSpec& l : effective.layers) {
      if (l.dropout_p > 0.0) l.dropout_p = cfg.dropout_p;
    }
  }

  auto [params, factors] =
      init_model(effective, cfg, data.num_sessions, data.num_speakers);
  AdamState adam = AdamState::init(effective, cfg.adam);
  Rng master(cfg.seed);
  Rng shuffle_rng = master.fork(kStreamShuffle);
  Rng dropout_rng = master.fork(kStreamDropout);

  const double l2_session = cfg.factor_l2 && cfg.prior_session > 0.0
                                ? 1.0 / cfg.prior_session
                                : 0.0;
  const double l2_speaker = cfg.factor_l2 && cfg.prior_speaker > 0.0
                                ? 1.0 / cfg.prior_speaker
                                : 0.0;

  const Index t_total = data.num_frames();
  std::vector<int> perm(static_cast<std::size_t>(t_total));
  std::iota(perm.begin(), perm.end(), 0);

  TrainResult result;
  result.epoch_loss.reserve(cfg.epochs);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    // Fisher-Yates with the seeded stream.
    for (std::size_t i = perm.size(); i > 1; --i) {
      const std::size_t j =
          static_cast<std::size_t>(shuffle_rng.next_u64() % i);
      std::swap(perm[i - 1], perm[j]);
    }
    for (std::size_t start = 0; start < perm.size();
         start += static_cast<std::size_t>(cfg.minibatch)) {
      const std::size_t len = std::min(static_cast<std::size_t>(cfg.minibatch),
                                       perm.size() - start);
      step_theta(params, adam, data, factors,
                 std::span<const int>(perm.data() + start, len), cfg,
                 cfg.dropout_p > 0.0 ? &dropout_rng : nullptr);
    }
    step_factors(params, data, factors, cfg.lr_session, cfg.lr_speaker,
                 l2_session, l2_speaker);
    const double loss = dataset_cost(params, data, factors);
    if (!std::isfinite(loss)) {
      throw std::runtime_error(
          "train: non-finite loss at epoch " + std::to_string(epoch) +
          "; lower the learning rates or prior scales");
    }
    result.epoch_loss.push_back(loss);
  }
  result.params = std::move(params);
  result.factors = std::move(factors);
  return result;
}

}  // namespace tf2dnn
