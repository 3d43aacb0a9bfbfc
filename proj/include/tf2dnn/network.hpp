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

#ifndef TF2DNN_NETWORK_HPP
#define TF2DNN_NETWORK_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "tf2dnn/numeric.hpp"

namespace tf2dnn {

enum class Nonlinearity : std::uint8_t { kSoftplus = 0, kLinear = 1 };

struct LayerSpec {
  int in_dim = 0;
  int out_dim = 0;
  Nonlinearity nonlinearity = Nonlinearity::kSoftplus;
  // Tied-factor layers add V1 z1 + V2 z2 to the pre-activation.
  bool is_tf2 = false;
  // Inverted dropout on the layer output; 0 disables the layer's mask.
  double dropout_p = 0.0;
};

/// Feed-forward autoencoder topology plus the tied-factor subspace dims.
struct Architecture {
  std::vector<LayerSpec> layers;
  int session_dim = 0;  // R1
  int speaker_dim = 0;  // R2

  int num_layers() const { return static_cast<int>(layers.size()); }
  int input_dim() const { return layers.front().in_dim; }
  int output_dim() const { return layers.back().out_dim; }
  int penultimate_dim() const {
    return layers.size() > 1 ? layers[layers.size() - 2].out_dim
                             : layers.front().in_dim;
  }
  bool has_dropout() const;
  bool has_tf2() const;

  /// Throws std::invalid_argument if dimensions do not chain, the last
  /// layer is not linear, or a dropout probability is out of [0, 1).
  /// Dropout on the last layer is rejected: its output is the Gaussian
  /// mean of the regression model.
  void validate() const;

  /// Standard stack: encoder hiddens, bottleneck, decoder hiddens, linear
  /// output layer; softplus everywhere else. tf2_layers and dropout_layers
  /// index into the layer list (0-based). An empty tf2_layers with
  /// r1 + r2 > 0 places the factors on the first decoder layer, the one
  /// consuming the bottleneck output.
  static Architecture autoencoder(int feature_dim,
                                  const std::vector<int>& encoder_hidden,
                                  int bottleneck,
                                  const std::vector<int>& decoder_hidden,
                                  int r1, int r2,
                                  std::vector<int> tf2_layers = {},
                                  double dropout_p = 0.0,
                                  std::vector<int> dropout_layers = {});

  /// Same topology with every factor path removed (the baseline DNN).
  Architecture without_factors() const;
};

/// All trainable weights. Non-TF2 layers carry empty (0-column) factor
/// loading matrices so shapes always mirror the architecture.
struct NetworkParams {
  Architecture arch;
  std::vector<Matrix> weights;    // out_dim x in_dim
  std::vector<Vector> biases;     // out_dim
  std::vector<Matrix> v_session;  // out_dim x R1, zero-sized unless tf2
  std::vector<Matrix> v_speaker;  // out_dim x R2, zero-sized unless tf2

  static NetworkParams zeros(const Architecture& arch);
  void validate() const;
  bool all_finite() const;

  /// Copies shared weights into a factor-free parameter set.
  NetworkParams without_factors() const;
};

/// Per-layer dropout scale vectors; entries are 0 (dropped) or 1/(1-p).
/// Layers without dropout keep an empty vector.
struct DropoutMask {
  std::vector<Vector> scale;
  bool empty() const;
};

/// Masks for every dropout layer of `arch`. When p_override >= 0 it
/// replaces each layer's own probability (used by MC scoring).
DropoutMask sample_dropout_mask(const Architecture& arch, Rng& rng,
                                double p_override = -1.0);

/// Cached forward pass for one frame. `post` holds each layer's output
/// after the nonlinearity and dropout mask; `pre` the pre-activation.
struct Activations {
  Vector input;
  Vector z_session;
  Vector z_speaker;
  std::vector<Vector> pre;
  std::vector<Vector> post;
  std::vector<Vector> mask_scale;  // empty per layer when deterministic

  const Vector& output() const { return post.back(); }
  /// x_{t,L-1}: the regression-model input y_t.
  const Vector& penultimate() const {
    return post.size() > 1 ? post[post.size() - 2] : input;
  }
};

struct GradientBundle {
  std::vector<Matrix> d_weights;
  std::vector<Vector> d_biases;
  std::vector<Matrix> d_v_session;
  std::vector<Matrix> d_v_speaker;
  Vector d_z_session;
  Vector d_z_speaker;

  static GradientBundle zeros(const Architecture& arch);
  void setZero();
  void scale(double s);
  void add(const GradientBundle& other);
};

/// Evaluates the network on one frame with the given tied factors.
/// z1 / z2 sizes must equal the architecture's session/speaker dims.
Activations forward(const NetworkParams& params, const Vector& x,
                    const Vector& z1, const Vector& z2,
                    const DropoutMask* mask = nullptr);

/// In-place variant reusing the Activations buffers.
void forward(const NetworkParams& params, const Vector& x, const Vector& z1,
             const Vector& z2, const DropoutMask* mask, Activations& acts);

/// Exact reverse-mode gradients of a frame cost with respect to every
/// parameter and both injected factors, given dJ/d(output).
GradientBundle backward(const NetworkParams& params, const Activations& acts,
                        const Vector& dj_dout);

/// Adds this frame's gradients into `accum` (ascending-index accumulation
/// is the module's canonical reduction order).
void backward_accumulate(const NetworkParams& params, const Activations& acts,
                         const Vector& dj_dout, GradientBundle& accum);

/// Gradient with respect to the injected factors only; shares the exact
/// arithmetic of the full backward pass, skipping the parameter outer
/// products.
void backward_factors(const NetworkParams& params, const Activations& acts,
                      const Vector& dj_dout, Vector& d_z_session,
                      Vector& d_z_speaker);

/// Mean squared error over dimensions: cost = |out - target|^2 / D,
/// dJ/dout = 2 (out - target) / D.
std::pair<double, Vector> mse_cost(const Vector& output, const Vector& target);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamConfig config;
  std::int64_t step = 0;
  GradientBundle m;  // first moments (factor slots unused)
  GradientBundle v;  // second moments

  static AdamState init(const Architecture& arch, const AdamConfig& cfg = {});
};

/// One bias-corrected Adam step on every network parameter, including the
/// factor loading matrices. lr must be > 0.
void adam_update(AdamState& state, NetworkParams& params,
                 const GradientBundle& grads, double lr);

}  // namespace tf2dnn

#endif  // TF2DNN_NETWORK_HPP
