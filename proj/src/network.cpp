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

#include "tf2dnn/network.hpp"

#include <algorithm>
#include <cmath>

namespace tf2dnn {

namespace {

void check(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

inline void apply_nonlinearity(Nonlinearity nl, const Vector& pre,
                               Vector& post) {
  if (nl == Nonlinearity::kLinear) {
    post = pre;
    return;
  }
  post.resize(pre.size());
  for (Index i = 0; i < pre.size(); ++i) post[i] = softplus(pre[i]);
}

}  // namespace

bool Architecture::has_dropout() const {
  return std::any_of(layers.begin(), layers.end(),
                     [](const LayerSpec& l) { return l.dropout_p > 0.0; });
}

bool Architecture::has_tf2() const {
  return std::any_of(layers.begin(), layers.end(),
                     [](const LayerSpec& l) { return l.is_tf2; });
}

void Architecture::validate() const {
  check(!layers.empty(), "architecture: needs at least one layer");
  check(session_dim >= 0 && speaker_dim >= 0,
        "architecture: factor dims must be >= 0");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const LayerSpec& spec = layers[l];
    check(spec.in_dim > 0 && spec.out_dim > 0,
          "architecture: layer " + std::to_string(l) +
              " has non-positive dimensions");
    if (l > 0) {
      check(spec.in_dim == layers[l - 1].out_dim,
            "architecture: layer " + std::to_string(l) +
                " in_dim does not chain with previous out_dim");
    }
    check(spec.dropout_p >= 0.0 && spec.dropout_p < 1.0,
          "architecture: dropout_p must lie in [0, 1)");
  }
  check(layers.back().nonlinearity == Nonlinearity::kLinear,
        "architecture: last layer must be linear (it is the Gaussian mean)");
  check(layers.back().dropout_p == 0.0,
        "architecture: last layer must not carry dropout");
}

Architecture Architecture::autoencoder(int feature_dim,
                                       const std::vector<int>& encoder_hidden,
                                       int bottleneck,
                                       const std::vector<int>& decoder_hidden,
                                       int r1, int r2,
                                       std::vector<int> tf2_layers,
                                       double dropout_p,
                                       std::vector<int> dropout_layers) {
  check(feature_dim > 0, "architecture: feature_dim must be > 0");
  check(bottleneck > 0, "architecture: bottleneck must be > 0");
  std::vector<int> dims;
  dims.push_back(feature_dim);
  for (int h : encoder_hidden) dims.push_back(h);
  dims.push_back(bottleneck);
  for (int h : decoder_hidden) dims.push_back(h);
  dims.push_back(feature_dim);

  Architecture arch;
  arch.session_dim = r1;
  arch.speaker_dim = r2;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    LayerSpec spec;
    spec.in_dim = dims[i];
    spec.out_dim = dims[i + 1];
    spec.nonlinearity = (i + 2 == dims.size()) ? Nonlinearity::kLinear
                                               : Nonlinearity::kSoftplus;
    arch.layers.push_back(spec);
  }
  if (tf2_layers.empty() && r1 + r2 > 0) {
    // Default placement: the first decoder layer, the one that consumes
    // the bottleneck output.
    tf2_layers.push_back(static_cast<int>(encoder_hidden.size()) + 1);
  }
  for (int l : tf2_layers) {
    check(l >= 0 && l < arch.num_layers(),
          "architecture: tf2 layer index out of range");
    arch.layers[l].is_tf2 = true;
  }
  if (dropout_p > 0.0 && dropout_layers.empty()) {
    // One mask in the encoder and one in the decoder, next to the
    // factor injection point.
    if (!encoder_hidden.empty()) dropout_layers.push_back(0);
    dropout_layers.push_back(static_cast<int>(encoder_hidden.size()) + 1);
  }
  for (int l : dropout_layers) {
    check(l >= 0 && l + 1 < arch.num_layers(),
          "architecture: dropout layer index out of range");
    arch.layers[l].dropout_p = dropout_p;
  }
  arch.validate();
  return arch;
}

Architecture Architecture::without_factors() const {
  Architecture plain = *this;
  plain.session_dim = 0;
  plain.speaker_dim = 0;
  for (LayerSpec& l : plain.layers) l.is_tf2 = false;
  return plain;
}

NetworkParams NetworkParams::zeros(const Architecture& arch) {
  arch.validate();
  NetworkParams p;
  p.arch = arch;
  for (const LayerSpec& spec : arch.layers) {
    p.weights.push_back(Matrix::Zero(spec.out_dim, spec.in_dim));
    p.biases.push_back(Vector::Zero(spec.out_dim));
    const int r1 = spec.is_tf2 ? arch.session_dim : 0;
    const int r2 = spec.is_tf2 ? arch.speaker_dim : 0;
    p.v_session.push_back(Matrix::Zero(spec.out_dim, r1));
    p.v_speaker.push_back(Matrix::Zero(spec.out_dim, r2));
  }
  return p;
}

void NetworkParams::validate() const {
  arch.validate();
  const std::size_t n = arch.layers.size();
  check(weights.size() == n && biases.size() == n && v_session.size() == n &&
            v_speaker.size() == n,
        "network params: tensor count does not match layer count");
  for (std::size_t l = 0; l < n; ++l) {
    const LayerSpec& spec = arch.layers[l];
    check(weights[l].rows() == spec.out_dim && weights[l].cols() == spec.in_dim,
          "network params: weight shape mismatch at layer " +
              std::to_string(l));
    check(biases[l].size() == spec.out_dim,
          "network params: bias shape mismatch at layer " + std::to_string(l));
    const int r1 = spec.is_tf2 ? arch.session_dim : 0;
    const int r2 = spec.is_tf2 ? arch.speaker_dim : 0;
    check(v_session[l].rows() == spec.out_dim && v_session[l].cols() == r1,
          "network params: session loading shape mismatch at layer " +
              std::to_string(l));
    check(v_speaker[l].rows() == spec.out_dim && v_speaker[l].cols() == r2,
          "network params: speaker loading shape mismatch at layer " +
              std::to_string(l));
  }
}

bool NetworkParams::all_finite() const {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (!weights[l].allFinite() || !biases[l].allFinite() ||
        !v_session[l].allFinite() || !v_speaker[l].allFinite()) {
      return false;
    }
  }
  return true;
}

NetworkParams NetworkParams::without_factors() const {
  NetworkParams plain = NetworkParams::zeros(arch.without_factors());
  plain.weights = weights;
  plain.biases = biases;
  return plain;
}

bool DropoutMask::empty() const {
  return std::all_of(scale.begin(), scale.end(),
                     [](const Vector& v) { return v.size() == 0; });
}

DropoutMask sample_dropout_mask(const Architecture& arch, Rng& rng,
                                double p_override) {
  DropoutMask mask;
  mask.scale.resize(arch.layers.size());
  for (std::size_t l = 0; l < arch.layers.size(); ++l) {
    const LayerSpec& spec = arch.layers[l];
    if (spec.dropout_p <= 0.0) continue;
    const double p = p_override >= 0.0 ? p_override : spec.dropout_p;
    check(p >= 0.0 && p < 1.0, "dropout probability must lie in [0, 1)");
    Vector& s = mask.scale[l];
    s.resize(spec.out_dim);
    const double keep_scale = 1.0 / (1.0 - p);
    for (Index i = 0; i < s.size(); ++i) {
      s[i] = rng.next_double() < p ? 0.0 : keep_scale;
    }
  }
  return mask;
}

void forward(const NetworkParams& params, const Vector& x, const Vector& z1,
             const Vector& z2, const DropoutMask* mask, Activations& acts) {
  const Architecture& arch = params.arch;
  check(x.size() == arch.input_dim(), "forward: input dim mismatch");
  check(z1.size() == arch.session_dim, "forward: session factor dim mismatch");
  check(z2.size() == arch.speaker_dim, "forward: speaker factor dim mismatch");
  if (mask != nullptr) {
    check(mask->scale.size() == arch.layers.size(),
          "forward: dropout mask layer count mismatch");
  }

  const std::size_t n = arch.layers.size();
  acts.input = x;
  acts.z_session = z1;
  acts.z_speaker = z2;
  acts.pre.resize(n);
  acts.post.resize(n);
  acts.mask_scale.assign(n, Vector());

  const Vector* in = &acts.input;
  for (std::size_t l = 0; l < n; ++l) {
    const LayerSpec& spec = arch.layers[l];
    Vector& pre = acts.pre[l];
    pre.noalias() = params.weights[l] * (*in);
    pre += params.biases[l];
    if (spec.is_tf2) {
      pre.noalias() += params.v_session[l] * z1;
      pre.noalias() += params.v_speaker[l] * z2;
    }
    apply_nonlinearity(spec.nonlinearity, pre, acts.post[l]);
    if (mask != nullptr && mask->scale[l].size() > 0) {
      check(mask->scale[l].size() == spec.out_dim,
            "forward: dropout mask dim mismatch at layer " +
                std::to_string(l));
      acts.mask_scale[l] = mask->scale[l];
      acts.post[l].array() *= mask->scale[l].array();
    }
    in = &acts.post[l];
  }
}

Activations forward(const NetworkParams& params, const Vector& x,
                    const Vector& z1, const Vector& z2,
                    const DropoutMask* mask) {
  Activations acts;
  forward(params, x, z1, z2, mask, acts);
  return acts;
}

GradientBundle GradientBundle::zeros(const Architecture& arch) {
  GradientBundle g;
  for (const LayerSpec& spec : arch.layers) {
    g.d_weights.push_back(Matrix::Zero(spec.out_dim, spec.in_dim));
    g.d_biases.push_back(Vector::Zero(spec.out_dim));
    const int r1 = spec.is_tf2 ? arch.session_dim : 0;
    const int r2 = spec.is_tf2 ? arch.speaker_dim : 0;
    g.d_v_session.push_back(Matrix::Zero(spec.out_dim, r1));
    g.d_v_speaker.push_back(Matrix::Zero(spec.out_dim, r2));
  }
  g.d_z_session = Vector::Zero(arch.session_dim);
  g.d_z_speaker = Vector::Zero(arch.speaker_dim);
  return g;
}

void GradientBundle::setZero() {
  for (auto& m : d_weights) m.setZero();
  for (auto& v : d_biases) v.setZero();
  for (auto& m : d_v_session) m.setZero();
  for (auto& m : d_v_speaker) m.setZero();
  d_z_session.setZero();
  d_z_speaker.setZero();
}

void GradientBundle::scale(double s) {
  for (auto& m : d_weights) m *= s;
  for (auto& v : d_biases) v *= s;
  for (auto& m : d_v_session) m *= s;
  for (auto& m : d_v_speaker) m *= s;
  d_z_session *= s;
  d_z_speaker *= s;
}

void GradientBundle::add(const GradientBundle& other) {
  for (std::size_t l = 0; l < d_weights.size(); ++l) {
    d_weights[l] += other.d_weights[l];
    d_biases[l] += other.d_biases[l];
    d_v_session[l] += other.d_v_session[l];
    d_v_speaker[l] += other.d_v_speaker[l];
  }
  d_z_session += other.d_z_session;
  d_z_speaker += other.d_z_speaker;
}

namespace {

// Shared reverse pass. The delta chain (d cost / d pre-activation) is
// identical whether or not parameter gradients are materialized, which
// keeps factor-only gradients bit-equal to the full pass.
void backward_impl(const NetworkParams& params, const Activations& acts,
                   const Vector& dj_dout, GradientBundle* accum,
                   Vector* d_z1_out, Vector* d_z2_out) {
  const Architecture& arch = params.arch;
  const std::size_t n = arch.layers.size();
  check(acts.post.size() == n && acts.pre.size() == n,
        "backward: activations do not match the architecture");
  check(dj_dout.size() == arch.output_dim(),
        "backward: dJ/dout dim mismatch");
  check(acts.z_session.size() == arch.session_dim &&
            acts.z_speaker.size() == arch.speaker_dim,
        "backward: stale activations (factor dims)");
  check(acts.input.size() == arch.input_dim(),
        "backward: stale activations (input dim)");

  Vector d_z1 = Vector::Zero(arch.session_dim);
  Vector d_z2 = Vector::Zero(arch.speaker_dim);

  // d cost / d layer-output, walking backwards.
  Vector d_out = dj_dout;
  Vector d_pre;
  for (std::size_t li = n; li-- > 0;) {
    const LayerSpec& spec = arch.layers[li];
    check(acts.pre[li].size() == spec.out_dim,
          "backward: stale activations at layer " + std::to_string(li));
    // Through the dropout mask, then the nonlinearity.
    if (acts.mask_scale[li].size() > 0) {
      d_out.array() *= acts.mask_scale[li].array();
    }
    if (spec.nonlinearity == Nonlinearity::kLinear) {
      d_pre = d_out;
    } else {
      d_pre.resize(spec.out_dim);
      for (Index i = 0; i < d_pre.size(); ++i) {
        d_pre[i] = d_out[i] * softplus_deriv(acts.pre[li][i]);
      }
    }
    const Vector& layer_in = (li == 0) ? acts.input : acts.post[li - 1];
    if (accum != nullptr) {
      accum->d_weights[li].noalias() += d_pre * layer_in.transpose();
      accum->d_biases[li] += d_pre;
      if (spec.is_tf2) {
        accum->d_v_session[li].noalias() +=
            d_pre * acts.z_session.transpose();
        accum->d_v_speaker[li].noalias() +=
            d_pre * acts.z_speaker.transpose();
      }
    }
    if (spec.is_tf2) {
      d_z1.noalias() += params.v_session[li].transpose() * d_pre;
      d_z2.noalias() += params.v_speaker[li].transpose() * d_pre;
    }
    if (li > 0) d_out.noalias() = params.weights[li].transpose() * d_pre;
  }

  if (accum != nullptr) {
    accum->d_z_session += d_z1;
    accum->d_z_speaker += d_z2;
  }
  if (d_z1_out != nullptr) *d_z1_out = std::move(d_z1);
  if (d_z2_out != nullptr) *d_z2_out = std::move(d_z2);
}

}  // namespace

GradientBundle backward(const NetworkParams& params, const Activations& acts,
                        const Vector& dj_dout) {
  GradientBundle g = GradientBundle::zeros(params.arch);
  g.d_z_session.setZero();
  g.d_z_speaker.setZero();
  backward_impl(params, acts, dj_dout, &g, nullptr, nullptr);
  return g;
}

void backward_accumulate(const NetworkParams& params, const Activations& acts,
                         const Vector& dj_dout, GradientBundle& accum) {
  backward_impl(params, acts, dj_dout, &accum, nullptr, nullptr);
}

void backward_factors(const NetworkParams& params, const Activations& acts,
                      const Vector& dj_dout, Vector& d_z_session,
                      Vector& d_z_speaker) {
  backward_impl(params, acts, dj_dout, nullptr, &d_z_session, &d_z_speaker);
}

std::pair<double, Vector> mse_cost(const Vector& output,
                                   const Vector& target) {
  check(output.size() == target.size(), "mse_cost: dimension mismatch");
  check(output.size() > 0, "mse_cost: empty vectors");
  const double inv_d = 1.0 / static_cast<double>(output.size());
  Vector diff = output - target;
  const double cost = diff.squaredNorm() * inv_d;
  Vector grad = diff * (2.0 * inv_d);
  return {cost, std::move(grad)};
}

AdamState AdamState::init(const Architecture& arch, const AdamConfig& cfg) {
  AdamState s;
  s.config = cfg;
  s.step = 0;
  s.m = GradientBundle::zeros(arch);
  s.v = GradientBundle::zeros(arch);
  return s;
}

namespace {

template <typename T>
void adam_tensor(T& param, T& m, T& v, const T& g, double lr,
                 const AdamConfig& cfg, double bc1, double bc2) {
  m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
  v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
  param.array() -= lr * (m.array() / bc1) /
                   ((v.array() / bc2).sqrt() + cfg.epsilon);
}

}  // namespace

void adam_update(AdamState& state, NetworkParams& params,
                 const GradientBundle& grads, double lr) {
  check(lr > 0.0, "adam_update: lr must be > 0");
  check(grads.d_weights.size() == params.weights.size(),
        "adam_update: gradient shape mismatch");
  const AdamConfig& cfg = state.config;
  state.step += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, double(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, double(state.step));
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    adam_tensor(params.weights[l], state.m.d_weights[l], state.v.d_weights[l],
                grads.d_weights[l], lr, cfg, bc1, bc2);
    adam_tensor(params.biases[l], state.m.d_biases[l], state.v.d_biases[l],
                grads.d_biases[l], lr, cfg, bc1, bc2);
    if (params.v_session[l].size() > 0) {
      adam_tensor(params.v_session[l], state.m.d_v_session[l],
                  state.v.d_v_session[l], grads.d_v_session[l], lr, cfg, bc1,
                  bc2);
    }
    if (params.v_speaker[l].size() > 0) {
      adam_tensor(params.v_speaker[l], state.m.d_v_speaker[l],
                  state.v.d_v_speaker[l], grads.d_v_speaker[l], lr, cfg, bc1,
                  bc2);
    }
  }
}

}  // namespace tf2dnn
