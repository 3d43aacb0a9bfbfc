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

#include "tf2dnn/adaptation.hpp"

namespace tf2dnn {

void UbmModel::validate() const {
  params.validate();
  head.validate();
  stats.validate();
  if (head.b.rows() != params.arch.penultimate_dim() + 1 ||
      head.b.cols() != params.arch.output_dim()) {
    throw std::invalid_argument("ubm: head shape does not match the network");
  }
  if (stats.s_yy.rows() != head.b.rows() ||
      stats.s_yx.cols() != head.b.cols()) {
    throw std::invalid_argument("ubm: stats shape does not match the head");
  }
}

const char* enrol_method_name(EnrolMethod m) {
  switch (m) {
    case EnrolMethod::kMapPrior: return "map_prior";
    case EnrolMethod::kInterpolated: return "interpolated";
    case EnrolMethod::kFactor: return "factor";
  }
  return "unknown";
}

SufficientStats compute_enrol_stats(const UbmModel& ubm,
                                    const Matrix& frames) {
  if (frames.rows() > 0 && frames.cols() != ubm.params.arch.input_dim()) {
    throw std::invalid_argument("enrol stats: frame dim mismatch");
  }
  SufficientStats stats = SufficientStats::zeros(
      ubm.params.arch.penultimate_dim() + 1, ubm.params.arch.output_dim());
  const Vector z1 = Vector::Zero(ubm.params.arch.session_dim);
  const Vector z2 = Vector::Zero(ubm.params.arch.speaker_dim);
  Activations acts;
  for (Index t = 0; t < frames.rows(); ++t) {
    const Vector x = frames.row(t).transpose();
    forward(ubm.params, x, z1, z2, nullptr, acts);
    stats.add(augment_bias(acts.penultimate()), x);
  }
  return stats;
}

SpeakerModel enrol_map_prior(const UbmModel& ubm,
                             const SufficientStats& enrol_stats,
                             std::string speaker_id) {
  enrol_stats.validate();
  SpeakerModel model;
  model.speaker_id = std::move(speaker_id);
  model.method = EnrolMethod::kMapPrior;
  if (enrol_stats.count == 0) {
    // No data: the posterior collapses onto the prior mean.
    model.b = ubm.head.b;
    return model;
  }
  model.b = estimate_map(enrol_stats, ubm.head.lambda0, ubm.head.beta,
                         ubm.head.b);
  return model;
}

SpeakerModel enrol_interpolated(const UbmModel& ubm,
                                const SufficientStats& enrol_stats,
                                double alpha, std::string speaker_id,
                                bool normalize_stats) {
  enrol_stats.validate();
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("enrol_interpolated: alpha must lie in [0, 1]");
  }
  const double lam = ubm.head.lambda0 / ubm.head.beta;
  SpeakerModel model;
  model.speaker_id = std::move(speaker_id);
  model.method = EnrolMethod::kInterpolated;
  if (!normalize_stats && alpha == 1.0) {
    // Identical solve to the UBM's own fit, bit for bit.
    model.b = ridge_solve(ubm.stats.s_yy, lam, ubm.stats.s_yx);
    return model;
  }
  if (!normalize_stats && alpha == 0.0) {
    model.b = ridge_solve(enrol_stats.s_yy, lam, enrol_stats.s_yx);
    return model;
  }
  double w_ubm = alpha;
  double w_spk = 1.0 - alpha;
  if (normalize_stats) {
    if (ubm.stats.count > 0) w_ubm /= static_cast<double>(ubm.stats.count);
    if (enrol_stats.count > 0) {
      w_spk /= static_cast<double>(enrol_stats.count);
    }
  }
  const Matrix s_yy = w_ubm * ubm.stats.s_yy + w_spk * enrol_stats.s_yy;
  const Matrix s_yx = w_ubm * ubm.stats.s_yx + w_spk * enrol_stats.s_yx;
  model.b = ridge_solve(s_yy, lam, s_yx);
  return model;
}

SpeakerModel enrol_factor(const UbmModel& ubm, const Matrix& frames,
                          int iterations, double rate,
                          std::string speaker_id) {
  if (iterations < 1) {
    throw std::invalid_argument("enrol_factor: iterations must be >= 1");
  }
  if (frames.rows() > 0 && frames.cols() != ubm.params.arch.input_dim()) {
    throw std::invalid_argument("enrol_factor: frame dim mismatch");
  }
  const int r2 = ubm.params.arch.speaker_dim;
  const Vector z1 = Vector::Zero(ubm.params.arch.session_dim);
  Vector z2 = Vector::Zero(r2);

  Activations acts;
  Vector dz1, dz2;
  for (int it = 0; it < iterations; ++it) {
    Vector grad = Vector::Zero(r2);
    for (Index t = 0; t < frames.rows(); ++t) {
      const Vector x = frames.row(t).transpose();
      forward(ubm.params, x, z1, z2, nullptr, acts);
      auto [cost, dj] = mse_cost(acts.output(), x);
      (void)cost;
      backward_factors(ubm.params, acts, dj, dz1, dz2);
      grad += dz2;
    }
    z2 -= rate * grad;
  }

  SpeakerModel model;
  model.speaker_id = std::move(speaker_id);
  model.method = EnrolMethod::kFactor;
  model.b = ubm.head.b;
  model.z_speaker = std::move(z2);
  return model;
}

}  // namespace tf2dnn
