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

#ifndef TF2DNN_ADAPTATION_HPP
#define TF2DNN_ADAPTATION_HPP

#include <string>

#include "tf2dnn/network.hpp"
#include "tf2dnn/regression_head.hpp"
#include "tf2dnn/trainer.hpp"

namespace tf2dnn {

/// Trained background model: the network, the latent factors it was
/// trained with (retained for stats provenance), the fitted regression
/// head and the sufficient statistics of the background data.
struct UbmModel {
  NetworkParams params;
  LatentFactors factors;
  RegressionHead head;
  SufficientStats stats;

  void validate() const;
};

enum class EnrolMethod : std::uint8_t {
  kMapPrior = 0,     // UBM as the prior mean
  kInterpolated = 1, // interpolated UBM/speaker stats
  kFactor = 2,       // speaker latent factor, frozen weights
};

const char* enrol_method_name(EnrolMethod m);

struct SpeakerModel {
  std::string speaker_id;
  Matrix b;          // adapted regression weights, shape of the UBM's
  Vector z_speaker;  // adapted speaker factor; zero-sized unless kFactor
  EnrolMethod method = EnrolMethod::kInterpolated;
};

/// Forwards each frame (row) through the UBM network with zero latent
/// factors — unseen utterances have no trained factor entries — and
/// accumulates bias-augmented regressor statistics.
SufficientStats compute_enrol_stats(const UbmModel& ubm, const Matrix& frames);

/// MAP adaptation with the UBM weights as the prior mean:
/// B_spk = (beta S_yy + lambda0 I)^-1 (beta S_yx + lambda0 B_ubm).
/// Empty stats return the prior mean itself, exactly.
SpeakerModel enrol_map_prior(const UbmModel& ubm,
                             const SufficientStats& enrol_stats,
                             std::string speaker_id);

/// Zero-mean-prior posterior over the alpha-blended UBM and speaker
/// stats. alpha = 1 reproduces the UBM weights exactly; alpha = 0 is
/// pure speaker MAP. When normalize_stats is set each side is divided
/// by its own frame count before blending (the raw Eq. form weights
/// sums, which the background data dominates).
SpeakerModel enrol_interpolated(const UbmModel& ubm,
                                const SufficientStats& enrol_stats,
                                double alpha, std::string speaker_id,
                                bool normalize_stats = false);

/// Estimates a speaker factor on the enrollment frames by iterating the
/// tied-gradient step with everything else frozen (the network weights
/// must remain fixed at enrollment). The regression weights stay at the
/// UBM values.
SpeakerModel enrol_factor(const UbmModel& ubm, const Matrix& frames,
                          int iterations, double rate,
                          std::string speaker_id);

}  // namespace tf2dnn

#endif  // TF2DNN_ADAPTATION_HPP
