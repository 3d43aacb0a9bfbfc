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

#ifndef TF2DNN_SCORING_HPP
#define TF2DNN_SCORING_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tf2dnn/adaptation.hpp"

namespace tf2dnn {

enum class TrialLabel : std::uint8_t { kTarget = 0, kNontarget = 1, kUnknown = 2 };

const char* trial_label_name(TrialLabel l);
TrialLabel parse_trial_label(const std::string& s);

struct Trial {
  std::string model_id;
  std::string utterance_id;
  TrialLabel label = TrialLabel::kUnknown;
};

struct TrialScore {
  double log_lr = 0.0;  // per-frame mean log likelihood ratio by default
  Index frame_count = 0;
  int mc_samples = 0;  // 0 = deterministic
};

/// Log likelihood ratio between the speaker-adapted head and the UBM
/// head, averaged over frames. Both heads share the UBM psi; the
/// regressor y_t comes from one zero-factor forward pass, except that a
/// factor-adapted model evaluates its numerator with the adapted
/// speaker factor plugged in. When normalize is false the plain sum
/// over frames is returned.
TrialScore score_trial(const SpeakerModel& spk, const UbmModel& ubm,
                       const Matrix& frames, bool normalize = true);

/// Monte-Carlo dropout scoring: per frame and per head the likelihood is
/// averaged over `samples` dropout masks in the probability domain
/// (log-sum-exp minus ln L). Masks apply to the architecture's dropout
/// layers at probability p, resampled per frame and per sample unless
/// shared_masks is set (then one mask per sample, reused across frames).
/// p == 0 short-circuits to score_trial and is bit-identical to it.
TrialScore score_trial_mc(const SpeakerModel& spk, const UbmModel& ubm,
                          const Matrix& frames, double p, int samples,
                          std::uint64_t seed, bool shared_masks = false,
                          bool normalize = true);

struct ScoreConfig {
  int mc_samples = 0;  // 0 = deterministic scoring
  double mc_p = 0.0;
  bool mc_shared_masks = false;
  bool normalize = true;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct TrialResult {
  Trial trial;
  std::optional<TrialScore> score;
  std::string error;  // non-empty when the trial could not be scored
};

/// Scores every trial against the model and utterance tables. Missing
/// references produce per-trial error records; the run continues.
/// Results are independent of trial order and thread count: MC seeds
/// are derived from (model id, utterance id, master seed).
std::vector<TrialResult> score_trialset(
    const std::map<std::string, SpeakerModel>& models, const UbmModel& ubm,
    const std::vector<Trial>& trials,
    const std::map<std::string, Matrix>& utterances, const ScoreConfig& cfg);

}  // namespace tf2dnn

#endif  // TF2DNN_SCORING_HPP
