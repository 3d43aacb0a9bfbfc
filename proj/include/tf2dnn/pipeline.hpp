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

#ifndef TF2DNN_PIPELINE_HPP
#define TF2DNN_PIPELINE_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tf2dnn/adaptation.hpp"
#include "tf2dnn/archive_io.hpp"
#include "tf2dnn/datagen.hpp"
#include "tf2dnn/metrics.hpp"
#include "tf2dnn/model_io.hpp"
#include "tf2dnn/scoring.hpp"

namespace tf2dnn {

/// Canonical external ids: speaker models are "spk%04d" over the global
/// speaker index, utterances "u%05d" over the session index of their
/// archive.
std::string speaker_model_id(int speaker);
std::string utterance_id(int session);

/// Background-data statistics: one deterministic forward pass per frame.
/// When factors is non-null each frame uses its trained session/speaker
/// factor rows; otherwise factors are zero. Returns the augmented
/// regressor stats and the diagonal of sum x x^T needed to fit psi.
std::pair<SufficientStats, Vector> compute_dataset_stats(
    const NetworkParams& params, const Dataset& data,
    const LatentFactors* factors);

struct UbmOptions {
  double lambda0 = 1.0;
  bool stats_with_factors = true;  // false: zero-factor stats
};

/// Trains the network on `data` and fits the regression head from the
/// sufficient statistics. Returns the model plus the per-epoch loss
/// trace.
std::pair<UbmModel, std::vector<double>> train_ubm(const Architecture& arch,
                                                   const TrainConfig& cfg,
                                                   const Dataset& data,
                                                   const UbmOptions& opts = {});

struct EnrolOptions {
  EnrolMethod method = EnrolMethod::kInterpolated;
  double alpha = 0.5;           // interpolation weight on the UBM stats
  bool normalize_stats = false;
  int factor_iterations = 20;
  double factor_rate = 1e-3;
};

/// Enrolls one speaker model per speaker present in `data`; each
/// speaker's enrollment frames are the concatenation of its utterances
/// (sessions) in ascending frame order. Model ids follow
/// speaker_model_id().
std::vector<SpeakerModel> enrol_speakers(const UbmModel& ubm,
                                         const Dataset& data,
                                         const EnrolOptions& opts);

/// Splits an utterance-per-session archive into the scoring table form:
/// utterance_id(session) -> frames.
std::map<std::string, Matrix> utterance_table(const Dataset& data);

/// All model x utterance pairs, labeled tgt/non by speaker identity.
std::vector<Trial> make_trials(const Dataset& test_data);

struct EvalSummary {
  double eer = 0.0;
  double dcf08 = 0.0;
  double dcf10 = 0.0;
  double target_mean = 0.0;
  double nontarget_mean = 0.0;
  std::size_t target_count = 0;
  std::size_t nontarget_count = 0;
};

/// Metrics over the labeled records; unknown-label records are ignored.
EvalSummary evaluate_scores(const std::vector<ScoreRecord>& records);

ScoreSet score_set_from_records(const std::vector<ScoreRecord>& records);

struct BenchConfig {
  SynthConfig synth;
  TrainConfig train;
  std::vector<int> encoder_hidden = {64, 64};
  int bottleneck = 8;
  std::vector<int> decoder_hidden = {64, 64};
  // (R1, R2) grid for the tied-factor system; the baseline is trained once.
  std::vector<std::pair<int, int>> factor_grid = {{5, 5}};
  UbmOptions ubm;
  EnrolOptions enrol;
  ScoreConfig score;
};

struct BenchRow {
  std::string system;  // "DNN" or "TF2-DNN"
  int r1 = 0;
  int r2 = 0;
  EvalSummary summary;
};

/// Self-contained comparison: synthesizes data, trains the baseline DNN
/// and one TF2-DNN per grid point with identical seeds, enrolls, scores
/// and evaluates. `log` (optional) receives progress lines.
std::vector<BenchRow> run_bench(const BenchConfig& cfg, std::ostream* log);

/// Renders the rows as an aligned text table.
std::string format_bench_table(const std::vector<BenchRow>& rows);

}  // namespace tf2dnn

#endif  // TF2DNN_PIPELINE_HPP
