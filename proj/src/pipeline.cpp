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

#include "tf2dnn/pipeline.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

namespace tf2dnn {

std::string speaker_model_id(int speaker) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "spk%04d", speaker);
  return buf;
}

std::string utterance_id(int session) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "u%05d", session);
  return buf;
}

std::pair<SufficientStats, Vector> compute_dataset_stats(
    const NetworkParams& params, const Dataset& data,
    const LatentFactors* factors) {
  if (data.dim() != params.arch.input_dim()) {
    throw std::invalid_argument("dataset stats: frame dim mismatch");
  }
  SufficientStats stats = SufficientStats::zeros(
      params.arch.penultimate_dim() + 1, params.arch.output_dim());
  Vector sxx_diag = Vector::Zero(params.arch.output_dim());
  const Vector zero1 = Vector::Zero(params.arch.session_dim);
  const Vector zero2 = Vector::Zero(params.arch.speaker_dim);
  Activations acts;
  for (Index t = 0; t < data.num_frames(); ++t) {
    const Vector x = data.frames.row(t).transpose();
    if (factors != nullptr) {
      const Vector z1 = factors->session.row(data.session_of[t]).transpose();
      const Vector z2 = factors->speaker.row(data.speaker_of[t]).transpose();
      forward(params, x, z1, z2, nullptr, acts);
    } else {
      forward(params, x, zero1, zero2, nullptr, acts);
    }
    stats.add(augment_bias(acts.penultimate()), x);
    sxx_diag.array() += x.array().square();
  }
  return {std::move(stats), std::move(sxx_diag)};
}

std::pair<UbmModel, std::vector<double>> train_ubm(const Architecture& arch,
                                                   const TrainConfig& cfg,
                                                   const Dataset& data,
                                                   const UbmOptions& opts) {
  TrainResult result = train(arch, cfg, data);
  auto [stats, sxx_diag] = compute_dataset_stats(
      result.params, data, opts.stats_with_factors ? &result.factors : nullptr);
  UbmModel ubm;
  ubm.params = std::move(result.params);
  ubm.factors = std::move(result.factors);
  ubm.head = fit_head(stats, sxx_diag, opts.lambda0);
  ubm.stats = std::move(stats);
  ubm.validate();
  return {std::move(ubm), std::move(result.epoch_loss)};
}

std::vector<SpeakerModel> enrol_speakers(const UbmModel& ubm,
                                         const Dataset& data,
                                         const EnrolOptions& opts) {
  std::vector<SpeakerModel> models;
  models.reserve(data.num_speakers);
  for (int s = 0; s < data.num_speakers; ++s) {
    const std::vector<int>& rows = data.frames_of_speaker[s];
    if (rows.empty()) continue;
    Matrix frames(static_cast<Index>(rows.size()), data.dim());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      frames.row(static_cast<Index>(i)) = data.frames.row(rows[i]);
    }
    const std::string id = speaker_model_id(s);
    switch (opts.method) {
      case EnrolMethod::kMapPrior:
        models.push_back(
            enrol_map_prior(ubm, compute_enrol_stats(ubm, frames), id));
        break;
      case EnrolMethod::kInterpolated:
        models.push_back(enrol_interpolated(ubm,
                                            compute_enrol_stats(ubm, frames),
                                            opts.alpha, id,
                                            opts.normalize_stats));
        break;
      case EnrolMethod::kFactor:
        models.push_back(enrol_factor(ubm, frames, opts.factor_iterations,
                                      opts.factor_rate, id));
        break;
    }
  }
  return models;
}

std::map<std::string, Matrix> utterance_table(const Dataset& data) {
  std::map<std::string, Matrix> table;
  for (int f = 0; f < data.num_sessions; ++f) {
    const std::vector<int>& rows = data.frames_of_session[f];
    if (rows.empty()) continue;
    Matrix frames(static_cast<Index>(rows.size()), data.dim());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      frames.row(static_cast<Index>(i)) = data.frames.row(rows[i]);
    }
    table.emplace(utterance_id(f), std::move(frames));
  }
  return table;
}

std::vector<Trial> make_trials(const Dataset& test_data) {
  std::vector<Trial> trials;
  for (int s = 0; s < test_data.num_speakers; ++s) {
    for (int f = 0; f < test_data.num_sessions; ++f) {
      if (test_data.frames_of_session[f].empty()) continue;
      Trial trial;
      trial.model_id = speaker_model_id(s);
      trial.utterance_id = utterance_id(f);
      trial.label = test_data.speaker_of_session[f] == s
                        ? TrialLabel::kTarget
                        : TrialLabel::kNontarget;
      trials.push_back(std::move(trial));
    }
  }
  return trials;
}

ScoreSet score_set_from_records(const std::vector<ScoreRecord>& records) {
  ScoreSet set;
  for (const ScoreRecord& r : records) {
    if (r.label == TrialLabel::kTarget) {
      set.target.push_back(r.score);
    } else if (r.label == TrialLabel::kNontarget) {
      set.nontarget.push_back(r.score);
    }
  }
  return set;
}

EvalSummary evaluate_scores(const std::vector<ScoreRecord>& records) {
  const ScoreSet set = score_set_from_records(records);
  if (set.target.empty() || set.nontarget.empty()) {
    throw std::invalid_argument(
        "evaluate: needs at least one target and one nontarget score");
  }
  EvalSummary summary;
  summary.eer = eer(set);
  summary.dcf08 = min_dcf(set, kDcf08);
  summary.dcf10 = min_dcf(set, kDcf10);
  summary.target_count = set.target.size();
  summary.nontarget_count = set.nontarget.size();
  double tsum = 0.0;
  for (double v : set.target) tsum += v;
  double nsum = 0.0;
  for (double v : set.nontarget) nsum += v;
  summary.target_mean = tsum / static_cast<double>(set.target.size());
  summary.nontarget_mean = nsum / static_cast<double>(set.nontarget.size());
  return summary;
}

namespace {

// Builds the utterance-per-session datasets the bench scores against.
Dataset utterances_to_dataset(const std::vector<Utterance>& utts,
                              int num_speakers) {
  Index total = 0;
  for (const Utterance& u : utts) total += u.frames.rows();
  Matrix frames(total, utts.empty() ? 0 : utts.front().frames.cols());
  std::vector<int> session_of(total);
  std::vector<int> speaker_of(total);
  Index row = 0;
  for (std::size_t i = 0; i < utts.size(); ++i) {
    for (Index t = 0; t < utts[i].frames.rows(); ++t) {
      frames.row(row) = utts[i].frames.row(t);
      session_of[row] = static_cast<int>(i);
      speaker_of[row] = utts[i].speaker;
      ++row;
    }
  }
  return Dataset::make(std::move(frames), std::move(session_of),
                       std::move(speaker_of), static_cast<int>(utts.size()),
                       num_speakers);
}

EvalSummary run_system(const Architecture& arch, const BenchConfig& cfg,
                       const SynthData& data, const Dataset& enrol_data,
                       const Dataset& test_data, std::ostream* log,
                       const std::string& name) {
  if (log) *log << "[bench] training " << name << "...\n" << std::flush;
  auto [ubm, trace] = train_ubm(arch, cfg.train, data.train, cfg.ubm);
  if (log) {
    *log << "[bench] " << name << " final train cost "
         << (trace.empty() ? 0.0 : trace.back()) << "\n"
         << std::flush;
  }
  const std::vector<SpeakerModel> speakers =
      enrol_speakers(ubm, enrol_data, cfg.enrol);
  std::map<std::string, SpeakerModel> model_table;
  for (const SpeakerModel& m : speakers) model_table.emplace(m.speaker_id, m);

  const std::vector<Trial> trials = make_trials(test_data);
  const std::map<std::string, Matrix> utts = utterance_table(test_data);
  const std::vector<TrialResult> results =
      score_trialset(model_table, ubm, trials, utts, cfg.score);

  std::vector<ScoreRecord> records;
  records.reserve(results.size());
  for (const TrialResult& r : results) {
    if (!r.error.empty()) {
      throw std::runtime_error("bench: trial " + r.trial.model_id + "/" +
                               r.trial.utterance_id + " failed: " + r.error);
    }
    records.push_back({r.trial.model_id, r.trial.utterance_id,
                       r.score->log_lr, r.trial.label});
  }
  return evaluate_scores(records);
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& cfg, std::ostream* log) {
  SynthData data = generate(cfg.synth);
  const Dataset enrol_data =
      utterances_to_dataset(data.enrol, cfg.synth.speakers);
  const Dataset test_data =
      utterances_to_dataset(data.test, cfg.synth.speakers);

  std::vector<BenchRow> rows;

  const Architecture baseline = Architecture::autoencoder(
      cfg.synth.feature_dim, cfg.encoder_hidden, cfg.bottleneck,
      cfg.decoder_hidden, 0, 0, {}, cfg.train.dropout_p, {});
  BenchRow base_row;
  base_row.system = "DNN";
  base_row.summary =
      run_system(baseline, cfg, data, enrol_data, test_data, log, "DNN");
  rows.push_back(base_row);

  for (const auto& [r1, r2] : cfg.factor_grid) {
    const Architecture tf2 = Architecture::autoencoder(
        cfg.synth.feature_dim, cfg.encoder_hidden, cfg.bottleneck,
        cfg.decoder_hidden, r1, r2, {}, cfg.train.dropout_p, {});
    BenchRow row;
    row.system = "TF2-DNN";
    row.r1 = r1;
    row.r2 = r2;
    row.summary = run_system(tf2, cfg, data, enrol_data, test_data, log,
                             "TF2-DNN (R1=" + std::to_string(r1) +
                                 ", R2=" + std::to_string(r2) + ")");
    rows.push_back(row);
  }
  return rows;
}

std::string format_bench_table(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-10s %4s %4s %8s %8s %8s %10s %10s\n",
                "system", "R1", "R2", "EER%", "dcf08", "dcf10", "tgt_mean",
                "non_mean");
  os << buf;
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%-10s %4d %4d %8.3f %8.4f %8.4f %10.4f %10.4f\n",
                  r.system.c_str(), r.r1, r.r2, 100.0 * r.summary.eer,
                  r.summary.dcf08, r.summary.dcf10, r.summary.target_mean,
                  r.summary.nontarget_mean);
    os << buf;
  }
  return os.str();
}

}  // namespace tf2dnn
