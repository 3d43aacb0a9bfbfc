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

#include "tf2dnn/scoring.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace tf2dnn {

namespace {

// FNV-1a, used to hash trial identities into per-trial rng streams.
std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

double log_mean_exp(const std::vector<double>& v) {
  double vmax = v.front();
  for (double x : v) vmax = std::max(vmax, x);
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - vmax);
  return vmax + std::log(sum) - std::log(static_cast<double>(v.size()));
}

void check_trial_frames(const UbmModel& ubm, const Matrix& frames) {
  if (frames.rows() == 0) {
    throw std::invalid_argument("score_trial: empty utterance");
  }
  if (frames.cols() != ubm.params.arch.input_dim()) {
    throw std::invalid_argument("score_trial: frame dim mismatch");
  }
}

bool uses_adapted_factor(const SpeakerModel& spk) {
  return spk.method == EnrolMethod::kFactor && spk.z_speaker.size() > 0;
}

}  // namespace

const char* trial_label_name(TrialLabel l) {
  switch (l) {
    case TrialLabel::kTarget: return "tgt";
    case TrialLabel::kNontarget: return "non";
    case TrialLabel::kUnknown: return "unk";
  }
  return "unk";
}

TrialLabel parse_trial_label(const std::string& s) {
  if (s == "tgt") return TrialLabel::kTarget;
  if (s == "non") return TrialLabel::kNontarget;
  if (s == "unk") return TrialLabel::kUnknown;
  throw std::invalid_argument("unknown trial label '" + s + "'");
}

TrialScore score_trial(const SpeakerModel& spk, const UbmModel& ubm,
                       const Matrix& frames, bool normalize) {
  check_trial_frames(ubm, frames);
  if (spk.b.rows() != ubm.head.b.rows() || spk.b.cols() != ubm.head.b.cols()) {
    throw std::invalid_argument("score_trial: speaker model shape mismatch");
  }
  RegressionHead spk_head = ubm.head;  // both heads share the UBM psi
  spk_head.b = spk.b;

  const Vector z1 = Vector::Zero(ubm.params.arch.session_dim);
  const Vector z2 = Vector::Zero(ubm.params.arch.speaker_dim);
  const bool factor_model = uses_adapted_factor(spk);

  double total = 0.0;
  Activations acts;
  for (Index t = 0; t < frames.rows(); ++t) {
    const Vector x = frames.row(t).transpose();
    forward(ubm.params, x, z1, z2, nullptr, acts);
    const double den = ubm.head.loglik(acts.penultimate(), x);
    double num;
    if (factor_model) {
      forward(ubm.params, x, z1, spk.z_speaker, nullptr, acts);
      num = spk_head.loglik(acts.penultimate(), x);
    } else {
      num = spk_head.loglik(acts.penultimate(), x);
    }
    total += num - den;
  }

  TrialScore score;
  score.frame_count = frames.rows();
  score.mc_samples = 0;
  score.log_lr =
      normalize ? total / static_cast<double>(frames.rows()) : total;
  return score;
}

TrialScore score_trial_mc(const SpeakerModel& spk, const UbmModel& ubm,
                          const Matrix& frames, double p, int samples,
                          std::uint64_t seed, bool shared_masks,
                          bool normalize) {
  if (samples < 1) {
    throw std::invalid_argument("score_trial_mc: needs at least one sample");
  }
  if (!(p >= 0.0 && p < 1.0)) {
    throw std::invalid_argument("score_trial_mc: p must lie in [0, 1)");
  }
  if (p == 0.0) {
    // Degenerate Bernoulli: every mask keeps everything.
    return score_trial(spk, ubm, frames, normalize);
  }
  check_trial_frames(ubm, frames);

  RegressionHead spk_head = ubm.head;
  spk_head.b = spk.b;
  const Vector z1 = Vector::Zero(ubm.params.arch.session_dim);
  const Vector z2 = Vector::Zero(ubm.params.arch.speaker_dim);
  const bool factor_model = uses_adapted_factor(spk);

  Rng rng(seed);
  std::vector<DropoutMask> shared;
  if (shared_masks) {
    shared.reserve(samples);
    for (int l = 0; l < samples; ++l) {
      shared.push_back(sample_dropout_mask(ubm.params.arch, rng, p));
    }
  }

  double total = 0.0;
  Activations acts;
  std::vector<double> num(samples), den(samples);
  for (Index t = 0; t < frames.rows(); ++t) {
    const Vector x = frames.row(t).transpose();
    for (int l = 0; l < samples; ++l) {
      DropoutMask local;
      const DropoutMask* mask;
      if (shared_masks) {
        mask = &shared[l];
      } else {
        local = sample_dropout_mask(ubm.params.arch, rng, p);
        mask = &local;
      }
      // The same mask drives both hypotheses of the ratio.
      forward(ubm.params, x, z1, z2, mask, acts);
      den[l] = ubm.head.loglik(acts.penultimate(), x);
      if (factor_model) {
        forward(ubm.params, x, z1, spk.z_speaker, mask, acts);
        num[l] = spk_head.loglik(acts.penultimate(), x);
      } else {
        num[l] = spk_head.loglik(acts.penultimate(), x);
      }
    }
    total += log_mean_exp(num) - log_mean_exp(den);
  }

  TrialScore score;
  score.frame_count = frames.rows();
  score.mc_samples = samples;
  score.log_lr =
      normalize ? total / static_cast<double>(frames.rows()) : total;
  return score;
}

std::vector<TrialResult> score_trialset(
    const std::map<std::string, SpeakerModel>& models, const UbmModel& ubm,
    const std::vector<Trial>& trials,
    const std::map<std::string, Matrix>& utterances, const ScoreConfig& cfg) {
  std::vector<TrialResult> results(trials.size());

  auto score_one = [&](std::size_t i) {
    TrialResult& r = results[i];
    r.trial = trials[i];
    const auto model_it = models.find(r.trial.model_id);
    if (model_it == models.end()) {
      r.error = "unknown model '" + r.trial.model_id + "'";
      return;
    }
    const auto utt_it = utterances.find(r.trial.utterance_id);
    if (utt_it == utterances.end()) {
      r.error = "unknown utterance '" + r.trial.utterance_id + "'";
      return;
    }
    try {
      if (cfg.mc_samples > 0) {
        const std::uint64_t trial_seed = derive_seed(
            cfg.seed,
            fnv1a64(r.trial.model_id + '\t' + r.trial.utterance_id));
        r.score = score_trial_mc(model_it->second, ubm, utt_it->second,
                                 cfg.mc_p, cfg.mc_samples, trial_seed,
                                 cfg.mc_shared_masks, cfg.normalize);
      } else {
        r.score = score_trial(model_it->second, ubm, utt_it->second,
                              cfg.normalize);
      }
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  };

  const int threads = std::max(1, cfg.threads);
  if (threads == 1 || trials.size() < 2) {
    for (std::size_t i = 0; i < trials.size(); ++i) score_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= trials.size()) return;
        score_one(i);
      }
    };
    std::vector<std::thread> pool;
    const int n = std::min<int>(threads, static_cast<int>(trials.size()));
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return results;
}

}  // namespace tf2dnn
