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

#include "tf2dnn/datagen.hpp"

#include <cmath>

namespace tf2dnn {

void SynthConfig::validate() const {
  if (feature_dim < 1 || speakers < 1 || sessions_per_speaker < 1 ||
      frames_per_session < 1 || speaker_subspace_dim < 1 ||
      session_subspace_dim < 1) {
    throw std::invalid_argument("synth config: counts must be >= 1");
  }
  if (sessions_per_speaker < 4) {
    throw std::invalid_argument(
        "synth config: needs >= 4 sessions per speaker "
        "(1 train + 1 enrollment + 2 test)");
  }
  if (frames_per_session < 3) {
    throw std::invalid_argument(
        "synth config: needs >= 3 frames per session to carve the "
        "enrollment utterances");
  }
  if (speaker_scale < 0.0 || session_scale < 0.0 || noise_stddev < 0.0) {
    throw std::invalid_argument("synth config: scales must be >= 0");
  }
}

namespace {

constexpr std::uint64_t kStreamMean = 0;
constexpr std::uint64_t kStreamSpeakerBasis = 1;
constexpr std::uint64_t kStreamSessionBasis = 2;
constexpr std::uint64_t kStreamSpeakerCoord = 3;
constexpr std::uint64_t kStreamSessionCoord = 4;
constexpr std::uint64_t kStreamNoise = 5;

Matrix gaussian_matrix(Rng& rng, Index rows, Index cols, double stddev) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = stddev * rng.gaussian();
  }
  return m;
}

}  // namespace

SynthData generate(const SynthConfig& cfg) {
  cfg.validate();
  const int d = cfg.feature_dim;
  const int s_count = cfg.speakers;
  const int sps = cfg.sessions_per_speaker;
  const int fps = cfg.frames_per_session;
  const int train_sessions_per_speaker = sps - 3;

  Rng master(cfg.seed);
  Rng mean_rng = master.fork(kStreamMean);
  const Vector mean = mean_rng.gaussian_vector(d, 1.0);

  // Column scaling keeps the per-dimension offset variance at
  // (scale)^2 regardless of the subspace dimension.
  Rng u_rng = master.fork(kStreamSpeakerBasis);
  const Matrix speaker_basis =
      gaussian_matrix(u_rng, d, cfg.speaker_subspace_dim,
                      cfg.speaker_scale / std::sqrt(cfg.speaker_subspace_dim));
  Rng g_rng = master.fork(kStreamSessionBasis);
  const Matrix session_basis =
      gaussian_matrix(g_rng, d, cfg.session_subspace_dim,
                      cfg.session_scale / std::sqrt(cfg.session_subspace_dim));

  Rng h_rng = master.fork(kStreamSpeakerCoord);
  const Matrix speaker_coords =
      gaussian_matrix(h_rng, s_count, cfg.speaker_subspace_dim, 1.0);
  Rng c_rng = master.fork(kStreamSessionCoord);
  const Matrix session_coords =
      gaussian_matrix(c_rng, s_count * sps, cfg.session_subspace_dim, 1.0);
  Rng noise_rng = master.fork(kStreamNoise);

  const Index train_total =
      static_cast<Index>(s_count) * train_sessions_per_speaker * fps;
  Matrix train_frames(train_total, d);
  std::vector<int> train_session(train_total);
  std::vector<int> train_speaker(train_total);

  SynthData data;
  data.enrol.reserve(static_cast<std::size_t>(s_count) * 3);
  data.test.reserve(static_cast<std::size_t>(s_count) * 2);

  Index train_row = 0;
  int train_session_id = 0;
  for (int s = 0; s < s_count; ++s) {
    const Vector speaker_offset =
        speaker_basis * speaker_coords.row(s).transpose();
    for (int j = 0; j < sps; ++j) {
      const int global_session = s * sps + j;
      const Vector session_offset =
          session_basis * session_coords.row(global_session).transpose();
      Vector base = mean + speaker_offset + session_offset;
      if (cfg.softplus_warp) {
        for (Index k = 0; k < base.size(); ++k) base[k] = softplus(base[k]);
      }
      Matrix frames(fps, d);
      for (int t = 0; t < fps; ++t) {
        for (Index k = 0; k < d; ++k) {
          frames(t, k) = base[k] + cfg.noise_stddev * noise_rng.gaussian();
        }
      }

      if (j < train_sessions_per_speaker) {
        for (int t = 0; t < fps; ++t) {
          train_frames.row(train_row) = frames.row(t);
          train_session[train_row] = train_session_id;
          train_speaker[train_row] = s;
          ++train_row;
        }
        ++train_session_id;
      } else if (j == train_sessions_per_speaker) {
        // Enrollment session, carved into three utterances.
        const int third = fps / 3;
        const int cuts[4] = {0, third, 2 * third, fps};
        for (int part = 0; part < 3; ++part) {
          Utterance utt;
          utt.speaker = s;
          utt.frames = frames.middleRows(cuts[part], cuts[part + 1] - cuts[part]);
          data.enrol.push_back(std::move(utt));
        }
      } else {
        Utterance utt;
        utt.speaker = s;
        utt.frames = std::move(frames);
        data.test.push_back(std::move(utt));
      }
    }
  }

  data.train = Dataset::make(std::move(train_frames), std::move(train_session),
                             std::move(train_speaker), train_session_id,
                             s_count);
  return data;
}

}  // namespace tf2dnn
