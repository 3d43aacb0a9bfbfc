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

#ifndef TF2DNN_DATAGEN_HPP
#define TF2DNN_DATAGEN_HPP

#include <string>
#include <vector>

#include "tf2dnn/dataset.hpp"

namespace tf2dnn {

/// Synthetic multi-speaker/multi-session generator. Frames are drawn as
/// x = warp(m + U h_s + G c_f) + noise, with a global mean m, per-speaker
/// offsets U h_s and per-session offsets G c_f; warp is an optional
/// elementwise softplus.
struct SynthConfig {
  int feature_dim = 20;
  int speakers = 50;
  int sessions_per_speaker = 10;
  int frames_per_session = 200;
  int speaker_subspace_dim = 5;
  double speaker_scale = 1.0;
  int session_subspace_dim = 5;
  double session_scale = 1.0;
  double noise_stddev = 0.3;
  bool softplus_warp = false;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Utterance {
  int speaker = 0;  // global speaker id
  Matrix frames;    // rows
};

/// Per speaker the last three sessions are held out: one is carved into
/// three enrollment utterances, the final two become test utterances.
/// Hold-out sessions never appear in the training split.
struct SynthData {
  Dataset train;
  std::vector<Utterance> enrol;  // 3 per speaker, grouped by speaker
  std::vector<Utterance> test;   // 2 per speaker, grouped by speaker
};

SynthData generate(const SynthConfig& cfg);

}  // namespace tf2dnn

#endif  // TF2DNN_DATAGEN_HPP
