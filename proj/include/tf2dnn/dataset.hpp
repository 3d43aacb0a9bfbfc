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

#ifndef TF2DNN_DATASET_HPP
#define TF2DNN_DATASET_HPP

#include <vector>

#include "tf2dnn/numeric.hpp"

namespace tf2dnn {

/// Labeled feature frames. Session ids live in [0, num_sessions) and
/// speaker ids in [0, num_speakers); every session belongs to exactly
/// one speaker.
struct Dataset {
  Matrix frames;                // T x D, one row per frame
  std::vector<int> session_of;  // size T
  std::vector<int> speaker_of;  // size T
  int num_sessions = 0;
  int num_speakers = 0;

  // Derived index tables, rebuilt by validate().
  std::vector<std::vector<int>> frames_of_session;
  std::vector<std::vector<int>> frames_of_speaker;
  std::vector<int> speaker_of_session;  // -1 for empty sessions

  Index num_frames() const { return frames.rows(); }
  Index dim() const { return frames.cols(); }

  /// Checks label ranges, the session/speaker consistency invariant and
  /// rebuilds the index tables. Throws std::invalid_argument with the
  /// offending frame index on violation.
  void validate();

  static Dataset make(Matrix frames, std::vector<int> session_of,
                      std::vector<int> speaker_of, int num_sessions,
                      int num_speakers);
};

}  // namespace tf2dnn

#endif  // TF2DNN_DATASET_HPP
