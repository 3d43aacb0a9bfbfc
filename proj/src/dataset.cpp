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

#include "tf2dnn/dataset.hpp"

#include <string>

namespace tf2dnn {

void Dataset::validate() {
  const Index t = frames.rows();
  if (static_cast<Index>(session_of.size()) != t ||
      static_cast<Index>(speaker_of.size()) != t) {
    throw std::invalid_argument("dataset: label count does not match frames");
  }
  if (num_sessions < 0 || num_speakers < 0) {
    throw std::invalid_argument("dataset: negative session/speaker count");
  }
  if (!frames.allFinite()) {
    throw std::invalid_argument("dataset: non-finite feature value");
  }

  frames_of_session.assign(num_sessions, {});
  frames_of_speaker.assign(num_speakers, {});
  speaker_of_session.assign(num_sessions, -1);
  for (Index i = 0; i < t; ++i) {
    const int f = session_of[i];
    const int s = speaker_of[i];
    if (f < 0 || f >= num_sessions) {
      throw std::invalid_argument("dataset: session id " + std::to_string(f) +
                                  " out of range at frame " +
                                  std::to_string(i));
    }
    if (s < 0 || s >= num_speakers) {
      throw std::invalid_argument("dataset: speaker id " + std::to_string(s) +
                                  " out of range at frame " +
                                  std::to_string(i));
    }
    if (speaker_of_session[f] == -1) {
      speaker_of_session[f] = s;
    } else if (speaker_of_session[f] != s) {
      throw std::invalid_argument(
          "dataset: session " + std::to_string(f) +
          " maps to more than one speaker (frame " + std::to_string(i) + ")");
    }
    frames_of_session[f].push_back(static_cast<int>(i));
    frames_of_speaker[s].push_back(static_cast<int>(i));
  }
}

Dataset Dataset::make(Matrix frames, std::vector<int> session_of,
                      std::vector<int> speaker_of, int num_sessions,
                      int num_speakers) {
  Dataset d;
  d.frames = std::move(frames);
  d.session_of = std::move(session_of);
  d.speaker_of = std::move(speaker_of);
  d.num_sessions = num_sessions;
  d.num_speakers = num_speakers;
  d.validate();
  return d;
}

}  // namespace tf2dnn
