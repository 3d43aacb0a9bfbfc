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

#ifndef TF2DNN_MODEL_IO_HPP
#define TF2DNN_MODEL_IO_HPP

#include <string>
#include <vector>

#include "tf2dnn/adaptation.hpp"

namespace tf2dnn {

// Model container (binary, little-endian):
//   magic 'TFMD', u16 version (= 1), u8 kind (0 = background model,
//   1 = speaker model set), u64 payload size, payload,
//   u64 FNV-1a checksum of the payload.
// Round-trips bit-exactly; readers reject unknown versions and corrupt
// payloads.
inline constexpr std::uint16_t kModelVersion = 1;

void save_ubm(const std::string& path, const UbmModel& model);
UbmModel load_ubm(const std::string& path);

void save_speaker_models(const std::string& path,
                         const std::vector<SpeakerModel>& models);
std::vector<SpeakerModel> load_speaker_models(const std::string& path);

}  // namespace tf2dnn

#endif  // TF2DNN_MODEL_IO_HPP
