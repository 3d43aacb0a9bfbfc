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

#ifndef TF2DNN_ARCHIVE_IO_HPP
#define TF2DNN_ARCHIVE_IO_HPP

#include <functional>
#include <string>
#include <vector>

#include "tf2dnn/dataset.hpp"
#include "tf2dnn/scoring.hpp"

namespace tf2dnn {

// Feature archive format (binary, little-endian):
//   magic 'TFDA', u16 version (= 1),
//   u32 D, u64 T, u32 F, u32 S,
//   T records of (u32 session, u32 speaker, D f64 features).
// Round-trips are bit-exact. Readers reject unknown versions.
inline constexpr std::uint16_t kArchiveVersion = 1;

Dataset read_archive(const std::string& path);
void write_archive(const std::string& path, const Dataset& data);

/// Text import: one frame per line, `session<TAB>speaker<TAB>f1..fD`.
/// Session/speaker counts are inferred from the largest ids seen.
Dataset import_tsv(const std::string& path);

/// Trial list: `model_id<TAB>utterance_id[<TAB>label]` per line,
/// label in {tgt, non, unk} (missing = unk).
std::vector<Trial> read_trial_list(const std::string& path);
void write_trial_list(const std::string& path,
                      const std::vector<Trial>& trials);

struct ScoreRecord {
  std::string model_id;
  std::string utterance_id;
  double score = 0.0;
  TrialLabel label = TrialLabel::kUnknown;
};

/// Score table: `model_id<TAB>utterance_id<TAB>score<TAB>label`, scores
/// printed with 9 significant digits, UTF-8.
std::vector<ScoreRecord> read_score_table(const std::string& path);
void write_score_table(const std::string& path,
                       const std::vector<ScoreRecord>& records);

/// Writes via a temp file in the same directory and renames on success,
/// so failures never leave partial outputs. The writer receives the
/// temp path.
void atomic_write(const std::string& path,
                  const std::function<void(const std::string&)>& writer);

}  // namespace tf2dnn

#endif  // TF2DNN_ARCHIVE_IO_HPP
