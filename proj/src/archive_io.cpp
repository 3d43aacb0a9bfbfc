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

#include "tf2dnn/archive_io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "binary_io.hpp"

namespace tf2dnn {

namespace {

using detail::read_f64;
using detail::read_le;
using detail::write_f64;
using detail::write_le;

constexpr char kArchiveMagic[4] = {'T', 'F', 'D', 'A'};

std::ifstream open_input(const std::string& path, bool binary) {
  std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  return is;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError("cannot parse " + what + " from '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError("cannot parse " + what + " from '" + s + "'");
  }
  return v;
}

}  // namespace

void atomic_write(const std::string& path,
                  const std::function<void(const std::string&)>& writer) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path() && !target.parent_path().empty()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const std::string tmp = path + ".tmp";
  try {
    writer(tmp);
    fs::rename(tmp, target);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

Dataset read_archive(const std::string& path) {
  std::ifstream is = open_input(path, true);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kArchiveMagic, 4) != 0) {
    throw IoError("'" + path + "' is not a feature archive (bad magic)");
  }
  const auto version = read_le<std::uint16_t>(is, "archive version");
  if (version != kArchiveVersion) {
    throw IoError("'" + path + "': unsupported archive version " +
                  std::to_string(version) + " (expected " +
                  std::to_string(kArchiveVersion) + ")");
  }
  const auto d = read_le<std::uint32_t>(is, "feature dim");
  const auto t = read_le<std::uint64_t>(is, "frame count");
  const auto f = read_le<std::uint32_t>(is, "session count");
  const auto s = read_le<std::uint32_t>(is, "speaker count");
  if (d == 0) throw IoError("'" + path + "': zero feature dim");

  Matrix frames(static_cast<Index>(t), static_cast<Index>(d));
  std::vector<int> session_of(t);
  std::vector<int> speaker_of(t);
  for (std::uint64_t i = 0; i < t; ++i) {
    const std::string where = "record " + std::to_string(i);
    const auto session = read_le<std::uint32_t>(is, where);
    const auto speaker = read_le<std::uint32_t>(is, where);
    if (session >= f) {
      throw IoError("'" + path + "': session id " + std::to_string(session) +
                    " out of range [0, " + std::to_string(f) + ") at " +
                    where);
    }
    if (speaker >= s) {
      throw IoError("'" + path + "': speaker id " + std::to_string(speaker) +
                    " out of range [0, " + std::to_string(s) + ") at " +
                    where);
    }
    session_of[i] = static_cast<int>(session);
    speaker_of[i] = static_cast<int>(speaker);
    for (std::uint32_t k = 0; k < d; ++k) {
      frames(static_cast<Index>(i), k) = read_f64(is, where);
    }
  }
  try {
    return Dataset::make(std::move(frames), std::move(session_of),
                         std::move(speaker_of), static_cast<int>(f),
                         static_cast<int>(s));
  } catch (const std::invalid_argument& e) {
    throw IoError("'" + path + "': " + e.what());
  }
}

void write_archive(const std::string& path, const Dataset& data) {
  atomic_write(path, [&](const std::string& tmp) {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw IoError("cannot open '" + tmp + "' for writing");
    os.write(kArchiveMagic, 4);
    write_le<std::uint16_t>(os, kArchiveVersion);
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(data.dim()));
    write_le<std::uint64_t>(os, static_cast<std::uint64_t>(data.num_frames()));
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(data.num_sessions));
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(data.num_speakers));
    for (Index i = 0; i < data.num_frames(); ++i) {
      write_le<std::uint32_t>(os,
                              static_cast<std::uint32_t>(data.session_of[i]));
      write_le<std::uint32_t>(os,
                              static_cast<std::uint32_t>(data.speaker_of[i]));
      for (Index k = 0; k < data.dim(); ++k) write_f64(os, data.frames(i, k));
    }
    os.flush();
    if (!os) throw IoError("failed writing '" + tmp + "'");
  });
}

Dataset import_tsv(const std::string& path) {
  std::ifstream is = open_input(path, false);
  std::vector<std::vector<double>> rows;
  std::vector<int> session_of;
  std::vector<int> speaker_of;
  std::string line;
  std::size_t lineno = 0;
  Index dim = -1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() < 3) {
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": expected session<TAB>speaker<TAB>features");
    }
    const int session = parse_int(fields[0], "session id");
    const int speaker = parse_int(fields[1], "speaker id");
    if (session < 0 || speaker < 0) {
      throw IoError(path + ":" + std::to_string(lineno) + ": negative label");
    }
    std::vector<double> feats;
    feats.reserve(fields.size() - 2);
    for (std::size_t k = 2; k < fields.size(); ++k) {
      feats.push_back(parse_double(fields[k], "feature value"));
    }
    if (dim == -1) {
      dim = static_cast<Index>(feats.size());
    } else if (static_cast<Index>(feats.size()) != dim) {
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": inconsistent feature dimension");
    }
    rows.push_back(std::move(feats));
    session_of.push_back(session);
    speaker_of.push_back(speaker);
  }
  if (rows.empty()) throw IoError("'" + path + "': no frames");

  Matrix frames(static_cast<Index>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (Index k = 0; k < dim; ++k) frames(static_cast<Index>(i), k) = rows[i][k];
  }
  int num_sessions = 0;
  int num_speakers = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    num_sessions = std::max(num_sessions, session_of[i] + 1);
    num_speakers = std::max(num_speakers, speaker_of[i] + 1);
  }
  try {
    return Dataset::make(std::move(frames), std::move(session_of),
                         std::move(speaker_of), num_sessions, num_speakers);
  } catch (const std::invalid_argument& e) {
    throw IoError("'" + path + "': " + e.what());
  }
}

std::vector<Trial> read_trial_list(const std::string& path) {
  std::ifstream is = open_input(path, false);
  std::vector<Trial> trials;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() < 2 || fields.size() > 3) {
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": expected model<TAB>utterance[<TAB>label]");
    }
    Trial trial;
    trial.model_id = fields[0];
    trial.utterance_id = fields[1];
    if (fields.size() == 3) {
      try {
        trial.label = parse_trial_label(fields[2]);
      } catch (const std::invalid_argument& e) {
        throw IoError(path + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
    trials.push_back(std::move(trial));
  }
  return trials;
}

void write_trial_list(const std::string& path,
                      const std::vector<Trial>& trials) {
  atomic_write(path, [&](const std::string& tmp) {
    std::ofstream os(tmp);
    if (!os) throw IoError("cannot open '" + tmp + "' for writing");
    for (const Trial& t : trials) {
      os << t.model_id << '\t' << t.utterance_id << '\t'
         << trial_label_name(t.label) << '\n';
    }
    os.flush();
    if (!os) throw IoError("failed writing '" + tmp + "'");
  });
}

std::vector<ScoreRecord> read_score_table(const std::string& path) {
  std::ifstream is = open_input(path, false);
  std::vector<ScoreRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 4) {
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": expected model<TAB>utterance<TAB>score<TAB>label");
    }
    ScoreRecord rec;
    rec.model_id = fields[0];
    rec.utterance_id = fields[1];
    rec.score = parse_double(fields[2], "score");
    try {
      rec.label = parse_trial_label(fields[3]);
    } catch (const std::invalid_argument& e) {
      throw IoError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    records.push_back(std::move(rec));
  }
  return records;
}

void write_score_table(const std::string& path,
                       const std::vector<ScoreRecord>& records) {
  atomic_write(path, [&](const std::string& tmp) {
    std::ofstream os(tmp);
    if (!os) throw IoError("cannot open '" + tmp + "' for writing");
    char buf[64];
    for (const ScoreRecord& r : records) {
      std::snprintf(buf, sizeof(buf), "%.9g", r.score);
      os << r.model_id << '\t' << r.utterance_id << '\t' << buf << '\t'
         << trial_label_name(r.label) << '\n';
    }
    os.flush();
    if (!os) throw IoError("failed writing '" + tmp + "'");
  });
}

}  // namespace tf2dnn
