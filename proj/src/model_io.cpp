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

#include "tf2dnn/model_io.hpp"

#include <fstream>
#include <sstream>

#include "binary_io.hpp"
#include "tf2dnn/archive_io.hpp"

namespace tf2dnn {

namespace {

using detail::fnv1a64;
using detail::read_f64;
using detail::read_le;
using detail::write_f64;
using detail::write_le;

constexpr char kModelMagic[4] = {'T', 'F', 'M', 'D'};
constexpr std::uint8_t kKindUbm = 0;
constexpr std::uint8_t kKindSpeakerSet = 1;

void write_matrix(std::ostream& os, const Matrix& m) {
  write_le<std::uint64_t>(os, static_cast<std::uint64_t>(m.rows()));
  write_le<std::uint64_t>(os, static_cast<std::uint64_t>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) write_f64(os, m(i, j));
  }
}

Matrix read_matrix(std::istream& is, const std::string& what) {
  const auto rows = read_le<std::uint64_t>(is, what);
  const auto cols = read_le<std::uint64_t>(is, what);
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = read_f64(is, what);
  }
  return m;
}

void write_vector(std::ostream& os, const Vector& v) {
  write_le<std::uint64_t>(os, static_cast<std::uint64_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) write_f64(os, v[i]);
}

Vector read_vector(std::istream& is, const std::string& what) {
  const auto n = read_le<std::uint64_t>(is, what);
  Vector v(static_cast<Index>(n));
  for (Index i = 0; i < v.size(); ++i) v[i] = read_f64(is, what);
  return v;
}

void write_string(std::ostream& os, const std::string& s) {
  write_le<std::uint64_t>(os, static_cast<std::uint64_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& is, const std::string& what) {
  const auto n = read_le<std::uint64_t>(is, what);
  std::string s(static_cast<std::size_t>(n), '\0');
  is.read(s.data(), static_cast<std::streamsize>(n));
  if (!is) throw IoError("truncated file while reading " + what);
  return s;
}

void write_architecture(std::ostream& os, const Architecture& arch) {
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(arch.layers.size()));
  for (const LayerSpec& l : arch.layers) {
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(l.in_dim));
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(l.out_dim));
    write_le<std::uint8_t>(os, static_cast<std::uint8_t>(l.nonlinearity));
    write_le<std::uint8_t>(os, l.is_tf2 ? 1 : 0);
    write_f64(os, l.dropout_p);
  }
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(arch.session_dim));
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(arch.speaker_dim));
}

Architecture read_architecture(std::istream& is) {
  Architecture arch;
  const auto n = read_le<std::uint32_t>(is, "architecture");
  arch.layers.resize(n);
  for (auto& l : arch.layers) {
    l.in_dim = static_cast<int>(read_le<std::uint32_t>(is, "layer spec"));
    l.out_dim = static_cast<int>(read_le<std::uint32_t>(is, "layer spec"));
    const auto nl = read_le<std::uint8_t>(is, "layer spec");
    if (nl > 1) throw IoError("model file: unknown nonlinearity code");
    l.nonlinearity = static_cast<Nonlinearity>(nl);
    l.is_tf2 = read_le<std::uint8_t>(is, "layer spec") != 0;
    l.dropout_p = read_f64(is, "layer spec");
  }
  arch.session_dim =
      static_cast<int>(read_le<std::uint32_t>(is, "architecture"));
  arch.speaker_dim =
      static_cast<int>(read_le<std::uint32_t>(is, "architecture"));
  return arch;
}

void write_params(std::ostream& os, const NetworkParams& params) {
  write_architecture(os, params.arch);
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    write_matrix(os, params.weights[l]);
    write_vector(os, params.biases[l]);
    write_matrix(os, params.v_session[l]);
    write_matrix(os, params.v_speaker[l]);
  }
}

NetworkParams read_params(std::istream& is) {
  NetworkParams params;
  params.arch = read_architecture(is);
  const std::size_t n = params.arch.layers.size();
  for (std::size_t l = 0; l < n; ++l) {
    params.weights.push_back(read_matrix(is, "weights"));
    params.biases.push_back(read_vector(is, "biases"));
    params.v_session.push_back(read_matrix(is, "session loading"));
    params.v_speaker.push_back(read_matrix(is, "speaker loading"));
  }
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("model file: inconsistent network (") +
                  e.what() + ")");
  }
  return params;
}

std::string checked_payload(const std::string& path, std::uint8_t want_kind) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kModelMagic, 4) != 0) {
    throw IoError("'" + path + "' is not a model file (bad magic)");
  }
  const auto version = read_le<std::uint16_t>(is, "model version");
  if (version != kModelVersion) {
    throw IoError("'" + path + "': unsupported model file version " +
                  std::to_string(version) + " (expected " +
                  std::to_string(kModelVersion) + ")");
  }
  const auto kind = read_le<std::uint8_t>(is, "model kind");
  if (kind != want_kind) {
    throw IoError("'" + path + "': wrong model kind (" +
                  (kind == kKindUbm ? std::string("background model")
                                    : std::string("speaker model set")) +
                  ")");
  }
  const auto size = read_le<std::uint64_t>(is, "payload size");
  std::string payload(static_cast<std::size_t>(size), '\0');
  is.read(payload.data(), static_cast<std::streamsize>(size));
  if (!is) throw IoError("'" + path + "': truncated payload");
  const auto checksum = read_le<std::uint64_t>(is, "checksum");
  if (checksum != fnv1a64(payload.data(), payload.size())) {
    throw IoError("'" + path + "': checksum mismatch (corrupt payload)");
  }
  return payload;
}

void write_container(const std::string& path, std::uint8_t kind,
                     const std::string& payload) {
  atomic_write(path, [&](const std::string& tmp) {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw IoError("cannot open '" + tmp + "' for writing");
    os.write(kModelMagic, 4);
    write_le<std::uint16_t>(os, kModelVersion);
    write_le<std::uint8_t>(os, kind);
    write_le<std::uint64_t>(os, static_cast<std::uint64_t>(payload.size()));
    os.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    write_le<std::uint64_t>(os, fnv1a64(payload.data(), payload.size()));
    os.flush();
    if (!os) throw IoError("failed writing '" + tmp + "'");
  });
}

}  // namespace

void save_ubm(const std::string& path, const UbmModel& model) {
  model.validate();
  std::ostringstream payload(std::ios::binary);
  write_params(payload, model.params);
  write_matrix(payload, model.factors.session);
  write_matrix(payload, model.factors.speaker);
  write_matrix(payload, model.head.b);
  write_vector(payload, model.head.psi);
  write_f64(payload, model.head.beta);
  write_f64(payload, model.head.lambda0);
  write_matrix(payload, model.stats.s_yy);
  write_matrix(payload, model.stats.s_yx);
  write_le<std::int64_t>(payload, model.stats.count);
  write_container(path, kKindUbm, payload.str());
}

UbmModel load_ubm(const std::string& path) {
  std::istringstream is(checked_payload(path, kKindUbm), std::ios::binary);
  UbmModel model;
  model.params = read_params(is);
  model.factors.session = read_matrix(is, "session factors");
  model.factors.speaker = read_matrix(is, "speaker factors");
  model.head.b = read_matrix(is, "head weights");
  model.head.psi = read_vector(is, "head psi");
  model.head.beta = read_f64(is, "head beta");
  model.head.lambda0 = read_f64(is, "head lambda0");
  model.stats.s_yy = read_matrix(is, "stats s_yy");
  model.stats.s_yx = read_matrix(is, "stats s_yx");
  model.stats.count = read_le<std::int64_t>(is, "stats count");
  try {
    model.validate();
  } catch (const std::exception& e) {
    throw IoError("'" + path + "': inconsistent model (" +
                  std::string(e.what()) + ")");
  }
  return model;
}

void save_speaker_models(const std::string& path,
                         const std::vector<SpeakerModel>& models) {
  std::ostringstream payload(std::ios::binary);
  write_le<std::uint64_t>(payload, static_cast<std::uint64_t>(models.size()));
  for (const SpeakerModel& m : models) {
    write_string(payload, m.speaker_id);
    write_le<std::uint8_t>(payload, static_cast<std::uint8_t>(m.method));
    write_matrix(payload, m.b);
    write_vector(payload, m.z_speaker);
  }
  write_container(path, kKindSpeakerSet, payload.str());
}

std::vector<SpeakerModel> load_speaker_models(const std::string& path) {
  std::istringstream is(checked_payload(path, kKindSpeakerSet),
                        std::ios::binary);
  const auto n = read_le<std::uint64_t>(is, "model count");
  std::vector<SpeakerModel> models;
  models.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    SpeakerModel m;
    m.speaker_id = read_string(is, "speaker id");
    const auto method = read_le<std::uint8_t>(is, "enrol method");
    if (method > 2) throw IoError("'" + path + "': unknown enrol method code");
    m.method = static_cast<EnrolMethod>(method);
    m.b = read_matrix(is, "speaker weights");
    m.z_speaker = read_vector(is, "speaker factor");
    models.push_back(std::move(m));
  }
  return models;
}

}  // namespace tf2dnn
