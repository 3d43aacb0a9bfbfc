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

// Little-endian primitive IO shared by the archive and model formats.

#ifndef TF2DNN_SRC_BINARY_IO_HPP
#define TF2DNN_SRC_BINARY_IO_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "tf2dnn/io_error.hpp"

namespace tf2dnn::detail {

template <typename T>
T byteswap_if_needed(T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  if constexpr (std::endian::native == std::endian::little) {
    return value;
  } else {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) {
      std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    }
    std::memcpy(&value, bytes, sizeof(T));
    return value;
  }
}

template <typename T>
void write_le(std::ostream& os, T value) {
  value = byteswap_if_needed(value);
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_le(std::istream& is, const std::string& what) {
  T value;
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw IoError("truncated file while reading " + what);
  return byteswap_if_needed(value);
}

inline void write_f64(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  write_le(os, bits);
}

inline double read_f64(std::istream& is, const std::string& what) {
  const std::uint64_t bits = read_le<std::uint64_t>(is, what);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

// FNV-1a over a byte buffer; the model container's payload checksum.
inline std::uint64_t fnv1a64(const char* data, std::size_t n) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace tf2dnn::detail

#endif  // TF2DNN_SRC_BINARY_IO_HPP
