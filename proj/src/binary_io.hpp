// Copyright 2026 The srsik Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Little-endian encoding helpers for the dataset and model files.

#ifndef SRSIK_SRC_BINARY_IO_HPP_
#define SRSIK_SRC_BINARY_IO_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>

namespace srsik::detail {

template <typename U>
inline U to_little(U v) {
  if constexpr (std::endian::native == std::endian::big) {
    U r = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      r = static_cast<U>((r << 8) | (v & 0xffU));
      v = static_cast<U>(v >> 8);
    }
    return r;
  } else {
    return v;
  }
}

inline void put_u8(std::string& b, std::uint8_t v) { b.push_back(static_cast<char>(v)); }

template <typename U>
inline void put_uint(std::string& b, U v) {
  v = to_little(v);
  char raw[sizeof(U)];
  std::memcpy(raw, &v, sizeof(U));
  b.append(raw, sizeof(U));
}

inline void put_f64(std::string& b, double v) { put_uint(b, std::bit_cast<std::uint64_t>(v)); }

template <typename U>
inline U get_uint(const char* p) {
  U v;
  std::memcpy(&v, p, sizeof(U));
  return to_little(v);
}

inline double get_f64(const char* p) { return std::bit_cast<double>(get_uint<std::uint64_t>(p)); }

inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 14695981039346656037ULL) {
  const auto* c = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= c[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace srsik::detail

#endif  // SRSIK_SRC_BINARY_IO_HPP_
