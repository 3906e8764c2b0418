// Copyright 2026 The dtrust Authors.
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

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dtrust {

using Bytes = std::vector<std::uint8_t>;
using Hash32 = std::array<std::uint8_t, 32>;

/// Lowercase hex encoding. All byte fields in canonical serializations use
/// this form; decoding is strict and rejects uppercase digits.
std::string to_hex(const std::uint8_t* data, std::size_t len);
std::string to_hex(const Bytes& b);
std::string to_hex(const Hash32& h);

/// Strict decode: even length, lowercase [0-9a-f] only. Throws Error(parse_error).
Bytes from_hex(std::string_view hex);
Hash32 hash32_from_hex(std::string_view hex);

Bytes bytes_of(std::string_view s);
std::string string_of(const Bytes& b);

inline Bytes to_bytes(const Hash32& h) { return Bytes(h.begin(), h.end()); }

}  // namespace dtrust
