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

#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "dtrust/bytes.hpp"
#include "dtrust/errors.hpp"

namespace dtrust {

// Canonical serialization: a UTF-8 JSON text with lexicographically sorted
// object keys and no insignificant whitespace. nlohmann::json backs objects
// with std::map, so key order is already sorted; dump() emits no whitespace.
// All byte fields are rendered as lowercase hex.
using Json = nlohmann::json;

std::string to_canonical(const Json& value);
Hash32 canonical_digest(const Json& value);

/// Strict parse of a canonical document. Throws Error(parse_error).
Json parse_json(std::string_view text);

/// Requires `value` to be an object whose key set is exactly `keys`.
/// Throws Error(code) naming the first missing or unexpected key.
void require_keys(const Json& value, std::initializer_list<const char*> keys, Errc code);

/// Field accessors that throw Error(code) on missing key or wrong type.
const Json& get_field(const Json& obj, const char* key, Errc code);
std::string get_string(const Json& obj, const char* key, Errc code);
std::int64_t get_int(const Json& obj, const char* key, Errc code);
bool get_bool(const Json& obj, const char* key, Errc code);
Bytes get_hex(const Json& obj, const char* key, Errc code);
Hash32 get_hash(const Json& obj, const char* key, Errc code);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);
void write_file_private(const std::string& path, std::string_view content);

}  // namespace dtrust
