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

#include "dtrust/canonical.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/stat.h>

#include "dtrust/crypto.hpp"

namespace dtrust {

std::string to_canonical(const Json& value) { return value.dump(); }

Hash32 canonical_digest(const Json& value) { return sha256(to_canonical(value)); }

Json parse_json(std::string_view text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw Error(Errc::parse_error, "invalid JSON document");
  }
  return j;
}

void require_keys(const Json& value, std::initializer_list<const char*> keys, Errc code) {
  if (!value.is_object()) {
    throw Error(code, "expected an object");
  }
  for (const char* key : keys) {
    if (!value.contains(key)) {
      throw Error(code, std::string("missing field '") + key + "'");
    }
  }
  if (value.size() != keys.size()) {
    for (const auto& [k, v] : value.items()) {
      bool known = false;
      for (const char* key : keys) {
        if (k == key) { known = true; break; }
      }
      if (!known) {
        throw Error(code, "unexpected field '" + k + "'");
      }
    }
  }
}

const Json& get_field(const Json& obj, const char* key, Errc code) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(code, std::string("missing field '") + key + "'");
  }
  return obj.at(key);
}

std::string get_string(const Json& obj, const char* key, Errc code) {
  const Json& f = get_field(obj, key, code);
  if (!f.is_string()) {
    throw Error(code, std::string("field '") + key + "' must be a string");
  }
  return f.get<std::string>();
}

std::int64_t get_int(const Json& obj, const char* key, Errc code) {
  const Json& f = get_field(obj, key, code);
  if (!f.is_number_integer()) {
    throw Error(code, std::string("field '") + key + "' must be an integer");
  }
  return f.get<std::int64_t>();
}

bool get_bool(const Json& obj, const char* key, Errc code) {
  const Json& f = get_field(obj, key, code);
  if (!f.is_boolean()) {
    throw Error(code, std::string("field '") + key + "' must be a boolean");
  }
  return f.get<bool>();
}

Bytes get_hex(const Json& obj, const char* key, Errc code) {
  try {
    return from_hex(get_string(obj, key, code));
  } catch (const Error& e) {
    if (e.code() == Errc::parse_error) {
      throw Error(code, std::string("field '") + key + "' is not canonical hex");
    }
    throw;
  }
}

Hash32 get_hash(const Json& obj, const char* key, Errc code) {
  Bytes b = get_hex(obj, key, code);
  if (b.size() != 32) {
    throw Error(code, std::string("field '") + key + "' must be a 32-byte digest");
  }
  Hash32 h{};
  std::copy(b.begin(), b.end(), h.begin());
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::io_error, "cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::io_error, "cannot write " + path);
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

void write_file_private(const std::string& path, std::string_view content) {
  write_file(path, content);
  ::chmod(path.c_str(), 0600);
}

}  // namespace dtrust
