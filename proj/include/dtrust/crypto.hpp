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

#include <cstdint>
#include <random>

#include "dtrust/bytes.hpp"

namespace dtrust {

inline constexpr std::size_t kSeedLen = 32;
inline constexpr std::size_t kPublicKeyLen = 32;
inline constexpr std::size_t kSecretKeyLen = 64;
inline constexpr std::size_t kSignatureLen = 64;
inline constexpr std::size_t kSaltLen = 16;

/// Ed25519 key pair. Signing is deterministic: the same secret key and
/// message always produce the same signature.
struct KeyPair {
  Bytes public_key;  // 32 bytes
  Bytes secret_key;  // 64 bytes (seed || public key)
};

Hash32 sha256(const std::uint8_t* data, std::size_t len);
Hash32 sha256(const Bytes& data);
Hash32 sha256(std::string_view data);

/// Derive a key pair from exactly 32 bytes of entropy. Pure function of the
/// seed. Throws Error(seed_length) otherwise.
KeyPair keypair_from_seed(const Bytes& seed);

/// Detached signature over the message. Throws Error(malformed_key) on a
/// secret key of the wrong length.
Bytes sign(const Bytes& secret_key, const Bytes& message);
Bytes sign(const Bytes& secret_key, std::string_view message);

/// True iff the signature verifies. Throws Error(malformed_key) on a public
/// key of the wrong length; a bad signature is a false return, not a fault.
bool verify(const Bytes& public_key, const Bytes& message, const Bytes& signature);
bool verify(const Bytes& public_key, std::string_view message, const Bytes& signature);

/// Seeded pseudorandom source for salts, nonces and scenario entropy.
/// Deterministic and portable for a given seed.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }
  Bytes next_bytes(std::size_t n);
  Bytes next_seed() { return next_bytes(kSeedLen); }
  Bytes next_salt() { return next_bytes(kSaltLen); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace dtrust
