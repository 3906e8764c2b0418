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

#include "dtrust/crypto.hpp"

#include <sodium.h>

#include <mutex>

#include "dtrust/errors.hpp"

namespace dtrust {

namespace {

void ensure_sodium() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    if (sodium_init() < 0) {
      throw Error(Errc::io_error, "libsodium initialization failed");
    }
  });
}

}  // namespace

Hash32 sha256(const std::uint8_t* data, std::size_t len) {
  ensure_sodium();
  Hash32 out{};
  crypto_hash_sha256(out.data(), data, len);
  return out;
}

Hash32 sha256(const Bytes& data) { return sha256(data.data(), data.size()); }

Hash32 sha256(std::string_view data) {
  return sha256(reinterpret_cast<const std::uint8_t*>(data.data()), data.size());
}

KeyPair keypair_from_seed(const Bytes& seed) {
  ensure_sodium();
  if (seed.size() != kSeedLen) {
    throw Error(Errc::seed_length, "seed must be exactly 32 bytes");
  }
  KeyPair kp;
  kp.public_key.resize(kPublicKeyLen);
  kp.secret_key.resize(kSecretKeyLen);
  crypto_sign_seed_keypair(kp.public_key.data(), kp.secret_key.data(), seed.data());
  return kp;
}

Bytes sign(const Bytes& secret_key, const Bytes& message) {
  ensure_sodium();
  if (secret_key.size() != kSecretKeyLen) {
    throw Error(Errc::malformed_key, "secret key must be 64 bytes");
  }
  Bytes sig(kSignatureLen);
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), secret_key.data());
  return sig;
}

Bytes sign(const Bytes& secret_key, std::string_view message) {
  return sign(secret_key, bytes_of(message));
}

bool verify(const Bytes& public_key, const Bytes& message, const Bytes& signature) {
  ensure_sodium();
  if (public_key.size() != kPublicKeyLen) {
    throw Error(Errc::malformed_key, "public key must be 32 bytes");
  }
  if (signature.size() != kSignatureLen) {
    return false;
  }
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(),
                                     public_key.data()) == 0;
}

bool verify(const Bytes& public_key, std::string_view message, const Bytes& signature) {
  return verify(public_key, bytes_of(message), signature);
}

Bytes DeterministicRng::next_bytes(std::size_t n) {
  Bytes out;
  out.reserve(n);
  while (out.size() < n) {
    std::uint64_t word = eng_();
    for (int i = 0; i < 8 && out.size() < n; ++i) {
      out.push_back(static_cast<std::uint8_t>(word >> (8 * i)));
    }
  }
  return out;
}

}  // namespace dtrust
