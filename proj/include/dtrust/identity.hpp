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

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "dtrust/canonical.hpp"
#include "dtrust/crypto.hpp"
#include "dtrust/errors.hpp"

namespace dtrust {

/// Self-certifying identifier: did:sim:<64 lowercase hex chars>, where the
/// method-specific id is the SHA-256 digest of the inception public key
/// (or, for passive DIDs, of controller id || asset label).
struct Did {
  static constexpr const char* kMethod = "sim";

  std::string id;  // 64 lowercase hex chars

  std::string str() const { return std::string("did:") + kMethod + ":" + id; }
  static Did parse(std::string_view rendered);
  static Did from_digest(const Hash32& digest) { return Did{to_hex(digest)}; }

  bool operator==(const Did&) const = default;
  auto operator<=>(const Did&) const = default;
};

struct KeyEvent {
  std::string type;        // "inception" | "rotation" | "passive_inception"
  std::int64_t seq = 0;
  Bytes key;               // active key after this event; empty for passive
  Bytes prev;              // outgoing key (rotation only)
  std::string controller;  // controller DID (passive inception only)
  std::string label;       // asset label (passive inception only)
  Bytes signer;            // public key the signature verifies under
  Bytes signature;

  Json body_json() const;  // canonical body, signature excluded
  Json to_json() const;
  static KeyEvent from_json(const Json& j);
};

struct DidDocument {
  Did did;
  Bytes active_key;  // empty for passive documents
  Did controller;
  std::int64_t version = 1;
  bool passive = false;
  std::vector<KeyEvent> events;

  Json to_json() const;
  static DidDocument from_json(const Json& j);
  std::string canonical() const { return to_canonical(to_json()); }

  /// Active key as of a given document version (1-based).
  Bytes key_at_version(std::int64_t version) const;
};

/// Structural and cryptographic validation of a document in isolation:
/// self-certification, event-chain signatures, version arithmetic.
/// Throws Error(invalid_document) with the first violated rule.
void validate_document(const DidDocument& doc);

class Registry {
 public:
  virtual ~Registry() = default;

  virtual std::optional<DidDocument> find(const Did& did) const = 0;
  /// Validates, then stores. Writes are append-only per DID: an update must
  /// carry version+1 and extend the existing event chain.
  virtual void put(const DidDocument& doc) = 0;
  virtual std::vector<Did> list() const = 0;
};

class MemoryRegistry : public Registry {
 public:
  std::optional<DidDocument> find(const Did& did) const override;
  void put(const DidDocument& doc) override;
  std::vector<Did> list() const override;

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, DidDocument> docs_;
};

/// One canonical file per DID, named `<hex id>.json`, under a directory.
class FileRegistry : public Registry {
 public:
  explicit FileRegistry(std::filesystem::path dir);

  std::optional<DidDocument> find(const Did& did) const override;
  void put(const DidDocument& doc) override;
  std::vector<Did> list() const override;

 private:
  std::filesystem::path dir_;
  mutable std::mutex mu_;
};

/// An offline copy of registry state, keyed by rendered DID. Verification
/// operates on snapshots only so that it cannot reach back to the network.
using RegistrySnapshot = std::map<std::string, DidDocument>;

RegistrySnapshot snapshot(const Registry& registry);

/// Deterministic DID generation from exactly 32 bytes of entropy. The
/// inception document has version 1, controller = self, passive = false.
std::tuple<Did, KeyPair, DidDocument> generate_did(const Bytes& seed);

/// Registers a passive DID for an asset under an active controller. The
/// inception event is signed by the controller's current active key.
std::pair<Did, DidDocument> create_passive_did(const Did& controller,
                                               const KeyPair& controller_keys,
                                               const std::string& asset_label,
                                               Registry& registry);

/// Latest registered document; validates the event chain before returning.
DidDocument resolve(const Did& did, const Registry& registry);

/// Rotates the active key. The rotation event is signed by the outgoing key.
DidDocument rotate_key(const Did& did, const KeyPair& current_keys, const Bytes& new_public_key,
                       Registry& registry);

}  // namespace dtrust
