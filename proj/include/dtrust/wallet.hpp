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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dtrust/credentials.hpp"

namespace dtrust {

/// One disclosed claim: its value, salt, leaf position in the commitment
/// tree, and the Merkle authentication path to the credential root.
struct DisclosedClaim {
  std::int64_t index = 0;
  std::string name;
  ClaimValue value;
  Bytes salt;
  std::vector<Hash32> path;
};

/// A withheld claim contributes only its leaf position and commitment
/// digest; neither the claim name nor any value travels with it.
struct WithheldLeaf {
  std::int64_t index = 0;
  Hash32 commitment{};
};

struct PresentedCredential {
  Credential core;
  std::vector<DisclosedClaim> disclosed;
  std::vector<WithheldLeaf> withheld;
  std::int64_t leaf_count = 0;

  Json to_json() const;
  static PresentedCredential from_json(const Json& j);
};

/// Holder-constructed proof: disclosed claims with paths, withheld
/// commitment digests, and a holder signature binding everything to one
/// challenge nonce.
struct Presentation {
  Bytes challenge;
  std::vector<PresentedCredential> credentials;
  Did holder;
  std::int64_t holder_doc_version = 1;
  Bytes holder_signature;

  Json body_json() const;  // signed portion
  Json to_json() const;
  static Presentation from_json(const Json& j);

  std::vector<std::string> disclosed_claim_names() const;
};

struct PresentationRequestItem {
  std::string schema;
  std::vector<std::string> claims;  // claim names, including derived predicate claims
};

/// Requests are schema-addressed: the wallet chooses the satisfying
/// credential, preferring the newest issuance.
struct PresentationRequest {
  Bytes challenge;
  std::vector<PresentationRequestItem> items;

  Json to_json() const;
  static PresentationRequest from_json(const Json& j);
};

/// A persona: a named set of presentation templates over stored credentials.
struct PersonaTemplate {
  std::string credential_id;
  std::vector<std::string> claims;
};

struct Identity {
  std::string label;
  std::vector<PersonaTemplate> templates;
};

class Wallet {
 public:
  Wallet() = default;
  Wallet(Did owner, KeyPair keys) : owner_(std::move(owner)), keys_(std::move(keys)) {}

  const Did& owner() const { return owner_; }
  const KeyPair& keys() const { return keys_; }

  /// Verifies the credential against the snapshot and checks the subject is
  /// the owner or a passive DID the owner controls.
  void store(const Credential& credential, const DisclosureBundle& bundle,
             const RegistrySnapshot& snapshot);

  std::vector<std::string> list_ids() const;
  const Credential& credential(const std::string& id) const;
  const DisclosureBundle& bundle(const std::string& id) const;

  void define_persona(const std::string& label, std::vector<PersonaTemplate> templates);
  Identity compose_identity(const std::string& label) const;

  Presentation build_presentation(const PresentationRequest& request, SimTime clock) const;
  Presentation present_identity(const Identity& identity, const Bytes& challenge,
                                SimTime clock) const;

  /// Persistence: public credential state in `path`, secret material
  /// (signing key and disclosure bundles) in `secret_path` with 0600 mode.
  void save(const std::string& path, const std::string& secret_path) const;
  static Wallet load(const std::string& path, const std::string& secret_path);

 private:
  struct Stored {
    Credential credential;
    DisclosureBundle bundle;
  };

  PresentedCredential present_credential(const Stored& stored,
                                         const std::vector<std::string>& claims) const;
  const Stored& pick_credential(const PresentationRequestItem& item, SimTime clock) const;

  Did owner_;
  KeyPair keys_;
  std::map<std::string, Stored> credentials_;
  std::map<std::string, Identity> personas_;
};

}  // namespace dtrust
