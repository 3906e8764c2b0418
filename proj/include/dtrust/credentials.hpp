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
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dtrust/identity.hpp"
#include "dtrust/merkle_log.hpp"
#include "dtrust/sim_time.hpp"

namespace dtrust {

/// Claim values are typed and canonically rendered: dates as ISO-8601,
/// integers base-10, booleans "true"/"false".
using ClaimValue = std::variant<std::string, std::int64_t, Date, bool>;

std::string canonical_claim_value(const ClaimValue& v);
const char* claim_type_name(const ClaimValue& v);
Json claim_value_to_json(const ClaimValue& v);
ClaimValue claim_value_from_json(const Json& j, Errc code);

/// Non-empty map of uniquely named claims. Names are restricted to
/// [A-Za-z0-9_.-] so the commitment preimage separator stays unambiguous.
class ClaimSet {
 public:
  ClaimSet() = default;
  explicit ClaimSet(std::map<std::string, ClaimValue> claims);

  void set(const std::string& name, ClaimValue value);
  const std::map<std::string, ClaimValue>& claims() const { return claims_; }
  bool has(const std::string& name) const { return claims_.count(name) > 0; }
  const ClaimValue& at(const std::string& name) const;

  /// Throws Error(invalid_claims) on an empty set or a malformed name.
  void validate() const;

 private:
  std::map<std::string, ClaimValue> claims_;
};

/// Commitment to one claim: SHA-256(salt || name || 0x1F || canonical value).
struct SaltedCommitment {
  std::string claim_name;
  Bytes salt;  // 16 bytes
  Hash32 commitment{};
};

Hash32 compute_commitment(const Bytes& salt, const std::string& claim_name,
                          const ClaimValue& value);

/// Merkle root over commitments sorted by claim name, with the verifiable
/// log's leaf/node hashing applied to the commitment digests as leaves.
Hash32 commitment_root(std::vector<SaltedCommitment> commitments);

/// Issuance-time predicates, materialized as derived boolean claims.
/// Supported kinds: age_over (claim "birthdate", integer threshold) and
/// value_equals (named claim, expected canonical value).
struct Predicate {
  std::string kind;
  std::string claim;
  std::int64_t threshold = 0;
  std::string expected;

  static Predicate age_over(std::int64_t years) { return {"age_over", "birthdate", years, ""}; }
  static Predicate value_equals(std::string claim, std::string expected) {
    return {"value_equals", std::move(claim), 0, std::move(expected)};
  }
};

struct IssueOptions {
  std::optional<SimTime> expires_at;  // absent = never expires
  std::vector<Predicate> predicates;
};

struct Credential {
  std::string id;
  Did issuer;
  Did subject;
  std::string schema;
  SimTime issued_at = 0;
  std::optional<SimTime> expires_at;
  std::int64_t issuer_doc_version = 1;
  Hash32 root{};
  Bytes issuer_signature;

  Json core_json() const;  // signed portion
  Json to_json() const;
  static Credential from_json(const Json& j);
};

/// Holder-private material: the claims and salts behind the commitments.
/// Never serialized into the credential itself.
struct DisclosureBundle {
  std::string credential_id;
  std::map<std::string, std::pair<ClaimValue, Bytes>> entries;  // name -> (value, salt)

  std::vector<SaltedCommitment> commitments() const;
  Json to_json() const;
  static DisclosureBundle from_json(const Json& j);
};

struct Issued {
  Credential credential;
  DisclosureBundle bundle;
};

/// Issues a credential over the claim set plus any derived predicate claims.
/// Deterministic given the rng state. The clock supplies the issuance day
/// and the predicate evaluation date.
Issued issue(const KeyPair& issuer_keys, const Did& issuer, const Did& subject,
             const ClaimSet& claims, const std::string& schema, const IssueOptions& options,
             const Registry& registry, SimTime clock, DeterministicRng& rng);

/// Signature check against the issuer document in a registry snapshot, at
/// the document version recorded in the credential.
bool verify_credential_signature(const Credential& credential, const RegistrySnapshot& snapshot);

/// Full check available to the holder: signature plus recomputation of the
/// commitment root from the disclosure bundle.
bool verify_credential(const Credential& credential, const DisclosureBundle& bundle,
                       const RegistrySnapshot& snapshot);

/// Monotone set of revoked credential ids, owned by the issuer.
struct RevocationList {
  Did issuer;
  std::set<std::string> revoked;
  std::int64_t counter = 0;
};

/// A signed, dated snapshot of a revocation list, publishable to verifiers.
struct RevocationSnapshot {
  Did issuer;
  std::set<std::string> revoked;
  std::int64_t counter = 0;
  SimTime as_of = 0;
  Bytes signature;

  Json body_json() const;
  Json to_json() const;
  static RevocationSnapshot from_json(const Json& j);
};

/// Adds the id; idempotent, and the counter advances only on change.
void revoke(const KeyPair& issuer_keys, const Registry& registry, const std::string& credential_id,
            RevocationList& list);

bool is_revoked(const std::string& credential_id, const RevocationList& list);
bool is_revoked(const std::string& credential_id, const RevocationSnapshot& snapshot);

RevocationSnapshot snapshot_revocations(const RevocationList& list, const KeyPair& issuer_keys,
                                        SimTime as_of);

bool verify_revocation_snapshot(const RevocationSnapshot& snapshot,
                                const RegistrySnapshot& registry_snapshot);

}  // namespace dtrust
