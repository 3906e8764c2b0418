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

#include "dtrust/agreements.hpp"
#include "dtrust/merkle_log.hpp"
#include "dtrust/verification.hpp"

namespace dtrust {

/// One declarative condition over a named evidence record. Ops: eq, ge, le,
/// present, and tpr_gap_le (true-positive-rate gap over a two-group
/// confusion table with fields tp_a, fn_a, tp_b, fn_b, threshold in
/// hundredths).
struct Condition {
  std::string op;
  std::string record;
  std::string field;
  Json value;

  Json to_json() const;
  static Condition from_json(const Json& j);
};

/// A codified regulation: a pure, deterministic predicate over evidence.
struct Regulation {
  std::string id;
  std::string description;
  Did authority;
  std::vector<Condition> conditions;

  Json to_json() const;
  static Regulation from_json(const Json& j);
};

/// Evidence is a set of named canonical records submitted by the provider.
struct Evidence {
  std::map<std::string, Json> records;

  /// Throws Error(malformed_evidence) on empty names or non-object records.
  void validate() const;
  Json to_json() const;
  static Evidence from_json(const Json& j);
  Hash32 digest() const;
};

/// Evaluates the regulation's conditions; pure and deterministic.
bool evaluate_regulation(const Regulation& regulation, const Evidence& evidence);

struct AuditRecord {
  std::string regulation_id;
  std::string provider;  // rendered DID
  Hash32 evidence_digest{};
  std::string verdict;  // "pass" | "fail"
  std::string auditor;  // rendered DID
  SimTime at = 0;
  std::string log_id;
  std::int64_t leaf_index = -1;

  Json to_json() const;
  static AuditRecord from_json(const Json& j);
};

struct AuditOutcome {
  AuditRecord record;
  std::optional<Issued> credential;  // compliance credential, pass only
};

inline constexpr SimTime kDefaultComplianceValidityDays = 90;

/// Runs the audit, appends the record to the log either way, and issues a
/// compliance credential to the provider iff the verdict is pass.
AuditOutcome conduct_audit(const KeyPair& authority_keys, const Regulation& regulation,
                           const Did& provider, const Evidence& evidence, MerkleLog& log,
                           const std::string& log_id, const Registry& registry, SimTime clock,
                           DeterministicRng& rng,
                           SimTime validity_days = kDefaultComplianceValidityDays);

/// Log-side material a verifier fetches ahead of time: the audit-record
/// leaf, its inclusion proof, and a signed tree head.
struct LogEvidence {
  Bytes leaf;
  InclusionProof proof;
  SignedRoot signed_root;

  Json to_json() const;
  static LogEvidence from_json(const Json& j);
};

/// The compliance claims a provider is expected to disclose.
std::vector<std::string> compliance_claim_names();

/// True iff the presentation carries a valid compliance credential for the
/// regulation, the validity window contains the clock, and the referenced
/// audit record is proven present in the log. Anchors: schema "compliance"
/// lists accepted authorities, schema "log" accepted log operators.
bool verify_compliance(const Presentation& presentation, const std::string& regulation_id,
                       const TrustAnchorSet& anchors, const RegistrySnapshot& registry_snapshot,
                       const RevocationSnapshots& revocation_snapshots,
                       const LogEvidence& log_evidence, SimTime clock);

struct ArtifactAttestation {
  Credential credential;
  DisclosureBundle bundle;  // attestation claims are public by design
  std::string log_id;
  std::int64_t leaf_index = -1;

  Json to_json() const;
  static ArtifactAttestation from_json(const Json& j);
};

/// Binds SHA-256 of the artifact bytes to its kind (model | dataset | code)
/// and attested properties; the subject is a passive DID for the artifact,
/// controlled by the publisher. The attestation is logged.
ArtifactAttestation attest_artifact(const KeyPair& publisher_keys, const Did& publisher,
                                    const Bytes& artifact, const std::string& kind,
                                    const std::map<std::string, std::string>& properties,
                                    MerkleLog& log, const std::string& log_id, Registry& registry,
                                    SimTime clock, DeterministicRng& rng);

/// Recomputes the digest over the artifact bytes and checks the attestation
/// credential, publisher anchoring (schema "artifact"), and log inclusion.
bool verify_artifact(const Bytes& artifact, const ArtifactAttestation& attestation,
                     const TrustAnchorSet& anchors, const RegistrySnapshot& registry_snapshot,
                     const LogEvidence& log_evidence);

/// The three regulations shipped with the simulator: data-collection
/// consent coverage, a model-bias bound over a toy confusion table, and
/// source supply-chain attestation coverage.
Regulation regulation_data_consent(const Did& authority);
Regulation regulation_model_bias(const Did& authority);
Regulation regulation_supply_chain(const Did& authority);

}  // namespace dtrust
