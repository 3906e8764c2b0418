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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dtrust/merkle_log.hpp"
#include "dtrust/verification.hpp"

namespace dtrust {

enum class ClauseKind { fixed, choice, option };
enum class ClauseState { open, resolved, accepted, rejected };

struct ClauseAlternative {
  std::string text;
  Json terms = Json::object();  // machine-evaluable key -> value
};

/// One negotiable clause. Fixed clauses are resolved on arrival; a choice is
/// resolved by the non-proposing party selecting one alternative; an option
/// enters the agreement only if the non-proposing party accepts it.
struct Clause {
  std::string id;
  ClauseKind kind = ClauseKind::fixed;
  std::string title;
  std::string text;             // fixed/option body
  Json terms = Json::object();  // fixed/option machine terms
  std::vector<ClauseAlternative> alternatives;  // choice only
  std::string proposer;         // rendered DID, stamped on arrival
  ClauseState state = ClauseState::open;
  std::int64_t selection = -1;  // choice only

  bool settled() const { return state != ClauseState::open; }

  Json to_json() const;
  static Clause from_json(const Json& j);
};

Clause fixed_clause(std::string id, std::string title, std::string text, Json terms);
Clause choice_clause(std::string id, std::string title, std::vector<ClauseAlternative> alts);
Clause option_clause(std::string id, std::string title, std::string text, Json terms);

/// Signed message envelope. The signature covers the canonical serialization
/// of {body, seq, sender, session}.
struct MessageEnvelope {
  std::string session;
  std::string sender;  // rendered DID
  std::int64_t seq = 0;
  Json body;
  Bytes signature;

  Json body_json() const;
  Json to_json() const;
  static MessageEnvelope from_json(const Json& j);
};

enum class Phase { init, identified, negotiating, agreed, signed_, aborted };

const char* phase_name(Phase p);

/// Human-readable text plus machine terms, hash-anchored and dual-signed.
/// The party signatures cover the whole canonical body (which embeds the
/// content hash), so no field of the exported agreement is unauthenticated.
struct RicardianAgreement {
  std::string text;
  Json machine_terms = Json::object();
  Hash32 hash{};  // SHA-256(text || 0x1F || canonical machine terms)
  std::string party_a, party_b;  // rendered DIDs
  std::int64_t party_a_doc_version = 1, party_b_doc_version = 1;
  std::string presentation_digest_a, presentation_digest_b;  // hex
  std::string log_id;
  std::int64_t leaf_index = -1;
  Bytes signature_a, signature_b;

  Json body_json() const;
  Json to_json() const;
  static RicardianAgreement from_json(const Json& j);
};

bool verify_agreement(const RicardianAgreement& agreement, const RegistrySnapshot& snapshot);

/// Renders canonical text and merged machine terms from the settled clause
/// set alone; both are independent of message order and of who proposed.
std::pair<std::string, Json> render_agreement_content(const std::vector<Clause>& clauses,
                                                      const std::string& party_a,
                                                      const std::string& party_b);

Hash32 agreement_content_hash(const std::string& text, const Json& machine_terms);

struct PolicyPrecondition {
  std::string description;
  std::string applies_to;  // "a" | "b"
  std::function<bool(const Presentation&)> check;
};

struct NegotiationPolicy {
  std::vector<PolicyPrecondition> preconditions;
};

/// Inputs for one side of mutual identification: the presentation this
/// party produced, the challenge the counterparty issued for it, and the
/// counterparty's trust anchors to verify it against.
struct PartyIdentification {
  Presentation presentation;
  Bytes expected_challenge;
  TrustAnchorSet anchors;
};

class IdentificationError : public Error {
 public:
  IdentificationError(std::string party, Phase phase_at_abort, VerificationReport report,
                      const std::string& what)
      : Error(Errc::identification_failed, what),
        party(std::move(party)),
        phase_at_abort(phase_at_abort),
        report(std::move(report)) {}

  std::string party;
  Phase phase_at_abort;
  VerificationReport report;
};

/// Three-phase negotiation between two identified parties. Methods validate
/// fully before mutating, so a failed call leaves the session unchanged.
class NegotiationSession {
 public:
  NegotiationSession(std::string session_id, Did party_a, Did party_b);

  /// Phase 1: mutual identification, then policy preconditions. DID-level
  /// failure aborts from Init; a policy failure aborts from Identified.
  /// Throws IdentificationError either way.
  void identify(const PartyIdentification& for_a, const PartyIdentification& for_b,
                const RegistrySnapshot& registry_snapshot,
                const RevocationSnapshots& revocation_snapshots, SimTime clock,
                const NegotiationPolicy& policy = {});

  // Phase 2: negotiation. Each call signs, appends and applies a message.
  void propose(const KeyPair& sender_keys, const std::vector<Clause>& clauses);
  void counter(const KeyPair& sender_keys, const std::vector<Clause>& clauses);
  void select_choice(const KeyPair& sender_keys, const std::string& clause_id,
                     std::int64_t alternative);
  void respond_option(const KeyPair& sender_keys, const std::string& clause_id, bool accept);
  void accept_all(const KeyPair& sender_keys);
  void abort(const KeyPair& sender_keys, const std::string& reason);

  /// Phase 3: renders, hashes, signs with both keys, and anchors the
  /// agreement as a leaf of the designated log.
  RicardianAgreement finalize_and_sign(const KeyPair& keys_a, const KeyPair& keys_b,
                                       MerkleLog& log, const std::string& log_id);

  /// External-injection path used by transports and tests; verifies the
  /// sender is a party, the signature, and the sequence number.
  void apply_message(const MessageEnvelope& envelope);

  Phase phase() const { return phase_; }
  Phase phase_at_abort() const { return phase_at_abort_; }
  const std::string& id() const { return id_; }
  const Did& party_a() const { return party_a_; }
  const Did& party_b() const { return party_b_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const std::vector<MessageEnvelope>& history() const { return history_; }
  const std::optional<RicardianAgreement>& agreement() const { return agreement_; }
  std::pair<bool, bool> approvals() const { return {approved_a_, approved_b_}; }
  bool all_clauses_settled() const;

  /// Running digest over the signed history; replacing any message changes it.
  Hash32 history_digest() const;

 private:
  const Clause* find_clause(const std::string& clause_id) const;
  std::string role_of(const std::string& did) const;  // "a" | "b"
  const Bytes& key_of(const std::string& did) const;
  MessageEnvelope make_envelope(const KeyPair& sender_keys, Json body) const;
  void require_phase(std::initializer_list<Phase> allowed) const;
  void apply_clause_set(const std::string& sender, const std::vector<Clause>& clauses);

  std::string id_;
  Did party_a_, party_b_;
  Bytes key_a_, key_b_;  // active keys recorded at identification
  std::int64_t doc_version_a_ = 1, doc_version_b_ = 1;
  std::string presentation_digest_a_, presentation_digest_b_;
  Phase phase_ = Phase::init;
  Phase phase_at_abort_ = Phase::init;
  std::vector<Clause> clauses_;
  bool approved_a_ = false, approved_b_ = false;
  std::vector<MessageEnvelope> history_;
  std::optional<RicardianAgreement> agreement_;
  std::vector<std::pair<std::string, bool>> policy_results_;
};

/// History integrity: every envelope signature verifies under its sender's
/// recorded key and the chained digest matches.
bool verify_history(const std::vector<MessageEnvelope>& history, const std::string& session_id,
                    const std::map<std::string, Bytes>& party_keys);

struct Obligation {
  std::string event;
  std::string decision;
  std::string detail;
};

/// Pure evaluation of the machine terms against an event from the fixed
/// vocabulary: data_export, ad_personalization, retain_data, portability_check.
Obligation evaluate_terms(const RicardianAgreement& agreement, const std::string& event);

}  // namespace dtrust
