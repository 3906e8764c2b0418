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

#include "dtrust/agreements.hpp"

#include <algorithm>

namespace dtrust {

namespace {

constexpr std::uint8_t kHashSeparator = 0x1f;

const char* clause_kind_name(ClauseKind k) {
  switch (k) {
    case ClauseKind::fixed: return "fixed";
    case ClauseKind::choice: return "choice";
    case ClauseKind::option: return "option";
  }
  return "fixed";
}

ClauseKind clause_kind_from(const std::string& name, Errc code) {
  if (name == "fixed") return ClauseKind::fixed;
  if (name == "choice") return ClauseKind::choice;
  if (name == "option") return ClauseKind::option;
  throw Error(code, "unknown clause kind '" + name + "'");
}

const char* clause_state_name(ClauseState s) {
  switch (s) {
    case ClauseState::open: return "open";
    case ClauseState::resolved: return "resolved";
    case ClauseState::accepted: return "accepted";
    case ClauseState::rejected: return "rejected";
  }
  return "open";
}

ClauseState clause_state_from(const std::string& name, Errc code) {
  if (name == "open") return ClauseState::open;
  if (name == "resolved") return ClauseState::resolved;
  if (name == "accepted") return ClauseState::accepted;
  if (name == "rejected") return ClauseState::rejected;
  throw Error(code, "unknown clause state '" + name + "'");
}

void require_terms_object(const Json& terms) {
  if (!terms.is_object()) {
    throw Error(Errc::parse_error, "machine terms must be an object");
  }
}

}  // namespace

Json Clause::to_json() const {
  Json alts = Json::array();
  for (const ClauseAlternative& a : alternatives) {
    alts.push_back(Json{{"terms", a.terms}, {"text", a.text}});
  }
  return Json{{"alternatives", alts},
              {"id", id},
              {"kind", clause_kind_name(kind)},
              {"proposer", proposer},
              {"selection", selection},
              {"state", clause_state_name(state)},
              {"terms", terms},
              {"text", text},
              {"title", title}};
}

Clause Clause::from_json(const Json& j) {
  require_keys(j, {"alternatives", "id", "kind", "proposer", "selection", "state", "terms",
                   "text", "title"},
               Errc::parse_error);
  Clause c;
  c.id = get_string(j, "id", Errc::parse_error);
  c.kind = clause_kind_from(get_string(j, "kind", Errc::parse_error), Errc::parse_error);
  c.title = get_string(j, "title", Errc::parse_error);
  c.text = get_string(j, "text", Errc::parse_error);
  c.terms = j.at("terms");
  require_terms_object(c.terms);
  c.proposer = get_string(j, "proposer", Errc::parse_error);
  c.state = clause_state_from(get_string(j, "state", Errc::parse_error), Errc::parse_error);
  c.selection = get_int(j, "selection", Errc::parse_error);
  for (const Json& a : j.at("alternatives")) {
    require_keys(a, {"terms", "text"}, Errc::parse_error);
    ClauseAlternative alt;
    alt.text = get_string(a, "text", Errc::parse_error);
    alt.terms = a.at("terms");
    require_terms_object(alt.terms);
    c.alternatives.push_back(std::move(alt));
  }
  return c;
}

Clause fixed_clause(std::string id, std::string title, std::string text, Json terms) {
  Clause c;
  c.id = std::move(id);
  c.kind = ClauseKind::fixed;
  c.title = std::move(title);
  c.text = std::move(text);
  c.terms = std::move(terms);
  return c;
}

Clause choice_clause(std::string id, std::string title, std::vector<ClauseAlternative> alts) {
  Clause c;
  c.id = std::move(id);
  c.kind = ClauseKind::choice;
  c.title = std::move(title);
  c.alternatives = std::move(alts);
  return c;
}

Clause option_clause(std::string id, std::string title, std::string text, Json terms) {
  Clause c;
  c.id = std::move(id);
  c.kind = ClauseKind::option;
  c.title = std::move(title);
  c.text = std::move(text);
  c.terms = std::move(terms);
  return c;
}

Json MessageEnvelope::body_json() const {
  return Json{{"body", body}, {"sender", sender}, {"seq", seq}, {"session", session}};
}

Json MessageEnvelope::to_json() const {
  Json j = body_json();
  j["signature"] = to_hex(signature);
  return j;
}

MessageEnvelope MessageEnvelope::from_json(const Json& j) {
  require_keys(j, {"body", "sender", "seq", "session", "signature"}, Errc::parse_error);
  MessageEnvelope e;
  e.session = get_string(j, "session", Errc::parse_error);
  e.sender = get_string(j, "sender", Errc::parse_error);
  e.seq = get_int(j, "seq", Errc::parse_error);
  e.body = j.at("body");
  e.signature = get_hex(j, "signature", Errc::parse_error);
  return e;
}

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::init: return "Init";
    case Phase::identified: return "Identified";
    case Phase::negotiating: return "Negotiating";
    case Phase::agreed: return "Agreed";
    case Phase::signed_: return "Signed";
    case Phase::aborted: return "Aborted";
  }
  return "Init";
}

Json RicardianAgreement::body_json() const {
  return Json{{"hash", to_hex(hash)},
              {"leaf_index", leaf_index},
              {"log_id", log_id},
              {"machine_terms", machine_terms},
              {"party_a", party_a},
              {"party_a_doc_version", party_a_doc_version},
              {"party_b", party_b},
              {"party_b_doc_version", party_b_doc_version},
              {"presentation_digest_a", presentation_digest_a},
              {"presentation_digest_b", presentation_digest_b},
              {"text", text}};
}

Json RicardianAgreement::to_json() const {
  Json j = body_json();
  j["signature_a"] = to_hex(signature_a);
  j["signature_b"] = to_hex(signature_b);
  return j;
}

RicardianAgreement RicardianAgreement::from_json(const Json& j) {
  require_keys(j, {"hash", "leaf_index", "log_id", "machine_terms", "party_a",
                   "party_a_doc_version", "party_b", "party_b_doc_version",
                   "presentation_digest_a", "presentation_digest_b", "signature_a", "signature_b",
                   "text"},
               Errc::parse_error);
  RicardianAgreement a;
  a.text = get_string(j, "text", Errc::parse_error);
  a.machine_terms = j.at("machine_terms");
  require_terms_object(a.machine_terms);
  a.hash = get_hash(j, "hash", Errc::parse_error);
  a.party_a = get_string(j, "party_a", Errc::parse_error);
  a.party_b = get_string(j, "party_b", Errc::parse_error);
  a.party_a_doc_version = get_int(j, "party_a_doc_version", Errc::parse_error);
  a.party_b_doc_version = get_int(j, "party_b_doc_version", Errc::parse_error);
  a.presentation_digest_a = get_string(j, "presentation_digest_a", Errc::parse_error);
  a.presentation_digest_b = get_string(j, "presentation_digest_b", Errc::parse_error);
  a.log_id = get_string(j, "log_id", Errc::parse_error);
  a.leaf_index = get_int(j, "leaf_index", Errc::parse_error);
  a.signature_a = get_hex(j, "signature_a", Errc::parse_error);
  a.signature_b = get_hex(j, "signature_b", Errc::parse_error);
  return a;
}

Hash32 agreement_content_hash(const std::string& text, const Json& machine_terms) {
  Bytes buf = bytes_of(text);
  buf.push_back(kHashSeparator);
  Bytes terms = bytes_of(to_canonical(machine_terms));
  buf.insert(buf.end(), terms.begin(), terms.end());
  return sha256(buf);
}

bool verify_agreement(const RicardianAgreement& agreement, const RegistrySnapshot& snapshot) {
  if (agreement_content_hash(agreement.text, agreement.machine_terms) != agreement.hash) {
    return false;
  }
  auto key_of = [&](const std::string& did, std::int64_t version) -> std::optional<Bytes> {
    auto it = snapshot.find(did);
    if (it == snapshot.end()) return std::nullopt;
    try {
      Bytes key = it->second.key_at_version(version);
      if (key.size() != kPublicKeyLen) return std::nullopt;
      return key;
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  std::optional<Bytes> key_a = key_of(agreement.party_a, agreement.party_a_doc_version);
  std::optional<Bytes> key_b = key_of(agreement.party_b, agreement.party_b_doc_version);
  if (!key_a || !key_b) return false;
  std::string body = to_canonical(agreement.body_json());
  return verify(*key_a, body, agreement.signature_a) &&
         verify(*key_b, body, agreement.signature_b);
}

std::pair<std::string, Json> render_agreement_content(const std::vector<Clause>& clauses,
                                                      const std::string& party_a,
                                                      const std::string& party_b) {
  std::vector<const Clause*> sorted;
  for (const Clause& c : clauses) sorted.push_back(&c);
  std::sort(sorted.begin(), sorted.end(),
            [](const Clause* x, const Clause* y) { return x->id < y->id; });

  std::string text = "AGREEMENT\nPARTY A: " + party_a + "\nPARTY B: " + party_b + "\nTERMS:\n";
  Json merged = Json::object();
  for (const Clause* c : sorted) {
    switch (c->kind) {
      case ClauseKind::fixed: {
        text += "[" + c->id + "] " + c->title + ": " + c->text + "\n";
        for (const auto& [k, v] : c->terms.items()) merged[k] = v;
        break;
      }
      case ClauseKind::choice: {
        const ClauseAlternative& alt = c->alternatives.at(static_cast<std::size_t>(c->selection));
        text += "[" + c->id + "] " + c->title + " (selected): " + alt.text + "\n";
        for (const auto& [k, v] : alt.terms.items()) merged[k] = v;
        break;
      }
      case ClauseKind::option: {
        if (c->state != ClauseState::accepted) continue;  // rejected options are omitted
        text += "[" + c->id + "] " + c->title + " (optional, accepted): " + c->text + "\n";
        for (const auto& [k, v] : c->terms.items()) merged[k] = v;
        break;
      }
    }
  }
  return {text, merged};
}

NegotiationSession::NegotiationSession(std::string session_id, Did party_a, Did party_b)
    : id_(std::move(session_id)), party_a_(std::move(party_a)), party_b_(std::move(party_b)) {}

void NegotiationSession::identify(const PartyIdentification& for_a,
                                  const PartyIdentification& for_b,
                                  const RegistrySnapshot& registry_snapshot,
                                  const RevocationSnapshots& revocation_snapshots, SimTime clock,
                                  const NegotiationPolicy& policy) {
  require_phase({Phase::init});

  auto identify_party = [&](const PartyIdentification& ident, const Did& expected,
                            const std::string& role) {
    VerificationReport report =
        verify_presentation(ident.presentation, ident.expected_challenge, ident.anchors,
                            registry_snapshot, revocation_snapshots, clock);
    if (!report.accepted || ident.presentation.holder != expected) {
      phase_at_abort_ = phase_;
      phase_ = Phase::aborted;
      throw IdentificationError(role, phase_at_abort_, report,
                                "party " + role + " failed identification");
    }
  };

  identify_party(for_a, party_a_, "a");
  identify_party(for_b, party_b_, "b");

  auto doc_a = registry_snapshot.find(party_a_.str());
  auto doc_b = registry_snapshot.find(party_b_.str());
  if (doc_a == registry_snapshot.end() || doc_b == registry_snapshot.end()) {
    phase_at_abort_ = phase_;
    phase_ = Phase::aborted;
    throw IdentificationError("a", phase_at_abort_, {}, "party document missing from snapshot");
  }
  key_a_ = doc_a->second.active_key;
  key_b_ = doc_b->second.active_key;
  doc_version_a_ = doc_a->second.version;
  doc_version_b_ = doc_b->second.version;
  presentation_digest_a_ = to_hex(canonical_digest(for_a.presentation.to_json()));
  presentation_digest_b_ = to_hex(canonical_digest(for_b.presentation.to_json()));

  phase_ = Phase::identified;

  // Policy preconditions gate the exit from Identified.
  for (const PolicyPrecondition& p : policy.preconditions) {
    const Presentation& target = p.applies_to == "a" ? for_a.presentation : for_b.presentation;
    bool ok = p.check ? p.check(target) : false;
    policy_results_.emplace_back(p.description, ok);
    if (!ok) {
      phase_at_abort_ = phase_;
      phase_ = Phase::aborted;
      throw IdentificationError(p.applies_to, phase_at_abort_, {},
                                "policy precondition failed: " + p.description);
    }
  }
}

const Clause* NegotiationSession::find_clause(const std::string& clause_id) const {
  for (const Clause& c : clauses_) {
    if (c.id == clause_id) return &c;
  }
  return nullptr;
}

std::string NegotiationSession::role_of(const std::string& did) const {
  if (did == party_a_.str()) return "a";
  if (did == party_b_.str()) return "b";
  throw Error(Errc::unauthorized, "sender is not a session party");
}

const Bytes& NegotiationSession::key_of(const std::string& did) const {
  return role_of(did) == "a" ? key_a_ : key_b_;
}

MessageEnvelope NegotiationSession::make_envelope(const KeyPair& sender_keys, Json body) const {
  std::string sender;
  if (sender_keys.public_key == key_a_) {
    sender = party_a_.str();
  } else if (sender_keys.public_key == key_b_) {
    sender = party_b_.str();
  } else {
    throw Error(Errc::unauthorized, "keys do not belong to a session party");
  }
  MessageEnvelope e;
  e.session = id_;
  e.sender = sender;
  e.seq = static_cast<std::int64_t>(history_.size());
  e.body = std::move(body);
  e.signature = sign(sender_keys.secret_key, to_canonical(e.body_json()));
  return e;
}

void NegotiationSession::require_phase(std::initializer_list<Phase> allowed) const {
  for (Phase p : allowed) {
    if (phase_ == p) return;
  }
  throw Error(Errc::wrong_phase,
              std::string("operation not permitted in phase ") + phase_name(phase_));
}

void NegotiationSession::apply_clause_set(const std::string& sender,
                                          const std::vector<Clause>& clauses) {
  std::vector<Clause> installed;
  std::set<std::string> ids;
  for (const Clause& c : clauses) {
    if (c.id.empty() || !ids.insert(c.id).second) {
      throw Error(Errc::unknown_clause, "clause ids must be unique and non-empty");
    }
    if (c.kind == ClauseKind::choice && c.alternatives.size() < 2) {
      throw Error(Errc::unknown_clause, "a choice needs at least two alternatives");
    }
    Clause fresh = c;
    fresh.proposer = sender;
    fresh.selection = -1;
    // Fixed clauses carry no decision; they settle on arrival and are
    // consented to through accept-all.
    fresh.state = c.kind == ClauseKind::fixed ? ClauseState::resolved : ClauseState::open;
    installed.push_back(std::move(fresh));
  }
  clauses_ = std::move(installed);
  approved_a_ = approved_b_ = false;
}

void NegotiationSession::apply_message(const MessageEnvelope& envelope) {
  if (envelope.session != id_) {
    throw Error(Errc::unauthorized, "message addressed to a different session");
  }
  std::string role = role_of(envelope.sender);  // throws for third parties
  if (envelope.seq != static_cast<std::int64_t>(history_.size())) {
    throw Error(Errc::unauthorized, "message sequence does not extend this session");
  }
  if (!verify(key_of(envelope.sender), to_canonical(envelope.body_json()), envelope.signature)) {
    throw Error(Errc::unauthorized, "message signature does not verify");
  }
  std::string type = get_string(envelope.body, "type", Errc::parse_error);

  if (type == "propose" || type == "counter") {
    require_phase({Phase::identified, Phase::negotiating});
    std::vector<Clause> clauses;
    const Json& clause_json = get_field(envelope.body, "clauses", Errc::parse_error);
    if (!clause_json.is_array()) throw Error(Errc::parse_error, "clauses must be an array");
    for (const Json& c : clause_json) clauses.push_back(Clause::from_json(c));
    apply_clause_set(envelope.sender, clauses);
    phase_ = Phase::negotiating;
  } else if (type == "select_choice") {
    require_phase({Phase::negotiating});
    std::string clause_id = get_string(envelope.body, "clause", Errc::parse_error);
    std::int64_t alternative = get_int(envelope.body, "alternative", Errc::parse_error);
    const Clause* c = find_clause(clause_id);
    if (c == nullptr || c->kind != ClauseKind::choice) {
      throw Error(Errc::unknown_clause, "no choice clause '" + clause_id + "'");
    }
    if (c->settled()) {
      throw Error(Errc::already_resolved, "choice '" + clause_id + "' is already resolved");
    }
    if (c->proposer == envelope.sender) {
      throw Error(Errc::unauthorized, "the proposing party may not select its own choice");
    }
    if (alternative < 0 || alternative >= static_cast<std::int64_t>(c->alternatives.size())) {
      throw Error(Errc::unknown_clause, "choice '" + clause_id + "' has no such alternative");
    }
    Clause& mutable_clause = clauses_[static_cast<std::size_t>(c - clauses_.data())];
    mutable_clause.selection = alternative;
    mutable_clause.state = ClauseState::resolved;
    approved_a_ = approved_b_ = false;
  } else if (type == "respond_option") {
    require_phase({Phase::negotiating});
    std::string clause_id = get_string(envelope.body, "clause", Errc::parse_error);
    bool accept = get_bool(envelope.body, "accept", Errc::parse_error);
    const Clause* c = find_clause(clause_id);
    if (c == nullptr || c->kind != ClauseKind::option) {
      throw Error(Errc::unknown_clause, "no option clause '" + clause_id + "'");
    }
    if (c->settled()) {
      throw Error(Errc::already_resolved, "option '" + clause_id + "' is already decided");
    }
    if (c->proposer == envelope.sender) {
      throw Error(Errc::unauthorized, "the proposing party may not answer its own option");
    }
    Clause& mutable_clause = clauses_[static_cast<std::size_t>(c - clauses_.data())];
    mutable_clause.state = accept ? ClauseState::accepted : ClauseState::rejected;
    approved_a_ = approved_b_ = false;
  } else if (type == "accept_all") {
    require_phase({Phase::negotiating});
    (role == "a" ? approved_a_ : approved_b_) = true;
    if (approved_a_ && approved_b_ && !clauses_.empty() && all_clauses_settled()) {
      phase_ = Phase::agreed;
    }
  } else if (type == "sign") {
    // Recorded for history completeness; finalize_and_sign drives the state.
    require_phase({Phase::agreed});
  } else if (type == "abort") {
    if (phase_ == Phase::signed_ || phase_ == Phase::aborted) {
      throw Error(Errc::wrong_phase, "cannot abort a signed or aborted session");
    }
    phase_at_abort_ = phase_;
    phase_ = Phase::aborted;
  } else {
    throw Error(Errc::parse_error, "unknown message type '" + type + "'");
  }
  history_.push_back(envelope);
}

void NegotiationSession::propose(const KeyPair& sender_keys, const std::vector<Clause>& clauses) {
  Json clause_json = Json::array();
  for (const Clause& c : clauses) clause_json.push_back(c.to_json());
  apply_message(make_envelope(sender_keys, Json{{"clauses", clause_json}, {"type", "propose"}}));
}

void NegotiationSession::counter(const KeyPair& sender_keys, const std::vector<Clause>& clauses) {
  Json clause_json = Json::array();
  for (const Clause& c : clauses) clause_json.push_back(c.to_json());
  apply_message(make_envelope(sender_keys, Json{{"clauses", clause_json}, {"type", "counter"}}));
}

void NegotiationSession::select_choice(const KeyPair& sender_keys, const std::string& clause_id,
                                       std::int64_t alternative) {
  apply_message(make_envelope(
      sender_keys,
      Json{{"alternative", alternative}, {"clause", clause_id}, {"type", "select_choice"}}));
}

void NegotiationSession::respond_option(const KeyPair& sender_keys, const std::string& clause_id,
                                        bool accept) {
  apply_message(make_envelope(
      sender_keys, Json{{"accept", accept}, {"clause", clause_id}, {"type", "respond_option"}}));
}

void NegotiationSession::accept_all(const KeyPair& sender_keys) {
  apply_message(make_envelope(sender_keys, Json{{"type", "accept_all"}}));
}

void NegotiationSession::abort(const KeyPair& sender_keys, const std::string& reason) {
  apply_message(make_envelope(sender_keys, Json{{"reason", reason}, {"type", "abort"}}));
}

bool NegotiationSession::all_clauses_settled() const {
  return std::all_of(clauses_.begin(), clauses_.end(),
                     [](const Clause& c) { return c.settled(); });
}

RicardianAgreement NegotiationSession::finalize_and_sign(const KeyPair& keys_a,
                                                         const KeyPair& keys_b, MerkleLog& log,
                                                         const std::string& log_id) {
  if (!clauses_.empty() && !all_clauses_settled()) {
    throw Error(Errc::incomplete_terms, "open clauses remain");
  }
  require_phase({Phase::agreed});
  if (keys_a.public_key != key_a_ || keys_b.public_key != key_b_) {
    throw Error(Errc::unauthorized, "signing keys do not match the identified parties");
  }

  RicardianAgreement agreement;
  std::tie(agreement.text, agreement.machine_terms) =
      render_agreement_content(clauses_, party_a_.str(), party_b_.str());
  agreement.hash = agreement_content_hash(agreement.text, agreement.machine_terms);
  agreement.party_a = party_a_.str();
  agreement.party_b = party_b_.str();
  agreement.party_a_doc_version = doc_version_a_;
  agreement.party_b_doc_version = doc_version_b_;
  agreement.presentation_digest_a = presentation_digest_a_;
  agreement.presentation_digest_b = presentation_digest_b_;
  agreement.log_id = log_id;
  agreement.leaf_index = static_cast<std::int64_t>(log.size());  // known before the append

  std::string body = to_canonical(agreement.body_json());
  agreement.signature_a = sign(keys_a.secret_key, body);
  agreement.signature_b = sign(keys_b.secret_key, body);

  Json sign_body{{"hash", to_hex(agreement.hash)}, {"type", "sign"}};
  apply_message(make_envelope(keys_a, sign_body));
  apply_message(make_envelope(keys_b, sign_body));

  log.append(bytes_of(to_canonical(agreement.to_json())));
  agreement_ = agreement;
  phase_ = Phase::signed_;
  return agreement;
}

Hash32 NegotiationSession::history_digest() const {
  Hash32 digest = sha256(id_);
  for (const MessageEnvelope& e : history_) {
    Bytes buf = to_bytes(digest);
    Bytes msg = bytes_of(to_canonical(e.to_json()));
    buf.insert(buf.end(), msg.begin(), msg.end());
    digest = sha256(buf);
  }
  return digest;
}

bool verify_history(const std::vector<MessageEnvelope>& history, const std::string& session_id,
                    const std::map<std::string, Bytes>& party_keys) {
  for (std::size_t i = 0; i < history.size(); ++i) {
    const MessageEnvelope& e = history[i];
    if (e.session != session_id) return false;
    if (e.seq != static_cast<std::int64_t>(i)) return false;
    auto it = party_keys.find(e.sender);
    if (it == party_keys.end()) return false;
    if (!verify(it->second, to_canonical(e.body_json()), e.signature)) return false;
  }
  return true;
}

Obligation evaluate_terms(const RicardianAgreement& agreement, const std::string& event) {
  const Json& terms = agreement.machine_terms;
  auto term = [&](const char* key) -> std::string {
    if (!terms.contains(key)) return "";
    const Json& v = terms.at(key);
    return v.is_string() ? v.get<std::string>() : to_canonical(v);
  };

  if (event == "data_export") {
    std::string sharing = term("data_sharing");
    if (sharing == "aggregate") return {event, "allow_aggregated", "data_sharing=aggregate"};
    if (sharing == "full") return {event, "allow", "data_sharing=full"};
    // Absent or "none": claim-level data may not leave the provider.
    return {event, "deny", "data_sharing=" + (sharing.empty() ? "unset" : sharing)};
  }
  if (event == "ad_personalization") {
    std::string setting = term("ad_personalization");
    if (setting == "on") return {event, "allow", "ad_personalization=on"};
    return {event, "deny", "ad_personalization=" + (setting.empty() ? "unset" : setting)};
  }
  if (event == "retain_data") {
    std::string days = term("retention_days");
    if (days.empty()) return {event, "deny", "retention_days unset"};
    return {event, "allow_for_days", days};
  }
  if (event == "portability_check") {
    bool guaranteed = term("portability") == "guaranteed";
    return {event, guaranteed ? "allow" : "deny", "portability=" + term("portability")};
  }
  throw Error(Errc::unknown_event, "no obligation rule for event '" + event + "'");
}

}  // namespace dtrust
