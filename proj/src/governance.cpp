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

#include "dtrust/governance.hpp"

#include <cstdlib>

namespace dtrust {

Json Condition::to_json() const {
  return Json{{"field", field}, {"op", op}, {"record", record}, {"value", value}};
}

Condition Condition::from_json(const Json& j) {
  require_keys(j, {"field", "op", "record", "value"}, Errc::parse_error);
  Condition c;
  c.op = get_string(j, "op", Errc::parse_error);
  c.record = get_string(j, "record", Errc::parse_error);
  c.field = get_string(j, "field", Errc::parse_error);
  c.value = j.at("value");
  return c;
}

Json Regulation::to_json() const {
  Json conds = Json::array();
  for (const Condition& c : conditions) conds.push_back(c.to_json());
  return Json{{"authority", authority.str()},
              {"conditions", conds},
              {"description", description},
              {"id", id}};
}

Regulation Regulation::from_json(const Json& j) {
  require_keys(j, {"authority", "conditions", "description", "id"}, Errc::parse_error);
  Regulation r;
  r.id = get_string(j, "id", Errc::parse_error);
  r.description = get_string(j, "description", Errc::parse_error);
  r.authority = Did::parse(get_string(j, "authority", Errc::parse_error));
  for (const Json& c : j.at("conditions")) r.conditions.push_back(Condition::from_json(c));
  return r;
}

void Evidence::validate() const {
  if (records.empty()) {
    throw Error(Errc::malformed_evidence, "evidence has no records");
  }
  for (const auto& [name, record] : records) {
    if (name.empty()) throw Error(Errc::malformed_evidence, "evidence record with empty name");
    if (!record.is_object()) {
      throw Error(Errc::malformed_evidence, "evidence record '" + name + "' is not an object");
    }
  }
}

Json Evidence::to_json() const {
  Json records_json = Json::object();
  for (const auto& [name, record] : records) records_json[name] = record;
  return Json{{"records", records_json}};
}

Evidence Evidence::from_json(const Json& j) {
  require_keys(j, {"records"}, Errc::malformed_evidence);
  Evidence e;
  const Json& records = j.at("records");
  if (!records.is_object()) throw Error(Errc::malformed_evidence, "records must be an object");
  for (const auto& [name, record] : records.items()) e.records.emplace(name, record);
  return e;
}

Hash32 Evidence::digest() const { return canonical_digest(to_json()); }

namespace {

bool condition_holds(const Condition& c, const Evidence& evidence) {
  auto rec = evidence.records.find(c.record);
  if (rec == evidence.records.end()) return false;
  const Json& record = rec->second;

  if (c.op == "present") {
    return c.field.empty() || record.contains(c.field);
  }
  if (!record.contains(c.field) && c.op != "tpr_gap_le") return false;

  if (c.op == "eq") {
    return record.at(c.field) == c.value;
  }
  if (c.op == "ge" || c.op == "le") {
    const Json& actual = record.at(c.field);
    if (!actual.is_number_integer() || !c.value.is_number_integer()) return false;
    std::int64_t a = actual.get<std::int64_t>();
    std::int64_t b = c.value.get<std::int64_t>();
    return c.op == "ge" ? a >= b : a <= b;
  }
  if (c.op == "tpr_gap_le") {
    // |tp_a/(tp_a+fn_a) - tp_b/(tp_b+fn_b)| <= value/100, evaluated exactly
    // by cross-multiplication over the confusion-table integers.
    for (const char* f : {"tp_a", "fn_a", "tp_b", "fn_b"}) {
      if (!record.contains(f) || !record.at(f).is_number_integer()) return false;
    }
    if (!c.value.is_number_integer()) return false;
    std::int64_t tp_a = record.at("tp_a").get<std::int64_t>();
    std::int64_t fn_a = record.at("fn_a").get<std::int64_t>();
    std::int64_t tp_b = record.at("tp_b").get<std::int64_t>();
    std::int64_t fn_b = record.at("fn_b").get<std::int64_t>();
    std::int64_t total_a = tp_a + fn_a;
    std::int64_t total_b = tp_b + fn_b;
    if (total_a <= 0 || total_b <= 0) return false;
    std::int64_t gap_num = std::llabs(tp_a * total_b - tp_b * total_a) * 100;
    std::int64_t bound = c.value.get<std::int64_t>() * total_a * total_b;
    return gap_num <= bound;
  }
  return false;  // unknown op never passes
}

}  // namespace

bool evaluate_regulation(const Regulation& regulation, const Evidence& evidence) {
  for (const Condition& c : regulation.conditions) {
    if (!condition_holds(c, evidence)) return false;
  }
  return !regulation.conditions.empty();
}

Json AuditRecord::to_json() const {
  return Json{{"at", at},
              {"auditor", auditor},
              {"evidence_digest", to_hex(evidence_digest)},
              {"leaf_index", leaf_index},
              {"log_id", log_id},
              {"provider", provider},
              {"regulation_id", regulation_id},
              {"verdict", verdict}};
}

AuditRecord AuditRecord::from_json(const Json& j) {
  require_keys(j, {"at", "auditor", "evidence_digest", "leaf_index", "log_id", "provider",
                   "regulation_id", "verdict"},
               Errc::parse_error);
  AuditRecord r;
  r.at = get_int(j, "at", Errc::parse_error);
  r.auditor = get_string(j, "auditor", Errc::parse_error);
  r.evidence_digest = get_hash(j, "evidence_digest", Errc::parse_error);
  r.leaf_index = get_int(j, "leaf_index", Errc::parse_error);
  r.log_id = get_string(j, "log_id", Errc::parse_error);
  r.provider = get_string(j, "provider", Errc::parse_error);
  r.regulation_id = get_string(j, "regulation_id", Errc::parse_error);
  r.verdict = get_string(j, "verdict", Errc::parse_error);
  return r;
}

AuditOutcome conduct_audit(const KeyPair& authority_keys, const Regulation& regulation,
                           const Did& provider, const Evidence& evidence, MerkleLog& log,
                           const std::string& log_id, const Registry& registry, SimTime clock,
                           DeterministicRng& rng, SimTime validity_days) {
  DidDocument authority_doc = resolve(regulation.authority, registry);
  if (authority_doc.active_key != authority_keys.public_key) {
    throw Error(Errc::unauthorized, "caller does not hold the regulation authority's keys");
  }
  evidence.validate();

  AuditRecord record;
  record.regulation_id = regulation.id;
  record.provider = provider.str();
  record.evidence_digest = evidence.digest();
  record.verdict = evaluate_regulation(regulation, evidence) ? "pass" : "fail";
  record.auditor = regulation.authority.str();
  record.at = clock;
  record.log_id = log_id;
  record.leaf_index = static_cast<std::int64_t>(log.size());  // known before the append

  log.append(bytes_of(to_canonical(record.to_json())));

  AuditOutcome outcome{record, std::nullopt};
  if (record.verdict == "pass") {
    ClaimSet claims;
    claims.set("regulation_id", regulation.id);
    claims.set("verdict", std::string("pass"));
    claims.set("log_id", log_id);
    claims.set("leaf_index", record.leaf_index);
    claims.set("valid_from", clock);
    claims.set("valid_to", clock + validity_days);
    IssueOptions options;
    options.expires_at = clock + validity_days;
    outcome.credential = issue(authority_keys, regulation.authority, provider, claims,
                               "compliance", options, registry, clock, rng);
  }
  return outcome;
}

Json LogEvidence::to_json() const {
  return Json{{"leaf", to_hex(leaf)},
              {"proof", proof.to_json()},
              {"signed_root", signed_root.to_json()}};
}

LogEvidence LogEvidence::from_json(const Json& j) {
  require_keys(j, {"leaf", "proof", "signed_root"}, Errc::parse_error);
  LogEvidence e;
  e.leaf = get_hex(j, "leaf", Errc::parse_error);
  e.proof = InclusionProof::from_json(j.at("proof"));
  e.signed_root = SignedRoot::from_json(j.at("signed_root"));
  return e;
}

std::vector<std::string> compliance_claim_names() {
  return {"regulation_id", "verdict", "log_id", "leaf_index", "valid_from", "valid_to"};
}

namespace {

bool signed_root_trusted(const SignedRoot& sr, const TrustAnchorSet& anchors,
                         const RegistrySnapshot& registry_snapshot) {
  Did operator_did;
  try {
    operator_did = Did::parse(sr.operator_did);
  } catch (const Error&) {
    return false;
  }
  if (!anchors.accepts("log", operator_did)) return false;
  auto it = registry_snapshot.find(sr.operator_did);
  if (it == registry_snapshot.end() || it->second.active_key.size() != kPublicKeyLen) return false;
  return verify_signed_root(sr, it->second.active_key);
}

std::optional<std::string> disclosed_text(const std::map<std::string, ClaimValue>& claims,
                                          const std::string& name) {
  auto it = claims.find(name);
  if (it == claims.end()) return std::nullopt;
  return canonical_claim_value(it->second);
}

}  // namespace

bool verify_compliance(const Presentation& presentation, const std::string& regulation_id,
                       const TrustAnchorSet& anchors, const RegistrySnapshot& registry_snapshot,
                       const RevocationSnapshots& revocation_snapshots,
                       const LogEvidence& log_evidence, SimTime clock) {
  // Replay-freshness is owned by the surrounding exchange; here the
  // presentation's own challenge closes the holder-signature binding.
  VerificationReport report;
  try {
    report = verify_presentation(presentation, presentation.challenge, anchors,
                                 registry_snapshot, revocation_snapshots, clock);
  } catch (const Error&) {
    return false;
  }
  if (!report.accepted) return false;

  for (const PresentedCredential& pc : presentation.credentials) {
    if (pc.core.schema != "compliance") continue;
    auto claims_it = report.disclosed.find(pc.core.id);
    if (claims_it == report.disclosed.end()) continue;
    const auto& claims = claims_it->second;

    if (disclosed_text(claims, "regulation_id") != std::optional<std::string>(regulation_id)) {
      continue;
    }
    if (disclosed_text(claims, "verdict") != std::optional<std::string>("pass")) continue;

    auto valid_from = claims.find("valid_from");
    auto valid_to = claims.find("valid_to");
    auto leaf_index = claims.find("leaf_index");
    auto log_id = claims.find("log_id");
    if (valid_from == claims.end() || valid_to == claims.end() || leaf_index == claims.end() ||
        log_id == claims.end()) {
      continue;
    }
    if (!std::holds_alternative<std::int64_t>(valid_from->second) ||
        !std::holds_alternative<std::int64_t>(valid_to->second) ||
        !std::holds_alternative<std::int64_t>(leaf_index->second)) {
      continue;
    }
    if (clock < std::get<std::int64_t>(valid_from->second) ||
        clock > std::get<std::int64_t>(valid_to->second)) {
      continue;
    }

    // The referenced audit record must be proven present in the log.
    AuditRecord record;
    try {
      record = AuditRecord::from_json(parse_json(string_of(log_evidence.leaf)));
    } catch (const Error&) {
      continue;
    }
    if (record.regulation_id != regulation_id || record.verdict != "pass") continue;
    if (record.provider != pc.core.subject.str()) continue;
    if (record.auditor != pc.core.issuer.str()) continue;
    if (record.log_id != canonical_claim_value(log_id->second)) continue;
    if (record.leaf_index != std::get<std::int64_t>(leaf_index->second)) continue;
    if (record.leaf_index != static_cast<std::int64_t>(log_evidence.proof.leaf_index)) continue;

    if (!signed_root_trusted(log_evidence.signed_root, anchors, registry_snapshot)) continue;
    if (!verify_inclusion(log_evidence.leaf, log_evidence.proof, log_evidence.signed_root)) {
      continue;
    }
    return true;
  }
  return false;
}

Json ArtifactAttestation::to_json() const {
  return Json{{"bundle", bundle.to_json()},
              {"credential", credential.to_json()},
              {"leaf_index", leaf_index},
              {"log_id", log_id}};
}

ArtifactAttestation ArtifactAttestation::from_json(const Json& j) {
  require_keys(j, {"bundle", "credential", "leaf_index", "log_id"}, Errc::parse_error);
  ArtifactAttestation a;
  a.credential = Credential::from_json(j.at("credential"));
  a.bundle = DisclosureBundle::from_json(j.at("bundle"));
  a.log_id = get_string(j, "log_id", Errc::parse_error);
  a.leaf_index = get_int(j, "leaf_index", Errc::parse_error);
  return a;
}

ArtifactAttestation attest_artifact(const KeyPair& publisher_keys, const Did& publisher,
                                    const Bytes& artifact, const std::string& kind,
                                    const std::map<std::string, std::string>& properties,
                                    MerkleLog& log, const std::string& log_id, Registry& registry,
                                    SimTime clock, DeterministicRng& rng) {
  std::optional<DidDocument> publisher_doc = registry.find(publisher);
  if (!publisher_doc) {
    throw Error(Errc::unknown_publisher, publisher.str() + " is not registered");
  }

  Hash32 digest = sha256(artifact);
  std::string label = "artifact:" + to_hex(digest);

  // The artifact itself gets a passive DID under the publisher's control;
  // re-attesting the same bytes reuses it.
  Bytes material = from_hex(publisher.id);
  Bytes label_bytes = bytes_of(label);
  material.insert(material.end(), label_bytes.begin(), label_bytes.end());
  Did artifact_did = Did::from_digest(sha256(material));
  if (!registry.find(artifact_did)) {
    create_passive_did(publisher, publisher_keys, label, registry);
  }

  ClaimSet claims;
  claims.set("artifact_digest", to_hex(digest));
  claims.set("artifact_kind", kind);
  for (const auto& [k, v] : properties) claims.set(k, v);

  Issued issued = issue(publisher_keys, publisher, artifact_did, claims, "artifact", {}, registry,
                        clock, rng);

  ArtifactAttestation attestation;
  attestation.credential = issued.credential;
  attestation.bundle = issued.bundle;
  attestation.log_id = log_id;
  attestation.leaf_index = static_cast<std::int64_t>(log.size());
  log.append(bytes_of(to_canonical(issued.credential.to_json())));
  return attestation;
}

bool verify_artifact(const Bytes& artifact, const ArtifactAttestation& attestation,
                     const TrustAnchorSet& anchors, const RegistrySnapshot& registry_snapshot,
                     const LogEvidence& log_evidence) {
  const Credential& credential = attestation.credential;
  if (credential.schema != "artifact") return false;
  if (!anchors.accepts("artifact", credential.issuer)) return false;
  if (!verify_credential(credential, attestation.bundle, registry_snapshot)) return false;

  auto digest_claim = attestation.bundle.entries.find("artifact_digest");
  if (digest_claim == attestation.bundle.entries.end()) return false;
  if (canonical_claim_value(digest_claim->second.first) != to_hex(sha256(artifact))) return false;

  // Inclusion of this exact credential in the trusted log.
  if (log_evidence.leaf != bytes_of(to_canonical(credential.to_json()))) return false;
  if (static_cast<std::int64_t>(log_evidence.proof.leaf_index) != attestation.leaf_index) {
    return false;
  }
  if (!signed_root_trusted(log_evidence.signed_root, anchors, registry_snapshot)) return false;
  return verify_inclusion(log_evidence.leaf, log_evidence.proof, log_evidence.signed_root);
}

Regulation regulation_data_consent(const Did& authority) {
  Regulation r;
  r.id = "reg-data-consent";
  r.description = "every collected record is covered by recorded user consent";
  r.authority = authority;
  r.conditions = {
      {"present", "consent_audit", "", Json(nullptr)},
      {"ge", "consent_audit", "records_total", Json(1)},
      {"eq", "consent_audit", "uncovered_records", Json(0)},
  };
  return r;
}

Regulation regulation_model_bias(const Did& authority) {
  Regulation r;
  r.id = "reg-model-bias";
  r.description = "true-positive-rate gap between groups stays within 0.10";
  r.authority = authority;
  r.conditions = {
      {"present", "bias_eval", "", Json(nullptr)},
      {"tpr_gap_le", "bias_eval", "", Json(10)},
  };
  return r;
}

Regulation regulation_supply_chain(const Did& authority) {
  Regulation r;
  r.id = "reg-supply-chain";
  r.description = "every source component carries a verified artifact attestation";
  r.authority = authority;
  r.conditions = {
      {"present", "sbom", "", Json(nullptr)},
      {"ge", "sbom", "components_total", Json(1)},
      {"eq", "sbom", "unattested_components", Json(0)},
  };
  return r;
}

}  // namespace dtrust
