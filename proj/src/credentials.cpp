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

#include "dtrust/credentials.hpp"

#include <algorithm>

namespace dtrust {

namespace {

constexpr std::uint8_t kCommitmentSeparator = 0x1f;

bool valid_claim_name(const std::string& name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '.' || c == '-';
  });
}

std::string sanitize_for_name(const std::string& raw) {
  std::string out;
  for (char c : raw) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      out.push_back(c);
    } else if (c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      out.push_back('_');
    }
  }
  return out;
}

std::optional<SimTime> optional_time_from_json(const Json& j, const char* key) {
  const Json& f = get_field(j, key, Errc::parse_error);
  if (f.is_null()) return std::nullopt;
  if (!f.is_number_integer()) {
    throw Error(Errc::parse_error, std::string("field '") + key + "' must be integer or null");
  }
  return f.get<std::int64_t>();
}

}  // namespace

std::string canonical_claim_value(const ClaimValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, Date>) {
          return render_date(x);
        } else {
          return x ? "true" : "false";
        }
      },
      v);
}

const char* claim_type_name(const ClaimValue& v) {
  switch (v.index()) {
    case 0: return "text";
    case 1: return "int";
    case 2: return "date";
    default: return "bool";
  }
}

Json claim_value_to_json(const ClaimValue& v) {
  return Json{{"type", claim_type_name(v)}, {"value", canonical_claim_value(v)}};
}

ClaimValue claim_value_from_json(const Json& j, Errc code) {
  require_keys(j, {"type", "value"}, code);
  std::string type = get_string(j, "type", code);
  std::string value = get_string(j, "value", code);
  if (type == "text") return value;
  if (type == "date") return parse_date(value);
  if (type == "bool") {
    if (value == "true") return true;
    if (value == "false") return false;
    throw Error(code, "boolean claim must be 'true' or 'false'");
  }
  if (type == "int") {
    try {
      std::size_t used = 0;
      std::int64_t n = std::stoll(value, &used);
      if (used != value.size() || std::to_string(n) != value) {
        throw Error(code, "non-canonical integer claim '" + value + "'");
      }
      return n;
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw Error(code, "non-canonical integer claim '" + value + "'");
    }
  }
  throw Error(code, "unknown claim type '" + type + "'");
}

ClaimSet::ClaimSet(std::map<std::string, ClaimValue> claims) : claims_(std::move(claims)) {}

void ClaimSet::set(const std::string& name, ClaimValue value) {
  claims_.insert_or_assign(name, std::move(value));
}

const ClaimValue& ClaimSet::at(const std::string& name) const {
  auto it = claims_.find(name);
  if (it == claims_.end()) {
    throw Error(Errc::invalid_claims, "no claim named '" + name + "'");
  }
  return it->second;
}

void ClaimSet::validate() const {
  if (claims_.empty()) {
    throw Error(Errc::invalid_claims, "claim set is empty");
  }
  for (const auto& [name, value] : claims_) {
    if (!valid_claim_name(name)) {
      throw Error(Errc::invalid_claims, "malformed claim name '" + name + "'");
    }
  }
}

Hash32 compute_commitment(const Bytes& salt, const std::string& claim_name,
                          const ClaimValue& value) {
  Bytes buf = salt;
  Bytes name = bytes_of(claim_name);
  buf.insert(buf.end(), name.begin(), name.end());
  buf.push_back(kCommitmentSeparator);
  Bytes rendered = bytes_of(canonical_claim_value(value));
  buf.insert(buf.end(), rendered.begin(), rendered.end());
  return sha256(buf);
}

Hash32 commitment_root(std::vector<SaltedCommitment> commitments) {
  if (commitments.empty()) {
    throw Error(Errc::empty, "cannot build a commitment root over zero commitments");
  }
  std::sort(commitments.begin(), commitments.end(),
            [](const SaltedCommitment& a, const SaltedCommitment& b) {
              return a.claim_name < b.claim_name;
            });
  std::vector<Hash32> leaf_hashes;
  leaf_hashes.reserve(commitments.size());
  for (const SaltedCommitment& c : commitments) {
    leaf_hashes.push_back(leaf_hash(to_bytes(c.commitment)));
  }
  return merkle_root(leaf_hashes);
}

Json Credential::core_json() const {
  return Json{{"expires_at", expires_at ? Json(*expires_at) : Json(nullptr)},
              {"id", id},
              {"issued_at", issued_at},
              {"issuer", issuer.str()},
              {"issuer_doc_version", issuer_doc_version},
              {"root", to_hex(root)},
              {"schema", schema},
              {"subject", subject.str()}};
}

Json Credential::to_json() const {
  Json j = core_json();
  j["issuer_signature"] = to_hex(issuer_signature);
  return j;
}

Credential Credential::from_json(const Json& j) {
  require_keys(j,
               {"expires_at", "id", "issued_at", "issuer", "issuer_doc_version", "issuer_signature",
                "root", "schema", "subject"},
               Errc::parse_error);
  Credential c;
  c.id = get_string(j, "id", Errc::parse_error);
  c.issuer = Did::parse(get_string(j, "issuer", Errc::parse_error));
  c.subject = Did::parse(get_string(j, "subject", Errc::parse_error));
  c.schema = get_string(j, "schema", Errc::parse_error);
  c.issued_at = get_int(j, "issued_at", Errc::parse_error);
  c.expires_at = optional_time_from_json(j, "expires_at");
  c.issuer_doc_version = get_int(j, "issuer_doc_version", Errc::parse_error);
  c.root = get_hash(j, "root", Errc::parse_error);
  c.issuer_signature = get_hex(j, "issuer_signature", Errc::parse_error);
  return c;
}

std::vector<SaltedCommitment> DisclosureBundle::commitments() const {
  std::vector<SaltedCommitment> out;
  out.reserve(entries.size());
  for (const auto& [name, entry] : entries) {
    out.push_back({name, entry.second, compute_commitment(entry.second, name, entry.first)});
  }
  return out;
}

Json DisclosureBundle::to_json() const {
  Json claims = Json::object();
  for (const auto& [name, entry] : entries) {
    claims[name] =
        Json{{"salt", to_hex(entry.second)}, {"value", claim_value_to_json(entry.first)}};
  }
  return Json{{"claims", claims}, {"credential_id", credential_id}};
}

DisclosureBundle DisclosureBundle::from_json(const Json& j) {
  require_keys(j, {"claims", "credential_id"}, Errc::parse_error);
  DisclosureBundle b;
  b.credential_id = get_string(j, "credential_id", Errc::parse_error);
  const Json& claims = j.at("claims");
  if (!claims.is_object()) throw Error(Errc::parse_error, "claims must be an object");
  for (const auto& [name, entry] : claims.items()) {
    require_keys(entry, {"salt", "value"}, Errc::parse_error);
    b.entries.emplace(name,
                      std::make_pair(claim_value_from_json(entry.at("value"), Errc::parse_error),
                                     get_hex(entry, "salt", Errc::parse_error)));
  }
  return b;
}

namespace {

ClaimValue evaluate_predicate(const Predicate& p, const ClaimSet& claims, SimTime clock,
                              std::string& derived_name) {
  if (p.kind == "age_over") {
    derived_name = "age_over_" + std::to_string(p.threshold);
    if (!claims.has(p.claim)) {
      throw Error(Errc::predicate_unsatisfiable, "age_over needs a '" + p.claim + "' claim");
    }
    const ClaimValue& v = claims.at(p.claim);
    if (!std::holds_alternative<Date>(v)) {
      throw Error(Errc::predicate_unsatisfiable, "claim '" + p.claim + "' is not a date");
    }
    return age_at_least(std::get<Date>(v), p.threshold, date_at(clock));
  }
  if (p.kind == "value_equals") {
    derived_name = p.claim + "_equals_" + sanitize_for_name(p.expected);
    if (!claims.has(p.claim)) {
      throw Error(Errc::predicate_unsatisfiable, "value_equals needs a '" + p.claim + "' claim");
    }
    return canonical_claim_value(claims.at(p.claim)) == p.expected;
  }
  throw Error(Errc::predicate_unsatisfiable, "unknown predicate kind '" + p.kind + "'");
}

}  // namespace

Issued issue(const KeyPair& issuer_keys, const Did& issuer, const Did& subject,
             const ClaimSet& claims, const std::string& schema, const IssueOptions& options,
             const Registry& registry, SimTime clock, DeterministicRng& rng) {
  claims.validate();
  std::optional<DidDocument> issuer_doc = registry.find(issuer);
  if (!issuer_doc) {
    throw Error(Errc::unknown_issuer, issuer.str() + " is not registered");
  }
  if (issuer_doc->active_key != issuer_keys.public_key) {
    throw Error(Errc::unauthorized, "keys do not match the issuer's active key");
  }

  ClaimSet full = claims;
  for (const Predicate& p : options.predicates) {
    std::string derived_name;
    ClaimValue derived = evaluate_predicate(p, claims, clock, derived_name);
    full.set(derived_name, derived);
  }
  full.validate();

  DisclosureBundle bundle;
  std::set<std::string> used_salts;
  for (const auto& [name, value] : full.claims()) {
    Bytes salt = rng.next_salt();
    while (!used_salts.insert(to_hex(salt)).second) {
      salt = rng.next_salt();
    }
    bundle.entries.emplace(name, std::make_pair(value, salt));
  }

  Credential credential;
  credential.issuer = issuer;
  credential.subject = subject;
  credential.schema = schema;
  credential.issued_at = clock;
  credential.expires_at = options.expires_at;
  credential.issuer_doc_version = issuer_doc->version;
  credential.root = commitment_root(bundle.commitments());

  // The id is content-derived: distinct salt sets give distinct ids.
  Json id_material = credential.core_json();
  id_material.erase("id");
  credential.id = "vc-" + to_hex(canonical_digest(id_material)).substr(0, 32);
  bundle.credential_id = credential.id;

  credential.issuer_signature = sign(issuer_keys.secret_key, to_canonical(credential.core_json()));
  return {std::move(credential), std::move(bundle)};
}

bool verify_credential_signature(const Credential& credential, const RegistrySnapshot& snapshot) {
  auto it = snapshot.find(credential.issuer.str());
  if (it == snapshot.end()) return false;
  Bytes key;
  try {
    key = it->second.key_at_version(credential.issuer_doc_version);
  } catch (const Error&) {
    return false;
  }
  if (key.size() != kPublicKeyLen) return false;
  return verify(key, to_canonical(credential.core_json()), credential.issuer_signature);
}

bool verify_credential(const Credential& credential, const DisclosureBundle& bundle,
                       const RegistrySnapshot& snapshot) {
  if (bundle.credential_id != credential.id) return false;
  if (bundle.entries.empty()) return false;
  if (commitment_root(bundle.commitments()) != credential.root) return false;
  return verify_credential_signature(credential, snapshot);
}

Json RevocationSnapshot::body_json() const {
  Json ids = Json::array();
  for (const std::string& id : revoked) ids.push_back(id);
  return Json{{"as_of", as_of}, {"counter", counter}, {"issuer", issuer.str()}, {"revoked", ids}};
}

Json RevocationSnapshot::to_json() const {
  Json j = body_json();
  j["signature"] = to_hex(signature);
  return j;
}

RevocationSnapshot RevocationSnapshot::from_json(const Json& j) {
  require_keys(j, {"as_of", "counter", "issuer", "revoked", "signature"}, Errc::parse_error);
  RevocationSnapshot s;
  s.issuer = Did::parse(get_string(j, "issuer", Errc::parse_error));
  s.as_of = get_int(j, "as_of", Errc::parse_error);
  s.counter = get_int(j, "counter", Errc::parse_error);
  s.signature = get_hex(j, "signature", Errc::parse_error);
  const Json& ids = j.at("revoked");
  if (!ids.is_array()) throw Error(Errc::parse_error, "revoked must be an array");
  for (const Json& id : ids) {
    if (!id.is_string()) throw Error(Errc::parse_error, "revoked ids must be strings");
    s.revoked.insert(id.get<std::string>());
  }
  return s;
}

void revoke(const KeyPair& issuer_keys, const Registry& registry, const std::string& credential_id,
            RevocationList& list) {
  DidDocument doc = resolve(list.issuer, registry);
  if (doc.active_key != issuer_keys.public_key) {
    throw Error(Errc::unauthorized, "keys do not match the issuer's active key");
  }
  if (list.revoked.insert(credential_id).second) {
    list.counter += 1;
  }
}

bool is_revoked(const std::string& credential_id, const RevocationList& list) {
  return list.revoked.count(credential_id) > 0;
}

bool is_revoked(const std::string& credential_id, const RevocationSnapshot& snapshot) {
  return snapshot.revoked.count(credential_id) > 0;
}

RevocationSnapshot snapshot_revocations(const RevocationList& list, const KeyPair& issuer_keys,
                                        SimTime as_of) {
  RevocationSnapshot s;
  s.issuer = list.issuer;
  s.revoked = list.revoked;
  s.counter = list.counter;
  s.as_of = as_of;
  s.signature = sign(issuer_keys.secret_key, to_canonical(s.body_json()));
  return s;
}

bool verify_revocation_snapshot(const RevocationSnapshot& snapshot,
                                const RegistrySnapshot& registry_snapshot) {
  auto it = registry_snapshot.find(snapshot.issuer.str());
  if (it == registry_snapshot.end()) return false;
  if (it->second.active_key.size() != kPublicKeyLen) return false;
  return verify(it->second.active_key, to_canonical(snapshot.body_json()), snapshot.signature);
}

}  // namespace dtrust
