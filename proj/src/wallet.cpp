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

#include "dtrust/wallet.hpp"

#include <algorithm>

namespace dtrust {

Json PresentedCredential::to_json() const {
  Json disclosed_json = Json::array();
  for (const DisclosedClaim& d : disclosed) {
    Json path = Json::array();
    for (const Hash32& h : d.path) path.push_back(to_hex(h));
    disclosed_json.push_back(Json{{"index", d.index},
                                  {"name", d.name},
                                  {"path", path},
                                  {"salt", to_hex(d.salt)},
                                  {"value", claim_value_to_json(d.value)}});
  }
  Json withheld_json = Json::array();
  for (const WithheldLeaf& w : withheld) {
    withheld_json.push_back(Json{{"commitment", to_hex(w.commitment)}, {"index", w.index}});
  }
  return Json{{"core", core.to_json()},
              {"disclosed", disclosed_json},
              {"leaf_count", leaf_count},
              {"withheld", withheld_json}};
}

PresentedCredential PresentedCredential::from_json(const Json& j) {
  require_keys(j, {"core", "disclosed", "leaf_count", "withheld"}, Errc::malformed_presentation);
  PresentedCredential pc;
  try {
    pc.core = Credential::from_json(get_field(j, "core", Errc::malformed_presentation));
  } catch (const Error& e) {
    if (e.code() == Errc::parse_error) {
      throw Error(Errc::malformed_presentation, "credential core is malformed");
    }
    throw;
  }
  pc.leaf_count = get_int(j, "leaf_count", Errc::malformed_presentation);
  const Json& disclosed = j.at("disclosed");
  const Json& withheld = j.at("withheld");
  if (!disclosed.is_array() || !withheld.is_array()) {
    throw Error(Errc::malformed_presentation, "disclosed/withheld must be arrays");
  }
  for (const Json& d : disclosed) {
    require_keys(d, {"index", "name", "path", "salt", "value"}, Errc::malformed_presentation);
    DisclosedClaim dc;
    dc.index = get_int(d, "index", Errc::malformed_presentation);
    dc.name = get_string(d, "name", Errc::malformed_presentation);
    dc.value = claim_value_from_json(d.at("value"), Errc::malformed_presentation);
    dc.salt = get_hex(d, "salt", Errc::malformed_presentation);
    const Json& path = d.at("path");
    if (!path.is_array()) throw Error(Errc::malformed_presentation, "path must be an array");
    for (const Json& h : path) {
      if (!h.is_string()) throw Error(Errc::malformed_presentation, "path entry must be hex");
      try {
        dc.path.push_back(hash32_from_hex(h.get<std::string>()));
      } catch (const Error&) {
        throw Error(Errc::malformed_presentation, "path entry is not a canonical digest");
      }
    }
    pc.disclosed.push_back(std::move(dc));
  }
  for (const Json& w : withheld) {
    require_keys(w, {"commitment", "index"}, Errc::malformed_presentation);
    WithheldLeaf wl;
    wl.index = get_int(w, "index", Errc::malformed_presentation);
    wl.commitment = get_hash(w, "commitment", Errc::malformed_presentation);
    pc.withheld.push_back(wl);
  }
  return pc;
}

Json Presentation::body_json() const {
  Json creds = Json::array();
  for (const PresentedCredential& pc : credentials) creds.push_back(pc.to_json());
  return Json{{"challenge", to_hex(challenge)},
              {"credentials", creds},
              {"holder", holder.str()},
              {"holder_doc_version", holder_doc_version}};
}

Json Presentation::to_json() const {
  Json j = body_json();
  j["holder_signature"] = to_hex(holder_signature);
  return j;
}

Presentation Presentation::from_json(const Json& j) {
  require_keys(j, {"challenge", "credentials", "holder", "holder_doc_version", "holder_signature"},
               Errc::malformed_presentation);
  Presentation p;
  try {
    p.challenge = get_hex(j, "challenge", Errc::malformed_presentation);
    p.holder = Did::parse(get_string(j, "holder", Errc::malformed_presentation));
  } catch (const Error& e) {
    if (e.code() == Errc::parse_error) {
      throw Error(Errc::malformed_presentation, "holder DID is malformed");
    }
    throw;
  }
  p.holder_doc_version = get_int(j, "holder_doc_version", Errc::malformed_presentation);
  p.holder_signature = get_hex(j, "holder_signature", Errc::malformed_presentation);
  const Json& creds = j.at("credentials");
  if (!creds.is_array()) {
    throw Error(Errc::malformed_presentation, "credentials must be an array");
  }
  for (const Json& c : creds) p.credentials.push_back(PresentedCredential::from_json(c));
  return p;
}

std::vector<std::string> Presentation::disclosed_claim_names() const {
  std::vector<std::string> names;
  for (const PresentedCredential& pc : credentials) {
    for (const DisclosedClaim& d : pc.disclosed) names.push_back(d.name);
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

Json PresentationRequest::to_json() const {
  Json items_json = Json::array();
  for (const PresentationRequestItem& item : items) {
    Json claims = Json::array();
    for (const std::string& c : item.claims) claims.push_back(c);
    items_json.push_back(Json{{"claims", claims}, {"schema", item.schema}});
  }
  return Json{{"challenge", to_hex(challenge)}, {"items", items_json}};
}

PresentationRequest PresentationRequest::from_json(const Json& j) {
  require_keys(j, {"challenge", "items"}, Errc::parse_error);
  PresentationRequest r;
  r.challenge = get_hex(j, "challenge", Errc::parse_error);
  const Json& items = j.at("items");
  if (!items.is_array()) throw Error(Errc::parse_error, "items must be an array");
  for (const Json& item : items) {
    require_keys(item, {"claims", "schema"}, Errc::parse_error);
    PresentationRequestItem out;
    out.schema = get_string(item, "schema", Errc::parse_error);
    for (const Json& c : item.at("claims")) {
      if (!c.is_string()) throw Error(Errc::parse_error, "claim names must be strings");
      out.claims.push_back(c.get<std::string>());
    }
    r.items.push_back(std::move(out));
  }
  return r;
}

void Wallet::store(const Credential& credential, const DisclosureBundle& bundle,
                   const RegistrySnapshot& snapshot) {
  if (!verify_credential(credential, bundle, snapshot)) {
    throw Error(Errc::invalid_credential, "credential does not verify against its bundle");
  }
  bool owned = credential.subject == owner_;
  if (!owned) {
    // A passive subject qualifies when the owner is its controller.
    auto it = snapshot.find(credential.subject.str());
    owned = it != snapshot.end() && it->second.passive && it->second.controller == owner_;
  }
  if (!owned) {
    throw Error(Errc::subject_mismatch,
                "credential subject " + credential.subject.str() + " is not held by this wallet");
  }
  credentials_.insert_or_assign(credential.id, Stored{credential, bundle});
}

std::vector<std::string> Wallet::list_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, stored] : credentials_) ids.push_back(id);
  return ids;
}

const Credential& Wallet::credential(const std::string& id) const {
  auto it = credentials_.find(id);
  if (it == credentials_.end()) throw Error(Errc::not_found, "no credential " + id);
  return it->second.credential;
}

const DisclosureBundle& Wallet::bundle(const std::string& id) const {
  auto it = credentials_.find(id);
  if (it == credentials_.end()) throw Error(Errc::not_found, "no credential " + id);
  return it->second.bundle;
}

void Wallet::define_persona(const std::string& label, std::vector<PersonaTemplate> templates) {
  for (const PersonaTemplate& t : templates) {
    if (credentials_.find(t.credential_id) == credentials_.end()) {
      throw Error(Errc::not_found,
                  "persona references credential " + t.credential_id + " not in this wallet");
    }
  }
  personas_.insert_or_assign(label, Identity{label, std::move(templates)});
}

Identity Wallet::compose_identity(const std::string& label) const {
  auto it = personas_.find(label);
  if (it == personas_.end()) {
    throw Error(Errc::unknown_persona, "no persona named '" + label + "'");
  }
  return it->second;
}

PresentedCredential Wallet::present_credential(const Stored& stored,
                                               const std::vector<std::string>& claims) const {
  std::vector<SaltedCommitment> commitments = stored.bundle.commitments();
  std::sort(commitments.begin(), commitments.end(),
            [](const SaltedCommitment& a, const SaltedCommitment& b) {
              return a.claim_name < b.claim_name;
            });
  std::vector<Hash32> leaf_hashes;
  leaf_hashes.reserve(commitments.size());
  for (const SaltedCommitment& c : commitments) {
    leaf_hashes.push_back(leaf_hash(to_bytes(c.commitment)));
  }

  std::set<std::string> wanted(claims.begin(), claims.end());
  PresentedCredential pc;
  pc.core = stored.credential;
  pc.leaf_count = static_cast<std::int64_t>(commitments.size());
  for (std::size_t i = 0; i < commitments.size(); ++i) {
    const SaltedCommitment& c = commitments[i];
    if (wanted.count(c.claim_name) > 0) {
      DisclosedClaim d;
      d.index = static_cast<std::int64_t>(i);
      d.name = c.claim_name;
      d.value = stored.bundle.entries.at(c.claim_name).first;
      d.salt = c.salt;
      d.path = merkle_inclusion_path(leaf_hashes, i);
      pc.disclosed.push_back(std::move(d));
    } else {
      pc.withheld.push_back(WithheldLeaf{static_cast<std::int64_t>(i), c.commitment});
    }
  }
  return pc;
}

const Wallet::Stored& Wallet::pick_credential(const PresentationRequestItem& item,
                                              SimTime clock) const {
  const Stored* best = nullptr;
  bool found_expired = false;
  for (const auto& [id, stored] : credentials_) {
    if (stored.credential.schema != item.schema) continue;
    bool has_all = std::all_of(item.claims.begin(), item.claims.end(), [&](const std::string& c) {
      return stored.bundle.entries.count(c) > 0;
    });
    if (!has_all) continue;
    if (stored.credential.expires_at && *stored.credential.expires_at < clock) {
      found_expired = true;
      continue;
    }
    // Ties break toward the newest issuance, then lexicographic id.
    if (best == nullptr || stored.credential.issued_at > best->credential.issued_at ||
        (stored.credential.issued_at == best->credential.issued_at &&
         stored.credential.id > best->credential.id)) {
      best = &stored;
    }
  }
  if (best == nullptr) {
    if (found_expired) {
      throw Error(Errc::expired, "only expired credentials satisfy schema '" + item.schema + "'");
    }
    throw Error(Errc::unsatisfiable_request,
                "no stored credential satisfies schema '" + item.schema + "'");
  }
  return *best;
}

Presentation Wallet::build_presentation(const PresentationRequest& request, SimTime clock) const {
  Presentation p;
  p.challenge = request.challenge;
  p.holder = owner_;
  p.holder_doc_version = 1;
  for (const PresentationRequestItem& item : request.items) {
    const Stored& stored = pick_credential(item, clock);
    p.credentials.push_back(present_credential(stored, item.claims));
  }
  p.holder_signature = sign(keys_.secret_key, to_canonical(p.body_json()));
  return p;
}

Presentation Wallet::present_identity(const Identity& identity, const Bytes& challenge,
                                      SimTime clock) const {
  Presentation p;
  p.challenge = challenge;
  p.holder = owner_;
  p.holder_doc_version = 1;
  for (const PersonaTemplate& t : identity.templates) {
    auto it = credentials_.find(t.credential_id);
    if (it == credentials_.end()) {
      throw Error(Errc::not_found, "persona references missing credential " + t.credential_id);
    }
    if (it->second.credential.expires_at && *it->second.credential.expires_at < clock) {
      throw Error(Errc::expired, "credential " + t.credential_id + " expired");
    }
    p.credentials.push_back(present_credential(it->second, t.claims));
  }
  p.holder_signature = sign(keys_.secret_key, to_canonical(p.body_json()));
  return p;
}

void Wallet::save(const std::string& path, const std::string& secret_path) const {
  Json creds = Json::array();
  Json bundles = Json::object();
  for (const auto& [id, stored] : credentials_) {
    creds.push_back(stored.credential.to_json());
    bundles[id] = stored.bundle.to_json();
  }
  Json personas = Json::object();
  for (const auto& [label, identity] : personas_) {
    Json templates = Json::array();
    for (const PersonaTemplate& t : identity.templates) {
      Json claims = Json::array();
      for (const std::string& c : t.claims) claims.push_back(c);
      templates.push_back(Json{{"claims", claims}, {"credential_id", t.credential_id}});
    }
    personas[label] = templates;
  }
  Json pub{{"credentials", creds},
           {"owner", owner_.str()},
           {"personas", personas},
           {"public_key", to_hex(keys_.public_key)}};
  write_file(path, to_canonical(pub));

  Json secret{{"bundles", bundles}, {"secret_key", to_hex(keys_.secret_key)}};
  write_file_private(secret_path, to_canonical(secret));
}

Wallet Wallet::load(const std::string& path, const std::string& secret_path) {
  Json pub = parse_json(read_file(path));
  require_keys(pub, {"credentials", "owner", "personas", "public_key"}, Errc::parse_error);
  Json secret = parse_json(read_file(secret_path));
  require_keys(secret, {"bundles", "secret_key"}, Errc::parse_error);

  KeyPair keys;
  keys.public_key = get_hex(pub, "public_key", Errc::parse_error);
  keys.secret_key = get_hex(secret, "secret_key", Errc::parse_error);
  Wallet w(Did::parse(get_string(pub, "owner", Errc::parse_error)), keys);

  const Json& bundles = secret.at("bundles");
  for (const Json& c : pub.at("credentials")) {
    Credential credential = Credential::from_json(c);
    if (!bundles.contains(credential.id)) {
      throw Error(Errc::parse_error, "missing bundle for credential " + credential.id);
    }
    DisclosureBundle bundle = DisclosureBundle::from_json(bundles.at(credential.id));
    w.credentials_.insert_or_assign(credential.id, Stored{credential, bundle});
  }
  for (const auto& [label, templates] : pub.at("personas").items()) {
    std::vector<PersonaTemplate> parsed;
    for (const Json& t : templates) {
      require_keys(t, {"claims", "credential_id"}, Errc::parse_error);
      PersonaTemplate out;
      out.credential_id = get_string(t, "credential_id", Errc::parse_error);
      for (const Json& c : t.at("claims")) out.claims.push_back(c.get<std::string>());
      parsed.push_back(std::move(out));
    }
    w.define_persona(label, std::move(parsed));
  }
  return w;
}

}  // namespace dtrust
