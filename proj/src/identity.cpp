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

#include "dtrust/identity.hpp"

#include <algorithm>

namespace dtrust {

namespace fs = std::filesystem;

namespace {

bool is_hex64(std::string_view s) {
  if (s.size() != 64) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

void check(bool ok, const std::string& rule) {
  if (!ok) throw Error(Errc::invalid_document, rule);
}

}  // namespace

Did Did::parse(std::string_view rendered) {
  constexpr std::string_view prefix = "did:sim:";
  if (rendered.substr(0, prefix.size()) != prefix || !is_hex64(rendered.substr(prefix.size()))) {
    throw Error(Errc::parse_error,
                "DID must match did:sim:<64 lowercase hex>, got '" + std::string(rendered) + "'");
  }
  return Did{std::string(rendered.substr(prefix.size()))};
}

Json KeyEvent::body_json() const {
  Json j{{"seq", seq}, {"signer", to_hex(signer)}, {"type", type}};
  if (type == "rotation") {
    j["key"] = to_hex(key);
    j["prev"] = to_hex(prev);
  } else if (type == "passive_inception") {
    j["controller"] = controller;
    j["label"] = label;
  } else {
    j["key"] = to_hex(key);
  }
  return j;
}

Json KeyEvent::to_json() const {
  Json j = body_json();
  j["signature"] = to_hex(signature);
  return j;
}

KeyEvent KeyEvent::from_json(const Json& j) {
  KeyEvent e;
  e.type = get_string(j, "type", Errc::parse_error);
  e.seq = get_int(j, "seq", Errc::parse_error);
  e.signer = get_hex(j, "signer", Errc::parse_error);
  e.signature = get_hex(j, "signature", Errc::parse_error);
  if (e.type == "rotation") {
    require_keys(j, {"key", "prev", "seq", "signature", "signer", "type"}, Errc::parse_error);
    e.key = get_hex(j, "key", Errc::parse_error);
    e.prev = get_hex(j, "prev", Errc::parse_error);
  } else if (e.type == "passive_inception") {
    require_keys(j, {"controller", "label", "seq", "signature", "signer", "type"},
                 Errc::parse_error);
    e.controller = get_string(j, "controller", Errc::parse_error);
    e.label = get_string(j, "label", Errc::parse_error);
  } else if (e.type == "inception") {
    require_keys(j, {"key", "seq", "signature", "signer", "type"}, Errc::parse_error);
    e.key = get_hex(j, "key", Errc::parse_error);
  } else {
    throw Error(Errc::parse_error, "unknown key event type '" + e.type + "'");
  }
  return e;
}

Json DidDocument::to_json() const {
  Json events_json = Json::array();
  for (const KeyEvent& e : events) events_json.push_back(e.to_json());
  return Json{{"controller", controller.str()}, {"did", did.str()},
              {"events", events_json},          {"key", to_hex(active_key)},
              {"passive", passive},             {"version", version}};
}

DidDocument DidDocument::from_json(const Json& j) {
  require_keys(j, {"controller", "did", "events", "key", "passive", "version"}, Errc::parse_error);
  DidDocument doc;
  doc.did = Did::parse(get_string(j, "did", Errc::parse_error));
  doc.controller = Did::parse(get_string(j, "controller", Errc::parse_error));
  doc.active_key = get_hex(j, "key", Errc::parse_error);
  doc.passive = get_bool(j, "passive", Errc::parse_error);
  doc.version = get_int(j, "version", Errc::parse_error);
  const Json& events = j.at("events");
  if (!events.is_array()) throw Error(Errc::parse_error, "events must be an array");
  for (const Json& e : events) doc.events.push_back(KeyEvent::from_json(e));
  return doc;
}

Bytes DidDocument::key_at_version(std::int64_t v) const {
  if (v < 1 || v > version || static_cast<std::size_t>(v) > events.size()) {
    throw Error(Errc::not_found, "no such document version");
  }
  return events[static_cast<std::size_t>(v) - 1].key;
}

void validate_document(const DidDocument& doc) {
  check(!doc.events.empty(), "document has no key events");
  const KeyEvent& inception = doc.events.front();
  check(inception.seq == 0, "inception event must have seq 0");

  std::int64_t rotations = 0;
  for (std::size_t i = 0; i < doc.events.size(); ++i) {
    const KeyEvent& e = doc.events[i];
    check(e.seq == static_cast<std::int64_t>(i), "event sequence numbers must be contiguous");
    check(verify(e.signer, to_canonical(e.body_json()), e.signature),
          "event signature does not verify under its signer key");
    if (i == 0) continue;
    check(e.type == "rotation", "only rotation events may follow inception");
    const KeyEvent& prior = doc.events[i - 1];
    check(e.prev == prior.key, "rotation must name the outgoing key");
    check(e.signer == prior.key, "rotation must be signed by the previously active key");
    ++rotations;
  }

  check(doc.version == 1 + rotations, "version must equal 1 + number of rotations");

  if (doc.passive) {
    check(inception.type == "passive_inception", "passive document needs a passive inception");
    check(doc.active_key.empty(), "passive documents carry no active key");
    check(rotations == 0, "passive documents have no rotations");
    check(inception.controller == doc.controller.str(),
          "inception controller must match document controller");
    check(doc.controller.str() != doc.did.str(), "passive document cannot control itself");
    Bytes material = from_hex(doc.controller.id);
    Bytes label = bytes_of(inception.label);
    material.insert(material.end(), label.begin(), label.end());
    check(Did::from_digest(sha256(material)) == doc.did,
          "passive id must be the digest of controller id and asset label");
  } else {
    check(inception.type == "inception", "active document needs an inception event");
    check(inception.signer == inception.key, "inception must be self-signed");
    check(Did::from_digest(sha256(inception.key)) == doc.did,
          "id must be the SHA-256 digest of the inception public key");
    check(doc.active_key == doc.events.back().key,
          "active key must match the latest key event");
  }
}

std::optional<DidDocument> MemoryRegistry::find(const Did& did) const {
  std::shared_lock lock(mu_);
  auto it = docs_.find(did.str());
  if (it == docs_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Shared append-only rules for both registry backends.
void check_append_only(const std::optional<DidDocument>& existing, const DidDocument& doc) {
  validate_document(doc);
  if (!existing) {
    if (doc.version != 1) {
      throw Error(Errc::invalid_document, "first registration must be version 1");
    }
    return;
  }
  if (doc.version != existing->version + 1) {
    throw Error(Errc::invalid_document, "registry writes are append-only per DID");
  }
  for (std::size_t i = 0; i < existing->events.size(); ++i) {
    if (to_canonical(doc.events[i].to_json()) != to_canonical(existing->events[i].to_json())) {
      throw Error(Errc::invalid_document, "update must extend the existing event chain");
    }
  }
}

}  // namespace

void MemoryRegistry::put(const DidDocument& doc) {
  std::unique_lock lock(mu_);
  auto it = docs_.find(doc.did.str());
  std::optional<DidDocument> existing;
  if (it != docs_.end()) existing = it->second;
  check_append_only(existing, doc);
  docs_.insert_or_assign(doc.did.str(), doc);
}

std::vector<Did> MemoryRegistry::list() const {
  std::shared_lock lock(mu_);
  std::vector<Did> out;
  for (const auto& [k, v] : docs_) out.push_back(v.did);
  return out;
}

FileRegistry::FileRegistry(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_);
}

std::optional<DidDocument> FileRegistry::find(const Did& did) const {
  std::lock_guard lock(mu_);
  fs::path file = dir_ / (did.id + ".json");
  if (!fs::exists(file)) return std::nullopt;
  return DidDocument::from_json(parse_json(read_file(file.string())));
}

void FileRegistry::put(const DidDocument& doc) {
  std::lock_guard lock(mu_);
  fs::path file = dir_ / (doc.did.id + ".json");
  std::optional<DidDocument> existing;
  if (fs::exists(file)) {
    existing = DidDocument::from_json(parse_json(read_file(file.string())));
  }
  check_append_only(existing, doc);
  write_file(file.string(), doc.canonical());
}

std::vector<Did> FileRegistry::list() const {
  std::lock_guard lock(mu_);
  std::vector<Did> out;
  if (!fs::exists(dir_)) return out;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (entry.path().extension() == ".json") {
      out.push_back(Did{entry.path().stem().string()});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

RegistrySnapshot snapshot(const Registry& registry) {
  RegistrySnapshot snap;
  for (const Did& did : registry.list()) {
    if (auto doc = registry.find(did)) snap.emplace(did.str(), *doc);
  }
  return snap;
}

std::tuple<Did, KeyPair, DidDocument> generate_did(const Bytes& seed) {
  KeyPair keys = keypair_from_seed(seed);
  Did did = Did::from_digest(sha256(keys.public_key));

  KeyEvent inception;
  inception.type = "inception";
  inception.seq = 0;
  inception.key = keys.public_key;
  inception.signer = keys.public_key;
  inception.signature = sign(keys.secret_key, to_canonical(inception.body_json()));

  DidDocument doc;
  doc.did = did;
  doc.active_key = keys.public_key;
  doc.controller = did;
  doc.version = 1;
  doc.passive = false;
  doc.events.push_back(std::move(inception));
  return {did, keys, doc};
}

std::pair<Did, DidDocument> create_passive_did(const Did& controller,
                                               const KeyPair& controller_keys,
                                               const std::string& asset_label,
                                               Registry& registry) {
  std::optional<DidDocument> ctrl = registry.find(controller);
  if (!ctrl) {
    throw Error(Errc::unknown_controller, "controller " + controller.str() + " is not registered");
  }
  if (ctrl->passive) {
    throw Error(Errc::controller_is_passive, "a passive DID cannot control assets");
  }
  if (ctrl->active_key != controller_keys.public_key) {
    throw Error(Errc::unauthorized, "keys do not match the controller's active key");
  }

  Bytes material = from_hex(controller.id);
  Bytes label = bytes_of(asset_label);
  material.insert(material.end(), label.begin(), label.end());
  Did did = Did::from_digest(sha256(material));

  KeyEvent inception;
  inception.type = "passive_inception";
  inception.seq = 0;
  inception.controller = controller.str();
  inception.label = asset_label;
  inception.signer = controller_keys.public_key;
  inception.signature = sign(controller_keys.secret_key, to_canonical(inception.body_json()));

  DidDocument doc;
  doc.did = did;
  doc.controller = controller;
  doc.version = 1;
  doc.passive = true;
  doc.events.push_back(std::move(inception));
  registry.put(doc);
  return {did, doc};
}

DidDocument resolve(const Did& did, const Registry& registry) {
  std::optional<DidDocument> doc = registry.find(did);
  if (!doc) {
    throw Error(Errc::not_found, did.str() + " is not registered");
  }
  validate_document(*doc);
  return *doc;
}

DidDocument rotate_key(const Did& did, const KeyPair& current_keys, const Bytes& new_public_key,
                       Registry& registry) {
  DidDocument doc = resolve(did, registry);
  if (doc.passive) {
    throw Error(Errc::unauthorized, "passive documents have no keys to rotate");
  }
  if (doc.active_key != current_keys.public_key) {
    throw Error(Errc::unauthorized, "signer is not the active key");
  }
  if (new_public_key.size() != kPublicKeyLen) {
    throw Error(Errc::malformed_key, "new public key must be 32 bytes");
  }

  KeyEvent rotation;
  rotation.type = "rotation";
  rotation.seq = static_cast<std::int64_t>(doc.events.size());
  rotation.key = new_public_key;
  rotation.prev = doc.active_key;
  rotation.signer = current_keys.public_key;
  rotation.signature = sign(current_keys.secret_key, to_canonical(rotation.body_json()));

  doc.events.push_back(std::move(rotation));
  doc.active_key = new_public_key;
  doc.version += 1;
  registry.put(doc);
  return doc;
}

}  // namespace dtrust
