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

#include <doctest.h>

#include <filesystem>

using namespace dtrust;

namespace {

// SHA-256 of the Ed25519 public key derived from the all-zero seed,
// recomputed with an independent reference script.
constexpr const char* kZeroSeedDid =
    "did:sim:139e3940e64b5491722088d9a0d741628fc826e09475d341a780acde3c4b8070";

// SHA-256(controller id bytes || "diploma-file") for the zero-seed DID.
constexpr const char* kPassiveDiplomaDid =
    "did:sim:65de022694691962f775c3052c2273085bc5f73ed0eb98db64565e1ef82fe69e";

// Independent event-chain replay: recompute the id from the inception key
// and walk every rotation, verifying each signature under the key that was
// active immediately before it.
bool replay_chain(const DidDocument& doc) {
  if (doc.events.empty()) return false;
  if (!doc.passive) {
    if (to_hex(sha256(doc.events[0].key)) != doc.did.id) return false;
  }
  Bytes active = doc.events[0].key;
  for (std::size_t i = 0; i < doc.events.size(); ++i) {
    const KeyEvent& e = doc.events[i];
    Bytes expected_signer = i == 0 ? e.signer : active;
    if (!verify(expected_signer, to_canonical(e.body_json()), e.signature)) return false;
    active = e.key;
  }
  return doc.active_key == active;
}

}  // namespace

TEST_CASE("generate_did is a pure function of its seed") {
  auto [did_a, keys_a, doc_a] = generate_did(Bytes(32, 0x00));
  auto [did_b, keys_b, doc_b] = generate_did(Bytes(32, 0x00));
  CHECK(did_a.str() == kZeroSeedDid);
  CHECK(did_a == did_b);
  CHECK(doc_a.canonical() == doc_b.canonical());

  Bytes tweaked(32, 0x00);
  tweaked[31] = 0x01;
  auto [did_c, keys_c, doc_c] = generate_did(tweaked);
  CHECK(did_a != did_c);
}

TEST_CASE("inception documents default to self-control at version 1") {
  auto [did, keys, doc] = generate_did(Bytes(32, 0x05));
  CHECK(doc.controller == did);
  CHECK(doc.version == 1);
  CHECK_FALSE(doc.passive);
  CHECK(doc.active_key == keys.public_key);
  validate_document(doc);
}

TEST_CASE("seed length violations are rejected") {
  CHECK_THROWS_AS(generate_did(Bytes(16, 0)), Error);
}

TEST_CASE("register and resolve round-trip") {
  MemoryRegistry reg;
  auto [did, keys, doc] = generate_did(Bytes(32, 0x21));
  reg.put(doc);
  DidDocument resolved = resolve(did, reg);
  CHECK(resolved.active_key == keys.public_key);
  CHECK(resolved.version == 1);
}

TEST_CASE("resolving an unregistered DID fails with NotFound") {
  MemoryRegistry reg;
  auto [did, keys, doc] = generate_did(Bytes(32, 0x22));
  CHECK_THROWS_AS(resolve(did, reg), Error);
  try {
    resolve(did, reg);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_found);
  }
}

TEST_CASE("rotation advances the version and retires the old key") {
  MemoryRegistry reg;
  auto [did, keys, doc] = generate_did(Bytes(32, 0x23));
  reg.put(doc);
  KeyPair next = keypair_from_seed(Bytes(32, 0x24));
  DidDocument v2 = rotate_key(did, keys, next.public_key, reg);
  CHECK(v2.version == 2);
  CHECK(v2.active_key == next.public_key);

  DidDocument resolved = resolve(did, reg);
  CHECK(resolved.version == 2);
  CHECK(resolved.active_key != keys.public_key);

  // A signature by the retired key no longer verifies under the active key.
  Bytes msg = bytes_of("message");
  Bytes old_sig = sign(keys.secret_key, msg);
  CHECK_FALSE(verify(resolved.active_key, msg, old_sig));
}

TEST_CASE("rotating with a non-active key is unauthorized") {
  MemoryRegistry reg;
  auto [did, keys, doc] = generate_did(Bytes(32, 0x25));
  reg.put(doc);
  KeyPair stranger = keypair_from_seed(Bytes(32, 0x26));
  CHECK_THROWS_AS(rotate_key(did, stranger, stranger.public_key, reg), Error);
  try {
    rotate_key(did, stranger, stranger.public_key, reg);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unauthorized);
  }
}

TEST_CASE("a chain of three rotations replays end-to-end") {
  MemoryRegistry reg;
  auto [did, keys, doc] = generate_did(Bytes(32, 0x27));
  reg.put(doc);
  KeyPair current = keys;
  for (std::uint8_t i = 1; i <= 3; ++i) {
    KeyPair next = keypair_from_seed(Bytes(32, static_cast<std::uint8_t>(0x30 + i)));
    rotate_key(did, current, next.public_key, reg);
    current = next;
  }
  DidDocument final_doc = resolve(did, reg);
  CHECK(final_doc.version == 4);
  CHECK(final_doc.events.size() == 4);
  CHECK(replay_chain(final_doc));
  CHECK(final_doc.key_at_version(1) == keys.public_key);
  CHECK(final_doc.key_at_version(4) == current.public_key);
}

TEST_CASE("a tampered event chain is rejected at resolve time") {
  MemoryRegistry reg;
  auto [did, keys, doc] = generate_did(Bytes(32, 0x28));
  reg.put(doc);
  KeyPair next = keypair_from_seed(Bytes(32, 0x29));
  rotate_key(did, keys, next.public_key, reg);

  // Corrupt the rotation signature behind the registry's back.
  MemoryRegistry dirty;
  DidDocument bad = resolve(did, reg);
  bad.events[1].signature[0] ^= 0x01;
  CHECK_THROWS_AS(validate_document(bad), Error);
  CHECK_THROWS_AS(dirty.put(bad), Error);
}

TEST_CASE("passive DIDs are controlled by an active DID") {
  MemoryRegistry reg;
  auto [owner, keys, doc] = generate_did(Bytes(32, 0x00));
  reg.put(doc);
  auto [asset, asset_doc] = create_passive_did(owner, keys, "diploma-file", reg);
  CHECK(asset.str() == kPassiveDiplomaDid);
  CHECK(asset_doc.passive);
  CHECK(asset_doc.controller == owner);
  CHECK(asset_doc.active_key.empty());
  CHECK(resolve(asset, reg).version == 1);
}

TEST_CASE("distinct asset labels give distinct passive DIDs") {
  MemoryRegistry reg;
  auto [owner, keys, doc] = generate_did(Bytes(32, 0x31));
  reg.put(doc);
  auto [a, doc_a] = create_passive_did(owner, keys, "asset-one", reg);
  auto [b, doc_b] = create_passive_did(owner, keys, "asset-two", reg);
  CHECK(a != b);

  // Digest recomputation oracle.
  Bytes material = from_hex(owner.id);
  Bytes label = bytes_of("asset-one");
  material.insert(material.end(), label.begin(), label.end());
  CHECK(a.id == to_hex(sha256(material)));
}

TEST_CASE("passive creation demands a registered, active controller") {
  MemoryRegistry reg;
  auto [ghost, ghost_keys, ghost_doc] = generate_did(Bytes(32, 0x32));
  CHECK_THROWS_AS(create_passive_did(ghost, ghost_keys, "x", reg), Error);

  auto [owner, keys, doc] = generate_did(Bytes(32, 0x33));
  reg.put(doc);
  auto [asset, asset_doc] = create_passive_did(owner, keys, "thing", reg);
  CHECK_THROWS_AS(create_passive_did(asset, keys, "nested", reg), Error);
  try {
    create_passive_did(asset, keys, "nested", reg);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::controller_is_passive);
  }
}

TEST_CASE("registry versions never decrease") {
  MemoryRegistry reg;
  auto [did, keys, doc] = generate_did(Bytes(32, 0x34));
  reg.put(doc);
  CHECK_THROWS_AS(reg.put(doc), Error);  // re-register version 1 over version 1

  KeyPair next = keypair_from_seed(Bytes(32, 0x35));
  DidDocument v2 = rotate_key(did, keys, next.public_key, reg);
  CHECK(resolve(did, reg).version == 2);
  CHECK_THROWS_AS(reg.put(doc), Error);  // stale write rejected
  CHECK(resolve(did, reg).version == 2);
}

TEST_CASE("document canonical serialization round-trips") {
  MemoryRegistry reg;
  auto [did, keys, doc] = generate_did(Bytes(32, 0x36));
  reg.put(doc);
  KeyPair next = keypair_from_seed(Bytes(32, 0x37));
  DidDocument v2 = rotate_key(did, keys, next.public_key, reg);
  DidDocument back = DidDocument::from_json(parse_json(v2.canonical()));
  CHECK(back.canonical() == v2.canonical());
  validate_document(back);
}

TEST_CASE("DID parsing accepts only the canonical rendering") {
  auto [did, keys, doc] = generate_did(Bytes(32, 0x38));
  CHECK(Did::parse(did.str()) == did);
  CHECK_THROWS_AS(Did::parse("did:sim:XYZ"), Error);
  CHECK_THROWS_AS(Did::parse("did:other:" + did.id), Error);
  CHECK_THROWS_AS(Did::parse("did:sim:" + did.id.substr(1)), Error);
}

TEST_CASE("file registry stores one canonical file per DID") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "dtrust-registry-test";
  fs::remove_all(dir);
  {
    FileRegistry reg(dir);
    auto [did, keys, doc] = generate_did(Bytes(32, 0x39));
    reg.put(doc);
    CHECK(fs::exists(dir / (did.id + ".json")));

    KeyPair next = keypair_from_seed(Bytes(32, 0x3a));
    rotate_key(did, keys, next.public_key, reg);

    FileRegistry reopened(dir);
    CHECK(resolve(did, reopened).version == 2);
    CHECK(reopened.list().size() == 1);
    CHECK_THROWS_AS(reopened.put(doc), Error);  // stale version
  }
  fs::remove_all(dir);
}
