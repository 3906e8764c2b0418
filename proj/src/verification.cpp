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

#include "dtrust/verification.hpp"

#include <algorithm>

namespace dtrust {

const CheckResult& VerificationReport::check(const std::string& name) const {
  for (const CheckResult& c : checks) {
    if (c.name == name) return c;
  }
  throw Error(Errc::not_found, "no check named '" + name + "'");
}

Json VerificationReport::to_json() const {
  Json checks_json = Json::array();
  for (const CheckResult& c : checks) {
    checks_json.push_back(Json{{"detail", c.detail}, {"name", c.name}, {"ok", c.ok}});
  }
  Json disclosed_json = Json::object();
  for (const auto& [id, claims] : disclosed) {
    Json claims_json = Json::object();
    for (const auto& [name, value] : claims) claims_json[name] = claim_value_to_json(value);
    disclosed_json[id] = claims_json;
  }
  return Json{{"checks", checks_json},
              {"disclosed", disclosed_json},
              {"verdict", accepted ? "accepted" : "rejected"}};
}

namespace {

// Structural sanity: disclosed and withheld leaves must tile 0..leaf_count-1
// exactly once. Violations are faults (the input is not a presentation),
// not verification failures.
void check_structure(const Presentation& p) {
  if (p.credentials.empty()) {
    throw Error(Errc::malformed_presentation, "presentation references no credentials");
  }
  for (const PresentedCredential& pc : p.credentials) {
    if (pc.leaf_count <= 0) {
      throw Error(Errc::malformed_presentation, "leaf_count must be positive");
    }
    std::vector<bool> seen(static_cast<std::size_t>(pc.leaf_count), false);
    auto mark = [&](std::int64_t index) {
      if (index < 0 || index >= pc.leaf_count) {
        throw Error(Errc::malformed_presentation, "leaf index out of range");
      }
      if (seen[static_cast<std::size_t>(index)]) {
        throw Error(Errc::malformed_presentation, "duplicate leaf index");
      }
      seen[static_cast<std::size_t>(index)] = true;
    };
    for (const DisclosedClaim& d : pc.disclosed) mark(d.index);
    for (const WithheldLeaf& w : pc.withheld) mark(w.index);
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
      throw Error(Errc::malformed_presentation, "leaves do not cover the commitment tree");
    }
  }
}

bool credential_merkle_ok(const PresentedCredential& pc) {
  std::uint64_t size = static_cast<std::uint64_t>(pc.leaf_count);
  // Per-claim authentication paths against the signed root.
  std::vector<Hash32> leaves(size);
  for (const WithheldLeaf& w : pc.withheld) {
    leaves[static_cast<std::size_t>(w.index)] = leaf_hash(to_bytes(w.commitment));
  }
  for (const DisclosedClaim& d : pc.disclosed) {
    Hash32 commitment = compute_commitment(d.salt, d.name, d.value);
    std::optional<Hash32> folded = merkle_path_root(
        leaf_hash(to_bytes(commitment)), static_cast<std::uint64_t>(d.index), size, d.path);
    if (!folded || *folded != pc.core.root) return false;
    leaves[static_cast<std::size_t>(d.index)] = leaf_hash(to_bytes(commitment));
  }
  // The disclosed commitments and withheld digests must jointly rebuild the
  // root, so the withheld list cannot be understated or padded.
  return merkle_root(leaves) == pc.core.root;
}

}  // namespace

VerificationReport verify_presentation(const Presentation& presentation,
                                       const Bytes& expected_challenge,
                                       const TrustAnchorSet& anchors,
                                       const RegistrySnapshot& registry_snapshot,
                                       const RevocationSnapshots& revocation_snapshots,
                                       SimTime clock, const VerifyOptions& options) {
  check_structure(presentation);
  VerificationReport report;

  // issuer_signature
  {
    bool ok = true;
    std::string detail;
    for (const PresentedCredential& pc : presentation.credentials) {
      if (!verify_credential_signature(pc.core, registry_snapshot)) {
        ok = false;
        detail = "issuer signature failed for " + pc.core.id;
        break;
      }
    }
    report.checks.push_back({"issuer_signature", ok, detail});
  }

  // merkle_paths
  {
    bool ok = true;
    std::string detail;
    for (const PresentedCredential& pc : presentation.credentials) {
      if (!credential_merkle_ok(pc)) {
        ok = false;
        detail = "commitment root mismatch for " + pc.core.id;
        break;
      }
    }
    report.checks.push_back({"merkle_paths", ok, detail});
  }

  // holder_signature: the signature itself, plus holder-subject binding.
  {
    bool ok = false;
    std::string detail;
    auto it = registry_snapshot.find(presentation.holder.str());
    if (it == registry_snapshot.end()) {
      detail = "holder document not in snapshot";
    } else {
      Bytes key;
      try {
        key = it->second.key_at_version(presentation.holder_doc_version);
      } catch (const Error&) {
        detail = "holder document version unknown";
      }
      if (!key.empty()) {
        ok = verify(key, to_canonical(presentation.body_json()), presentation.holder_signature);
        if (!ok) detail = "holder signature does not verify";
      }
    }
    if (ok) {
      for (const PresentedCredential& pc : presentation.credentials) {
        if (pc.core.subject == presentation.holder) continue;
        auto sub = registry_snapshot.find(pc.core.subject.str());
        bool controlled = sub != registry_snapshot.end() && sub->second.passive &&
                          sub->second.controller == presentation.holder;
        if (!controlled) {
          ok = false;
          detail = "subject of " + pc.core.id + " is not the holder";
          break;
        }
      }
    }
    report.checks.push_back({"holder_signature", ok, detail});
  }

  // challenge
  {
    bool ok = presentation.challenge == expected_challenge && !expected_challenge.empty();
    report.checks.push_back({"challenge", ok, ok ? "" : "challenge mismatch"});
  }

  // expiry
  {
    bool ok = true;
    std::string detail;
    for (const PresentedCredential& pc : presentation.credentials) {
      if (pc.core.expires_at && *pc.core.expires_at < clock) {
        ok = false;
        detail = pc.core.id + " expired";
        break;
      }
    }
    report.checks.push_back({"expiry", ok, detail});
  }

  // revocation: a fresh-enough signed snapshot per issuer, none listing a
  // presented credential.
  {
    bool ok = true;
    std::string detail;
    for (const PresentedCredential& pc : presentation.credentials) {
      auto it = revocation_snapshots.find(pc.core.issuer.str());
      if (it == revocation_snapshots.end()) {
        ok = false;
        detail = "no revocation snapshot for issuer of " + pc.core.id;
        break;
      }
      const RevocationSnapshot& snap = it->second;
      if (!verify_revocation_snapshot(snap, registry_snapshot)) {
        ok = false;
        detail = "revocation snapshot signature failed";
        break;
      }
      if (snap.as_of + options.revocation_staleness < clock) {
        ok = false;
        detail = "revocation snapshot is stale";
        break;
      }
      if (is_revoked(pc.core.id, snap)) {
        ok = false;
        detail = pc.core.id + " is revoked";
        break;
      }
    }
    report.checks.push_back({"revocation", ok, detail});
  }

  // anchors
  {
    bool ok = true;
    std::string detail;
    for (const PresentedCredential& pc : presentation.credentials) {
      if (!anchors.accepts(pc.core.schema, pc.core.issuer)) {
        ok = false;
        detail = pc.core.issuer.str() + " is not anchored for schema '" + pc.core.schema + "'";
        break;
      }
    }
    report.checks.push_back({"anchors", ok, detail});
  }

  report.accepted = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const CheckResult& c) { return c.ok; });
  if (report.accepted) {
    for (const PresentedCredential& pc : presentation.credentials) {
      for (const DisclosedClaim& d : pc.disclosed) {
        report.disclosed[pc.core.id][d.name] = d.value;
      }
    }
  }
  return report;
}

}  // namespace dtrust
