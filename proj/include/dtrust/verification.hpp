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
#include <set>
#include <string>

#include "dtrust/wallet.hpp"

namespace dtrust {

/// Issuer DIDs a verifier accepts, per credential schema.
struct TrustAnchorSet {
  std::string context;
  std::map<std::string, std::set<std::string>> issuers_by_schema;  // schema -> rendered DIDs

  void add(const std::string& schema, const Did& issuer) {
    issuers_by_schema[schema].insert(issuer.str());
  }
  bool accepts(const std::string& schema, const Did& issuer) const {
    auto it = issuers_by_schema.find(schema);
    return it != issuers_by_schema.end() && it->second.count(issuer.str()) > 0;
  }
};

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

/// Fixed check order: issuer_signature, merkle_paths, holder_signature,
/// challenge, expiry, revocation, anchors. Accepted iff every check passed.
struct VerificationReport {
  bool accepted = false;
  std::vector<CheckResult> checks;
  // credential id -> disclosed claim name -> value
  std::map<std::string, std::map<std::string, ClaimValue>> disclosed;

  const CheckResult& check(const std::string& name) const;
  Json to_json() const;
};

using RevocationSnapshots = std::map<std::string, RevocationSnapshot>;  // issuer DID -> snapshot

struct VerifyOptions {
  /// Maximum age (in simulated days) of an acceptable revocation snapshot.
  SimTime revocation_staleness = 0;
};

/// Offline verification: a pure function of its snapshot arguments. All
/// failures are report entries; the only fault is Error(malformed_presentation)
/// for structurally broken input.
VerificationReport verify_presentation(const Presentation& presentation,
                                       const Bytes& expected_challenge,
                                       const TrustAnchorSet& anchors,
                                       const RegistrySnapshot& registry_snapshot,
                                       const RevocationSnapshots& revocation_snapshots,
                                       SimTime clock, const VerifyOptions& options = {});

}  // namespace dtrust
