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

#include <doctest.h>

#include <filesystem>

#include "dtrust/verification.hpp"

using namespace dtrust;

namespace {

// A college, a government office, an employer, and one applicant who
// collects credentials from all three.
struct Holders {
  MemoryRegistry registry;
  DeterministicRng rng{11};

  Did college, government, employer, applicant;
  KeyPair college_keys, government_keys, employer_keys, applicant_keys;
  Wallet wallet;

  Holders() {
    DidDocument doc;
    std::tie(college, college_keys, doc) = generate_did(Bytes(32, 0x51));
    registry.put(doc);
    std::tie(government, government_keys, doc) = generate_did(Bytes(32, 0x52));
    registry.put(doc);
    std::tie(employer, employer_keys, doc) = generate_did(Bytes(32, 0x53));
    registry.put(doc);
    std::tie(applicant, applicant_keys, doc) = generate_did(Bytes(32, 0x54));
    registry.put(doc);
    wallet = Wallet(applicant, applicant_keys);
  }

  Issued issue_diploma(SimTime clock = 0) {
    ClaimSet claims{{{"degree", std::string("BSc Computer Science")},
                     {"graduation_year", std::int64_t{2019}},
                     {"gpa", std::string("3.7")}}};
    return issue(college_keys, college, applicant, claims, "diploma", {}, registry, clock, rng);
  }

  Issued issue_license() {
    ClaimSet claims{{{"name", std::string("John Doe")},
                     {"birthdate", parse_date("1995-06-01")},
                     {"address", std::string("12 Main St")},
                     {"legal_person", true}}};
    IssueOptions opts;
    opts.predicates.push_back(Predicate::age_over(21));
    return issue(government_keys, government, applicant, claims, "driver_license", opts, registry,
                 0, rng);
  }

  Issued issue_letter() {
    ClaimSet claims{{{"employer_name", std::string("Acme")},
                     {"years", std::int64_t{3}},
                     {"recommendation", std::string("positive")}}};
    return issue(employer_keys, employer, applicant, claims, "employment_letter", {}, registry, 0,
                 rng);
  }
};

}  // namespace

TEST_CASE("storing an owned credential succeeds; ids are listed once") {
  Holders h;
  Issued diploma = h.issue_diploma();
  RegistrySnapshot snap = snapshot(h.registry);
  h.wallet.store(diploma.credential, diploma.bundle, snap);
  h.wallet.store(diploma.credential, diploma.bundle, snap);  // re-store is a no-op
  CHECK(h.wallet.list_ids() == std::vector<std::string>{diploma.credential.id});
}

TEST_CASE("a credential issued to someone else is rejected") {
  Holders h;
  auto [stranger, stranger_keys, doc] = generate_did(Bytes(32, 0x55));
  h.registry.put(doc);
  ClaimSet claims{{{"degree", std::string("BA")}}};
  Issued other =
      issue(h.college_keys, h.college, stranger, claims, "diploma", {}, h.registry, 0, h.rng);
  try {
    h.wallet.store(other.credential, other.bundle, snapshot(h.registry));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::subject_mismatch);
  }
}

TEST_CASE("a tampered credential is rejected at store time") {
  Holders h;
  Issued diploma = h.issue_diploma();
  Credential bad = diploma.credential;
  bad.schema = "phd_diploma";
  try {
    h.wallet.store(bad, diploma.bundle, snapshot(h.registry));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_credential);
  }
}

TEST_CASE("credentials for an owned passive DID may be stored") {
  Holders h;
  auto [asset, asset_doc] =
      create_passive_did(h.applicant, h.applicant_keys, "diploma-file", h.registry);
  ClaimSet claims{{{"format", std::string("pdf")}}};
  Issued issued =
      issue(h.college_keys, h.college, asset, claims, "document", {}, h.registry, 0, h.rng);
  h.wallet.store(issued.credential, issued.bundle, snapshot(h.registry));
  CHECK(h.wallet.list_ids().size() == 1);
}

TEST_CASE("presentations disclose exactly the requested claims") {
  Holders h;
  Issued license = h.issue_license();
  h.wallet.store(license.credential, license.bundle, snapshot(h.registry));

  PresentationRequest request;
  request.challenge = Bytes(16, 0xaa);
  request.items.push_back({"driver_license", {"age_over_21"}});
  Presentation p = h.wallet.build_presentation(request, 0);

  CHECK(p.disclosed_claim_names() == std::vector<std::string>{"age_over_21"});
  REQUIRE(p.credentials.size() == 1);
  // Everything else is withheld: 4 source claims + 1 derived - 1 disclosed.
  CHECK(p.credentials[0].withheld.size() == 4);
  CHECK(p.credentials[0].disclosed.size() == 1);

  // Withheld entries carry no names or values anywhere in the serialization.
  std::string wire = to_canonical(p.to_json());
  CHECK(wire.find("birthdate") == std::string::npos);
  CHECK(wire.find("1995-06-01") == std::string::npos);
  CHECK(wire.find("12 Main St") == std::string::npos);
}

TEST_CASE("requests no stored credential can satisfy fail cleanly") {
  Holders h;
  Issued license = h.issue_license();
  h.wallet.store(license.credential, license.bundle, snapshot(h.registry));

  PresentationRequest bad_schema;
  bad_schema.challenge = Bytes(16, 0x01);
  bad_schema.items.push_back({"passport", {"name"}});
  CHECK_THROWS_AS(h.wallet.build_presentation(bad_schema, 0), Error);

  PresentationRequest bad_claim;
  bad_claim.challenge = Bytes(16, 0x01);
  bad_claim.items.push_back({"driver_license", {"血型"}});
  try {
    h.wallet.build_presentation(bad_claim, 0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unsatisfiable_request);
  }
}

TEST_CASE("expired credentials cannot be presented") {
  Holders h;
  ClaimSet claims{{{"degree", std::string("BSc")}}};
  IssueOptions opts;
  opts.expires_at = 10;
  Issued issued =
      issue(h.college_keys, h.college, h.applicant, claims, "diploma", opts, h.registry, 0, h.rng);
  h.wallet.store(issued.credential, issued.bundle, snapshot(h.registry));

  PresentationRequest request;
  request.challenge = Bytes(16, 0x02);
  request.items.push_back({"diploma", {"degree"}});
  CHECK_NOTHROW(h.wallet.build_presentation(request, 10));
  try {
    h.wallet.build_presentation(request, 11);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::expired);
  }
}

TEST_CASE("schema ties break toward the newest issuance") {
  Holders h;
  Issued old_diploma = h.issue_diploma(0);
  Issued new_diploma = h.issue_diploma(5);
  RegistrySnapshot snap = snapshot(h.registry);
  h.wallet.store(old_diploma.credential, old_diploma.bundle, snap);
  h.wallet.store(new_diploma.credential, new_diploma.bundle, snap);

  PresentationRequest request;
  request.challenge = Bytes(16, 0x03);
  request.items.push_back({"diploma", {"degree"}});
  Presentation p = h.wallet.build_presentation(request, 6);
  CHECK(p.credentials[0].core.id == new_diploma.credential.id);
}

TEST_CASE("the job_applicant persona yields a three-credential presentation") {
  Holders h;
  Issued diploma = h.issue_diploma();
  Issued license = h.issue_license();
  Issued letter = h.issue_letter();
  RegistrySnapshot snap = snapshot(h.registry);
  h.wallet.store(diploma.credential, diploma.bundle, snap);
  h.wallet.store(license.credential, license.bundle, snap);
  h.wallet.store(letter.credential, letter.bundle, snap);

  h.wallet.define_persona(
      "job_applicant",
      {{diploma.credential.id, {"degree", "graduation_year"}},
       {license.credential.id, {"name"}},
       {letter.credential.id, {"employer_name", "years", "recommendation"}}});

  Identity identity = h.wallet.compose_identity("job_applicant");
  Presentation p = h.wallet.present_identity(identity, Bytes(16, 0x04), 0);
  CHECK(p.credentials.size() == 3);
  std::vector<std::string> names = p.disclosed_claim_names();
  CHECK(std::find(names.begin(), names.end(), "degree") != names.end());
  CHECK(std::find(names.begin(), names.end(), "birthdate") == names.end());
}

TEST_CASE("an anonymous persona discloses only an authenticity predicate") {
  Holders h;
  Issued license = h.issue_license();
  h.wallet.store(license.credential, license.bundle, snapshot(h.registry));
  h.wallet.define_persona("anonymous_gamer", {{license.credential.id, {"legal_person"}}});
  Presentation p =
      h.wallet.present_identity(h.wallet.compose_identity("anonymous_gamer"), Bytes(16, 0x05), 0);
  CHECK(p.disclosed_claim_names() == std::vector<std::string>{"legal_person"});
  std::string wire = to_canonical(p.to_json());
  CHECK(wire.find("John Doe") == std::string::npos);
}

TEST_CASE("personas may only reference wallet-held credentials") {
  Holders h;
  CHECK_THROWS_AS(h.wallet.define_persona("ghost", {{"vc-missing", {"x"}}}), Error);
  try {
    h.wallet.compose_identity("never_defined");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unknown_persona);
  }
}

TEST_CASE("presentations from disjoint personas share no salts") {
  Holders h;
  Issued diploma = h.issue_diploma();
  Issued license = h.issue_license();
  RegistrySnapshot snap = snapshot(h.registry);
  h.wallet.store(diploma.credential, diploma.bundle, snap);
  h.wallet.store(license.credential, license.bundle, snap);
  h.wallet.define_persona("student", {{diploma.credential.id, {"degree"}}});
  h.wallet.define_persona("driver", {{license.credential.id, {"name"}}});

  Presentation a =
      h.wallet.present_identity(h.wallet.compose_identity("student"), Bytes(16, 0x06), 0);
  Presentation b =
      h.wallet.present_identity(h.wallet.compose_identity("driver"), Bytes(16, 0x07), 0);
  std::set<std::string> salts_a, salts_b;
  for (const auto& pc : a.credentials)
    for (const auto& d : pc.disclosed) salts_a.insert(to_hex(d.salt));
  for (const auto& pc : b.credentials)
    for (const auto& d : pc.disclosed) salts_b.insert(to_hex(d.salt));
  for (const std::string& s : salts_a) CHECK(salts_b.count(s) == 0);
}

TEST_CASE("wallet persistence round-trips credentials and personas") {
  namespace fs = std::filesystem;
  Holders h;
  Issued diploma = h.issue_diploma();
  h.wallet.store(diploma.credential, diploma.bundle, snapshot(h.registry));
  h.wallet.define_persona("student", {{diploma.credential.id, {"degree"}}});

  fs::path dir = fs::temp_directory_path() / "dtrust-wallet-test";
  fs::create_directories(dir);
  std::string pub = (dir / "wallet.json").string();
  std::string secret = (dir / "wallet.secret.json").string();
  h.wallet.save(pub, secret);

  // Secret material is not in the public file, and the secret file is 0600.
  CHECK(read_file(pub).find(to_hex(h.applicant_keys.secret_key)) == std::string::npos);
  auto mode = fs::status(secret).permissions();
  CHECK((mode & fs::perms::group_read) == fs::perms::none);
  CHECK((mode & fs::perms::others_read) == fs::perms::none);

  Wallet back = Wallet::load(pub, secret);
  CHECK(back.owner() == h.applicant);
  CHECK(back.list_ids() == h.wallet.list_ids());
  Presentation p =
      back.present_identity(back.compose_identity("student"), Bytes(16, 0x08), 0);
  CHECK(p.disclosed_claim_names() == std::vector<std::string>{"degree"});
  fs::remove_all(dir);
}
