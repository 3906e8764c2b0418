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

#include "dtrust/errors.hpp"

namespace dtrust {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::seed_length: return "SeedLength";
    case Errc::unknown_controller: return "UnknownController";
    case Errc::controller_is_passive: return "ControllerIsPassive";
    case Errc::not_found: return "NotFound";
    case Errc::unauthorized: return "Unauthorized";
    case Errc::malformed_key: return "MalformedKey";
    case Errc::invalid_document: return "InvalidDocument";
    case Errc::invalid_claims: return "InvalidClaims";
    case Errc::predicate_unsatisfiable: return "PredicateUnsatisfiable";
    case Errc::unknown_issuer: return "UnknownIssuer";
    case Errc::empty: return "Empty";
    case Errc::subject_mismatch: return "SubjectMismatch";
    case Errc::invalid_credential: return "InvalidCredential";
    case Errc::unsatisfiable_request: return "UnsatisfiableRequest";
    case Errc::expired: return "Expired";
    case Errc::unknown_persona: return "UnknownPersona";
    case Errc::malformed_presentation: return "MalformedPresentation";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::size_order: return "SizeOrder";
    case Errc::identification_failed: return "IdentificationFailed";
    case Errc::wrong_phase: return "WrongPhase";
    case Errc::unknown_clause: return "UnknownClause";
    case Errc::already_resolved: return "AlreadyResolved";
    case Errc::incomplete_terms: return "IncompleteTerms";
    case Errc::unknown_event: return "UnknownEvent";
    case Errc::malformed_evidence: return "MalformedEvidence";
    case Errc::unknown_publisher: return "UnknownPublisher";
    case Errc::unknown_scenario: return "UnknownScenario";
    case Errc::assertion_failed: return "AssertionFailed";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IoError";
  }
  return "UnknownError";
}

}  // namespace dtrust
