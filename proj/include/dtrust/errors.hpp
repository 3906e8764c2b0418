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

#include <stdexcept>
#include <string>

namespace dtrust {

enum class Errc {
  // identity
  seed_length,
  unknown_controller,
  controller_is_passive,
  not_found,
  unauthorized,
  malformed_key,
  invalid_document,
  // credentials
  invalid_claims,
  predicate_unsatisfiable,
  unknown_issuer,
  empty,
  // wallet
  subject_mismatch,
  invalid_credential,
  unsatisfiable_request,
  expired,
  unknown_persona,
  // verification
  malformed_presentation,
  // vlog
  index_out_of_range,
  size_order,
  // agreements
  identification_failed,
  wrong_phase,
  unknown_clause,
  already_resolved,
  incomplete_terms,
  unknown_event,
  // governance
  malformed_evidence,
  unknown_publisher,
  // harness
  unknown_scenario,
  assertion_failed,
  // plumbing
  parse_error,
  io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace dtrust
