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

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dtrust/bytes.hpp"
#include "dtrust/canonical.hpp"
#include "dtrust/crypto.hpp"

namespace dtrust {

// Append-only Merkle log with the RFC 6962 tree shape: the left subtree of
// n > 1 leaves holds the largest power of two smaller than n. Leaf hash is
// SHA-256(0x00 || leaf), interior hash SHA-256(0x01 || left || right), and
// the root of the empty log is SHA-256 of the empty string.

Hash32 leaf_hash(const Bytes& leaf);
Hash32 node_hash(const Hash32& left, const Hash32& right);
Hash32 empty_tree_root();

/// Root over a list of precomputed leaf hashes (RFC 6962 shape). Used both
/// by the log and by credential commitment trees.
Hash32 merkle_root(const std::vector<Hash32>& leaf_hashes);

/// Audit path for the leaf at `index` within a tree of `size` leaf hashes.
std::vector<Hash32> merkle_inclusion_path(const std::vector<Hash32>& leaf_hashes,
                                          std::uint64_t index);

/// Folds an audit path back to a root candidate; returns nullopt when the
/// path length is inconsistent with (index, size).
std::optional<Hash32> merkle_path_root(const Hash32& leaf, std::uint64_t index,
                                       std::uint64_t size, const std::vector<Hash32>& path);

struct InclusionProof {
  std::uint64_t leaf_index = 0;
  std::uint64_t tree_size = 0;
  std::vector<Hash32> path;

  Json to_json() const;
  static InclusionProof from_json(const Json& j);
};

struct ConsistencyProof {
  std::uint64_t old_size = 0;
  std::uint64_t new_size = 0;
  std::vector<Hash32> path;

  Json to_json() const;
  static ConsistencyProof from_json(const Json& j);
};

/// A signed tree head: the log operator's commitment to (size, root).
struct SignedRoot {
  std::uint64_t tree_size = 0;
  Hash32 root{};
  std::string operator_did;  // rendered DID
  Bytes signature;

  Json body_json() const;
  Json to_json() const;
  static SignedRoot from_json(const Json& j);
};

class MerkleLog {
 public:
  MerkleLog() = default;
  MerkleLog(const MerkleLog& other);
  MerkleLog& operator=(const MerkleLog& other);

  /// Appends a leaf and returns its index. Never fails.
  std::uint64_t append(const Bytes& leaf);
  std::uint64_t append(std::string_view leaf) { return append(bytes_of(leaf)); }

  std::uint64_t size() const;
  Bytes leaf(std::uint64_t index) const;

  Hash32 root() const;
  /// Root of the tree as it stood at `size` leaves.
  Hash32 root_at(std::uint64_t size) const;

  InclusionProof prove_inclusion(std::uint64_t index) const;
  InclusionProof prove_inclusion(std::uint64_t index, std::uint64_t tree_size) const;

  ConsistencyProof prove_consistency(std::uint64_t old_size, std::uint64_t new_size) const;

  /// Persistence: an append-only file of u64-le length-prefixed leaves.
  void save(const std::string& path) const;
  static MerkleLog load(const std::string& path);

 private:
  std::vector<Hash32> snapshot_hashes(std::uint64_t size) const;

  mutable std::mutex mu_;
  std::vector<Bytes> leaves_;
  std::vector<Hash32> leaf_hashes_;
};

bool verify_inclusion(const Bytes& leaf, const InclusionProof& proof, const Hash32& root,
                      std::uint64_t tree_size);
bool verify_inclusion(const Bytes& leaf, const InclusionProof& proof, const SignedRoot& root);

bool verify_consistency(const Hash32& old_root, std::uint64_t old_size, const Hash32& new_root,
                        std::uint64_t new_size, const ConsistencyProof& proof);

/// Signs the current tree head with the log operator's key.
SignedRoot sign_root(const MerkleLog& log, const std::string& operator_did,
                     const KeyPair& operator_keys);
SignedRoot sign_root_at(const MerkleLog& log, std::uint64_t size, const std::string& operator_did,
                        const KeyPair& operator_keys);

bool verify_signed_root(const SignedRoot& sr, const Bytes& operator_public_key);

}  // namespace dtrust
