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

#include "dtrust/merkle_log.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "dtrust/errors.hpp"
#include "dtrust/identity.hpp"
#include "merkle_oracle.hpp"

using namespace dtrust;

namespace {

std::vector<Bytes> sample_leaves(std::size_t n, const char* prefix = "leaf-") {
  std::vector<Bytes> leaves;
  for (std::size_t i = 0; i < n; ++i) {
    leaves.push_back(bytes_of(prefix + std::to_string(i)));
  }
  return leaves;
}

MerkleLog log_of(const std::vector<Bytes>& leaves) {
  MerkleLog log;
  for (const Bytes& l : leaves) log.append(l);
  return log;
}

// Reference roots recomputed with an independent script over leaves
// "leaf-0".."leaf-6".
constexpr const char* kEmptyRoot =
    "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855";
constexpr const char* kOneLeafRoot =
    "305df59f9590c3c9ac63d2b2743c388e3792449078cebf7fb3dbe6471643b2b7";
constexpr const char* kThreeLeafRoot =
    "cf763a041c81ceef1578a6083f75c61bef2e0014f2a3e683a97fcfca5be7f19a";
constexpr const char* kSevenLeafRoot =
    "0b007fb915eb9b2a146f54b1c86ec53b664f8e455b7660b0b6ee13edc0d921c0";

}  // namespace

TEST_CASE("empty log root is the hash of the empty string") {
  MerkleLog log;
  CHECK(to_hex(log.root()) == kEmptyRoot);
}

TEST_CASE("single-leaf root is the leaf hash") {
  MerkleLog log;
  CHECK(log.append(bytes_of("leaf-0")) == 0);
  CHECK(log.root() == leaf_hash(bytes_of("leaf-0")));
  CHECK(to_hex(log.root()) == kOneLeafRoot);
}

TEST_CASE("roots match the frozen reference vectors") {
  auto leaves = sample_leaves(7);
  MerkleLog log = log_of(leaves);
  CHECK(to_hex(log.root_at(3)) == kThreeLeafRoot);
  CHECK(to_hex(log.root()) == kSevenLeafRoot);
  CHECK(log.root() == oracle::root_of(leaves));
}

TEST_CASE("inclusion proof for leaf 3 of 7 verifies and matches the oracle path") {
  auto leaves = sample_leaves(7);
  MerkleLog log = log_of(leaves);
  InclusionProof proof = log.prove_inclusion(3);
  CHECK(proof.path == oracle::inclusion_path_of(leaves, 3));
  CHECK(verify_inclusion(leaves[3], proof, log.root(), 7));
}

TEST_CASE("inclusion proof fails against a root from a different log") {
  auto leaves = sample_leaves(7);
  MerkleLog log = log_of(leaves);
  MerkleLog other = log_of(sample_leaves(7, "other-"));
  InclusionProof proof = log.prove_inclusion(3);
  CHECK_FALSE(verify_inclusion(leaves[3], proof, other.root(), 7));
}

TEST_CASE("inclusion proof with a zeroed sibling digest fails") {
  auto leaves = sample_leaves(7);
  MerkleLog log = log_of(leaves);
  InclusionProof proof = log.prove_inclusion(3);
  proof.path[1] = Hash32{};
  CHECK_FALSE(verify_inclusion(leaves[3], proof, log.root(), 7));
}

TEST_CASE("inclusion proof index is range-checked") {
  MerkleLog log = log_of(sample_leaves(3));
  CHECK_THROWS_AS(log.prove_inclusion(3), Error);
  try {
    log.prove_inclusion(9);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::index_out_of_range);
  }
}

TEST_CASE("consistency between sizes 3 and 7 of one honest log verifies") {
  auto leaves = sample_leaves(7);
  MerkleLog log = log_of(leaves);
  ConsistencyProof proof = log.prove_consistency(3, 7);
  CHECK(verify_consistency(log.root_at(3), 3, log.root_at(7), 7, proof));
  // Oracle agreement on both roots.
  CHECK(log.root_at(3) == oracle::root_of({leaves.begin(), leaves.begin() + 3}));
  CHECK(log.root_at(7) == oracle::root_of(leaves));
}

TEST_CASE("equal sizes are consistent with an empty proof") {
  MerkleLog log = log_of(sample_leaves(5));
  ConsistencyProof proof = log.prove_consistency(5, 5);
  CHECK(proof.path.empty());
  CHECK(verify_consistency(log.root_at(5), 5, log.root_at(5), 5, proof));
}

TEST_CASE("size order is enforced for consistency proofs") {
  MerkleLog log = log_of(sample_leaves(5));
  CHECK_THROWS_AS(log.prove_consistency(4, 3), Error);
  CHECK_THROWS_AS(log.prove_consistency(0, 3), Error);
  try {
    log.prove_consistency(4, 2);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::size_order);
  }
}

TEST_CASE("a fork after an issued root is detected") {
  auto leaves = sample_leaves(7);
  MerkleLog honest = log_of(leaves);
  Hash32 old_root = honest.root_at(3);

  // Re-grow a log whose leaf 1 was rewritten after the size-3 root issued.
  auto forked = leaves;
  forked[1] = bytes_of("rewritten");
  MerkleLog fork = log_of(forked);
  ConsistencyProof proof = fork.prove_consistency(3, 7);
  CHECK_FALSE(verify_consistency(old_root, 3, fork.root(), 7, proof));
}

TEST_CASE("randomized consistency + append-only detection up to 64 leaves") {
  DeterministicRng rng(2024);
  std::vector<Bytes> leaves;
  MerkleLog log;
  for (std::size_t n = 1; n <= 64; ++n) {
    leaves.push_back(rng.next_bytes(1 + (rng.next_u64() % 40)));
    log.append(leaves.back());
  }
  for (std::uint64_t a = 1; a <= 64; ++a) {
    for (std::uint64_t b = a; b <= 64; ++b) {
      ConsistencyProof proof = log.prove_consistency(a, b);
      CHECK(verify_consistency(log.root_at(a), a, log.root_at(b), b, proof));
    }
  }
  // Mutating a historical leaf breaks inclusion at the old index or
  // consistency across the mutation point.
  for (int trial = 0; trial < 16; ++trial) {
    std::uint64_t victim = rng.next_u64() % 32;
    auto mutated = leaves;
    mutated[victim][0] ^= 0xff;
    MerkleLog bad = log_of(mutated);
    std::uint64_t a = victim + 1;  // old tree still contains the honest leaf
    ConsistencyProof proof = bad.prove_consistency(a, 64);
    bool consistency_broken =
        !verify_consistency(log.root_at(a), a, bad.root(), 64, proof);
    InclusionProof inc = bad.prove_inclusion(victim, a);
    bool inclusion_broken = !verify_inclusion(leaves[victim], inc, log.root_at(a), a);
    CHECK((consistency_broken || inclusion_broken));
  }
}

TEST_CASE("proof lengths stay within the logarithmic bound") {
  MerkleLog log = log_of(sample_leaves(64));
  for (std::uint64_t n = 1; n <= 64; ++n) {
    std::uint64_t bound = 1;
    while ((1ull << bound) < n) ++bound;  // ceil(log2(n)) for n > 1
    for (std::uint64_t i = 0; i < n; ++i) {
      CHECK(log.prove_inclusion(i, n).path.size() <= bound + 1);
    }
  }
}

TEST_CASE("proof serialization round-trips and rejects malformed input") {
  MerkleLog log = log_of(sample_leaves(7));
  InclusionProof proof = log.prove_inclusion(2);
  InclusionProof back = InclusionProof::from_json(parse_json(to_canonical(proof.to_json())));
  CHECK(back.leaf_index == proof.leaf_index);
  CHECK(back.path == proof.path);
  CHECK_THROWS_AS(InclusionProof::from_json(parse_json("{\"leaf_index\":1}")), Error);

  ConsistencyProof cons = log.prove_consistency(3, 7);
  ConsistencyProof cback = ConsistencyProof::from_json(parse_json(to_canonical(cons.to_json())));
  CHECK(cback.path == cons.path);
}

TEST_CASE("signed roots bind size and root to the operator key") {
  auto [did, keys, doc] = generate_did(Bytes(32, 0x11));
  MerkleLog log = log_of(sample_leaves(5));
  SignedRoot sr = sign_root(log, did.str(), keys);
  CHECK(verify_signed_root(sr, keys.public_key));
  SignedRoot tampered = sr;
  tampered.tree_size += 1;
  CHECK_FALSE(verify_signed_root(tampered, keys.public_key));
  CHECK(verify_inclusion(log.leaf(1), log.prove_inclusion(1), sr));
}

TEST_CASE("log persistence round-trips the leaf sequence") {
  namespace fs = std::filesystem;
  fs::path file = fs::temp_directory_path() / "dtrust-log-test.bin";
  MerkleLog log = log_of(sample_leaves(9));
  log.append(Bytes{});  // empty leaf survives the format
  log.save(file.string());
  MerkleLog back = MerkleLog::load(file.string());
  CHECK(back.size() == log.size());
  CHECK(back.root() == log.root());
  CHECK(back.leaf(9) == Bytes{});
  fs::remove(file);
}
