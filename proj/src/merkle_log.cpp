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

#include <fstream>

#include "dtrust/errors.hpp"

namespace dtrust {

namespace {

// Largest power of two strictly less than n (n >= 2).
std::uint64_t split_point(std::uint64_t n) {
  std::uint64_t k = 1;
  while (k * 2 < n) k *= 2;
  return k;
}

Hash32 range_hash(const std::vector<Hash32>& hashes, std::uint64_t begin, std::uint64_t end) {
  std::uint64_t n = end - begin;
  if (n == 0) return empty_tree_root();
  if (n == 1) return hashes[begin];
  std::uint64_t k = split_point(n);
  return node_hash(range_hash(hashes, begin, begin + k), range_hash(hashes, begin + k, end));
}

void range_path(const std::vector<Hash32>& hashes, std::uint64_t begin, std::uint64_t end,
                std::uint64_t index, std::vector<Hash32>& out) {
  std::uint64_t n = end - begin;
  if (n <= 1) return;
  std::uint64_t k = split_point(n);
  if (index < k) {
    range_path(hashes, begin, begin + k, index, out);
    out.push_back(range_hash(hashes, begin + k, end));
  } else {
    range_path(hashes, begin + k, end, index - k, out);
    out.push_back(range_hash(hashes, begin, begin + k));
  }
}

// RFC 6962 SUBPROOF. `complete` is true while the old tree boundary still
// coincides with a subtree boundary on the path from the root.
void subproof(const std::vector<Hash32>& hashes, std::uint64_t begin, std::uint64_t end,
              std::uint64_t m, bool complete, std::vector<Hash32>& out) {
  std::uint64_t n = end - begin;
  if (m == n) {
    if (!complete) out.push_back(range_hash(hashes, begin, end));
    return;
  }
  std::uint64_t k = split_point(n);
  if (m <= k) {
    subproof(hashes, begin, begin + k, m, complete, out);
    out.push_back(range_hash(hashes, begin + k, end));
  } else {
    subproof(hashes, begin + k, end, m - k, false, out);
    out.push_back(range_hash(hashes, begin, begin + k));
  }
}

Json hashes_to_json(const std::vector<Hash32>& path) {
  Json arr = Json::array();
  for (const Hash32& h : path) arr.push_back(to_hex(h));
  return arr;
}

std::vector<Hash32> hashes_from_json(const Json& arr, Errc code) {
  if (!arr.is_array()) throw Error(code, "proof path must be an array");
  std::vector<Hash32> out;
  for (const Json& h : arr) {
    if (!h.is_string()) throw Error(code, "proof path entry must be a hex string");
    out.push_back(hash32_from_hex(h.get<std::string>()));
  }
  return out;
}

}  // namespace

Hash32 leaf_hash(const Bytes& leaf) {
  Bytes buf;
  buf.reserve(leaf.size() + 1);
  buf.push_back(0x00);
  buf.insert(buf.end(), leaf.begin(), leaf.end());
  return sha256(buf);
}

Hash32 node_hash(const Hash32& left, const Hash32& right) {
  Bytes buf;
  buf.reserve(65);
  buf.push_back(0x01);
  buf.insert(buf.end(), left.begin(), left.end());
  buf.insert(buf.end(), right.begin(), right.end());
  return sha256(buf);
}

Hash32 empty_tree_root() { return sha256(std::string_view{}); }

Hash32 merkle_root(const std::vector<Hash32>& leaf_hashes) {
  return range_hash(leaf_hashes, 0, leaf_hashes.size());
}

std::vector<Hash32> merkle_inclusion_path(const std::vector<Hash32>& leaf_hashes,
                                          std::uint64_t index) {
  if (index >= leaf_hashes.size()) {
    throw Error(Errc::index_out_of_range, "leaf index beyond tree size");
  }
  std::vector<Hash32> out;
  range_path(leaf_hashes, 0, leaf_hashes.size(), index, out);
  return out;
}

std::optional<Hash32> merkle_path_root(const Hash32& leaf, std::uint64_t index,
                                       std::uint64_t size, const std::vector<Hash32>& path) {
  if (size == 0 || index >= size) return std::nullopt;
  std::uint64_t fn = index;
  std::uint64_t sn = size - 1;
  Hash32 r = leaf;
  for (const Hash32& p : path) {
    if (sn == 0) return std::nullopt;  // path longer than the tree depth
    if ((fn & 1) == 1 || fn == sn) {
      r = node_hash(p, r);
      if ((fn & 1) == 0) {
        while (fn != 0 && (fn & 1) == 0) {
          fn >>= 1;
          sn >>= 1;
        }
      }
    } else {
      r = node_hash(r, p);
    }
    fn >>= 1;
    sn >>= 1;
  }
  if (sn != 0) return std::nullopt;  // path too short
  return r;
}

Json InclusionProof::to_json() const {
  return Json{{"leaf_index", leaf_index}, {"path", hashes_to_json(path)}, {"tree_size", tree_size}};
}

InclusionProof InclusionProof::from_json(const Json& j) {
  require_keys(j, {"leaf_index", "path", "tree_size"}, Errc::parse_error);
  InclusionProof p;
  p.leaf_index = static_cast<std::uint64_t>(get_int(j, "leaf_index", Errc::parse_error));
  p.tree_size = static_cast<std::uint64_t>(get_int(j, "tree_size", Errc::parse_error));
  p.path = hashes_from_json(j.at("path"), Errc::parse_error);
  return p;
}

Json ConsistencyProof::to_json() const {
  return Json{{"new_size", new_size}, {"old_size", old_size}, {"path", hashes_to_json(path)}};
}

ConsistencyProof ConsistencyProof::from_json(const Json& j) {
  require_keys(j, {"new_size", "old_size", "path"}, Errc::parse_error);
  ConsistencyProof p;
  p.old_size = static_cast<std::uint64_t>(get_int(j, "old_size", Errc::parse_error));
  p.new_size = static_cast<std::uint64_t>(get_int(j, "new_size", Errc::parse_error));
  p.path = hashes_from_json(j.at("path"), Errc::parse_error);
  return p;
}

Json SignedRoot::body_json() const {
  return Json{{"operator", operator_did}, {"root", to_hex(root)}, {"tree_size", tree_size}};
}

Json SignedRoot::to_json() const {
  Json j = body_json();
  j["signature"] = to_hex(signature);
  return j;
}

SignedRoot SignedRoot::from_json(const Json& j) {
  require_keys(j, {"operator", "root", "signature", "tree_size"}, Errc::parse_error);
  SignedRoot sr;
  sr.operator_did = get_string(j, "operator", Errc::parse_error);
  sr.root = get_hash(j, "root", Errc::parse_error);
  sr.tree_size = static_cast<std::uint64_t>(get_int(j, "tree_size", Errc::parse_error));
  sr.signature = get_hex(j, "signature", Errc::parse_error);
  return sr;
}

MerkleLog::MerkleLog(const MerkleLog& other) {
  std::lock_guard lock(other.mu_);
  leaves_ = other.leaves_;
  leaf_hashes_ = other.leaf_hashes_;
}

MerkleLog& MerkleLog::operator=(const MerkleLog& other) {
  if (this != &other) {
    std::scoped_lock lock(mu_, other.mu_);
    leaves_ = other.leaves_;
    leaf_hashes_ = other.leaf_hashes_;
  }
  return *this;
}

std::uint64_t MerkleLog::append(const Bytes& leaf) {
  std::lock_guard lock(mu_);
  leaves_.push_back(leaf);
  leaf_hashes_.push_back(leaf_hash(leaf));
  return leaves_.size() - 1;
}

std::uint64_t MerkleLog::size() const {
  std::lock_guard lock(mu_);
  return leaves_.size();
}

Bytes MerkleLog::leaf(std::uint64_t index) const {
  std::lock_guard lock(mu_);
  if (index >= leaves_.size()) {
    throw Error(Errc::index_out_of_range, "leaf index beyond log size");
  }
  return leaves_[index];
}

std::vector<Hash32> MerkleLog::snapshot_hashes(std::uint64_t size) const {
  std::lock_guard lock(mu_);
  if (size > leaf_hashes_.size()) {
    throw Error(Errc::index_out_of_range, "snapshot size beyond log size");
  }
  return std::vector<Hash32>(leaf_hashes_.begin(), leaf_hashes_.begin() + size);
}

Hash32 MerkleLog::root() const { return root_at(size()); }

Hash32 MerkleLog::root_at(std::uint64_t size) const {
  std::vector<Hash32> snap = snapshot_hashes(size);
  return merkle_root(snap);
}

InclusionProof MerkleLog::prove_inclusion(std::uint64_t index) const {
  return prove_inclusion(index, size());
}

InclusionProof MerkleLog::prove_inclusion(std::uint64_t index, std::uint64_t tree_size) const {
  std::vector<Hash32> snap = snapshot_hashes(tree_size);
  if (index >= tree_size) {
    throw Error(Errc::index_out_of_range, "leaf index beyond tree size");
  }
  InclusionProof proof;
  proof.leaf_index = index;
  proof.tree_size = tree_size;
  proof.path = merkle_inclusion_path(snap, index);
  return proof;
}

ConsistencyProof MerkleLog::prove_consistency(std::uint64_t old_size,
                                              std::uint64_t new_size) const {
  if (old_size == 0 || old_size > new_size) {
    throw Error(Errc::size_order, "need 0 < old_size <= new_size");
  }
  std::vector<Hash32> snap = snapshot_hashes(new_size);
  ConsistencyProof proof;
  proof.old_size = old_size;
  proof.new_size = new_size;
  if (old_size != new_size) {
    subproof(snap, 0, new_size, old_size, true, proof.path);
  }
  return proof;
}

void MerkleLog::save(const std::string& path) const {
  std::lock_guard lock(mu_);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  for (const Bytes& leaf : leaves_) {
    std::uint64_t n = leaf.size();
    std::uint8_t len[8];
    for (int i = 0; i < 8; ++i) len[i] = static_cast<std::uint8_t>(n >> (8 * i));
    out.write(reinterpret_cast<const char*>(len), 8);
    out.write(reinterpret_cast<const char*>(leaf.data()), static_cast<std::streamsize>(n));
  }
}

MerkleLog MerkleLog::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  MerkleLog log;
  for (;;) {
    std::uint8_t len[8];
    in.read(reinterpret_cast<char*>(len), 8);
    if (in.gcount() == 0 && in.eof()) break;
    if (in.gcount() != 8) throw Error(Errc::parse_error, "truncated leaf length in " + path);
    std::uint64_t n = 0;
    for (int i = 0; i < 8; ++i) n |= static_cast<std::uint64_t>(len[i]) << (8 * i);
    Bytes leaf(n);
    in.read(reinterpret_cast<char*>(leaf.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::uint64_t>(in.gcount()) != n) {
      throw Error(Errc::parse_error, "truncated leaf body in " + path);
    }
    log.append(leaf);
  }
  return log;
}

bool verify_inclusion(const Bytes& leaf, const InclusionProof& proof, const Hash32& root,
                      std::uint64_t tree_size) {
  if (proof.tree_size != tree_size) return false;
  std::optional<Hash32> candidate =
      merkle_path_root(leaf_hash(leaf), proof.leaf_index, tree_size, proof.path);
  return candidate.has_value() && *candidate == root;
}

bool verify_inclusion(const Bytes& leaf, const InclusionProof& proof, const SignedRoot& root) {
  return verify_inclusion(leaf, proof, root.root, root.tree_size);
}

bool verify_consistency(const Hash32& old_root, std::uint64_t old_size, const Hash32& new_root,
                        std::uint64_t new_size, const ConsistencyProof& proof) {
  if (proof.old_size != old_size || proof.new_size != new_size) return false;
  if (old_size == 0 || old_size > new_size) return false;
  if (old_size == new_size) {
    return proof.path.empty() && old_root == new_root;
  }
  // RFC 6962-bis verification. When the old size is a power of two the old
  // root itself is the implicit first proof node.
  std::vector<Hash32> path = proof.path;
  bool old_is_pow2 = (old_size & (old_size - 1)) == 0;
  if (old_is_pow2) {
    path.insert(path.begin(), old_root);
  }
  if (path.empty()) return false;

  std::uint64_t fn = old_size - 1;
  std::uint64_t sn = new_size - 1;
  while ((fn & 1) == 1) {
    fn >>= 1;
    sn >>= 1;
  }
  Hash32 fr = path[0];
  Hash32 sr = path[0];
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Hash32& p = path[i];
    if (sn == 0) return false;
    if ((fn & 1) == 1 || fn == sn) {
      fr = node_hash(p, fr);
      sr = node_hash(p, sr);
      if ((fn & 1) == 0) {
        while (fn != 0 && (fn & 1) == 0) {
          fn >>= 1;
          sn >>= 1;
        }
      }
    } else {
      sr = node_hash(sr, p);
    }
    fn >>= 1;
    sn >>= 1;
  }
  return sn == 0 && fr == old_root && sr == new_root;
}

SignedRoot sign_root(const MerkleLog& log, const std::string& operator_did,
                     const KeyPair& operator_keys) {
  return sign_root_at(log, log.size(), operator_did, operator_keys);
}

SignedRoot sign_root_at(const MerkleLog& log, std::uint64_t size, const std::string& operator_did,
                        const KeyPair& operator_keys) {
  SignedRoot sr;
  sr.tree_size = size;
  sr.root = log.root_at(size);
  sr.operator_did = operator_did;
  sr.signature = sign(operator_keys.secret_key, to_canonical(sr.body_json()));
  return sr;
}

bool verify_signed_root(const SignedRoot& sr, const Bytes& operator_public_key) {
  return verify(operator_public_key, to_canonical(sr.body_json()), sr.signature);
}

}  // namespace dtrust
