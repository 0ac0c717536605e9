#pragma once

#include <cstdint>
#include <vector>

#include "keycollide/cipher.hpp"

namespace kc {

/// Thrown by deserialize for malformed dictionary files.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DictEntry {
  Fingerprint fp;           // Y'
  std::vector<Key> keys;    // strictly ascending, size s >= 1

  friend bool operator==(const DictEntry&, const DictEntry&) = default;
};

/// The precomputation table D: entries sorted strictly ascending by
/// fingerprint, collision sets grouped into one entry.
struct Dictionary {
  CipherSpec spec;
  Plaintext x0;
  std::vector<DictEntry> entries;
  std::uint64_t total_keys = 0;   // N, the number of distinct input keys

  friend bool operator==(const Dictionary& a, const Dictionary& b) {
    return a.spec.id == b.spec.id && a.spec.key_bits == b.spec.key_bits &&
           a.spec.param == b.spec.param && a.x0 == b.x0 &&
           a.entries == b.entries && a.total_keys == b.total_keys;
  }
};

struct MatchResult {
  enum class Status { Miss, Hit } status = Status::Miss;
  const DictEntry* entry = nullptr;   // valid while the dictionary lives
  unsigned probes = 0;                // entry comparisons performed

  bool hit() const { return status == Status::Hit; }
};

enum class KeyGenMode { Sequential, Sampled };

/// Exactly 2^m distinct keys below 2^n, sorted ascending. Sequential is
/// 0..2^m-1; Sampled is a seeded uniform sample without replacement.
std::vector<Key> enumerate_keys(KeyGenMode mode, unsigned n, unsigned m, u64 seed);

/// Fingerprints every key, sorts, and groups equal fingerprints. The result
/// is a deterministic function of (spec, keys, x0) for any worker count.
Dictionary build(const CipherSpec& spec, const std::vector<Key>& keys,
                 const Plaintext& x0, unsigned workers = 0);

MatchResult lookup(const Dictionary& dict, const Fingerprint& fp);

std::vector<std::uint8_t> serialize(const Dictionary& dict);
Dictionary deserialize(std::span<const std::uint8_t> bytes);

Dictionary load_dictionary(const std::string& path);
void save_dictionary(const Dictionary& dict, const std::string& path);

}  // namespace kc
