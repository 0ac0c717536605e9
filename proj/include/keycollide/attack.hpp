#pragma once

#include <optional>
#include <vector>

#include "keycollide/dictionary.hpp"

namespace kc {

/// Captured target ciphertexts; ground-truth keys are kept only so the
/// evaluation can score recoveries.
struct TargetBatch {
  std::vector<Fingerprint> fps;
  std::optional<std::vector<Key>> truth;
};

struct Candidate {
  std::size_t target_index;
  std::vector<Key> keys;
};

struct AttackReport {
  std::size_t total = 0;
  std::size_t hits_unique = 0;
  std::size_t hits_ambiguous = 0;
  std::size_t misses = 0;
  std::size_t false_positives = 0;   // unique hits disagreeing with truth
  std::vector<Candidate> recovered;  // one record per hit, input order
  bool any_hit = false;
};

TargetBatch capture_targets(const CipherSpec& spec, const Plaintext& x0,
                            const std::vector<Key>& keys);

/// Looks up every target. Multi-key entries are surfaced as ambiguous
/// candidate sets, never resolved silently.
AttackReport run_attack(const Dictionary& dict, const TargetBatch& batch);

/// Line-oriented text: lowercase hex fingerprint, optional tab-separated
/// hex ground-truth key.
void save_targets(const TargetBatch& batch, const CipherSpec& spec,
                  const std::string& path);
TargetBatch load_targets(const std::string& path, const CipherSpec& spec);

}  // namespace kc
