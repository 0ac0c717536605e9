#include "keycollide/attack.hpp"

#include <algorithm>
#include <fstream>

namespace kc {

TargetBatch capture_targets(const CipherSpec& spec, const Plaintext& x0,
                            const std::vector<Key>& keys) {
  TargetBatch batch;
  batch.fps.reserve(keys.size());
  for (Key k : keys) batch.fps.push_back(fingerprint(spec, k, x0));
  batch.truth = keys;
  return batch;
}

AttackReport run_attack(const Dictionary& dict, const TargetBatch& batch) {
  AttackReport rep;
  rep.total = batch.fps.size();
  for (std::size_t i = 0; i < batch.fps.size(); ++i) {
    const MatchResult m = lookup(dict, batch.fps[i]);
    if (!m.hit()) {
      ++rep.misses;
      continue;
    }
    if (m.entry->keys.size() == 1) {
      ++rep.hits_unique;
      if (batch.truth && (*batch.truth)[i] != m.entry->keys.front())
        ++rep.false_positives;
    } else {
      ++rep.hits_ambiguous;
    }
    rep.recovered.push_back({i, m.entry->keys});
  }
  rep.any_hit = rep.misses < rep.total;
  return rep;
}

void save_targets(const TargetBatch& batch, const CipherSpec& spec,
                  const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write target file: " + path);
  for (std::size_t i = 0; i < batch.fps.size(); ++i) {
    out << to_hex(batch.fps[i]);
    if (batch.truth)
      out << '\t' << to_hex(pack_be((*batch.truth)[i], spec.key_bits));
    out << '\n';
  }
}

TargetBatch load_targets(const std::string& path, const CipherSpec& spec) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open target file: " + path);
  TargetBatch batch;
  std::vector<Key> truth;
  bool has_truth = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    const std::string fp_hex = line.substr(0, tab);
    batch.fps.push_back(parse_hex(fp_hex, spec.fp_bits()));
    if (tab != std::string::npos) {
      has_truth = true;
      const auto key = unpack_be(parse_hex(line.substr(tab + 1), spec.key_bits));
      truth.push_back(static_cast<Key>(key));
    } else if (has_truth) {
      throw std::runtime_error("target file line " + std::to_string(lineno) +
                               ": missing truth column");
    }
  }
  if (has_truth) {
    if (truth.size() != batch.fps.size())
      throw std::runtime_error("target file: inconsistent truth column");
    batch.truth = std::move(truth);
  }
  return batch;
}

}  // namespace kc
