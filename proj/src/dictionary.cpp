#include "keycollide/dictionary.hpp"

#include <algorithm>
#include <fstream>
#include <thread>
#include <unordered_set>

#include "keycollide/rng.hpp"

namespace kc {

std::vector<Key> enumerate_keys(KeyGenMode mode, unsigned n, unsigned m, u64 seed) {
  if (n < 4 || n > 32) throw std::invalid_argument("n must be in [4, 32]");
  if (m > n) throw std::invalid_argument("m must not exceed n");
  const u64 count = u64{1} << m;
  const u64 space = u64{1} << n;

  std::vector<Key> keys;
  keys.reserve(count);
  if (mode == KeyGenMode::Sequential) {
    for (u64 k = 0; k < count; ++k) keys.push_back(static_cast<Key>(k));
    return keys;
  }

  Rng rng(seed);
  if (n <= 24) {
    // Dense enough to shuffle the whole range.
    std::vector<Key> pool(space);
    for (u64 k = 0; k < space; ++k) pool[k] = static_cast<Key>(k);
    for (u64 i = 0; i < count; ++i) {
      const u64 j = i + rng.below(space - i);
      std::swap(pool[i], pool[j]);
    }
    keys.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
  } else {
    std::unordered_set<Key> seen;
    seen.reserve(count * 2);
    while (keys.size() < count) {
      const Key k = static_cast<Key>(rng.below(space));
      if (seen.insert(k).second) keys.push_back(k);
    }
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

Dictionary build(const CipherSpec& spec, const std::vector<Key>& keys,
                 const Plaintext& x0, unsigned workers) {
  spec.validate();
  {
    std::vector<Key> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("duplicate keys in dictionary input");
  }

  std::vector<std::pair<Fingerprint, Key>> rows(keys.size());
  unsigned w = workers ? workers : std::thread::hardware_concurrency();
  if (w == 0) w = 1;
  w = std::min<std::size_t>(w, std::max<std::size_t>(keys.size(), 1));

  auto map_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      rows[i] = {fingerprint(spec, keys[i], x0), keys[i]};
  };
  if (w == 1) {
    map_range(0, keys.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (keys.size() + w - 1) / w;
    for (unsigned t = 0; t < w; ++t) {
      const std::size_t lo = std::min(keys.size(), t * chunk);
      const std::size_t hi = std::min(keys.size(), lo + chunk);
      if (lo < hi) pool.emplace_back(map_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  std::sort(rows.begin(), rows.end());

  Dictionary dict;
  dict.spec = spec;
  dict.x0 = x0;
  dict.total_keys = keys.size();
  for (std::size_t i = 0; i < rows.size();) {
    DictEntry e;
    e.fp = rows[i].first;
    std::size_t j = i;
    while (j < rows.size() && rows[j].first == e.fp) e.keys.push_back(rows[j++].second);
    dict.entries.push_back(std::move(e));
    i = j;
  }
  return dict;
}

MatchResult lookup(const Dictionary& dict, const Fingerprint& fp) {
  if (fp.len != dict.spec.fp_bytes())
    throw std::invalid_argument("fingerprint width mismatch");
  MatchResult r;
  std::size_t lo = 0, hi = dict.entries.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    ++r.probes;
    const auto cmp = fp <=> dict.entries[mid].fp;
    if (cmp == 0) {
      r.status = MatchResult::Status::Hit;
      r.entry = &dict.entries[mid];
      return r;
    }
    if (cmp < 0)
      hi = mid;
    else
      lo = mid + 1;
  }
  return r;
}

namespace {

constexpr char kMagic[4] = {'K', 'D', 'T', '1'};
constexpr std::uint16_t kVersion = 1;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u64(std::vector<std::uint8_t>& out, u64 v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

struct Cursor {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > bytes.size()) throw FormatError("truncated dictionary file");
  }
  std::uint8_t u8() {
    need(1);
    return bytes[pos++];
  }
  std::uint16_t u16() {
    need(2);
    const std::uint16_t v = static_cast<std::uint16_t>(bytes[pos] | (bytes[pos + 1] << 8));
    pos += 2;
    return v;
  }
  u64 u64le() {
    need(8);
    u64 v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[pos + static_cast<std::size_t>(i)];
    pos += 8;
    return v;
  }
  void raw(std::uint8_t* dst, std::size_t n) {
    need(n);
    std::copy_n(bytes.data() + pos, n, dst);
    pos += n;
  }
};

void check_pad(const PackedBits& p, unsigned bits, const char* what) {
  const unsigned pad = 8u * p.len - bits;
  if (pad && (p.data[0] & ~(0xFF >> pad)))
    throw FormatError(std::string("nonzero pad bits in ") + what);
}

}  // namespace

std::vector<std::uint8_t> serialize(const Dictionary& dict) {
  const unsigned fp_len = dict.spec.fp_bytes();
  const unsigned key_len = dict.spec.key_bytes();
  std::vector<std::uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u16(out, kVersion);
  out.push_back(static_cast<std::uint8_t>(dict.spec.id));
  out.push_back(static_cast<std::uint8_t>(dict.spec.param));
  put_u16(out, static_cast<std::uint16_t>(dict.spec.key_bits));
  put_u16(out, static_cast<std::uint16_t>(fp_len));
  out.insert(out.end(), dict.x0.data.begin(), dict.x0.data.begin() + fp_len);
  put_u64(out, dict.entries.size());
  put_u64(out, dict.total_keys);
  for (const auto& e : dict.entries) {
    out.insert(out.end(), e.fp.data.begin(), e.fp.data.begin() + fp_len);
    put_u16(out, static_cast<std::uint16_t>(e.keys.size()));
    for (Key k : e.keys)
      for (unsigned i = 0; i < key_len; ++i)
        out.push_back(static_cast<std::uint8_t>(k >> (8 * (key_len - 1 - i))));
  }
  return out;
}

Dictionary deserialize(std::span<const std::uint8_t> bytes) {
  Cursor c{bytes};
  std::uint8_t magic[4];
  c.raw(magic, 4);
  if (!std::equal(magic, magic + 4, kMagic)) throw FormatError("bad magic");
  if (c.u16() != kVersion) throw FormatError("version mismatch");

  Dictionary dict;
  dict.spec.id = static_cast<CipherId>(c.u8());
  dict.spec.param = c.u8();
  dict.spec.key_bits = c.u16();
  if (static_cast<unsigned>(dict.spec.id) > 2) throw FormatError("unknown cipher id");
  try {
    dict.spec.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid cipher spec: ") + e.what());
  }
  const unsigned fp_len = dict.spec.fp_bytes();
  const unsigned key_len = dict.spec.key_bytes();
  if (c.u16() != fp_len) throw FormatError("x0 length mismatch");
  dict.x0.len = static_cast<std::uint8_t>(fp_len);
  c.raw(dict.x0.data.data(), fp_len);
  check_pad(dict.x0, dict.spec.fp_bits(), "x0");

  const u64 entry_count = c.u64le();
  dict.total_keys = c.u64le();
  const u64 key_limit = (dict.spec.key_bits == 32) ? 0 : (u64{1} << dict.spec.key_bits);

  u64 keys_seen = 0;
  dict.entries.reserve(entry_count);
  for (u64 i = 0; i < entry_count; ++i) {
    DictEntry e;
    e.fp.len = static_cast<std::uint8_t>(fp_len);
    c.raw(e.fp.data.data(), fp_len);
    check_pad(e.fp, dict.spec.fp_bits(), "entry fingerprint");
    if (!dict.entries.empty() && !(dict.entries.back().fp < e.fp))
      throw FormatError("unsorted entries");
    const std::uint16_t s = c.u16();
    if (s == 0) throw FormatError("empty key set in entry");
    e.keys.reserve(s);
    for (std::uint16_t j = 0; j < s; ++j) {
      u64 k = 0;
      for (unsigned b = 0; b < key_len; ++b) k = (k << 8) | c.u8();
      if (key_limit && k >= key_limit) throw FormatError("key out of range for key_bits");
      if (!e.keys.empty() && e.keys.back() >= k) throw FormatError("unsorted keys in entry");
      e.keys.push_back(static_cast<Key>(k));
    }
    keys_seen += s;
    dict.entries.push_back(std::move(e));
  }
  if (keys_seen != dict.total_keys) throw FormatError("total_keys does not match entries");
  if (c.pos != bytes.size()) throw FormatError("trailing bytes after entries");
  return dict;
}

Dictionary load_dictionary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open dictionary file: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

void save_dictionary(const Dictionary& dict, const std::string& path) {
  const auto bytes = serialize(dict);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write dictionary file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace kc
