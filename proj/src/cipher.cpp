#include "keycollide/cipher.hpp"

#include <cctype>

namespace kc {

const char* cipher_name(CipherId id) {
  switch (id) {
    case CipherId::Ideal: return "ideal";
    case CipherId::Feistel: return "feistel";
    case CipherId::Trunc: return "trunc";
  }
  return "?";
}

void CipherSpec::validate() const {
  if (key_bits < 4 || key_bits > 32)
    throw std::invalid_argument("key_bits must be in [4, 32], got " +
                                std::to_string(key_bits));
  switch (id) {
    case CipherId::Ideal:
      break;
    case CipherId::Feistel:
      if (key_bits % 2 != 0)
        throw std::invalid_argument("feistel requires even key_bits, got " +
                                    std::to_string(key_bits));
      break;
    case CipherId::Trunc:
      if (param < 1 || param >= key_bits)
        throw std::invalid_argument("trunc requires 1 <= param < key_bits, got param=" +
                                    std::to_string(param));
      break;
  }
}

PackedBits pack_be(u128 v, unsigned bits) {
  PackedBits p;
  p.len = static_cast<std::uint8_t>((bits + 7) / 8);
  for (unsigned i = 0; i < p.len; ++i) {
    p.data[p.len - 1 - i] = static_cast<std::uint8_t>(v & 0xFF);
    v >>= 8;
  }
  return p;
}

u128 unpack_be(const PackedBits& p) {
  u128 v = 0;
  for (unsigned i = 0; i < p.len; ++i) v = (v << 8) | p.data[i];
  return v;
}

std::vector<std::uint8_t> default_x0_bytes(unsigned key_bits) {
  if (key_bits != 128 && (key_bits < 4 || key_bits > 32))
    throw std::invalid_argument("default_x0: key_bits out of range");
  const unsigned bits = 3 * key_bits;
  const unsigned len = (bits + 7) / 8;
  std::vector<std::uint8_t> bytes(len);
  for (unsigned i = 0; i < len; ++i) bytes[i] = static_cast<std::uint8_t>(i);
  const unsigned pad = 8 * len - bits;
  bytes[0] &= static_cast<std::uint8_t>(0xFF >> pad);
  return bytes;
}

Plaintext default_x0(unsigned key_bits) {
  if (key_bits < 4 || key_bits > 32)
    throw std::invalid_argument("default_x0: key_bits out of range");
  const auto bytes = default_x0_bytes(key_bits);
  Plaintext x;
  x.len = static_cast<std::uint8_t>(bytes.size());
  for (unsigned i = 0; i < x.len; ++i) x.data[i] = bytes[i];
  return x;
}

std::string to_hex(const PackedBits& p) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(2 * p.len);
  for (unsigned i = 0; i < p.len; ++i) {
    s.push_back(digits[p.data[i] >> 4]);
    s.push_back(digits[p.data[i] & 0xF]);
  }
  return s;
}

PackedBits parse_hex(const std::string& hex, unsigned bits) {
  const unsigned len = (bits + 7) / 8;
  if (hex.size() != 2 * len)
    throw std::invalid_argument("hex string must be " + std::to_string(2 * len) +
                                " digits for " + std::to_string(bits) + " bits");
  PackedBits p;
  p.len = static_cast<std::uint8_t>(len);
  auto nib = [](char c) -> unsigned {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument(std::string("invalid hex digit '") + c + "'");
  };
  for (unsigned i = 0; i < len; ++i)
    p.data[i] = static_cast<std::uint8_t>((nib(hex[2 * i]) << 4) | nib(hex[2 * i + 1]));
  const unsigned pad = 8 * len - bits;
  if (pad && (p.data[0] & ~(0xFF >> pad)))
    throw std::invalid_argument("nonzero pad bits in hex value");
  return p;
}

Plaintext parse_x0_hex(const std::string& hex, unsigned key_bits) {
  return parse_hex(hex, 3 * key_bits);
}

u64 feistel_encrypt(Key key, u64 block, unsigned n, unsigned rounds) {
  if (n % 2 != 0) throw std::invalid_argument("feistel: n must be even");
  const unsigned h = n / 2;
  const u64 hmask = (1ULL << h) - 1;
  u64 left = (block >> h) & hmask;
  u64 right = block & hmask;
  for (unsigned r = 0; r < rounds; ++r) {
    const u64 sub = mix64(static_cast<u64>(key) + static_cast<u64>(r) * kGolden) & hmask;
    const u64 f = mix64((right << 32) + sub) & hmask;
    const u64 next = left ^ f;
    left = right;
    right = next;
  }
  return (left << h) | right;
}

u64 feistel_decrypt(Key key, u64 block, unsigned n, unsigned rounds) {
  if (n % 2 != 0) throw std::invalid_argument("feistel: n must be even");
  const unsigned h = n / 2;
  const u64 hmask = (1ULL << h) - 1;
  u64 left = (block >> h) & hmask;
  u64 right = block & hmask;
  for (unsigned r = rounds; r-- > 0;) {
    const u64 sub = mix64(static_cast<u64>(key) + static_cast<u64>(r) * kGolden) & hmask;
    const u64 f = mix64((left << 32) + sub) & hmask;
    const u64 prev = right ^ f;
    right = left;
    left = prev;
  }
  return (left << h) | right;
}

namespace {

// xor of the plaintext's little-endian 64-bit chunks, zero padded.
u64 fold_plaintext(const Plaintext& x0) {
  u64 fold = 0;
  for (unsigned i = 0; i < x0.len; ++i)
    fold ^= static_cast<u64>(x0.data[i]) << (8 * (i % 8));
  return fold;
}

Fingerprint ideal_fingerprint(u64 key_material, const Plaintext& x0, unsigned bits) {
  const u64 fold = fold_plaintext(x0);
  const unsigned nblocks = (bits + 63) / 64;
  u128 stream = 0;
  for (unsigned j = 1; j <= nblocks; ++j) {
    const u64 b = mix64(mix64(key_material + static_cast<u64>(j) * kGolden) ^ fold);
    stream = (stream << 64) | b;
  }
  const unsigned stream_bits = 64 * nblocks;
  return pack_be(stream >> (stream_bits - bits), bits);
}

}  // namespace

Fingerprint fingerprint(const CipherSpec& spec, Key key, const Plaintext& x0) {
  spec.validate();
  const unsigned n = spec.key_bits;
  if (n < 32 && key >= (Key{1} << n))
    throw std::invalid_argument("key out of range for n=" + std::to_string(n));
  if (x0.len != spec.fp_bytes())
    throw std::invalid_argument("plaintext width mismatch: expected " +
                                std::to_string(spec.fp_bytes()) + " bytes, got " +
                                std::to_string(x0.len));
  const unsigned bits = spec.fp_bits();
  switch (spec.id) {
    case CipherId::Ideal:
      return ideal_fingerprint(key, x0, bits);
    case CipherId::Trunc: {
      const unsigned kept = n - spec.param;
      const u64 collapsed = key & ((1ULL << kept) - 1);
      return ideal_fingerprint(collapsed, x0, bits);
    }
    case CipherId::Feistel: {
      const unsigned rounds = spec.param ? spec.param : 8;
      const u128 p = unpack_be(x0);
      const u64 nmask = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
      u128 out = 0;
      for (int blk = 2; blk >= 0; --blk) {
        const u64 b = static_cast<u64>(p >> (static_cast<unsigned>(blk) * n)) & nmask;
        const u64 e = feistel_encrypt(key, b, n, rounds);
        out |= static_cast<u128>(e) << (static_cast<unsigned>(blk) * n);
      }
      return pack_be(out, bits);
    }
  }
  throw std::logic_error("unreachable cipher id");
}

}  // namespace kc
