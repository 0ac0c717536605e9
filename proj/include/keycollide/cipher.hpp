#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kc {

using Key = std::uint32_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr u64 kGolden = 0x9E3779B97F4A7C15ULL;

/// splitmix64 output function: add the golden-ratio increment, then
/// xor-shift-multiply twice and a final xor-shift. Bijective on 64 bits.
constexpr u64 mix64(u64 z) noexcept {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

enum class CipherId : std::uint8_t { Ideal = 0, Feistel = 1, Trunc = 2 };

const char* cipher_name(CipherId id);

struct CipherSpec {
  CipherId id = CipherId::Ideal;
  unsigned key_bits = 0;   // n, 4..32
  unsigned param = 0;      // Feistel rounds, Trunc collapse width c; 0 for Ideal

  void validate() const;
  unsigned fp_bits() const { return 3 * key_bits; }
  unsigned fp_bytes() const { return (fp_bits() + 7) / 8; }
  unsigned key_bytes() const { return (key_bits + 7) / 8; }
};

/// A 3n-bit string packed big-endian into ceil(3n/8) bytes. Pad bits sit in
/// the high bits of byte 0 and are always zero, so lexicographic byte order
/// equals numeric order.
struct PackedBits {
  std::uint8_t len = 0;                 // bytes, at most 12 (n <= 32)
  std::array<std::uint8_t, 12> data{};

  std::span<const std::uint8_t> bytes() const { return {data.data(), len}; }

  friend bool operator==(const PackedBits& a, const PackedBits& b) = default;
  friend auto operator<=>(const PackedBits& a, const PackedBits& b) {
    if (auto c = a.len <=> b.len; c != 0) return c;
    for (unsigned i = 0; i < a.len; ++i)
      if (auto c = a.data[i] <=> b.data[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }
};

using Plaintext = PackedBits;
using Fingerprint = PackedBits;

/// Packs the low `bits` bits of v big-endian into ceil(bits/8) bytes.
PackedBits pack_be(u128 v, unsigned bits);
u128 unpack_be(const PackedBits& p);

/// Deterministic public chosen plaintext: counter bytes 0,1,2,... with the
/// pad bits of byte 0 cleared to leave exactly 3n significant bits.
Plaintext default_x0(unsigned key_bits);

/// Same counter-byte construction as raw bytes, additionally defined at
/// n = 128 (a 48-byte string) which exceeds the packed desk-scale width.
std::vector<std::uint8_t> default_x0_bytes(unsigned key_bits);

/// Parses a lowercase/uppercase hex string into a 3n-bit plaintext.
/// Rejects wrong length and nonzero pad bits.
Plaintext parse_x0_hex(const std::string& hex, unsigned key_bits);

std::string to_hex(const PackedBits& p);
PackedBits parse_hex(const std::string& hex, unsigned bits);

/// Balanced Feistel on n-bit blocks, halves of n/2 bits, subkey for round r
/// is the low n/2 bits of mix64(key + r*golden). n must be even.
u64 feistel_encrypt(Key key, u64 block, unsigned n, unsigned rounds);
u64 feistel_decrypt(Key key, u64 block, unsigned n, unsigned rounds);

/// Crypto(key, x0): the 3n-bit ciphertext of the chosen plaintext.
Fingerprint fingerprint(const CipherSpec& spec, Key key, const Plaintext& x0);

}  // namespace kc
