#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "keycollide/cipher.hpp"
#include "keycollide/rng.hpp"

using namespace kc;

namespace {

// Independent reference: the published splitmix64 next() routine, written
// out verbatim so mix64 is checked against something it does not share.
u64 splitmix64_reference(u64& state) {
  u64 z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Poisson 99.9th percentile, smallest k with CDF >= 0.999.
unsigned poisson_p999(double lambda) {
  double term = std::exp(-lambda), cdf = term;
  unsigned k = 0;
  while (cdf < 0.999) {
    ++k;
    term *= lambda / k;
    cdf += term;
  }
  return k;
}

unsigned count_collisions(std::vector<Fingerprint> fps) {
  std::sort(fps.begin(), fps.end());
  unsigned c = 0;
  for (std::size_t i = 1; i < fps.size(); ++i)
    if (fps[i] == fps[i - 1]) ++c;
  return c;
}

}  // namespace

TEST_CASE("mix64 matches the splitmix64 reference routine") {
  u64 s = 0;
  CHECK(mix64(0) == splitmix64_reference(s));
  CHECK(mix64(0) == 0xE220A8397B1DCDAFULL);
  s = 1;
  CHECK(mix64(1) == splitmix64_reference(s));
  u64 z = 0x0123456789ABCDEFULL;
  for (int i = 0; i < 100; ++i) {
    u64 state = z;
    CHECK(mix64(z) == splitmix64_reference(state));
    z = z * 6364136223846793005ULL + 1442695040888963407ULL;
  }
}

TEST_CASE("mix64 is injective on random pairs") {
  Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    const u64 x = rng.next(), y = rng.next();
    if (x != y) CHECK(mix64(x) != mix64(y));
  }
}

TEST_CASE("default_x0 counter bytes and pad") {
  const Plaintext x8 = default_x0(8);
  REQUIRE(x8.len == 3);
  CHECK(x8.data[0] == 0x00);
  CHECK(x8.data[1] == 0x01);
  CHECK(x8.data[2] == 0x02);

  const Plaintext x20 = default_x0(20);
  REQUIRE(x20.len == 8);  // 3n = 60 bits
  CHECK((x20.data[0] & 0xF0) == 0);
  for (unsigned i = 1; i < 8; ++i) CHECK(x20.data[i] == i);

  CHECK(default_x0_bytes(128).size() == 48);

  CHECK_THROWS_AS(default_x0(3), std::invalid_argument);
  CHECK_THROWS_AS(default_x0(33), std::invalid_argument);
}

TEST_CASE("x0 hex parsing") {
  CHECK(parse_x0_hex("000102", 8) == default_x0(8));
  CHECK_THROWS_AS(parse_x0_hex("0001", 8), std::invalid_argument);
  // 3n = 60 bits in 8 bytes: top nibble is pad and must be zero.
  CHECK_THROWS_AS(parse_x0_hex("f001020304050607", 20), std::invalid_argument);
}

TEST_CASE("feistel single round formula") {
  const unsigned n = 8, h = 4;
  for (u64 block = 0; block < 256; ++block) {
    const u64 left = block >> h, right = block & 0xF;
    const u64 sub = mix64(0) & 0xF;
    const u64 f = mix64((right << 32) + sub) & 0xF;
    CHECK(feistel_encrypt(0, block, n, 1) == ((right << h) | (left ^ f)));
  }
}

TEST_CASE("feistel decrypt inverts encrypt, n=8 exhaustive") {
  for (Key key : {Key{0}, Key{1}, Key{0x5A}, Key{0xFF}})
    for (u64 b = 0; b < 256; ++b)
      CHECK(feistel_decrypt(key, feistel_encrypt(key, b, 8, 8), 8, 8) == b);
}

TEST_CASE("feistel encrypt is a permutation, n=8") {
  std::vector<bool> seen(256, false);
  for (u64 b = 0; b < 256; ++b) {
    const u64 e = feistel_encrypt(0x37, b, 8, 8);
    REQUIRE(e < 256);
    CHECK(!seen[e]);
    seen[e] = true;
  }
}

TEST_CASE("feistel rejects odd n") {
  CHECK_THROWS_AS(feistel_encrypt(0, 0, 7, 8), std::invalid_argument);
}

TEST_CASE("cipher spec validation") {
  CHECK_THROWS_AS((CipherSpec{CipherId::Ideal, 3, 0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((CipherSpec{CipherId::Ideal, 33, 0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((CipherSpec{CipherId::Feistel, 9, 0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((CipherSpec{CipherId::Trunc, 8, 0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((CipherSpec{CipherId::Trunc, 8, 8}).validate(), std::invalid_argument);
  CHECK_NOTHROW((CipherSpec{CipherId::Trunc, 8, 2}).validate());
}

TEST_CASE("fingerprint rejects out-of-range inputs") {
  const CipherSpec spec{CipherId::Ideal, 8, 0};
  CHECK_THROWS_AS(fingerprint(spec, 256, default_x0(8)), std::invalid_argument);
  CHECK_THROWS_AS(fingerprint(spec, 0, default_x0(16)), std::invalid_argument);
}

TEST_CASE("fingerprint is deterministic") {
  for (CipherSpec spec : {CipherSpec{CipherId::Ideal, 20, 0},
                          CipherSpec{CipherId::Feistel, 20, 8},
                          CipherSpec{CipherId::Trunc, 20, 3}}) {
    const Plaintext x0 = default_x0(20);
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
      const Key k = static_cast<Key>(rng.below(1u << 20));
      CHECK(fingerprint(spec, k, x0) == fingerprint(spec, k, x0));
    }
  }
}

TEST_CASE("ideal n=8 key=0 regression vector") {
  // Pinned once from a hand evaluation of the mix64 chain.
  const Fingerprint fp = fingerprint({CipherId::Ideal, 8, 0}, 0, default_x0(8));
  const u64 fold = 0x00ULL | (0x01ULL << 8) | (0x02ULL << 16);
  const u64 block = mix64(mix64(0 + kGolden) ^ fold);
  const u64 expect = block >> (64 - 24);
  REQUIRE(fp.len == 3);
  CHECK(unpack_be(fp) == expect);
  CHECK(unpack_be(fp) == 0x3555A2ULL);
}

TEST_CASE("trunc keys differing only in top c bits collide") {
  const CipherSpec spec{CipherId::Trunc, 8, 2};
  const Plaintext x0 = default_x0(8);
  CHECK(fingerprint(spec, 0x05, x0) == fingerprint(spec, 0x45, x0));
  CHECK(fingerprint(spec, 0x05, x0) == fingerprint(spec, 0xC5, x0));
  CHECK(fingerprint(spec, 0x05, x0) != fingerprint(spec, 0x06, x0));
}

TEST_CASE("trunc fingerprint factors exactly through key mod 2^(n-c)") {
  for (unsigned n : {8u, 10u, 12u}) {
    const CipherSpec spec{CipherId::Trunc, n, 2};
    const Plaintext x0 = default_x0(n);
    const u64 mod = u64{1} << (n - 2);
    std::vector<Fingerprint> rep(mod);
    for (u64 r = 0; r < mod; ++r) rep[r] = fingerprint(spec, static_cast<Key>(r), x0);
    for (u64 k = 0; k < (u64{1} << n); ++k)
      CHECK(fingerprint(spec, static_cast<Key>(k), x0) == rep[k % mod]);
  }
}

TEST_CASE("fingerprints have correct width and zero pad everywhere") {
  for (CipherSpec spec : {CipherSpec{CipherId::Ideal, 9, 0},
                          CipherSpec{CipherId::Ideal, 20, 0},
                          CipherSpec{CipherId::Ideal, 32, 0},
                          CipherSpec{CipherId::Feistel, 22, 8},
                          CipherSpec{CipherId::Trunc, 17, 5}}) {
    const Plaintext x0 = default_x0(spec.key_bits);
    const unsigned pad = 8 * spec.fp_bytes() - spec.fp_bits();
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
      const Key k = static_cast<Key>(rng.below(u64{1} << spec.key_bits));
      const Fingerprint fp = fingerprint(spec, k, x0);
      CHECK(fp.len == spec.fp_bytes());
      if (pad) CHECK((fp.data[0] & ~(0xFF >> pad)) == 0);
    }
  }
}

TEST_CASE("exhaustive fingerprints collide no more than the birthday model allows") {
  for (CipherSpec spec : {CipherSpec{CipherId::Ideal, 8, 0},
                          CipherSpec{CipherId::Ideal, 12, 0},
                          CipherSpec{CipherId::Feistel, 8, 8},
                          CipherSpec{CipherId::Feistel, 12, 8}}) {
    const unsigned n = spec.key_bits;
    const Plaintext x0 = default_x0(n);
    std::vector<Fingerprint> fps;
    fps.reserve(std::size_t{1} << n);
    for (u64 k = 0; k < (u64{1} << n); ++k)
      fps.push_back(fingerprint(spec, static_cast<Key>(k), x0));
    const double pairs = std::ldexp(1.0, static_cast<int>(n)) *
                         (std::ldexp(1.0, static_cast<int>(n)) - 1) / 2.0;
    const double lambda = pairs / std::ldexp(1.0, 3 * static_cast<int>(n));
    CHECK(count_collisions(std::move(fps)) <= poisson_p999(lambda));
  }
}
