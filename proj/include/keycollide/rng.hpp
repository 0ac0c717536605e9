#pragma once

#include <bit>

#include "keycollide/cipher.hpp"

namespace kc {

/// splitmix64 stream; cheap to fork into independent substreams by seeding
/// with mix64(seed ^ mix64(index)).
struct Rng {
  u64 state = 0;

  explicit Rng(u64 seed) : state(seed) {}

  u64 next() {
    const u64 r = mix64(state);
    state += kGolden;
    return r;
  }

  /// Uniform in [0, bound), bound >= 1, by masked rejection.
  u64 below(u64 bound) {
    const u64 mask = std::bit_ceil(bound) - 1;
    u64 v;
    do {
      v = next() & mask;
    } while (v >= bound);
    return v;
  }

  static Rng substream(u64 seed, u64 index) { return Rng(mix64(seed ^ mix64(index))); }
};

}  // namespace kc
