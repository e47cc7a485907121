// SPDX-License-Identifier: Apache-2.0
#ifndef NFC_RNG_HPP
#define NFC_RNG_HPP

#include <cstdint>
#include <random>

namespace nfc {

/* All randomness in the library flows through this wrapper so that a fixed
 * seed yields the same stream on every platform.  std::mt19937_64 output is
 * standardized; the distributions below are hand-rolled because the standard
 * ones are not. */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, n), n > 0. Rejection sampling keeps it unbiased.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % n;
  }

  // Child generator with a decorrelated seed; used to hand independent
  // streams to sub-steps while keeping the top-level seed reproducible.
  Rng fork() { return Rng(gen_() ^ 0x9e3779b97f4a7c15ULL); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace nfc

#endif
