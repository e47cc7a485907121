// SPDX-License-Identifier: Apache-2.0
#ifndef NFC_SUM_CODE_HPP
#define NFC_SUM_CODE_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

#include "nfc/decoder.hpp"
#include "nfc/distance.hpp"
#include "nfc/linear_code.hpp"
#include "nfc/rng.hpp"

namespace nfc {

using bigint = boost::multiprecision::cpp_int;

/* Rate-h multicast solution on the reverse network: B holds the source
 * coefficients at the multicast source (supported on its out-edges), K the
 * transfer coefficients, and F_i the full-rank h x h matrix each sink
 * receives. */
struct MulticastSolution {
  Matrix b;                 // h x |E|
  Matrix k;                 // |E| x |E|
  std::vector<Matrix> f_i;  // per multicast sink, h x h, invertible
  Matrix b_tilde;           // h x h: B = b_tilde * A_Out(source)
};

struct GaussianMargin {
  bigint lhs;
  bigint rhs;
  bool sufficient = false;
};

/* Everything construct_sum_code / three_layer_sum_code produce.  The code
 * lives on `network`, which for the general construction is the
 * degree-normalized version of the input.  `d` and `f_prime` are present for
 * the reverse-multicast construction (where the global matrix is D stacked s
 * times); the three-layer construction fills neither. */
struct SumCodeBundle {
  std::shared_ptr<const LinearNetworkCode> code;
  NetworkPtr network;
  std::optional<Matrix> d;       // k x h
  std::vector<Matrix> f_prime;   // per source, h x h
  DistanceCertificate certificate;
  size_t h = 0;
  std::uint64_t q = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
};

/* Pads every source out-degree and the sink in-degree up to exactly h by
 * inserting auxiliary terminals joined with h parallel edges.  Min-cuts are
 * preserved; already-normalized networks come back unchanged.  Requires h to
 * be the minimum source min-cut. */
Network normalize_degrees(const Network& net, size_t h);

/* Random linear multicast at rate h on the reverse network (its single
 * source is the original sink).  Coefficients are resampled until every
 * sink matrix F_i is invertible; throws after `retries` failures with a hint
 * to grow the field. */
MulticastSolution multicast_reverse(const Network& reverse_net, size_t h,
                                    Field field, Rng& rng,
                                    size_t retries = 64);

/* Exact evaluation of the subspace-counting inequality
 * (gauss(h,k)_q - q^(k(h-k))) * C(E, h-k) < gauss(h,k)_q, which certifies
 * that a random k-dim subspace avoiding all (h-k)-row spans of G exists. */
GaussianMargin gaussian_margin(size_t h, size_t k, size_t e_count,
                               std::uint64_t q);

/* Random full-rank k x h matrix whose row space meets every span of at most
 * h-k rows of g trivially, then row-reduced so its pivot columns carry I_k.
 * Rows of g are deduplicated before subset enumeration.  Throws after
 * `retries` failures, naming a violating row subset of the last attempt. */
Matrix find_d(const Matrix& g, size_t h, size_t k, Rng& rng,
              size_t retries = 64);

struct SumCodeOptions {
  bool auto_grow_field = true;
  size_t growth_steps = 8;
  size_t multicast_retries = 64;
  size_t d_retries = 64;
};

/* The Singleton-matching sum code: transfer matrix transposed from a reverse
 * multicast solution, source matrices E_i = D (F_i')^{-1} A_Out(sigma_i).
 * The returned certificate always equals h - k + 1.  When the field is too
 * small the next prime at least twice as large is tried, until the gaussian
 * margin certifies sufficiency or the randomized search succeeds; both paths
 * are recorded in the bundle notes. */
SumCodeBundle construct_sum_code(const NetworkPtr& net, size_t k, Field field,
                                 std::uint64_t seed,
                                 const SumCodeOptions& opts = {});

/* Three-layer specialization (sources -> relays -> sink, one sink edge per
 * relay) built from support-constrained polynomial encoders over distinct
 * nonzero evaluation points, one per relay; deterministic, requires
 * q - 1 >= number of relays.  Achieves d_min = c* - k + 1 where c* is the
 * minimum source out-degree, without touching the network. */
SumCodeBundle three_layer_sum_code(const NetworkPtr& net, size_t k, Field field);

}  // namespace nfc

#endif
