// SPDX-License-Identifier: Apache-2.0
#ifndef NFC_CAPACITY_HPP
#define NFC_CAPACITY_HPP

#include <optional>
#include <string>

#include "nfc/identity_code.hpp"
#include "nfc/rational.hpp"
#include "nfc/sum_code.hpp"

namespace nfc {

struct CapacityReport {
  Rational upper{0};
  Rational lower{0};
  std::string scheme;  // "sum" | "identity" | "time-sharing(l=..)"
  bool gap = false;    // tightness unknown for the time-sharing bound
};

/* min over nonempty source subsets I of (mincut(I) - 2*tau) / Rank(T_I);
 * subsets with Rank(T_I) = 0 impose no constraint.  Requires
 * 2*tau < minimum cut size. */
Rational robust_upper(const Network& net, const Matrix& t, size_t tau);

/* One round of the time-sharing scheme: a sum code over the sub-network of
 * the sources with a nonzero coefficient in that column, with source
 * matrices scaled by the coefficients. */
struct TimeSharingRound {
  SumCodeBundle bundle;               // code computes x * T_col, w' times
  std::vector<size_t> source_ordinals;  // rows of T participating
  Vec column;                          // the full column of T
};

struct TimeSharingScheme {
  std::vector<TimeSharingRound> rounds;
  size_t w_prime = 0;  // per-round computing rate
};

/* l rounds, round i computing x * T_i at rate w' = min|C| - 2*tau; combined
 * they deliver x*T computed w' times per l network uses. */
TimeSharingScheme time_sharing_scheme(const NetworkPtr& net, const Matrix& t,
                                      size_t tau, Field field,
                                      std::uint64_t seed);

struct RobustLowerResult {
  CapacityReport report;
  std::optional<SumCodeBundle> sum_witness;        // T with one column
  std::optional<IdentityCodeResult> identity_witness;  // T square invertible
  std::optional<TimeSharingScheme> time_sharing_witness;
};

/* Lower bound with an executable witness:
 *  - single column T: rate min|C| - 2*tau via the sum construction (meets
 *    the upper bound);
 *  - square invertible T: rate min over I of floor((mincut(I)-2*tau)/|I|)
 *    via the identity construction (the integral part of the upper bound);
 *  - otherwise: (min|C| - 2*tau)/l by time sharing, tightness unknown. */
RobustLowerResult robust_lower(const NetworkPtr& net, const Matrix& t,
                               size_t tau, Field field, std::uint64_t seed);

}  // namespace nfc

#endif
