// SPDX-License-Identifier: Apache-2.0
#ifndef NFC_DECODER_HPP
#define NFC_DECODER_HPP

#include "nfc/distance.hpp"
#include "nfc/linear_code.hpp"

namespace nfc {

struct DecodeResult {
  enum class Status { Ok, DetectedFailure };
  Status status = Status::DetectedFailure;
  Vec value;      // a = x (T kron I_k), length k*l
  Vec witness_x;  // a message achieving the decoding
  Vec witness_z;  // the matching error

  bool ok() const { return status == Status::Ok; }
};

/* Minimum-distance decoder.  Enumerates error supports of size 0..tau in
 * increasing size and solves x*F = y - z*G per support; the first size with
 * a solution is a minimum-distance one, and all solutions across supports of
 * that size must agree on the target value a.  Requires d_min >= 2*tau + 1
 * for correctness; disagreeing candidates are therefore reported as an
 * invariant breach, while "no support works" comes back as a detected
 * failure (more than tau errors happened). */
DecodeResult md_decode(const LinearNetworkCode& code, const Matrix& t,
                       size_t k, const ReceivedWord& y, size_t tau);

/* Outage decoder with known locations rho_o: solves x*F + z*G = y on the
 * non-star coordinates with z matching rho_o.  Stars may appear only on
 * In(gamma) coordinates whose edges lie in rho_o; upstream nodes are assumed
 * to have substituted zeros for outaged inputs.  Unique when
 * d_min >= |rho_o| + 1. */
DecodeResult outage_decode(const LinearNetworkCode& code, const Matrix& t,
                           size_t k, const ReceivedWord& y,
                           const std::vector<size_t>& rho_o);

/* Erasure decoder for stars on In(gamma) only: pure Hamming-metric matching
 * of x*F against the non-star coordinates, no error-pattern search.  Unique
 * when the star count is below d_min. */
DecodeResult erasure_decode(const LinearNetworkCode& code, const Matrix& t,
                            size_t k, const ReceivedWord& y);

/* Errors-and-erasures composition used by the gradient layer: stars are
 * known outages, plus up to tau unknown errors anywhere.  Unique when
 * star count + 2*tau < d_min. */
DecodeResult decode_errors_and_erasures(const LinearNetworkCode& code,
                                        const Matrix& t, size_t k,
                                        const ReceivedWord& y,
                                        const std::vector<size_t>& rho_o,
                                        size_t tau);

}  // namespace nfc

#endif
