// SPDX-License-Identifier: Apache-2.0
#ifndef NFC_DISTANCE_HPP
#define NFC_DISTANCE_HPP

#include <optional>
#include <vector>

#include "nfc/linear_code.hpp"

namespace nfc {

struct PatternRankReport {
  std::vector<size_t> pattern;
  size_t rank = 0;
  CutReport realizing_cut;  // a minimum sigma_rho -- gamma cut in N_rho
};

/* d_min plus a verifiable witness: an error pattern of that size together
 * with a message x and a matching error z such that x*F = z*G while the
 * target value of x is nonzero. */
struct DistanceCertificate {
  size_t d_min = 0;
  std::vector<size_t> witness_pattern;
  Vec witness_x;
  Vec witness_z;
};

struct PhiWitness {
  Vec x;
  Vec z;
};

// Basis of span{ rows of G indexed by rho }, as a matrix of basis rows.
Matrix delta_space(const LinearNetworkCode& code,
                   const std::vector<size_t>& rho);

/* Is Phi intersect Delta(rho) nonempty?  Decided with one left-nullspace
 * computation on [F; G_rho] instead of enumerating Phi: any kernel vector
 * (x | w) has x*F = (-w)*G_rho, so the intersection is nonempty exactly when
 * some kernel vector carries a nonzero target value. */
std::optional<PhiWitness> phi_intersects(const LinearNetworkCode& code,
                                         const Matrix& t, size_t k,
                                         const std::vector<size_t>& rho);

/* Smallest |rho| with Phi meeting Delta(rho), searched by increasing size.
 * Patterns whose rank is below their size are skipped: they are dominated by
 * a smaller pattern that an earlier round already covered.  A witness always
 * exists at |rho| = |In(gamma)|. */
DistanceCertificate min_distance(const LinearNetworkCode& code,
                                 const Matrix& t, size_t k);

/* Code metric d_C(y1, y2): minimum Hamming weight of z with z*G = y1 - y2.
 * Plain subset search over the distinct rows of G up to weight 6, then a
 * meet-in-the-middle split.  Always finite because G holds identity rows. */
size_t dist_c(const LinearNetworkCode& code, const Vec& y1, const Vec& y2);

// Rank(rho) = size of a minimum sigma_rho -- gamma cut in N_rho.
PatternRankReport pattern_rank(const Network& net,
                               const std::vector<size_t>& rho);

/* All size-delta patterns with rank delta.  Throws once more than `limit`
 * patterns accumulate, since q >= |R(delta)| is also the field-size
 * requirement of the identity construction. */
std::vector<std::vector<size_t>> enumerate_r(const Network& net, size_t delta,
                                             size_t limit = 20000);

// d_min >= 2*tau + 1
bool is_robust(const LinearNetworkCode& code, const Matrix& t, size_t k,
               size_t tau);

// Lexicographic w-subsets of [0, n); fn returns false to stop early.
template <typename Fn>
bool for_each_subset(size_t n, size_t w, Fn&& fn) {
  if (w > n) return true;
  std::vector<size_t> idx(w);
  for (size_t i = 0; i < w; ++i) idx[i] = i;
  for (;;) {
    if (!fn(const_cast<const std::vector<size_t>&>(idx))) return false;
    size_t i = w;
    while (i > 0) {
      --i;
      if (idx[i] != i + n - w) {
        ++idx[i];
        for (size_t j = i + 1; j < w; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return true;
    }
    if (w == 0) return true;
  }
}

}  // namespace nfc

#endif
