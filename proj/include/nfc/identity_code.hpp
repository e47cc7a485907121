// SPDX-License-Identifier: Apache-2.0
#ifndef NFC_IDENTITY_CODE_HPP
#define NFC_IDENTITY_CODE_HPP

#include <map>
#include <string>

#include "nfc/distance.hpp"
#include "nfc/linear_code.hpp"
#include "nfc/rng.hpp"

namespace nfc {

/* Channels of the extended network: the k imaginary message channels per
 * source, one imaginary error channel per edge, and the real edges.  Every
 * channel owns an extended coding vector indexed by [sk] + E (messages
 * first, then one coordinate per edge). */
struct Channel {
  enum class Kind { Message, ErrorChan, Edge };
  Kind kind = Kind::Edge;
  size_t index = 0;  // message ordinal in [0, sk) / edge id otherwise

  friend bool operator==(const Channel& a, const Channel& b) {
    return a.kind == b.kind && a.index == b.index;
  }
};

/* Walks the edges once, upstream to downstream, maintaining one dynamic cut
 * per pattern in R(delta).  The loop invariant — the vectors of every
 * CUT_rho restricted to [sk] + rho span the whole (sk+delta)-space — is
 * re-checked after each update; on termination each cut sits inside
 * In(gamma), which forces Phi and Delta(rho) apart. */
class ConstructionState {
 public:
  ConstructionState(NetworkPtr net, Field field, size_t k, size_t delta,
                    std::vector<std::vector<size_t>> patterns);

  const Network& net() const { return *net_; }
  const Field& field() const { return field_; }
  size_t k() const { return k_; }
  size_t delta() const { return delta_; }
  size_t coord_count() const { return sk_ + net_->edge_count(); }
  size_t pattern_count() const { return patterns_.size(); }

  // The extended coding vector of a channel (unit vectors for imaginary ones).
  Vec f_tilde(const Channel& ch) const;
  bool processed(size_t edge) const { return processed_[edge]; }
  bool on_any_path(size_t edge) const { return !path_roles_[edge].empty(); }
  const std::vector<Channel>& cut(size_t pattern_ordinal) const {
    return cuts_[pattern_ordinal];
  }

  /* Pick g_e inside the span of the predecessors' vectors (plus the edge's
   * own error channel) and outside every forbidden sum space.  Rejection
   * sampling with an exhaustive fallback over small spans. */
  Vec choose_g(size_t edge, Rng& rng) const;

  // Normalize g into f_e with f_e(e) = 1, record the local coefficients,
  // swap the path predecessors out of the affected cuts, re-assert the
  // invariant.
  void update_edge(size_t edge, const Vec& g);

  // Convenience: full upstream-to-downstream pass.
  void run(Rng& rng);

  // Local coefficient tables accumulated so far.
  const std::vector<Matrix>& source_matrices() const { return b_; }
  const Matrix& transfer() const { return k_mat_; }

  void assert_invariant() const;  // dim check for every pattern
  void assert_cuts_at_sink() const;

 private:
  struct Role {
    size_t pattern;   // ordinal into patterns_
    Channel pred;     // previous channel on that pattern's path
  };

  std::vector<Channel> ambient(size_t edge) const;
  Matrix restricted(const std::vector<Channel>& chans, size_t pattern) const;
  bool forbidden(size_t edge, const Vec& candidate) const;
  Matrix forbidden_basis(size_t edge, size_t pattern) const;

  NetworkPtr net_;
  Field field_;
  size_t k_, delta_, sk_;
  std::vector<std::vector<size_t>> patterns_;
  std::vector<std::vector<Channel>> cuts_;
  std::vector<std::vector<Role>> path_roles_;  // per edge
  std::vector<Vec> f_edge_;
  std::vector<char> processed_;
  std::vector<Matrix> b_;
  Matrix k_mat_;
};

// Builds the state: enumerates R(delta), finds a path family per pattern,
// initializes the cuts with the imaginary channels.
ConstructionState init_state(const NetworkPtr& net, Field field, size_t k,
                             size_t delta, size_t r_limit = 20000);

struct IdentityCodeResult {
  std::shared_ptr<const LinearNetworkCode> code;
  DistanceCertificate certificate;
  long long delta = 0;
  size_t r_count = 0;  // |R(delta)|
  std::uint64_t q = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
};

/* Identity-target code with d_min = delta + 1 exactly, where
 * delta = min over source subsets of (mincut(I) - k|I|).  Needs
 * q >= |R(delta)|; with auto_grow the field is replaced by a prime field of
 * adequate size instead of failing.  delta = 0 degenerates to plain routing
 * along disjoint paths.  The certificate is recomputed with the distance
 * module. */
IdentityCodeResult construct_identity_code(const NetworkPtr& net, size_t k,
                                           Field field, std::uint64_t seed,
                                           size_t r_limit = 20000,
                                           bool auto_grow = false);

}  // namespace nfc

#endif
