// SPDX-License-Identifier: Apache-2.0
#ifndef NFC_GRADIENT_HPP
#define NFC_GRADIENT_HPP

#include <map>
#include <optional>
#include <set>
#include <string>

#include "nfc/decoder.hpp"
#include "nfc/rational.hpp"
#include "nfc/sum_code.hpp"

namespace nfc {

struct WorkerProfile {
  Rational storage;  // r_i: fraction of the data the worker can hold
  Rational speed;    // s_i: fraction of the data computed per unit time
};

/* K data subsets with relative sizes summing to one; zeta[i] lists the
 * subset indices (0-based) stored by worker i. */
struct DataAssignment {
  size_t subset_count = 0;
  std::vector<Rational> sizes;
  std::vector<std::set<size_t>> zeta;

  size_t worker_count() const { return zeta.size(); }
  size_t min_replication() const;
  std::vector<Rational> load_vector() const;  // mu_i = sum of stored sizes
};

/* Straggler- and Byzantine-tolerant gradient coding scheme: a rate-m sum
 * code on the three-layer network N(Z) whose F column for worker i is the
 * worker's encoder f_i (supported on Z_i by construction). */
struct GradientCodingScheme {
  DataAssignment assignment;
  NetworkPtr net;  // N(Z): subsets -> workers -> master
  std::shared_ptr<const LinearNetworkCode> code;
  size_t tau_s = 0, tau_b = 0, m = 1, p = 1;
  DistanceCertificate cert;
  std::uint64_t q = 0;
  std::uint64_t seed = 0;

  // column of the global matrix belonging to worker i (length K*m)
  Vec encoder_column(size_t worker) const;
};

/* Three-layer network of an assignment: one source per data subset, one
 * relay per worker, edges for storage, one edge per worker into the master.
 * Throws when some subset is assigned nowhere. */
NetworkPtr build_network(const DataAssignment& assignment);

// min replication >= tau_s + m
bool check_replication(const DataAssignment& assignment, size_t tau_s,
                       size_t m);

/* Builds the scheme: requires m | p, replication >= tau_s + m, and (for
 * tau_b > 0) replication >= 2*tau_b + m; the underlying sum code then has
 * d_min = c* - m + 1 >= max(tau_s + 1, 2*tau_b + 1). */
GradientCodingScheme build_scheme(const DataAssignment& assignment,
                                  size_t tau_s, size_t tau_b, size_t m,
                                  size_t p, Field field, std::uint64_t seed);

/* Blockwise encoding at worker i: gradients must be supplied exactly for
 * Z_i, each of length p; the message has p/m symbols, symbol l being the
 * inner product of (g_1(l),...,g_K(l)) with the worker's F column. */
Vec worker_encode(const GradientCodingScheme& scheme, size_t worker,
                  const std::map<size_t, Vec>& gradients);

/* Decodes the full gradient sum from per-worker messages; empty optionals
 * mark stragglers.  Erasure decoding when tau_b = 0, errors-and-erasures
 * otherwise.  Throws DomainError when the adversary exceeded the budget. */
Vec master_decode(const GradientCodingScheme& scheme,
                  const std::vector<std::optional<Vec>>& messages,
                  size_t tau_b);

/* Water-filling load optimizer: mu_i = min(r_i, t* s_i) with the smallest t*
 * such that the loads sum to tau_s + m.  Exact over rationals; minimizes the
 * overall computation time max_i mu_i / s_i. */
std::vector<Rational> optimize_load(const std::vector<WorkerProfile>& profiles,
                                    size_t tau_s, size_t m);

/* Interval filling: wraps worker segments of lengths mu around the unit
 * circle until it is covered tau_s + m times; the induced breakpoints become
 * the data subsets.  Realizes mu exactly. */
DataAssignment load_to_assignment(const std::vector<Rational>& mu,
                                  size_t tau_s, size_t m);

struct SimulationReport {
  bool success = false;
  Vec decoded;
  Vec expected;
  size_t stragglers = 0;
  size_t corrupted = 0;
  std::string failure;
  long long encode_us = 0, attack_us = 0, decode_us = 0;
};

/* End-to-end run: encode at every worker, drop the stragglers, add the
 * Byzantine corruptions (explicit vectors, or seeded random nonzero ones for
 * workers mapped to nullopt), decode at the master, compare against the
 * direct sum. */
SimulationReport simulate(const GradientCodingScheme& scheme,
                          const std::vector<Vec>& gradients,
                          const std::set<size_t>& stragglers,
                          const std::map<size_t, std::optional<Vec>>& byzantine,
                          std::uint64_t seed);

/* Best-effort ingestion of real-valued gradients: fixed-point quantization
 * into a prime field with the scale recorded next to the data.  Rounding is
 * the caller's accepted loss; magnitudes at or beyond p/(2*scale) throw. */
class FixedPointCodec {
 public:
  FixedPointCodec(Field prime_field, std::uint64_t scale);
  Vec encode(const std::vector<double>& xs) const;
  std::vector<double> decode(const Vec& vs) const;
  std::uint64_t scale() const { return scale_; }

 private:
  Field f_;
  std::uint64_t scale_;
};

}  // namespace nfc

#endif
