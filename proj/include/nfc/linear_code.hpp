// SPDX-License-Identifier: Apache-2.0
#ifndef NFC_LINEAR_CODE_HPP
#define NFC_LINEAR_CODE_HPP

#include <memory>
#include <vector>

#include "nfc/matrix.hpp"
#include "nfc/network.hpp"

namespace nfc {

using NetworkPtr = std::shared_ptr<const Network>;

/* F maps source messages to the sink word, G maps per-edge error injections
 * to the sink word, and the extended matrix stacks both:
 *
 *   F = [B_1; ...; B_s] (I-K)^ilde A_In(gamma)^T     (sk x |In(gamma)|)
 *   G = (I-K)^{-1} A_In(gamma)^T                     (|E| x |In(gamma)|)
 *
 * The rows of G indexed by In(gamma) always form an identity matrix. */
struct EncodingMatrices {
  Matrix f;       // sk x |In(gamma)|
  Matrix g;       // |E| x |In(gamma)|
  Matrix f_tilde; // vstack(F, G)
};

/* Error injection: z lives in F_q^{|E|} and is zero outside its support. */
struct ErrorVector {
  Vec z;
  std::vector<size_t> support;

  static ErrorVector zero(size_t edge_count) {
    return {Vec(edge_count, 0), {}};
  }
  static ErrorVector from_values(const Vec& z);
  static ErrorVector single(size_t edge_count, size_t edge, fval value);
};

/* Sink observation; star[i] marks an erased/outaged coordinate. */
struct ReceivedWord {
  Vec values;
  std::vector<char> star;

  static ReceivedWord plain(Vec v) {
    ReceivedWord w;
    w.star.assign(v.size(), 0);
    w.values = std::move(v);
    return w;
  }
  size_t star_count() const;
  bool has_star() const { return star_count() > 0; }
};

/* A (k,1) scalar linear network code: source encoding matrices B_i (k x |E|,
 * supported on Out(sigma_i)) and transfer matrix K (|E| x |E|, supported on
 * adjacent edge pairs).  The support rules plus acyclicity make I-K
 * invertible, and the encoding matrices are derived once at construction by
 * substitution along the topological edge order. */
class LinearNetworkCode {
 public:
  LinearNetworkCode(NetworkPtr net, Field field, size_t k,
                    std::vector<Matrix> source_matrices, Matrix transfer);

  const Network& net() const { return *net_; }
  const NetworkPtr& net_ptr() const { return net_; }
  const Field& field() const { return field_; }
  size_t k() const { return k_; }
  const std::vector<Matrix>& source_matrices() const { return b_; }
  const Matrix& transfer() const { return k_mat_; }
  const EncodingMatrices& matrices() const { return em_; }

 private:
  NetworkPtr net_;
  Field field_;
  size_t k_;
  std::vector<Matrix> b_;
  Matrix k_mat_;
  EncodingMatrices em_;
};

// Recomputes F and G from scratch (the constructor already did; this is the
// pure functional form and re-checks the identity-rows property).
EncodingMatrices derive_matrices(const LinearNetworkCode& code);

/* Edge-by-edge propagation of messages and injected errors in topological
 * order; the result is checked against x*F + z*G before returning. */
ReceivedWord transmit(const LinearNetworkCode& code, const Vec& x_s,
                      const ErrorVector& z);

/* Does a decoding function for f(x) = x * (T kron I_k) exist?  Holds exactly
 * when the left kernel of F is contained in the left kernel of T kron I_k. */
bool computes_function(const LinearNetworkCode& code, const Matrix& t,
                       size_t k);

}  // namespace nfc

#endif
