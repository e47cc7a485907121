// SPDX-License-Identifier: Apache-2.0
#ifndef NFC_FIELD_HPP
#define NFC_FIELD_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nfc/error.hpp"

namespace nfc {

/* Canonical packed value of a field element.
 * Prime field GF(p): the residue itself, in [0, p).
 * Extension GF(p^m): coefficients of the residue polynomial packed p-adically,
 * value = sum c_i * p^i with c_0 the constant term.  Always reduced, so
 * equality of values is equality of elements. */
using fval = std::uint32_t;

/* Exact arithmetic in GF(p^m).
 *
 * Prime fields work for any prime p.  Binary extensions GF(2^m), m <= 16,
 * come with a built-in primitive modulus table; other extensions are accepted
 * when the caller supplies an irreducible modulus.  Construction verifies
 * primality of p, irreducibility of the modulus and primitivity of omega,
 * and precomputes exp/log tables for extension fields.
 */
class FieldSpec {
 public:
  static std::shared_ptr<const FieldSpec> prime(fval p);
  static std::shared_ptr<const FieldSpec> binary_ext(unsigned m);
  // General GF(p^m); modulus coefficients low-to-high, length m+1, monic.
  static std::shared_ptr<const FieldSpec> extension(fval p,
                                                    std::vector<fval> modulus);
  // Dispatch on the order: prime -> prime field, 2^m -> binary extension.
  static std::shared_ptr<const FieldSpec> of_order(std::uint64_t q);

  fval characteristic() const { return p_; }
  unsigned degree() const { return m_; }
  std::uint64_t order() const { return q_; }
  const std::vector<fval>& modulus() const { return modulus_; }
  fval omega() const { return omega_; }

  fval add(fval a, fval b) const;
  fval sub(fval a, fval b) const;
  fval neg(fval a) const;
  fval mul(fval a, fval b) const;
  fval inv(fval a) const;  // throws DomainError on 0
  fval div(fval a, fval b) const;
  fval pow(fval a, std::uint64_t e) const;

  bool same_as(const FieldSpec& other) const {
    return p_ == other.p_ && m_ == other.m_ && modulus_ == other.modulus_;
  }

  // Digits of the packed representation, low-to-high, length m.
  std::vector<fval> unpack(fval a) const;
  fval pack(const std::vector<fval>& digits) const;

  std::string describe() const;

 private:
  FieldSpec() = default;
  void init_tables();

  fval p_ = 0;
  unsigned m_ = 0;
  std::uint64_t q_ = 0;
  std::vector<fval> modulus_;  // low-to-high, length m_+1 (monic); for m=1: {0,1}
  fval omega_ = 0;
  // exp/log tables over the multiplicative group, built for extensions.
  std::vector<fval> exp_;           // exp_[i] = omega^i, length q-1
  std::vector<std::uint32_t> log_;  // log_[v] for v != 0
};

using Field = std::shared_ptr<const FieldSpec>;

/* One element bound to its field; convenience wrapper used at API edges and
 * in tests.  Matrix code works on raw fval with a shared FieldSpec instead. */
class FieldElement {
 public:
  FieldElement(Field f, fval v) : f_(std::move(f)), v_(v) {
    require(v_ < f_->order(), "field element out of range");
  }

  fval value() const { return v_; }
  const Field& field() const { return f_; }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    a.check(b);
    return FieldElement(a.f_, a.f_->add(a.v_, b.v_));
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    a.check(b);
    return FieldElement(a.f_, a.f_->sub(a.v_, b.v_));
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    a.check(b);
    return FieldElement(a.f_, a.f_->mul(a.v_, b.v_));
  }
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    a.check(b);
    return FieldElement(a.f_, a.f_->div(a.v_, b.v_));
  }
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.f_->same_as(*b.f_) && a.v_ == b.v_;
  }

 private:
  void check(const FieldElement& b) const {
    require(f_->same_as(*b.f_), "field spec mismatch");
  }
  Field f_;
  fval v_;
};

enum class FieldOp { Add, Sub, Mul, Div };

// Dispatch form of the four basic operations (CLI-facing).
FieldElement field_arith(const FieldElement& a, const FieldElement& b,
                         FieldOp op);

// Primality by trial division; exposed for reuse in field growth.
bool is_prime(std::uint64_t n);
std::uint64_t next_prime_at_least(std::uint64_t n);

}  // namespace nfc

#endif
