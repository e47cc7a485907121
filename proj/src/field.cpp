// SPDX-License-Identifier: Apache-2.0
#include "nfc/field.hpp"

#include <algorithm>
#include <sstream>

namespace nfc {

namespace {

/* Primitive polynomials over GF(2) for m = 2..16, packed as bit masks
 * (bit i = coefficient of x^i).  Classic LFSR table; x is primitive modulo
 * each of them, which the constructor verifies anyway. */
constexpr std::uint32_t kBinaryPrimitive[17] = {
    0,      0,      0x7,    0xb,    0x13,    0x25,    0x43,    0x89,
    0x11d,  0x211,  0x409,  0x805,  0x1053,  0x201b,  0x4443,  0x8003,
    0x1100b};

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> fs;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      fs.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) fs.push_back(n);
  return fs;
}

// --- dense polynomial helpers over GF(p), coefficients low-to-high ---

using Poly = std::vector<fval>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b, fval p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = fval((c[i + j] + std::uint64_t(a[i]) * b[j]) % p);
  trim(c);
  return c;
}

// a mod f, f monic nonconstant
Poly poly_mod(Poly a, const Poly& f, fval p) {
  trim(a);
  const size_t df = f.size() - 1;
  while (a.size() > df) {
    fval lead = a.back();
    size_t shift = a.size() - 1 - df;
    if (lead != 0) {
      for (size_t i = 0; i < f.size(); ++i) {
        std::uint64_t sub = std::uint64_t(lead) * f[i] % p;
        fval& c = a[shift + i];
        c = fval((c + p - sub) % p);
      }
    }
    trim(a);
    if (a.empty()) break;
  }
  return a;
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, fval p) {
  Poly r{1};
  base = poly_mod(std::move(base), f, p);
  while (e) {
    if (e & 1) r = poly_mod(poly_mul(r, base, p), f, p);
    base = poly_mod(poly_mul(base, base, p), f, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, fval p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    // make b monic for the mod step
    fval lead = b.back();
    if (lead != 1) {
      fval linv = 1;
      // inverse of lead mod p by Fermat
      std::uint64_t e = p - 2, acc = 1, base = lead;
      while (e) {
        if (e & 1) acc = acc * base % p;
        base = base * base % p;
        e >>= 1;
      }
      linv = fval(acc);
      for (auto& c : b) c = fval(std::uint64_t(c) * linv % p);
    }
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/* Rabin's irreducibility test: f (monic, degree m) is irreducible over GF(p)
 * iff x^(p^m) == x mod f and gcd(x^(p^(m/r)) - x, f) = 1 for each prime r|m.
 * x^(p^k) is computed by iterating the Frobenius map k times. */
bool is_irreducible(const Poly& f, fval p) {
  const size_t m = f.size() - 1;
  if (m == 0) return false;
  if (m == 1) return true;
  auto frob_iter = [&](size_t k) {
    Poly h{0, 1};  // x
    for (size_t i = 0; i < k; ++i) h = poly_powmod(h, p, f, p);
    return h;
  };
  Poly xpm = frob_iter(m);
  Poly x{0, 1};
  if (poly_mod(Poly{xpm}, f, p) != poly_mod(Poly{x}, f, p)) return false;
  for (std::uint64_t r : prime_factors(m)) {
    Poly h = frob_iter(m / r);
    // h - x
    Poly d = h;
    if (d.size() < 2) d.resize(2, 0);
    d[1] = fval((d[1] + p - 1) % p);
    trim(d);
    Poly g = poly_gcd(f, d, p);
    if (!(g.size() == 1)) return false;
  }
  return true;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t next_prime_at_least(std::uint64_t n) {
  while (!is_prime(n)) ++n;
  return n;
}

std::vector<fval> FieldSpec::unpack(fval a) const {
  std::vector<fval> d(m_);
  for (unsigned i = 0; i < m_; ++i) {
    d[i] = a % p_;
    a /= p_;
  }
  return d;
}

fval FieldSpec::pack(const std::vector<fval>& digits) const {
  fval v = 0;
  for (size_t i = digits.size(); i-- > 0;) v = fval(v * p_ + digits[i] % p_);
  return v;
}

fval FieldSpec::add(fval a, fval b) const {
  if (m_ == 1) return fval((std::uint64_t(a) + b) % p_);
  if (p_ == 2) return a ^ b;
  auto da = unpack(a), db = unpack(b);
  for (unsigned i = 0; i < m_; ++i) da[i] = fval((da[i] + db[i]) % p_);
  return pack(da);
}

fval FieldSpec::neg(fval a) const {
  if (m_ == 1) return a == 0 ? 0 : fval(p_ - a);
  if (p_ == 2) return a;
  auto d = unpack(a);
  for (auto& c : d) c = c == 0 ? 0 : fval(p_ - c);
  return pack(d);
}

fval FieldSpec::sub(fval a, fval b) const { return add(a, neg(b)); }

fval FieldSpec::mul(fval a, fval b) const {
  if (m_ == 1) return fval(std::uint64_t(a) * b % p_);
  if (a == 0 || b == 0) return 0;
  std::uint64_t la = log_[a], lb = log_[b];
  return exp_[(la + lb) % (q_ - 1)];
}

fval FieldSpec::inv(fval a) const {
  require(a != 0, "division by zero in " + describe());
  if (m_ == 1) {
    std::uint64_t e = p_ - 2, acc = 1, base = a;
    while (e) {
      if (e & 1) acc = acc * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return fval(acc);
  }
  std::uint64_t la = log_[a];
  return exp_[(q_ - 1 - la) % (q_ - 1)];
}

fval FieldSpec::div(fval a, fval b) const { return mul(a, inv(b)); }

fval FieldSpec::pow(fval a, std::uint64_t e) const {
  fval r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

void FieldSpec::init_tables() {
  q_ = 1;
  for (unsigned i = 0; i < m_; ++i) {
    q_ *= p_;
    require(q_ <= (1u << 30), "field too large");
  }

  if (m_ > 1) {
    // Multiply-by-x-and-reduce, walking the whole multiplicative group to
    // find a primitive element, then freeze exp/log tables on it.
    auto poly_of = [&](fval v) {
      Poly a = unpack(v);
      trim(a);
      return a;
    };
    auto val_of = [&](const Poly& a) {
      std::vector<fval> d(m_, 0);
      for (size_t i = 0; i < a.size(); ++i) d[i] = a[i];
      return pack(d);
    };
    auto order_of = [&](fval g) -> std::uint64_t {
      std::uint64_t ord = 1;
      Poly acc = poly_of(g);
      Poly gp = poly_of(g);
      while (val_of(acc) != 1) {
        acc = poly_mod(poly_mul(acc, gp, p_), modulus_, p_);
        ++ord;
        if (ord > q_) return 0;  // not invertible: modulus reducible
      }
      return ord;
    };
    // Scan from x upward; constants have order dividing p-1, never primitive
    // here.  For the built-in binary table x itself wins immediately.
    fval gen = 0;
    for (fval cand = fval(p_); cand < q_; ++cand) {
      if (order_of(cand) == q_ - 1) {
        gen = cand;
        break;
      }
    }
    ensure(gen != 0, "no primitive element found (modulus not irreducible?)");
    omega_ = gen;

    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    Poly g = poly_of(gen);
    Poly acc{1};
    for (std::uint64_t i = 0; i < q_ - 1; ++i) {
      fval v = val_of(acc);
      exp_[i] = v;
      log_[v] = std::uint32_t(i);
      acc = poly_mod(poly_mul(acc, g, p_), modulus_, p_);
    }
    ensure(val_of(acc) == 1, "omega order mismatch");
  } else {
    // Smallest generator of (Z/p)*.
    auto fs = prime_factors(p_ - 1);
    fval gen = 1;
    for (fval cand = 2; cand < p_; ++cand) {
      bool ok = true;
      for (auto f : fs)
        if (pow(cand, (p_ - 1) / f) == 1) {
          ok = false;
          break;
        }
      if (ok) {
        gen = cand;
        break;
      }
    }
    ensure(p_ == 2 || gen != 1, "no primitive root");
    omega_ = (p_ == 2) ? 1 : gen;
  }

  // omega generates the multiplicative group: omega^(q-1) = 1 and
  // omega^((q-1)/f) != 1 for every prime divisor f of q-1.
  ensure(pow(omega_, q_ - 1) == 1, "omega^(q-1) != 1");
  for (auto f : prime_factors(q_ - 1))
    ensure(pow(omega_, (q_ - 1) / f) != 1, "omega has a proper order");
}

std::shared_ptr<const FieldSpec> FieldSpec::prime(fval p) {
  require(is_prime(p), "characteristic must be prime");
  auto fs = std::shared_ptr<FieldSpec>(new FieldSpec());
  fs->p_ = p;
  fs->m_ = 1;
  fs->modulus_ = {0, 1};  // x
  fs->init_tables();
  return fs;
}

std::shared_ptr<const FieldSpec> FieldSpec::binary_ext(unsigned m) {
  require(m >= 2 && m <= 16, "binary extension table covers m in [2,16]");
  std::vector<fval> mod(m + 1, 0);
  for (unsigned i = 0; i <= m; ++i)
    if (kBinaryPrimitive[m] >> i & 1) mod[i] = 1;
  return extension(2, std::move(mod));
}

std::shared_ptr<const FieldSpec> FieldSpec::extension(fval p,
                                                      std::vector<fval> modulus) {
  require(is_prime(p), "characteristic must be prime");
  require(modulus.size() >= 3, "extension modulus must have degree >= 2");
  for (auto& c : modulus) require(c < p, "modulus coefficient out of range");
  require(modulus.back() == 1, "modulus must be monic");
  require(is_irreducible(modulus, p), "modulus is reducible over GF(p)");
  auto fs = std::shared_ptr<FieldSpec>(new FieldSpec());
  fs->p_ = p;
  fs->m_ = unsigned(modulus.size() - 1);
  fs->modulus_ = std::move(modulus);
  fs->init_tables();
  return fs;
}

std::shared_ptr<const FieldSpec> FieldSpec::of_order(std::uint64_t q) {
  require(q >= 2, "field order must be at least 2");
  if (is_prime(q)) return prime(fval(q));
  unsigned m = 0;
  std::uint64_t v = q;
  while (v % 2 == 0) {
    v /= 2;
    ++m;
  }
  require(v == 1, "order must be a prime or a power of two");
  return binary_ext(m);
}

std::string FieldSpec::describe() const {
  std::ostringstream os;
  if (m_ == 1)
    os << "GF(" << p_ << ")";
  else
    os << "GF(" << p_ << "^" << m_ << ")";
  return os.str();
}

FieldElement field_arith(const FieldElement& a, const FieldElement& b,
                         FieldOp op) {
  switch (op) {
    case FieldOp::Add:
      return a + b;
    case FieldOp::Sub:
      return a - b;
    case FieldOp::Mul:
      return a * b;
    case FieldOp::Div:
      return a / b;
  }
  throw DomainError("unknown field operation");
}

}  // namespace nfc
