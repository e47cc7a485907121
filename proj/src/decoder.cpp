// SPDX-License-Identifier: Apache-2.0
#include "nfc/decoder.hpp"

#include <algorithm>
#include <set>

namespace nfc {

namespace {

struct Candidate {
  Vec a;
  Vec x;
  Vec z;
};

/* Shared solver: find all (x, z) with x*F + z*G = y on the non-star
 * coordinates, z supported on `support`.  Returns the candidate target value
 * and throws `ambiguous` when the solution set maps to more than one a. */
std::optional<Candidate> solve_support(const LinearNetworkCode& code,
                                       const Matrix& tk,
                                       const ReceivedWord& y,
                                       const std::vector<size_t>& support,
                                       bool* ambiguous) {
  const Matrix& fmat = code.matrices().f;
  const Matrix& gmat = code.matrices().g;
  const size_t sk = fmat.rows();

  std::vector<size_t> cols;
  for (size_t c = 0; c < y.values.size(); ++c)
    if (!y.star[c]) cols.push_back(c);

  Matrix m = Matrix::vstack(fmat, gmat.rows_at(support)).cols_at(cols);
  Vec rhs(cols.size());
  for (size_t i = 0; i < cols.size(); ++i) rhs[i] = y.values[cols[i]];

  auto sol = solve_left(m, rhs);
  if (!sol) return std::nullopt;

  Vec x0(sol->particular.begin(), sol->particular.begin() + sk);
  Vec a0 = vec_mat(x0, tk);
  for (size_t r = 0; r < sol->homogeneous.rows(); ++r) {
    Vec h = sol->homogeneous.row(r);
    Vec hx(h.begin(), h.begin() + sk);
    if (!vec_is_zero(vec_mat(hx, tk))) {
      *ambiguous = true;
      return std::nullopt;
    }
  }

  Candidate cand;
  cand.a = std::move(a0);
  cand.x = std::move(x0);
  cand.z.assign(code.net().edge_count(), 0);
  for (size_t i = 0; i < support.size(); ++i)
    cand.z[support[i]] = sol->particular[sk + i];
  return cand;
}

DecodeResult from_candidate(Candidate&& c) {
  DecodeResult r;
  r.status = DecodeResult::Status::Ok;
  r.value = std::move(c.a);
  r.witness_x = std::move(c.x);
  r.witness_z = std::move(c.z);
  return r;
}

}  // namespace

DecodeResult md_decode(const LinearNetworkCode& code, const Matrix& t,
                       size_t k, const ReceivedWord& y, size_t tau) {
  require(!y.has_star(), "md_decode expects a star-free word");
  require(y.values.size() == code.net().in_gamma().size(),
          "received word length mismatch");
  Matrix tk = Matrix::kron_identity(t, k);
  const size_t ecount = code.net().edge_count();

  for (size_t w = 0; w <= tau; ++w) {
    std::optional<Candidate> first;
    bool ambiguous = false;
    for_each_subset(ecount, w, [&](const std::vector<size_t>& rho) {
      auto cand = solve_support(code, tk, y, rho, &ambiguous);
      ensure(!ambiguous,
             "md_decode: one support admits several target values "
             "(d_min < 2*tau+1?)");
      if (cand) {
        if (!first) {
          first = std::move(cand);
        } else {
          // equal-size supports must agree on a
          ensure(first->a == cand->a,
                 "md_decode: equal-size supports disagree on the result "
                 "(d_min < 2*tau+1?)");
        }
      }
      return true;
    });
    if (first) return from_candidate(std::move(*first));
  }
  return DecodeResult{};  // more than tau errors
}

DecodeResult outage_decode(const LinearNetworkCode& code, const Matrix& t,
                           size_t k, const ReceivedWord& y,
                           const std::vector<size_t>& rho_o) {
  require(y.values.size() == code.net().in_gamma().size(),
          "received word length mismatch");
  const auto& in_gamma = code.net().in_gamma();
  for (size_t c = 0; c < y.star.size(); ++c)
    if (y.star[c])
      require(std::find(rho_o.begin(), rho_o.end(), in_gamma[c]) != rho_o.end(),
              "star coordinate outside the declared outage set");

  Matrix tk = Matrix::kron_identity(t, k);
  bool ambiguous = false;
  auto cand = solve_support(code, tk, y, rho_o, &ambiguous);
  require(!ambiguous, "outage_decode: several target values fit "
                      "(d_min <= |rho_o|?)");
  require(cand.has_value(), "outage_decode: no message explains the word");
  return from_candidate(std::move(*cand));
}

DecodeResult erasure_decode(const LinearNetworkCode& code, const Matrix& t,
                            size_t k, const ReceivedWord& y) {
  require(y.values.size() == code.net().in_gamma().size(),
          "received word length mismatch");
  require(y.star_count() < y.values.size(), "all coordinates erased");
  Matrix tk = Matrix::kron_identity(t, k);
  bool ambiguous = false;
  auto cand = solve_support(code, tk, y, {}, &ambiguous);
  require(!ambiguous,
          "erasure_decode: several target values match (stars >= d_min?)");
  require(cand.has_value(), "erasure_decode: no message matches the word");
  return from_candidate(std::move(*cand));
}

DecodeResult decode_errors_and_erasures(const LinearNetworkCode& code,
                                        const Matrix& t, size_t k,
                                        const ReceivedWord& y,
                                        const std::vector<size_t>& rho_o,
                                        size_t tau) {
  require(y.values.size() == code.net().in_gamma().size(),
          "received word length mismatch");
  const auto& in_gamma = code.net().in_gamma();
  for (size_t c = 0; c < y.star.size(); ++c)
    if (y.star[c])
      require(std::find(rho_o.begin(), rho_o.end(), in_gamma[c]) != rho_o.end(),
              "star coordinate outside the declared outage set");
  Matrix tk = Matrix::kron_identity(t, k);
  const size_t ecount = code.net().edge_count();
  std::set<size_t> known(rho_o.begin(), rho_o.end());

  for (size_t w = 0; w <= tau; ++w) {
    std::optional<Candidate> first;
    for_each_subset(ecount, w, [&](const std::vector<size_t>& rho) {
      for (size_t e : rho)
        if (known.count(e)) return true;  // equivalent to a smaller support
      std::vector<size_t> support = rho_o;
      support.insert(support.end(), rho.begin(), rho.end());
      std::sort(support.begin(), support.end());
      bool ambiguous = false;
      auto cand = solve_support(code, tk, y, support, &ambiguous);
      ensure(!ambiguous, "errors-and-erasures: budget exceeds d_min - 1");
      if (cand) {
        if (!first)
          first = std::move(cand);
        else
          ensure(first->a == cand->a,
                 "errors-and-erasures: supports disagree on the result");
      }
      return true;
    });
    if (first) return from_candidate(std::move(*first));
  }
  return DecodeResult{};
}

}  // namespace nfc
