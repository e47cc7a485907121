// SPDX-License-Identifier: Apache-2.0
#include "nfc/distance.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace nfc {

namespace {

// Kernel-based intersection test on precomputed matrices.
std::optional<PhiWitness> phi_hit(const Field& f, const Matrix& fmat,
                                  const Matrix& gmat, const Matrix& tk,
                                  const std::vector<size_t>& rho) {
  if (rho.empty()) return std::nullopt;  // 0 is never in Phi
  const size_t sk = fmat.rows();
  Matrix grho = gmat.rows_at(rho);
  Matrix stacked = Matrix::vstack(fmat, grho);
  Matrix kernel = stacked.left_nullspace();
  for (size_t r = 0; r < kernel.rows(); ++r) {
    Vec row = kernel.row(r);
    Vec x(row.begin(), row.begin() + sk);
    if (vec_is_zero(vec_mat(x, tk))) continue;
    PhiWitness w;
    w.x = std::move(x);
    w.z.assign(gmat.rows(), 0);
    for (size_t i = 0; i < rho.size(); ++i) w.z[rho[i]] = f->neg(row[sk + i]);
    return w;
  }
  return std::nullopt;
}

}  // namespace

Matrix delta_space(const LinearNetworkCode& code,
                   const std::vector<size_t>& rho) {
  const Matrix& g = code.matrices().g;
  if (rho.empty()) return Matrix(code.field(), 0, g.cols());
  Matrix rows = g.rows_at(rho);
  auto rr = rows.rref();
  std::vector<size_t> keep;
  for (size_t i = 0; i < rr.pivot_cols.size(); ++i) keep.push_back(i);
  return rr.mat.rows_at(keep);
}

std::optional<PhiWitness> phi_intersects(const LinearNetworkCode& code,
                                         const Matrix& t, size_t k,
                                         const std::vector<size_t>& rho) {
  require(computes_function(code, t, k),
          "phi_intersects: code does not compute the target function");
  Matrix tk = Matrix::kron_identity(t, k);
  auto w = phi_hit(code.field(), code.matrices().f, code.matrices().g, tk, rho);
  if (w) {
    // the witness must verify by direct arithmetic
    Vec lhs = vec_mat(w->x, code.matrices().f);
    Vec rhs = vec_mat(w->z, code.matrices().g);
    ensure(lhs == rhs, "phi witness fails x*F = z*G");
    ensure(!vec_is_zero(vec_mat(w->x, tk)), "phi witness has zero target");
  }
  return w;
}

DistanceCertificate min_distance(const LinearNetworkCode& code,
                                 const Matrix& t, size_t k) {
  require(computes_function(code, t, k),
          "min_distance: code does not compute the target function");
  const Network& net = code.net();
  const Field& f = code.field();
  Matrix tk = Matrix::kron_identity(t, k);
  const size_t ecount = net.edge_count();

  for (size_t w = 1; w <= ecount; ++w) {
    DistanceCertificate found;
    bool hit = !for_each_subset(ecount, w, [&](const std::vector<size_t>& rho) {
      // dominated patterns (rank < size) were covered at a smaller size
      if (w >= 2 && pattern_rank_value(net, rho) < w) return true;
      auto wit = phi_hit(f, code.matrices().f, code.matrices().g, tk, rho);
      if (!wit) return true;
      found.d_min = w;
      found.witness_pattern = rho;
      found.witness_x = std::move(wit->x);
      found.witness_z = std::move(wit->z);
      return false;
    });
    if (hit) {
      Vec lhs = vec_mat(found.witness_x, code.matrices().f);
      Vec rhs = vec_mat(found.witness_z, code.matrices().g);
      ensure(lhs == rhs, "distance witness fails x*F = z*G");
      ensure(!vec_is_zero(vec_mat(found.witness_x, tk)),
             "distance witness has zero target value");
      return found;
    }
  }
  throw InvariantError("no witness up to |E|; Phi should meet Delta(In(gamma))");
}

size_t dist_c(const LinearNetworkCode& code, const Vec& y1, const Vec& y2) {
  const Field& f = code.field();
  const Matrix& g = code.matrices().g;
  require(y1.size() == g.cols() && y2.size() == g.cols(),
          "dist_c: word length mismatch");
  Vec diff = vec_sub(f, y1, y2);
  if (vec_is_zero(diff)) return 0;

  // distinct nonzero rows of G; multiple edges with one row never help a
  // minimum-weight solution
  std::set<Vec> seen;
  std::vector<Vec> rows;
  for (size_t e = 0; e < g.rows(); ++e) {
    Vec r = g.row(e);
    if (vec_is_zero(r)) continue;
    if (seen.insert(r).second) rows.push_back(std::move(r));
  }
  const size_t nrows = rows.size();
  const size_t cap = std::min(nrows, y1.size());
  constexpr size_t kPlainLimit = 6;

  for (size_t w = 1; w <= cap; ++w) {
    if (w <= kPlainLimit) {
      bool found = !for_each_subset(nrows, w, [&](const std::vector<size_t>& sel) {
        std::vector<Vec> pick;
        for (size_t i : sel) pick.push_back(rows[i]);
        return !in_row_space(Matrix::from_rows(f, pick), diff);
      });
      if (found) return w;
    } else {
      /* Meet in the middle on exact-weight combinations: store every sum of
       * h1 rows with nonzero coefficients, then scan weight-(w-h1) combos for
       * diff minus the stored value. */
      const size_t h1 = w / 2, h2 = w - h1;
      std::set<Vec> sums;
      auto combos = [&](size_t ww, auto&& visit) {
        for_each_subset(nrows, ww, [&](const std::vector<size_t>& sel) {
          std::vector<fval> coef(ww, 1);
          for (;;) {
            Vec acc(diff.size(), 0);
            for (size_t i = 0; i < ww; ++i)
              acc = vec_add(f, acc, vec_scale(f, coef[i], rows[sel[i]]));
            if (!visit(acc)) return false;
            size_t i = 0;
            while (i < ww) {
              coef[i] = fval(coef[i] + 1 == f->order() ? 1 : coef[i] + 1);
              if (coef[i] != 1) break;
              ++i;
            }
            if (i == ww) break;
          }
          return true;
        });
      };
      combos(h1, [&](const Vec& v) {
        sums.insert(v);
        return true;
      });
      bool found = false;
      combos(h2, [&](const Vec& v) {
        if (sums.count(vec_sub(f, diff, v))) {
          found = true;
          return false;
        }
        return true;
      });
      if (found) return w;
    }
  }
  throw InvariantError("dist_c found no solution; G lost its identity rows?");
}

PatternRankReport pattern_rank(const Network& net,
                               const std::vector<size_t>& rho) {
  PatternRankReport rep;
  rep.pattern = rho;
  if (rho.empty()) return rep;
  Network aug = net.augment_with_pattern(rho);
  rep.realizing_cut = min_cut(aug, {aug.pattern_source()}, aug.sinks()[0]);
  rep.rank = rep.realizing_cut.size;
  ensure(rep.rank <= rho.size(), "pattern rank exceeds pattern size");
  return rep;
}

std::vector<std::vector<size_t>> enumerate_r(const Network& net, size_t delta,
                                             size_t limit) {
  require(delta >= 1, "enumerate_r: delta must be at least 1");
  std::vector<std::vector<size_t>> out;
  for_each_subset(net.edge_count(), delta, [&](const std::vector<size_t>& rho) {
    if (pattern_rank_value(net, rho) == delta) {
      out.push_back(rho);
      if (out.size() > limit)
        throw DomainError("R(delta) exceeds the cap of " +
                          std::to_string(limit) + " patterns");
    }
    return true;
  });
  return out;
}

bool is_robust(const LinearNetworkCode& code, const Matrix& t, size_t k,
               size_t tau) {
  return min_distance(code, t, k).d_min >= 2 * tau + 1;
}

}  // namespace nfc
