// SPDX-License-Identifier: Apache-2.0
#include "nfc/linear_code.hpp"

#include <algorithm>

namespace nfc {

ErrorVector ErrorVector::from_values(const Vec& z) {
  ErrorVector ev;
  ev.z = z;
  for (size_t e = 0; e < z.size(); ++e)
    if (z[e] != 0) ev.support.push_back(e);
  return ev;
}

ErrorVector ErrorVector::single(size_t edge_count, size_t edge, fval value) {
  ErrorVector ev = zero(edge_count);
  ev.z[edge] = value;
  if (value != 0) ev.support = {edge};
  return ev;
}

size_t ReceivedWord::star_count() const {
  size_t c = 0;
  for (char s : star)
    if (s) ++c;
  return c;
}

namespace {

EncodingMatrices derive(const Network& net, const Field& f, size_t k,
                        const std::vector<Matrix>& b, const Matrix& kmat) {
  const size_t ecount = net.edge_count();
  const auto& in_gamma = net.in_gamma();
  const size_t n = in_gamma.size();
  std::vector<size_t> gamma_pos(ecount, size_t(-1));
  for (size_t i = 0; i < n; ++i) gamma_pos[in_gamma[i]] = i;

  /* g_d = a_d + sum_e k_{d,e} g_e, where e ranges over edges leaving
   * head(d).  Rows are filled against the topological edge order reversed,
   * so every needed g_e is already final. */
  Matrix g(f, ecount, n);
  auto order = net.edges_in_topo_order();
  for (size_t idx = order.size(); idx-- > 0;) {
    size_t d = order[idx];
    if (gamma_pos[d] != size_t(-1)) g.at(d, gamma_pos[d]) = 1;
    for (size_t e : net.out_edges(net.head(d))) {
      fval coef = kmat.at(d, e);
      if (coef == 0) continue;
      for (size_t c = 0; c < n; ++c)
        g.at(d, c) = f->add(g.at(d, c), f->mul(coef, g.at(e, c)));
    }
  }

  Matrix ball(f, 0, ecount);
  for (const auto& bi : b) ball = Matrix::vstack(ball, bi);
  Matrix fmat = ball * g;
  ensure(fmat.rows() == net.source_count() * k, "global matrix shape");

  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      ensure(g.at(in_gamma[i], j) == (i == j ? 1u : 0u),
             "rows of G at In(gamma) do not form an identity");

  return {fmat, g, Matrix::vstack(fmat, g)};
}

}  // namespace

LinearNetworkCode::LinearNetworkCode(NetworkPtr net, Field field, size_t k,
                                     std::vector<Matrix> source_matrices,
                                     Matrix transfer)
    : net_(std::move(net)),
      field_(std::move(field)),
      k_(k),
      b_(std::move(source_matrices)),
      k_mat_(std::move(transfer)) {
  require(k_ >= 1, "code rate k must be positive");
  const size_t s = net_->source_count();
  const size_t e = net_->edge_count();
  require(b_.size() == s, "need one source matrix per source");
  for (size_t i = 0; i < s; ++i) {
    require(b_[i].rows() == k_ && b_[i].cols() == e,
            "source matrix must be k x |E|");
    require(b_[i].field()->same_as(*field_), "field spec mismatch");
    for (size_t j = 0; j < k_; ++j)
      for (size_t c = 0; c < e; ++c)
        require(b_[i].at(j, c) == 0 || net_->tail(c) == net_->sources()[i],
                "source coefficient on an edge not leaving that source");
  }
  require(k_mat_.rows() == e && k_mat_.cols() == e,
          "transfer matrix must be |E| x |E|");
  require(k_mat_.field()->same_as(*field_), "field spec mismatch");
  for (size_t d = 0; d < e; ++d)
    for (size_t c = 0; c < e; ++c)
      require(k_mat_.at(d, c) == 0 || net_->head(d) == net_->tail(c),
              "transfer coefficient between non-adjacent edges");
  em_ = derive(*net_, field_, k_, b_, k_mat_);
}

EncodingMatrices derive_matrices(const LinearNetworkCode& code) {
  return derive(code.net(), code.field(), code.k(), code.source_matrices(),
                code.transfer());
}

ReceivedWord transmit(const LinearNetworkCode& code, const Vec& x_s,
                      const ErrorVector& z) {
  const Network& net = code.net();
  const Field& f = code.field();
  const size_t s = net.source_count();
  const size_t k = code.k();
  require(x_s.size() == s * k, "message vector must have s*k entries");
  require(z.z.size() == net.edge_count(), "error vector must have |E| entries");
  for (size_t e = 0; e < z.z.size(); ++e)
    if (z.z[e] != 0)
      require(std::find(z.support.begin(), z.support.end(), e) !=
                  z.support.end(),
              "error vector does not match its support");

  std::vector<size_t> source_of(net.vertex_count(), size_t(-1));
  for (size_t i = 0; i < s; ++i) source_of[net.sources()[i]] = i;

  Vec u(net.edge_count(), 0);
  for (size_t e : net.edges_in_topo_order()) {
    size_t v = net.tail(e);
    fval acc = 0;
    if (source_of[v] != size_t(-1)) {
      size_t i = source_of[v];
      for (size_t j = 0; j < k; ++j)
        acc = f->add(acc, f->mul(x_s[i * k + j], code.source_matrices()[i].at(j, e)));
    } else {
      for (size_t d : net.in_edges(v))
        acc = f->add(acc, f->mul(u[d], code.transfer().at(d, e)));
    }
    u[e] = f->add(acc, z.z[e]);
  }

  Vec y(net.in_gamma().size());
  for (size_t i = 0; i < y.size(); ++i) y[i] = u[net.in_gamma()[i]];

  Vec expect = vec_add(f, vec_mat(x_s, code.matrices().f),
                       vec_mat(z.z, code.matrices().g));
  ensure(y == expect, "propagation disagrees with x*F + z*G");
  return ReceivedWord::plain(std::move(y));
}

bool computes_function(const LinearNetworkCode& code, const Matrix& t,
                       size_t k) {
  require(t.rows() == code.net().source_count(),
          "target matrix must have one row per source");
  require(k == code.k(), "rate mismatch between code and query");
  Matrix tk = Matrix::kron_identity(t, k);
  Matrix kernel = code.matrices().f.left_nullspace();
  for (size_t r = 0; r < kernel.rows(); ++r)
    if (!vec_is_zero(vec_mat(kernel.row(r), tk))) return false;
  return true;
}

}  // namespace nfc
