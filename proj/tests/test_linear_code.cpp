// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "nfc/linear_code.hpp"
#include "testutil.hpp"

using namespace nfc;
using namespace nfc::testutil;

TEST_CASE("demo code over GF(5): global matrix and G row multiset") {
  auto net = butterfly();
  auto f5 = FieldSpec::prime(5);
  LinearNetworkCode code = butterfly_code_odd(net, f5);
  const auto& em = code.matrices();

  CHECK(em.f == Matrix::from_rows(f5, {{1, 1, 2}, {1, 1, 2}}));

  std::map<Vec, int> rows;
  for (size_t e = 0; e < net->edge_count(); ++e) ++rows[em.g.row(e)];
  CHECK(rows.size() == 4);
  CHECK(rows[Vec{1, 0, 0}] == 3);
  CHECK(rows[Vec{0, 1, 0}] == 3);
  CHECK(rows[Vec{0, 0, 1}] == 3);
  CHECK(rows[Vec{1, 0, 1}] == 3);
}

TEST_CASE("demo code over GF(4): rows are (1, 1, 1+w)") {
  auto net = butterfly();
  auto f4 = FieldSpec::binary_ext(2);
  LinearNetworkCode code = butterfly_code_even(net, f4);
  fval w = f4->omega();
  Vec row{1, 1, f4->add(1, w)};
  CHECK(code.matrices().f == Matrix::from_rows(f4, {row, row}));
}

TEST_CASE("all-zero code: F = 0 and G keeps identity rows at In(gamma)") {
  auto net = butterfly();
  auto f5 = FieldSpec::prime(5);
  std::vector<Matrix> b(2, Matrix(f5, 1, net->edge_count()));
  LinearNetworkCode zero(net, f5, 1, b, Matrix(f5, 12, 12));
  CHECK(zero.matrices().f.is_zero());
  const auto& g = zero.matrices().g;
  const auto& in_g = net->in_gamma();
  for (size_t i = 0; i < in_g.size(); ++i)
    for (size_t j = 0; j < in_g.size(); ++j)
      CHECK(g.at(in_g[i], j) == (i == j ? 1u : 0u));
}

TEST_CASE("support violations are rejected") {
  auto net = butterfly();
  auto f5 = FieldSpec::prime(5);
  std::vector<Matrix> b(2, Matrix(f5, 1, net->edge_count()));
  b[0].at(0, net->edge_index("e4")) = 1;  // e4 leaves s2, not s1
  CHECK_THROWS_AS(
      LinearNetworkCode(net, f5, 1, b, Matrix(f5, 12, 12)), DomainError);

  std::vector<Matrix> b2(2, Matrix(f5, 1, net->edge_count()));
  Matrix k(f5, 12, 12);
  k.at(net->edge_index("e10"), net->edge_index("e1")) = 1;  // not adjacent
  CHECK_THROWS_AS(LinearNetworkCode(net, f5, 1, b2, k), DomainError);
}

TEST_CASE("transmit matches x*F + z*G on the demo code") {
  auto net = butterfly();
  auto f5 = FieldSpec::prime(5);
  LinearNetworkCode code = butterfly_code_odd(net, f5);

  auto w = transmit(code, {1, 1}, ErrorVector::zero(12));
  CHECK(w.values == Vec{2, 2, 4});

  auto w0 = transmit(code, {0, 0}, ErrorVector::zero(12));
  CHECK(vec_is_zero(w0.values));

  // an error on a sink edge shifts exactly that coordinate
  for (size_t c = 0; c < 3; ++c) {
    size_t e = net->in_gamma()[c];
    auto we = transmit(code, {1, 2}, ErrorVector::single(12, e, 3));
    auto wc = transmit(code, {1, 2}, ErrorVector::zero(12));
    for (size_t j = 0; j < 3; ++j) {
      if (j == c)
        CHECK(we.values[j] == f5->add(wc.values[j], 3));
      else
        CHECK(we.values[j] == wc.values[j]);
    }
  }
}

TEST_CASE("transmit equals the algebra exhaustively over GF(2) and GF(3)") {
  for (auto q : {2u, 3u}) {
    Field f = FieldSpec::prime(q);
    auto net = butterfly();
    LinearNetworkCode code = butterfly_code_odd(net, f);
    // all messages, all single-edge errors (plus the zero error)
    for_each_vector(f, 2, [&](const Vec& x) {
      (void)transmit(code, x, ErrorVector::zero(12));  // asserts internally
      for (size_t e = 0; e < 12; ++e)
        for (fval v = 1; v < q; ++v)
          (void)transmit(code, x, ErrorVector::single(12, e, v));
    });
  }
}

TEST_CASE("computes_function") {
  auto net = butterfly();
  auto f5 = FieldSpec::prime(5);
  LinearNetworkCode code = butterfly_code_odd(net, f5);
  Matrix ones = ones_target(f5, 2);
  CHECK(computes_function(code, ones, 1));

  std::vector<Matrix> zb(2, Matrix(f5, 1, net->edge_count()));
  LinearNetworkCode zero(net, f5, 1, zb, Matrix(f5, 12, 12));
  CHECK_FALSE(computes_function(zero, ones, 1));
}

TEST_CASE("identity routing on two disjoint edges computes the identity") {
  NetworkDescription nd;
  nd.vertices = {"s1", "s2", "g"};
  nd.edges = {{"e1", "s1", "g"}, {"e2", "s2", "g"}};
  nd.sources = {"s1", "s2"};
  nd.sinks = {"g"};
  auto net = std::make_shared<Network>(Network::validate(nd));
  auto f3 = FieldSpec::prime(3);
  std::vector<Matrix> b(2, Matrix(f3, 1, 2));
  b[0].at(0, 0) = 1;
  b[1].at(0, 1) = 1;
  LinearNetworkCode code(net, f3, 1, b, Matrix(f3, 2, 2));
  CHECK(computes_function(code, Matrix::identity(f3, 2), 1));

  // oracle: exhaust all 9 messages; distinct messages map to distinct words
  std::map<Vec, Vec> img;
  for_each_vector(f3, 2, [&](const Vec& x) {
    auto w = transmit(code, x, ErrorVector::zero(2));
    img[w.values] = x;
  });
  CHECK(img.size() == 9);
}

TEST_CASE("kronecker consistency: block-diagonal rate-2 code = two rate-1 runs") {
  auto net = butterfly();
  auto f5 = FieldSpec::prime(5);
  LinearNetworkCode base = butterfly_code_odd(net, f5);
  // rate-2 version with block structure: run the same scalar code on each
  // coordinate; here both coordinates share the edges, so instead compare
  // the target map T kron I_2 on stacked messages against two scalar runs
  Matrix ones = ones_target(f5, 2);
  Matrix tk = Matrix::kron_identity(ones, 2);
  Vec x{1, 2, 3, 4};  // (x1, x2) with x_i of length 2
  Vec a = vec_mat(x, tk);
  CHECK(a == Vec{4, 1});  // (1+3, 2+4)
}
