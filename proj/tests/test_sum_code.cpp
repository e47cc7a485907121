// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nfc/sum_code.hpp"
#include "testutil.hpp"

using namespace nfc;
using namespace nfc::testutil;

TEST_CASE("normalize_degrees") {
  auto net = butterfly();
  // already balanced: degrees are 3 everywhere that matters
  Network same = normalize_degrees(*net, 3);
  CHECK(same.edge_count() == net->edge_count());
  CHECK(same.description().vertices == net->description().vertices);

  // source with out-degree 5 on a min-cut-3 graph gains an auxiliary source
  NetworkDescription nd;
  nd.vertices = {"s", "r", "g"};
  for (int i = 0; i < 5; ++i)
    nd.edges.push_back({"a" + std::to_string(i), "s", "r"});
  for (int i = 0; i < 3; ++i)
    nd.edges.push_back({"b" + std::to_string(i), "r", "g"});
  nd.sources = {"s"};
  nd.sinks = {"g"};
  auto raw = Network::validate(nd);
  Network norm = normalize_degrees(raw, 3);
  CHECK(norm.source_count() == 1);
  CHECK(norm.vertex_name(norm.sources()[0]) == "__src_s");
  CHECK(norm.out_edges(norm.sources()[0]).size() == 3);
  CHECK(norm.in_gamma().size() == 3);
  // idempotent
  Network again = normalize_degrees(norm, 3);
  CHECK(again.edge_count() == norm.edge_count());

  CHECK_THROWS_AS(normalize_degrees(*net, 2), DomainError);
}

TEST_CASE("multicast on the reversed demo network at rate 3") {
  auto net = butterfly();
  Network rev = net->reverse();
  auto f5 = FieldSpec::prime(5);
  Rng rng(42);
  auto mc = multicast_reverse(rev, 3, f5, rng);
  CHECK(mc.f_i.size() == 2);
  for (const auto& fi : mc.f_i) CHECK(fi.rank() == 3);
  CHECK(mc.b_tilde.rank() == 3);
}

TEST_CASE("multicast on a single edge") {
  NetworkDescription nd;
  nd.vertices = {"s", "g"};
  nd.edges = {{"e1", "s", "g"}};
  nd.sources = {"s"};
  nd.sinks = {"g"};
  Network rev = Network::validate(nd).reverse();
  auto f2 = FieldSpec::prime(2);
  Rng rng(1);
  auto mc = multicast_reverse(rev, 1, f2, rng);
  CHECK(mc.f_i.size() == 1);
  CHECK(mc.f_i[0].at(0, 0) == 1);
}

TEST_CASE("multicast runs out of retries over a tiny field") {
  // three sources forced through shared randomness over GF(2) collide often
  NetworkDescription nd;
  nd.vertices = {"s1", "s2", "s3", "r", "g"};
  nd.edges = {{"e1", "s1", "r"}, {"e2", "s2", "r"}, {"e3", "s3", "r"},
              {"e4", "r", "g"}};
  nd.sources = {"s1", "s2", "s3"};
  nd.sinks = {"g"};
  Network rev = Network::validate(nd).reverse();
  auto f2 = FieldSpec::prime(2);
  Rng rng(3);
  CHECK_THROWS_AS(multicast_reverse(rev, 1, f2, rng, 4), DomainError);
}

TEST_CASE("gaussian margin") {
  // h=2, k=1: the gaussian coefficient is q + 1
  for (auto q : {2u, 3u, 5u, 9u}) {
    auto m = gaussian_margin(2, 1, 4, q);
    CHECK(m.rhs == bigint(q + 1));
  }
  auto m = gaussian_margin(3, 1, 12, 5);
  // oracle values: gauss(3,1)_5 = 31, lhs = (31 - 25) * C(12,2) = 396
  CHECK(m.rhs == 31);
  CHECK(m.lhs == 396);
  CHECK_FALSE(m.sufficient);
  auto big = gaussian_margin(3, 1, 12, 1009);
  CHECK(big.sufficient);
  CHECK_THROWS_AS(gaussian_margin(3, 3, 12, 5), DomainError);
}

TEST_CASE("find_d on the demo G") {
  auto net = butterfly();
  auto f5 = FieldSpec::prime(5);
  LinearNetworkCode probe = butterfly_code_odd(net, f5);
  const Matrix& g = probe.matrices().g;

  Rng rng(7);
  Matrix d = find_d(g, 3, 1, rng);
  CHECK(d.rows() == 1);
  // the known-good row (1,1,2) passes the same verification
  bool good = for_each_subset(4, 2, [&](const std::vector<size_t>&) {
    return true;
  });
  (void)good;
  // every 2-subset of distinct G rows misses the row space of d
  std::vector<Vec> rows = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}};
  for_each_subset(4, 2, [&](const std::vector<size_t>& sel) {
    Matrix span = Matrix::from_rows(f5, {rows[sel[0]], rows[sel[1]]});
    CHECK_FALSE(in_row_space(span, d.row(0)));
    return true;
  });
  // leading coefficient normalized by the reduction
  CHECK(d.at(0, d.rref().pivot_cols[0]) == 1);

  // k = h: the identity is the canonical answer
  Matrix dk = find_d(g, 3, 3, rng);
  CHECK(dk == Matrix::identity(f5, 3));
}

TEST_CASE("sum construction on the demo network, k = 1") {
  auto net = butterfly();
  auto f5 = FieldSpec::prime(5);
  auto bundle = construct_sum_code(net, 1, f5, 2024);
  CHECK(bundle.h == 3);
  CHECK(bundle.certificate.d_min == 3);
  CHECK(bundle.q == 5);
  REQUIRE(bundle.d.has_value());

  // x_S * F = (x1 + x2) * D on random probes
  Rng rng(8);
  const auto& code = *bundle.code;
  for (int it = 0; it < 100; ++it) {
    Vec x{fval(rng.below(5)), fval(rng.below(5))};
    Vec lhs = vec_mat(x, code.matrices().f);
    Vec rhs = vec_scale(f5, f5->add(x[0], x[1]), bundle.d->row(0));
    CHECK(lhs == rhs);
  }

  // pivot coordinate of D carries the sum directly
  size_t pivot = bundle.d->rref().pivot_cols[0];
  for (int it = 0; it < 20; ++it) {
    Vec x{fval(rng.below(5)), fval(rng.below(5))};
    auto w = transmit(code, x, ErrorVector::zero(code.net().edge_count()));
    CHECK(w.values[pivot] == f5->add(x[0], x[1]));
  }
}

TEST_CASE("sum construction at k = h has no redundancy") {
  auto net = butterfly();
  auto f7 = FieldSpec::prime(7);
  auto bundle = construct_sum_code(net, 3, f7, 11);
  CHECK(bundle.certificate.d_min == 1);
}

TEST_CASE("sum construction grows a too-small field") {
  auto net = butterfly();
  auto f2 = FieldSpec::prime(2);  // q = s = 2 is not enough for multicast
  auto bundle = construct_sum_code(net, 1, f2, 5);
  CHECK(bundle.q >= 5);
  CHECK(bundle.certificate.d_min == 3);
  CHECK(!bundle.notes.empty());
}

TEST_CASE("sum construction on random dags matches the singleton bound") {
  Rng rng(31337);
  auto f11 = FieldSpec::prime(11);
  for (int it = 0; it < 6; ++it) {
    auto net = random_dag(rng, 2, 1 + rng.below(2), 2 + rng.below(3));
    size_t h = size_t(-1);
    for (size_t s : net->sources())
      h = std::min(h, min_cut(*net, {s}, net->sink()).size);
    for (size_t k = 1; k <= h; ++k) {
      auto bundle = construct_sum_code(net, k, f11, 1000 + it);
      CHECK(bundle.certificate.d_min == h - k + 1);
      auto cq = cut_quantities(*bundle.network,
                               ones_target(bundle.code->field(),
                                           bundle.network->source_count()),
                               k);
      CHECK((long long)bundle.certificate.d_min == cq.singleton_bound);
    }
  }
}

TEST_CASE("three-layer sum code: full bipartite 3 x 4 over GF(5)") {
  // 3 sources, 4 relays, all 12 storage edges, 4 sink edges
  NetworkDescription nd;
  for (int j = 0; j < 3; ++j) nd.vertices.push_back("D" + std::to_string(j));
  for (int i = 0; i < 4; ++i) nd.vertices.push_back("W" + std::to_string(i));
  nd.vertices.push_back("g");
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 4; ++i)
      nd.edges.push_back({"d" + std::to_string(j) + "w" + std::to_string(i),
                          "D" + std::to_string(j), "W" + std::to_string(i)});
  for (int i = 0; i < 4; ++i)
    nd.edges.push_back(
        {"w" + std::to_string(i) + "g", "W" + std::to_string(i), "g"});
  nd.sources = {"D0", "D1", "D2"};
  nd.sinks = {"g"};
  auto net = std::make_shared<Network>(Network::validate(nd));

  auto f5 = FieldSpec::prime(5);  // q - 1 = 4 = number of relays
  auto bundle = three_layer_sum_code(net, 1, f5);
  CHECK(bundle.h == 4);
  CHECK(bundle.certificate.d_min == 4);  // c* - k + 1, brute-forced inside

  // k = c* leaves distance 1
  auto flat = three_layer_sum_code(net, 4, FieldSpec::prime(5));
  CHECK(flat.certificate.d_min == 1);

  // q = N violates q - 1 >= N
  CHECK_THROWS_AS(three_layer_sum_code(net, 1, FieldSpec::binary_ext(2)),
                  DomainError);
}

TEST_CASE("three-layer sum code at higher rate") {
  // cyclic width-3 assignment on 4 workers: c* = 3, k = 2 -> d = 2
  NetworkDescription nd;
  for (int j = 0; j < 4; ++j) nd.vertices.push_back("D" + std::to_string(j));
  for (int i = 0; i < 4; ++i) nd.vertices.push_back("W" + std::to_string(i));
  nd.vertices.push_back("g");
  for (int j = 0; j < 4; ++j)
    for (int di = 0; di < 3; ++di) {
      int i = (j + di) % 4;
      nd.edges.push_back({"d" + std::to_string(j) + "w" + std::to_string(i),
                          "D" + std::to_string(j), "W" + std::to_string(i)});
    }
  for (int i = 0; i < 4; ++i)
    nd.edges.push_back(
        {"w" + std::to_string(i) + "g", "W" + std::to_string(i), "g"});
  for (int j = 0; j < 4; ++j) nd.sources.push_back("D" + std::to_string(j));
  nd.sinks = {"g"};
  auto net = std::make_shared<Network>(Network::validate(nd));
  auto f7 = FieldSpec::prime(7);
  auto bundle = three_layer_sum_code(net, 2, f7);
  CHECK(bundle.h == 3);
  CHECK(bundle.certificate.d_min == 2);

  // rate-2 sum is actually delivered
  Rng rng(77);
  const auto& code = *bundle.code;
  Matrix ones = ones_target(f7, 4);
  for (int it = 0; it < 50; ++it) {
    Vec x(8);
    for (auto& v : x) v = fval(rng.below(7));
    Vec y = vec_mat(x, code.matrices().f);
    // recover via the erasure decoder with no stars
    auto r = erasure_decode(code, ones, 2, ReceivedWord::plain(y));
    REQUIRE(r.ok());
    Vec expect{0, 0};
    for (int j = 0; j < 4; ++j) {
      expect[0] = f7->add(expect[0], x[2 * j]);
      expect[1] = f7->add(expect[1], x[2 * j + 1]);
    }
    CHECK(r.value == expect);
  }
}
