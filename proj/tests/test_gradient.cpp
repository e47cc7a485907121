// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nfc/gradient.hpp"
#include "testutil.hpp"

using namespace nfc;
using namespace nfc::testutil;

namespace {

DataAssignment cyclic_assignment(size_t n, size_t width) {
  DataAssignment a;
  a.subset_count = n;
  a.sizes.assign(n, Rational(1, (long long)n));
  a.zeta.resize(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t d = 0; d < width; ++d) a.zeta[i].insert((i + d) % n);
  return a;
}

std::vector<Vec> random_gradients(Rng& rng, size_t kk, size_t p,
                                  std::uint64_t q) {
  std::vector<Vec> g(kk, Vec(p));
  for (auto& v : g)
    for (auto& x : v) x = fval(rng.below(q));
  return g;
}

}  // namespace

TEST_CASE("assignment networks") {
  DataAssignment full;
  full.subset_count = 2;
  full.sizes = {Rational(1, 2), Rational(1, 2)};
  full.zeta = {{0, 1}, {0, 1}};
  auto net = build_network(full);
  CHECK(net->source_count() == 2);
  CHECK(net->in_gamma().size() == 2);
  CHECK(net->edge_count() == 6);  // K2,2 plus two sink edges

  auto cyc = cyclic_assignment(3, 2);
  auto net3 = build_network(cyc);
  for (size_t s : net3->sources()) CHECK(net3->out_edges(s).size() == 2);

  DataAssignment orphan;
  orphan.subset_count = 2;
  orphan.sizes = {Rational(1, 2), Rational(1, 2)};
  orphan.zeta = {{0}, {0}};
  CHECK_THROWS_AS(build_network(orphan), DomainError);
}

TEST_CASE("replication checks") {
  auto cyc = cyclic_assignment(3, 2);
  CHECK(check_replication(cyc, 1, 1));   // tau_s + m = 2
  CHECK_FALSE(check_replication(cyc, 2, 1));
  DataAssignment full;
  full.subset_count = 2;
  full.sizes = {Rational(1, 2), Rational(1, 2)};
  full.zeta = {{0, 1}, {0, 1}, {0, 1}};
  CHECK(check_replication(full, 2, 1));
}

TEST_CASE("scheme build and straggler sweep (n = 3, cyclic, tau_s = 1)") {
  auto a = cyclic_assignment(3, 2);
  auto f5 = FieldSpec::prime(5);
  auto scheme = build_scheme(a, 1, 0, 1, 2, f5, 9);
  CHECK(scheme.cert.d_min >= 2);

  // every worker encoder touches only its assigned subsets
  for (size_t i = 0; i < 3; ++i) {
    Vec fi = scheme.encoder_column(i);
    for (size_t j = 0; j < 3; ++j)
      if (!a.zeta[i].count(j)) CHECK(fi[j] == 0);
  }

  Rng rng(14);
  for (int it = 0; it < 30; ++it) {
    auto g = random_gradients(rng, 3, 2, 5);
    Vec expect(2, 0);
    for (const auto& v : g) expect = vec_add(f5, expect, v);
    // all single-straggler patterns and the no-straggler case
    for (int st = -1; st < 3; ++st) {
      std::vector<std::optional<Vec>> msgs(3);
      for (size_t i = 0; i < 3; ++i) {
        std::map<size_t, Vec> mine;
        for (size_t j : a.zeta[i]) mine[j] = g[j];
        msgs[i] = worker_encode(scheme, i, mine);
      }
      if (st >= 0) msgs[st] = std::nullopt;
      CHECK(master_decode(scheme, msgs, 0) == expect);
    }
  }
}

TEST_CASE("full replication with m = 3: triple communication reduction") {
  DataAssignment a;
  a.subset_count = 3;
  a.sizes.assign(3, Rational(1, 3));
  a.zeta = {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}};
  auto f7 = FieldSpec::prime(7);
  auto scheme = build_scheme(a, 0, 0, 3, 6, f7, 5);
  CHECK(scheme.cert.d_min >= 1);

  Rng rng(8);
  auto g = random_gradients(rng, 3, 6, 7);
  Vec expect(6, 0);
  for (const auto& v : g) expect = vec_add(f7, expect, v);
  std::vector<std::optional<Vec>> msgs(3);
  for (size_t i = 0; i < 3; ++i) {
    std::map<size_t, Vec> mine;
    for (size_t j : a.zeta[i]) mine[j] = g[j];
    msgs[i] = worker_encode(scheme, i, mine);
    CHECK(msgs[i]->size() == 2);  // p/m symbols instead of p
  }
  CHECK(master_decode(scheme, msgs, 0) == expect);
}

TEST_CASE("insufficient replication is rejected") {
  auto a = cyclic_assignment(3, 2);
  auto f5 = FieldSpec::prime(5);
  CHECK_THROWS_AS(build_scheme(a, 2, 0, 1, 1, f5, 1), DomainError);
  CHECK_THROWS_AS(build_scheme(a, 0, 1, 1, 1, f5, 1), DomainError);  // 2tb+m=3
  CHECK_THROWS_AS(build_scheme(a, 1, 0, 2, 2, f5, 1), DomainError);  // ts+m=3
  auto full = cyclic_assignment(3, 3);
  CHECK_THROWS_AS(build_scheme(full, 1, 0, 2, 3, f5, 1), DomainError);  // m|p
}

TEST_CASE("byzantine scheme corrects any single corrupted worker") {
  auto a = cyclic_assignment(4, 3);  // replication 3 >= 2*1 + 1
  auto f7 = FieldSpec::prime(7);
  auto scheme = build_scheme(a, 0, 1, 1, 1, f7, 3);
  CHECK(scheme.cert.d_min >= 3);

  Rng rng(21);
  for (int it = 0; it < 10; ++it) {
    auto g = random_gradients(rng, 4, 1, 7);
    Vec expect(1, 0);
    for (const auto& v : g) expect = vec_add(f7, expect, v);
    std::vector<std::optional<Vec>> clean(4);
    for (size_t i = 0; i < 4; ++i) {
      std::map<size_t, Vec> mine;
      for (size_t j : a.zeta[i]) mine[j] = g[j];
      clean[i] = worker_encode(scheme, i, mine);
    }
    // every worker, every nonzero corruption value
    for (size_t w = 0; w < 4; ++w)
      for (fval c = 1; c < 7; ++c) {
        auto msgs = clean;
        (*msgs[w])[0] = f7->add((*msgs[w])[0], c);
        CHECK(master_decode(scheme, msgs, 1) == expect);
      }
  }
}

TEST_CASE("worker_encode validates its inputs") {
  auto a = cyclic_assignment(3, 2);
  auto f5 = FieldSpec::prime(5);
  auto scheme = build_scheme(a, 1, 0, 1, 2, f5, 9);
  std::map<size_t, Vec> wrong{{0, Vec{1, 2}}};
  CHECK_THROWS_AS(worker_encode(scheme, 0, wrong), DomainError);  // missing 1
  std::map<size_t, Vec> extra{
      {0, Vec{1, 2}}, {1, Vec{0, 0}}, {2, Vec{3, 3}}};
  CHECK_THROWS_AS(worker_encode(scheme, 0, extra), DomainError);
}

TEST_CASE("load optimizer on the worked example") {
  std::vector<WorkerProfile> w = {{Rational(1), Rational(1)},
                                  {Rational(1), Rational(1)},
                                  {Rational(1), Rational(2)}};
  auto mu = optimize_load(w, 1, 1);  // tau_s + m = 2
  CHECK(mu == std::vector<Rational>{Rational(1, 2), Rational(1, 2),
                                    Rational(1)});
}

TEST_CASE("load optimizer: homogeneous case and infeasibility") {
  std::vector<WorkerProfile> w(3, {Rational(1), Rational(1)});
  auto mu = optimize_load(w, 1, 1);
  CHECK(mu == std::vector<Rational>(3, Rational(2, 3)));

  std::vector<WorkerProfile> bad = {{Rational(1, 2), Rational(1)},
                                    {Rational(1, 2), Rational(1)}};
  CHECK_THROWS_AS(optimize_load(bad, 1, 1), DomainError);
}

TEST_CASE("load optimizer beats every grid point") {
  // oracle: those mu on a denominator-24 grid that are feasible cannot have
  // a smaller completion time than mu*
  std::vector<std::vector<WorkerProfile>> bank = {
      {{Rational(1), Rational(1)}, {Rational(1), Rational(1)},
       {Rational(1), Rational(2)}},
      {{Rational(3, 4), Rational(1)}, {Rational(1, 2), Rational(3)},
       {Rational(1), Rational(2)}},
      {{Rational(1, 3), Rational(1)}, {Rational(2, 3), Rational(1, 2)},
       {Rational(1), Rational(1)}},
  };
  for (const auto& w : bank) {
    auto mu = optimize_load(w, 1, 1);
    Rational t_star(0);
    for (size_t i = 0; i < w.size(); ++i)
      t_star = std::max(t_star, mu[i] / w[i].speed);
    Rational best_grid(1 << 20);
    const long long d = 24;
    std::vector<long long> g(3);
    for (g[0] = 0; g[0] <= d; ++g[0])
      for (g[1] = 0; g[1] <= d; ++g[1])
        for (g[2] = 0; g[2] <= d; ++g[2]) {
          Rational m0(g[0], d), m1(g[1], d), m2(g[2], d);
          if (m0 > w[0].storage || m1 > w[1].storage || m2 > w[2].storage)
            continue;
          if (m0 + m1 + m2 < Rational(2)) continue;
          Rational t = std::max({m0 / w[0].speed, m1 / w[1].speed,
                                 m2 / w[2].speed});
          best_grid = std::min(best_grid, t);
        }
    CHECK(t_star <= best_grid);
  }
}

TEST_CASE("interval filling realizes the load vector exactly") {
  // homogeneous 2/3 loads: three subsets, cyclic width 2
  std::vector<Rational> mu(3, Rational(2, 3));
  auto a = load_to_assignment(mu, 1, 1);
  CHECK(a.subset_count == 3);
  for (const auto& s : a.sizes) CHECK(s == Rational(1, 3));
  for (const auto& z : a.zeta) CHECK(z.size() == 2);
  CHECK(a.load_vector() == mu);

  // single worker carrying everything
  auto single = load_to_assignment({Rational(1)}, 0, 1);
  CHECK(single.subset_count == 1);
  CHECK(single.zeta[0].count(0) == 1);

  // mixed loads: replication exactly 2 everywhere
  auto mixed = load_to_assignment(
      {Rational(1, 2), Rational(1, 2), Rational(1)}, 1, 1);
  CHECK(mixed.load_vector() ==
        std::vector<Rational>{Rational(1, 2), Rational(1, 2), Rational(1)});
  for (size_t j = 0; j < mixed.subset_count; ++j) {
    size_t cover = 0;
    for (const auto& z : mixed.zeta) cover += z.count(j);
    CHECK(cover == 2);
  }
  CHECK(mixed.subset_count <= 6);

  CHECK_THROWS_AS(load_to_assignment({Rational(1, 4)}, 1, 1), DomainError);
}

TEST_CASE("plan-to-scheme pipeline decodes under stragglers") {
  std::vector<WorkerProfile> w = {{Rational(1), Rational(1)},
                                  {Rational(1), Rational(1)},
                                  {Rational(1), Rational(2)}};
  auto mu = optimize_load(w, 1, 1);
  auto a = load_to_assignment(mu, 1, 1);
  auto f7 = FieldSpec::prime(7);
  auto scheme = build_scheme(a, 1, 0, 1, 2, f7, 31);

  Rng rng(6);
  auto g = random_gradients(rng, a.subset_count, 2, 7);
  for (size_t st = 0; st < 3; ++st) {
    auto rep = simulate(scheme, g, {st}, {}, 55);
    CHECK(rep.success);
    CHECK(rep.decoded == rep.expected);
  }
}

TEST_CASE("simulation reports budget violations without crashing") {
  auto a = cyclic_assignment(3, 2);
  auto f5 = FieldSpec::prime(5);
  auto scheme = build_scheme(a, 1, 0, 1, 1, f5, 12);
  Rng rng(99);
  auto g = random_gradients(rng, 3, 1, 5);
  auto rep = simulate(scheme, g, {0, 1}, {}, 1);  // two stragglers, tau_s = 1
  CHECK_FALSE(rep.success);
  CHECK(!rep.failure.empty());

  auto ok = simulate(scheme, g, {}, {}, 1);
  CHECK(ok.success);
  CHECK(ok.stragglers == 0);
}

TEST_CASE("byzantine simulation with random corruptions") {
  auto a = cyclic_assignment(4, 3);
  auto f7 = FieldSpec::prime(7);
  auto scheme = build_scheme(a, 0, 1, 1, 3, f7, 2);
  Rng rng(123);
  auto g = random_gradients(rng, 4, 3, 7);
  std::map<size_t, std::optional<Vec>> byz{{2, std::nullopt}};
  auto rep = simulate(scheme, g, {}, byz, 777);
  CHECK(rep.success);
  CHECK(rep.corrupted == 1);
}

TEST_CASE("fixed point codec round trip") {
  auto f = FieldSpec::prime(10007);
  FixedPointCodec codec(f, 100);
  std::vector<double> xs = {0.25, -1.5, 3.14, 0.0};
  Vec enc = codec.encode(xs);
  auto dec = codec.decode(enc);
  CHECK(dec[0] == doctest::Approx(0.25));
  CHECK(dec[1] == doctest::Approx(-1.5));
  CHECK(dec[2] == doctest::Approx(3.14));
  CHECK(dec[3] == doctest::Approx(0.0));
  CHECK_THROWS_AS(codec.encode({60.0}), DomainError);  // 6000 > p/2

  // sums distribute through the codec up to quantization
  FixedPointCodec c2(f, 10);
  Vec a = c2.encode({1.1, 2.2});
  Vec b = c2.encode({0.4, -0.7});
  Vec sum = vec_add(f, a, b);
  auto back = c2.decode(sum);
  CHECK(back[0] == doctest::Approx(1.5));
  CHECK(back[1] == doctest::Approx(1.5));
}
