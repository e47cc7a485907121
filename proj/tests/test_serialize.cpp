// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nfc/serialize.hpp"
#include "nfc/sum_code.hpp"
#include "testutil.hpp"

using namespace nfc;
using namespace nfc::testutil;

static std::string data(const std::string& f) {
  return std::string(NFC_TEST_DATA_DIR) + "/" + f;
}

TEST_CASE("network files round-trip byte-exactly") {
  auto net = load_network_file(data("butterfly_sum.net"));
  CHECK(net->edge_count() == 12);
  CHECK(net->vertex_name(net->sink()) == "g");
  // canonical edge order is file order
  CHECK(net->edge_name(0) == "e1");
  CHECK(net->edge_name(11) == "e12");

  std::string once = dump_json(network_to_json(net->description()));
  auto again = Network::validate(network_from_json(Json::parse(once)));
  std::string twice = dump_json(network_to_json(again.description()));
  CHECK(once == twice);
}

TEST_CASE("field specs round-trip") {
  for (auto f : {FieldSpec::prime(5), FieldSpec::binary_ext(2),
                 FieldSpec::extension(3, {2, 2, 1})}) {
    Field g = field_from_json(field_to_json(f));
    CHECK(g->same_as(*f));
    CHECK(g->omega() == f->omega());
  }
  CHECK_THROWS_AS(field_from_json(Json{{"p", 4}, {"m", 1}, {"modulus", {0, 1}}}),
                  DomainError);
}

TEST_CASE("code files round-trip bit-exactly and rebuild the same matrices") {
  auto net = butterfly();
  auto f5 = FieldSpec::prime(5);
  LinearNetworkCode code = butterfly_code_odd(net, f5);
  Json j = code_to_json(code);
  auto back = code_from_json(j, net);
  CHECK(back->matrices().f == code.matrices().f);
  CHECK(back->matrices().g == code.matrices().g);
  std::string once = dump_json(j);
  std::string twice = dump_json(code_to_json(*back));
  CHECK(once == twice);
}

TEST_CASE("checked-in code files reproduce the golden matrices") {
  auto net = load_network_file(data("butterfly_sum.net"));
  auto c5 = code_from_json(load_json_file(data("butterfly_sum_gf5.code")), net);
  CHECK(c5->matrices().f ==
        Matrix::from_rows(c5->field(), {{1, 1, 2}, {1, 1, 2}}));
  auto c4 = code_from_json(load_json_file(data("butterfly_sum_gf4.code")), net);
  fval w = c4->field()->omega();
  Vec row{1, 1, c4->field()->add(1, w)};
  CHECK(c4->matrices().f == Matrix::from_rows(c4->field(), {row, row}));
  auto c7 = code_from_json(load_json_file(data("butterfly_sum_gf7.code")), net);
  CHECK(c7->matrices().f ==
        Matrix::from_rows(c7->field(), {{1, 1, 2}, {1, 1, 2}}));
}

TEST_CASE("received words parse stars and values") {
  auto w = parse_received_word("3 1 6", 3);
  CHECK(w.values == Vec{3, 1, 6});
  CHECK_FALSE(w.has_star());
  auto ws = parse_received_word("*, 4 ,*", 3);
  CHECK(ws.star_count() == 2);
  CHECK(ws.values[1] == 4);
  CHECK(received_word_to_text(ws) == "* 4 *");
  CHECK_THROWS_AS(parse_received_word("1 2", 3), DomainError);
  CHECK_THROWS_AS(parse_received_word("1 x 3", 3), DomainError);
}

TEST_CASE("assignments round-trip with exact rationals") {
  DataAssignment a;
  a.subset_count = 2;
  a.sizes = {Rational(1, 3), Rational(2, 3)};
  a.zeta = {{0, 1}, {1}, {0}};
  Json j = assignment_to_json(a);
  auto b = assignment_from_json(j);
  CHECK(b.sizes == a.sizes);
  CHECK(b.zeta == a.zeta);
  CHECK(dump_json(assignment_to_json(b)) == dump_json(j));

  Json bad = j;
  bad["sizes"] = {"1/3", "1/3"};
  CHECK_THROWS_AS(assignment_from_json(bad), DomainError);
}

TEST_CASE("scheme files re-derive and re-check the distance") {
  DataAssignment a;
  a.subset_count = 3;
  a.sizes.assign(3, Rational(1, 3));
  a.zeta = {{0, 1}, {1, 2}, {2, 0}};
  auto scheme = build_scheme(a, 1, 0, 1, 2, FieldSpec::prime(5), 77);
  Json j = scheme_to_json(scheme);
  auto back = scheme_from_json(j);
  CHECK(back.cert.d_min == scheme.cert.d_min);
  CHECK(back.assignment.zeta == scheme.assignment.zeta);
  CHECK(dump_json(scheme_to_json(back)) == dump_json(j));

  // lying about the parameters is caught on load
  Json lie = j;
  lie["params"]["tau_s"] = 5;
  CHECK_THROWS_AS(scheme_from_json(lie), DomainError);
}

TEST_CASE("rationals parse") {
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("2/6") == Rational(1, 3));
  CHECK_THROWS_AS(parse_rational("x"), DomainError);
}
