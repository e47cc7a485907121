// SPDX-License-Identifier: Apache-2.0
#include "nfc/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "nfc/distance.hpp"

namespace nfc {

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot write " + path);
  out << text;
}

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)),
                    std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw DomainError("bad rational: " + s);
  }
}

Json network_to_json(const NetworkDescription& nd) {
  Json j;
  j["vertices"] = nd.vertices;
  Json edges = Json::array();
  for (const auto& e : nd.edges)
    edges.push_back(Json{{"id", e.id}, {"tail", e.tail}, {"head", e.head}});
  j["edges"] = edges;
  j["sources"] = nd.sources;
  require(nd.sinks.size() == 1, "network files carry exactly one sink");
  j["sink"] = nd.sinks[0];
  return j;
}

NetworkDescription network_from_json(const Json& j) {
  NetworkDescription nd;
  try {
    nd.vertices = j.at("vertices").get<std::vector<std::string>>();
    for (const auto& e : j.at("edges"))
      nd.edges.push_back({e.at("id").get<std::string>(),
                          e.at("tail").get<std::string>(),
                          e.at("head").get<std::string>()});
    nd.sources = j.at("sources").get<std::vector<std::string>>();
    nd.sinks = {j.at("sink").get<std::string>()};
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed network file: ") + e.what());
  }
  return nd;
}

NetworkPtr load_network_file(const std::string& path) {
  return std::make_shared<Network>(
      Network::validate(network_from_json(load_json_file(path))));
}

Json field_to_json(const Field& f) {
  Json j;
  j["p"] = f->characteristic();
  j["m"] = f->degree();
  j["modulus"] = f->modulus();
  return j;
}

Field field_from_json(const Json& j) {
  try {
    fval p = j.at("p").get<fval>();
    unsigned m = j.at("m").get<unsigned>();
    auto modulus = j.at("modulus").get<std::vector<fval>>();
    if (m == 1) return FieldSpec::prime(p);
    return FieldSpec::extension(p, modulus);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed field spec: ") + e.what());
  }
}

Json code_to_json(const LinearNetworkCode& code) {
  const Network& net = code.net();
  Json j;
  j["field"] = field_to_json(code.field());
  j["k"] = code.k();
  Json sc = Json::array();
  for (size_t i = 0; i < net.source_count(); ++i) {
    const Matrix& b = code.source_matrices()[i];
    for (size_t r = 0; r < b.rows(); ++r)
      for (size_t e = 0; e < b.cols(); ++e)
        if (b.at(r, e) != 0)
          sc.push_back(Json{{"source", net.vertex_name(net.sources()[i])},
                            {"row", r},
                            {"edge", net.edge_name(e)},
                            {"value", b.at(r, e)}});
  }
  j["source_coeffs"] = sc;
  Json tc = Json::array();
  for (size_t d = 0; d < net.edge_count(); ++d)
    for (size_t e = 0; e < net.edge_count(); ++e)
      if (code.transfer().at(d, e) != 0)
        tc.push_back(Json{{"from", net.edge_name(d)},
                          {"to", net.edge_name(e)},
                          {"value", code.transfer().at(d, e)}});
  j["transfer_coeffs"] = tc;
  return j;
}

std::shared_ptr<const LinearNetworkCode> code_from_json(const Json& j,
                                                        NetworkPtr net) {
  try {
    Field f = field_from_json(j.at("field"));
    size_t k = j.at("k").get<size_t>();
    const size_t e = net->edge_count();
    std::vector<Matrix> b(net->source_count(), Matrix(f, k, e));
    for (const auto& c : j.at("source_coeffs")) {
      size_t src = net->vertex_index(c.at("source").get<std::string>());
      auto it = std::find(net->sources().begin(), net->sources().end(), src);
      require(it != net->sources().end(), "coefficient at a non-source");
      size_t i = size_t(it - net->sources().begin());
      size_t row = c.at("row").get<size_t>();
      require(row < k, "source row out of range");
      fval v = c.at("value").get<fval>();
      require(v < f->order(), "coefficient out of the field");
      b[i].at(row, net->edge_index(c.at("edge").get<std::string>())) = v;
    }
    Matrix kmat(f, e, e);
    for (const auto& c : j.at("transfer_coeffs")) {
      fval v = c.at("value").get<fval>();
      require(v < f->order(), "coefficient out of the field");
      kmat.at(net->edge_index(c.at("from").get<std::string>()),
              net->edge_index(c.at("to").get<std::string>())) = v;
    }
    return std::make_shared<LinearNetworkCode>(std::move(net), f, k,
                                               std::move(b), std::move(kmat));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed code file: ") + e.what());
  }
}

ReceivedWord parse_received_word(const std::string& text, size_t expect_len) {
  ReceivedWord w;
  std::string norm = text;
  for (auto& c : norm)
    if (c == ',') c = ' ';
  std::istringstream in(norm);
  std::string tok;
  while (in >> tok) {
    if (tok == "*") {
      w.values.push_back(0);
      w.star.push_back(1);
    } else {
      try {
        w.values.push_back(fval(std::stoul(tok)));
      } catch (const std::exception&) {
        throw DomainError("bad received-word token: " + tok);
      }
      w.star.push_back(0);
    }
  }
  require(w.values.size() == expect_len,
          "received word has " + std::to_string(w.values.size()) +
              " entries, expected " + std::to_string(expect_len));
  return w;
}

std::string received_word_to_text(const ReceivedWord& w) {
  std::ostringstream os;
  for (size_t i = 0; i < w.values.size(); ++i) {
    if (i) os << " ";
    if (w.star[i])
      os << "*";
    else
      os << w.values[i];
  }
  return os.str();
}

Json assignment_to_json(const DataAssignment& a) {
  Json j;
  j["K"] = a.subset_count;
  Json sizes = Json::array();
  for (const auto& s : a.sizes) sizes.push_back(to_string(s));
  j["sizes"] = sizes;
  Json z = Json::array();
  for (const auto& zi : a.zeta)
    z.push_back(std::vector<size_t>(zi.begin(), zi.end()));
  j["workers"] = z;
  return j;
}

DataAssignment assignment_from_json(const Json& j) {
  DataAssignment a;
  try {
    a.subset_count = j.at("K").get<size_t>();
    for (const auto& s : j.at("sizes"))
      a.sizes.push_back(parse_rational(s.get<std::string>()));
    for (const auto& zi : j.at("workers")) {
      std::set<size_t> z;
      for (const auto& v : zi) z.insert(v.get<size_t>());
      a.zeta.push_back(std::move(z));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed assignment file: ") + e.what());
  }
  require(a.sizes.size() == a.subset_count, "K disagrees with sizes");
  Rational total(0);
  for (const auto& s : a.sizes) total += s;
  require(total == Rational(1), "subset sizes must sum to 1");
  return a;
}

Json scheme_to_json(const GradientCodingScheme& s) {
  Json j;
  j["assignment"] = assignment_to_json(s.assignment);
  j["network"] = network_to_json(s.net->description());
  j["code"] = code_to_json(*s.code);
  j["params"] = Json{{"tau_s", s.tau_s}, {"tau_b", s.tau_b}, {"m", s.m},
                     {"p", s.p},         {"q", s.q},         {"seed", s.seed}};
  j["d_min"] = s.cert.d_min;
  return j;
}

GradientCodingScheme scheme_from_json(const Json& j) {
  GradientCodingScheme s;
  try {
    s.assignment = assignment_from_json(j.at("assignment"));
    s.net = std::make_shared<Network>(
        Network::validate(network_from_json(j.at("network"))));
    s.code = code_from_json(j.at("code"), s.net);
    const auto& p = j.at("params");
    s.tau_s = p.at("tau_s").get<size_t>();
    s.tau_b = p.at("tau_b").get<size_t>();
    s.m = p.at("m").get<size_t>();
    s.p = p.at("p").get<size_t>();
    s.q = p.at("q").get<std::uint64_t>();
    s.seed = p.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed scheme file: ") + e.what());
  }
  // re-derive the certificate instead of trusting the file
  Matrix t(s.code->field(), s.assignment.subset_count, 1);
  for (size_t i = 0; i < s.assignment.subset_count; ++i) t.at(i, 0) = 1;
  s.cert = min_distance(*s.code, t, s.m);
  require(s.cert.d_min >= s.tau_s + 1 && s.cert.d_min >= 2 * s.tau_b + 1,
          "scheme file parameters exceed the code distance");
  return s;
}

}  // namespace nfc
