// SPDX-License-Identifier: Apache-2.0
//
// Batch front-end: every pipeline of the library behind one binary with
// reproducible seeds and machine-readable output.  Exit codes: 0 success,
// 1 domain error, 2 usage error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nfc/capacity.hpp"
#include "nfc/decoder.hpp"
#include "nfc/gradient.hpp"
#include "nfc/identity_code.hpp"
#include "nfc/serialize.hpp"
#include "nfc/sum_code.hpp"

using namespace nfc;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

Field make_field(std::uint64_t q, fval p, const std::string& modulus) {
  if (!modulus.empty()) {
    require(p >= 2, "--modulus needs --char");
    std::vector<fval> coeffs;
    for (const auto& t : split(modulus, ','))
      coeffs.push_back(fval(std::stoul(t)));
    return FieldSpec::extension(p, coeffs);
  }
  require(q >= 2, "specify the field with --q (or --p with --modulus)");
  return FieldSpec::of_order(q);
}

Matrix make_target(const std::string& spec, const Field& f, size_t s) {
  if (spec == "sum") {
    Matrix t(f, s, 1);
    for (size_t i = 0; i < s; ++i) t.at(i, 0) = 1;
    return t;
  }
  if (spec == "identity") return Matrix::identity(f, s);
  Json j = load_json_file(spec);
  std::vector<Vec> rows;
  for (const auto& r : j) rows.push_back(r.get<Vec>());
  require(rows.size() == s, "target matrix must have one row per source");
  Matrix t = Matrix::from_rows(f, rows);
  for (size_t r = 0; r < t.rows(); ++r)
    for (size_t c = 0; c < t.cols(); ++c)
      require(t.at(r, c) < f->order(), "target entry out of the field");
  return t;
}

Json witness_json(const Network& net, const DistanceCertificate& cert) {
  Json w;
  Json pattern = Json::array();
  for (size_t e : cert.witness_pattern) pattern.push_back(net.edge_name(e));
  w["pattern"] = pattern;
  w["x"] = cert.witness_x;
  Json z = Json::object();
  for (size_t e = 0; e < cert.witness_z.size(); ++e)
    if (cert.witness_z[e] != 0) z[net.edge_name(e)] = cert.witness_z[e];
  w["z"] = z;
  return w;
}

void emit(const Json& j, const std::string& out_path, bool to_stdout) {
  std::string text = dump_json(j);
  if (!out_path.empty()) write_text_file(out_path, text);
  if (to_stdout) std::cout << text;
}

struct Args {
  std::string net_path, code_path, target = "sum", out, summary_out;
  std::string received, outages, x_csv, errors_csv;
  std::string r_csv, s_csv, assignment, scheme, gradients, stragglers,
      byzantine, modulus;
  std::uint64_t q = 0;
  fval p = 0;
  size_t k = 1, tau = 0, tau_s = 0, tau_b = 0, m = 1, plen = 1;
  std::uint64_t seed = 0;
  bool json = false;
};

int run(int argc, char** argv) {
  CLI::App app{"linear network codes for robust function computation"};
  app.require_subcommand(1);
  Args a;

  auto add_field_opts = [&](CLI::App* cmd, bool need_seed) {
    cmd->add_option("--q", a.q, "field order (prime or power of two)");
    cmd->add_option("--char", a.p, "field characteristic (with --modulus)");
    cmd->add_option("--modulus", a.modulus,
                    "extension modulus, low-to-high coefficients");
    auto* s = cmd->add_option("--seed", a.seed, "PRNG seed");
    if (need_seed) s->required();
  };

  // --- net ---
  auto* net = app.add_subcommand("net", "network inspection");
  net->require_subcommand(1);
  auto* nval = net->add_subcommand("validate", "check the network file");
  nval->add_option("--net", a.net_path)->required();
  nval->add_flag("--json", a.json);

  auto* ncut = net->add_subcommand("mincut", "min cut from sources to sink");
  ncut->add_option("--net", a.net_path)->required();
  ncut->add_option("--from", a.x_csv, "comma-separated vertex ids")->required();
  ncut->add_option("--to", a.outages, "target vertex (default: the sink)");
  ncut->add_flag("--json", a.json);

  auto* nbnd = net->add_subcommand("bounds", "robust computing capacity");
  nbnd->add_option("--net", a.net_path)->required();
  nbnd->add_option("--target", a.target, "sum | identity | matrix file");
  nbnd->add_option("--tau", a.tau)->required();
  add_field_opts(nbnd, true);
  nbnd->add_flag("--json", a.json);

  // --- code ---
  auto* code = app.add_subcommand("code", "construction and analysis");
  code->require_subcommand(1);
  auto* csum = code->add_subcommand("construct-sum", "Singleton-tight sum code");
  csum->add_option("--net", a.net_path)->required();
  csum->add_option("--k", a.k)->required();
  csum->add_option("--out", a.out, "code file to write")->required();
  csum->add_option("--summary", a.summary_out, "summary JSON file");
  add_field_opts(csum, true);
  csum->add_flag("--json", a.json);

  auto* cid = code->add_subcommand("construct-identity",
                                   "Singleton-tight identity code");
  cid->add_option("--net", a.net_path)->required();
  cid->add_option("--k", a.k)->required();
  cid->add_option("--out", a.out)->required();
  cid->add_option("--summary", a.summary_out);
  add_field_opts(cid, true);
  cid->add_flag("--json", a.json);

  auto* cdist = code->add_subcommand("distance", "minimum distance + witness");
  cdist->add_option("--net", a.net_path)->required();
  cdist->add_option("--code", a.code_path)->required();
  cdist->add_option("--target", a.target);
  cdist->add_option("--k", a.k)->required();
  cdist->add_flag("--json", a.json);

  auto* crob = code->add_subcommand("robust", "is d_min >= 2*tau + 1?");
  crob->add_option("--net", a.net_path)->required();
  crob->add_option("--code", a.code_path)->required();
  crob->add_option("--target", a.target);
  crob->add_option("--k", a.k)->required();
  crob->add_option("--tau", a.tau)->required();
  crob->add_flag("--json", a.json);

  auto* csim = code->add_subcommand("simulate", "transmit a message");
  csim->add_option("--net", a.net_path)->required();
  csim->add_option("--code", a.code_path)->required();
  csim->add_option("--x", a.x_csv, "message, comma-separated")->required();
  csim->add_option("--errors", a.errors_csv, "edge:value,... injections");
  csim->add_flag("--json", a.json);

  // --- decode ---
  auto* dec = app.add_subcommand("decode", "decode a received word");
  dec->add_option("--net", a.net_path)->required();
  dec->add_option("--code", a.code_path)->required();
  dec->add_option("--target", a.target);
  dec->add_option("--k", a.k)->required();
  dec->add_option("--received", a.received, "word file, * marks erasures")
      ->required();
  dec->add_option("--tau", a.tau, "error budget for minimum-distance decoding");
  dec->add_option("--outages", a.outages, "known outage edges, comma-separated");
  dec->add_flag("--json", a.json);

  // --- grad ---
  auto* grad = app.add_subcommand("grad", "gradient coding layer");
  grad->require_subcommand(1);
  auto* gplan = grad->add_subcommand("plan", "optimize loads, cut subsets");
  gplan->add_option("--r", a.r_csv, "storage fractions")->required();
  gplan->add_option("--s", a.s_csv, "speeds")->required();
  gplan->add_option("--tau-s", a.tau_s)->required();
  gplan->add_option("--m", a.m)->required();
  gplan->add_option("--out", a.out, "assignment file to write");
  gplan->add_flag("--json", a.json);

  auto* gbuild = grad->add_subcommand("build", "scheme from an assignment");
  gbuild->add_option("--assignment", a.assignment)->required();
  gbuild->add_option("--tau-s", a.tau_s)->required();
  gbuild->add_option("--tau-b", a.tau_b);
  gbuild->add_option("--m", a.m)->required();
  gbuild->add_option("--p", a.plen, "gradient length")->required();
  gbuild->add_option("--out", a.out)->required();
  add_field_opts(gbuild, true);
  gbuild->add_flag("--json", a.json);

  auto* gsim = grad->add_subcommand("simulate", "end-to-end run");
  gsim->add_option("--scheme", a.scheme)->required();
  gsim->add_option("--gradients", a.gradients, "JSON: K arrays of p values")
      ->required();
  gsim->add_option("--stragglers", a.stragglers, "worker ids, comma-separated");
  gsim->add_option("--byzantine", a.byzantine,
                   "worker ids; corruption drawn from the seed");
  gsim->add_option("--seed", a.seed)->required();
  gsim->add_flag("--json", a.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (nval->parsed()) {
    NetworkPtr n = load_network_file(a.net_path);
    Json j;
    j["vertices"] = n->vertex_count();
    j["edges"] = n->edge_count();
    j["sources"] = n->source_count();
    Json topo = Json::array();
    for (size_t v : n->topo_vertices()) topo.push_back(n->vertex_name(v));
    j["topological_order"] = topo;
    if (a.json)
      emit(j, "", true);
    else
      std::cout << "valid: " << n->vertex_count() << " vertices, "
                << n->edge_count() << " edges\n";
    return 0;
  }

  if (ncut->parsed()) {
    NetworkPtr n = load_network_file(a.net_path);
    std::vector<size_t> from;
    for (const auto& v : split(a.x_csv, ',')) from.push_back(n->vertex_index(v));
    size_t to = a.outages.empty() ? n->sink() : n->vertex_index(a.outages);
    auto rep = min_cut(*n, from, to);
    if (a.json) {
      Json j;
      j["size"] = rep.size;
      Json cut = Json::array();
      for (size_t e : rep.cut_edges) cut.push_back(n->edge_name(e));
      j["cut_edges"] = cut;
      Json sep = Json::array();
      for (size_t v : rep.separated) sep.push_back(n->vertex_name(v));
      j["separated_sources"] = sep;
      emit(j, "", true);
    } else {
      std::cout << rep.size << "\n";
    }
    return 0;
  }

  if (nbnd->parsed()) {
    NetworkPtr n = load_network_file(a.net_path);
    Field f = make_field(a.q, a.p, a.modulus);
    Matrix t = make_target(a.target, f, n->source_count());
    auto res = robust_lower(n, t, a.tau, f, a.seed);
    Json j;
    j["upper"] = to_string(res.report.upper);
    j["lower"] = to_string(res.report.lower);
    j["scheme"] = res.report.scheme;
    j["gap"] = res.report.gap;
    if (res.sum_witness)
      j["witness"] = Json{{"h", res.sum_witness->h},
                          {"d_min", res.sum_witness->certificate.d_min},
                          {"q", res.sum_witness->q}};
    if (res.identity_witness)
      j["witness"] = Json{{"delta", res.identity_witness->delta},
                          {"d_min", res.identity_witness->certificate.d_min},
                          {"q", res.identity_witness->q}};
    if (res.time_sharing_witness)
      j["witness"] = Json{{"rounds", res.time_sharing_witness->rounds.size()},
                          {"w_prime", res.time_sharing_witness->w_prime}};
    emit(j, "", true);
    return 0;
  }

  if (csum->parsed()) {
    NetworkPtr n = load_network_file(a.net_path);
    Field f = make_field(a.q, a.p, a.modulus);
    auto bundle = construct_sum_code(n, a.k, f, a.seed);
    Json codej = code_to_json(*bundle.code);
    codej["network"] = network_to_json(bundle.network->description());
    emit(codej, a.out, false);
    Json summary;
    summary["h"] = bundle.h;
    summary["k"] = a.k;
    summary["d_min"] = bundle.certificate.d_min;
    summary["q"] = bundle.q;
    summary["seed"] = bundle.seed;
    summary["notes"] = bundle.notes;
    if (!a.summary_out.empty()) emit(summary, a.summary_out, false);
    emit(summary, "", true);
    return 0;
  }

  if (cid->parsed()) {
    NetworkPtr n = load_network_file(a.net_path);
    Field f = make_field(a.q, a.p, a.modulus);
    auto res = construct_identity_code(n, a.k, f, a.seed);
    Json codej = code_to_json(*res.code);
    codej["network"] = network_to_json(n->description());
    emit(codej, a.out, false);
    Json summary;
    summary["delta"] = res.delta;
    summary["r_delta"] = res.r_count;
    summary["k"] = a.k;
    summary["q"] = res.q;
    summary["d_min"] = res.certificate.d_min;
    summary["seed"] = res.seed;
    summary["notes"] = res.notes;
    if (!a.summary_out.empty()) emit(summary, a.summary_out, false);
    emit(summary, "", true);
    return 0;
  }

  // Codes written by the constructors embed their (possibly normalized)
  // network; hand-written code files fall back to --net.
  auto load_code = [&]() {
    Json j = load_json_file(a.code_path);
    NetworkPtr n;
    if (j.contains("network"))
      n = std::make_shared<Network>(
          Network::validate(network_from_json(j.at("network"))));
    else
      n = load_network_file(a.net_path);
    return code_from_json(j, n);
  };

  if (cdist->parsed()) {
    auto c = load_code();
    Matrix t = make_target(a.target, c->field(), c->net().source_count());
    auto cert = min_distance(*c, t, a.k);
    if (a.json) {
      Json j;
      j["d_min"] = cert.d_min;
      j["witness"] = witness_json(c->net(), cert);
      emit(j, "", true);
    } else {
      std::cout << cert.d_min << "\n";
    }
    return 0;
  }

  if (crob->parsed()) {
    auto c = load_code();
    Matrix t = make_target(a.target, c->field(), c->net().source_count());
    bool rob = is_robust(*c, t, a.k, a.tau);
    if (a.json)
      emit(Json{{"robust", rob}, {"tau", a.tau}}, "", true);
    else
      std::cout << (rob ? "true" : "false") << "\n";
    return 0;
  }

  if (csim->parsed()) {
    auto c = load_code();
    Vec x;
    for (const auto& t : split(a.x_csv, ','))
      x.push_back(fval(std::stoul(t)));
    ErrorVector z = ErrorVector::zero(c->net().edge_count());
    for (const auto& t : split(a.errors_csv, ',')) {
      auto pos = t.find(':');
      require(pos != std::string::npos, "errors look like edge:value");
      size_t e = c->net().edge_index(t.substr(0, pos));
      z.z[e] = fval(std::stoul(t.substr(pos + 1)));
    }
    z = ErrorVector::from_values(z.z);
    auto w = transmit(*c, x, z);
    if (a.json)
      emit(Json{{"received", w.values}}, "", true);
    else
      std::cout << received_word_to_text(w) << "\n";
    return 0;
  }

  if (dec->parsed()) {
    auto c = load_code();
    Matrix t = make_target(a.target, c->field(), c->net().source_count());
    std::ifstream in(a.received);
    require(in.good(), "cannot open " + a.received);
    std::stringstream ss;
    ss << in.rdbuf();
    ReceivedWord w = parse_received_word(ss.str(), c->net().in_gamma().size());

    DecodeResult res;
    std::string mode;
    if (!a.outages.empty()) {
      std::vector<size_t> rho;
      for (const auto& e : split(a.outages, ','))
        rho.push_back(c->net().edge_index(e));
      res = outage_decode(*c, t, a.k, w, rho);
      mode = "outage";
    } else if (w.has_star()) {
      res = erasure_decode(*c, t, a.k, w);
      mode = "erasure";
    } else {
      res = md_decode(*c, t, a.k, w, a.tau);
      mode = "minimum-distance";
    }
    Json j;
    j["mode"] = mode;
    j["status"] = res.ok() ? "ok" : "detected-failure";
    if (res.ok()) {
      j["value"] = res.value;
      j["witness_x"] = res.witness_x;
      Json z = Json::object();
      for (size_t e = 0; e < res.witness_z.size(); ++e)
        if (res.witness_z[e] != 0)
          z[c->net().edge_name(e)] = res.witness_z[e];
      j["witness_z"] = z;
    }
    emit(j, "", true);
    return res.ok() ? 0 : 1;
  }

  if (gplan->parsed()) {
    std::vector<WorkerProfile> profiles;
    auto rs = split(a.r_csv, ','), ss = split(a.s_csv, ',');
    require(rs.size() == ss.size(), "--r and --s need equal lengths");
    for (size_t i = 0; i < rs.size(); ++i)
      profiles.push_back({parse_rational(rs[i]), parse_rational(ss[i])});
    auto mu = optimize_load(profiles, a.tau_s, a.m);
    auto assign = load_to_assignment(mu, a.tau_s, a.m);
    Json j;
    Json muj = Json::array();
    for (const auto& x : mu) muj.push_back(to_string(x));
    j["mu"] = muj;
    j["assignment"] = assignment_to_json(assign);
    if (!a.out.empty()) emit(assignment_to_json(assign), a.out, false);
    if (a.json)
      emit(j, "", true);
    else {
      std::string line;
      for (size_t i = 0; i < mu.size(); ++i)
        line += (i ? "," : "") + to_string(mu[i]);
      std::cout << line << "\n";
    }
    return 0;
  }

  if (gbuild->parsed()) {
    auto assign = assignment_from_json(load_json_file(a.assignment));
    Field f = make_field(a.q, a.p, a.modulus);
    auto scheme =
        build_scheme(assign, a.tau_s, a.tau_b, a.m, a.plen, f, a.seed);
    emit(scheme_to_json(scheme), a.out, false);
    Json j;
    j["d_min"] = scheme.cert.d_min;
    j["workers"] = assign.worker_count();
    j["subsets"] = assign.subset_count;
    j["q"] = scheme.q;
    emit(j, "", true);
    return 0;
  }

  if (gsim->parsed()) {
    auto scheme = scheme_from_json(load_json_file(a.scheme));
    Json gj = load_json_file(a.gradients);
    std::vector<Vec> grads;
    for (const auto& row : gj) grads.push_back(row.get<Vec>());
    std::set<size_t> stragglers;
    for (const auto& t : split(a.stragglers, ','))
      stragglers.insert(std::stoul(t));
    std::map<size_t, std::optional<Vec>> byz;
    for (const auto& t : split(a.byzantine, ','))
      byz[std::stoul(t)] = std::nullopt;
    auto rep = simulate(scheme, grads, stragglers, byz, a.seed);
    Json j;
    j["success"] = rep.success;
    j["stragglers"] = rep.stragglers;
    j["corrupted"] = rep.corrupted;
    j["decoded"] = rep.decoded;
    j["expected"] = rep.expected;
    if (!rep.failure.empty()) j["failure"] = rep.failure;
    j["timings_us"] = Json{{"encode", rep.encode_us},
                           {"attack", rep.attack_us},
                           {"decode", rep.decode_us}};
    emit(j, "", true);
    return rep.success ? 0 : 1;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InvariantError& e) {
    std::cerr << "internal invariant violated: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
