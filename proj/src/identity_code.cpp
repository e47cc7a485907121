// SPDX-License-Identifier: Apache-2.0
#include "nfc/identity_code.hpp"

#include <algorithm>
#include <set>

namespace nfc {

namespace {

// coordinate of a channel inside the [sk] + E layout; error channel e' is
// identified with the coordinate of e
size_t coord_of(const Channel& ch, size_t sk) {
  return ch.kind == Channel::Kind::Message ? ch.index : sk + ch.index;
}

}  // namespace

ConstructionState::ConstructionState(NetworkPtr net, Field field, size_t k,
                                     size_t delta,
                                     std::vector<std::vector<size_t>> patterns)
    : net_(std::move(net)),
      field_(std::move(field)),
      k_(k),
      delta_(delta),
      sk_(net_->source_count() * k),
      patterns_(std::move(patterns)) {
  const size_t ecount = net_->edge_count();
  f_edge_.assign(ecount, Vec());
  processed_.assign(ecount, 0);
  path_roles_.assign(ecount, {});
  b_.assign(net_->source_count(), Matrix(field_, k_, ecount));
  k_mat_ = Matrix(field_, ecount, ecount);

  for (size_t pi = 0; pi < patterns_.size(); ++pi) {
    const auto& rho = patterns_[pi];
    require(rho.size() == delta_, "pattern size must equal delta");
    PathFamily fam = disjoint_path_family(*net_, rho, k_, delta_);

    // initial cut: all message channels plus the error channels of rho
    std::vector<Channel> cut;
    for (size_t i = 0; i < sk_; ++i)
      cut.push_back({Channel::Kind::Message, i});
    for (size_t e : rho) cut.push_back({Channel::Kind::ErrorChan, e});
    cuts_.push_back(std::move(cut));

    // predecessor bookkeeping along each path
    std::vector<size_t> msg_seen(net_->source_count(), 0);
    for (const auto& path : fam.paths) {
      Channel pred;
      if (path.origin == Path::Origin::Message) {
        size_t ordinal = path.source * k_ + msg_seen[path.source]++;
        pred = {Channel::Kind::Message, ordinal};
      } else {
        pred = {Channel::Kind::ErrorChan, path.origin_edge};
      }
      for (size_t e : path.edges) {
        path_roles_[e].push_back({pi, pred});
        pred = {Channel::Kind::Edge, e};
      }
    }
  }
  assert_invariant();
}

Vec ConstructionState::f_tilde(const Channel& ch) const {
  if (ch.kind == Channel::Kind::Edge) {
    ensure(processed_[ch.index], "edge vector requested before processing");
    return f_edge_[ch.index];
  }
  Vec v(coord_count(), 0);
  v[coord_of(ch, sk_)] = 1;
  return v;
}

std::vector<Channel> ConstructionState::ambient(size_t edge) const {
  std::vector<Channel> chans;
  size_t tail = net_->tail(edge);
  const auto& srcs = net_->sources();
  auto it = std::find(srcs.begin(), srcs.end(), tail);
  if (it != srcs.end()) {
    size_t si = size_t(it - srcs.begin());
    for (size_t j = 0; j < k_; ++j)
      chans.push_back({Channel::Kind::Message, si * k_ + j});
  } else {
    for (size_t d : net_->in_edges(tail))
      chans.push_back({Channel::Kind::Edge, d});
  }
  chans.push_back({Channel::Kind::ErrorChan, edge});
  return chans;
}

Matrix ConstructionState::restricted(const std::vector<Channel>& chans,
                                     size_t pattern) const {
  // rows restricted to the [sk] + rho coordinates
  const auto& rho = patterns_[pattern];
  std::vector<Vec> rows;
  for (const auto& ch : chans) {
    Vec full = f_tilde(ch);
    Vec r(sk_ + rho.size());
    for (size_t i = 0; i < sk_; ++i) r[i] = full[i];
    for (size_t i = 0; i < rho.size(); ++i) r[sk_ + i] = full[sk_ + rho[i]];
    rows.push_back(std::move(r));
  }
  return Matrix::from_rows(field_, rows);
}

Matrix ConstructionState::forbidden_basis(size_t edge, size_t pattern) const {
  /* L^rho(CUT_rho \ {pred}) + L^(rho^c)(In(tail) + {e'}): the first zeroes
   * every coordinate outside [sk] + rho, the second zeroes [sk] + rho. */
  const auto& rho = patterns_[pattern];
  std::set<size_t> rho_set(rho.begin(), rho.end());
  Channel pred{};
  for (const auto& role : path_roles_[edge])
    if (role.pattern == pattern) pred = role.pred;

  std::vector<Vec> rows;
  for (const auto& ch : cuts_[pattern]) {
    if (ch == pred) continue;
    Vec v = f_tilde(ch);
    for (size_t e = 0; e < net_->edge_count(); ++e)
      if (!rho_set.count(e)) v[sk_ + e] = 0;
    rows.push_back(std::move(v));
  }
  for (const auto& ch : ambient(edge)) {
    Vec v = f_tilde(ch);
    for (size_t i = 0; i < sk_; ++i) v[i] = 0;
    for (size_t e : rho) v[sk_ + e] = 0;
    if (!vec_is_zero(v)) rows.push_back(std::move(v));
  }
  if (rows.empty()) return Matrix(field_, 0, coord_count());
  return Matrix::from_rows(field_, rows);
}

bool ConstructionState::forbidden(size_t edge, const Vec& candidate) const {
  for (const auto& role : path_roles_[edge]) {
    Matrix basis = forbidden_basis(edge, role.pattern);
    if (in_row_space(basis, candidate)) return true;
  }
  return false;
}

Vec ConstructionState::choose_g(size_t edge, Rng& rng) const {
  require(on_any_path(edge), "choose_g applies to path edges only");
  std::vector<Channel> chans = ambient(edge);
  std::vector<Vec> rows;
  for (const auto& ch : chans) rows.push_back(f_tilde(ch));
  Matrix ambient_mat = Matrix::from_rows(field_, rows);

  // the paper's existence argument: the predecessor vector itself always
  // escapes the forbidden union
  for (const auto& role : path_roles_[edge]) {
    Vec pred_vec = f_tilde(role.pred);
    ensure(!in_row_space(forbidden_basis(edge, role.pattern), pred_vec),
           "predecessor vector trapped in a forbidden space");
  }

  const std::uint64_t q = field_->order();
  const size_t nch = chans.size();

  // rejection sampling over the coefficient space
  constexpr size_t kSampleCap = 1024;
  for (size_t it = 0; it < kSampleCap; ++it) {
    Vec coef(nch);
    for (auto& c : coef) c = fval(rng.below(q));
    Vec cand = vec_mat(coef, ambient_mat);
    if (vec_is_zero(cand)) continue;
    if (!forbidden(edge, cand)) return cand;
    // exhaustive fallback for small spans
    size_t ell = ambient_mat.rank();
    double span = 1;
    for (size_t i = 0; i < ell; ++i) span *= double(q);
    if (span <= 4096.0) break;
  }

  // enumerate the span over a row basis
  auto rr = ambient_mat.rref();
  std::vector<size_t> keep;
  for (size_t i = 0; i < rr.pivot_cols.size(); ++i) keep.push_back(i);
  Matrix basis = rr.mat.rows_at(keep);
  const size_t ell = basis.rows();
  double span = 1;
  for (size_t i = 0; i < ell; ++i) span *= double(q);
  require(span <= (1 << 22), "ambient span too large for exhaustive search");
  Vec coef(ell, 0);
  for (;;) {
    // odometer
    size_t i = 0;
    while (i < ell) {
      coef[i] = fval(coef[i] + 1 == q ? 0 : coef[i] + 1);
      if (coef[i] != 0) break;
      ++i;
    }
    if (i == ell) break;
    Vec cand = vec_mat(coef, basis);
    if (vec_is_zero(cand)) continue;
    if (!forbidden(edge, cand)) return cand;
  }
  throw InvariantError(
      "choose_g: forbidden spaces cover the whole span (q < |R(delta)|?)");
}

void ConstructionState::update_edge(size_t edge, const Vec& g) {
  require(!processed_[edge], "edge already processed");
  const Field& f = field_;
  const size_t ecoord = sk_ + edge;

  Vec fe;
  Vec coef;
  if (!on_any_path(edge)) {
    require(vec_is_zero(g), "off-path edges take the zero combination");
    fe.assign(coord_count(), 0);
    fe[ecoord] = 1;
  } else {
    std::vector<Channel> chans = ambient(edge);
    std::vector<Vec> rows;
    for (const auto& ch : chans) rows.push_back(f_tilde(ch));
    Matrix ambient_mat = Matrix::from_rows(f, rows);
    auto sol = solve_left(ambient_mat, g);
    require(sol.has_value(), "g is not in the ambient span");
    coef = sol->particular;

    fval ge = g[ecoord];
    if (ge == 0) {
      fe = g;
      fe[ecoord] = 1;
    } else {
      fe = vec_scale(f, f->inv(ge), g);
    }
    // local coefficients: divide by the error-channel share when normalizing
    fval scale = ge == 0 ? 1 : f->inv(ge);
    for (size_t i = 0; i + 1 < chans.size(); ++i) {  // last channel is e'
      const Channel& ch = chans[i];
      fval c = f->mul(coef[i], scale);
      if (ch.kind == Channel::Kind::Message) {
        size_t si = ch.index / k_, j = ch.index % k_;
        b_[si].at(j, edge) = c;
      } else {
        k_mat_.at(ch.index, edge) = c;
      }
    }
  }
  ensure(fe[ecoord] == 1, "f_e must carry a unit at its own coordinate");
  f_edge_[edge] = std::move(fe);
  processed_[edge] = 1;

  // swap the predecessor out of every affected cut
  for (const auto& role : path_roles_[edge]) {
    auto& cut = cuts_[role.pattern];
    auto it = std::find(cut.begin(), cut.end(), role.pred);
    ensure(it != cut.end(), "path predecessor missing from its cut");
    *it = {Channel::Kind::Edge, edge};
  }
  assert_invariant();
}

void ConstructionState::run(Rng& rng) {
  for (size_t e : net_->edges_in_topo_order()) {
    if (on_any_path(e)) {
      Vec g = choose_g(e, rng);
      update_edge(e, g);
    } else {
      update_edge(e, Vec(coord_count(), 0));
    }
  }
  assert_cuts_at_sink();
}

void ConstructionState::assert_invariant() const {
  for (size_t pi = 0; pi < patterns_.size(); ++pi) {
    Matrix m = restricted(cuts_[pi], pi);
    ensure(m.rank() == sk_ + delta_,
           "cut vectors lost full rank on the [sk]+rho coordinates");
  }
}

void ConstructionState::assert_cuts_at_sink() const {
  const auto& in_gamma = net_->in_gamma();
  std::set<size_t> gamma_set(in_gamma.begin(), in_gamma.end());
  for (const auto& cut : cuts_)
    for (const auto& ch : cut)
      ensure(ch.kind == Channel::Kind::Edge && gamma_set.count(ch.index),
             "a cut element did not reach In(gamma)");
}

ConstructionState init_state(const NetworkPtr& net, Field field, size_t k,
                             size_t delta, size_t r_limit) {
  require(delta >= 1, "init_state needs delta >= 1");
  Matrix eye = Matrix::identity(field, net->source_count());
  auto cq = cut_quantities(*net, eye, k);
  require(cq.delta == (long long)delta, "delta disagrees with cut_quantities");
  auto patterns = enumerate_r(*net, delta, r_limit);
  require(!patterns.empty(), "R(delta) is empty");
  return ConstructionState(net, std::move(field), k, delta,
                           std::move(patterns));
}

namespace {

// delta = 0: route each message along its own path with unit coefficients.
std::shared_ptr<const LinearNetworkCode> routing_code(const NetworkPtr& net,
                                                      Field field, size_t k) {
  PathFamily fam = disjoint_path_family(*net, {}, k, 0);
  const size_t ecount = net->edge_count();
  std::vector<Matrix> b(net->source_count(), Matrix(field, k, ecount));
  Matrix kmat(field, ecount, ecount);
  std::vector<size_t> msg_seen(net->source_count(), 0);
  for (const auto& path : fam.paths) {
    size_t j = msg_seen[path.source]++;
    b[path.source].at(j, path.edges.front()) = 1;
    for (size_t i = 0; i + 1 < path.edges.size(); ++i)
      kmat.at(path.edges[i], path.edges[i + 1]) = 1;
  }
  return std::make_shared<LinearNetworkCode>(net, field, k, b, kmat);
}

}  // namespace

IdentityCodeResult construct_identity_code(const NetworkPtr& net, size_t k,
                                           Field field, std::uint64_t seed,
                                           size_t r_limit, bool auto_grow) {
  require(k >= 1, "rate must be positive");
  Matrix eye = Matrix::identity(field, net->source_count());
  auto cq = cut_quantities(*net, eye, k);
  require(cq.delta >= 0,
          "rate too large: some source subset I has mincut(I) < k|I|");
  const size_t delta = size_t(cq.delta);

  IdentityCodeResult res;
  res.delta = cq.delta;
  res.q = field->order();
  res.seed = seed;

  std::shared_ptr<const LinearNetworkCode> code;
  if (delta == 0) {
    code = routing_code(net, field, k);
    res.r_count = 0;
    res.notes.push_back("delta = 0: plain routing");
  } else {
    auto patterns = enumerate_r(*net, delta, r_limit);
    res.r_count = patterns.size();
    if (field->order() < patterns.size() && auto_grow) {
      std::uint64_t nq = next_prime_at_least(patterns.size());
      res.notes.push_back("grew field to q=" + std::to_string(nq) +
                          " to reach |R(delta)| = " +
                          std::to_string(patterns.size()));
      field = FieldSpec::prime(fval(nq));
      res.q = field->order();
    }
    require(field->order() >= patterns.size(),
            "field must satisfy q >= |R(delta)| = " +
                std::to_string(patterns.size()));
    if (field->order() == patterns.size())
      res.notes.push_back("q equals |R(delta)|: sampling margin is tight");
    ConstructionState state(net, field, k, delta, std::move(patterns));
    Rng rng(seed);
    state.run(rng);
    code = std::make_shared<LinearNetworkCode>(
        net, field, k, state.source_matrices(), state.transfer());

    // the extended vectors of In(gamma) must reappear as columns of [F; G]
    const Matrix& ft = code->matrices().f_tilde;
    const auto& in_gamma = net->in_gamma();
    for (size_t c = 0; c < in_gamma.size(); ++c) {
      Vec expect = state.f_tilde({Channel::Kind::Edge, in_gamma[c]});
      for (size_t r = 0; r < ft.rows(); ++r)
        ensure(ft.at(r, c) == expect[r],
               "extended vectors disagree with the derived matrices");
    }
  }

  ensure(computes_function(*code, eye, k),
         "identity code cannot deliver the messages");
  res.certificate = min_distance(*code, eye, k);
  ensure(res.certificate.d_min == delta + 1,
         "identity code distance " + std::to_string(res.certificate.d_min) +
             " != " + std::to_string(delta + 1));
  res.code = code;
  return res;
}

}  // namespace nfc
