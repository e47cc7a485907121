// SPDX-License-Identifier: Apache-2.0
#include "nfc/sum_code.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace nfc {

namespace {

size_t min_source_mincut(const Network& net) {
  size_t h = size_t(-1);
  for (size_t s : net.sources())
    h = std::min(h, min_cut(net, {s}, net.sink()).size);
  return h;
}

Matrix ones_column(const Field& f, size_t s) {
  Matrix t(f, s, 1);
  for (size_t i = 0; i < s; ++i) t.at(i, 0) = 1;
  return t;
}

}  // namespace

Network normalize_degrees(const Network& net, size_t h) {
  require(h == min_source_mincut(net),
          "h must be the minimum source min-cut");
  bool needed = false;
  for (size_t s : net.sources())
    if (net.out_edges(s).size() != h) needed = true;
  if (net.in_gamma().size() != h) needed = true;
  if (!needed) return net;

  NetworkDescription nd = net.description();
  std::vector<std::string> new_sources;
  for (size_t s : net.sources()) {
    const std::string& name = net.vertex_name(s);
    size_t deg = net.out_edges(s).size();
    ensure(deg >= h, "source out-degree below its min-cut");
    if (deg == h) {
      new_sources.push_back(name);
      continue;
    }
    std::string aux = "__src_" + name;
    nd.vertices.push_back(aux);
    for (size_t j = 0; j < h; ++j)
      nd.edges.push_back({"__se_" + name + "_" + std::to_string(j), aux, name});
    new_sources.push_back(aux);
  }
  nd.sources = new_sources;
  if (net.in_gamma().size() != h) {
    const std::string gname = net.vertex_name(net.sink());
    std::string aux = "__sink";
    nd.vertices.push_back(aux);
    for (size_t j = 0; j < h; ++j)
      nd.edges.push_back({"__te_" + std::to_string(j), gname, aux});
    nd.sinks = {aux};
  }
  Network out = Network::validate(nd);
  ensure(min_source_mincut(out) == h, "normalization changed min-cuts");
  for (size_t s : out.sources())
    ensure(out.out_edges(s).size() == h, "normalization missed a source");
  ensure(out.in_gamma().size() == h, "normalization missed the sink");
  return out;
}

MulticastSolution multicast_reverse(const Network& rnet, size_t h, Field field,
                                    Rng& rng, size_t retries) {
  require(rnet.sources().size() == 1,
          "reverse network must have a single multicast source");
  const Field& f = field;
  const size_t ecount = rnet.edge_count();
  const size_t src = rnet.sources()[0];
  const auto& out_src = rnet.out_edges(src);
  require(out_src.size() == h, "multicast source out-degree must equal h");
  const auto& sinks = rnet.sinks();
  require(!sinks.empty(), "reverse network has no sinks");
  require(f->order() > sinks.size(), "multicast needs q > number of sinks");

  for (size_t attempt = 0; attempt < retries; ++attempt) {
    Matrix b(f, h, ecount);
    Matrix kmat(f, ecount, ecount);
    for (size_t r = 0; r < h; ++r)
      for (size_t e : out_src) b.at(r, e) = fval(rng.below(f->order()));
    for (size_t d = 0; d < ecount; ++d)
      for (size_t e : rnet.out_edges(rnet.head(d)))
        kmat.at(d, e) = fval(rng.below(f->order()));

    // W = B (I-K)^{-1}, column by column along the topological edge order
    Matrix w(f, h, ecount);
    for (size_t e : rnet.edges_in_topo_order()) {
      for (size_t r = 0; r < h; ++r) {
        fval acc = b.at(r, e);
        for (size_t d : rnet.in_edges(rnet.tail(e)))
          acc = f->add(acc, f->mul(w.at(r, d), kmat.at(d, e)));
        w.at(r, e) = acc;
      }
    }

    std::vector<Matrix> f_i;
    bool good = true;
    for (size_t i = 0; i < sinks.size() && good; ++i) {
      const auto& in_i = rnet.in_edges(sinks[i]);
      require(in_i.size() == h, "multicast sink in-degree must equal h");
      Matrix fi = w.cols_at(in_i);
      if (fi.rank() != h) good = false;
      f_i.push_back(std::move(fi));
    }
    if (!good) continue;
    Matrix b_tilde(f, h, h);
    for (size_t r = 0; r < h; ++r)
      for (size_t j = 0; j < h; ++j) b_tilde.at(r, j) = b.at(r, out_src[j]);
    ensure(b_tilde.rank() == h, "B_tilde singular despite full-rank F_i");
    return {std::move(b), std::move(kmat), std::move(f_i), std::move(b_tilde)};
  }
  throw DomainError("multicast solution not found over " + f->describe() +
                    " after " + std::to_string(retries) +
                    " attempts; grow the field");
}

GaussianMargin gaussian_margin(size_t h, size_t k, size_t e_count,
                               std::uint64_t q) {
  require(k < h, "gaussian margin needs h - k > 0");
  require(h - k <= e_count, "gaussian margin needs h - k <= E");
  auto power = [](bigint base, size_t e) {
    bigint r = 1;
    for (size_t i = 0; i < e; ++i) r *= base;
    return r;
  };
  bigint num = 1, den = 1;
  for (size_t i = 0; i < k; ++i) {
    num *= power(q, h) - power(q, i);
    den *= power(q, k) - power(q, i);
  }
  ensure(num % den == 0, "gaussian coefficient not integral");
  bigint gauss = num / den;
  bigint binom = 1;
  for (size_t i = 0; i < h - k; ++i) {
    binom *= bigint(e_count - i);
    binom /= bigint(i + 1);
  }
  GaussianMargin m;
  m.rhs = gauss;
  m.lhs = (gauss - power(q, k * (h - k))) * binom;
  m.sufficient = m.lhs < m.rhs;
  return m;
}

Matrix find_d(const Matrix& g, size_t h, size_t k, Rng& rng, size_t retries) {
  require(k >= 1 && k <= h, "find_d needs 1 <= k <= h");
  require(g.cols() == h, "G must have h columns");
  const Field& f = g.field();

  // distinct nonzero rows of G; equal rows span equal spaces
  std::set<Vec> seen;
  std::vector<Vec> rows;
  for (size_t e = 0; e < g.rows(); ++e) {
    Vec r = g.row(e);
    if (vec_is_zero(r)) continue;
    if (seen.insert(r).second) rows.push_back(std::move(r));
  }

  std::string last_violation;
  for (size_t attempt = 0; attempt < retries; ++attempt) {
    Matrix d = Matrix::random(f, k, h, rng);
    if (d.rank() != k) continue;
    bool ok = true;
    if (k < h) {
      const size_t sub = std::min(h - k, rows.size());
      ok = for_each_subset(rows.size(), sub, [&](const std::vector<size_t>& sel) {
        std::vector<Vec> pick;
        for (size_t i : sel) pick.push_back(rows[i]);
        Matrix span = Matrix::from_rows(f, pick);
        Matrix stacked = Matrix::vstack(d, span);
        if (stacked.rank() != k + span.rank()) {
          last_violation = "rows {";
          for (size_t i : sel) last_violation += std::to_string(i) + ",";
          last_violation += "}";
          return false;
        }
        return true;
      });
    }
    if (!ok) continue;
    auto rr = d.rref();
    ensure(rr.pivot_cols.size() == k, "D lost rank under reduction");
    return rr.mat;
  }
  throw DomainError(
      "find_d: no admissible subspace after " + std::to_string(retries) +
      " attempts (field too small?); last violating subset " + last_violation);
}

namespace {

/* One attempt at the full reverse-multicast construction over a fixed field.
 * Throws DomainError when randomness runs out of retries. */
SumCodeBundle construct_sum_once(const NetworkPtr& base, size_t k, Field field,
                                 std::uint64_t seed, const SumCodeOptions& opts,
                                 size_t h) {
  const Field& f = field;
  Rng rng(seed);
  require(f->order() > base->source_count(),
          "multicast needs q > number of sources");

  auto norm = std::make_shared<Network>(normalize_degrees(*base, h));
  Network rev = norm->reverse();
  const size_t ecount = norm->edge_count();
  const size_t s = norm->source_count();

  Rng mrng = rng.fork();
  MulticastSolution mc =
      multicast_reverse(rev, h, f, mrng, opts.multicast_retries);

  // --- sum code on the forward network ---
  // transfer matrix is the transpose of the multicast one (edge ids align)
  Matrix kc(f, ecount, ecount);
  for (size_t d = 0; d < ecount; ++d)
    for (size_t e = 0; e < ecount; ++e) kc.at(d, e) = mc.k.at(e, d);

  // G of the forward code, by a zero-source derivation
  std::vector<Matrix> zb(s, Matrix(f, 1, ecount));
  LinearNetworkCode probe(norm, f, 1, zb, kc);
  Matrix g = probe.matrices().g;

  Matrix d = find_d(g, h, k, rng, opts.d_retries);

  Matrix bt_inv = mc.b_tilde.transpose().inverse();
  std::vector<Matrix> source_mats;
  std::vector<Matrix> f_primes;
  for (size_t i = 0; i < s; ++i) {
    Matrix f_prime = mc.f_i[i].transpose() * bt_inv;
    // must agree with A_Out(sigma_i) (I-K^T)^{-1} A_In(gamma)^T
    ensure(f_prime == g.rows_at(norm->out_edges(norm->sources()[i])),
           "edge order mismatch between the two F_i' routes");
    Matrix ei_core = d * f_prime.inverse();  // k x h
    Matrix bi(f, k, ecount);
    const auto& out_i = norm->out_edges(norm->sources()[i]);
    for (size_t r = 0; r < k; ++r)
      for (size_t j = 0; j < h; ++j) bi.at(r, out_i[j]) = ei_core.at(r, j);
    source_mats.push_back(std::move(bi));
    f_primes.push_back(std::move(f_prime));
  }

  auto code = std::make_shared<LinearNetworkCode>(norm, f, k, source_mats, kc);

  // global matrix must be D stacked s times
  const Matrix& fm = code->matrices().f;
  for (size_t i = 0; i < s; ++i)
    for (size_t r = 0; r < k; ++r)
      for (size_t c = 0; c < h; ++c)
        ensure(fm.at(i * k + r, c) == d.at(r, c),
               "global matrix is not D stacked");

  Matrix t = ones_column(f, s);
  ensure(computes_function(*code, t, k), "sum code cannot compute the sum");
  DistanceCertificate cert = min_distance(*code, t, k);
  ensure(cert.d_min == h - k + 1, "sum code distance " +
                                      std::to_string(cert.d_min) +
                                      " != " + std::to_string(h - k + 1));

  SumCodeBundle bundle;
  bundle.code = code;
  bundle.network = norm;
  bundle.d = d;
  bundle.f_prime = f_primes;
  bundle.certificate = cert;
  bundle.h = h;
  bundle.q = f->order();
  bundle.seed = seed;
  return bundle;
}

}  // namespace

SumCodeBundle construct_sum_code(const NetworkPtr& net, size_t k, Field field,
                                 std::uint64_t seed,
                                 const SumCodeOptions& opts) {
  require(k >= 1, "rate must be positive");
  const size_t h = min_source_mincut(*net);
  require(k <= h, "rate exceeds the minimum source min-cut");

  std::vector<std::string> notes;
  Field f = field;
  for (size_t step = 0;; ++step) {
    bool margin_ok = true;
    if (k < h) {
      // normalization can only add s*h + h edges
      size_t e_bound = net->edge_count() + net->source_count() * h + h;
      auto m = gaussian_margin(h, k, e_bound, f->order());
      margin_ok = m.sufficient;
    }
    try {
      SumCodeBundle bundle = construct_sum_once(net, k, f, seed, opts, h);
      notes.push_back(margin_ok
                          ? "gaussian margin sufficient at q=" +
                                std::to_string(f->order())
                          : "randomized search succeeded at q=" +
                                std::to_string(f->order()) +
                                " without a margin certificate");
      bundle.notes = notes;
      return bundle;
    } catch (const DomainError& err) {
      if (!opts.auto_grow_field || step >= opts.growth_steps) throw;
      std::uint64_t nq = next_prime_at_least(2 * f->order());
      notes.push_back("grew field to q=" + std::to_string(nq) + " after: " +
                      err.what());
      f = FieldSpec::prime(fval(nq));
    }
  }
}

namespace {

// polynomial helpers over a field, coefficients low-to-high
Vec poly_mul_f(const Field& f, const Vec& a, const Vec& b) {
  if (a.empty() || b.empty()) return {};
  Vec c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = f->add(c[i + j], f->mul(a[i], b[j]));
  return c;
}

fval poly_eval(const Field& f, const Vec& p, fval x) {
  fval acc = 0;
  for (size_t i = p.size(); i-- > 0;) acc = f->add(f->mul(acc, x), p[i]);
  return acc;
}

}  // namespace

SumCodeBundle three_layer_sum_code(const NetworkPtr& net, size_t k,
                                   Field field) {
  const Field& f = field;
  const size_t s = net->source_count();
  const size_t gamma = net->sink();
  std::set<size_t> source_set(net->sources().begin(), net->sources().end());

  // classify: every edge is source->relay or relay->sink, one sink edge each
  const auto& in_gamma = net->in_gamma();
  const size_t n_relays = in_gamma.size();
  std::map<size_t, size_t> relay_coord;  // relay vertex -> In(gamma) position
  for (size_t c = 0; c < n_relays; ++c) {
    size_t relay = net->tail(in_gamma[c]);
    require(!source_set.count(relay), "three-layer: source wired to the sink");
    require(!relay_coord.count(relay),
            "three-layer: relay with several sink edges");
    relay_coord[relay] = c;
  }
  for (size_t e = 0; e < net->edge_count(); ++e) {
    size_t t = net->tail(e), h2 = net->head(e);
    if (source_set.count(t))
      require(relay_coord.count(h2), "three-layer: source edge misses relays");
    else
      require(h2 == gamma, "three-layer: relay edge misses the sink");
  }
  require(f->order() >= n_relays + 1,
          "three-layer construction needs q - 1 >= number of relays");

  size_t cstar = size_t(-1);
  for (size_t src : net->sources())
    cstar = std::min(cstar, net->out_edges(src).size());
  require(k >= 1 && k <= cstar, "rate must lie in [1, c*]");

  // distinct nonzero evaluation points, one per In(gamma) coordinate
  Vec alpha(n_relays);
  for (size_t c = 0; c < n_relays; ++c)
    alpha[c] = f->pow(f->omega(), std::uint64_t(c + 1));

  /* Source j, message slot t sends p_{j,t}(alpha_c) to the relay at
   * coordinate c.  p_{j,t} is divisible by prod_{c not adjacent} (X-alpha_c)
   * and shaped so that the k top coefficients (degrees N-c* .. N-c*+k-1) are
   * the unit vector at slot t: the sink then reads each sum coordinate off
   * one top coefficient, and a nonzero sum forces a nonzero polynomial of
   * degree <= N-c*+k-1, hence at least c*-k+1 nonzero evaluations. */
  const size_t window_base = n_relays - cstar;
  std::vector<Matrix> source_mats;
  for (size_t i = 0; i < s; ++i) {
    size_t src = net->sources()[i];
    std::vector<char> adjacent(n_relays, 0);
    for (size_t e : net->out_edges(src)) {
      require(relay_coord.count(net->head(e)), "three-layer shape");
      adjacent[relay_coord[net->head(e)]] = 1;
    }
    Vec base{1};
    for (size_t c = 0; c < n_relays; ++c)
      if (!adjacent[c]) base = poly_mul_f(f, base, Vec{f->neg(alpha[c]), 1});

    Matrix bi(f, k, net->edge_count());
    for (size_t t = 1; t <= k; ++t) {
      // monic of degree window_base + k - t, then clear the lower window slots
      size_t deg = window_base + k - t;
      ensure(deg + 1 >= base.size(), "degree bookkeeping");
      Vec shift(deg + 1 - (base.size() - 1), 0);
      shift.back() = 1;
      Vec p = poly_mul_f(f, base, shift);
      for (size_t t2 = t + 1; t2 <= k; ++t2) {
        size_t pos = window_base + k - t2;
        fval c = p.size() > pos ? p[pos] : 0;
        if (c == 0) continue;
        Vec corr(pos - (base.size() - 1) + 1, 0);
        corr.back() = c;
        Vec sub = poly_mul_f(f, base, corr);
        sub.resize(p.size(), 0);
        for (size_t ci = 0; ci < p.size(); ++ci) p[ci] = f->sub(p[ci], sub[ci]);
      }
      // window sanity: coefficient delta at slot t
      for (size_t t2 = 1; t2 <= k; ++t2) {
        size_t pos = window_base + k - t2;
        fval c = p.size() > pos ? p[pos] : 0;
        ensure(c == (t2 == t ? 1u : 0u), "window coefficients off");
      }
      for (size_t e : net->out_edges(src))
        bi.at(t - 1, e) = poly_eval(f, p, alpha[relay_coord[net->head(e)]]);
    }
    source_mats.push_back(std::move(bi));
  }

  Matrix kmat(f, net->edge_count(), net->edge_count());
  for (size_t e = 0; e < net->edge_count(); ++e) {
    size_t t = net->tail(e);
    if (source_set.count(t)) continue;
    for (size_t d : net->in_edges(t)) kmat.at(d, e) = 1;
  }

  auto code =
      std::make_shared<LinearNetworkCode>(net, f, k, source_mats, kmat);
  Matrix t = ones_column(f, s);
  ensure(computes_function(*code, t, k),
         "three-layer code cannot compute the sum");
  DistanceCertificate cert = min_distance(*code, t, k);
  ensure(cert.d_min == cstar - k + 1,
         "three-layer distance " + std::to_string(cert.d_min) +
             " != " + std::to_string(cstar - k + 1));

  SumCodeBundle bundle;
  bundle.code = code;
  bundle.network = net;
  bundle.certificate = cert;
  bundle.h = cstar;
  bundle.q = f->order();
  bundle.seed = 0;
  return bundle;
}

}  // namespace nfc
