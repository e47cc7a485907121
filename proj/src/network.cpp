// SPDX-License-Identifier: Apache-2.0
#include "nfc/network.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace nfc {

namespace {

/* Unit-capacity flow scratchpad (BFS augmenting paths).  Arcs carry a tag:
 * the network edge index they represent, or -1 for auxiliary arcs. */
struct FlowGraph {
  struct Arc {
    size_t to;
    int cap;
    size_t rev;
    long long tag;
  };
  std::vector<std::vector<size_t>> adj;
  std::vector<Arc> arcs;

  explicit FlowGraph(size_t n) : adj(n) {}

  void add_arc(size_t u, size_t v, int cap, long long tag) {
    adj[u].push_back(arcs.size());
    arcs.push_back({v, cap, arcs.size() + 1, tag});
    adj[v].push_back(arcs.size());
    arcs.push_back({u, 0, arcs.size() - 1, -1});
  }

  int max_flow(size_t s, size_t t) {
    int total = 0;
    for (;;) {
      std::vector<long long> pred(adj.size(), -1);
      std::queue<size_t> q;
      q.push(s);
      std::vector<char> seen(adj.size(), 0);
      seen[s] = 1;
      while (!q.empty() && !seen[t]) {
        size_t u = q.front();
        q.pop();
        for (size_t ai : adj[u]) {
          const Arc& a = arcs[ai];
          if (a.cap > 0 && !seen[a.to]) {
            seen[a.to] = 1;
            pred[a.to] = (long long)ai;
            q.push(a.to);
          }
        }
      }
      if (!seen[t]) break;
      for (size_t v = t; v != s;) {
        size_t ai = size_t(pred[v]);
        arcs[ai].cap -= 1;
        arcs[arcs[ai].rev].cap += 1;
        v = arcs[arcs[ai].rev].to;
      }
      ++total;
    }
    return total;
  }

  std::vector<char> residual_reachable(size_t s) const {
    std::vector<char> seen(adj.size(), 0);
    std::queue<size_t> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      size_t u = q.front();
      q.pop();
      for (size_t ai : adj[u]) {
        const Arc& a = arcs[ai];
        if (a.cap > 0 && !seen[a.to]) {
          seen[a.to] = 1;
          q.push(a.to);
        }
      }
    }
    return seen;
  }

  // After max_flow: split the flow into unit paths s -> t (lists of arc ids).
  // Forward arcs sit at even indices; the flow they carry equals the
  // capacity accumulated on their reverse arc.  The graph is acyclic, so a
  // greedy walk along arcs with remaining flow always reaches t.
  std::vector<std::vector<size_t>> decompose_unit_paths(size_t s, size_t t) {
    std::vector<int> used(arcs.size(), 0);
    std::vector<std::vector<size_t>> paths;
    for (;;) {
      std::vector<size_t> path;
      size_t u = s;
      bool progressed = true;
      while (u != t && progressed) {
        progressed = false;
        for (size_t ai : adj[u]) {
          if (ai % 2 != 0) continue;
          if (arcs[arcs[ai].rev].cap - used[ai] <= 0) continue;
          used[ai] += 1;
          path.push_back(ai);
          u = arcs[ai].to;
          progressed = true;
          break;
        }
      }
      if (u != t) break;
      paths.push_back(std::move(path));
    }
    return paths;
  }
};

}  // namespace

size_t Network::vertex_index(const std::string& name) const {
  for (size_t i = 0; i < vertex_names_.size(); ++i)
    if (vertex_names_[i] == name) return i;
  throw DomainError("unknown vertex: " + name);
}

size_t Network::edge_index(const std::string& name) const {
  for (size_t i = 0; i < edge_names_.size(); ++i)
    if (edge_names_[i] == name) return i;
  throw DomainError("unknown edge: " + name);
}

size_t Network::sink() const {
  require(sinks_.size() == 1, "network has more than one sink");
  return sinks_[0];
}

size_t Network::pattern_source() const {
  require(pattern_source_ != size_t(-1), "network was not pattern-augmented");
  return pattern_source_;
}

Network Network::build(const NetworkDescription& nd, Mode mode) {
  Network net;
  net.vertex_names_ = nd.vertices;
  std::map<std::string, size_t> vidx;
  for (size_t i = 0; i < nd.vertices.size(); ++i) {
    require(!vidx.count(nd.vertices[i]), "duplicate vertex id: " + nd.vertices[i]);
    vidx[nd.vertices[i]] = i;
  }
  std::set<std::string> eids;
  for (const auto& e : nd.edges) {
    require(eids.insert(e.id).second, "duplicate edge id: " + e.id);
    require(vidx.count(e.tail), "edge " + e.id + ": unknown tail " + e.tail);
    require(vidx.count(e.head), "edge " + e.id + ": unknown head " + e.head);
    net.edge_names_.push_back(e.id);
    net.edge_tail_.push_back(vidx[e.tail]);
    net.edge_head_.push_back(vidx[e.head]);
  }
  const size_t n = net.vertex_count();
  net.in_.assign(n, {});
  net.out_.assign(n, {});
  for (size_t e = 0; e < net.edge_count(); ++e) {
    net.out_[net.tail(e)].push_back(e);
    net.in_[net.head(e)].push_back(e);
  }

  for (const auto& s : nd.sources) {
    require(vidx.count(s), "unknown source: " + s);
    net.sources_.push_back(vidx[s]);
  }
  require(!net.sources_.empty(), "network needs at least one source");
  {
    std::set<size_t> dedup(net.sources_.begin(), net.sources_.end());
    require(dedup.size() == net.sources_.size(), "duplicate source");
  }
  require(!nd.sinks.empty(), "network needs a sink");
  for (const auto& s : nd.sinks) {
    require(vidx.count(s), "unknown sink: " + s);
    net.sinks_.push_back(vidx[s]);
  }
  for (size_t s : net.sources_)
    for (size_t t : net.sinks_)
      require(s != t, "sink listed among the sources");

  // Kahn's algorithm; smallest vertex index first for a stable order.
  std::vector<size_t> indeg(n, 0);
  for (size_t e = 0; e < net.edge_count(); ++e) ++indeg[net.head(e)];
  std::priority_queue<size_t, std::vector<size_t>, std::greater<>> ready;
  for (size_t v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push(v);
  while (!ready.empty()) {
    size_t v = ready.top();
    ready.pop();
    net.topo_.push_back(v);
    for (size_t e : net.out_[v])
      if (--indeg[net.head(e)] == 0) ready.push(net.head(e));
  }
  require(net.topo_.size() == n, "cycle detected");
  net.topo_index_.assign(n, 0);
  for (size_t i = 0; i < n; ++i) net.topo_index_[net.topo_[i]] = i;

  for (size_t s : net.sources_)
    require(net.in_[s].empty(),
            "source " + net.vertex_name(s) + " has an incoming edge");
  for (size_t t : net.sinks_)
    require(net.out_[t].empty(),
            "sink " + net.vertex_name(t) + " has an outgoing edge");

  if (mode == Mode::Strict) {
    require(net.sinks_.size() == 1, "canonical networks have a single sink");
    size_t gamma = net.sinks_[0];
    // every non-sink vertex must have a directed path to gamma
    std::vector<char> to_sink(n, 0);
    to_sink[gamma] = 1;
    for (size_t i = n; i-- > 0;) {
      size_t v = net.topo_[i];
      for (size_t e : net.out_[v])
        if (to_sink[net.head(e)]) to_sink[v] = 1;
    }
    for (size_t v = 0; v < n; ++v)
      require(to_sink[v] || v == gamma,
              "vertex " + net.vertex_name(v) + " cannot reach the sink");
  }
  return net;
}

Network Network::validate(const NetworkDescription& nd) {
  return build(nd, Mode::Strict);
}

std::vector<size_t> Network::edges_in_topo_order() const {
  std::vector<size_t> order(edge_count());
  for (size_t e = 0; e < edge_count(); ++e) order[e] = e;
  std::sort(order.begin(), order.end(), [this](size_t a, size_t b) {
    size_t ta = topo_index_[tail(a)], tb = topo_index_[tail(b)];
    return ta != tb ? ta < tb : a < b;
  });
  return order;
}

bool Network::reaches(size_t u, size_t v) const {
  std::vector<char> seen(vertex_count(), 0);
  std::queue<size_t> q;
  q.push(u);
  seen[u] = 1;
  while (!q.empty()) {
    size_t x = q.front();
    q.pop();
    if (x == v) return true;
    for (size_t e : out_[x])
      if (!seen[head(e)]) {
        seen[head(e)] = 1;
        q.push(head(e));
      }
  }
  return false;
}

Network Network::reverse() const {
  NetworkDescription nd;
  nd.vertices = vertex_names_;
  for (size_t e = 0; e < edge_count(); ++e)
    nd.edges.push_back({edge_names_[e], vertex_names_[head(e)],
                        vertex_names_[tail(e)]});
  for (size_t t : sinks_) nd.sources.push_back(vertex_names_[t]);
  for (size_t s : sources_) nd.sinks.push_back(vertex_names_[s]);
  return build(nd, Mode::MultiSink);
}

Network Network::augment_with_pattern(const std::vector<size_t>& rho) const {
  NetworkDescription nd = description();
  std::string srho = "__sigma_rho";
  while (std::find(nd.vertices.begin(), nd.vertices.end(), srho) !=
         nd.vertices.end())
    srho += "_";
  nd.vertices.push_back(srho);
  size_t i = 0;
  for (size_t e : rho) {
    require(e < edge_count(), "pattern edge out of range");
    nd.edges.push_back({"__rho" + std::to_string(i++), srho,
                        vertex_names_[head(e)]});
  }
  Network out = build(nd, Mode::MultiSink);
  out.pattern_source_ = out.vertex_index(srho);
  out.degenerate_ = rho.empty();
  if (!rho.empty())
    ensure(out.reaches(out.pattern_source_, out.sinks_[0]),
           "sigma_rho cannot reach the sink");
  return out;
}

NetworkDescription Network::description() const {
  NetworkDescription nd;
  nd.vertices = vertex_names_;
  for (size_t e = 0; e < edge_count(); ++e)
    nd.edges.push_back(
        {edge_names_[e], vertex_names_[tail(e)], vertex_names_[head(e)]});
  for (size_t s : sources_) nd.sources.push_back(vertex_names_[s]);
  for (size_t t : sinks_) nd.sinks.push_back(vertex_names_[t]);
  return nd;
}

CutReport min_cut(const Network& net, const std::vector<size_t>& from,
                  size_t to) {
  require(!from.empty(), "min_cut: empty source set");
  for (size_t u : from)
    require(net.reaches(u, to), "min_cut: " + net.vertex_name(u) +
                                    " cannot reach " + net.vertex_name(to));
  const size_t n = net.vertex_count();
  const size_t super = n;
  FlowGraph fg(n + 1);
  for (size_t e = 0; e < net.edge_count(); ++e)
    fg.add_arc(net.tail(e), net.head(e), 1, (long long)e);
  const int big = int(net.edge_count()) + 1;
  for (size_t u : from) fg.add_arc(super, u, big, -1);

  int flow = fg.max_flow(super, to);
  auto reach = fg.residual_reachable(super);
  CutReport rep;
  for (size_t ai = 0; ai < fg.arcs.size(); ai += 2) {
    const auto& a = fg.arcs[ai];
    if (a.tag < 0) continue;
    size_t u = fg.arcs[a.rev].to;
    if (reach[u] && !reach[a.to]) rep.cut_edges.push_back(size_t(a.tag));
  }
  std::sort(rep.cut_edges.begin(), rep.cut_edges.end());
  rep.size = rep.cut_edges.size();
  ensure(rep.size == size_t(flow), "min cut size differs from max flow");

  // verify by deletion, and collect the separated sources of the network
  std::set<size_t> cut(rep.cut_edges.begin(), rep.cut_edges.end());
  auto reaches_without = [&](size_t u) {
    std::vector<char> seen(n, 0);
    std::queue<size_t> q;
    q.push(u);
    seen[u] = 1;
    while (!q.empty()) {
      size_t x = q.front();
      q.pop();
      if (x == to) return true;
      for (size_t e : net.out_edges(x)) {
        if (cut.count(e) || seen[net.head(e)]) continue;
        seen[net.head(e)] = 1;
        q.push(net.head(e));
      }
    }
    return false;
  };
  for (size_t u : from)
    ensure(!reaches_without(u), "returned cut does not separate");
  for (size_t s : net.sources())
    if (!reaches_without(s)) rep.separated.push_back(s);
  return rep;
}

CutQuantities cut_quantities(const Network& net, const Matrix& t, size_t k) {
  require(t.rows() == net.source_count(),
          "target matrix must have one row per source");
  const auto& srcs = net.sources();
  const size_t s = srcs.size();
  require(s < 63, "too many sources");
  size_t gamma = net.sink();

  bool have_rate = false, have_sing = false;
  Rational rate(0);
  long long sing = 0, delta = 0;
  bool have_delta = false;
  for (std::uint64_t mask = 1; mask < (1ull << s); ++mask) {
    std::vector<size_t> subset, rowidx;
    for (size_t i = 0; i < s; ++i)
      if (mask >> i & 1) {
        subset.push_back(srcs[i]);
        rowidx.push_back(i);
      }
    long long cut = (long long)min_cut(net, subset, gamma).size;
    long long rk = (long long)t.rows_at(rowidx).rank();
    if (rk > 0) {
      Rational r(cut, rk);
      if (!have_rate || r < rate) {
        rate = r;
        have_rate = true;
      }
    }
    long long sb = cut - (long long)k * rk + 1;
    if (!have_sing || sb < sing) {
      sing = sb;
      have_sing = true;
    }
    long long dl = cut - (long long)k * (long long)subset.size();
    if (!have_delta || dl < delta) {
      delta = dl;
      have_delta = true;
    }
  }
  ensure(have_rate && have_sing && have_delta, "no source subset considered");
  return {rate, sing, delta};
}

size_t pattern_rank_value(const Network& net, const std::vector<size_t>& rho) {
  if (rho.empty()) return 0;
  const size_t n = net.vertex_count();
  FlowGraph fg(n + 1);
  for (size_t e = 0; e < net.edge_count(); ++e)
    fg.add_arc(net.tail(e), net.head(e), 1, (long long)e);
  for (size_t e : rho) {
    require(e < net.edge_count(), "pattern edge out of range");
    fg.add_arc(n, net.head(e), 1, -1);
  }
  return size_t(fg.max_flow(n, net.sinks()[0]));
}

PathFamily disjoint_path_family(const Network& net,
                                const std::vector<size_t>& rho, size_t k,
                                size_t delta) {
  require(k >= 1, "disjoint_path_family: k must be positive");
  require(rho.size() == delta, "disjoint_path_family: |rho| must equal delta");
  for (size_t e : rho) require(e < net.edge_count(), "pattern edge out of range");

  const size_t n = net.vertex_count();
  const size_t s = net.source_count();
  size_t gamma = net.sink();

  /* Node layout: network vertices, then one midpoint per rho edge, then
   * sigma_rho, then the super source.  Each rho edge tail->head becomes
   * tail->mid->head so that the sigma_rho entry at mid must exit along the
   * original edge. */
  std::map<size_t, size_t> mid;  // rho edge -> node id
  size_t next = n;
  for (size_t e : rho) mid[e] = next++;
  const size_t sigma_rho = next++;
  const size_t super = next++;
  FlowGraph fg(next);

  // tags: real edge e -> e; first half of a split edge -> -2 - e; aux -> -1
  for (size_t e = 0; e < net.edge_count(); ++e) {
    auto it = mid.find(e);
    if (it == mid.end()) {
      fg.add_arc(net.tail(e), net.head(e), 1, (long long)e);
    } else {
      fg.add_arc(net.tail(e), it->second, 1, -2 - (long long)e);
      fg.add_arc(it->second, net.head(e), 1, (long long)e);
    }
  }
  for (size_t e : rho) fg.add_arc(sigma_rho, mid[e], 1, -1);
  for (size_t i = 0; i < delta; ++i) fg.add_arc(super, sigma_rho, 1, -1);
  for (size_t src : net.sources())
    for (size_t i = 0; i < k; ++i) fg.add_arc(super, src, 1, -1);

  int flow = fg.max_flow(super, gamma);
  require(size_t(flow) == s * k + delta,
          "flow value " + std::to_string(flow) + " below required " +
              std::to_string(s * k + delta) + " (pattern not in R(delta)?)");

  auto arc_paths = fg.decompose_unit_paths(super, gamma);
  ensure(arc_paths.size() == s * k + delta, "flow decomposition mismatch");

  // map vertex index -> source ordinal
  std::map<size_t, size_t> source_ordinal;
  for (size_t i = 0; i < s; ++i) source_ordinal[net.sources()[i]] = i;

  PathFamily fam;
  std::vector<Path> message_paths, error_paths;
  for (const auto& arcs : arc_paths) {
    Path p;
    bool via_sigma = false;
    for (size_t ai : arcs) {
      long long tag = fg.arcs[ai].tag;
      if (tag == -1) {
        if (fg.arcs[ai].to == sigma_rho) via_sigma = true;
        continue;  // super-source / sigma_rho arcs vanish
      }
      if (tag <= -2) continue;  // first half of a split edge; the second
                                // half carries the edge id
      p.edges.push_back(size_t(tag));
    }
    ensure(!p.edges.empty(), "empty path in decomposition");
    if (via_sigma) {
      p.origin = Path::Origin::Error;
      p.origin_edge = p.edges.front();
      error_paths.push_back(std::move(p));
    } else {
      p.origin = Path::Origin::Message;
      p.source = source_ordinal.at(net.tail(p.edges.front()));
      message_paths.push_back(std::move(p));
    }
  }
  ensure(error_paths.size() == delta, "wrong number of error paths");
  ensure(message_paths.size() == s * k, "wrong number of message paths");

  // deterministic order: message paths by (source, discovery), then errors
  std::stable_sort(message_paths.begin(), message_paths.end(),
                   [](const Path& a, const Path& b) { return a.source < b.source; });
  for (auto& p : message_paths) fam.paths.push_back(std::move(p));
  for (auto& p : error_paths) fam.paths.push_back(std::move(p));

  // invariants: pairwise edge-disjoint, consecutive, ending at the sink
  std::set<size_t> seen_edges;
  std::set<size_t> rho_starts;
  std::vector<size_t> per_source(s, 0);
  for (const auto& p : fam.paths) {
    for (size_t i = 0; i < p.edges.size(); ++i) {
      ensure(seen_edges.insert(p.edges[i]).second, "paths share an edge");
      if (i + 1 < p.edges.size())
        ensure(net.head(p.edges[i]) == net.tail(p.edges[i + 1]),
               "path is not connected");
    }
    ensure(net.head(p.edges.back()) == gamma, "path does not end at the sink");
    if (p.origin == Path::Origin::Error) {
      ensure(std::find(rho.begin(), rho.end(), p.origin_edge) != rho.end(),
             "error path does not start in rho");
      ensure(rho_starts.insert(p.origin_edge).second,
             "two error paths start at the same rho edge");
    } else {
      ensure(net.tail(p.edges.front()) == net.sources()[p.source],
             "message path does not start at its source");
      per_source[p.source]++;
    }
  }
  for (size_t i = 0; i < s; ++i)
    ensure(per_source[i] == k, "source is missing message paths");
  return fam;
}

}  // namespace nfc
