// SPDX-License-Identifier: Apache-2.0
#ifndef NFC_NETWORK_HPP
#define NFC_NETWORK_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "nfc/error.hpp"
#include "nfc/matrix.hpp"
#include "nfc/rational.hpp"

namespace nfc {

struct EdgeDef {
  std::string id;
  std::string tail;
  std::string head;
};

/* Raw, unvalidated form of a network; mirrors the network file.  Edge order
 * here is the canonical edge indexing every matrix in the library uses. */
struct NetworkDescription {
  std::vector<std::string> vertices;
  std::vector<EdgeDef> edges;
  std::vector<std::string> sources;
  std::vector<std::string> sinks;  // exactly one in canonical form
};

/* Directed acyclic multigraph with ordered source list and sink(s).
 *
 * The canonical form has a single sink gamma, every source without incoming
 * edges, every non-sink vertex with a path to gamma.  reverse() swaps the
 * roles of sources and sinks and yields the multi-sink view used by the
 * multicast step of the sum construction; such networks skip the
 * reach-the-sink check but keep the structural ones.  Immutable after
 * validation. */
class Network {
 public:
  static Network validate(const NetworkDescription& nd);

  size_t vertex_count() const { return vertex_names_.size(); }
  size_t edge_count() const { return edge_tail_.size(); }
  size_t source_count() const { return sources_.size(); }

  const std::string& vertex_name(size_t v) const { return vertex_names_[v]; }
  const std::string& edge_name(size_t e) const { return edge_names_[e]; }
  size_t vertex_index(const std::string& name) const;
  size_t edge_index(const std::string& name) const;

  size_t tail(size_t e) const { return edge_tail_[e]; }
  size_t head(size_t e) const { return edge_head_[e]; }

  const std::vector<size_t>& sources() const { return sources_; }
  const std::vector<size_t>& sinks() const { return sinks_; }
  size_t sink() const;  // requires exactly one sink

  // Edge indices, ascending (the canonical coordinate order).
  const std::vector<size_t>& in_edges(size_t v) const { return in_[v]; }
  const std::vector<size_t>& out_edges(size_t v) const { return out_[v]; }
  const std::vector<size_t>& in_gamma() const { return in_[sink()]; }

  const std::vector<size_t>& topo_vertices() const { return topo_; }
  size_t topo_index(size_t v) const { return topo_index_[v]; }
  // Edges ordered by topological position of the tail, ties by edge index.
  std::vector<size_t> edges_in_topo_order() const;

  bool reaches(size_t u, size_t v) const;

  Network reverse() const;
  // Adds sigma_rho with one edge into head(e) per e in rho.  rho = {} yields
  // an isolated sigma_rho; the result is flagged degenerate.
  Network augment_with_pattern(const std::vector<size_t>& rho) const;
  size_t pattern_source() const;  // vertex index of sigma_rho, if augmented
  bool degenerate() const { return degenerate_; }

  NetworkDescription description() const;

 private:
  Network() = default;
  enum class Mode { Strict, MultiSink };
  static Network build(const NetworkDescription& nd, Mode mode);

  std::vector<std::string> vertex_names_;
  std::vector<std::string> edge_names_;
  std::vector<size_t> edge_tail_, edge_head_;
  std::vector<size_t> sources_, sinks_;
  std::vector<std::vector<size_t>> in_, out_;
  std::vector<size_t> topo_, topo_index_;
  size_t pattern_source_ = size_t(-1);
  bool degenerate_ = false;
};

struct CutReport {
  std::vector<size_t> cut_edges;   // ascending edge indices
  std::vector<size_t> separated;   // I_C: source vertex indices cut off
  size_t size = 0;                 // |C| == max-flow value
};

/* Unit-capacity max flow between a vertex set and a vertex; returns one
 * minimal cut (source-side/sink-side partition of a maximum flow).  Every
 * call re-verifies that deleting the cut disconnects `from` from `to`. */
CutReport min_cut(const Network& net, const std::vector<size_t>& from,
                  size_t to);

struct CutQuantities {
  Rational cutset_rate_bound;  // min over I of mincut(I)/Rank(T_I)
  long long singleton_bound;   // min over I of mincut(I) - k*Rank(T_I) + 1
  long long delta;             // min over I of mincut(I) - k*|I|
};

/* The cut-derived quantities, minimized over nonempty source subsets I.
 * For any cut C, |C| >= mincut(I_C, gamma) and the minimal cut for I
 * separates at least I, so the subset form equals the minimization over all
 * cuts of the network. */
CutQuantities cut_quantities(const Network& net, const Matrix& t, size_t k);

struct Path {
  enum class Origin { Message, Error };
  Origin origin;
  size_t source = size_t(-1);      // source ordinal for Message paths
  size_t origin_edge = size_t(-1); // first edge for Error paths (in rho)
  std::vector<size_t> edges;       // edge indices along the path
};

struct PathFamily {
  std::vector<Path> paths;  // s*k message paths then delta error paths
};

/* Rank(rho) as a bare number: a max flow from a virtual pattern source,
 * skipping the augmented-network construction.  Agrees with pattern_rank()
 * from the distance module. */
size_t pattern_rank_value(const Network& net, const std::vector<size_t>& rho);

/* s*k + delta edge-disjoint paths: k from each source, and one starting at
 * each edge of rho.  Found with a max flow in the augmented network that has
 * a super source with k arcs to each source and delta arcs to sigma_rho;
 * each rho edge is subdivided so a path entering through sigma_rho is forced
 * to continue along that very edge, which keeps the prepended paths
 * edge-disjoint from everything else.  Throws when the flow value falls
 * short of s*k + delta (the caller's rho was not in R(delta)). */
PathFamily disjoint_path_family(const Network& net,
                                const std::vector<size_t>& rho, size_t k,
                                size_t delta);

}  // namespace nfc

#endif
