#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcomp/util.hpp"

namespace fcomp {

/// One directed edge. An edge flagged infinite_bundle stands for an
/// unbounded stack of parallel edges between the same pair of nodes;
/// deleting it deletes the whole bundle, and enumerated cut sets never
/// contain it (a cut through it would have infinite size).
struct Edge {
  std::string id;
  int tail = -1;
  int head = -1;
  bool infinite_bundle = false;
};

/// A directed acyclic network N = (G, S, rho) over node indices
/// 0..nodes.size()-1. `sources[i]` is the node acting as source i (0-based
/// here; reports print 1-based). Immutable once built; all operations are
/// pure functions of their inputs.
struct Network {
  std::string name = "network";
  std::vector<std::string> nodes;  // declaration order; index is the node id
  std::vector<Edge> edges;         // declaration order
  std::vector<int> sources;
  int sink = -1;
  int edge_alphabet = 2;  // |B|

  int node_index(const std::string& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i] == id) return static_cast<int>(i);
    return -1;
  }

  int edge_index(const std::string& id) const {
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i].id == id) return static_cast<int>(i);
    return -1;
  }

  int source_count() const { return static_cast<int>(sources.size()); }

  /// 0-based source number of a node, or -1 when the node is not a source.
  int source_number(int node) const {
    for (int i = 0; i < source_count(); ++i)
      if (sources[i] == node) return i;
    return -1;
  }

  bool operator==(const Network& o) const {
    if (nodes != o.nodes || sources != o.sources || sink != o.sink ||
        edge_alphabet != o.edge_alphabet || edges.size() != o.edges.size())
      return false;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const Edge &a = edges[i], &b = o.edges[i];
      if (a.id != b.id || a.tail != b.tail || a.head != b.head ||
          a.infinite_bundle != b.infinite_bundle)
        return false;
    }
    return true;
  }
};

/// Incremental construction helper; nodes are registered on first mention.
class NetworkBuilder {
 public:
  explicit NetworkBuilder(std::string name = "network") { net_.name = std::move(name); }

  NetworkBuilder& edge_alphabet(int b) {
    net_.edge_alphabet = b;
    return *this;
  }
  NetworkBuilder& node(const std::string& id) {
    intern(id);
    return *this;
  }
  NetworkBuilder& source(const std::string& id) {
    net_.sources.push_back(intern(id));
    return *this;
  }
  NetworkBuilder& sink(const std::string& id) {
    net_.sink = intern(id);
    return *this;
  }
  NetworkBuilder& edge(const std::string& id, const std::string& tail,
                       const std::string& head, bool infinite_bundle = false) {
    Edge e;
    e.id = id;
    e.tail = intern(tail);
    e.head = intern(head);
    e.infinite_bundle = infinite_bundle;
    net_.edges.push_back(e);
    return *this;
  }

  Network build() const { return net_; }

 private:
  int intern(const std::string& id) {
    int idx = net_.node_index(id);
    if (idx >= 0) return idx;
    net_.nodes.push_back(id);
    return static_cast<int>(net_.nodes.size()) - 1;
  }

  Network net_;
};

struct ValidationReport {
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

namespace detail {

/// Topological order of node indices (Kahn), ties broken by declaration
/// order. Empty optional when the edge relation has a cycle.
inline std::optional<std::vector<int>> topo_nodes(const Network& net) {
  int n = static_cast<int>(net.nodes.size());
  std::vector<int> indeg(n, 0);
  for (const Edge& e : net.edges) ++indeg[e.head];
  std::vector<int> order;
  order.reserve(n);
  std::vector<bool> emitted(n, false);
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v)
      if (!emitted[v] && indeg[v] == 0) {
        pick = v;
        break;
      }
    if (pick < 0) return std::nullopt;
    emitted[pick] = true;
    order.push_back(pick);
    for (const Edge& e : net.edges)
      if (e.tail == pick) --indeg[e.head];
  }
  return order;
}

}  // namespace detail

/// Derived views of a network: topological positions, the canonical edge
/// order, per-node edge lists and the reflexive reachability closure.
/// Cheap to compute; operations that loop build it once and share it.
struct Topology {
  std::vector<int> node_pos;    // node -> topological position
  std::vector<int> edge_order;  // edge indices, canonically ordered
  std::vector<int> edge_pos;    // edge -> position in edge_order
  std::vector<std::vector<int>> in_edges;   // per node, canonically ordered
  std::vector<std::vector<int>> out_edges;  // per node, canonically ordered
  std::vector<std::vector<char>> reach;     // reach[u][v]: u -> v (reflexive)
};

/// Throws std::invalid_argument on a cyclic edge relation; every other
/// validity question is left to validate().
inline Topology analyze(const Network& net) {
  auto order = detail::topo_nodes(net);
  if (!order) throw std::invalid_argument("network '" + net.name + "' has a cycle");
  int n = static_cast<int>(net.nodes.size());
  int m = static_cast<int>(net.edges.size());
  Topology t;
  t.node_pos.resize(n);
  for (int i = 0; i < n; ++i) t.node_pos[(*order)[i]] = i;

  t.edge_order.resize(m);
  for (int i = 0; i < m; ++i) t.edge_order[i] = i;
  std::stable_sort(t.edge_order.begin(), t.edge_order.end(), [&](int a, int b) {
    const Edge &ea = net.edges[a], &eb = net.edges[b];
    if (t.node_pos[ea.tail] != t.node_pos[eb.tail])
      return t.node_pos[ea.tail] < t.node_pos[eb.tail];
    if (t.node_pos[ea.head] != t.node_pos[eb.head])
      return t.node_pos[ea.head] < t.node_pos[eb.head];
    return a < b;  // declaration index breaks parallel-edge ties
  });
  t.edge_pos.resize(m);
  for (int i = 0; i < m; ++i) t.edge_pos[t.edge_order[i]] = i;

  t.in_edges.resize(n);
  t.out_edges.resize(n);
  for (int i : t.edge_order) {
    t.out_edges[net.edges[i].tail].push_back(i);
    t.in_edges[net.edges[i].head].push_back(i);
  }

  t.reach.assign(n, std::vector<char>(n, 0));
  for (int i = n; i-- > 0;) {
    int u = (*order)[i];
    t.reach[u][u] = 1;
    for (int e : t.out_edges[u]) {
      int w = net.edges[e].head;
      for (int v = 0; v < n; ++v) t.reach[u][v] |= t.reach[w][v];
    }
  }
  return t;
}

/// Canonical total order over edge ids: ascending (topological position of
/// tail, topological position of head, declaration index). Edge symbols are
/// concatenated in this order everywhere downstream.
inline std::vector<int> edge_order(const Network& net) { return analyze(net).edge_order; }

/// Reflexive reachability: true iff u = v or a directed path u -> v exists.
inline bool reachable(const Network& net, int u, int v) {
  int n = static_cast<int>(net.nodes.size());
  if (u < 0 || u >= n || v < 0 || v >= n)
    throw std::invalid_argument("reachable: unknown node");
  if (u == v) return true;
  std::vector<char> seen(n, 0);
  std::deque<int> queue{u};
  seen[u] = 1;
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    if (cur == v) return true;
    for (const Edge& e : net.edges)
      if (e.tail == cur && !seen[e.head]) {
        seen[e.head] = 1;
        queue.push_back(e.head);
      }
  }
  return false;
}

/// Checks every structural invariant and reports each violation.
inline ValidationReport validate(const Network& net) {
  ValidationReport rep;
  auto bad = [&rep](const std::string& msg) { rep.errors.push_back(msg); };

  if (net.sources.empty()) bad("no source nodes declared");
  if (net.sink < 0 || net.sink >= static_cast<int>(net.nodes.size()))
    bad("no sink node declared");
  if (net.edge_alphabet < 2) bad("edge alphabet must have at least 2 symbols");
  for (int s : net.sources)
    if (s == net.sink) bad("node '" + net.nodes[s] + "' is both a source and the sink");
  std::set<int> dedup(net.sources.begin(), net.sources.end());
  if (dedup.size() != net.sources.size()) bad("duplicate source declaration");
  for (const Edge& e : net.edges)
    if (e.tail == e.head) bad("edge '" + e.id + "' is a self-loop");
  std::set<std::string> edge_ids;
  for (const Edge& e : net.edges)
    if (!edge_ids.insert(e.id).second) bad("duplicate edge id '" + e.id + "'");

  if (!detail::topo_nodes(net)) {
    bad("the edge relation has a cycle");
    return rep;  // the remaining checks assume acyclicity
  }
  if (!rep.ok()) return rep;

  for (int s : net.sources)
    for (const Edge& e : net.edges)
      if (e.head == s) bad("source '" + net.nodes[s] + "' has incoming edge '" + e.id + "'");
  for (const Edge& e : net.edges)
    if (e.tail == net.sink) bad("sink has outgoing edge '" + e.id + "'");
  for (int v = 0; v < static_cast<int>(net.nodes.size()); ++v)
    if (!reachable(net, v, net.sink))
      bad("node '" + net.nodes[v] + "' has no path to the sink");
  return rep;
}

/// A cut set C with its source classification: separated_sources = I_C,
/// reaching_sources = K_C, side_sources = J_C = K_C \ I_C. Source numbers
/// are 0-based.
struct CutAnalysis {
  std::vector<int> cut;  // edge indices, canonically ordered
  std::vector<int> separated_sources;
  std::vector<int> reaching_sources;
  std::vector<int> side_sources;

  bool is_cut_set() const { return !separated_sources.empty(); }
};

namespace detail {

/// Nodes that still reach the sink once the edges in `removed` are deleted.
inline std::vector<char> reaches_sink_without(const Network& net,
                                              const std::vector<char>& removed) {
  int n = static_cast<int>(net.nodes.size());
  std::vector<char> ok(n, 0);
  if (net.sink < 0) return ok;
  ok[net.sink] = 1;
  std::deque<int> queue{net.sink};
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < net.edges.size(); ++i) {
      const Edge& e = net.edges[i];
      if (removed[i] || e.head != cur || ok[e.tail]) continue;
      ok[e.tail] = 1;
      queue.push_back(e.tail);
    }
  }
  return ok;
}

inline CutAnalysis cut_analysis_impl(const Network& net, const Topology& topo,
                                     const std::vector<char>& in_cut) {
  CutAnalysis out;
  for (int e : topo.edge_order)
    if (in_cut[e]) out.cut.push_back(e);
  std::vector<char> alive = reaches_sink_without(net, in_cut);
  for (int i = 0; i < net.source_count(); ++i)
    if (!alive[net.sources[i]]) out.separated_sources.push_back(i);
  for (int i = 0; i < net.source_count(); ++i) {
    for (int e = 0; e < static_cast<int>(net.edges.size()); ++e)
      if (in_cut[e] && topo.reach[net.sources[i]][net.edges[e].tail]) {
        out.reaching_sources.push_back(i);
        break;
      }
  }
  std::set_difference(out.reaching_sources.begin(), out.reaching_sources.end(),
                      out.separated_sources.begin(), out.separated_sources.end(),
                      std::back_inserter(out.side_sources));
  return out;
}

inline std::vector<char> cut_mask(const Network& net, std::span<const int> cut_edges) {
  std::vector<char> mask(net.edges.size(), 0);
  for (int e : cut_edges) {
    if (e < 0 || e >= static_cast<int>(net.edges.size()))
      throw std::invalid_argument("cut: unknown edge index " + std::to_string(e));
    mask[e] = 1;
  }
  return mask;
}

}  // namespace detail

/// Classifies an edge set: I_C = sources with no C-avoiding path to the
/// sink, K_C = sources reaching the tail of some cut edge, J_C = K_C \ I_C.
inline CutAnalysis cut_analysis(const Network& net, std::span<const int> cut_edges) {
  return detail::cut_analysis_impl(net, analyze(net), detail::cut_mask(net, cut_edges));
}

/// True iff I_C = S, i.e. the cut separates every source.
inline bool is_global_cut_set(const Network& net, std::span<const int> cut_edges) {
  return static_cast<int>(cut_analysis(net, cut_edges).separated_sources.size()) ==
         net.source_count();
}

/// F(C) = C together with every out-edge of each source outside I_C.
/// The result is always a global cut set.
inline std::vector<int> f_extension(const Network& net, std::span<const int> cut_edges) {
  Topology topo = analyze(net);
  auto mask = detail::cut_mask(net, cut_edges);
  CutAnalysis base = detail::cut_analysis_impl(net, topo, mask);
  if (!base.is_cut_set())
    throw std::invalid_argument("f_extension: the given edge set is not a cut set");
  std::vector<char> separated(net.source_count(), 0);
  for (int i : base.separated_sources) separated[i] = 1;
  for (int i = 0; i < net.source_count(); ++i)
    if (!separated[i])
      for (int e : topo.out_edges[net.sources[i]]) mask[e] = 1;
  std::vector<int> out;
  for (int e : topo.edge_order)
    if (mask[e]) out.push_back(e);
  return out;
}

/// E(U) = edges leaving the node set U. U must contain a source and must
/// not contain the sink.
inline std::vector<int> node_cut_edges(const Network& net, std::span<const int> node_set) {
  std::vector<char> in_u(net.nodes.size(), 0);
  for (int v : node_set) {
    if (v < 0 || v >= static_cast<int>(net.nodes.size()))
      throw std::invalid_argument("node cut: unknown node index " + std::to_string(v));
    in_u[v] = 1;
  }
  if (net.sink >= 0 && in_u[net.sink])
    throw std::invalid_argument("node cut: the set contains the sink");
  bool has_source = false;
  for (int s : net.sources) has_source |= static_cast<bool>(in_u[s]);
  if (!has_source) throw std::invalid_argument("node cut: the set contains no source");
  Topology topo = analyze(net);
  std::vector<int> out;
  for (int e : topo.edge_order)
    if (in_u[net.edges[e].tail] && !in_u[net.edges[e].head]) out.push_back(e);
  return out;
}

/// Maximum number of pairwise edge-disjoint u->v paths under unit edge
/// capacities. Infinite-bundle edges have unbounded multiplicity, so the
/// count is unbounded exactly when v is reachable from u through bundle
/// edges alone.
struct PathCount {
  bool unbounded = false;
  int count = 0;

  bool operator==(const PathCount& o) const {
    return unbounded == o.unbounded && (unbounded || count == o.count);
  }
};

namespace detail {

/// Edmonds-Karp on the multigraph; bundle edges get capacity `bundle_cap`.
/// Returns per-edge flow (forward direction only; the graph is a DAG and
/// residual arcs are handled internally).
inline int max_flow(const Network& net, int s, int t, int bundle_cap,
                    std::vector<int>* flow_out = nullptr) {
  int m = static_cast<int>(net.edges.size());
  std::vector<int> cap(m), flow(m, 0);
  for (int i = 0; i < m; ++i) cap[i] = net.edges[i].infinite_bundle ? bundle_cap : 1;
  int total = 0;
  for (;;) {
    // BFS over residual arcs: forward when flow < cap, backward when flow > 0.
    std::vector<int> via_edge(net.nodes.size(), -1), via_dir(net.nodes.size(), 0);
    std::vector<char> seen(net.nodes.size(), 0);
    std::deque<int> queue{s};
    seen[s] = 1;
    while (!queue.empty() && !seen[t]) {
      int cur = queue.front();
      queue.pop_front();
      for (int i = 0; i < m; ++i) {
        const Edge& e = net.edges[i];
        if (e.tail == cur && flow[i] < cap[i] && !seen[e.head]) {
          seen[e.head] = 1;
          via_edge[e.head] = i;
          via_dir[e.head] = +1;
          queue.push_back(e.head);
        } else if (e.head == cur && flow[i] > 0 && !seen[e.tail]) {
          seen[e.tail] = 1;
          via_edge[e.tail] = i;
          via_dir[e.tail] = -1;
          queue.push_back(e.tail);
        }
      }
    }
    if (!seen[t]) break;
    for (int v = t; v != s;) {
      int e = via_edge[v];
      flow[e] += via_dir[v];
      v = via_dir[v] > 0 ? net.edges[e].tail : net.edges[e].head;
    }
    ++total;
  }
  if (flow_out) *flow_out = flow;
  return total;
}

}  // namespace detail

inline PathCount edge_disjoint_path_count(const Network& net, int u, int v) {
  int n = static_cast<int>(net.nodes.size());
  if (u < 0 || u >= n || v < 0 || v >= n)
    throw std::invalid_argument("edge_disjoint_path_count: unknown node");
  if (u == v) throw std::invalid_argument("edge_disjoint_path_count: u equals v");
  // Unbounded iff v is reachable from u using only bundle edges: every cut
  // between them then crosses a bundle.
  std::vector<char> seen(n, 0);
  std::deque<int> queue{u};
  seen[u] = 1;
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    for (const Edge& e : net.edges)
      if (e.infinite_bundle && e.tail == cur && !seen[e.head]) {
        seen[e.head] = 1;
        queue.push_back(e.head);
      }
  }
  if (seen[v]) return {true, 0};
  int finite_edges = 0;
  for (const Edge& e : net.edges) finite_edges += !e.infinite_bundle;
  return {false, detail::max_flow(net, u, v, finite_edges + 1)};
}

/// Rewrites every source that has incoming edges: the node keeps its place
/// as an interior node under a primed name, and a fresh source with the
/// original name feeds it through one infinite-bundle edge. Conforming
/// networks come back unchanged. Source order is preserved.
inline Network split_sources(const Network& net) {
  std::vector<int> offenders;
  for (int i = 0; i < net.source_count(); ++i) {
    int s = net.sources[i];
    for (const Edge& e : net.edges)
      if (e.head == s) {
        offenders.push_back(i);
        break;
      }
  }
  if (offenders.empty()) return net;

  Network out = net;
  std::set<std::string> edge_ids;
  for (const Edge& e : out.edges) edge_ids.insert(e.id);
  for (int i : offenders) {
    int old_node = out.sources[i];
    std::string original = out.nodes[old_node];
    std::string interior = original + "'";
    while (out.node_index(interior) >= 0) interior += "'";
    out.nodes[old_node] = interior;
    out.nodes.push_back(original);
    int fresh = static_cast<int>(out.nodes.size()) - 1;
    out.sources[i] = fresh;
    std::string eid = "b" + std::to_string(i + 1);
    while (edge_ids.count(eid)) eid += "'";
    edge_ids.insert(eid);
    Edge feed;
    feed.id = eid;
    feed.tail = fresh;
    feed.head = old_node;
    feed.infinite_bundle = true;
    out.edges.push_back(feed);
  }
  return out;
}

/// Convenience lookup helpers for tests and the CLI.
inline std::vector<int> edge_indices(const Network& net, std::span<const std::string> ids) {
  std::vector<int> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    int e = net.edge_index(id);
    if (e < 0) throw std::invalid_argument("unknown edge id '" + id + "'");
    out.push_back(e);
  }
  return out;
}

inline std::vector<int> node_indices(const Network& net, std::span<const std::string> ids) {
  std::vector<int> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    int v = net.node_index(id);
    if (v < 0) throw std::invalid_argument("unknown node id '" + id + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace fcomp
