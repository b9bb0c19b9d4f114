#pragma once

#include <algorithm>
#include <climits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fcomp/bounds.hpp"
#include "fcomp/code.hpp"
#include "fcomp/equivalence.hpp"
#include "fcomp/function.hpp"
#include "fcomp/network.hpp"

namespace fcomp {

/// A multi-edge tree: contracting parallel edges leaves a directed in-tree
/// rooted at the sink. Equivalently, every non-sink node sends all of its
/// out-edges to one single child node.
inline bool is_multi_edge_tree(const Network& net) {
  if (!validate(net).ok()) return false;
  for (int v = 0; v < static_cast<int>(net.nodes.size()); ++v) {
    if (v == net.sink) continue;
    int child = -1;
    for (const Edge& e : net.edges)
      if (e.tail == v) {
        if (child >= 0 && child != e.head) return false;
        child = e.head;
      }
  }
  return true;
}

/// Per-node data of the class-index code construction: ancestor sources
/// P(u), the partition gamma_u of A^|P(u)| under the context-free
/// equivalence, its class count R_{P(u),f}, and the feasibility
/// certificate R_{P(u),f}^k <= |B|^{n |E_o(u)|} for every non-sink node.
struct TreePlan {
  int n = 1, k = 1;
  bool feasible = false;
  int failing_node = -1;
  std::string failure;
  std::vector<std::vector<int>> ancestor_sources;  // P(u), sorted source numbers
  std::vector<long long> class_count;              // R_{P(u),f}; 1 when P(u) empty
  std::vector<EquivalencePartition> gamma;         // unset when P(u) empty
  std::vector<std::optional<RateCertificate>> certificates;  // non-sink nodes only
};

inline TreePlan plan(const Network& net, const TargetFunction& f, int n, int k) {
  if (!is_multi_edge_tree(net))
    throw std::invalid_argument("tree: the network is not a multi-edge tree");
  if (net.source_count() != f.arity)
    throw std::invalid_argument("tree: function arity != source count");
  CodeShape sh = code_shape(net, f, n, k);

  TreePlan p;
  p.n = n;
  p.k = k;
  int nodes = static_cast<int>(net.nodes.size());
  p.ancestor_sources.resize(nodes);
  p.class_count.assign(nodes, 1);
  p.gamma.resize(nodes);
  p.certificates.resize(nodes);
  p.feasible = true;

  for (int u = 0; u < nodes; ++u) {
    for (int i = 0; i < net.source_count(); ++i)
      if (sh.topo.reach[net.sources[i]][u]) p.ancestor_sources[u].push_back(i);
    if (!p.ancestor_sources[u].empty()) {
      p.gamma[u] = partition(f, p.ancestor_sources[u], {}, {});
      p.class_count[u] = p.gamma[u].class_count;
    }
    if (u == net.sink) continue;
    bool bundle_out = false;
    for (int e : sh.topo.out_edges[u]) bundle_out |= net.edges[e].infinite_bundle;
    int out_degree = static_cast<int>(sh.topo.out_edges[u].size());
    RateCertificate cert;
    if (bundle_out) {
      // An infinite bundle forwards the whole source column; this node's
      // pipe never binds.
      cert = RateCertificate{p.class_count[u], k, n, net.edge_alphabet, out_degree, true};
    } else {
      cert = rate_certificate(p.class_count[u], k, n, net.edge_alphabet, out_degree);
    }
    p.certificates[u] = cert;
    if (!cert.satisfied && p.feasible) {
      p.feasible = false;
      p.failing_node = u;
      p.failure = "node '" + net.nodes[u] + "': " + std::to_string(p.class_count[u]) +
                  "^" + std::to_string(k) + " > " + std::to_string(net.edge_alphabet) +
                  "^(" + std::to_string(n) + "*" + std::to_string(out_degree) + ")";
    }
  }
  if (static_cast<int>(p.ancestor_sources[net.sink].size()) != net.source_count())
    throw std::logic_error("tree: the sink does not see every source");
  return p;
}

namespace detail {

inline long long pow_saturated(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > LLONG_MAX / base) return LLONG_MAX;
    r *= base;
  }
  return r;
}

/// Reads a predecessor's transmitted class vector out of the in-edge
/// values of `node`. A bundle edge carries the raw source column, which is
/// classified row by row; otherwise the B-blocks on the predecessor's
/// out-edges spell the mixed-radix rank of the class vector. Ranks outside
/// [0, R^k) only arise from unreachable blocks and fall back to all-zero.
inline std::vector<int> read_class_vector(const Network& net, const CodeShape& sh,
                                          const TreePlan& plan, int q, int node, int pred,
                                          std::span<const long long> in_values) {
  const auto& ins = sh.topo.in_edges[node];
  std::vector<int> classes(sh.k, 0);
  bool bundle = false;
  long long column_rank = 0;
  std::vector<int> digits;
  for (std::size_t i = 0; i < ins.size(); ++i) {
    const Edge& e = net.edges[ins[i]];
    if (e.tail != pred) continue;
    if (e.infinite_bundle) {
      bundle = true;
      column_rank = in_values[i];
    } else {
      std::vector<int> part(sh.n);
      unpack_digits(in_values[i], net.edge_alphabet, part);
      digits.insert(digits.end(), part.begin(), part.end());
    }
  }
  if (bundle) {
    std::vector<int> column(sh.k);
    unpack_digits(column_rank, q, column);
    for (int r = 0; r < sh.k; ++r) classes[r] = plan.gamma[pred].class_of[column[r]];
    return classes;
  }
  long long rank = pack_digits(digits, net.edge_alphabet);
  if (rank >= pow_saturated(plan.class_count[pred], sh.k)) return classes;
  unpack_digits(rank, plan.class_count[pred], classes);
  return classes;
}

/// Distinct in-neighbors of a node, ascending by first in-edge.
inline std::vector<int> predecessors(const Network& net, const CodeShape& sh, int node) {
  std::vector<int> preds;
  for (int e : sh.topo.in_edges[node]) {
    int t = net.edges[e].tail;
    if (std::find(preds.begin(), preds.end(), t) == preds.end()) preds.push_back(t);
  }
  return preds;
}

/// Assembles the representative matrix s: row r concatenates, for each
/// predecessor, the canonical representative of that predecessor's class,
/// placed at the positions its sources occupy inside P(node).
inline std::vector<std::vector<int>> representative_matrix(
    const Network& net, const CodeShape& sh, const TreePlan& plan, int q, int node,
    std::span<const long long> in_values) {
  const std::vector<int>& p_node = plan.ancestor_sources[node];
  std::vector<std::vector<int>> s(sh.k, std::vector<int>(p_node.size(), 0));
  for (int pred : predecessors(net, sh, node)) {
    const std::vector<int>& p_pred = plan.ancestor_sources[pred];
    if (p_pred.empty()) continue;
    std::vector<int> classes = read_class_vector(net, sh, plan, q, node, pred, in_values);
    std::vector<std::size_t> place(p_pred.size());
    for (std::size_t t = 0; t < p_pred.size(); ++t)
      place[t] = std::lower_bound(p_node.begin(), p_node.end(), p_pred[t]) - p_node.begin();
    for (int r = 0; r < sh.k; ++r) {
      const std::vector<int>& rep = plan.gamma[pred].representatives[classes[r]];
      for (std::size_t t = 0; t < p_pred.size(); ++t) s[r][place[t]] = rep[t];
    }
  }
  return s;
}

}  // namespace detail

/// Emits the class-index code of the achievability construction: every
/// node transmits the class indices of its ancestor-source block, packed
/// into its out-bundle, and downstream nodes resynthesize equivalent
/// inputs through canonical representatives. The result computes f with
/// zero error whenever plan() reports feasible.
inline NetworkCode construct(const Network& net, const TargetFunction& f, int n, int k) {
  TreePlan p = plan(net, f, n, k);
  if (!p.feasible)
    throw std::invalid_argument("tree construction infeasible: " + p.failure);
  CodeShape sh = code_shape(net, f, n, k);

  NetworkCode code;
  code.n = n;
  code.k = k;
  code.encoders.resize(net.edges.size());
  for (std::size_t e = 0; e < net.edges.size(); ++e)
    if (!net.edges[e].infinite_bundle) code.encoders[e].assign(sh.enc_domain[e], 0);

  // Packs a class vector into the blocks of u's out-edges; out-edges keep
  // all-zero tables when a bundle already carries the column.
  auto slices = [&](int u, const std::vector<int>& classes) {
    const auto& outs = sh.topo.out_edges[u];
    std::vector<int> digits(static_cast<std::size_t>(n) * outs.size(), 0);
    unpack_digits(pack_digits(classes, p.class_count[u]), net.edge_alphabet, digits);
    std::vector<int> blocks(outs.size(), 0);
    for (std::size_t t = 0; t < outs.size(); ++t)
      blocks[t] = static_cast<int>(pack_digits(
          std::span<const int>(digits).subspan(t * n, n), net.edge_alphabet));
    return blocks;
  };

  for (int u = 0; u < static_cast<int>(net.nodes.size()); ++u) {
    if (u == net.sink) continue;
    const auto& outs = sh.topo.out_edges[u];
    bool bundle_out = false;
    for (int e : outs) bundle_out |= net.edges[e].infinite_bundle;
    if (bundle_out) continue;  // the bundle forwards the column; others stay 0

    int src = net.source_number(u);
    if (src >= 0) {
      for (long long dom = 0; dom < sh.column_space; ++dom) {
        std::vector<int> column(k);
        unpack_digits(dom, f.input_size, column);
        std::vector<int> classes(k);
        for (int r = 0; r < k; ++r) classes[r] = p.gamma[u].class_of[column[r]];
        std::vector<int> blocks = slices(u, classes);
        for (std::size_t t = 0; t < outs.size(); ++t)
          code.encoders[outs[t]][dom] = blocks[t];
      }
    } else {
      for (long long dom = 0; dom < sh.node_in_space[u]; ++dom) {
        std::vector<long long> vals = detail::unpack_in_rank(sh, u, dom);
        std::vector<std::vector<int>> s =
            detail::representative_matrix(net, sh, p, f.input_size, u, vals);
        std::vector<int> classes(k, 0);
        if (!p.ancestor_sources[u].empty())
          for (int r = 0; r < k; ++r)
            classes[r] = p.gamma[u].class_of[pack_digits(s[r], f.input_size)];
        std::vector<int> blocks = slices(u, classes);
        for (std::size_t t = 0; t < outs.size(); ++t)
          code.encoders[outs[t]][dom] = blocks[t];
      }
    }
  }

  // Sink: resynthesize a representative input block and evaluate f on it.
  code.decoder.assign(sh.node_in_space[net.sink], 0);
  for (long long dom = 0; dom < sh.node_in_space[net.sink]; ++dom) {
    std::vector<long long> vals = detail::unpack_in_rank(sh, net.sink, dom);
    std::vector<std::vector<int>> s =
        detail::representative_matrix(net, sh, p, f.input_size, net.sink, vals);
    std::vector<int> out(k);
    for (int r = 0; r < k; ++r) out[r] = f.table[pack_digits(s[r], f.input_size)];
    code.decoder[dom] = static_cast<int>(pack_digits(out, f.output_size));
  }
  return code;
}

/// Debug-mode check of the construction's inductive claim: on every input,
/// every node's transmitted class vector equals gamma_u^k of the true
/// ancestor-source block x_{P(u)}.
inline bool check_representative_property(const Network& net, const TargetFunction& f,
                                          const NetworkCode& code, const TreePlan& p,
                                          const VerifyOptions& opts = {}) {
  CodeShape sh = code_shape(net, f, code.n, code.k);
  if (sh.input_space > opts.max_inputs)
    throw BudgetError("check_representative_property: input space exceeds the budget");
  std::vector<int> edge_values(net.edges.size());
  for (long long r = 0; r < sh.input_space; ++r) {
    InputMatrix x = InputMatrix::from_rank(r, code.k, f.arity, f.input_size);
    std::vector<long long> cols = detail::column_ranks_of(x, f.input_size);
    detail::run_encoders(code, net, sh, cols, edge_values);
    for (int u = 0; u < static_cast<int>(net.nodes.size()); ++u) {
      if (p.ancestor_sources[u].empty()) continue;
      int child = u == net.sink ? -1 : net.edges[sh.topo.out_edges[u].front()].head;
      if (child < 0) continue;
      std::vector<long long> vals(sh.topo.in_edges[child].size());
      for (std::size_t i = 0; i < vals.size(); ++i)
        vals[i] = edge_values[sh.topo.in_edges[child][i]];
      std::vector<int> sent =
          detail::read_class_vector(net, sh, p, f.input_size, child, u, vals);
      for (int row = 0; row < code.k; ++row) {
        std::vector<int> truth(p.ancestor_sources[u].size());
        for (std::size_t t = 0; t < truth.size(); ++t)
          truth[t] = x.at(row, p.ancestor_sources[u][t]);
        if (sent[row] != p.gamma[u].class_of[pack_digits(truth, f.input_size)])
          return false;
      }
    }
  }
  return true;
}

/// Capacity report for a multi-edge tree: the cut-set bound (met with
/// equality by this construction) plus, for a user-supplied (n,k), the
/// per-node certificates and a constructed, verified code when they hold.
struct TreeReport {
  BoundReport bound;
  std::optional<std::pair<int, int>> nk;
  bool feasible = false;
  std::vector<std::optional<RateCertificate>> node_certificates;
  std::string failure;
  std::optional<NetworkCode> code;
  bool verified = false;
};

inline TreeReport tree_capacity_report(const Network& net, const TargetFunction& f,
                                       std::optional<std::pair<int, int>> nk = {},
                                       const BoundOptions& opts = {}) {
  if (!is_multi_edge_tree(net))
    throw std::invalid_argument("tree: the network is not a multi-edge tree");
  TreeReport rep;
  rep.bound = min_cut_bound(net, f, opts);
  rep.nk = nk;
  if (nk) {
    TreePlan p = plan(net, f, nk->first, nk->second);
    rep.feasible = p.feasible;
    rep.node_certificates = p.certificates;
    rep.failure = p.failure;
    if (p.feasible) {
      rep.code = construct(net, f, nk->first, nk->second);
      rep.verified = verify(*rep.code, net, f).ok;
    }
  }
  return rep;
}

}  // namespace fcomp
