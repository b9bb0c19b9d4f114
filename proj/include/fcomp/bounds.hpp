#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fcomp/bigint.hpp"
#include "fcomp/equivalence.hpp"
#include "fcomp/function.hpp"
#include "fcomp/network.hpp"
#include "fcomp/util.hpp"

namespace fcomp {

/// The value |C| / log_q(classes), kept exact. Infinite when classes <= 1
/// (such a cut does not constrain the rate at all).
struct ExactRatio {
  int cut_size = 0;
  long long classes = 1;

  bool finite() const { return classes >= 2; }

  double approx(int base) const {
    if (!finite()) return std::numeric_limits<double>::infinity();
    return cut_size * std::log(static_cast<double>(base)) /
           std::log(static_cast<double>(classes));
  }
};

/// Exact three-way comparison: a < b iff b.classes^{a.cut_size} <
/// a.classes^{b.cut_size}, evaluated in unbounded integers so ties are
/// decided correctly. The alphabet base cancels out of the comparison.
inline int compare_ratio(const ExactRatio& a, const ExactRatio& b) {
  bool fa = a.finite(), fb = b.finite();
  if (!fa && !fb) return 0;
  if (!fa) return 1;
  if (!fb) return -1;
  return BigUint::pow(b.classes, a.cut_size).compare(BigUint::pow(a.classes, b.cut_size));
}

/// The pigeonhole inequality W^k <= |B|^{n|C|}, evaluated exactly. A
/// violated certificate at any cut rules out every (n,k) code; for a
/// single source it is also sufficient at the minimum cut.
struct RateCertificate {
  long long classes = 1;  // W
  int k = 1;
  int n = 1;
  int edge_alphabet = 2;
  int cut_size = 0;
  bool satisfied = false;
};

inline RateCertificate rate_certificate(long long classes, int k, int n,
                                        int edge_alphabet, int cut_size) {
  if (classes < 1 || k < 1 || n < 1 || edge_alphabet < 2 || cut_size < 1)
    throw std::invalid_argument("rate_certificate: arguments must be positive");
  RateCertificate cert{classes, k, n, edge_alphabet, cut_size, false};
  cert.satisfied = BigUint::pow(classes, k) <=
                   BigUint::pow(edge_alphabet, static_cast<unsigned long long>(n) * cut_size);
  return cert;
}

struct CutEnumOptions {
  bool irreducible_only = false;
  std::optional<int> max_cut_size;
  bool node_cuts_only = false;
  int max_finite_edges = 24;  // refusal threshold for edge-subset enumeration
  int max_nodes = 24;         // refusal threshold for node-subset enumeration
};

namespace detail {

inline std::vector<int> finite_edge_list(const Network& net, const Topology& topo) {
  std::vector<int> out;
  for (int e : topo.edge_order)
    if (!net.edges[e].infinite_bundle) out.push_back(e);
  return out;
}

/// True when some edge of C can be dropped without changing I_C; such cuts
/// are dominated and the minimum over the remainder is unchanged.
inline bool is_reducible(const Network& net, const Topology& topo,
                         std::vector<char>& mask, const CutAnalysis& full) {
  for (int e : full.cut) {
    mask[e] = 0;
    CutAnalysis sub = cut_analysis_impl(net, topo, mask);
    mask[e] = 1;
    if (sub.separated_sources == full.separated_sources) return true;
  }
  return false;
}

template <typename Fn>
void for_each_edge_subset_cut(const Network& net, const Topology& topo,
                              const CutEnumOptions& opts, Fn&& yield) {
  std::vector<int> finite = finite_edge_list(net, topo);
  int m = static_cast<int>(finite.size());
  if (m > opts.max_finite_edges)
    throw BudgetError("cut enumeration: " + std::to_string(m) +
                      " finite edges exceed the budget of " +
                      std::to_string(opts.max_finite_edges));
  std::vector<char> mask(net.edges.size(), 0);
  for (long long bits = 1; bits < (1LL << m); ++bits) {
    std::fill(mask.begin(), mask.end(), 0);
    int size = 0;
    for (int i = 0; i < m; ++i)
      if (bits >> i & 1) {
        mask[finite[i]] = 1;
        ++size;
      }
    if (opts.max_cut_size && size > *opts.max_cut_size) continue;
    CutAnalysis an = cut_analysis_impl(net, topo, mask);
    if (!an.is_cut_set()) continue;
    if (opts.irreducible_only && is_reducible(net, topo, mask, an)) continue;
    yield(an);
  }
}

/// Yields (U, E(U)) for every valid node set; cut sets containing bundle
/// edges are skipped (their size is infinite).
template <typename Fn>
void for_each_node_cut(const Network& net, const Topology& topo,
                       const CutEnumOptions& opts, Fn&& yield) {
  int n = static_cast<int>(net.nodes.size());
  if (n > opts.max_nodes)
    throw BudgetError("node cut enumeration: " + std::to_string(n) +
                      " nodes exceed the budget of " + std::to_string(opts.max_nodes));
  std::vector<char> mask(net.edges.size(), 0);
  for (long long bits = 1; bits < (1LL << n); ++bits) {
    if (net.sink >= 0 && (bits >> net.sink & 1)) continue;
    bool has_source = false;
    for (int s : net.sources) has_source |= (bits >> s & 1) != 0;
    if (!has_source) continue;
    std::fill(mask.begin(), mask.end(), 0);
    bool bundle = false;
    int size = 0;
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
      const Edge& ed = net.edges[e];
      if ((bits >> ed.tail & 1) && !(bits >> ed.head & 1)) {
        bundle |= ed.infinite_bundle;
        mask[e] = 1;
        ++size;
      }
    }
    if (bundle || size == 0) continue;
    if (opts.max_cut_size && size > *opts.max_cut_size) continue;
    CutAnalysis an = cut_analysis_impl(net, topo, mask);
    if (!an.is_cut_set()) continue;
    if (opts.irreducible_only && is_reducible(net, topo, mask, an)) continue;
    std::vector<int> u;
    for (int v = 0; v < n; ++v)
      if (bits >> v & 1) u.push_back(v);
    yield(u, an);
  }
}

}  // namespace detail

/// Streams every cut set of the network (the family Lambda(N)), or with
/// node_cuts_only exactly the node-induced family Lambda*(N), deduplicated.
/// Infinite-bundle edges never appear in a yielded cut.
template <typename Fn>
void enumerate_cuts(const Network& net, const CutEnumOptions& opts, Fn&& yield) {
  Topology topo = analyze(net);
  if (!opts.node_cuts_only) {
    detail::for_each_edge_subset_cut(net, topo, opts, yield);
    return;
  }
  std::set<std::vector<int>> seen;
  detail::for_each_node_cut(net, topo, opts,
                            [&](const std::vector<int>&, const CutAnalysis& an) {
                              if (seen.insert(an.cut).second) yield(an);
                            });
}

enum class BoundKind { min_cut, min_cut_a, min_cut_k, prop2, prop1_capacity };

inline const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::min_cut: return "min-cut";
    case BoundKind::min_cut_a: return "min-cut-a";
    case BoundKind::min_cut_k: return "min-cut-k";
    case BoundKind::prop2: return "prop2";
    case BoundKind::prop1_capacity: return "prop1";
  }
  return "?";
}

struct CutRow {
  std::vector<int> cut;  // edge indices, canonical order
  int size = 0;
  long long classes = 1;
  double ratio = std::numeric_limits<double>::infinity();
  std::vector<int> separated;
};

/// A bound value with its witness and exact-arithmetic certificate. The
/// headline `value` is a display approximation; `exact` decides all
/// comparisons. When no enumerated cut constrains the rate the value is
/// +infinity and the witness fields stay empty.
struct BoundReport {
  BoundKind kind = BoundKind::min_cut;
  int base = 2;  // |A|, the logarithm base of the ratio
  bool finite = false;
  double value = std::numeric_limits<double>::infinity();
  ExactRatio exact;
  std::vector<int> witness_cut;        // edge indices
  std::vector<int> witness_separated;  // I at the witness (0-based sources)
  std::vector<int> witness_context;    // c* (min-cut only)
  std::vector<int> witness_nodes;      // U (min-cut-k only)
  std::vector<CutRow> per_cut;
  long long cuts_considered = 0;

  /// The certificate W^k <= |B|^{n|C|} at the witness cut: exact test of
  /// whether an (n,k) code is compatible with this bound.
  RateCertificate certificate(int k, int n, int edge_alphabet) const {
    if (!finite) return RateCertificate{1, k, n, edge_alphabet, 0, true};
    return rate_certificate(exact.classes, k, n, edge_alphabet, exact.cut_size);
  }
};

struct BoundOptions {
  CutEnumOptions cuts;
  bool per_cut_table = false;
  int threads = 1;
};

namespace detail {

struct Candidate {
  ExactRatio ratio;
  bool global = false;         // I = S at this cut
  std::vector<int> positions;  // cut as canonical edge positions, for ties
  std::vector<int> cut;
  std::vector<int> separated;
  std::vector<int> context;
  std::vector<int> node_set;
};

/// Deterministic preference among candidates: smaller exact ratio first;
/// among exact ties, a global cut (whose certificate needs no context
/// argument) beats a partial one, then fewer edges, then more separated
/// sources, then the lexicographically smallest edge set.
inline bool better(const Candidate& a, const Candidate& b) {
  int c = compare_ratio(a.ratio, b.ratio);
  if (c != 0) return c < 0;
  if (a.global != b.global) return a.global;
  if (a.positions.size() != b.positions.size())
    return a.positions.size() < b.positions.size();
  if (a.separated.size() != b.separated.size())
    return a.separated.size() > b.separated.size();
  return a.positions < b.positions;
}

inline long long image_size(const TargetFunction& f) {
  return static_cast<long long>(image(f).size());
}

/// W_{C,f} for an already classified cut, with the smallest maximizing
/// context.
inline std::pair<long long, std::vector<int>> w_count(const TargetFunction& f,
                                                      const CutAnalysis& an) {
  long long best = 0;
  std::vector<int> best_c;
  long long contexts = checked_pow(f.input_size,
                                   static_cast<long long>(an.side_sources.size()),
                                   kMaxTableSize, "context space");
  std::vector<int> c(an.side_sources.size());
  for (long long rank = 0; rank < contexts; ++rank) {
    unpack_digits(rank, f.input_size, c);
    long long w = partition(f, an.separated_sources, an.side_sources, c).class_count;
    if (w > best) {
      best = w;
      best_c = c;
    }
  }
  return {best, best_c};
}

/// Shared minimizer. classes_of returns the denominator class count and an
/// optional context for a cut, or nullopt when the cut is outside the
/// bound's family.
template <typename ClassFn>
BoundReport minimize(const Network& net, const TargetFunction& f, BoundKind kind,
                     const BoundOptions& opts, ClassFn&& classes_of) {
  ValidationReport v = validate(net);
  if (!v.ok())
    throw std::invalid_argument("bounds: network is invalid: " + v.errors.front());
  if (net.source_count() != f.arity)
    throw std::invalid_argument("bounds: function arity != source count");

  Topology topo = analyze(net);
  BoundReport rep;
  rep.kind = kind;
  rep.base = f.input_size;

  std::optional<Candidate> best;
  auto consider = [&](const CutAnalysis& an, const std::vector<int>& node_set,
                      std::optional<Candidate>& slot, std::vector<CutRow>* rows,
                      long long& considered) {
    auto cls = classes_of(an);
    if (!cls) return;
    ++considered;
    Candidate cand;
    cand.ratio = ExactRatio{static_cast<int>(an.cut.size()), cls->first};
    cand.global =
        static_cast<int>(an.separated_sources.size()) == net.source_count();
    cand.cut = an.cut;
    cand.positions.reserve(an.cut.size());
    for (int e : an.cut) cand.positions.push_back(topo.edge_pos[e]);
    cand.separated = an.separated_sources;
    cand.context = std::move(cls->second);
    cand.node_set = node_set;
    if (rows)
      rows->push_back(CutRow{an.cut, static_cast<int>(an.cut.size()), cls->first,
                             cand.ratio.approx(f.input_size), an.separated_sources});
    if (!cand.ratio.finite()) return;  // unconstraining cut
    if (!slot || better(cand, *slot)) slot = std::move(cand);
  };

  bool node_mode = kind == BoundKind::min_cut_k;
  CutEnumOptions cut_opts = opts.cuts;
  cut_opts.node_cuts_only = node_mode;

  if (node_mode) {
    // Lambda*(N) is a set: distinct node sets inducing one cut count once.
    std::vector<CutRow> rows;
    std::set<std::vector<int>> seen;
    long long considered = 0;
    detail::for_each_node_cut(net, topo, cut_opts,
                              [&](const std::vector<int>& u, const CutAnalysis& an) {
                                if (!seen.insert(an.cut).second) return;
                                consider(an, u, best,
                                         opts.per_cut_table ? &rows : nullptr, considered);
                              });
    rep.per_cut = std::move(rows);
    rep.cuts_considered = considered;
  } else {
    std::vector<int> finite = finite_edge_list(net, topo);
    int m = static_cast<int>(finite.size());
    if (m > cut_opts.max_finite_edges)
      throw BudgetError("cut enumeration: " + std::to_string(m) +
                        " finite edges exceed the budget of " +
                        std::to_string(cut_opts.max_finite_edges));
    long long masks = 1LL << m;
    int workers = resolve_workers(opts.threads, masks - 1);
    std::vector<std::optional<Candidate>> chunk_best(std::max(workers, 1));
    std::vector<std::vector<CutRow>> chunk_rows(std::max(workers, 1));
    std::vector<long long> chunk_considered(std::max(workers, 1), 0);
    parallel_chunks(1, masks, workers, [&](int w, long long lo, long long hi) {
      std::vector<char> mask(net.edges.size(), 0);
      for (long long bits = lo; bits < hi; ++bits) {
        std::fill(mask.begin(), mask.end(), 0);
        int size = 0;
        for (int i = 0; i < m; ++i)
          if (bits >> i & 1) {
            mask[finite[i]] = 1;
            ++size;
          }
        if (cut_opts.max_cut_size && size > *cut_opts.max_cut_size) continue;
        CutAnalysis an = cut_analysis_impl(net, topo, mask);
        if (!an.is_cut_set()) continue;
        if (cut_opts.irreducible_only && is_reducible(net, topo, mask, an)) continue;
        consider(an, {}, chunk_best[w], opts.per_cut_table ? &chunk_rows[w] : nullptr,
                 chunk_considered[w]);
      }
    });
    for (std::size_t w = 0; w < chunk_best.size(); ++w) {
      if (chunk_best[w] && (!best || better(*chunk_best[w], *best)))
        best = std::move(chunk_best[w]);
      rep.cuts_considered += chunk_considered[w];
      rep.per_cut.insert(rep.per_cut.end(), chunk_rows[w].begin(), chunk_rows[w].end());
    }
  }

  if (best) {
    rep.finite = true;
    rep.exact = best->ratio;
    rep.value = best->ratio.approx(f.input_size);
    rep.witness_cut = best->cut;
    rep.witness_separated = best->separated;
    rep.witness_context = best->context;
    rep.witness_nodes = best->node_set;
  }
  return rep;
}

}  // namespace detail

/// The equivalence-class cut-set bound: min over all cut sets C of
/// |C| / log_|A| W_{C,f}. An upper bound on the computing capacity for
/// every network and target function.
inline BoundReport min_cut_bound(const Network& net, const TargetFunction& f,
                                 const BoundOptions& opts = {}) {
  return detail::minimize(net, f, BoundKind::min_cut, opts,
                          [&](const CutAnalysis& an)
                              -> std::optional<std::pair<long long, std::vector<int>>> {
                            return detail::w_count(f, an);
                          });
}

/// The earlier bound using R_{C,f} (context-free classes) over all cut
/// sets. Not an upper bound on capacity in general.
inline BoundReport min_cut_A(const Network& net, const TargetFunction& f,
                             const BoundOptions& opts = {}) {
  return detail::minimize(net, f, BoundKind::min_cut_a, opts,
                          [&](const CutAnalysis& an)
                              -> std::optional<std::pair<long long, std::vector<int>>> {
                            return std::make_pair(count_R(f, an.separated_sources),
                                                  std::vector<int>{});
                          });
}

/// The earlier bound using R_{C,f} restricted to node-induced cut sets
/// Lambda*(N). Not an upper bound on capacity in general.
inline BoundReport min_cut_K(const Network& net, const TargetFunction& f,
                             const BoundOptions& opts = {}) {
  return detail::minimize(net, f, BoundKind::min_cut_k, opts,
                          [&](const CutAnalysis& an)
                              -> std::optional<std::pair<long long, std::vector<int>>> {
                            return std::make_pair(count_R(f, an.separated_sources),
                                                  std::vector<int>{});
                          });
}

/// The super-source bound: min over global cut sets of
/// |C| / log_|A| |f[A^s]|.
inline BoundReport prop2_bound(const Network& net, const TargetFunction& f,
                               const BoundOptions& opts = {}) {
  long long img = detail::image_size(f);
  int s = net.source_count();
  return detail::minimize(net, f, BoundKind::prop2, opts,
                          [img, s](const CutAnalysis& an)
                              -> std::optional<std::pair<long long, std::vector<int>>> {
                            if (static_cast<int>(an.separated_sources.size()) != s)
                              return std::nullopt;
                            return std::make_pair(img, std::vector<int>{});
                          });
}

/// Exact computing capacity of a single-source network:
/// M / log_|A| |f[A]| with M the minimum cut size (= the maximum number of
/// edge-disjoint source-sink paths).
inline BoundReport prop1_capacity(const Network& net, const TargetFunction& f) {
  ValidationReport v = validate(net);
  if (!v.ok())
    throw std::invalid_argument("prop1: network is invalid: " + v.errors.front());
  if (net.source_count() != 1)
    throw std::invalid_argument("prop1: the network must have exactly one source");
  if (f.arity != 1) throw std::invalid_argument("prop1: function arity must be 1");

  BoundReport rep;
  rep.kind = BoundKind::prop1_capacity;
  rep.base = f.input_size;
  long long img = detail::image_size(f);
  PathCount paths = edge_disjoint_path_count(net, net.sources[0], net.sink);
  if (paths.unbounded || img < 2) return rep;  // capacity unconstrained

  rep.finite = true;
  rep.exact = ExactRatio{paths.count, img};
  rep.value = rep.exact.approx(f.input_size);
  // Witness: the saturated edges crossing the residual-reachable set after
  // the max-flow run; a minimum cut of size M.
  std::vector<int> flow;
  int finite_edges = 0;
  for (const Edge& e : net.edges) finite_edges += !e.infinite_bundle;
  detail::max_flow(net, net.sources[0], net.sink, finite_edges + 1, &flow);
  std::vector<char> side(net.nodes.size(), 0);
  side[net.sources[0]] = 1;
  std::deque<int> queue{net.sources[0]};
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < net.edges.size(); ++i) {
      const Edge& e = net.edges[i];
      int cap = e.infinite_bundle ? finite_edges + 1 : 1;
      if (e.tail == cur && flow[i] < cap && !side[e.head]) {
        side[e.head] = 1;
        queue.push_back(e.head);
      } else if (e.head == cur && flow[i] > 0 && !side[e.tail]) {
        side[e.tail] = 1;
        queue.push_back(e.tail);
      }
    }
  }
  Topology topo = analyze(net);
  for (int e : topo.edge_order)
    if (side[net.edges[e].tail] && !side[net.edges[e].head]) rep.witness_cut.push_back(e);
  rep.witness_separated = {0};
  rep.cuts_considered = 1;
  return rep;
}

}  // namespace fcomp
