#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fcomp/bigint.hpp"
#include "fcomp/bounds.hpp"
#include "fcomp/equivalence.hpp"
#include "fcomp/function.hpp"
#include "fcomp/network.hpp"
#include "fcomp/util.hpp"

namespace fcomp {

/// An (n,k) function-computing network code: one dense encoder table per
/// edge plus the sink decoder. Every value is a mixed-radix rank:
///   * a B^n block is a rank in [0, |B|^n);
///   * a source column x_i is a rank in [0, |A|^k);
///   * the decoder output is a rank in [0, |O|^k).
/// Encoder domains are ranks over (column, incoming blocks in canonical
/// edge order); the column factor only exists for source out-edges, and is
/// the most significant digit. Infinite-bundle edges carry their tail
/// source's column unchanged and have no table.
struct NetworkCode {
  int n = 1;
  int k = 1;
  std::vector<std::vector<int>> encoders;  // per edge; empty for bundles
  std::vector<int> decoder;
};

/// Per-edge alphabets and table domains for a code over a given network.
struct CodeShape {
  int n = 1, k = 1;
  long long column_space = 1;  // |A|^k
  long long block = 1;         // |B|^n
  long long output_space = 1;  // |O|^k
  long long input_space = 1;   // |A|^{k s}
  std::vector<long long> edge_block;     // per edge: what one edge carries
  std::vector<long long> enc_domain;     // per edge: table length (0 = bundle)
  std::vector<long long> node_in_space;  // per node: product of in-edge blocks
  Topology topo;
};

inline CodeShape code_shape(const Network& net, const TargetFunction& f, int n, int k) {
  if (n < 1 || k < 1) throw std::invalid_argument("code shape: n and k must be >= 1");
  if (net.source_count() != f.arity)
    throw std::invalid_argument("code shape: function arity != source count");
  CodeShape sh;
  sh.n = n;
  sh.k = k;
  sh.topo = analyze(net);
  sh.column_space = checked_pow(f.input_size, k, kMaxTableSize, "source column space");
  sh.block = checked_pow(net.edge_alphabet, n, kMaxTableSize, "edge block space");
  sh.output_space = checked_pow(f.output_size, k, kMaxTableSize, "decoder output space");
  sh.input_space = checked_pow(f.input_size, static_cast<long long>(k) * f.arity,
                               kMaxTableSize, "code input space");

  sh.edge_block.resize(net.edges.size());
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    const Edge& ed = net.edges[e];
    if (ed.infinite_bundle) {
      if (net.source_number(ed.tail) < 0)
        throw std::invalid_argument("code shape: infinite bundle '" + ed.id +
                                    "' must start at a source");
      sh.edge_block[e] = sh.column_space;
    } else {
      sh.edge_block[e] = sh.block;
    }
  }

  sh.node_in_space.assign(net.nodes.size(), 1);
  for (std::size_t v = 0; v < net.nodes.size(); ++v)
    for (int e : sh.topo.in_edges[v]) {
      if (sh.node_in_space[v] > kMaxTableSize / sh.edge_block[e])
        throw BudgetError("code shape: node '" + net.nodes[v] +
                          "' has an incoming block space beyond the table budget");
      sh.node_in_space[v] *= sh.edge_block[e];
    }

  sh.enc_domain.assign(net.edges.size(), 0);
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    const Edge& ed = net.edges[e];
    if (ed.infinite_bundle) continue;
    long long dom = sh.node_in_space[ed.tail];
    if (net.source_number(ed.tail) >= 0) {
      if (dom > kMaxTableSize / sh.column_space)
        throw BudgetError("code shape: edge '" + ed.id + "' table beyond the budget");
      dom *= sh.column_space;
    }
    sh.enc_domain[e] = dom;
  }
  return sh;
}

/// Throws std::invalid_argument when the encoder tables do not match the
/// network and function shapes exactly.
inline void check_encoder_shapes(const NetworkCode& code, const Network& net,
                                 const CodeShape& sh) {
  if (code.encoders.size() != net.edges.size())
    throw std::invalid_argument("code: encoder count != edge count");
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    if (net.edges[e].infinite_bundle) {
      if (!code.encoders[e].empty())
        throw std::invalid_argument("code: bundle edge '" + net.edges[e].id +
                                    "' must not carry a table");
      continue;
    }
    if (static_cast<long long>(code.encoders[e].size()) != sh.enc_domain[e])
      throw std::invalid_argument("code: edge '" + net.edges[e].id + "' table has " +
                                  std::to_string(code.encoders[e].size()) +
                                  " entries, expected " + std::to_string(sh.enc_domain[e]));
    for (int v : code.encoders[e])
      if (v < 0 || v >= sh.block)
        throw std::invalid_argument("code: edge '" + net.edges[e].id +
                                    "' table entry out of range");
  }
}

/// As check_encoder_shapes, but also validates the decoder table.
inline void check_shape(const NetworkCode& code, const Network& net,
                        const TargetFunction& f, const CodeShape* shape = nullptr) {
  CodeShape local;
  const CodeShape& sh = shape ? *shape : (local = code_shape(net, f, code.n, code.k));
  check_encoder_shapes(code, net, sh);
  if (static_cast<long long>(code.decoder.size()) != sh.node_in_space[net.sink])
    throw std::invalid_argument("code: decoder has " + std::to_string(code.decoder.size()) +
                                " entries, expected " +
                                std::to_string(sh.node_in_space[net.sink]));
  for (int v : code.decoder)
    if (v < 0 || v >= sh.output_space)
      throw std::invalid_argument("code: decoder entry out of range");
}

/// The symbols every edge carries for one input matrix, plus the decoded
/// output. Pure function of (code, network, x); reproducible bit-exactly.
struct ExecutionTrace {
  std::vector<int> edge_blocks;  // per edge index: rank in that edge's alphabet
  std::vector<int> output;       // psi(x): k output symbols
};

namespace detail {

/// Mixed-radix rank of the incoming blocks of a node, most significant
/// digit first in canonical edge order.
inline long long in_rank(const CodeShape& sh, const std::vector<int>& edge_values,
                         int node) {
  long long r = 0;
  for (int e : sh.topo.in_edges[node]) r = r * sh.edge_block[e] + edge_values[e];
  return r;
}

/// Inverse of in_rank: the per-edge values, parallel to
/// sh.topo.in_edges[node].
inline std::vector<long long> unpack_in_rank(const CodeShape& sh, int node, long long dom) {
  const auto& ins = sh.topo.in_edges[node];
  std::vector<long long> vals(ins.size(), 0);
  for (std::size_t i = ins.size(); i-- > 0;) {
    vals[i] = dom % sh.edge_block[ins[i]];
    dom /= sh.edge_block[ins[i]];
  }
  return vals;
}

/// Runs the encoders only; returns per-edge values.
inline void run_encoders(const NetworkCode& code, const Network& net, const CodeShape& sh,
                         std::span<const long long> column_ranks,
                         std::vector<int>& edge_values) {
  for (int e : sh.topo.edge_order) {
    const Edge& ed = net.edges[e];
    int src = net.source_number(ed.tail);
    if (ed.infinite_bundle) {
      edge_values[e] = static_cast<int>(column_ranks[src]);
      continue;
    }
    long long dom = in_rank(sh, edge_values, ed.tail);
    if (src >= 0) dom += column_ranks[src] * sh.node_in_space[ed.tail];
    edge_values[e] = code.encoders[e][dom];
  }
}

inline std::vector<long long> column_ranks_of(const InputMatrix& x, int q) {
  std::vector<long long> out(x.cols);
  for (int c = 0; c < x.cols; ++c) out[c] = pack_digits(x.column(c), q);
  return out;
}

}  // namespace detail

/// Evaluates the code edge by edge in topological order and decodes at the
/// sink.
inline ExecutionTrace execute(const NetworkCode& code, const Network& net,
                              const TargetFunction& f, const InputMatrix& x) {
  CodeShape sh = code_shape(net, f, code.n, code.k);
  check_shape(code, net, f, &sh);
  if (x.rows != code.k || x.cols != f.arity)
    throw std::invalid_argument("execute: input matrix shape mismatch");
  for (int v : x.entries)
    if (v < 0 || v >= f.input_size)
      throw std::invalid_argument("execute: input symbol outside the alphabet");
  ExecutionTrace tr;
  tr.edge_blocks.assign(net.edges.size(), 0);
  std::vector<long long> cols = detail::column_ranks_of(x, f.input_size);
  detail::run_encoders(code, net, sh, cols, tr.edge_blocks);
  long long out = code.decoder[detail::in_rank(sh, tr.edge_blocks, net.sink)];
  tr.output.resize(code.k);
  unpack_digits(out, f.output_size, tr.output);
  return tr;
}

struct VerifyOptions {
  long long max_inputs = 1LL << 20;
  int threads = 1;
};

struct VerifyReport {
  bool ok = false;
  long long inputs_checked = 0;
  std::optional<InputMatrix> counterexample;  // lexicographically first
  std::vector<int> expected, actual;
};

/// Exhaustively checks psi(x) = f^(k)(x) over every input matrix.
inline VerifyReport verify(const NetworkCode& code, const Network& net,
                           const TargetFunction& f, const VerifyOptions& opts = {}) {
  CodeShape sh = code_shape(net, f, code.n, code.k);
  check_shape(code, net, f, &sh);
  if (sh.input_space > opts.max_inputs)
    throw BudgetError("verify: " + std::to_string(sh.input_space) +
                      " inputs exceed the budget of " + std::to_string(opts.max_inputs));

  std::atomic<long long> first_bad{sh.input_space};
  parallel_chunks(0, sh.input_space, opts.threads, [&](int, long long lo, long long hi) {
    std::vector<int> edge_values(net.edges.size());
    for (long long r = lo; r < hi; ++r) {
      if (r >= first_bad.load(std::memory_order_relaxed)) return;
      InputMatrix x = InputMatrix::from_rank(r, code.k, f.arity, f.input_size);
      std::vector<long long> cols = detail::column_ranks_of(x, f.input_size);
      detail::run_encoders(code, net, sh, cols, edge_values);
      long long got = code.decoder[detail::in_rank(sh, edge_values, net.sink)];
      long long want = pack_digits(evaluate_block(f, x), f.output_size);
      if (got != want) {
        long long cur = first_bad.load();
        while (r < cur && !first_bad.compare_exchange_weak(cur, r)) {
        }
        return;
      }
    }
  });

  VerifyReport rep;
  rep.inputs_checked = sh.input_space;
  long long bad = first_bad.load();
  if (bad >= sh.input_space) {
    rep.ok = true;
    return rep;
  }
  InputMatrix x = InputMatrix::from_rank(bad, code.k, f.arity, f.input_size);
  ExecutionTrace tr = execute(code, net, f, x);
  rep.counterexample = x;
  rep.expected = evaluate_block(f, x);
  rep.actual = tr.output;
  return rep;
}

struct DecoderCheck {
  bool ok = false;
  // On failure: two inputs with equal sink blocks but different f values.
  std::optional<InputMatrix> witness_x, witness_y;
};

/// True iff the sink's received block determines f^(k)(x), i.e. some
/// decoder completes these encoders into a code that computes f.
inline DecoderCheck decoder_exists(const NetworkCode& code, const Network& net,
                                   const TargetFunction& f,
                                   const VerifyOptions& opts = {}) {
  CodeShape sh = code_shape(net, f, code.n, code.k);
  check_encoder_shapes(code, net, sh);
  if (sh.input_space > opts.max_inputs)
    throw BudgetError("decoder_exists: input space exceeds the budget");
  std::map<long long, std::pair<long long, long long>> seen;  // sink -> (x, f)
  std::vector<int> edge_values(net.edges.size());
  for (long long r = 0; r < sh.input_space; ++r) {
    InputMatrix x = InputMatrix::from_rank(r, code.k, f.arity, f.input_size);
    std::vector<long long> cols = detail::column_ranks_of(x, f.input_size);
    detail::run_encoders(code, net, sh, cols, edge_values);
    long long sink = detail::in_rank(sh, edge_values, net.sink);
    long long fv = pack_digits(evaluate_block(f, x), f.output_size);
    auto [it, fresh] = seen.try_emplace(sink, r, fv);
    if (!fresh && it->second.second != fv) {
      DecoderCheck out;
      out.witness_x =
          InputMatrix::from_rank(it->second.first, code.k, f.arity, f.input_size);
      out.witness_y = x;
      return out;
    }
  }
  return DecoderCheck{true, std::nullopt, std::nullopt};
}

/// Builds the decoder table for a set of encoders that admit one:
/// reachable sink blocks map to the f value of their preimage, unreachable
/// blocks to all-zero output.
inline NetworkCode synthesize_decoder(const NetworkCode& code, const Network& net,
                                      const TargetFunction& f,
                                      const VerifyOptions& opts = {}) {
  CodeShape sh = code_shape(net, f, code.n, code.k);
  check_encoder_shapes(code, net, sh);
  if (sh.input_space > opts.max_inputs)
    throw BudgetError("synthesize_decoder: input space exceeds the budget");
  NetworkCode out = code;
  out.decoder.assign(sh.node_in_space[net.sink], 0);
  std::vector<char> assigned(sh.node_in_space[net.sink], 0);
  std::vector<int> edge_values(net.edges.size());
  for (long long r = 0; r < sh.input_space; ++r) {
    InputMatrix x = InputMatrix::from_rank(r, code.k, f.arity, f.input_size);
    std::vector<long long> cols = detail::column_ranks_of(x, f.input_size);
    detail::run_encoders(code, net, sh, cols, edge_values);
    long long sink = detail::in_rank(sh, edge_values, net.sink);
    long long fv = pack_digits(evaluate_block(f, x), f.output_size);
    if (assigned[sink] && out.decoder[sink] != fv)
      throw std::invalid_argument("synthesize_decoder: no decoder exists");
    assigned[sink] = 1;
    out.decoder[sink] = static_cast<int>(fv);
  }
  return out;
}

/// The single-source forwarding code: the source computes f^(k)(x), ranks
/// it within image(f)^k, writes the rank as base-|B| digits padded to n*M
/// symbols, and ships n-symbol chunks along M edge-disjoint paths; interior
/// nodes forward and the sink inverts the injection.
inline NetworkCode single_source_code(const Network& net, const TargetFunction& f,
                                      int n, int k) {
  ValidationReport v = validate(net);
  if (!v.ok())
    throw std::invalid_argument("single_source_code: invalid network: " + v.errors.front());
  if (net.source_count() != 1 || f.arity != 1)
    throw std::invalid_argument("single_source_code: needs exactly one source");
  CodeShape sh = code_shape(net, f, n, k);
  std::vector<int> img = image(f);
  long long img_size = static_cast<long long>(img.size());
  std::vector<int> img_index(f.output_size, -1);
  for (std::size_t i = 0; i < img.size(); ++i) img_index[img[i]] = static_cast<int>(i);

  PathCount reachable_paths =
      edge_disjoint_path_count(net, net.sources[0], net.sink);
  // Smallest path count whose pipe fits image(f)^k, then check feasibility.
  int paths_needed = 1;
  while (BigUint::pow(img_size, k) >
         BigUint::pow(net.edge_alphabet, static_cast<unsigned long long>(n) * paths_needed))
    ++paths_needed;
  if (!reachable_paths.unbounded && paths_needed > reachable_paths.count)
    throw std::invalid_argument(
        "single_source_code: rate condition violated: |image|^k > |B|^{nM} with M = " +
        std::to_string(reachable_paths.count));

  // Extract paths_needed edge-disjoint paths from a max flow (bundle edges
  // may carry several paths; they forward the source column anyway).
  std::vector<int> flow;
  detail::max_flow(net, net.sources[0], net.sink, paths_needed, &flow);
  std::vector<std::vector<int>> paths;
  for (int p = 0; p < paths_needed; ++p) {
    std::vector<int> path;
    int cur = net.sources[0];
    while (cur != net.sink) {
      int chosen = -1;
      for (int e : sh.topo.out_edges[cur])
        if (flow[e] > 0) {
          chosen = e;
          break;
        }
      if (chosen < 0) throw std::logic_error("single_source_code: flow decomposition failed");
      --flow[chosen];
      path.push_back(chosen);
      cur = net.edges[chosen].head;
    }
    paths.push_back(std::move(path));
  }

  int total_digits = n * paths_needed;
  // y_digits(column rank) = the padded base-|B| digit string for f^(k).
  auto y_rank = [&](long long column) {
    std::vector<int> col(k);
    unpack_digits(column, f.input_size, col);
    long long y = 0;
    for (int r = 0; r < k; ++r) y = y * img_size + img_index[f.table[col[r]]];
    return y;
  };
  auto chunk_of = [&](long long column, int p) {
    std::vector<int> digits(total_digits);
    unpack_digits(y_rank(column), net.edge_alphabet, digits);
    return pack_digits(std::span<const int>(digits).subspan(
                           static_cast<std::size_t>(p) * n, n),
                       net.edge_alphabet);
  };

  NetworkCode code;
  code.n = n;
  code.k = k;
  code.encoders.resize(net.edges.size());
  for (std::size_t e = 0; e < net.edges.size(); ++e)
    if (!net.edges[e].infinite_bundle) code.encoders[e].assign(sh.enc_domain[e], 0);

  for (int p = 0; p < paths_needed; ++p) {
    for (std::size_t step = 0; step < paths[p].size(); ++step) {
      int e = paths[p][step];
      const Edge& ed = net.edges[e];
      if (ed.infinite_bundle) continue;  // carries the column as-is
      int prev = step == 0 ? -1 : paths[p][step - 1];
      std::vector<int>& table = code.encoders[e];
      for (long long dom = 0; dom < sh.enc_domain[e]; ++dom) {
        if (net.source_number(ed.tail) >= 0) {
          long long column = dom / sh.node_in_space[ed.tail];
          table[dom] = static_cast<int>(chunk_of(column, p));
        } else {
          // Recover the in-block of the previous path edge from the domain
          // rank, then either forward it or, after a bundle hop, compute
          // the chunk from the column it carries.
          long long rest = dom;
          long long value = 0;
          const auto& ins = sh.topo.in_edges[ed.tail];
          for (std::size_t i = ins.size(); i-- > 0;) {
            long long digit = rest % sh.edge_block[ins[i]];
            rest /= sh.edge_block[ins[i]];
            if (ins[i] == prev) value = digit;
          }
          table[dom] = static_cast<int>(
              net.edges[prev].infinite_bundle ? chunk_of(value, p) : value);
        }
      }
    }
  }

  // Decoder: reassemble the digit string from the final edges of the paths.
  code.decoder.assign(sh.node_in_space[net.sink], 0);
  const auto& sink_ins = sh.topo.in_edges[net.sink];
  for (long long dom = 0; dom < sh.node_in_space[net.sink]; ++dom) {
    std::vector<long long> value(net.edges.size(), 0);
    long long rest = dom;
    for (std::size_t i = sink_ins.size(); i-- > 0;) {
      value[sink_ins[i]] = rest % sh.edge_block[sink_ins[i]];
      rest /= sh.edge_block[sink_ins[i]];
    }
    std::vector<int> digits(total_digits, 0);
    for (int p = 0; p < paths_needed; ++p) {
      int last = paths[p].back();
      long long chunk = net.edges[last].infinite_bundle ? chunk_of(value[last], p)
                                                        : value[last];
      unpack_digits(chunk, net.edge_alphabet,
                    std::span<int>(digits).subspan(static_cast<std::size_t>(p) * n, n));
    }
    long long y = pack_digits(digits, net.edge_alphabet);
    if (BigUint(static_cast<unsigned long long>(y)) >= BigUint::pow(img_size, k))
      continue;  // unreachable block, leave all-zero output
    std::vector<int> class_digits(k);
    unpack_digits(y, img_size, class_digits);
    std::vector<int> out(k);
    for (int r = 0; r < k; ++r) out[r] = img[class_digits[r]];
    code.decoder[dom] = static_cast<int>(pack_digits(out, f.output_size));
  }
  return code;
}

/// Checks that the blocks crossing a global cut set determine the decoded
/// output: for all x, y with g^C(x) = g^C(y), psi(x) = psi(y). A theorem
/// for every code, so a false return indicates a bug (or a non-global cut,
/// which is rejected).
inline bool cut_determinism_check(const NetworkCode& code, const Network& net,
                                  const TargetFunction& f, std::span<const int> cut_edges,
                                  const VerifyOptions& opts = {}) {
  if (!is_global_cut_set(net, cut_edges))
    throw std::invalid_argument("cut_determinism_check: the cut set is not global");
  CodeShape sh = code_shape(net, f, code.n, code.k);
  check_shape(code, net, f, &sh);
  if (sh.input_space > opts.max_inputs)
    throw BudgetError("cut_determinism_check: input space exceeds the budget");
  std::vector<int> cut(cut_edges.begin(), cut_edges.end());
  std::sort(cut.begin(), cut.end(),
            [&](int a, int b) { return sh.topo.edge_pos[a] < sh.topo.edge_pos[b]; });
  std::map<std::vector<int>, std::vector<int>> seen;
  std::vector<int> edge_values(net.edges.size());
  for (long long r = 0; r < sh.input_space; ++r) {
    InputMatrix x = InputMatrix::from_rank(r, code.k, f.arity, f.input_size);
    std::vector<long long> cols = detail::column_ranks_of(x, f.input_size);
    detail::run_encoders(code, net, sh, cols, edge_values);
    std::vector<int> key;
    key.reserve(cut.size());
    for (int e : cut) key.push_back(edge_values[e]);
    long long out = code.decoder[detail::in_rank(sh, edge_values, net.sink)];
    std::vector<int> psi(code.k);
    unpack_digits(out, f.output_size, psi);
    auto [it, fresh] = seen.try_emplace(std::move(key), psi);
    if (!fresh && it->second != psi) return false;
  }
  return true;
}

enum class SearchStatus {
  found,             // a verified code exists (the first in candidate order)
  none_enumerated,   // every encoder assignment was tried; none admits a decoder
  none_by_counting,  // the sink receives fewer distinct blocks than f^(k) values
};

struct SearchOptions {
  unsigned long long max_candidates = 1ULL << 36;
  /// Before enumerating, compare |image(f)|^k against the sink's incoming
  /// block space; when the outputs cannot fit, no encoder assignment can
  /// work and the search reports none_by_counting without enumeration.
  bool counting_shortcut = true;
  /// Restrict the first edge's table to one canonical representative per
  /// relabeling of its output blocks (downstream tables are enumerated in
  /// full, so existence and non-existence are unaffected).
  bool canonical_first_table = false;
  int threads = 1;
  long long max_verify_inputs = 1LL << 20;
};

struct SearchOutcome {
  SearchStatus status = SearchStatus::none_enumerated;
  std::optional<NetworkCode> code;
  /// Position of the found code in enumeration order (deterministic).
  unsigned long long found_index = 0;
  /// Candidates examined. Exact and deterministic for none_enumerated
  /// (every assignment, minus any canonical-table skips); when a code is
  /// found early the parallel workers stop at a scheduling-dependent point.
  unsigned long long candidates_tested = 0;
  double log2_space = 0;  // log2 of the full encoder-assignment space
  std::string note;
};

/// Ground-truth oracle: enumerates every encoder assignment (tables
/// lexicographic by contents, edges in canonical order) and returns the
/// first one that admits a decoder, or certifies that none exists at this
/// (n,k).
inline SearchOutcome exhaustive_search(const Network& net, const TargetFunction& f,
                                       int n, int k, const SearchOptions& opts = {}) {
  CodeShape sh = code_shape(net, f, n, k);
  if (sh.input_space > opts.max_verify_inputs)
    throw BudgetError("exhaustive_search: input space exceeds the budget");

  SearchOutcome out;

  // Pigeonhole at the sink: every f^(k) value must appear as a distinct
  // sink block, whatever the encoders do.
  BigUint distinct_outputs = BigUint::pow(image(f).size(), k);
  BigUint sink_space(1);
  for (int e : sh.topo.in_edges[net.sink])
    sink_space = sink_space * BigUint(static_cast<unsigned long long>(sh.edge_block[e]));
  if (opts.counting_shortcut && distinct_outputs > sink_space) {
    out.status = SearchStatus::none_by_counting;
    out.note = "sink receives " + sink_space.to_string() + " distinct blocks but f^(k) takes " +
               distinct_outputs.to_string() + " values";
    return out;
  }

  // Candidate space: one base-|B|^n digit per table cell.
  std::vector<int> table_edges;  // non-bundle edges in canonical order
  long long total_cells = 0;
  for (int e : sh.topo.edge_order)
    if (!net.edges[e].infinite_bundle) {
      table_edges.push_back(e);
      total_cells += sh.enc_domain[e];
    }
  out.log2_space = total_cells * std::log2(static_cast<double>(sh.block));
  if (out.log2_space > std::log2(static_cast<double>(opts.max_candidates)))
    throw BudgetError("exhaustive_search: encoder space of 2^" +
                      std::to_string(out.log2_space) + " candidates exceeds the budget");
  unsigned long long space = 1;
  for (long long i = 0; i < total_cells; ++i) space *= sh.block;

  // Precompute per input: column ranks and the f^(k) rank.
  std::vector<std::vector<long long>> cols(sh.input_space);
  std::vector<long long> fk(sh.input_space);
  for (long long r = 0; r < sh.input_space; ++r) {
    InputMatrix x = InputMatrix::from_rank(r, k, f.arity, f.input_size);
    cols[r] = detail::column_ranks_of(x, f.input_size);
    fk[r] = pack_digits(evaluate_block(f, x), f.output_size);
  }

  long long first_cells = table_edges.empty() ? 0 : sh.enc_domain[table_edges.front()];
  std::atomic<unsigned long long> first_hit{space};
  std::atomic<unsigned long long> tested{0};

  parallel_chunks(
      0, static_cast<long long>(space), opts.threads, [&](int, long long lo, long long hi) {
        NetworkCode cand;
        cand.n = n;
        cand.k = k;
        cand.encoders.resize(net.edges.size());
        for (int e : table_edges) cand.encoders[e].resize(sh.enc_domain[e]);
        std::vector<int> cells(total_cells);
        std::vector<int> edge_values(net.edges.size());
        // Epoch-stamped scratch map sink block -> f value for the current
        // candidate; avoids clearing between candidates.
        std::vector<long long> sink_value(sh.node_in_space[net.sink], 0);
        std::vector<unsigned long long> sink_epoch(sh.node_in_space[net.sink], 0);
        unsigned long long epoch = 0;
        unsigned long long local_tested = 0;
        for (long long id = lo; id < hi; ++id) {
          if (static_cast<unsigned long long>(id) >=
              first_hit.load(std::memory_order_relaxed))
            break;
          unpack_digits(id, sh.block, cells);
          if (opts.canonical_first_table) {
            int high = -1;
            bool canonical = true;
            for (long long c = 0; c < first_cells && canonical; ++c) {
              if (cells[c] > high + 1) canonical = false;
              if (cells[c] > high) high = cells[c];
            }
            if (!canonical) continue;
          }
          long long pos = 0;
          for (int e : table_edges)
            for (long long c = 0; c < sh.enc_domain[e]; ++c)
              cand.encoders[e][c] = cells[pos++];
          ++local_tested;
          ++epoch;
          bool ok = true;
          for (long long r = 0; r < sh.input_space && ok; ++r) {
            detail::run_encoders(cand, net, sh, cols[r], edge_values);
            long long sink = detail::in_rank(sh, edge_values, net.sink);
            if (sink_epoch[sink] != epoch) {
              sink_epoch[sink] = epoch;
              sink_value[sink] = fk[r];
            } else {
              ok = sink_value[sink] == fk[r];
            }
          }
          if (ok) {
            unsigned long long cur = first_hit.load();
            unsigned long long mine = static_cast<unsigned long long>(id);
            while (mine < cur && !first_hit.compare_exchange_weak(cur, mine)) {
            }
            break;
          }
        }
        tested.fetch_add(local_tested);
      });

  out.candidates_tested = tested.load();
  unsigned long long hit = first_hit.load();
  if (hit >= space) {
    out.status = SearchStatus::none_enumerated;
    return out;
  }
  out.found_index = hit;
  NetworkCode best;
  best.n = n;
  best.k = k;
  best.encoders.resize(net.edges.size());
  std::vector<int> cells(total_cells);
  unpack_digits(static_cast<long long>(hit), sh.block, cells);
  long long pos = 0;
  for (int e : table_edges) {
    best.encoders[e].resize(sh.enc_domain[e]);
    for (long long c = 0; c < sh.enc_domain[e]; ++c) best.encoders[e][c] = cells[pos++];
  }
  out.status = SearchStatus::found;
  out.code = synthesize_decoder(best, net, f);
  return out;
}

}  // namespace fcomp
