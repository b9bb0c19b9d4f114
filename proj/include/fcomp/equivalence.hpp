#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcomp/function.hpp"
#include "fcomp/network.hpp"
#include "fcomp/util.hpp"

namespace fcomp {

/// The partition of A^|I| under (I,J,c)-equivalence: a and b are equivalent
/// when f cannot distinguish them on any completion that pins the J sources
/// to the context c and gives both sides the same symbols elsewhere.
/// Index sets hold 0-based source positions in ascending order; vectors
/// over I or J list symbols in that order (the order-preserving
/// localization of global source indices).
struct EquivalencePartition {
  std::vector<int> index_set;    // I
  std::vector<int> context_set;  // J
  std::vector<int> context;      // c, one symbol per member of J
  std::vector<int> class_of;     // indexed by the mixed-radix rank of a
  long long class_count = 0;     // W
  std::vector<std::vector<int>> representatives;  // lexicographic minima
};

namespace detail {

inline void require_index_sets(const TargetFunction& f, std::span<const int> I,
                               std::span<const int> J, std::span<const int> c) {
  if (I.empty()) throw std::invalid_argument("partition: index set I is empty");
  if (c.size() != J.size())
    throw std::invalid_argument("partition: context length does not match J");
  std::vector<char> used(f.arity, 0);
  for (int i : I) {
    if (i < 0 || i >= f.arity) throw std::invalid_argument("partition: index outside 1..s");
    if (used[i]) throw std::invalid_argument("partition: repeated index in I");
    used[i] = 2;
  }
  for (int j : J) {
    if (j < 0 || j >= f.arity) throw std::invalid_argument("partition: index outside 1..s");
    if (used[j] == 2) throw std::invalid_argument("partition: I and J overlap");
    if (used[j]) throw std::invalid_argument("partition: repeated index in J");
    used[j] = 1;
  }
  for (std::size_t t = 0; t + 1 < I.size(); ++t)
    if (I[t] >= I[t + 1]) throw std::invalid_argument("partition: I must be ascending");
  for (std::size_t t = 0; t + 1 < J.size(); ++t)
    if (J[t] >= J[t + 1]) throw std::invalid_argument("partition: J must be ascending");
  for (int v : c)
    if (v < 0 || v >= f.input_size)
      throw std::invalid_argument("partition: context symbol outside the input alphabet");
}

}  // namespace detail

/// Builds the (I,J,c) partition by signatures: for each a, the vector of f
/// values over all completions (free sources ranging in mixed-radix order)
/// determines the class. Class ids follow first appearance while scanning
/// a in mixed-radix order, so representatives are lexicographic minima.
inline EquivalencePartition partition(const TargetFunction& f, std::span<const int> I,
                                      std::span<const int> J, std::span<const int> c) {
  detail::require_index_sets(f, I, J, c);
  EquivalencePartition part;
  part.index_set.assign(I.begin(), I.end());
  part.context_set.assign(J.begin(), J.end());
  part.context.assign(c.begin(), c.end());

  std::vector<int> free_positions;
  {
    std::vector<char> taken(f.arity, 0);
    for (int i : I) taken[i] = 1;
    for (int j : J) taken[j] = 1;
    for (int p = 0; p < f.arity; ++p)
      if (!taken[p]) free_positions.push_back(p);
  }

  long long a_count = checked_pow(f.input_size, static_cast<long long>(I.size()),
                                  kMaxTableSize, "equivalence domain");
  long long completions =
      checked_pow(f.input_size, static_cast<long long>(free_positions.size()),
                  kMaxTableSize, "equivalence completions");

  part.class_of.assign(a_count, -1);
  std::map<std::vector<int>, int> by_signature;
  std::vector<int> row(f.arity, 0);
  for (std::size_t t = 0; t < J.size(); ++t) row[J[t]] = c[t];
  std::vector<int> a_digits(I.size()), free_digits(free_positions.size());
  std::vector<int> signature(completions);
  for (long long a = 0; a < a_count; ++a) {
    unpack_digits(a, f.input_size, a_digits);
    for (std::size_t t = 0; t < I.size(); ++t) row[I[t]] = a_digits[t];
    for (long long u = 0; u < completions; ++u) {
      unpack_digits(u, f.input_size, free_digits);
      for (std::size_t t = 0; t < free_positions.size(); ++t)
        row[free_positions[t]] = free_digits[t];
      signature[u] = f.table[pack_digits(row, f.input_size)];
    }
    auto [it, fresh] = by_signature.try_emplace(signature, part.class_count);
    if (fresh) {
      ++part.class_count;
      part.representatives.push_back(a_digits);
    }
    part.class_of[a] = it->second;
  }
  return part;
}

/// W_{C,f} together with the lexicographically smallest maximizing context.
struct CutClassCount {
  long long count = 0;             // W_{C,f}
  std::vector<int> context;        // c*, over J_C
  std::vector<int> separated;      // I_C
  std::vector<int> side;           // J_C
};

/// W_{C,f} = max over contexts c of the (I_C, J_C, c) class count.
inline CutClassCount count_W_for_cut(const TargetFunction& f, const Network& net,
                                     std::span<const int> cut_edges) {
  CutAnalysis an = cut_analysis(net, cut_edges);
  if (!an.is_cut_set())
    throw std::invalid_argument("count_W_for_cut: the edge set is not a cut set");
  if (net.source_count() != f.arity)
    throw std::invalid_argument("count_W_for_cut: function arity != source count");
  CutClassCount out;
  out.separated = an.separated_sources;
  out.side = an.side_sources;
  long long context_count =
      checked_pow(f.input_size, static_cast<long long>(an.side_sources.size()),
                  kMaxTableSize, "context space");
  std::vector<int> c(an.side_sources.size());
  for (long long rank = 0; rank < context_count; ++rank) {
    unpack_digits(rank, f.input_size, c);
    long long w = partition(f, an.separated_sources, an.side_sources, c).class_count;
    if (w > out.count) {
      out.count = w;
      out.context = c;
    }
  }
  return out;
}

/// R_{I,f}: class count of the context-free relation (J empty).
inline long long count_R(const TargetFunction& f, std::span<const int> I) {
  return partition(f, I, {}, {}).class_count;
}

/// Block equivalence of two k x |I| matrices: every row pair must be
/// (I,J,c)-equivalent, the context being replicated across rows.
inline bool block_equivalent(const TargetFunction& f, std::span<const int> I,
                             std::span<const int> J, std::span<const int> c,
                             const InputMatrix& a, const InputMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("block_equivalent: shape mismatch");
  if (a.cols != static_cast<int>(I.size()))
    throw std::invalid_argument("block_equivalent: column count != |I|");
  EquivalencePartition part = partition(f, I, J, c);
  for (int r = 0; r < a.rows; ++r) {
    long long ra = pack_digits(std::span<const int>(a.entries).subspan(
                                   static_cast<std::size_t>(r) * a.cols, a.cols),
                               f.input_size);
    long long rb = pack_digits(std::span<const int>(b.entries).subspan(
                                   static_cast<std::size_t>(r) * b.cols, b.cols),
                               f.input_size);
    if (part.class_of[ra] != part.class_of[rb]) return false;
  }
  return true;
}

}  // namespace fcomp
