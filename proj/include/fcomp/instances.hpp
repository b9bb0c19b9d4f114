#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcomp/code.hpp"
#include "fcomp/function.hpp"
#include "fcomp/network.hpp"

namespace fcomp {

/// A ready-made network/function pair, optionally with a known good code.
struct InstanceBundle {
  std::string name;
  Network network;
  TargetFunction function;
  std::optional<NetworkCode> code;
  std::string note;  // printed alongside reports
};

namespace detail {

inline Network n1_network() {
  return NetworkBuilder("n1")
      .edge_alphabet(2)
      .source("1")
      .source("2")
      .source("3")
      .node("v")
      .sink("rho")
      .edge("e1", "1", "v")
      .edge("e2", "2", "v")
      .edge("e3", "3", "v")
      .edge("e4", "1", "rho")
      .edge("e5", "2", "rho")
      .edge("e6", "3", "rho")
      .edge("e7", "v", "rho")
      .build();
}

/// The optimal (1,2) code on n1, rate 2: each source sends its first-row
/// symbol toward v and its second-row symbol straight to the sink; v
/// computes the first function value, the sink reconstructs the second.
inline NetworkCode n1_code(const Network& net) {
  NetworkCode code;
  code.n = 1;
  code.k = 2;
  code.encoders.resize(net.edges.size());
  // Column rank of (x_1i, x_2i) is x_1i*2 + x_2i.
  std::vector<int> first_row = {0, 0, 1, 1};
  std::vector<int> second_row = {0, 1, 0, 1};
  for (const char* id : {"e1", "e2", "e3"}) code.encoders[net.edge_index(id)] = first_row;
  for (const char* id : {"e4", "e5", "e6"}) code.encoders[net.edge_index(id)] = second_row;
  std::vector<int>& at_v = code.encoders[net.edge_index("e7")];
  at_v.resize(8);  // incoming blocks e1,e2,e3
  for (int b1 = 0; b1 < 2; ++b1)
    for (int b2 = 0; b2 < 2; ++b2)
      for (int b3 = 0; b3 < 2; ++b3) at_v[b1 * 4 + b2 * 2 + b3] = (b1 * b2 + b3) % 2;
  code.decoder.resize(16);  // incoming blocks e4,e5,e6,e7
  for (int b4 = 0; b4 < 2; ++b4)
    for (int b5 = 0; b5 < 2; ++b5)
      for (int b6 = 0; b6 < 2; ++b6)
        for (int b7 = 0; b7 < 2; ++b7)
          code.decoder[b4 * 8 + b5 * 4 + b6 * 2 + b7] = b7 * 2 + (b4 * b5 + b6) % 2;
  return code;
}

inline Network n2_network() {
  return NetworkBuilder("n2")
      .edge_alphabet(2)
      .source("1")
      .source("2")
      .source("3")
      .sink("rho")
      .edge("e1", "3", "1")
      .edge("e2", "1", "rho")
      .edge("e3", "3", "2")
      .edge("e4", "2", "rho")
      .build();
}

inline Network n2_prime_network() {
  Network net = NetworkBuilder("n2")
                    .edge_alphabet(2)
                    .node("1'")
                    .node("2'")
                    .node("3")
                    .node("rho")
                    .node("1")
                    .node("2")
                    .source("1")
                    .source("2")
                    .source("3")
                    .sink("rho")
                    .edge("e1", "3", "1'")
                    .edge("e2", "1'", "rho")
                    .edge("e3", "3", "2'")
                    .edge("e4", "2'", "rho")
                    .edge("b1", "1", "1'", true)
                    .edge("b2", "2", "2'", true)
                    .build();
  net.name = "n2-prime";
  return net;
}

}  // namespace detail

inline std::vector<std::string> instance_names() {
  return {"n1", "n2", "n2-prime", "xor-tree", "sum-tree"};
}

inline InstanceBundle instance(const std::string& name) {
  InstanceBundle b;
  b.name = name;
  if (name == "n1") {
    b.network = detail::n1_network();
    b.function = builtin("product-plus-mod2");
    b.code = detail::n1_code(b.network);
  } else if (name == "n2") {
    b.network = detail::n2_network();
    b.function = builtin("arithmetic-sum", {3, 2});
    b.note =
        "sources 1 and 2 have incoming edges; run split-sources (or use "
        "instance n2-prime) before computing bounds";
  } else if (name == "n2-prime") {
    b.network = detail::n2_prime_network();
    b.function = builtin("arithmetic-sum", {3, 2});
    b.note =
        "the computing capacity of this instance is known to be log_6(4) "
        "~= 0.7737, strictly below the cut-set bound";
  } else if (name == "xor-tree") {
    b.network = NetworkBuilder("xor-tree")
                    .edge_alphabet(2)
                    .source("1")
                    .source("2")
                    .node("v")
                    .sink("rho")
                    .edge("t1", "1", "v")
                    .edge("t2", "2", "v")
                    .edge("t3", "v", "rho")
                    .build();
    b.function = builtin("mod-sum", {2, 2});
  } else if (name == "sum-tree") {
    b.network = NetworkBuilder("sum-tree")
                    .edge_alphabet(2)
                    .source("1")
                    .source("2")
                    .node("v")
                    .sink("rho")
                    .edge("t1", "1", "v")
                    .edge("t2", "2", "v")
                    .edge("d1", "v", "rho")
                    .edge("d2", "v", "rho")
                    .build();
    b.function = builtin("arithmetic-sum", {2, 2});
  } else {
    throw std::invalid_argument("unknown instance '" + name + "' (have: n1, n2, n2-prime, "
                                "xor-tree, sum-tree)");
  }
  return b;
}

}  // namespace fcomp
