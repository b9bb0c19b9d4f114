#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fcomp/code.hpp"
#include "fcomp/function.hpp"
#include "fcomp/network.hpp"
#include "fcomp/util.hpp"

namespace fcomp {

namespace detail {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

/// Splits text into token lines; '#' starts a comment, blank lines vanish.
inline std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream stream(text);
  std::string raw;
  int number = 0;
  while (std::getline(stream, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream line(raw);
    Line l;
    l.number = number;
    std::string tok;
    while (line >> tok) l.tokens.push_back(tok);
    if (!l.tokens.empty()) out.push_back(std::move(l));
  }
  return out;
}

[[noreturn]] inline void fail(const std::string& file, int line, const std::string& msg) {
  throw ParseError(file + ":" + std::to_string(line) + ": " + msg);
}

inline long long parse_int(const std::string& file, int line, const std::string& tok) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail(file, line, "expected an integer, got '" + tok + "'");
  }
}

}  // namespace detail

/// Parses the network text format:
///   network <name>
///   edge-alphabet <size>
///   node <id> | source <id> | sink <id>
///   edge <id> <tail> <head> [inf]
/// Nodes are registered in order of first mention; the order of `source`
/// lines defines the source numbering.
inline Network parse_network(const std::string& text,
                             const std::string& file = "<network>") {
  NetworkBuilder builder;
  bool have_sink = false;
  std::vector<std::string> edge_ids;
  for (const auto& line : detail::tokenize(text)) {
    const auto& t = line.tokens;
    auto want = [&](std::size_t count) {
      if (t.size() != count)
        detail::fail(file, line.number,
                     "'" + t[0] + "' expects " + std::to_string(count - 1) +
                         " argument(s), got " + std::to_string(t.size() - 1));
    };
    if (t[0] == "network") {
      want(2);
      builder = NetworkBuilder(t[1]);  // must precede everything else
    } else if (t[0] == "edge-alphabet") {
      want(2);
      long long b = detail::parse_int(file, line.number, t[1]);
      if (b < 2) detail::fail(file, line.number, "edge alphabet needs at least 2 symbols");
      builder.edge_alphabet(static_cast<int>(b));
    } else if (t[0] == "node") {
      want(2);
      builder.node(t[1]);
    } else if (t[0] == "source") {
      want(2);
      builder.source(t[1]);
    } else if (t[0] == "sink") {
      want(2);
      if (have_sink) detail::fail(file, line.number, "sink already declared");
      have_sink = true;
      builder.sink(t[1]);
    } else if (t[0] == "edge") {
      if (t.size() != 4 && !(t.size() == 5 && t[4] == "inf"))
        detail::fail(file, line.number,
                     "expected 'edge <id> <tail> <head> [inf]', got '" + t.back() + "'");
      for (const auto& id : edge_ids)
        if (id == t[1]) detail::fail(file, line.number, "duplicate edge id '" + t[1] + "'");
      edge_ids.push_back(t[1]);
      builder.edge(t[1], t[2], t[3], t.size() == 5);
    } else {
      detail::fail(file, line.number, "unknown directive '" + t[0] + "'");
    }
  }
  return builder.build();
}

inline std::string serialize_network(const Network& net) {
  std::ostringstream out;
  out << "network " << net.name << "\n";
  out << "edge-alphabet " << net.edge_alphabet << "\n";
  for (const auto& n : net.nodes) out << "node " << n << "\n";
  for (int s : net.sources) out << "source " << net.nodes[s] << "\n";
  if (net.sink >= 0) out << "sink " << net.nodes[net.sink] << "\n";
  for (const Edge& e : net.edges) {
    out << "edge " << e.id << " " << net.nodes[e.tail] << " " << net.nodes[e.head];
    if (e.infinite_bundle) out << " inf";
    out << "\n";
  }
  return out.str();
}

/// Parses the function text format:
///   function <name>
///   builtin <family> [s=<arity>] [q=<alphabet>]
/// or
///   function <name>
///   arity <s>
///   input-alphabet <q>
///   output-alphabet <m>        (optional; defaults to max entry + 1)
///   table <q^s entries>        (first argument most significant)
inline TargetFunction parse_function(const std::string& text,
                                     const std::string& file = "<function>") {
  std::string name = "f";
  std::optional<TargetFunction> built;
  int arity = 0, q = 0, m = 0;
  std::vector<int> table;
  bool have_table = false;
  for (const auto& line : detail::tokenize(text)) {
    const auto& t = line.tokens;
    auto int_arg = [&](int min) {
      if (t.size() != 2)
        detail::fail(file, line.number, "'" + t[0] + "' expects one argument");
      long long v = detail::parse_int(file, line.number, t[1]);
      if (v < min)
        detail::fail(file, line.number, "'" + t[0] + "' must be at least " +
                                            std::to_string(min) + ", got '" + t[1] + "'");
      return static_cast<int>(v);
    };
    if (t[0] == "function") {
      if (t.size() != 2) detail::fail(file, line.number, "'function' expects a name");
      name = t[1];
    } else if (t[0] == "builtin") {
      if (t.size() < 2) detail::fail(file, line.number, "'builtin' expects a family name");
      BuiltinParams params;
      for (std::size_t i = 2; i < t.size(); ++i) {
        if (t[i].rfind("s=", 0) == 0)
          params.arity =
              static_cast<int>(detail::parse_int(file, line.number, t[i].substr(2)));
        else if (t[i].rfind("q=", 0) == 0)
          params.input_size =
              static_cast<int>(detail::parse_int(file, line.number, t[i].substr(2)));
        else
          detail::fail(file, line.number, "unknown builtin parameter '" + t[i] + "'");
      }
      try {
        built = builtin(t[1], params);
      } catch (const std::invalid_argument& err) {
        detail::fail(file, line.number, err.what());
      }
    } else if (t[0] == "arity") {
      arity = int_arg(1);
    } else if (t[0] == "input-alphabet") {
      q = int_arg(2);
    } else if (t[0] == "output-alphabet") {
      m = int_arg(1);
    } else if (t[0] == "table") {
      have_table = true;
      for (std::size_t i = 1; i < t.size(); ++i)
        table.push_back(static_cast<int>(detail::parse_int(file, line.number, t[i])));
    } else {
      detail::fail(file, line.number, "unknown directive '" + t[0] + "'");
    }
  }
  if (built) {
    if (have_table || arity || q || m)
      throw ParseError(file + ": 'builtin' conflicts with explicit table fields");
    built->name = name != "f" ? name : built->name;
    return *built;
  }
  if (!have_table) throw ParseError(file + ": missing 'table' or 'builtin'");
  if (!arity || !q) throw ParseError(file + ": missing 'arity' or 'input-alphabet'");
  TargetFunction f;
  f.name = name;
  f.arity = arity;
  f.input_size = q;
  f.output_size = m ? m : (table.empty() ? 1 : *std::max_element(table.begin(), table.end()) + 1);
  f.table = std::move(table);
  try {
    check(f);
  } catch (const std::invalid_argument& err) {
    throw ParseError(file + ": " + err.what());
  }
  return f;
}

inline std::string serialize_function(const TargetFunction& f) {
  std::ostringstream out;
  out << "function " << (f.name.empty() ? "f" : f.name) << "\n";
  out << "arity " << f.arity << "\n";
  out << "input-alphabet " << f.input_size << "\n";
  out << "output-alphabet " << f.output_size << "\n";
  out << "table";
  for (int v : f.table) out << " " << v;
  out << "\n";
  return out.str();
}

/// Parses the code text format against a concrete network and function:
///   code n <n> k <k>
///   enc <edge-id> <entries>   (one line per non-bundle edge)
///   dec <entries>
/// Table entries are block ranks in the canonical domain order.
inline NetworkCode parse_code(const std::string& text, const Network& net,
                              const TargetFunction& f,
                              const std::string& file = "<code>") {
  NetworkCode code;
  bool have_header = false, have_dec = false;
  std::vector<char> have_enc(net.edges.size(), 0);
  std::optional<CodeShape> shape;
  for (const auto& line : detail::tokenize(text)) {
    const auto& t = line.tokens;
    if (t[0] == "code") {
      if (t.size() != 5 || t[1] != "n" || t[3] != "k")
        detail::fail(file, line.number, "expected 'code n <n> k <k>'");
      code.n = static_cast<int>(detail::parse_int(file, line.number, t[2]));
      code.k = static_cast<int>(detail::parse_int(file, line.number, t[4]));
      if (code.n < 1 || code.k < 1)
        detail::fail(file, line.number, "n and k must be positive");
      have_header = true;
      try {
        shape = code_shape(net, f, code.n, code.k);
      } catch (const std::exception& err) {
        detail::fail(file, line.number, err.what());
      }
      code.encoders.resize(net.edges.size());
    } else if (t[0] == "enc") {
      if (!have_header) detail::fail(file, line.number, "'enc' before the 'code' header");
      if (t.size() < 2) detail::fail(file, line.number, "'enc' expects an edge id");
      int e = net.edge_index(t[1]);
      if (e < 0) detail::fail(file, line.number, "unknown edge id '" + t[1] + "'");
      if (net.edges[e].infinite_bundle)
        detail::fail(file, line.number,
                     "bundle edge '" + t[1] + "' carries the source column; no table allowed");
      if (have_enc[e]) detail::fail(file, line.number, "duplicate table for edge '" + t[1] + "'");
      have_enc[e] = 1;
      if (static_cast<long long>(t.size()) - 2 != shape->enc_domain[e])
        detail::fail(file, line.number,
                     "edge '" + t[1] + "' expects " + std::to_string(shape->enc_domain[e]) +
                         " entries, got " + std::to_string(t.size() - 2));
      for (std::size_t i = 2; i < t.size(); ++i)
        code.encoders[e].push_back(
            static_cast<int>(detail::parse_int(file, line.number, t[i])));
    } else if (t[0] == "dec") {
      if (!have_header) detail::fail(file, line.number, "'dec' before the 'code' header");
      if (have_dec) detail::fail(file, line.number, "duplicate decoder");
      have_dec = true;
      for (std::size_t i = 1; i < t.size(); ++i)
        code.decoder.push_back(static_cast<int>(detail::parse_int(file, line.number, t[i])));
    } else {
      detail::fail(file, line.number, "unknown directive '" + t[0] + "'");
    }
  }
  if (!have_header) throw ParseError(file + ": missing 'code n <n> k <k>' header");
  if (!have_dec) throw ParseError(file + ": missing decoder");
  for (std::size_t e = 0; e < net.edges.size(); ++e)
    if (!net.edges[e].infinite_bundle && !have_enc[e])
      throw ParseError(file + ": missing table for edge '" + net.edges[e].id + "'");
  try {
    check_shape(code, net, f, &*shape);
  } catch (const std::invalid_argument& err) {
    throw ParseError(file + ": " + err.what());
  }
  return code;
}

inline std::string serialize_code(const NetworkCode& code, const Network& net,
                                  const TargetFunction& f) {
  check_shape(code, net, f);
  Topology topo = analyze(net);
  std::ostringstream out;
  out << "code n " << code.n << " k " << code.k << "\n";
  for (int e : topo.edge_order) {
    if (net.edges[e].infinite_bundle) continue;
    out << "enc " << net.edges[e].id;
    for (int v : code.encoders[e]) out << " " << v;
    out << "\n";
  }
  out << "dec";
  for (int v : code.decoder) out << " " << v;
  out << "\n";
  return out.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << content;
}

inline Network load_network(const std::string& path) {
  return parse_network(read_file(path), path);
}
inline TargetFunction load_function(const std::string& path) {
  return parse_function(read_file(path), path);
}
inline NetworkCode load_code(const std::string& path, const Network& net,
                             const TargetFunction& f) {
  return parse_code(read_file(path), net, f, path);
}

}  // namespace fcomp
