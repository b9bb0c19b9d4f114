// fcomp: cut-set bounds and zero-error function-computing codes for
// directed acyclic networks.
//
// Exit codes: 0 success, 1 verification failure (counterexample printed),
// 2 malformed input, 3 budget refusal.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fcomp/fcomp.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCounterexample = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitBudget = 3;

std::string fixed6(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

struct InstanceArgs {
  std::string network_file;
  std::string function_file;
  std::string code_file;
  std::string instance_name;

  void attach(CLI::App* cmd, bool with_code = false) {
    cmd->add_option("--network", network_file, "network file");
    cmd->add_option("--function", function_file, "target function file");
    if (with_code) cmd->add_option("--code", code_file, "code file");
    cmd->add_option("--instance", instance_name,
                    "built-in instance (n1, n2, n2-prime, xor-tree, sum-tree)");
  }

  fcomp::InstanceBundle resolve(bool need_code = false) const {
    if (!instance_name.empty()) {
      if (!network_file.empty() || !function_file.empty() || !code_file.empty())
        throw fcomp::ParseError("--instance conflicts with explicit --network/--function/--code");
      fcomp::InstanceBundle b = fcomp::instance(instance_name);
      if (need_code && !b.code)
        throw fcomp::ParseError("instance '" + instance_name + "' has no bundled code");
      return b;
    }
    if (network_file.empty() || function_file.empty())
      throw fcomp::ParseError("need --network and --function (or --instance)");
    fcomp::InstanceBundle b;
    b.name = network_file;
    b.network = fcomp::load_network(network_file);
    b.function = fcomp::load_function(function_file);
    if (!code_file.empty())
      b.code = fcomp::load_code(code_file, b.network, b.function);
    else if (need_code)
      throw fcomp::ParseError("need --code (or an --instance with a bundled code)");
    return b;
  }

  /// For subcommands that only consume the topology.
  fcomp::Network resolve_network() const {
    if (!instance_name.empty()) {
      if (!network_file.empty())
        throw fcomp::ParseError("--instance conflicts with --network");
      return fcomp::instance(instance_name).network;
    }
    if (network_file.empty())
      throw fcomp::ParseError("need --network (or --instance)");
    return fcomp::load_network(network_file);
  }
};

void require_valid(const fcomp::Network& net) {
  fcomp::ValidationReport rep = fcomp::validate(net);
  if (rep.ok()) return;
  std::string msg = "network '" + net.name + "' is invalid:";
  for (const auto& e : rep.errors) msg += "\n  " + e;
  throw fcomp::ParseError(msg);
}

std::vector<std::string> edge_names(const fcomp::Network& net, const std::vector<int>& edges) {
  std::vector<std::string> out;
  for (int e : edges) out.push_back(net.edges[e].id);
  return out;
}

std::string brace_list(const std::vector<std::string>& items) {
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out + "}";
}

std::vector<int> one_based(const std::vector<int>& xs) {
  std::vector<int> out;
  for (int x : xs) out.push_back(x + 1);
  return out;
}

/// Parses "1,3" (1-based source indices) into 0-based positions.
std::vector<int> parse_index_set(const std::string& text, int arity) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    int v = 0;
    try {
      v = std::stoi(tok);
    } catch (const std::exception&) {
      throw fcomp::ParseError("bad index '" + tok + "' in '" + text + "'");
    }
    if (v < 1 || v > arity)
      throw fcomp::ParseError("index " + std::to_string(v) + " outside 1.." +
                              std::to_string(arity));
    out.push_back(v - 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> parse_symbols(const std::string& text, int alphabet) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    int v = 0;
    try {
      v = std::stoi(tok);
    } catch (const std::exception&) {
      throw fcomp::ParseError("bad symbol '" + tok + "'");
    }
    if (v < 0 || v >= alphabet)
      throw fcomp::ParseError("symbol " + std::to_string(v) + " outside the alphabet");
    out.push_back(v);
  }
  return out;
}

/// Parses "1 1 0; 0 1 1" into a k x s matrix.
fcomp::InputMatrix parse_matrix(const std::string& text, int s, int q) {
  std::vector<int> entries;
  int rows = 0;
  std::stringstream row_stream(text);
  std::string row;
  while (std::getline(row_stream, row, ';')) {
    std::stringstream cell(row);
    std::string tok;
    int cols = 0;
    while (cell >> tok) {
      int v = 0;
      try {
        v = std::stoi(tok);
      } catch (const std::exception&) {
        throw fcomp::ParseError("bad matrix entry '" + tok + "'");
      }
      if (v < 0 || v >= q) throw fcomp::ParseError("matrix entry outside the alphabet");
      entries.push_back(v);
      ++cols;
    }
    if (cols == 0) continue;
    if (cols != s)
      throw fcomp::ParseError("matrix row has " + std::to_string(cols) +
                              " entries, expected " + std::to_string(s));
    ++rows;
  }
  if (rows == 0) throw fcomp::ParseError("empty input matrix");
  return fcomp::InputMatrix(rows, s, std::move(entries));
}

json bound_json(const fcomp::InstanceBundle& inst, const fcomp::BoundReport& rep) {
  json j;
  j["schema"] = 1;
  j["kind"] = fcomp::to_string(rep.kind);
  j["network"] = inst.network.name;
  j["function"] = inst.function.name;
  j["finite"] = rep.finite;
  j["value"] = fixed6(rep.value);
  if (rep.finite) {
    j["exact"] = {{"cut_size", rep.exact.cut_size},
                  {"classes", rep.exact.classes},
                  {"log_base", rep.base}};
    j["witness"] = {{"cut", edge_names(inst.network, rep.witness_cut)},
                    {"separated_sources", one_based(rep.witness_separated)}};
    if (rep.kind == fcomp::BoundKind::min_cut)
      j["witness"]["context"] = rep.witness_context;
    if (rep.kind == fcomp::BoundKind::min_cut_k) {
      std::vector<std::string> nodes;
      for (int v : rep.witness_nodes) nodes.push_back(inst.network.nodes[v]);
      j["witness"]["node_set"] = nodes;
    }
  }
  j["cuts_considered"] = rep.cuts_considered;
  if (!rep.per_cut.empty()) {
    json rows = json::array();
    for (const auto& row : rep.per_cut)
      rows.push_back({{"cut", edge_names(inst.network, row.cut)},
                      {"size", row.size},
                      {"classes", row.classes},
                      {"ratio", fixed6(row.ratio)},
                      {"separated_sources", one_based(row.separated)}});
    j["per_cut"] = rows;
  }
  if (!inst.note.empty()) j["note"] = inst.note;
  return j;
}

void print_bound_text(const fcomp::InstanceBundle& inst, const fcomp::BoundReport& rep) {
  std::printf("%s(%s, %s) = %s\n", fcomp::to_string(rep.kind), inst.network.name.c_str(),
              inst.function.name.c_str(), fixed6(rep.value).c_str());
  if (rep.finite) {
    std::printf("  exact: |C| = %d, classes = %lld, value = %d / log_%d(%lld)\n",
                rep.exact.cut_size, rep.exact.classes, rep.exact.cut_size, rep.base,
                rep.exact.classes);
    std::printf("  witness cut = %s\n",
                brace_list(edge_names(inst.network, rep.witness_cut)).c_str());
    std::string sep;
    for (int i : rep.witness_separated) sep += (sep.empty() ? "" : ",") + std::to_string(i + 1);
    std::printf("  separated sources I = {%s}\n", sep.c_str());
    if (rep.kind == fcomp::BoundKind::min_cut && !rep.witness_context.empty()) {
      std::string c;
      for (int v : rep.witness_context) c += (c.empty() ? "" : ",") + std::to_string(v);
      std::printf("  maximizing context c* = (%s)\n", c.c_str());
    }
    if (rep.kind == fcomp::BoundKind::min_cut_k) {
      std::vector<std::string> nodes;
      for (int v : rep.witness_nodes) nodes.push_back(inst.network.nodes[v]);
      std::printf("  witness node set U = %s\n", brace_list(nodes).c_str());
    }
  } else {
    std::printf("  no enumerated cut constrains the rate (value = +inf)\n");
  }
  std::printf("  cuts considered: %lld\n", rep.cuts_considered);
  for (const auto& row : rep.per_cut) {
    std::printf("  cut %-24s size %d  classes %lld  ratio %s\n",
                brace_list(edge_names(inst.network, row.cut)).c_str(), row.size,
                row.classes, fixed6(row.ratio).c_str());
  }
  if (!inst.note.empty()) std::printf("  note: %s\n", inst.note.c_str());
}

fcomp::BoundReport run_bound_kind(const std::string& kind, const fcomp::InstanceBundle& inst,
                                  const fcomp::BoundOptions& opts) {
  if (kind == "min-cut") return fcomp::min_cut_bound(inst.network, inst.function, opts);
  if (kind == "min-cut-a") return fcomp::min_cut_A(inst.network, inst.function, opts);
  if (kind == "min-cut-k") return fcomp::min_cut_K(inst.network, inst.function, opts);
  if (kind == "prop2") return fcomp::prop2_bound(inst.network, inst.function, opts);
  if (kind == "prop1") return fcomp::prop1_capacity(inst.network, inst.function);
  throw fcomp::ParseError("unknown bound kind '" + kind + "'");
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const fcomp::BudgetError*>(&e)) return kExitBudget;
  return kExitBadInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cut-set bounds and zero-error function-computing network codes"};
  app.require_subcommand(1);
  int threads = 0;  // 0 = all available
  app.add_option("--threads", threads, "worker threads (0 = all available)")
      ->capture_default_str();

  // ---- bound ----
  auto* bound_cmd = app.add_subcommand("bound", "compute one cut-set bound");
  InstanceArgs bound_args;
  bound_args.attach(bound_cmd);
  std::string bound_kind = "min-cut";
  bool bound_irreducible = false, bound_all_cuts = false, bound_json_flag = false;
  std::optional<int> bound_max_cut;
  bound_cmd->add_option("--kind", bound_kind,
                        "min-cut | min-cut-a | min-cut-k | prop2 | prop1");
  bound_cmd->add_flag("--irreducible", bound_irreducible,
                      "enumerate only irreducible cuts (same minimum)");
  bound_cmd->add_option("--max-cut-size", bound_max_cut, "skip larger cuts");
  bound_cmd->add_flag("--all-cuts", bound_all_cuts, "include the per-cut table");
  bound_cmd->add_flag("--json", bound_json_flag, "machine-readable output");

  // ---- compare ----
  auto* compare_cmd = app.add_subcommand("compare", "run every applicable bound");
  InstanceArgs compare_args;
  compare_args.attach(compare_cmd);
  bool compare_json_flag = false;
  compare_cmd->add_flag("--json", compare_json_flag, "machine-readable output");

  // ---- classes ----
  auto* classes_cmd = app.add_subcommand("classes", "print an equivalence partition");
  InstanceArgs classes_args;
  classes_args.attach(classes_cmd);
  std::string classes_I, classes_J, classes_c;
  bool classes_json_flag = false;
  classes_cmd->add_option("--index-set", classes_I, "I as 1-based sources, e.g. 1,3")
      ->required();
  classes_cmd->add_option("--context-set", classes_J, "J as 1-based sources");
  classes_cmd->add_option("--context", classes_c, "context symbols for J, e.g. 1,1");
  classes_cmd->add_flag("--json", classes_json_flag, "machine-readable output");

  // ---- verify ----
  auto* verify_cmd = app.add_subcommand("verify", "check a code on every input");
  InstanceArgs verify_args;
  verify_args.attach(verify_cmd, /*with_code=*/true);
  bool verify_json_flag = false;
  verify_cmd->add_flag("--json", verify_json_flag, "machine-readable output");

  // ---- simulate ----
  auto* sim_cmd = app.add_subcommand("simulate", "execute a code on one input matrix");
  InstanceArgs sim_args;
  sim_args.attach(sim_cmd, /*with_code=*/true);
  std::string sim_input;
  bool sim_json_flag = false;
  sim_cmd->add_option("--input", sim_input, "k x s matrix, rows ';'-separated")->required();
  sim_cmd->add_flag("--json", sim_json_flag, "machine-readable output");

  // ---- search ----
  auto* search_cmd = app.add_subcommand("search", "exhaustive (n,k) code search");
  InstanceArgs search_args;
  search_args.attach(search_cmd);
  int search_n = 1, search_k = 1;
  unsigned long long search_budget = 1ULL << 36;
  bool search_full = false, search_prune = false, search_json_flag = false;
  search_cmd->add_option("--n", search_n, "block length per edge")->required();
  search_cmd->add_option("--k", search_k, "computations per block")->required();
  search_cmd->add_option("--budget", search_budget, "max encoder assignments");
  search_cmd->add_flag("--full-enumeration", search_full,
                       "disable the sink counting shortcut");
  search_cmd->add_flag("--canonical-prune", search_prune,
                       "canonicalize the first source table");
  search_cmd->add_flag("--json", search_json_flag, "machine-readable output");

  // ---- tree ----
  auto* tree_cmd = app.add_subcommand("tree", "tree achievability construction");
  InstanceArgs tree_args;
  tree_args.attach(tree_cmd);
  int tree_n = 1, tree_k = 1;
  std::string tree_emit;
  bool tree_report = false, tree_json_flag = false;
  tree_cmd->add_option("--n", tree_n, "block length per edge");
  tree_cmd->add_option("--k", tree_k, "computations per block");
  tree_cmd->add_option("--emit-code", tree_emit, "write the constructed code here");
  tree_cmd->add_flag("--report", tree_report, "print the capacity report");
  tree_cmd->add_flag("--json", tree_json_flag, "machine-readable output");

  // ---- split-sources ----
  auto* split_cmd = app.add_subcommand("split-sources",
                                       "rewrite sources that have incoming edges");
  InstanceArgs split_args;
  split_args.attach(split_cmd);
  std::string split_output;
  split_cmd->add_option("--output", split_output, "output file (default: stdout)");

  // ---- instance ----
  auto* inst_cmd = app.add_subcommand("instance", "inspect or emit a built-in instance");
  std::string inst_name, inst_dir = ".";
  bool inst_emit = false;
  inst_cmd->add_option("name", inst_name, "instance name")->required();
  inst_cmd->add_flag("--emit", inst_emit, "write network/function/code files");
  inst_cmd->add_option("--dir", inst_dir, "output directory for --emit");

  // ---- validate ----
  auto* validate_cmd = app.add_subcommand("validate", "check network invariants");
  std::string validate_file;
  validate_cmd->add_option("--network", validate_file, "network file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    fcomp::BoundOptions bound_opts;
    bound_opts.threads = threads;

    if (*bound_cmd) {
      fcomp::InstanceBundle inst = bound_args.resolve();
      require_valid(inst.network);
      bound_opts.cuts.irreducible_only = bound_irreducible;
      bound_opts.cuts.max_cut_size = bound_max_cut;
      bound_opts.per_cut_table = bound_all_cuts;
      fcomp::BoundReport rep = run_bound_kind(bound_kind, inst, bound_opts);
      if (bound_json_flag) {
        json j = bound_json(inst, rep);
        j["command"] = "bound";
        std::printf("%s\n", j.dump(2).c_str());
      } else
        print_bound_text(inst, rep);
      return kExitOk;
    }

    if (*compare_cmd) {
      fcomp::InstanceBundle inst = compare_args.resolve();
      require_valid(inst.network);
      std::vector<std::string> kinds = {"min-cut", "min-cut-k", "min-cut-a", "prop2"};
      if (inst.network.source_count() == 1) kinds.push_back("prop1");
      json results = json::array();
      if (!compare_json_flag)
        std::printf("%-10s %-12s %-22s %-5s %s\n", "kind", "value", "witness", "|C|",
                    "classes");
      for (const auto& kind : kinds) {
        fcomp::BoundReport rep = run_bound_kind(kind, inst, bound_opts);
        if (compare_json_flag) {
          results.push_back(bound_json(inst, rep));
        } else {
          std::printf("%-10s %-12s %-22s %-5s %s\n", kind.c_str(),
                      fixed6(rep.value).c_str(),
                      rep.finite
                          ? brace_list(edge_names(inst.network, rep.witness_cut)).c_str()
                          : "-",
                      rep.finite ? std::to_string(rep.exact.cut_size).c_str() : "-",
                      rep.finite ? std::to_string(rep.exact.classes).c_str() : "-");
        }
      }
      json code_entry;
      if (inst.code) {
        fcomp::VerifyReport vr = fcomp::verify(*inst.code, inst.network, inst.function);
        double rate = static_cast<double>(inst.code->k) / inst.code->n *
                      std::log2(static_cast<double>(inst.function.input_size)) /
                      std::log2(static_cast<double>(inst.network.edge_alphabet));
        code_entry = {{"n", inst.code->n},
                      {"k", inst.code->k},
                      {"rate", fixed6(rate)},
                      {"verified", vr.ok},
                      {"inputs_checked", vr.inputs_checked}};
        if (!compare_json_flag)
          std::printf("%-10s %-12s (%d,%d) code %s on %lld/%lld inputs\n", "code-rate",
                      fixed6(rate).c_str(), inst.code->n, inst.code->k,
                      vr.ok ? "verified" : "FAILED", vr.inputs_checked,
                      vr.inputs_checked);
      }
      if (compare_json_flag) {
        json j;
        j["schema"] = 1;
        j["command"] = "compare";
        j["network"] = inst.network.name;
        j["function"] = inst.function.name;
        j["results"] = results;
        if (!code_entry.is_null()) j["bundled_code"] = code_entry;
        if (!inst.note.empty()) j["note"] = inst.note;
        std::printf("%s\n", j.dump(2).c_str());
      } else if (!inst.note.empty()) {
        std::printf("note: %s\n", inst.note.c_str());
      }
      return kExitOk;
    }

    if (*classes_cmd) {
      fcomp::InstanceBundle inst = classes_args.resolve();
      const fcomp::TargetFunction& f = inst.function;
      std::vector<int> I = parse_index_set(classes_I, f.arity);
      std::vector<int> J = parse_index_set(classes_J, f.arity);
      std::vector<int> c = parse_symbols(classes_c, f.input_size);
      fcomp::EquivalencePartition part = fcomp::partition(f, I, J, c);
      std::vector<std::vector<std::string>> members(part.class_count);
      std::vector<int> digits(I.size());
      for (long long a = 0; a < static_cast<long long>(part.class_of.size()); ++a) {
        fcomp::unpack_digits(a, f.input_size, digits);
        std::string tuple = "(";
        for (std::size_t t = 0; t < digits.size(); ++t)
          tuple += (t ? "," : "") + std::to_string(digits[t]);
        members[part.class_of[a]].push_back(tuple + ")");
      }
      if (classes_json_flag) {
        json j;
        j["schema"] = 1;
        j["command"] = "classes";
        j["function"] = f.name;
        j["index_set"] = one_based(I);
        j["context_set"] = one_based(J);
        j["context"] = c;
        j["class_count"] = part.class_count;
        j["class_of"] = part.class_of;
        json cls = json::array();
        for (const auto& m : members) cls.push_back(m);
        j["classes"] = cls;
        std::printf("%s\n", j.dump(2).c_str());
      } else {
        std::string is, js, cs;
        for (int i : I) is += (is.empty() ? "" : ",") + std::to_string(i + 1);
        for (int j2 : J) js += (js.empty() ? "" : ",") + std::to_string(j2 + 1);
        for (int v : c) cs += (cs.empty() ? "" : ",") + std::to_string(v);
        std::printf("W = %lld classes under (I={%s}, J={%s}, c=(%s))\n", part.class_count,
                    is.c_str(), js.c_str(), cs.c_str());
        for (long long cls = 0; cls < part.class_count; ++cls) {
          std::string line;
          for (const auto& m : members[cls]) line += (line.empty() ? "" : ",") + m;
          std::printf("  class %lld: %s\n", cls, line.c_str());
        }
      }
      return kExitOk;
    }

    if (*verify_cmd) {
      fcomp::InstanceBundle inst = verify_args.resolve(/*need_code=*/true);
      fcomp::VerifyOptions vopts;
      vopts.threads = threads;
      fcomp::VerifyReport rep = fcomp::verify(*inst.code, inst.network, inst.function, vopts);
      if (verify_json_flag) {
        json j;
        j["schema"] = 1;
        j["command"] = "verify";
        j["network"] = inst.network.name;
        j["function"] = inst.function.name;
        j["n"] = inst.code->n;
        j["k"] = inst.code->k;
        j["ok"] = rep.ok;
        j["inputs_checked"] = rep.inputs_checked;
        if (!rep.ok) {
          j["counterexample"] = rep.counterexample->entries;
          j["expected"] = rep.expected;
          j["actual"] = rep.actual;
        }
        std::printf("%s\n", j.dump(2).c_str());
      } else if (rep.ok) {
        std::printf("%lld/%lld inputs correct\n", rep.inputs_checked, rep.inputs_checked);
      } else {
        std::printf("counterexample found:\n");
        for (int r = 0; r < rep.counterexample->rows; ++r) {
          std::string row;
          for (int cidx = 0; cidx < rep.counterexample->cols; ++cidx)
            row += (cidx ? " " : "") + std::to_string(rep.counterexample->at(r, cidx));
          std::printf("  x^%d = [%s]\n", r + 1, row.c_str());
        }
        std::string want, got;
        for (int v : rep.expected) want += (want.empty() ? "" : ",") + std::to_string(v);
        for (int v : rep.actual) got += (got.empty() ? "" : ",") + std::to_string(v);
        std::printf("  expected f = (%s), decoded psi = (%s)\n", want.c_str(), got.c_str());
      }
      return rep.ok ? kExitOk : kExitCounterexample;
    }

    if (*sim_cmd) {
      fcomp::InstanceBundle inst = sim_args.resolve(/*need_code=*/true);
      fcomp::InputMatrix x =
          parse_matrix(sim_input, inst.function.arity, inst.function.input_size);
      if (x.rows != inst.code->k)
        throw fcomp::ParseError("input has " + std::to_string(x.rows) +
                                " rows but the code has k = " + std::to_string(inst.code->k));
      fcomp::ExecutionTrace tr = fcomp::execute(*inst.code, inst.network, inst.function, x);
      fcomp::Topology topo = fcomp::analyze(inst.network);
      if (sim_json_flag) {
        json j;
        j["schema"] = 1;
        j["command"] = "simulate";
        json blocks = json::object();
        for (int e : topo.edge_order)
          blocks[inst.network.edges[e].id] = tr.edge_blocks[e];
        j["edge_blocks"] = blocks;
        j["output"] = tr.output;
        std::printf("%s\n", j.dump(2).c_str());
      } else {
        for (int e : topo.edge_order)
          std::printf("%s = %d\n", inst.network.edges[e].id.c_str(), tr.edge_blocks[e]);
        std::string out;
        for (int v : tr.output) out += (out.empty() ? "" : ",") + std::to_string(v);
        std::printf("psi = (%s)\n", out.c_str());
      }
      return kExitOk;
    }

    if (*search_cmd) {
      fcomp::InstanceBundle inst = search_args.resolve();
      require_valid(inst.network);
      fcomp::SearchOptions sopts;
      sopts.max_candidates = search_budget;
      sopts.counting_shortcut = !search_full;
      sopts.canonical_first_table = search_prune;
      sopts.threads = threads;
      fcomp::SearchOutcome out =
          fcomp::exhaustive_search(inst.network, inst.function, search_n, search_k, sopts);
      if (search_json_flag) {
        json j;
        j["schema"] = 1;
        j["command"] = "search";
        j["n"] = search_n;
        j["k"] = search_k;
        j["status"] = out.status == fcomp::SearchStatus::found ? "found"
                      : out.status == fcomp::SearchStatus::none_enumerated
                          ? "none-enumerated"
                          : "none-by-counting";
        if (out.status == fcomp::SearchStatus::found)
          j["found_index"] = out.found_index;
        if (out.status == fcomp::SearchStatus::none_enumerated)
          j["candidates_tested"] = out.candidates_tested;
        if (!out.note.empty()) j["note"] = out.note;
        if (out.code)
          j["code"] = fcomp::serialize_code(*out.code, inst.network, inst.function);
        std::printf("%s\n", j.dump(2).c_str());
      } else if (out.status == fcomp::SearchStatus::found) {
        std::printf("# first working assignment: candidate %llu in enumeration order\n",
                    out.found_index);
        std::fputs(fcomp::serialize_code(*out.code, inst.network, inst.function).c_str(),
                   stdout);
      } else if (out.status == fcomp::SearchStatus::none_enumerated) {
        std::printf("no (%d,%d) code exists: all %llu encoder assignments enumerated\n",
                    search_n, search_k, out.candidates_tested);
      } else {
        std::printf("no (%d,%d) code exists: %s\n", search_n, search_k, out.note.c_str());
      }
      return kExitOk;
    }

    if (*tree_cmd) {
      fcomp::InstanceBundle inst = tree_args.resolve();
      require_valid(inst.network);
      if (tree_report || tree_json_flag) {
        fcomp::TreeReport rep = fcomp::tree_capacity_report(
            inst.network, inst.function, std::pair{tree_n, tree_k}, bound_opts);
        if (tree_json_flag) {
          json j;
          j["schema"] = 1;
          j["command"] = "tree";
          j["bound"] = bound_json(inst, rep.bound);
          j["n"] = tree_n;
          j["k"] = tree_k;
          j["feasible"] = rep.feasible;
          if (!rep.failure.empty()) j["failure"] = rep.failure;
          j["verified"] = rep.verified;
          std::printf("%s\n", j.dump(2).c_str());
        } else {
          print_bound_text(inst, rep.bound);
          if (rep.feasible)
            std::printf("(%d,%d) construction: %s\n", tree_n, tree_k,
                        rep.verified ? "verified" : "FAILED VERIFICATION");
          else
            std::printf("(%d,%d) infeasible: %s\n", tree_n, tree_k, rep.failure.c_str());
        }
        if (rep.feasible && !tree_emit.empty())
          fcomp::write_file(tree_emit,
                            fcomp::serialize_code(*rep.code, inst.network, inst.function));
        return kExitOk;
      }
      fcomp::NetworkCode code =
          fcomp::construct(inst.network, inst.function, tree_n, tree_k);
      std::string text = fcomp::serialize_code(code, inst.network, inst.function);
      if (!tree_emit.empty()) {
        fcomp::write_file(tree_emit, text);
        std::printf("wrote a verified (%d,%d) code to %s\n", tree_n, tree_k,
                    tree_emit.c_str());
      } else {
        std::fputs(text.c_str(), stdout);
      }
      return kExitOk;
    }

    if (*split_cmd) {
      fcomp::Network out = fcomp::split_sources(split_args.resolve_network());
      std::string text = fcomp::serialize_network(out);
      if (split_output.empty())
        std::fputs(text.c_str(), stdout);
      else
        fcomp::write_file(split_output, text);
      return kExitOk;
    }

    if (*inst_cmd) {
      fcomp::InstanceBundle b = fcomp::instance(inst_name);
      if (inst_emit) {
        std::string base = inst_dir + "/" + b.name;
        fcomp::write_file(base + ".network", fcomp::serialize_network(b.network));
        fcomp::write_file(base + ".function", fcomp::serialize_function(b.function));
        std::printf("wrote %s.network and %s.function\n", base.c_str(), base.c_str());
        if (b.code) {
          fcomp::write_file(base + ".code",
                            fcomp::serialize_code(*b.code, b.network, b.function));
          std::printf("wrote %s.code\n", base.c_str());
        }
      } else {
        std::printf("instance %s: %zu nodes, %zu edges, %d sources, |A| = %d, |B| = %d\n",
                    b.name.c_str(), b.network.nodes.size(), b.network.edges.size(),
                    b.network.source_count(), b.function.input_size,
                    b.network.edge_alphabet);
        std::printf("function %s: arity %d, output alphabet %d\n", b.function.name.c_str(),
                    b.function.arity, b.function.output_size);
        if (b.code) std::printf("bundled code: (n,k) = (%d,%d)\n", b.code->n, b.code->k);
        if (!b.note.empty()) std::printf("note: %s\n", b.note.c_str());
      }
      return kExitOk;
    }

    if (*validate_cmd) {
      fcomp::Network net = fcomp::load_network(validate_file);
      fcomp::ValidationReport rep = fcomp::validate(net);
      if (rep.ok()) {
        std::printf("network '%s' is valid\n", net.name.c_str());
        return kExitOk;
      }
      for (const auto& e : rep.errors) std::printf("invalid: %s\n", e.c_str());
      return kExitBadInput;
    }
  } catch (const fcomp::BudgetError& e) {
    std::fprintf(stderr, "budget refusal: %s\n", e.what());
    return kExitBudget;
  } catch (const fcomp::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  }
  return kExitOk;
}
