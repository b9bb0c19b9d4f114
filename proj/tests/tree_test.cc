#include "fcomp/tree.hpp"

#include <vector>

#include "fcomp/instances.hpp"
#include "gtest/gtest.h"
#include "testutil.hpp"

namespace fcomp {
namespace {

Network single_edge_sum_tree() {
  return NetworkBuilder("sum-tree-thin")
      .edge_alphabet(2)
      .source("1")
      .source("2")
      .node("v")
      .sink("rho")
      .edge("t1", "1", "v")
      .edge("t2", "2", "v")
      .edge("t3", "v", "rho")
      .build();
}

TEST(IsMultiEdgeTree, Examples) {
  Network chain = NetworkBuilder("chain")
                      .edge_alphabet(2)
                      .source("1")
                      .node("v")
                      .sink("rho")
                      .edge("a", "1", "v")
                      .edge("b", "1", "v")
                      .edge("c", "v", "rho")
                      .build();
  EXPECT_TRUE(is_multi_edge_tree(chain));
  EXPECT_FALSE(is_multi_edge_tree(instance("n1").network));      // node 1 has two children
  EXPECT_FALSE(is_multi_edge_tree(instance("n2-prime").network));  // node 3 has two
  EXPECT_TRUE(is_multi_edge_tree(instance("xor-tree").network));
  EXPECT_TRUE(is_multi_edge_tree(instance("sum-tree").network));
}

TEST(Plan, XorTreeFeasibleAtUnitRate) {
  InstanceBundle xt = instance("xor-tree");
  TreePlan p = plan(xt.network, xt.function, 1, 1);
  EXPECT_TRUE(p.feasible);
  int v = xt.network.node_index("v");
  EXPECT_EQ(p.ancestor_sources[v], (std::vector<int>{0, 1}));
  EXPECT_EQ(p.class_count[v], 2);  // {(0,0),(1,1)} and {(0,1),(1,0)}
  ASSERT_TRUE(p.certificates[v].has_value());
  EXPECT_TRUE(p.certificates[v]->satisfied);
}

TEST(Plan, DoubleEdgeSumTreeFeasibleSingleEdgeNot) {
  InstanceBundle st = instance("sum-tree");
  TreePlan wide = plan(st.network, st.function, 1, 1);
  EXPECT_TRUE(wide.feasible);
  int v = st.network.node_index("v");
  EXPECT_EQ(wide.class_count[v], 3);  // 3 <= 2^2

  Network thin = single_edge_sum_tree();
  TargetFunction sum = builtin("arithmetic-sum", {2, 2});
  TreePlan p = plan(thin, sum, 1, 1);
  EXPECT_FALSE(p.feasible);  // 3 > 2
  EXPECT_EQ(p.failing_node, thin.node_index("v"));
  EXPECT_NE(p.failure.find("3^1"), std::string::npos);
}

TEST(Plan, RejectsNonTrees) {
  InstanceBundle n1 = instance("n1");
  EXPECT_THROW(plan(n1.network, n1.function, 1, 1), std::invalid_argument);
}

TEST(Construct, XorTreeUnitCode) {
  InstanceBundle xt = instance("xor-tree");
  NetworkCode code = construct(xt.network, xt.function, 1, 1);
  EXPECT_TRUE(verify(code, xt.network, xt.function).ok);
  // v transmits the class index; the decoder maps it to the parity.
  TreePlan p = plan(xt.network, xt.function, 1, 1);
  EXPECT_TRUE(check_representative_property(xt.network, xt.function, code, p));
}

TEST(Construct, SumTreeCodes) {
  InstanceBundle st = instance("sum-tree");
  for (auto [n, k] : std::vector<std::pair<int, int>>{{1, 1}, {2, 2}}) {
    NetworkCode code = construct(st.network, st.function, n, k);
    EXPECT_TRUE(verify(code, st.network, st.function).ok) << n << "," << k;
    TreePlan p = plan(st.network, st.function, n, k);
    EXPECT_TRUE(check_representative_property(st.network, st.function, code, p));
  }
  EXPECT_THROW(construct(st.network, st.function, 1, 2), std::invalid_argument);
}

TEST(Construct, SingleSourceChainClassesAreFibers) {
  Network chain = NetworkBuilder("chain")
                      .edge_alphabet(2)
                      .source("1")
                      .node("v")
                      .sink("rho")
                      .edge("a", "1", "v")
                      .edge("c", "v", "rho")
                      .build();
  TargetFunction f;
  f.arity = 1;
  f.input_size = 4;
  f.output_size = 2;
  f.table = {0, 1, 1, 0};
  // |image| = 2 <= 2^1 per node at (n,k) = (1,1).
  NetworkCode code = construct(chain, f, 1, 1);
  EXPECT_TRUE(verify(code, chain, f).ok);
  TreePlan p = plan(chain, f, 1, 1);
  EXPECT_EQ(p.class_count[chain.node_index("v")], 2);  // fibers of f
}

TEST(Construct, SplitTreeWithBundleFeeder) {
  // A source feeding through an infinite bundle still yields a working
  // code: the bundle carries the column and the interior node classifies.
  Network pre = NetworkBuilder("pre")
                    .edge_alphabet(2)
                    .source("1")
                    .source("2")
                    .sink("rho")
                    .edge("a", "2", "1")
                    .edge("c", "1", "rho")
                    .build();
  Network split = split_sources(pre);
  ASSERT_TRUE(validate(split).ok());
  ASSERT_TRUE(is_multi_edge_tree(split));
  TargetFunction f = builtin("mod-sum", {2, 2});
  NetworkCode code = construct(split, f, 1, 1);
  EXPECT_TRUE(verify(code, split, f).ok);
}

TEST(TreeReport, XorTreeCapacityOne) {
  InstanceBundle xt = instance("xor-tree");
  TreeReport rep = tree_capacity_report(xt.network, xt.function, std::pair{1, 1});
  ASSERT_TRUE(rep.bound.finite);
  EXPECT_DOUBLE_EQ(rep.bound.value, 1.0);
  EXPECT_TRUE(rep.feasible);
  EXPECT_TRUE(rep.verified);
}

TEST(TreeReport, SumTreeBoundAndSchedule) {
  InstanceBundle st = instance("sum-tree");
  TreeReport rep = tree_capacity_report(st.network, st.function, std::pair{2, 2});
  ASSERT_TRUE(rep.bound.finite);
  // The constraining cut is a single source edge: ratio 1 (beats the
  // 2/log2(3) of the double edge into the sink).
  EXPECT_DOUBLE_EQ(rep.bound.value, 1.0);
  EXPECT_EQ(rep.bound.exact.cut_size, 1);
  EXPECT_EQ(rep.bound.exact.classes, 2);
  // (2,2) is feasible: 3^2 = 9 <= 2^4 = 16 at node v, exactly certified.
  EXPECT_TRUE(rep.feasible);
  EXPECT_TRUE(rep.verified);
  int v = st.network.node_index("v");
  ASSERT_TRUE(rep.node_certificates[v].has_value());
  EXPECT_TRUE(rep.node_certificates[v]->satisfied);
  EXPECT_EQ(rep.node_certificates[v]->classes, 3);

  EXPECT_THROW(tree_capacity_report(instance("n1").network, instance("n1").function),
               std::invalid_argument);
}

TEST(Optimality, InfeasibleRatesAdmitNoCodeAtAll) {
  // Where the per-node certificate fails, the exhaustive oracle confirms
  // that no code of that (n,k) exists (full enumeration, no shortcuts).
  Network thin = single_edge_sum_tree();
  TargetFunction sum = builtin("arithmetic-sum", {2, 2});
  TreePlan p = plan(thin, sum, 1, 2);
  ASSERT_FALSE(p.feasible);  // 3^2 = 9 > 2^(1*1) at node v
  SearchOptions opts;
  opts.counting_shortcut = false;
  SearchOutcome out = exhaustive_search(thin, sum, 1, 2, opts);
  EXPECT_EQ(out.status, SearchStatus::none_enumerated);
  EXPECT_EQ(out.candidates_tested, 4096u);  // 16 * 16 * 16, fully enumerated
}

TEST(TreeProperty, NodeCutsHaveEqualWAndR) {
  // On multi-edge trees W and R agree on every node-induced cut set.
  testutil::Rng rng(401);
  int checked = 0;
  while (checked < 200) {
    Network tree = testutil::random_tree(rng);
    int q = rng.uniform(2, 3);
    tree.edge_alphabet = q;
    if (!is_multi_edge_tree(tree)) continue;
    TargetFunction f =
        testutil::random_function(rng, tree.source_count(), q, rng.uniform(2, 3));
    CutEnumOptions node_cuts;
    node_cuts.node_cuts_only = true;
    bool any = false;
    enumerate_cuts(tree, node_cuts, [&](const CutAnalysis& an) {
      any = true;
      EXPECT_TRUE(an.side_sources.empty());
      EXPECT_EQ(count_W_for_cut(f, tree, an.cut).count,
                count_R(f, an.separated_sources));
    });
    if (any) ++checked;
  }
}

TEST(TreeProperty, ConstructedCodesAlwaysVerify) {
  // Random trees and functions at every feasible (n,k) in a small grid:
  // the construction is zero-error and the representative claim holds.
  testutil::Rng rng(403);
  int built = 0;
  while (built < 60) {
    Network tree = testutil::random_tree(rng);
    TargetFunction f =
        testutil::random_function(rng, tree.source_count(), 2, rng.uniform(2, 4));
    for (int n = 1; n <= 2; ++n)
      for (int k = 1; k <= 2; ++k) {
        if (static_cast<long long>(std::pow(2.0, k * tree.source_count())) > 256) continue;
        TreePlan p = plan(tree, f, n, k);
        if (!p.feasible) continue;
        NetworkCode code = construct(tree, f, n, k);
        EXPECT_TRUE(verify(code, tree, f).ok)
            << tree.name << " n=" << n << " k=" << k;
        EXPECT_TRUE(check_representative_property(tree, f, code, p));
        ++built;
      }
  }
}

}  // namespace
}  // namespace fcomp
