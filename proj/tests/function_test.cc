#include "fcomp/function.hpp"

#include <random>
#include <vector>

#include "gtest/gtest.h"

namespace fcomp {
namespace {

TEST(Evaluate, ProductPlusMod2) {
  TargetFunction f = builtin("product-plus-mod2");
  EXPECT_EQ(f.arity, 3);
  EXPECT_EQ(f.input_size, 2);
  EXPECT_EQ(f.output_size, 2);
  EXPECT_EQ(f.table.size(), 8u);
  std::vector<int> row = {1, 1, 0};
  EXPECT_EQ(evaluate(f, row), 1);
  row = {1, 1, 1};
  EXPECT_EQ(evaluate(f, row), 0);  // 1*1+1 = 0 mod 2
  row = {0, 1, 1};
  EXPECT_EQ(evaluate(f, row), 1);
}

TEST(Evaluate, ArithmeticSumAndIdentity) {
  TargetFunction sum = builtin("arithmetic-sum", {3, 2});
  EXPECT_EQ(sum.output_size, 4);
  std::vector<int> row = {1, 1, 1};
  EXPECT_EQ(evaluate(sum, row), 3);
  TargetFunction id = builtin("identity", {0, 4});
  EXPECT_EQ(id.arity, 1);
  EXPECT_EQ(id.output_size, 4);
  row = {2};
  EXPECT_EQ(evaluate(id, row), 2);
  EXPECT_EQ(id.table, (std::vector<int>{0, 1, 2, 3}));
}

TEST(Evaluate, MaxAndModSum) {
  TargetFunction mx = builtin("max", {2, 3});
  std::vector<int> row = {1, 2};
  EXPECT_EQ(evaluate(mx, row), 2);
  TargetFunction xs = builtin("mod-sum", {2, 2});
  row = {1, 1};
  EXPECT_EQ(evaluate(xs, row), 0);
}

TEST(Evaluate, RejectsBadInput) {
  TargetFunction f = builtin("product-plus-mod2");
  std::vector<int> short_row = {1, 1};
  EXPECT_THROW(evaluate(f, short_row), std::invalid_argument);
  std::vector<int> out_of_range = {1, 1, 2};
  EXPECT_THROW(evaluate(f, out_of_range), std::invalid_argument);
  EXPECT_THROW(builtin("no-such-family"), std::invalid_argument);
}

TEST(EvaluateBlock, MatchesRowWise) {
  TargetFunction f = builtin("product-plus-mod2");
  InputMatrix x(2, 3, {1, 1, 0, 0, 1, 1});
  EXPECT_EQ(evaluate_block(f, x), (std::vector<int>{1, 1}));

  TargetFunction id = builtin("identity", {0, 2});
  InputMatrix col(3, 1, {0, 1, 0});
  EXPECT_EQ(evaluate_block(id, col), (std::vector<int>{0, 1, 0}));
}

TEST(EvaluateBlock, RandomAgreesWithEvaluate) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    int s = 1 + rng() % 3, q = 2 + rng() % 2, m = 2 + rng() % 3;
    TargetFunction f;
    f.arity = s;
    f.input_size = q;
    f.output_size = m;
    f.table.resize(f.domain_size());
    for (auto& v : f.table) v = rng() % m;
    int k = 1 + rng() % 3;
    InputMatrix x(k, s, std::vector<int>(k * s));
    for (auto& v : x.entries) v = rng() % q;
    std::vector<int> block = evaluate_block(f, x);
    for (int r = 0; r < k; ++r) {
      std::vector<int> row = x.row(r);
      EXPECT_EQ(block[r], evaluate(f, row));
    }
  }
}

TEST(Image, KnownImages) {
  EXPECT_EQ(image(builtin("product-plus-mod2")), (std::vector<int>{0, 1}));
  EXPECT_EQ(image(builtin("arithmetic-sum", {3, 2})), (std::vector<int>{0, 1, 2, 3}));
  TargetFunction constant;
  constant.arity = 2;
  constant.input_size = 2;
  constant.output_size = 3;
  constant.table = {0, 0, 0, 0};
  EXPECT_EQ(image(constant), (std::vector<int>{0}));
}

TEST(Image, BoundedBySizes) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    TargetFunction f;
    f.arity = 1 + rng() % 3;
    f.input_size = 2 + rng() % 2;
    f.output_size = 1 + rng() % 4;
    f.table.resize(f.domain_size());
    for (auto& v : f.table) v = rng() % f.output_size;
    auto img = image(f);
    EXPECT_LE(static_cast<long long>(img.size()),
              std::min<long long>(f.domain_size(), f.output_size));
  }
}

TEST(Check, RejectsMalformedTables) {
  TargetFunction f;
  f.arity = 2;
  f.input_size = 2;
  f.output_size = 2;
  f.table = {0, 1, 0};  // one entry short
  EXPECT_THROW(check(f), std::invalid_argument);
  f.table = {0, 1, 0, 2};  // entry outside the output alphabet
  EXPECT_THROW(check(f), std::invalid_argument);
  f.table = {0, 1, 0, 1};
  EXPECT_NO_THROW(check(f));
}

TEST(InputMatrix, RankRoundTrip) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    int k = 1 + rng() % 3, s = 1 + rng() % 3, q = 2 + rng() % 3;
    long long space = 1;
    for (int i = 0; i < k * s; ++i) space *= q;
    long long r = rng() % space;
    InputMatrix x = InputMatrix::from_rank(r, k, s, q);
    EXPECT_EQ(x.rank(q), r);
  }
  // Row-major, first entry most significant: rank 1 sets the last entry.
  InputMatrix x = InputMatrix::from_rank(1, 2, 2, 2);
  EXPECT_EQ(x.at(1, 1), 1);
  EXPECT_EQ(x.at(0, 0) + x.at(0, 1) + x.at(1, 0), 0);
}

}  // namespace
}  // namespace fcomp
