#include "fcomp/io.hpp"

#include <string>

#include "fcomp/instances.hpp"
#include "gtest/gtest.h"
#include "testutil.hpp"

namespace fcomp {
namespace {

TEST(NetworkFormat, ParseBasics) {
  std::string text = R"(# the three-source example
network n1
edge-alphabet 2
source 1
source 2
source 3
node v
sink rho
edge e1 1 v
edge e2 2 v
edge e3 3 v
edge e4 1 rho
edge e5 2 rho
edge e6 3 rho
edge e7 v rho
)";
  Network net = parse_network(text, "n1.network");
  EXPECT_TRUE(net == instance("n1").network);
}

TEST(NetworkFormat, InfiniteBundleFlag) {
  Network net = parse_network(
      "source a\nnode b\nsink t\nedge x a b inf\nedge y b t\n");
  EXPECT_TRUE(net.edges[0].infinite_bundle);
  EXPECT_FALSE(net.edges[1].infinite_bundle);
}

TEST(NetworkFormat, ErrorsNameFileLineAndToken) {
  try {
    parse_network("source a\nsink t\nedgy x a t\n", "broken.network");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("broken.network:3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("edgy"), std::string::npos) << msg;
  }
  EXPECT_THROW(parse_network("sink a\nsink b\n"), ParseError);
  EXPECT_THROW(parse_network("edge-alphabet 1\n"), ParseError);
  EXPECT_THROW(parse_network("edge e a\n"), ParseError);
  EXPECT_THROW(parse_network("edge e a b\nedge e a b\n"), ParseError);
}

TEST(NetworkFormat, RoundTripAllInstances) {
  for (const auto& name : instance_names()) {
    Network net = instance(name).network;
    Network again = parse_network(serialize_network(net), name);
    EXPECT_TRUE(net == again) << name;
  }
}

TEST(FunctionFormat, ExplicitTable) {
  std::string text = R"(function parity3
arity 3
input-alphabet 2
output-alphabet 2
table 0 1 1 0 1 0 0 1
)";
  TargetFunction f = parse_function(text, "parity.function");
  EXPECT_EQ(f.name, "parity3");
  EXPECT_EQ(f.arity, 3);
  std::vector<int> row = {1, 0, 1};
  EXPECT_EQ(evaluate(f, row), 0);
}

TEST(FunctionFormat, BuiltinLine) {
  TargetFunction f = parse_function("function add\nbuiltin arithmetic-sum s=3 q=2\n");
  EXPECT_TRUE(f == builtin("arithmetic-sum", {3, 2}));
  EXPECT_EQ(f.name, "add");
  EXPECT_THROW(parse_function("builtin arithmetic-sum s=3 q=2\narity 3\n"), ParseError);
  EXPECT_THROW(parse_function("builtin no-such\n"), ParseError);
  EXPECT_THROW(parse_function("function f\narity 2\ninput-alphabet 2\ntable 0 1 0\n"),
               ParseError);
}

TEST(FunctionFormat, OutputAlphabetDefaultsToMaxEntry) {
  TargetFunction f =
      parse_function("arity 1\ninput-alphabet 3\ntable 2 0 1\n");
  EXPECT_EQ(f.output_size, 3);
}

TEST(FunctionFormat, RoundTripIsBitExact) {
  testutil::Rng rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    TargetFunction f = testutil::random_function(rng, rng.uniform(1, 3),
                                                 rng.uniform(2, 4), rng.uniform(1, 5));
    f.name = "t" + std::to_string(trial);
    TargetFunction again = parse_function(serialize_function(f));
    EXPECT_TRUE(f == again);
    EXPECT_EQ(f.table, again.table);
  }
}

TEST(CodeFormat, RoundTripsBundledN1Code) {
  InstanceBundle n1 = instance("n1");
  std::string text = serialize_code(*n1.code, n1.network, n1.function);
  NetworkCode again = parse_code(text, n1.network, n1.function, "n1.code");
  EXPECT_EQ(again.n, 1);
  EXPECT_EQ(again.k, 2);
  EXPECT_EQ(again.encoders, n1.code->encoders);
  EXPECT_EQ(again.decoder, n1.code->decoder);
  EXPECT_TRUE(verify(again, n1.network, n1.function).ok);
}

TEST(CodeFormat, EncLinesFollowCanonicalEdgeOrder) {
  InstanceBundle n1 = instance("n1");
  std::string text = serialize_code(*n1.code, n1.network, n1.function);
  std::vector<std::string> expect = {"e1", "e4", "e2", "e5", "e3", "e6", "e7"};
  std::size_t pos = 0;
  for (const auto& id : expect) {
    std::size_t at = text.find("enc " + id + " ");
    ASSERT_NE(at, std::string::npos) << id;
    EXPECT_GE(at, pos);
    pos = at;
  }
}

TEST(CodeFormat, ShapeErrorsAreParseErrors) {
  InstanceBundle n1 = instance("n1");
  EXPECT_THROW(parse_code("dec 0\n", n1.network, n1.function), ParseError);
  EXPECT_THROW(parse_code("code n 1 k 2\ndec 0 0\n", n1.network, n1.function), ParseError);
  // Wrong entry count on a table line.
  std::string text = serialize_code(*n1.code, n1.network, n1.function);
  std::string broken = text;
  broken.replace(broken.find("enc e1 0 0 1 1"), 14, "enc e1 0 0 1");
  EXPECT_THROW(parse_code(broken, n1.network, n1.function), ParseError);
  // Bundle edges never carry tables.
  Network n2p = instance("n2-prime").network;
  TargetFunction sum = builtin("arithmetic-sum", {3, 2});
  EXPECT_THROW(
      parse_code("code n 1 k 1\nenc b1 0 0\n", n2p, sum, "bad.code"), ParseError);
}

TEST(CodeFormat, BundleEdgesSkippedInSerializedForm) {
  // A verified code on n2-prime serializes without lines for b1, b2 and
  // parses back identically.
  Network n2p = instance("n2-prime").network;
  TargetFunction f = builtin("mod-sum", {3, 2});
  NetworkCode code;
  code.n = 1;
  code.k = 1;
  code.encoders.resize(6);
  code.encoders[n2p.edge_index("e1")] = {0, 1};
  code.encoders[n2p.edge_index("e3")] = {0, 1};
  code.encoders[n2p.edge_index("e2")] = {0, 1, 1, 0};
  code.encoders[n2p.edge_index("e4")] = {0, 1, 0, 1};
  code.decoder = {0, 1, 1, 0};
  ASSERT_TRUE(verify(code, n2p, f).ok);
  std::string text = serialize_code(code, n2p, f);
  EXPECT_EQ(text.find("b1"), std::string::npos);
  NetworkCode again = parse_code(text, n2p, f);
  EXPECT_EQ(again.encoders, code.encoders);
  EXPECT_TRUE(verify(again, n2p, f).ok);
}

TEST(Files, ReadWriteRoundTrip) {
  std::string path = testing::TempDir() + "/fcomp_io_test.network";
  Network net = instance("xor-tree").network;
  write_file(path, serialize_network(net));
  Network again = load_network(path);
  EXPECT_TRUE(net == again);
  EXPECT_THROW(read_file(testing::TempDir() + "/definitely-missing-file"), ParseError);
}

}  // namespace
}  // namespace fcomp
