#include <gtest/gtest.h>

#include "jsrlab/io.hpp"
#include "systems.hpp"

using namespace jsrlab;
using io::json;

namespace {

std::string message_of(std::string_view text) {
  try {
    io::parse_spec(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

Errc code_of(std::string_view text) {
  try {
    io::parse_spec(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return Errc::NumericalFailure;
}

}  // namespace

TEST(ParseSpec, Minimal) {
  const auto s = io::parse_spec(R"({"matrices": [[[2]]]})");
  ASSERT_EQ(s.tuple.size(), 1u);
  EXPECT_EQ(s.tuple[0](0, 0), 2.0);
  EXPECT_FALSE(s.chain);
  EXPECT_FALSE(s.higher_order);
}

TEST(ParseSpec, ChainAndOneBasedHigherOrder) {
  const auto s = io::parse_spec(R"({
    "name": "t",
    "matrices": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]],
    "chain": {"P": [[0, 1], [1, 0]], "nu": [0.5, 0.5]},
    "higher_order": {"m": 1,
                     "p_entries": [{"indices": [1, 2], "value": 1.0}, {"indices": [2, 1], "value": 1.0}],
                     "nu_entries": [{"indices": [1], "value": 0.5}, {"indices": [2], "value": 0.5}]}
  })");
  EXPECT_EQ(s.name, "t");
  ASSERT_TRUE(s.chain);
  EXPECT_EQ(s.chain->p()(0, 1), 1.0);
  ASSERT_TRUE(s.higher_order);
  EXPECT_EQ(s.higher_order->p().at(Word{0, 1}), 1.0);
}

TEST(ParseSpec, SyntaxErrorLine) {
  const std::string msg = message_of("{\n  \"matrices\": [[[1]]],\n  oops\n}");
  EXPECT_NE(msg.find("line 3:"), std::string::npos) << msg;
}

TEST(ParseSpec, SchemaErrorLineAndPointer) {
  const std::string text = "{\n  \"matrices\": [\n    [[1, 0], [0, 1]],\n    [[1, 0], [0, \"x\"]]\n  ]\n}";
  const std::string msg = message_of(text);
  EXPECT_NE(msg.find("line 4: /matrices/1/1/1:"), std::string::npos) << msg;
  EXPECT_EQ(code_of(text), Errc::InvalidInput);
}

TEST(ParseSpec, ModelErrorsAreRewrapped) {
  const std::string text = "{\n  \"matrices\": [[[1]], [[2]]],\n  \"chain\": {\n    \"P\": [[0.5, 0.4], [0, 1]]\n  }\n}";
  const std::string msg = message_of(text);
  EXPECT_NE(msg.find("/chain"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 3: /chain: row 1"), std::string::npos) << msg;
}

TEST(ParseSpec, ErrorCodes) {
  EXPECT_EQ(code_of(R"({"matrices": []})"), Errc::InvalidInput);
  EXPECT_EQ(code_of(R"({"matrices": [[[1, 2]]]})"), Errc::InvalidInput);
  EXPECT_EQ(code_of(R"({"matrices": [[[1]]], "chain": {"P": [[1, 0]]}})"), Errc::InvalidInput);
  EXPECT_EQ(code_of(R"({"dim": 100000, "matrices": [[[1]]]})"), Errc::DimensionTooLarge);
  EXPECT_EQ(code_of(R"({"matrices": [[[1]]], "higher_order": {"m": 1, "p_entries": [{"indices": [1, 3], "value": 1.0}], "nu_entries": [{"indices": [1], "value": 1.0}]}})"),
            Errc::IndexOutOfRange);
  EXPECT_EQ(code_of("[1, 2]"), Errc::InvalidInput);
}

TEST(Examples, RoundTrip) {
  for (int which : {1, 2}) {
    const json doc = io::example_spec(which);
    const auto s = io::parse_spec(doc.dump(2));
    const auto ref = which == 1 ? fixtures::example1() : fixtures::example2();
    ASSERT_EQ(s.tuple.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_TRUE((s.tuple[i].array() == ref[i].array()).all());
    ASSERT_TRUE(s.chain);
  }
  EXPECT_THROW(io::example_spec(3), Error);
}

TEST(WithInvariant, UniqueAndMixture) {
  std::string note;
  const MarkovChain c = io::with_invariant(MarkovChain(fixtures::example1_chain().p()), &note);
  EXPECT_NEAR(c.nu()(0), 0.5, 1e-10);
  const MarkovChain id = io::with_invariant(MarkovChain(Matrix::Identity(2, 2)), &note);
  EXPECT_NEAR(id.nu()(0), 0.5, 1e-14);
  EXPECT_FALSE(note.empty());
}

TEST(ToJson, WordsAreOneBased) { EXPECT_EQ(io::to_json(Word{0, 0, 1}), json::parse("[1,1,2]")); }

TEST(ToJson, ViolatedVerdictCarriesCycle) {
  const auto v = check_cycle_condition(fixtures::example2(), fixtures::uniform_chain(2), {.kind = NormKind::One});
  const json j = io::to_json(v);
  EXPECT_EQ(j["verdict"], "Violated");
  EXPECT_EQ(j["cycle"]["indices"], json::parse("[1]"));
}

TEST(ToJson, NumbersRoundTrip) {
  const json j = io::to_json(Matrix((Matrix(1, 2) << 0.1, 1.0 / 3).finished()));
  const json back = json::parse(j.dump());
  EXPECT_EQ(back[0][1].get<double>(), 1.0 / 3);
}
