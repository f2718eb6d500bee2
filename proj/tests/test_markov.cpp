#include <gtest/gtest.h>

#include <map>
#include <set>

#include "jsrlab/markov.hpp"
#include "jsrlab/rng.hpp"
#include "oracles.hpp"
#include "systems.hpp"

using namespace jsrlab;

namespace {

std::set<Word> as_set(const std::vector<CycleRecord>& cycles) {
  std::set<Word> out;
  for (const auto& c : cycles) out.insert(c.indices);
  return out;
}

}  // namespace

TEST(MarkovChain, Validation) {
  EXPECT_THROW(MarkovChain((Matrix(2, 2) << 0.5, 0.4, 0, 1).finished()), Error);
  EXPECT_THROW(MarkovChain((Matrix(2, 2) << 1.1, -0.1, 0, 1).finished()), Error);
  // Tiny negative entries are clamped.
  const MarkovChain c((Matrix(2, 2) << 1.0 + 1e-16, -1e-16, 0, 1).finished());
  EXPECT_EQ(c.p()(0, 1), 0.0);
  // nu must be invariant.
  EXPECT_THROW(MarkovChain((Matrix(2, 2) << 0, 1, 1, 0).finished(), Vector((Vector(2) << 0.3, 0.7).finished())),
               Error);
  EXPECT_THROW(MarkovChain(Matrix::Identity(2, 2)).nu(), Error);
}

TEST(InvariantProbabilities, Example) {
  const auto inv = invariant_probabilities(fixtures::example1_chain());
  ASSERT_EQ(inv.extremes.size(), 1u);
  EXPECT_NEAR((inv.extremes[0] - Vector((Vector(3) << 0.5, 0.25, 0.25).finished())).norm(), 0.0, 1e-10);
}

TEST(InvariantProbabilities, IdentityHasOneExtremePerState) {
  const auto inv = invariant_probabilities(MarkovChain(Matrix::Identity(2, 2)));
  ASSERT_EQ(inv.extremes.size(), 2u);
  EXPECT_EQ(inv.extremes[0], Vector::Unit(2, 0));
  EXPECT_EQ(inv.extremes[1], Vector::Unit(2, 1));
}

TEST(InvariantProbabilities, TransientState) {
  const MarkovChain c((Matrix(2, 2) << 1, 0, 0.5, 0.5).finished());
  const auto inv = invariant_probabilities(c);
  ASSERT_EQ(inv.extremes.size(), 1u);
  EXPECT_NEAR((inv.extremes[0] - Vector::Unit(2, 0)).norm(), 0.0, 1e-14);
  const auto scc = scc_decompose(c);
  ASSERT_EQ(scc.recurrent_blocks.size(), 1u);
  EXPECT_EQ(scc.recurrent_blocks[0], std::vector<std::size_t>{0});
  EXPECT_EQ(scc.transient, std::vector<std::size_t>{1});
  EXPECT_NEAR(scc.transient_spectral_radius, 0.5, 1e-14);
}

TEST(SccDecompose, Example) {
  const auto scc = scc_decompose(fixtures::example1_chain());
  EXPECT_EQ(scc.recurrent_blocks.size(), 1u);
  EXPECT_TRUE(scc.transient.empty());
}

TEST(SccDecompose, IdentityGivesSingletons) {
  const auto scc = scc_decompose(MarkovChain(Matrix::Identity(3, 3)));
  EXPECT_EQ(scc.recurrent_blocks.size(), 3u);
  EXPECT_TRUE(scc.transient.empty());
  EXPECT_EQ(scc.transient_matrix.size(), 0);
}

TEST(SccDecompose, MixtureDecomposes) {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    const MarkovChain c(oracle::random_stochastic(2 + t % 7, 0.3, rng));
    const auto inv = invariant_probabilities(c);
    std::vector<double> alpha(inv.extremes.size());
    double s = 0.0;
    for (auto& a : alpha) s += (a = rng.uniform());
    for (auto& a : alpha) a /= s;
    const Vector nu = inv.mix(alpha);
    Eigen::RowVectorXd lhs = nu.transpose() * c.p();
    EXPECT_LE((lhs.transpose() - nu).cwiseAbs().maxCoeff(), 1e-10);
    const auto back = inv.decompose(nu);
    ASSERT_TRUE(back);
    for (std::size_t j = 0; j < alpha.size(); ++j) EXPECT_NEAR((*back)[j], alpha[j], 1e-10);
  }
}

TEST(SimpleCycles, Example) {
  const auto cycles = enumerate_simple_cycles(fixtures::example1_chain(), false);
  EXPECT_EQ(as_set(cycles), (std::set<Word>{{0}, {0, 1, 2}}));
}

TEST(SimpleCycles, SelfLoops) {
  EXPECT_EQ(as_set(enumerate_simple_cycles(MarkovChain(Matrix::Identity(2, 2)), false)), (std::set<Word>{{0}, {1}}));
}

TEST(SimpleCycles, UnitTransitionCycle) {
  Matrix p = Matrix::Zero(4, 4);
  p(2, 0) = p(0, 3) = p(3, 1) = p(1, 2) = 1.0;
  const MarkovChain c(p, Vector::Constant(4, 0.25));
  const auto cycles = enumerate_simple_cycles(c, true);
  ASSERT_EQ(cycles.size(), 1u);
  EXPECT_EQ(cycles[0].indices, (Word{0, 3, 1, 2}));
  EXPECT_TRUE(cycles[0].probability_positive);
}

TEST(SimpleCycles, RequireNuPositiveFilters) {
  // State 2 is transient; its self-loop carries no invariant mass.
  const MarkovChain c((Matrix(2, 2) << 1, 0, 0.5, 0.5).finished(), Vector::Unit(2, 0));
  EXPECT_EQ(as_set(enumerate_simple_cycles(c, true)), (std::set<Word>{{0}}));
  EXPECT_EQ(as_set(enumerate_simple_cycles(c, false)), (std::set<Word>{{0}, {1}}));
}

TEST(SimpleCycles, MatchBruteForce) {
  Rng rng(12);
  for (int t = 0; t < 300; ++t) {
    const Matrix p = oracle::random_stochastic(1 + t % 5, 0.5, rng);
    EXPECT_EQ(as_set(enumerate_simple_cycles(MarkovChain(p), false)), oracle::simple_cycles(p));
  }
}

TEST(SimpleCycles, BudgetCap) {
  try {
    enumerate_simple_cycles(MarkovChain(Matrix::Constant(6, 6, 1.0 / 6)), false, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BudgetExceeded);
  }
}

TEST(ClosedWalks, MatchBruteForce) {
  Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    const Matrix p = oracle::random_stochastic(1 + t % 4, 0.5, rng);
    const MarkovChain c(p);
    ClosedWalkEnumerator it(c, 4, false);
    std::multiset<Word> got;
    while (auto r = it.next()) got.insert(r->indices);
    const auto ref = oracle::closed_walks(p, 4);
    EXPECT_EQ(got, std::multiset<Word>(ref.begin(), ref.end()));
  }
}

TEST(ClosedWalks, TwoCycle) {
  const MarkovChain c((Matrix(2, 2) << 0, 1, 1, 0).finished());
  ClosedWalkEnumerator it(c, 4, false);
  std::vector<Word> got;
  while (auto r = it.next()) got.push_back(r->indices);
  EXPECT_EQ(got, (std::vector<Word>{{0, 1}, {0, 1, 0, 1}, {1, 0}, {1, 0, 1, 0}}));
}

TEST(ClosedWalks, LengthOneIsSelfLoops) {
  ClosedWalkEnumerator it(fixtures::example1_chain(), 1, true);
  auto r = it.next();
  ASSERT_TRUE(r);
  EXPECT_EQ(r->indices, Word{0});
  EXPECT_FALSE(it.next());
}

TEST(ClosedWalks, ExampleUpToThree) {
  ClosedWalkEnumerator it(fixtures::example1_chain(), 3, true);
  std::set<Word> got;
  while (auto r = it.next()) got.insert(r->indices);
  EXPECT_EQ(got, (std::set<Word>{{0}, {0, 0}, {0, 0, 0}, {0, 1, 2}, {1, 2, 0}, {2, 0, 1}}));
}

TEST(SamplePath, DeterministicChain) {
  Matrix p = Matrix::Zero(3, 3);
  p(0, 1) = p(1, 2) = p(2, 0) = 1.0;
  const MarkovChain c(p, Vector::Constant(3, 1.0 / 3));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Word w = sample_path(c, 7, seed);
    for (std::size_t t = 1; t < w.size(); ++t) EXPECT_EQ(w[t], (w[t - 1] + 1) % 3);
  }
  EXPECT_EQ(sample_path(c, 7, 42), sample_path(c, 7, 42));
}

TEST(SamplePath, StartFrequencies) {
  const MarkovChain c = fixtures::example1_chain();
  Rng rng(1);
  const int n = 20000;
  std::vector<int> counts(3, 0);
  for (int i = 0; i < n; ++i) ++counts[sample_path(c, 1, rng)[0]];
  const double nu[3] = {0.5, 0.25, 0.25};
  for (int i = 0; i < 3; ++i) {
    const double sigma = std::sqrt(nu[i] * (1 - nu[i]) / n);
    EXPECT_NEAR(counts[i] / double(n), nu[i], 3 * sigma);
  }
}

TEST(SamplePath, IidLetterFrequencies) {
  const MarkovChain c = fixtures::uniform_chain(2);
  const Word w = sample_path(c, 40000, 7);
  std::size_t ones = 0;
  for (Letter l : w) ones += l;
  EXPECT_NEAR(ones / 40000.0, 0.5, 3 * std::sqrt(0.25 / 40000));
}

TEST(SamplePath, RequiresNu) {
  EXPECT_THROW(sample_path(MarkovChain(Matrix::Identity(2, 2)), 3, 0), Error);
}
