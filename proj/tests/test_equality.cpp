#include <gtest/gtest.h>

#include "jsrlab/equality.hpp"
#include "oracles.hpp"
#include "systems.hpp"

using namespace jsrlab;

TEST(CycleCondition, ExampleOneIsConsistent) {
  const auto v = check_cycle_condition(fixtures::example1(), fixtures::example1_chain());
  EXPECT_EQ(v.status, VerdictStatus::ConsistentUpTo);
  EXPECT_EQ(v.max_len, 12u);
  EXPECT_GT(v.cycles_checked, 0u);
  EXPECT_NEAR(v.bracket.lower, 1.0, 1e-12);
}

TEST(CycleCondition, ExampleTwoViolatesAtTheSelfLoop) {
  const auto v = check_cycle_condition(fixtures::example2(), fixtures::uniform_chain(2), {.kind = NormKind::One});
  ASSERT_EQ(v.status, VerdictStatus::Violated);
  ASSERT_TRUE(v.cycle);
  EXPECT_EQ(v.cycle->indices, Word{0});
  EXPECT_EQ(v.value, 0.0);
  EXPECT_EQ(v.ratio, 0.0);
}

TEST(CycleCondition, ViolationIsLexicographicallyFirst) {
  // A_1 attains the JSR, A_2 is half as large: every walk through 2 falls short.
  const MatrixTuple t({Matrix::Identity(2, 2), 0.5 * Matrix::Identity(2, 2)});
  Matrix p = Matrix::Constant(2, 2, 0.5);
  const auto v = check_cycle_condition(t, MarkovChain(p, Vector::Constant(2, 0.5)));
  ASSERT_EQ(v.status, VerdictStatus::Violated);
  // (1,...,1,2) of length 12 precedes (1,2).
  Word first(12, 0);
  first.back() = 1;
  EXPECT_EQ(v.cycle->indices, first);
  EXPECT_NEAR(v.value, std::pow(0.5, 1.0 / 12), 1e-12);
  EXPECT_NEAR(v.ratio, std::pow(0.5, 1.0 / 12), 1e-12);
}

TEST(CycleCondition, OrthogonalTuplesAlwaysPass) {
  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    const MatrixTuple tuple({oracle::random_orthogonal(3, rng), oracle::random_orthogonal(3, rng),
                             oracle::random_orthogonal(3, rng)});
    const MarkovChain c = oracle::chain_with_stationary(oracle::random_strongly_connected(3, 0.5, rng));
    const auto v = check_cycle_condition(tuple, c, {.max_len = 6});
    EXPECT_EQ(v.status, VerdictStatus::ConsistentUpTo);
  }
}

TEST(CycleCondition, TrivialWhenJsrVanishes) {
  const MatrixTuple t({(Matrix(2, 2) << 0, 1, 0, 0).finished()});
  const MarkovChain c(Matrix::Identity(1, 1), Vector::Ones(1));
  EXPECT_EQ(check_cycle_condition(t, c).status, VerdictStatus::Trivial);
}

TEST(CycleCondition, SerialAndParallelAgree) {
  Rng rng(42);
  for (int t = 0; t < 20; ++t) {
    const MatrixTuple tuple({oracle::random_matrix(2, rng), oracle::random_matrix(2, rng), oracle::random_matrix(2, rng)});
    const MarkovChain c = oracle::chain_with_stationary(oracle::random_strongly_connected(3, 0.5, rng));
    const JsrBracket b = jsr_gripenberg(tuple, {.tol = 1e-4, .budget = 5000});
    const auto s = check_cycle_condition(tuple, c, b, {.max_len = 6, .exec = Exec::Serial});
    const auto p = check_cycle_condition(tuple, c, b, {.max_len = 6, .exec = Exec::Parallel});
    EXPECT_EQ(s.status, p.status);
    EXPECT_EQ(s.cycle.has_value(), p.cycle.has_value());
    if (s.cycle && p.cycle) EXPECT_EQ(s.cycle->indices, p.cycle->indices);
    EXPECT_EQ(s.value, p.value);
  }
}

TEST(CycleCondition, AboveUpperIsNumericalFailure) {
  JsrBracket fake;
  fake.lower = 0.1;
  fake.upper = 0.2;
  const MarkovChain c(Matrix::Identity(1, 1), Vector::Ones(1));
  try {
    check_cycle_condition(MatrixTuple({Matrix::Identity(1, 1)}), c, fake);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NumericalFailure);
  }
}

TEST(DistinctCycle, ExampleOne) {
  const auto r = check_distinct_cycle(fixtures::example1());
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(*r.witness, Word{0});
}

TEST(DistinctCycle, ExampleTwoHasNone) {
  // The extremal word (1,1,2) repeats a letter.
  const auto r = check_distinct_cycle(fixtures::example2(), {.kind = NormKind::One});
  EXPECT_FALSE(r.witness);
  EXPECT_EQ(r.checked, 2u + 1u);  // (1), (2), (1,2)
}

TEST(DistinctCycle, LetterCap) {
  std::vector<Matrix> mats(11, Matrix::Identity(1, 1));
  EXPECT_THROW(check_distinct_cycle(MatrixTuple(mats)), Error);
}

TEST(Orthogonality, RecoversConjugatedRotations) {
  Rng rng(43);
  for (int t = 0; t < 20; ++t) {
    const Matrix s = oracle::random_well_conditioned(3, rng);
    const Matrix si = s.inverse();
    const double rho = 0.5 + 1.5 * rng.uniform();
    const MatrixTuple tuple({rho * s * oracle::random_orthogonal(3, rng) * si,
                             rho * s * oracle::random_orthogonal(3, rng) * si});
    const auto cert = orthogonal_similarity(tuple, rho);
    ASSERT_TRUE(cert);
    const Matrix gi = cert->g.inverse();
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      const Matrix b = cert->g * tuple[i] * gi / rho;
      EXPECT_LE((b.transpose() * b - Matrix::Identity(3, 3)).norm(), 1e-7);
      EXPECT_LE(cert->residuals[i], 1e-8);
    }
  }
}

TEST(Orthogonality, NonNormalContractionHasNone) {
  const MatrixTuple t({(Matrix(2, 2) << 0.5, 1, 0, 0.5).finished()});
  EXPECT_FALSE(orthogonal_similarity(t, 0.5));
}

TEST(Orthogonality, SingularGenerators) {
  const MatrixTuple t({Matrix::Identity(2, 2), (Matrix(2, 2) << 1, 0, 0, 0).finished()});
  EXPECT_FALSE(orthogonal_similarity(t, 1.0));
  const auto cert = orthogonal_similarity(t, 1.0, {.skip_singular = true});
  ASSERT_TRUE(cert);
  EXPECT_TRUE(std::isnan(cert->residuals[1]));
  EXPECT_LE(cert->residuals[0], 1e-10);
}

TEST(Semigroup, ExampleTwoIsReducible) {
  const auto v = semigroup_irreducibility(fixtures::example2(), fixtures::uniform_chain(2), 0, 6);
  EXPECT_EQ(v.status, IrreducibilityStatus::Reducible);
  ASSERT_GT(v.subspace.cols(), 0);
  // Re-verify: every generator of the semigroup keeps the subspace.
  const Matrix& u = v.subspace;
  const Matrix proj = Matrix::Identity(3, 3) - u * u.transpose();
  for (const Word& w : oracle::all_words(2, 3)) {
    EXPECT_LE((proj * oracle::product(fixtures::example2().matrices(), w) * u).norm(), 1e-9);
  }
}

TEST(Semigroup, RotationsAreIrreducible) {
  const MatrixTuple t({(Matrix(2, 2) << 0, -1, 1, 0).finished(), Matrix::Identity(2, 2),
                       (Matrix(2, 2) << 1, 1, 0, 1).finished()});
  const auto v = semigroup_irreducibility(t, fixtures::uniform_chain(3), 0, 4);
  EXPECT_EQ(v.status, IrreducibilityStatus::Irreducible);
}

TEST(Semigroup, NoClosedWalkIsReducible) {
  Matrix p = Matrix::Zero(2, 2);
  p(0, 1) = p(1, 1) = 1.0;
  const auto v = semigroup_irreducibility(fixtures::example2(), MarkovChain(p), 0, 5);
  EXPECT_EQ(v.status, IrreducibilityStatus::Reducible);
}

TEST(Report, ExampleTwoSections) {
  ReportConfig cfg;
  cfg.kind = NormKind::One;
  cfg.horizon = 8;
  cfg.max_word_len = 3;
  const auto r = gap_report(fixtures::example2(), fixtures::uniform_chain(2), cfg);
  EXPECT_TRUE(r.errors.empty());
  ASSERT_TRUE(r.rho_d && r.rho_p && r.mc && r.cycles && r.finiteness && r.ratio);
  EXPECT_NEAR(r.rho_d->lower, 1.0, 1e-12);
  EXPECT_NEAR(r.rho_p->upper, 3.0 / 256, 1e-15);
  EXPECT_EQ(r.cycles->status, VerdictStatus::Violated);
  EXPECT_LE(r.ratio->second, 3.0 / 256 + 1e-12);
  EXPECT_LE(r.ratio->first, r.ratio->second);
  EXPECT_FALSE(r.trivial);
}

TEST(Report, NoChainSkipsProbabilisticSections) {
  const auto r = gap_report(fixtures::example1(), std::nullopt, {.horizon = 3, .max_word_len = 2});
  EXPECT_TRUE(r.rho_d);
  EXPECT_FALSE(r.rho_p);
  EXPECT_FALSE(r.cycles);
  EXPECT_FALSE(r.ratio);
}

TEST(Report, SectionErrorsDoNotAbort) {
  ReportConfig cfg;
  cfg.horizon = 40;  // brute force and exact expectation both exceed the cap
  cfg.max_word_len = 2;
  cfg.budget = 20'000;
  const auto r = gap_report(fixtures::example1(), fixtures::example1_chain(), cfg);
  EXPECT_FALSE(r.errors.empty());
  EXPECT_TRUE(r.rho_d);
  bool saw_budget = false;
  for (const auto& e : r.errors) saw_budget |= e.code == Errc::BudgetExceeded;
  EXPECT_TRUE(saw_budget || r.budget_exhausted());
}
