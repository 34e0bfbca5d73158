#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "lrc/error.hpp"
#include "lrc/verify.hpp"
#include "oracle.hpp"

using namespace lrc;
using namespace lrc::verify;
using gf::FieldElem;

namespace {

CodeParams example1() { return derive_params(14, 9, 4, 2, 1, 2); }
CodeParams example2() { return derive_params(15, 28, 3, 3, 4, 8); }

std::vector<FieldElem> surviving_points(const LrcCode& code, std::uint64_t erased_mask) {
  std::vector<FieldElem> pts;
  for (int v = 0; v < code.params().n; ++v)
    if (!(erased_mask >> v & 1))
      for (int t = 0; t < code.params().alpha; ++t) pts.push_back(code.eval_point(v, t));
  return pts;
}

// Minimum distance straight from the definition: the smallest erasure count
// that can leave the survivors spanning fewer than M dimensions.
int dmin_by_definition(const LrcCode& code) {
  const CodeParams& p = code.params();
  int worst = p.n + 1;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << p.n); ++mask) {
    const int size = std::popcount(mask);
    if (size >= worst) continue;
    if (oracle::rank(code.field(), surviving_points(code, mask)) < p.M) worst = size;
  }
  return worst;
}

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

}  // namespace

TEST(Decomposition, Examples) {
  const auto d1 = ParamDecomposition::of(example1());
  EXPECT_EQ(std::vector<int>({d1.alpha0, d1.beta0, d1.alpha1, d1.beta1, d1.gamma1}), std::vector<int>({2, 3, 2, 1, 0}));
  EXPECT_EQ(d1.rank_erasure_budget(4, 1), example1().D - 1);
  const auto d2 = ParamDecomposition::of(example2());
  EXPECT_EQ(std::vector<int>({d2.alpha0, d2.beta0, d2.alpha1, d2.beta1, d2.gamma1}), std::vector<int>({3, 0, 2, 1, 0}));
  EXPECT_EQ(d2.rank_erasure_budget(3, 4), example2().D - 1);
  // gamma1 > 0
  const auto d3 = ParamDecomposition::of(derive_params(15, 27, 3, 3, 4, 8));
  EXPECT_EQ(d3.gamma1, 3);
  EXPECT_EQ(d3.rank_erasure_budget(3, 4), derive_params(15, 27, 3, 3, 4, 8).D - 1);
}

TEST(RankErasures, RemarkThreeCases) {
  const LrcCode code(example2());
  EXPECT_EQ(node_to_rank_erasures(code, ErasurePattern{}), 0);
  EXPECT_EQ(node_to_rank_erasures(code, ErasurePattern({0, 4})), 0);
  EXPECT_EQ(node_to_rank_erasures(code, ErasurePattern({0, 3, 4})), 4);
  EXPECT_EQ(node_to_rank_erasures(code, ErasurePattern({5, 6, 7, 8})), 8);
  EXPECT_EQ(node_to_rank_erasures(code, ErasurePattern({10, 11, 12, 13, 14})), 12);
  EXPECT_EQ(surviving_span(code, ErasurePattern{}), 36);
}

TEST(RankErasures, AgreeWithEliminationOracle) {
  std::mt19937_64 rng(1);
  for (const CodeParams& p : {example1(), example2()}) {
    const LrcCode code(p);
    for (int trial = 0; trial < 100; ++trial) {
      const std::uint64_t mask = rng() & ((std::uint64_t{1} << p.n) - 1);
      EXPECT_EQ(surviving_span(code, ErasurePattern::from_mask(mask)),
                oracle::rank(code.field(), surviving_points(code, mask)));
    }
  }
}

TEST(Patterns, CountsOrderAndBudget) {
  const CodeParams p = example1();
  const auto pats = patterns_of_size(p, 3, kDefaultPatternBudget);
  EXPECT_EQ(pats.size(), 364u);
  int last = 0;
  for (auto m : pats) {
    EXPECT_EQ(std::popcount(m), 3);
    int touched = 0;
    for (int c : ErasurePattern::from_mask(m).per_group_counts(p)) touched += c > 0;
    EXPECT_GE(touched, last);
    last = touched;
  }
  std::vector<std::uint64_t> sorted = pats;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(std::unique(sorted.begin(), sorted.end()), sorted.end());
  EXPECT_EQ(code_of([&] { (void)patterns_of_size(p, 3, 100); }), ErrorCode::kTooLarge);
  EXPECT_EQ(patterns_of_size(p, 0, 10).size(), 1u);
}

TEST(Dmin, Example1BothOracles) {
  const LrcCode code(example1());
  const auto alg = algebraic_dmin(code);
  EXPECT_EQ(alg.dmin, 4);
  EXPECT_EQ(alg.patterns_recoverable, 364u);
  ASSERT_TRUE(alg.witness);
  EXPECT_EQ(alg.witness->size(), 4u);
  EXPECT_LT(surviving_span(code, *alg.witness), 9);
  const auto file = random_file(code, 3);
  const auto op = operational_dmin(code, code.encode(file), file);
  EXPECT_EQ(op.dmin, 4);
  EXPECT_EQ(op.decode_mismatches, 0u);
  EXPECT_EQ(dmin_by_definition(code), 4);
}

TEST(Dmin, SingleGroupCodeIsTheArrayCode) {
  for (int delta : {2, 3, 4}) {
    const int r = 3;
    const LrcCode code(derive_params(r + delta - 1, r, r, delta, 1, 8));
    EXPECT_EQ(code.params().g, 1);
    EXPECT_EQ(algebraic_dmin(code).dmin, delta);
  }
}

TEST(Dmin, OraclesAgreeOnSmallCodes) {
  const std::vector<CodeParams> codes = {derive_params(9, 4, 2, 2, 1, 2), derive_params(10, 5, 3, 3, 1, 8),
                                         derive_params(11, 7, 3, 2, 1, 4), derive_params(12, 6, 2, 2, 2, 2),
                                         derive_params(13, 9, 4, 2, 2, 4)};
  for (const CodeParams& p : codes) {
    const LrcCode code(p);
    const DminReport rep = verify_code(code, 5);
    EXPECT_TRUE(rep.agree);
    EXPECT_EQ(rep.algebraic.dmin, dmin_by_definition(code));
    EXPECT_EQ(rep.operational.dmin, p.dmin);
    EXPECT_TRUE(rep.bound_achieved);
  }
}

TEST(Dmin, WorkersGiveIdenticalResults) {
  const LrcCode code(derive_params(13, 9, 4, 2, 2, 4));
  const DminReport one = verify_code(code, 9, {1, kDefaultPatternBudget});
  for (int w : {2, 3, 8}) {
    const DminReport many = verify_code(code, 9, {w, kDefaultPatternBudget});
    EXPECT_EQ(many.algebraic.dmin, one.algebraic.dmin);
    EXPECT_EQ(many.algebraic.witness, one.algebraic.witness);
    EXPECT_EQ(many.operational.witness, one.operational.witness);
    EXPECT_EQ(many.operational.patterns_recoverable, one.operational.patterns_recoverable);
  }
}

TEST(Dmin, BudgetRefusesInsteadOfSampling) {
  const LrcCode code(example1());
  EXPECT_EQ(code_of([&] { (void)algebraic_dmin(code, {1, 50}); }), ErrorCode::kTooLarge);
}

TEST(WorstCase, Example1Case2a) {
  const CodeParams p = example1();
  const auto pats = worst_case_patterns(p, ParamDecomposition::of(p));
  ASSERT_FALSE(pats.empty());
  for (const auto& w : pats) {
    EXPECT_EQ(w.subcase.substr(0, 2), "2a");
    EXPECT_EQ(w.pattern.size(), 3u);
    EXPECT_EQ(w.expected_rank_erasures, 2);
    EXPECT_EQ(w.extension.size(), 4u);
    EXPECT_TRUE(std::includes(w.extension.nodes().begin(), w.extension.nodes().end(), w.pattern.nodes().begin(),
                              w.pattern.nodes().end()));
  }
  const LrcCode code(p);
  const auto file = random_file(code, 4);
  for (const auto& c : check_worst_case(code, code.encode(file), file)) {
    EXPECT_TRUE(c.ok()) << c.pattern.subcase;
    EXPECT_EQ(c.realized_rank_erasures, 2);
  }
}

TEST(WorstCase, Example2Case1b) {
  const CodeParams p = example2();
  const auto pats = worst_case_patterns(p, ParamDecomposition::of(p));
  ASSERT_FALSE(pats.empty());
  for (const auto& w : pats) {
    EXPECT_EQ(w.subcase, "1b");
    EXPECT_EQ(w.pattern.size(), 4u);
    EXPECT_EQ(w.expected_rank_erasures, 8);
    const auto counts = w.pattern.per_group_counts(p);
    EXPECT_EQ(*std::max_element(counts.begin(), counts.end()), 4);
  }
  const LrcCode code(p);
  const auto file = random_file(code, 5);
  for (const auto& c : check_worst_case(code, code.encode(file), file)) EXPECT_TRUE(c.ok()) << c.pattern.subcase;
}

TEST(WorstCase, OtherSubcases) {
  // 1a: M a multiple of r alpha; 1c and 2b: gamma1 > 0.
  const std::vector<std::pair<CodeParams, std::string>> cases = {
      {derive_params(15, 24, 3, 3, 4, 8), "1a"},
      {derive_params(15, 27, 3, 3, 4, 8), "1c"},
      {derive_params(13, 9, 4, 2, 2, 4), "2b"},
  };
  for (const auto& [p, subcase] : cases) {
    const auto pats = worst_case_patterns(p, ParamDecomposition::of(p));
    ASSERT_FALSE(pats.empty()) << subcase;
    EXPECT_EQ(pats.front().subcase.substr(0, 2), subcase);
    const LrcCode code(p);
    const auto file = random_file(code, 6);
    for (const auto& c : check_worst_case(code, code.encode(file), file))
      EXPECT_TRUE(c.ok()) << c.pattern.subcase << " realized " << c.realized_rank_erasures << " expected "
                          << c.pattern.expected_rank_erasures;
  }
}

TEST(WorstCase, ForcedParametersRejected) {
  DeriveOptions force;
  force.force = true;
  const CodeParams p = derive_params(12, 4, 4, 2, 1, 2, force);
  EXPECT_EQ(code_of([&] { (void)worst_case_patterns(p, ParamDecomposition::of(p)); }), ErrorCode::kConditionsNotMet);
}

TEST(Probe, LabelledSampleOfBoundSizedPatterns) {
  const LrcCode code(example1());
  const ProbeReport rep = probe(code, 1, 200);
  EXPECT_EQ(rep.sampled, 200u);
  EXPECT_EQ(rep.sampled_failures, 0u);
  EXPECT_EQ(rep.bound, 4);
  EXPECT_TRUE(rep.ok());
  EXPECT_FALSE(rep.worst_case.empty());
}

TEST(BoundSweep, IdentitiesHold) {
  EXPECT_EQ(dmin_bound_single_parity(14, 9, 4, 1), 4);
  const BoundSweepReport rep = verify_bound_sweep({12, 4, 3});
  EXPECT_TRUE(rep.ok());
  EXPECT_GT(rep.single_parity_checked, 0u);
  EXPECT_GT(rep.scalar_checked, 0u);
}
