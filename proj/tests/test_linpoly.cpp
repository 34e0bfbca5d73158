#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "lrc/error.hpp"
#include "lrc/linpoly.hpp"
#include "oracle.hpp"

using namespace lrc;
using namespace lrc::gf;
using namespace lrc::linpoly;

namespace {

std::vector<FieldElem> random_coeffs(const ExtField& f, int k, std::mt19937_64& rng) {
  std::vector<FieldElem> c;
  for (int i = 0; i < k; ++i) c.push_back(random_element(f, rng));
  return c;
}

// sum_i a_i x^(q^i) by repeated multiplication.
FieldElem eval_oracle(const ExtField& f, const std::vector<FieldElem>& a, const FieldElem& x) {
  FieldElem acc = f.zero();
  std::uint64_t qi = 1;
  for (const auto& c : a) {
    acc = f.add(acc, oracle::ext_mul(f, c, oracle::ext_pow(f, x, qi)));
    qi *= f.base().order();
  }
  return acc;
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

TEST(LinearizedPoly, QDegreeAndEquality) {
  const ExtField f(BaseField(1), 5);
  EXPECT_EQ(LinearizedPoly({f.zero()}).q_degree(), -1);
  EXPECT_EQ(LinearizedPoly({f.one(), f.zero(), f.basis(2)}).q_degree(), 2);
  EXPECT_EQ(LinearizedPoly({f.one(), f.zero()}), LinearizedPoly({f.one()}));
  EXPECT_FALSE(LinearizedPoly({f.one()}) == LinearizedPoly({f.basis(1)}));
  EXPECT_EQ(code_of([] { LinearizedPoly(std::vector<FieldElem>{}); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([&] { LinearizedPoly({f.one(), FieldElem(4)}); }), ErrorCode::kParamMismatch);
}

TEST(Evaluate, MatchesPowerOracle) {
  std::mt19937_64 rng(1);
  for (const auto& [bits, m] : std::vector<std::pair<int, int>>{{1, 11}, {3, 6}, {2, 7}}) {
    const ExtField f(BaseField(bits), m);
    for (int i = 0; i < 100; ++i) {
      const auto a = random_coeffs(f, 1 + static_cast<int>(rng() % 5), rng);
      const FieldElem x = random_element(f, rng);
      ASSERT_EQ(evaluate(f, LinearizedPoly(a), x), eval_oracle(f, a, x));
    }
  }
}

TEST(Evaluate, ScalarAndZero) {
  const ExtField f(BaseField(1), 11);
  std::mt19937_64 rng(2);
  const FieldElem c = random_element(f, rng), x = random_element(f, rng);
  EXPECT_EQ(evaluate(f, LinearizedPoly({c}), x), f.mul(c, x));
  EXPECT_TRUE(evaluate(f, LinearizedPoly(random_coeffs(f, 4, rng)), f.zero()).is_zero());
}

TEST(Evaluate, BaseLinearity) {
  std::mt19937_64 rng(3);
  const ExtField f(BaseField(3), 9);
  for (int i = 0; i < 500; ++i) {
    const LinearizedPoly p(random_coeffs(f, 4, rng));
    const FieldElem a = random_element(f, rng), b = random_element(f, rng);
    const auto g1 = static_cast<BaseElem>(rng() % 8), g2 = static_cast<BaseElem>(rng() % 8);
    const FieldElem lhs = evaluate(f, p, f.add(f.scale(g1, a), f.scale(g2, b)));
    const FieldElem rhs = f.add(f.scale(g1, evaluate(f, p, a)), f.scale(g2, evaluate(f, p, b)));
    ASSERT_EQ(lhs, rhs);
  }
}

TEST(Interpolate, DegreeZero) {
  const ExtField f(BaseField(1), 11);
  std::mt19937_64 rng(4);
  const FieldElem c = random_element(f, rng);
  const std::vector<FieldElem> pts = {f.basis(0)}, vals = {f.mul(c, f.basis(0))};
  EXPECT_EQ(interpolate(f, pts, vals, 1), LinearizedPoly({c}));
}

TEST(Interpolate, RoundTripOnBasisAndRandomPoints) {
  std::mt19937_64 rng(5);
  for (const auto& [bits, m] : std::vector<std::pair<int, int>>{{1, 11}, {3, 8}, {2, 6}}) {
    const ExtField f(BaseField(bits), m);
    for (int k = 1; k <= m; ++k) {
      const auto a = random_coeffs(f, k, rng);
      const LinearizedPoly p(a);
      std::vector<FieldElem> pts;
      for (int i = 0; i < k; ++i) pts.push_back(f.basis(i));
      // Extra random points beyond k are consistency checks.
      for (int i = 0; i < 3; ++i) pts.push_back(random_element(f, rng));
      std::vector<FieldElem> vals;
      for (const auto& x : pts) vals.push_back(eval_oracle(f, a, x));
      ASSERT_EQ(interpolate(f, pts, vals, k), p);
    }
  }
}

TEST(Interpolate, DependentPointsAreRankDeficient) {
  const ExtField f(BaseField(1), 8);
  std::mt19937_64 rng(6);
  const int k = 4;
  // Every point is an F_2-combination of the first k-1 basis elements.
  std::vector<FieldElem> pts;
  for (int i = 0; i < 6; ++i) {
    FieldElem e = f.zero();
    for (int j = 0; j < k - 1; ++j) f.add_scaled(e, static_cast<BaseElem>(rng() & 1), f.basis(j));
    pts.push_back(e);
  }
  ASSERT_LT(oracle::rank(f, pts), k);
  const LinearizedPoly p(random_coeffs(f, k, rng));
  std::vector<FieldElem> vals;
  for (const auto& x : pts) vals.push_back(evaluate(f, p, x));
  EXPECT_EQ(code_of([&] { (void)interpolate(f, pts, vals, k); }), ErrorCode::kRankDeficient);
}

TEST(Interpolate, InconsistentObservationDetected) {
  const ExtField f(BaseField(1), 8);
  std::mt19937_64 rng(7);
  const LinearizedPoly p(random_coeffs(f, 3, rng));
  std::vector<FieldElem> pts = {f.basis(0), f.basis(1), f.basis(2), f.basis(3)};
  std::vector<FieldElem> vals;
  for (const auto& x : pts) vals.push_back(evaluate(f, p, x));
  vals[3] = f.add(vals[3], f.one());
  EXPECT_EQ(code_of([&] { (void)interpolate(f, pts, vals, 3); }), ErrorCode::kInconsistent);
  vals.pop_back();
  EXPECT_EQ(code_of([&] { (void)interpolate(f, pts, vals, 3); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(code_of([&] { (void)interpolate(f, std::vector<FieldElem>{}, std::vector<FieldElem>{}, 0); }),
            ErrorCode::kInvalidParams);
}

TEST(IndependentSubset, GreedyInInputOrder) {
  const ExtField f(BaseField(1), 6);
  const std::vector<FieldElem> pts = {f.basis(0), f.basis(0), f.zero(), f.basis(1), f.add(f.basis(0), f.basis(1)),
                                      f.basis(4)};
  EXPECT_EQ(independent_subset(f, pts, 10), (std::vector<std::size_t>{0, 3, 5}));
  EXPECT_EQ(independent_subset(f, pts, 2), (std::vector<std::size_t>{0, 3}));
}

TEST(Solve, MatchesSubstitution) {
  const ExtField f(BaseField(2), 5);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    std::vector<FieldElem> a, x;
    for (std::size_t i = 0; i < n * n; ++i) a.push_back(random_element(f, rng));
    for (std::size_t i = 0; i < n; ++i) x.push_back(random_element(f, rng));
    std::vector<FieldElem> b(n, f.zero());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) b[i] = f.add(b[i], oracle::ext_mul(f, a[i * n + j], x[j]));
    try {
      EXPECT_EQ(solve(f, a, b), x);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInternal);  // random singular matrix
    }
  }
  EXPECT_EQ(code_of([&] { (void)solve(f, std::vector<FieldElem>(3, f.one()), std::vector<FieldElem>(2, f.one())); }),
            ErrorCode::kShapeMismatch);
}
