#include <gtest/gtest.h>

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "lrc/error.hpp"
#include "lrc/linpoly.hpp"
#include "lrc/lrc.hpp"
#include "oracle.hpp"

using namespace lrc;
using gf::FieldElem;
using mds::NodeBlock;

namespace {

CodeParams example1() { return derive_params(14, 9, 4, 2, 1, 2); }
CodeParams example2() { return derive_params(15, 28, 3, 3, 4, 8); }

std::vector<FieldElem> random_file(const LrcCode& code, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<FieldElem> file;
  for (int i = 0; i < code.params().M; ++i) file.push_back(gf::random_element(code.field(), rng));
  return file;
}

std::vector<NodeBlock> surviving(const Codeword& cw, const std::vector<int>& erased) {
  std::vector<NodeBlock> out;
  for (const auto& b : cw.shares)
    if (std::find(erased.begin(), erased.end(), b.node_id) == erased.end()) out.push_back(b);
  return out;
}

std::vector<std::optional<NodeBlock>> slots(const Codeword& cw, const std::vector<int>& erased) {
  std::vector<std::optional<NodeBlock>> out(cw.shares.begin(), cw.shares.end());
  for (int v : erased) out[static_cast<std::size_t>(v)].reset();
  return out;
}

std::vector<int> group_sizes(const CodeParams& p) {
  std::vector<int> s;
  for (const auto& g : p.groups) s.push_back(g.size());
  return s;
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

TEST(DeriveParams, Example1) {
  const CodeParams p = example1();
  EXPECT_EQ(p.N, 11);
  EXPECT_EQ(p.m, 11);
  EXPECT_EQ(p.g, 3);
  EXPECT_EQ(p.beta0, 3);
  EXPECT_EQ(group_sizes(p), (std::vector<int>{5, 5, 4}));
  EXPECT_EQ(p.dmin, 4);
  EXPECT_EQ(p.D, 3);
  EXPECT_EQ(p.optimality, OptimalityCase::kRemainder);
  EXPECT_TRUE(p.certified());
  EXPECT_EQ(p.groups[2].first_node, 10);
  EXPECT_EQ(p.groups[2].first_data_index, 8);
}

TEST(DeriveParams, Example2) {
  const CodeParams p = example2();
  EXPECT_EQ(p.N, 36);
  EXPECT_EQ(p.m, 36);
  EXPECT_EQ(p.s, 3);
  EXPECT_EQ(p.g, 3);
  EXPECT_EQ(p.beta0, 0);
  EXPECT_EQ(group_sizes(p), (std::vector<int>{5, 5, 5}));
  EXPECT_EQ(p.dmin, 5);
  EXPECT_EQ(p.D, 9);
  EXPECT_EQ(p.optimality, OptimalityCase::kDivisible);
}

TEST(DeriveParams, NeitherConditionHolds) {
  try {
    (void)derive_params(14, 12, 4, 2, 1, 2);
    FAIL() << "expected NotOptimalConfiguration";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotOptimalConfiguration);
    EXPECT_NE(std::string(e.what()).find("ceil(M/alpha) mod r"), std::string::npos);
  }
  try {
    (void)derive_params(11, 9, 4, 2, 1, 2);
    FAIL() << "expected NotOptimalConfiguration";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotOptimalConfiguration);
    EXPECT_NE(std::string(e.what()).find("n mod (r+delta-1) - (delta-1)"), std::string::npos);
  }
}

TEST(DeriveParams, ForcedLayout) {
  DeriveOptions force;
  force.force = true;
  const CodeParams p = derive_params(12, 4, 4, 2, 1, 2, force);
  EXPECT_EQ(p.optimality, OptimalityCase::kForced);
  EXPECT_FALSE(p.certified());
  EXPECT_EQ(p.N, 9);
  EXPECT_EQ(group_sizes(p), (std::vector<int>{5, 5, 2}));
  // Forcing cannot conjure a layout when N would fall below M.
  EXPECT_EQ(code_of([&] { (void)derive_params(14, 12, 4, 2, 1, 2, force); }), ErrorCode::kInvalidParams);
}

TEST(DeriveParams, Preconditions) {
  EXPECT_EQ(code_of([] { (void)derive_params(14, 9, 4, 2, 1, 3); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([] { (void)derive_params(14, 9, 4, 2, 1, 512); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([] { (void)derive_params(14, 9, 4, 1, 1, 2); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([] { (void)derive_params(14, 3, 4, 2, 1, 2); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([] { (void)derive_params(0, 9, 4, 2, 1, 2); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([] { (void)derive_params(15, 28, 3, 3, 4, 4); }), ErrorCode::kInvalidParams);
  DeriveOptions small;
  small.ext_degree = 10;
  EXPECT_EQ(code_of([&] { (void)derive_params(14, 9, 4, 2, 1, 2, small); }), ErrorCode::kInvalidParams);
  DeriveOptions big;
  big.ext_degree = 13;
  EXPECT_EQ(derive_params(14, 9, 4, 2, 1, 2, big).m, 13);
  // N = 72 does not fit a 64-coordinate element.
  EXPECT_EQ(code_of([] { (void)derive_params(30, 28, 3, 3, 4, 8); }), ErrorCode::kInvalidParams);
}

TEST(DeriveParams, LayoutFillsEveryNodeProperty) {
  int built = 0;
  for (int n = 2; n <= 30; ++n)
    for (int r = 1; r <= 6; ++r)
      for (int delta = 2; delta <= 4; ++delta)
        for (int alpha = 1; alpha <= 3; ++alpha)
          for (int M = r * alpha; M <= 20; ++M) {
            CodeParams p;
            try {
              p = derive_params(n, M, r, delta, alpha, 8);
            } catch (const Error&) {
              continue;
            }
            ++built;
            int nodes = 0, data = 0;
            for (const auto& g : p.groups) {
              ASSERT_EQ(g.first_node, nodes);
              ASSERT_EQ(g.first_data_index, data);
              ASSERT_LE(g.data_nodes, r);
              ASSERT_EQ(g.parity_nodes, delta - 1);
              nodes += g.size();
              data += g.data_nodes;
            }
            ASSERT_EQ(nodes, n);
            ASSERT_EQ(data * alpha, p.N);
            ASSERT_GE(p.N, M);
            ASSERT_EQ(p.D, p.N - M + 1);
          }
  EXPECT_GT(built, 100);
}

TEST(Bounds, KnownValues) {
  EXPECT_EQ(dmin_bound(14, 9, 4, 2, 1), 4);
  EXPECT_EQ(dmin_bound(15, 28, 3, 3, 4), 5);
  EXPECT_EQ(dmin_bound(9, 3, 2, 3, 3), 9);  // M = alpha
  EXPECT_EQ(dmin_scalar_bound(14, 9, 4, 2), 4);
  for (int n = 5; n <= 12; ++n)
    for (int delta = 2; delta <= 4; ++delta) EXPECT_EQ(dmin_scalar_bound(n, 3, 3, delta), n - 3 + 1);
  for (int n = 1; n <= 20; ++n)
    for (int M = 1; M <= n; ++M)
      for (int r = 1; r <= n; ++r)
        for (int delta = 2; delta <= 5; ++delta) ASSERT_EQ(dmin_bound(n, M, r, delta, 1), dmin_scalar_bound(n, M, r, delta));
}

TEST(ErasurePattern, Normalization) {
  const ErasurePattern e({5, 1, 5, 3});
  EXPECT_EQ(e.nodes(), (std::vector<int>{1, 3, 5}));
  EXPECT_EQ(e.mask(), 0b101010u);
  EXPECT_EQ(ErasurePattern::from_mask(e.mask()), e);
  EXPECT_TRUE(e.contains(3));
  EXPECT_FALSE(e.contains(4));
  EXPECT_EQ(e.per_group_counts(example1()), (std::vector<int>{2, 1, 0}));
  EXPECT_EQ(ErasurePattern({0, 5, 13}).per_group_counts(example1()), (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(code_of([] { (void)ErasurePattern({14}).per_group_counts(example1()); }), ErrorCode::kInvalidParams);
}

TEST(Encode, Example1Layout) {
  const LrcCode code(example1());
  const auto& f = code.field();
  const auto file = random_file(code, 1);
  const Codeword cw = code.encode(file);
  const auto c = code.gabidulin().encode(file);
  ASSERT_EQ(cw.shares.size(), 14u);
  // (a1..a4 pa | b1..b4 pb | c1..c3 pc)
  const std::vector<int> data_nodes = {0, 1, 2, 3, 5, 6, 7, 8, 10, 11, 12};
  for (std::size_t i = 0; i < data_nodes.size(); ++i) {
    const auto& b = cw.shares[static_cast<std::size_t>(data_nodes[i])];
    EXPECT_EQ(b.symbols, std::vector<FieldElem>{c[i]});
    EXPECT_FALSE(b.is_parity);
  }
  for (const auto& [parity, first, count] : std::vector<std::tuple<int, int, int>>{{4, 0, 4}, {9, 4, 4}, {13, 8, 3}}) {
    FieldElem x = f.zero();
    for (int j = 0; j < count; ++j) x = f.add(x, c[static_cast<std::size_t>(first + j)]);
    EXPECT_EQ(cw.shares[static_cast<std::size_t>(parity)].symbols[0], x);
    EXPECT_TRUE(cw.shares[static_cast<std::size_t>(parity)].is_parity);
  }
  for (int v = 0; v < 14; ++v) {
    EXPECT_EQ(cw.shares[static_cast<std::size_t>(v)].node_id, v);
    EXPECT_EQ(cw.shares[static_cast<std::size_t>(v)].group_id, v / 5);
  }
}

TEST(Encode, Example2Layout) {
  const LrcCode code(example2());
  const Codeword cw = code.encode(random_file(code, 2));
  ASSERT_EQ(cw.shares.size(), 15u);
  for (int v = 0; v < 15; ++v) {
    const auto& b = cw.shares[static_cast<std::size_t>(v)];
    EXPECT_EQ(b.symbols.size(), 4u);
    EXPECT_EQ(b.group_id, v / 5);
    EXPECT_EQ(b.is_parity, v % 5 >= 3);
  }
}

TEST(Encode, ZeroFileAndShape) {
  const LrcCode code(example2());
  const std::vector<FieldElem> zero(28, code.field().zero());
  for (const auto& b : code.encode(zero).shares)
    for (const auto& s : b.symbols) EXPECT_TRUE(s.is_zero());
  EXPECT_EQ(code_of([&] { (void)code.encode(std::vector<FieldElem>(27, code.field().zero())); }),
            ErrorCode::kShapeMismatch);
}

TEST(EvalPoints, SharesAreEvaluationsAtPoints) {
  for (const CodeParams& p : {example1(), example2(), derive_params(13, 9, 4, 2, 2, 4)}) {
    const LrcCode code(p);
    const auto file = random_file(code, 3);
    const Codeword cw = code.encode(file);
    const linpoly::LinearizedPoly f(file);
    for (int v = 0; v < p.n; ++v)
      for (int t = 0; t < p.alpha; ++t)
        ASSERT_EQ(cw.shares[static_cast<std::size_t>(v)].symbols[static_cast<std::size_t>(t)],
                  linpoly::evaluate(code.field(), f, code.eval_point(v, t)));
  }
}

TEST(EvalPoints, DataAndParityPoints) {
  const LrcCode code(example1());
  const auto& f = code.field();
  EXPECT_EQ(code.eval_point(0, 0), f.basis(0));
  EXPECT_EQ(code.eval_point(12, 0), f.basis(10));
  EXPECT_EQ(code.eval_point(4, 0), f.add(f.add(f.basis(0), f.basis(1)), f.add(f.basis(2), f.basis(3))));
  EXPECT_EQ(code_of([&] { (void)code.eval_point(14, 0); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([&] { (void)code.eval_point(0, 1); }), ErrorCode::kInvalidParams);
}

TEST(EvalPoints, GroupSpanEqualsDataSymbols) {
  for (const CodeParams& p : {example1(), example2()}) {
    const LrcCode code(p);
    for (const auto& g : p.groups) {
      std::vector<FieldElem> pts;
      for (int v = g.first_node; v < g.first_node + g.size(); ++v)
        for (int t = 0; t < p.alpha; ++t) pts.push_back(code.eval_point(v, t));
      EXPECT_EQ(oracle::rank(code.field(), pts), g.data_nodes * p.alpha);
    }
  }
}

TEST(LocalRepair, Example1EveryNode) {
  const LrcCode code(example1());
  const Codeword cw = code.encode(random_file(code, 4));
  for (int target = 0; target < 14; ++target) {
    const auto rep = code.local_repair(slots(cw, {target}), target);
    EXPECT_EQ(rep.block, cw.shares[static_cast<std::size_t>(target)]);
    const auto& g = code.params().groups[static_cast<std::size_t>(code.group_of(target))];
    EXPECT_EQ(static_cast<int>(rep.contacted.size()), g.data_nodes);
    EXPECT_EQ(rep.symbols_downloaded, static_cast<std::size_t>(g.data_nodes));
    for (int v : rep.contacted) {
      EXPECT_EQ(code.group_of(v), code.group_of(target));
      EXPECT_NE(v, target);
    }
  }
  // a2 (node 1) from {a1, a3, a4, pa}.
  EXPECT_EQ(code.local_repair(slots(cw, {1}), 1).contacted, (std::vector<int>{0, 2, 3, 4}));
}

TEST(LocalRepair, Example2AllInGroupPairs) {
  const LrcCode code(example2());
  const Codeword cw = code.encode(random_file(code, 5));
  for (int g = 0; g < 3; ++g)
    for (int a = 0; a < 5; ++a)
      for (int b = a + 1; b < 5; ++b) {
        const int va = 5 * g + a, vb = 5 * g + b;
        const auto s = slots(cw, {va, vb});
        for (int target : {va, vb}) {
          const auto rep = code.local_repair(s, target);
          ASSERT_EQ(rep.block, cw.shares[static_cast<std::size_t>(target)]);
          EXPECT_EQ(rep.contacted.size(), 3u);
          EXPECT_EQ(rep.symbols_downloaded, 12u);
        }
      }
}

TEST(LocalRepair, GroupOverwhelmed) {
  const LrcCode code(example1());
  const Codeword cw = code.encode(random_file(code, 6));
  EXPECT_EQ(code_of([&] { (void)code.local_repair(slots(cw, {0, 1}), 0); }), ErrorCode::kGroupOverwhelmed);
  // Losses elsewhere do not matter.
  EXPECT_NO_THROW((void)code.local_repair(slots(cw, {0, 5, 6, 10}), 0));
  const LrcCode code2(example2());
  const Codeword cw2 = code2.encode(random_file(code2, 6));
  EXPECT_EQ(code_of([&] { (void)code2.local_repair(slots(cw2, {5, 7, 9}), 7); }), ErrorCode::kGroupOverwhelmed);
  EXPECT_EQ(code_of([&] { (void)code.local_repair(slots(cw, {}), 14); }), ErrorCode::kInvalidParams);
}

TEST(Reconstruct, Example1AllTriples) {
  const LrcCode code(example1());
  const auto file = random_file(code, 7);
  const Codeword cw = code.encode(file);
  EXPECT_EQ(code.reconstruct(cw.shares), file);
  int patterns = 0;
  for (int a = 0; a < 14; ++a)
    for (int b = a + 1; b < 14; ++b)
      for (int c = b + 1; c < 14; ++c) {
        ASSERT_EQ(code.reconstruct(surviving(cw, {a, b, c})), file);
        ++patterns;
      }
  EXPECT_EQ(patterns, 364);
}

TEST(Reconstruct, FailsWhenSpanTooSmall) {
  const LrcCode code(example1());
  const Codeword cw = code.encode(random_file(code, 8));
  EXPECT_EQ(code_of([&] { (void)code.reconstruct(surviving(cw, {0, 1, 2, 3})); }), ErrorCode::kRankDeficient);
  EXPECT_EQ(code_of([&] { (void)code.reconstruct(std::vector<NodeBlock>{}); }), ErrorCode::kRankDeficient);
  auto dup = cw.shares;
  dup.push_back(cw.shares[0]);
  EXPECT_EQ(code_of([&] { (void)code.reconstruct(dup); }), ErrorCode::kInvalidParams);
  auto tampered = cw.shares;
  tampered[3].symbols[0] = code.field().add(tampered[3].symbols[0], code.field().one());
  EXPECT_EQ(code_of([&] { (void)code.reconstruct(tampered); }), ErrorCode::kInconsistent);
}

TEST(Reconstruct, Example2SampledFourFailures) {
  const LrcCode code(example2());
  const auto file = random_file(code, 9);
  const Codeword cw = code.encode(file);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<int> nodes(15);
    for (int i = 0; i < 15; ++i) nodes[static_cast<std::size_t>(i)] = i;
    std::shuffle(nodes.begin(), nodes.end(), rng);
    nodes.resize(4);
    ASSERT_EQ(code.reconstruct(surviving(cw, nodes)), file);
  }
}

TEST(Reconstruct, SucceedsExactlyWhenSurvivorsSpanFileProperty) {
  // Decoding succeeds iff the surviving evaluation points span >= M dimensions.
  std::mt19937_64 rng(10);
  const std::vector<CodeParams> codes = {derive_params(9, 4, 2, 2, 1, 2), derive_params(10, 5, 3, 3, 1, 8),
                                         derive_params(12, 6, 2, 2, 2, 2), derive_params(11, 7, 3, 2, 1, 4)};
  for (const CodeParams& p : codes) {
    const LrcCode code(p);
    const auto file = random_file(code, rng());
    const Codeword cw = code.encode(file);
    for (int trial = 0; trial < 150; ++trial) {
      std::vector<int> erased;
      for (int v = 0; v < p.n; ++v)
        if (rng() % 3 == 0) erased.push_back(v);
      std::vector<FieldElem> pts;
      for (const auto& b : surviving(cw, erased))
        for (int t = 0; t < p.alpha; ++t) pts.push_back(code.eval_point(b.node_id, t));
      if (oracle::rank(code.field(), pts) >= p.M)
        ASSERT_EQ(code.reconstruct(surviving(cw, erased)), file);
      else
        ASSERT_EQ(code_of([&] { (void)code.reconstruct(surviving(cw, erased)); }), ErrorCode::kRankDeficient);
    }
  }
}
