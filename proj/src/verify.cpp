#include "lrc/verify.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "lrc/error.hpp"

namespace lrc::verify {

using gf::FieldElem;
using mds::NodeBlock;

ParamDecomposition ParamDecomposition::of(const CodeParams& p) {
  ParamDecomposition d;
  const int data_nodes = p.N / p.alpha;
  d.alpha0 = data_nodes / p.r;
  d.beta0 = data_nodes % p.r;
  d.gamma1 = p.M % p.alpha;
  const int whole = p.M / p.alpha;
  d.alpha1 = whole / p.r;
  d.beta1 = whole % p.r;
  return d;
}

int ParamDecomposition::rank_erasure_budget(int r, int alpha) const noexcept {
  return r * alpha * (alpha0 - alpha1) + alpha * (beta0 - beta1) - gamma1;
}

int surviving_span(const LrcCode& code, const ErasurePattern& pattern) {
  const CodeParams& p = code.params();
  gf::BaseSpan span(code.field());
  for (int node = 0; node < p.n; ++node) {
    if (pattern.contains(node)) continue;
    for (int t = 0; t < p.alpha; ++t) span.insert(code.eval_point(node, t));
  }
  return span.dim();
}

int node_to_rank_erasures(const LrcCode& code, const ErasurePattern& pattern) {
  return code.params().N - surviving_span(code, pattern);
}

namespace {

std::uint64_t binomial_capped(int n, int k, std::uint64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  // Exact while below cap; C(n, i) fits comfortably before the cap check trips.
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (c > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(c);
}

std::uint64_t group_mask(const GroupLayout& gl) {
  const std::uint64_t ones = gl.size() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << gl.size()) - 1;
  return ones << gl.first_node;
}

int groups_touched(const CodeParams& p, std::uint64_t mask) {
  int count = 0;
  for (const GroupLayout& gl : p.groups)
    if (mask & group_mask(gl)) ++count;
  return count;
}

// Index of the first pattern for which `ok` is false, or npos. With several
// workers the reported index is still the minimum failing one.
template <class Ok>
std::size_t first_failure(const std::vector<std::uint64_t>& patterns, int workers, const Ok& ok) {
  constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  if (workers <= 1 || patterns.size() < 2) {
    for (std::size_t i = 0; i < patterns.size(); ++i)
      if (!ok(patterns[i])) return i;
    return npos;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{npos};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    try {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= patterns.size() || i > best.load()) return;
        if (!ok(patterns[i])) {
          std::size_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      best.store(0);
    }
  };
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) threads.emplace_back(run);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
  return best.load();
}

// Smallest failing size, searched downward from the bound and upward past it.
template <class Ok>
DminResult search_dmin(const LrcCode& code, const SweepOptions& options, const Ok& ok) {
  constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  const CodeParams& p = code.params();
  DminResult result;

  struct Outcome {
    std::size_t failure;
    std::vector<std::uint64_t> patterns;
  };
  auto run = [&](int size) {
    Outcome o{npos, patterns_of_size(p, size, options.max_patterns)};
    o.failure = first_failure(o.patterns, options.workers, ok);
    return o;
  };

  int e = std::clamp(p.dmin - 1, 0, p.n);
  Outcome at = run(e);
  if (at.failure == npos) {
    // All size-e patterns recoverable; find the first size that is not.
    for (;;) {
      result.patterns_recoverable = at.patterns.size();
      if (e + 1 > p.n) {
        result.dmin = p.n + 1;
        return result;
      }
      Outcome up = run(e + 1);
      if (up.failure != npos) {
        result.dmin = e + 1;
        result.witness = ErasurePattern::from_mask(up.patterns[up.failure]);
        return result;
      }
      ++e;
      at = std::move(up);
    }
  }
  for (;;) {
    const ErasurePattern witness = ErasurePattern::from_mask(at.patterns[at.failure]);
    if (e == 0) {
      result.dmin = 0;
      result.witness = witness;
      return result;
    }
    Outcome down = run(e - 1);
    if (down.failure == npos) {
      result.dmin = e;
      result.witness = witness;
      result.patterns_recoverable = down.patterns.size();
      return result;
    }
    --e;
    at = std::move(down);
  }
}

}  // namespace

std::vector<std::uint64_t> patterns_of_size(const CodeParams& p, int size, std::uint64_t budget) {
  if (p.n > 63) throw Error(ErrorCode::kTooLarge, "more than 63 nodes");
  if (size < 0 || size > p.n) return {};
  const std::uint64_t count = binomial_capped(p.n, size, budget);
  if (count > budget)
    throw Error(ErrorCode::kTooLarge, "C(" + std::to_string(p.n) + ", " + std::to_string(size) +
                                          ") exceeds the enumeration budget of " + std::to_string(budget));
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<int> idx(static_cast<std::size_t>(size));
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    std::uint64_t mask = 0;
    for (int v : idx) mask |= std::uint64_t{1} << v;
    out.push_back(mask);
    int i = size - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == p.n - size + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < size; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j) - 1] + 1;
  }
  std::vector<std::pair<int, std::uint64_t>> keyed;
  keyed.reserve(out.size());
  for (std::uint64_t m : out) keyed.emplace_back(groups_touched(p, m), m);
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < keyed.size(); ++i) out[i] = keyed[i].second;
  return out;
}

DminResult algebraic_dmin(const LrcCode& code, const SweepOptions& options) {
  const CodeParams& p = code.params();
  return search_dmin(code, options, [&](std::uint64_t mask) {
    return surviving_span(code, ErasurePattern::from_mask(mask)) >= p.M;
  });
}

DminResult operational_dmin(const LrcCode& code, const Codeword& codeword, std::span<const FieldElem> file,
                            const SweepOptions& options) {
  std::atomic<std::uint64_t> mismatches{0};
  DminResult r = search_dmin(code, options, [&](std::uint64_t mask) {
    std::vector<NodeBlock> surviving;
    for (const NodeBlock& b : codeword.shares)
      if (!((mask >> b.node_id) & 1)) surviving.push_back(b);
    try {
      const std::vector<FieldElem> decoded = code.reconstruct(surviving);
      if (!std::equal(decoded.begin(), decoded.end(), file.begin(), file.end())) {
        ++mismatches;
        return false;
      }
      return true;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kRankDeficient) return false;
      ++mismatches;
      return false;
    }
  });
  r.decode_mismatches = mismatches.load();
  return r;
}

// ---------------------------------------------------------------------------

namespace {

struct Placement {
  std::vector<int> whole;  // groups erased entirely
  int partial_group = -1;
  int partial_count = 0;
};

void combinations(const std::vector<int>& items, int k, std::vector<std::vector<int>>& out) {
  if (k < 0 || k > static_cast<int>(items.size())) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  const int n = static_cast<int>(items.size());
  for (;;) {
    std::vector<int> pick;
    for (int i : idx) pick.push_back(items[static_cast<std::size_t>(i)]);
    out.push_back(std::move(pick));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j) - 1] + 1;
  }
}

// Every way to erase `whole_count` of the full groups entirely plus
// `partial_count` nodes of one further group drawn from `partial_candidates`.
std::vector<Placement> placements(const std::vector<int>& full, int whole_count, const std::vector<int>& fixed_whole,
                                  bool partial_in_full, bool partial_in_small, int small, int partial_count) {
  std::vector<Placement> out;
  std::vector<std::vector<int>> picks;
  combinations(full, whole_count, picks);
  for (const auto& pick : picks) {
    std::vector<int> candidates;
    if (partial_in_full)
      for (int gi : full)
        if (std::find(pick.begin(), pick.end(), gi) == pick.end()) candidates.push_back(gi);
    if (partial_in_small && small >= 0 &&
        std::find(fixed_whole.begin(), fixed_whole.end(), small) == fixed_whole.end())
      candidates.push_back(small);
    for (int gi : candidates) {
      Placement pl;
      pl.whole = pick;
      pl.whole.insert(pl.whole.end(), fixed_whole.begin(), fixed_whole.end());
      pl.partial_group = gi;
      pl.partial_count = partial_count;
      out.push_back(std::move(pl));
    }
  }
  return out;
}

}  // namespace

std::vector<WorstCasePattern> worst_case_patterns(const CodeParams& p, const ParamDecomposition& d) {
  if (!p.certified()) throw Error(ErrorCode::kConditionsNotMet, "parameters are not certified optimal");
  const int file_nodes_mod = ceil_div(p.M, p.alpha) % p.r;
  const bool divisible = p.N % (p.r * p.alpha) == 0;
  const bool remainder = d.beta0 > 0 && d.beta0 >= file_nodes_mod && file_nodes_mod > 0;
  if (!(divisible || remainder) || d.alpha0 < d.alpha1)
    throw Error(ErrorCode::kConditionsNotMet, "optimality conditions on N do not hold");

  const int r = p.r;
  const int a = p.alpha;
  const int local_parity = p.delta - 1;
  std::vector<int> full;
  int small = -1;
  for (int gi = 0; gi < p.g; ++gi) {
    if (p.groups[static_cast<std::size_t>(gi)].data_nodes == r)
      full.push_back(gi);
    else
      small = gi;
  }
  const int span_lost_whole = r * a * (d.alpha0 - d.alpha1);

  struct Family {
    std::string subcase;
    std::vector<Placement> placements;
    int expected;
  };
  std::vector<Family> families;
  if (d.beta0 == 0) {
    if (d.gamma1 == 0 && d.beta1 == 0) {
      families.push_back({"1a", placements(full, d.alpha0 - d.alpha1, {}, true, false, small, local_parity),
                          span_lost_whole});
    } else if (d.gamma1 == 0) {
      families.push_back({"1b",
                          placements(full, d.alpha0 - d.alpha1 - 1, {}, true, false, small, r - d.beta1 + local_parity),
                          span_lost_whole - a * d.beta1});
    } else {
      families.push_back(
          {"1c", placements(full, d.alpha0 - d.alpha1 - 1, {}, true, false, small, r - d.beta1 - 1 + local_parity),
           span_lost_whole - a * d.beta1 - a});
    }
  } else {
    const int extra = d.gamma1 == 0 ? 0 : 1;
    const std::string name = d.gamma1 == 0 ? "2a" : "2b";
    const int expected = span_lost_whole + a * (d.beta0 - d.beta1) - a * extra;
    families.push_back({name,
                        placements(full, d.alpha0 - d.alpha1, {}, true, true, small,
                                   d.beta0 - d.beta1 - extra + local_parity),
                        expected});
    if (d.alpha0 - d.alpha1 >= 1) {
      families.push_back({name + "-smallest-group",
                          placements(full, d.alpha0 - d.alpha1 - 1, {small}, true, false, small,
                                     r - d.beta1 - extra + local_parity),
                          expected});
    }
  }

  constexpr std::size_t kMaxPatterns = 512;
  std::vector<WorstCasePattern> out;
  for (const Family& fam : families) {
    for (const Placement& pl : fam.placements) {
      const GroupLayout& pg = p.groups[static_cast<std::size_t>(pl.partial_group)];
      if (pl.partial_count <= 0 || pl.partial_count >= pg.size())
        throw Error(ErrorCode::kInternal, "partial group erasure count out of range");
      std::vector<int> base;
      for (int gi : pl.whole) {
        const GroupLayout& gl = p.groups[static_cast<std::size_t>(gi)];
        for (int v = 0; v < gl.size(); ++v) base.push_back(gl.first_node + v);
      }
      // Two node choices inside the partial group: data nodes first, parity nodes first.
      for (bool parity_first : {false, true}) {
        std::vector<int> nodes = base;
        std::vector<int> order(static_cast<std::size_t>(pg.size()));
        std::iota(order.begin(), order.end(), pg.first_node);
        if (parity_first) std::reverse(order.begin(), order.end());
        nodes.insert(nodes.end(), order.begin(), order.begin() + pl.partial_count);
        WorstCasePattern w;
        w.subcase = fam.subcase;
        w.pattern = ErasurePattern(nodes);
        w.expected_rank_erasures = fam.expected;
        nodes.push_back(order[static_cast<std::size_t>(pl.partial_count)]);
        w.extension = ErasurePattern(std::move(nodes));
        if (std::none_of(out.begin(), out.end(), [&](const WorstCasePattern& o) { return o.pattern == w.pattern; }))
          out.push_back(std::move(w));
        if (out.size() >= kMaxPatterns) return out;
      }
    }
  }
  return out;
}

bool WorstCaseCheck::ok() const noexcept { return size_ok && within_budget && decodes && extension_fails; }

namespace {

bool decodes_correctly(const LrcCode& code, const Codeword& cw, std::span<const FieldElem> file,
                       const ErasurePattern& pattern) {
  std::vector<NodeBlock> surviving;
  for (const NodeBlock& b : cw.shares)
    if (!pattern.contains(b.node_id)) surviving.push_back(b);
  try {
    const auto decoded = code.reconstruct(surviving);
    return std::equal(decoded.begin(), decoded.end(), file.begin(), file.end());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kRankDeficient) return false;
    throw;
  }
}

}  // namespace

std::vector<WorstCaseCheck> check_worst_case(const LrcCode& code, const Codeword& cw,
                                             std::span<const FieldElem> file) {
  const CodeParams& p = code.params();
  std::vector<WorstCaseCheck> out;
  for (WorstCasePattern& w : worst_case_patterns(p, ParamDecomposition::of(p))) {
    WorstCaseCheck c;
    c.realized_rank_erasures = node_to_rank_erasures(code, w.pattern);
    c.size_ok = static_cast<int>(w.pattern.size()) == p.dmin - 1;
    c.within_budget = c.realized_rank_erasures == w.expected_rank_erasures && c.realized_rank_erasures <= p.D - 1;
    c.decodes = decodes_correctly(code, cw, file, w.pattern);
    c.extension_fails = !decodes_correctly(code, cw, file, w.extension);
    c.pattern = std::move(w);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<FieldElem> random_file(const LrcCode& code, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<FieldElem> file;
  for (int i = 0; i < code.params().M; ++i) file.push_back(gf::random_element(code.field(), rng));
  return file;
}

DminReport verify_code(const LrcCode& code, std::uint64_t seed, const SweepOptions& options) {
  const auto file = random_file(code, seed);
  const Codeword cw = code.encode(file);
  DminReport report;
  report.bound = code.params().dmin;
  report.algebraic = algebraic_dmin(code, options);
  report.operational = operational_dmin(code, cw, file, options);
  report.agree = report.algebraic.dmin == report.operational.dmin && report.operational.decode_mismatches == 0;
  report.bound_achieved = report.agree && report.operational.dmin == report.bound;
  if (code.params().certified()) report.worst_case = check_worst_case(code, cw, file);
  return report;
}

bool ProbeReport::ok() const noexcept {
  return sampled_failures == 0 &&
         std::all_of(worst_case.begin(), worst_case.end(), [](const WorstCaseCheck& c) { return c.ok(); });
}

ProbeReport probe(const LrcCode& code, std::uint64_t seed, std::uint64_t samples) {
  const CodeParams& p = code.params();
  const auto file = random_file(code, seed);
  const Codeword cw = code.encode(file);
  ProbeReport report;
  report.bound = p.dmin;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const int size = std::clamp(p.dmin - 1, 0, p.n);
  std::vector<int> nodes(static_cast<std::size_t>(p.n));
  for (std::uint64_t i = 0; i < samples; ++i) {
    std::iota(nodes.begin(), nodes.end(), 0);
    for (int j = 0; j < size; ++j) {
      const auto k = static_cast<std::size_t>(j) + static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(p.n - j));
      std::swap(nodes[static_cast<std::size_t>(j)], nodes[k]);
    }
    const ErasurePattern pattern(std::vector<int>(nodes.begin(), nodes.begin() + size));
    ++report.sampled;
    if (!decodes_correctly(code, cw, file, pattern)) ++report.sampled_failures;
  }
  if (p.certified()) report.worst_case = check_worst_case(code, cw, file);
  return report;
}

// ---------------------------------------------------------------------------

int dmin_bound_single_parity(int n, int M, int r, int alpha) {
  return n - ceil_div(M, alpha) - ceil_div(M, r * alpha) + 2;
}

BoundSweepReport verify_bound_sweep(const BoundSweepRanges& ranges) {
  BoundSweepReport rep;
  auto note = [&](const std::string& s) {
    if (rep.failures.size() < 16) rep.failures.push_back(s);
  };
  for (int n = 1; n <= ranges.max_n; ++n) {
    for (int alpha = 1; alpha <= ranges.max_alpha; ++alpha) {
      for (int M = 1; M <= n * alpha; ++M) {
        for (int r = 1; r <= n; ++r) {
          for (int delta = 1; delta <= ranges.max_delta; ++delta) {
            const int general = dmin_bound(n, M, r, delta, alpha);
            const std::string tag = "(n=" + std::to_string(n) + ",M=" + std::to_string(M) + ",r=" +
                                    std::to_string(r) + ",delta=" + std::to_string(delta) +
                                    ",alpha=" + std::to_string(alpha) + ")";
            if (delta == 2) {
              ++rep.single_parity_checked;
              if (general != dmin_bound_single_parity(n, M, r, alpha)) {
                ++rep.single_parity_mismatches;
                note("single-parity " + tag);
              }
            }
            if (alpha == 1) {
              ++rep.scalar_checked;
              if (general != dmin_scalar_bound(n, M, r, delta)) {
                ++rep.scalar_mismatches;
                note("scalar " + tag);
              }
            }
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace lrc::verify
