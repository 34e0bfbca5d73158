#pragma once

// Brute-force oracles for the minimum distance of constructed codes.
//
// Two independent routes: the algebraic oracle measures the F_q-span of the
// evaluation points that survive an erasure pattern; the operational oracle
// actually runs reconstruction and compares the result to the encoded file.
// Both enumerate every pattern of the relevant sizes and refuse (TooLarge)
// rather than sample when the enumeration budget is exceeded.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrc/lrc.hpp"

namespace lrc::verify {

inline constexpr std::uint64_t kDefaultPatternBudget = 10'000'000;

/// N = alpha (alpha0 r + beta0), M = alpha (alpha1 r + beta1) + gamma1.
struct ParamDecomposition {
  int alpha0 = 0;
  int beta0 = 0;
  int alpha1 = 0;
  int beta1 = 0;
  int gamma1 = 0;

  static ParamDecomposition of(const CodeParams& params);
  /// r alpha (alpha0 - alpha1) + alpha (beta0 - beta1) - gamma1, which equals D - 1.
  int rank_erasure_budget(int r, int alpha) const noexcept;
};

struct SweepOptions {
  int workers = 1;
  std::uint64_t max_patterns = kDefaultPatternBudget;
};

struct DminResult {
  int dmin = 0;
  /// Patterns of size dmin - 1, all of which were recoverable.
  std::uint64_t patterns_recoverable = 0;
  /// First unrecoverable pattern of size dmin in search order.
  std::optional<ErasurePattern> witness;
  /// Operational only: decodes that returned a wrong file.
  std::uint64_t decode_mismatches = 0;
};

/// F_q-span of the evaluation points stored on nodes outside `pattern`.
int surviving_span(const LrcCode& code, const ErasurePattern& pattern);

/// N minus the surviving span: the rank erasures the pattern induces.
int node_to_rank_erasures(const LrcCode& code, const ErasurePattern& pattern);

/// All patterns of `size` erased nodes as bitmasks, fewest groups touched first.
std::vector<std::uint64_t> patterns_of_size(const CodeParams& params, int size, std::uint64_t budget);

/// n - max{|A| : span(points(A)) < M}.
DminResult algebraic_dmin(const LrcCode& code, const SweepOptions& options = {});

/// Largest d such that reconstruction succeeds for every pattern of d - 1 erasures.
DminResult operational_dmin(const LrcCode& code, const Codeword& codeword, std::span<const gf::FieldElem> file,
                            const SweepOptions& options = {});

struct WorstCasePattern {
  std::string subcase;
  ErasurePattern pattern;
  int expected_rank_erasures = 0;
  /// One more node in the pattern's partially erased group; must be fatal.
  ErasurePattern extension;
};

/// The worst-case erasure families from the optimality argument: whole groups
/// erased plus one partially erased group, for every group placement.
/// Throws ConditionsNotMet if the code is not certified optimal.
std::vector<WorstCasePattern> worst_case_patterns(const CodeParams& params, const ParamDecomposition& decomposition);

struct WorstCaseCheck {
  WorstCasePattern pattern;
  int realized_rank_erasures = 0;
  bool size_ok = false;
  bool within_budget = false;
  bool decodes = false;
  bool extension_fails = false;

  bool ok() const noexcept;
};

std::vector<WorstCaseCheck> check_worst_case(const LrcCode& code, const Codeword& codeword,
                                             std::span<const gf::FieldElem> file);

struct DminReport {
  int bound = 0;
  DminResult algebraic;
  DminResult operational;
  bool agree = false;
  bool bound_achieved = false;
  std::vector<WorstCaseCheck> worst_case;
};

/// Runs both oracles and the worst-case checks on a pseudo-random file.
DminReport verify_code(const LrcCode& code, std::uint64_t seed, const SweepOptions& options = {});

/// Non-exhaustive check for codes beyond the enumeration budget.
struct ProbeReport {
  int bound = 0;
  std::uint64_t sampled = 0;
  std::uint64_t sampled_failures = 0;
  std::vector<WorstCaseCheck> worst_case;

  bool ok() const noexcept;
};

ProbeReport probe(const LrcCode& code, std::uint64_t seed, std::uint64_t samples);

/// n - ceil(M/alpha) - ceil(M/(r alpha)) + 2, the single-parity bound.
int dmin_bound_single_parity(int n, int M, int r, int alpha);

struct BoundSweepRanges {
  int max_n = 30;
  int max_delta = 5;
  int max_alpha = 4;
};

struct BoundSweepReport {
  std::uint64_t single_parity_checked = 0;
  std::uint64_t single_parity_mismatches = 0;
  std::uint64_t scalar_checked = 0;
  std::uint64_t scalar_mismatches = 0;
  std::vector<std::string> failures;  // first few, for diagnostics

  bool ok() const noexcept { return single_parity_mismatches == 0 && scalar_mismatches == 0; }
};

/// Checks that the general bound collapses to the single-parity bound at
/// delta = 2 and to the scalar bound at alpha = 1 for n, r <= max_n,
/// M <= n alpha, delta <= max_delta, alpha <= max_alpha.
BoundSweepReport verify_bound_sweep(const BoundSweepRanges& ranges = {});

/// Deterministic pseudo-random file of M symbols.
std::vector<gf::FieldElem> random_file(const LrcCode& code, std::uint64_t seed);

}  // namespace lrc::verify
