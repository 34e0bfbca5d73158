#pragma once

// Seeded failure/repair simulator over one encoded codeword.
//
// Each round injects node failures, repairs them locally where the group
// still has at most delta - 1 losses, and falls back to global
// reconstruction otherwise. A round whose surviving shares no longer span
// the file is a data-loss event; the codeword is then restored from the
// original file so the next round starts clean.

#include <cstdint>
#include <string>
#include <vector>

#include "lrc/lrc.hpp"

namespace lrc::sim {

struct FailureSpec {
  enum class Kind { kFixed, kBernoulli };
  Kind kind = Kind::kFixed;
  int count = 0;         // kFixed: failures per round
  double probability = 0;  // kBernoulli: per-node failure probability per round

  /// "fixed:K" or "bernoulli:P".
  static FailureSpec parse(const std::string& text);
  std::string to_string() const;
};

struct InjectedFailure {
  int round = 0;
  std::vector<int> nodes;
};

struct SimConfig {
  CodeParams params;
  int rounds = 0;
  FailureSpec failures;
  std::uint64_t seed = 0;
  std::vector<InjectedFailure> injected;
};

struct LossEvent {
  int round = 0;
  std::vector<int> erased;
};

struct SimStats {
  int rounds = 0;
  std::uint64_t failures = 0;
  std::uint64_t local_repairs = 0;
  std::uint64_t reconstruct_fallbacks = 0;
  std::uint64_t loss_events = 0;
  std::uint64_t patterns_beyond_dmin = 0;
  std::uint64_t symbols_downloaded = 0;
  std::uint64_t local_nodes_contacted = 0;
  int min_local_contacted = 0;
  int max_local_contacted = 0;
  std::uint64_t repair_mismatches = 0;
  std::vector<LossEvent> losses;

  double mean_nodes_contacted() const noexcept;
};

SimStats simulate(const SimConfig& config);

}  // namespace lrc::sim
