#pragma once

// Command implementations behind the `lrc` tool. Each returns a process exit
// code and writes reports to `out`, diagnostics to `err`.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "lrc/error.hpp"
#include "lrc/lrc.hpp"
#include "lrc/simulate.hpp"
#include "lrc/verify.hpp"

namespace lrc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitParams = 2;
inline constexpr int kExitDecode = 3;
inline constexpr int kExitVerify = 4;

struct ParamArgs {
  int n = 0;
  int M = 0;
  int r = 0;
  int delta = 0;
  int alpha = 1;
  unsigned q = 2;
  bool force = false;
  int ext_degree = 0;
};

CodeParams derive(const ParamArgs& args);

nlohmann::json to_json(const CodeParams& params);
/// Accepts the output of `params`; re-derives and checks N, m and dmin.
CodeParams params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ErasurePattern& pattern);
nlohmann::json to_json(const verify::DminReport& report);
nlohmann::json to_json(const verify::ProbeReport& report);
nlohmann::json to_json(const sim::SimStats& stats);

/// Maps library errors onto exit codes.
int exit_code_for(ErrorCode code);

int cmd_params(const ParamArgs& args, std::ostream& out, std::ostream& err);
int cmd_encode(const CodeParams& params, const std::filesystem::path& input, const std::filesystem::path& out_dir,
               std::ostream& out, std::ostream& err);
int cmd_repair(const std::filesystem::path& share_dir, int node_id, std::ostream& out, std::ostream& err);
int cmd_reconstruct(const std::filesystem::path& share_dir, const std::filesystem::path& output, std::ostream& out,
                    std::ostream& err);

enum class VerifyLevel { kQuick, kExhaustive };

struct VerifyArgs {
  VerifyLevel level = VerifyLevel::kExhaustive;
  int workers = 1;
  std::uint64_t seed = 1;
  std::uint64_t samples = 1000;
  std::uint64_t budget = verify::kDefaultPatternBudget;
};

int cmd_verify(const CodeParams& params, const VerifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_simulate(const sim::SimConfig& config, std::ostream& out, std::ostream& err);

}  // namespace lrc::cli
