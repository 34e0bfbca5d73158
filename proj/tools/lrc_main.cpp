// lrc: parameter derivation, share encoding, repair, reconstruction,
// verification and simulation for the two-stage locally repairable code.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lrc/commands.hpp"
#include "lrc/error.hpp"

namespace {

using namespace lrc;
using namespace lrc::cli;

struct CodeOptions {
  ParamArgs args;
  std::string params_file;
};

void add_code_options(CLI::App* cmd, CodeOptions& o, bool allow_file) {
  cmd->add_option("--n", o.args.n, "number of storage nodes");
  cmd->add_option("--M", o.args.M, "file size in F_q^m symbols");
  cmd->add_option("--r", o.args.r, "locality");
  cmd->add_option("--delta", o.args.delta, "local distance");
  cmd->add_option("--alpha", o.args.alpha, "symbols per node")->default_val(1);
  cmd->add_option("--q", o.args.q, "base field size (power of two, at most 256)")->default_val(2);
  cmd->add_option("--ext-degree", o.args.ext_degree, "extension degree m (default N)");
  cmd->add_flag("--force", o.args.force, "build even when no optimality condition holds");
  if (allow_file) cmd->add_option("--params", o.params_file, "JSON parameter file written by `lrc params`");
}

CodeParams resolve(const CodeOptions& o) {
  if (o.params_file.empty()) {
    if (o.args.n <= 0 || o.args.M <= 0 || o.args.r <= 0 || o.args.delta <= 0)
      throw Error(ErrorCode::kInvalidParams, "give --params or all of --n --M --r --delta");
    return derive(o.args);
  }
  std::ifstream in(o.params_file);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + o.params_file);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidParams, std::string("parameter file: ") + e.what());
  }
  return params_from_json(j);
}

// "ROUND:a,b,c"
sim::InjectedFailure parse_injection(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::kInvalidParams, "--inject expects ROUND:NODE[,NODE...]");
  sim::InjectedFailure f;
  try {
    f.round = std::stoi(text.substr(0, colon));
    std::stringstream ss(text.substr(colon + 1));
    for (std::string tok; std::getline(ss, tok, ',');) f.nodes.push_back(std::stoi(tok));
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kInvalidParams, "--inject expects ROUND:NODE[,NODE...]");
  }
  return f;
}

template <class Fn>
int with_params(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally repairable codes from Gabidulin precoding and local MDS array codes"};
  app.require_subcommand(1);

  CodeOptions params_opts;
  auto* params_cmd = app.add_subcommand("params", "derive code parameters and print them as JSON");
  add_code_options(params_cmd, params_opts, false);
  for (const char* name : {"--n", "--M", "--r", "--delta"}) params_cmd->get_option(name)->required();

  CodeOptions encode_opts;
  std::string encode_input, encode_out;
  auto* encode_cmd = app.add_subcommand("encode", "encode a file into share files");
  add_code_options(encode_cmd, encode_opts, true);
  encode_cmd->add_option("--input", encode_input, "file to encode")->required();
  encode_cmd->add_option("--out", encode_out, "output directory")->required();

  std::string repair_dir;
  int repair_node = -1;
  auto* repair_cmd = app.add_subcommand("repair", "rebuild a missing share from its local group");
  repair_cmd->add_option("--dir", repair_dir, "share directory")->required();
  repair_cmd->add_option("--node", repair_node, "node id to rebuild")->required();

  std::string recon_dir, recon_output;
  auto* recon_cmd = app.add_subcommand("reconstruct", "recover the original file from surviving shares");
  recon_cmd->add_option("--dir", recon_dir, "share directory")->required();
  recon_cmd->add_option("--output", recon_output, "output file")->required();

  CodeOptions verify_opts;
  VerifyArgs verify_args;
  std::string level = "exhaustive";
  bool quick = false, exhaustive = false;
  auto* verify_cmd = app.add_subcommand("verify", "check the minimum distance against the bound");
  add_code_options(verify_cmd, verify_opts, true);
  verify_cmd->add_option("--level", level, "quick or exhaustive")->check(CLI::IsMember({"quick", "exhaustive"}));
  verify_cmd->add_flag("--quick", quick, "same as --level quick");
  verify_cmd->add_flag("--exhaustive", exhaustive, "same as --level exhaustive");
  verify_cmd->add_option("--workers", verify_args.workers, "worker threads for the exhaustive sweep")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify_args.seed, "seed for the test file and sampling");
  verify_cmd->add_option("--samples", verify_args.samples, "patterns sampled at the quick level");
  verify_cmd->add_option("--budget", verify_args.budget, "maximum patterns enumerated");

  CodeOptions sim_opts;
  sim::SimConfig sim_config;
  std::string failures = "fixed:1";
  std::vector<std::string> injections;
  auto* sim_cmd = app.add_subcommand("simulate", "run the seeded failure and repair simulator");
  add_code_options(sim_cmd, sim_opts, true);
  sim_cmd->add_option("--rounds", sim_config.rounds, "number of rounds")->default_val(100);
  sim_cmd->add_option("--failures", failures, "fixed:K or bernoulli:P per round")->default_val("fixed:1");
  sim_cmd->add_option("--seed", sim_config.seed, "random seed")->default_val(1);
  sim_cmd->add_option("--inject", injections, "extra failures ROUND:NODE[,NODE...]; repeatable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParams;
  }

  if (*params_cmd) return cmd_params(params_opts.args, std::cout, std::cerr);
  if (*encode_cmd)
    return with_params([&] { return cmd_encode(resolve(encode_opts), encode_input, encode_out, std::cout, std::cerr); });
  if (*repair_cmd) return cmd_repair(repair_dir, repair_node, std::cout, std::cerr);
  if (*recon_cmd) return cmd_reconstruct(recon_dir, recon_output, std::cout, std::cerr);
  if (*verify_cmd) {
    if (quick && exhaustive) {
      std::cerr << "error: --quick and --exhaustive are exclusive\n";
      return kExitParams;
    }
    verify_args.level = (quick || (!exhaustive && level == "quick")) ? VerifyLevel::kQuick : VerifyLevel::kExhaustive;
    return with_params([&] { return cmd_verify(resolve(verify_opts), verify_args, std::cout, std::cerr); });
  }
  return with_params([&] {
    sim_config.params = resolve(sim_opts);
    sim_config.failures = sim::FailureSpec::parse(failures);
    for (const auto& text : injections) sim_config.injected.push_back(parse_injection(text));
    return cmd_simulate(sim_config, std::cout, std::cerr);
  });
}
