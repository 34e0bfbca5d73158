#include "lrc/commands.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>

#include "lrc/error.hpp"
#include "lrc/share_file.hpp"

namespace lrc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

CodeParams derive(const ParamArgs& a) {
  DeriveOptions opt;
  opt.force = a.force;
  opt.ext_degree = a.ext_degree;
  return derive_params(a.n, a.M, a.r, a.delta, a.alpha, a.q, opt);
}

json to_json(const CodeParams& p) {
  json groups = json::array();
  for (std::size_t i = 0; i < p.groups.size(); ++i) {
    const GroupLayout& gl = p.groups[i];
    groups.push_back({{"group", i},
                      {"first_node", gl.first_node},
                      {"data_nodes", gl.data_nodes},
                      {"parity_nodes", gl.parity_nodes},
                      {"size", gl.size()}});
  }
  return {{"n", p.n},         {"M", p.M},
          {"r", p.r},         {"delta", p.delta},
          {"alpha", p.alpha}, {"q", p.q},
          {"s", p.s},         {"m", p.m},
          {"N", p.N},         {"D", p.D},
          {"g", p.g},         {"beta0", p.beta0},
          {"dmin", p.dmin},   {"dmin_certified", p.certified()},
          {"optimality_case", std::string(to_string(p.optimality))},
          {"groups", groups}};
}

CodeParams params_from_json(const json& j) {
  try {
    ParamArgs a;
    a.n = j.at("n").get<int>();
    a.M = j.at("M").get<int>();
    a.r = j.at("r").get<int>();
    a.delta = j.at("delta").get<int>();
    a.alpha = j.at("alpha").get<int>();
    a.q = j.at("q").get<unsigned>();
    a.ext_degree = j.value("m", 0);
    a.force = !j.value("dmin_certified", true);
    CodeParams p = derive(a);
    if ((j.contains("N") && j["N"].get<int>() != p.N) || (j.contains("dmin") && j["dmin"].get<int>() != p.dmin))
      throw Error(ErrorCode::kInvalidParams, "parameter file disagrees with derived N or dmin");
    return p;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidParams, std::string("parameter file: ") + e.what());
  }
}

json to_json(const ErasurePattern& pattern) { return pattern.nodes(); }

namespace {

json dmin_result_json(const verify::DminResult& r) {
  json j = {{"dmin", r.dmin}, {"patterns_recoverable", r.patterns_recoverable}};
  j["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
  return j;
}

json worst_case_json(const std::vector<verify::WorstCaseCheck>& checks) {
  json arr = json::array();
  for (const auto& c : checks) {
    arr.push_back({{"subcase", c.pattern.subcase},
                   {"pattern", to_json(c.pattern.pattern)},
                   {"expected_rank_erasures", c.pattern.expected_rank_erasures},
                   {"realized_rank_erasures", c.realized_rank_erasures},
                   {"decodes", c.decodes},
                   {"extension", to_json(c.pattern.extension)},
                   {"extension_fails", c.extension_fails},
                   {"ok", c.ok()}});
  }
  return arr;
}

bool all_ok(const std::vector<verify::WorstCaseCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.ok(); });
}

}  // namespace

json to_json(const verify::DminReport& r) {
  json j = {{"mode", "exhaustive"},
            {"exhaustive", true},
            {"bound", r.bound},
            {"algebraic_dmin", r.algebraic.dmin},
            {"operational_dmin", r.operational.dmin},
            {"agree", r.agree},
            {"bound_achieved", r.bound_achieved},
            {"decode_mismatches", r.operational.decode_mismatches},
            {"algebraic", dmin_result_json(r.algebraic)},
            {"operational", dmin_result_json(r.operational)},
            {"worst_case", worst_case_json(r.worst_case)},
            {"worst_case_ok", all_ok(r.worst_case)}};
  return j;
}

json to_json(const verify::ProbeReport& r) {
  return {{"mode", "probe"},
          {"exhaustive", false},
          {"note", "sampled probe, not a certificate of minimum distance"},
          {"bound", r.bound},
          {"sampled_patterns", r.sampled},
          {"sampled_pattern_size", std::max(r.bound - 1, 0)},
          {"sampled_failures", r.sampled_failures},
          {"worst_case", worst_case_json(r.worst_case)},
          {"ok", r.ok()}};
}

json to_json(const sim::SimStats& s) {
  json losses = json::array();
  for (const auto& l : s.losses) losses.push_back({{"round", l.round}, {"erased", l.erased}});
  return {{"rounds", s.rounds},
          {"failures", s.failures},
          {"local_repairs", s.local_repairs},
          {"reconstruct_fallbacks", s.reconstruct_fallbacks},
          {"loss_events", s.loss_events},
          {"patterns_beyond_dmin", s.patterns_beyond_dmin},
          {"symbols_downloaded", s.symbols_downloaded},
          {"mean_nodes_contacted", s.mean_nodes_contacted()},
          {"min_nodes_contacted", s.min_local_contacted},
          {"max_nodes_contacted", s.max_local_contacted},
          {"repair_mismatches", s.repair_mismatches},
          {"losses", losses}};
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParams:
    case ErrorCode::kNotOptimalConfiguration:
    case ErrorCode::kFieldTooSmall:
      return kExitParams;
    case ErrorCode::kRankDeficient:
    case ErrorCode::kInconsistent:
    case ErrorCode::kGroupOverwhelmed:
    case ErrorCode::kTooManyErasures:
      return kExitDecode;
    case ErrorCode::kTooLarge:
    case ErrorCode::kConditionsNotMet:
      return kExitVerify;
    default:
      return kExitError;
  }
}

namespace {

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

struct Stripe {
  std::optional<ShareHeader> header;  // of any present share
  std::vector<std::optional<ShareFile>> shares;
};

// Loads every share in the stripe directories under `root`.
class ShareSet {
 public:
  explicit ShareSet(const fs::path& root) : root_(root) {
    if (!fs::is_directory(root)) throw Error(ErrorCode::kIo, "not a directory: " + root.string());
    for (const auto& entry : fs::directory_iterator(root)) {
      if (!entry.is_directory() || entry.path().filename().string().rfind("stripe_", 0) != 0) continue;
      for (const auto& f : fs::directory_iterator(entry.path())) {
        if (f.path().extension() != ".lrc") continue;
        const auto bytes = read_file(f.path());
        const ShareHeader h = parse_header(bytes);
        if (!first_) {
          first_ = h;
          code_.emplace(params_from_header(h));
          stripes_.resize(h.stripe_count);
          for (Stripe& s : stripes_) s.shares.resize(h.n);
        } else if (!first_->same_code(h)) {
          throw Error(ErrorCode::kFormat, "share " + f.path().string() + " belongs to a different codeword");
        }
        if (f.path() != share_path(root, h.stripe_index, static_cast<int>(h.node_id)))
          throw Error(ErrorCode::kFormat, "share " + f.path().string() + " is stored under the wrong name");
        ShareFile share = parse_share(bytes, code_->field());
        Stripe& st = stripes_[h.stripe_index];
        st.header = h;
        st.shares[h.node_id] = std::move(share);
      }
    }
    if (!first_) throw Error(ErrorCode::kIo, "no shares found under " + root.string());
  }

  const LrcCode& code() const { return *code_; }
  const ShareHeader& header() const { return *first_; }
  std::vector<Stripe>& stripes() { return stripes_; }

 private:
  fs::path root_;
  std::optional<ShareHeader> first_;
  std::optional<LrcCode> code_;
  std::vector<Stripe> stripes_;
};

mds::NodeBlock to_block(const ShareFile& s) {
  mds::NodeBlock b;
  b.symbols = s.payload;
  b.node_id = static_cast<int>(s.header.node_id);
  b.group_id = static_cast<int>(s.header.group_id);
  b.is_parity = s.header.is_parity;
  return b;
}

}  // namespace

int cmd_params(const ParamArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    out << to_json(derive(args)).dump(2) << "\n";
    return kExitOk;
  });
}

int cmd_encode(const CodeParams& params, const fs::path& input, const fs::path& out_dir, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    const LrcCode code(params);
    const gf::ExtField& field = code.field();
    const std::vector<std::uint8_t> bytes = read_file(input);
    const std::uint64_t stripe_bits = static_cast<std::uint64_t>(params.M) * field.bits_per_element();
    const std::uint64_t total_bits = static_cast<std::uint64_t>(bytes.size()) * 8;
    const auto stripes = static_cast<std::uint32_t>(std::max<std::uint64_t>(1, (total_bits + stripe_bits - 1) / stripe_bits));

    fs::create_directories(out_dir);
    for (const auto& entry : fs::directory_iterator(out_dir))
      if (entry.path().filename().string().rfind("stripe_", 0) == 0)
        throw Error(ErrorCode::kIo, "output directory already holds shares: " + out_dir.string());

    for (std::uint32_t k = 0; k < stripes; ++k) {
      const auto file = bits_to_symbols(field, bytes, k * stripe_bits, params.M);
      const Codeword cw = code.encode(file);
      fs::create_directories(stripe_dir(out_dir, k));
      for (const mds::NodeBlock& b : cw.shares) {
        ShareFile share{make_header(params, b, bytes.size(), k, stripes), b.symbols};
        write_file(share_path(out_dir, k, b.node_id), serialize(share, field));
      }
    }
    out << json{{"stripes", stripes},
                {"shares_per_stripe", params.n},
                {"original_byte_length", bytes.size()},
                {"symbol_bits", field.bits_per_element()},
                {"share_bytes", kShareHeaderSize + params.alpha * field.bytes_per_element()}}
               .dump(2)
        << "\n";
    return kExitOk;
  });
}

int cmd_repair(const fs::path& share_dir, int node_id, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ShareSet set(share_dir);
    const LrcCode& code = set.code();
    const CodeParams& p = code.params();
    if (node_id < 0 || node_id >= p.n) throw Error(ErrorCode::kInvalidParams, "node id out of range");
    json repaired = json::array();
    for (std::uint32_t k = 0; k < set.stripes().size(); ++k) {
      Stripe& st = set.stripes()[k];
      if (st.shares[static_cast<std::size_t>(node_id)]) continue;
      if (!st.header) throw Error(ErrorCode::kGroupOverwhelmed, "stripe " + std::to_string(k) + " has no shares");
      std::vector<std::optional<mds::NodeBlock>> blocks(static_cast<std::size_t>(p.n));
      for (int v = 0; v < p.n; ++v)
        if (st.shares[static_cast<std::size_t>(v)]) blocks[static_cast<std::size_t>(v)] = to_block(*st.shares[static_cast<std::size_t>(v)]);
      const LocalRepair rep = code.local_repair(blocks, node_id);
      ShareFile share{make_header(p, rep.block, st.header->original_byte_length, k, st.header->stripe_count),
                      rep.block.symbols};
      write_file(share_path(share_dir, k, node_id), serialize(share, code.field()));
      st.shares[static_cast<std::size_t>(node_id)] = share;

      err << "stripe " << k << ": node " << node_id << " repaired from nodes";
      for (int c : rep.contacted) err << " " << c;
      err << " (" << rep.contacted.size() << " nodes contacted, " << rep.symbols_downloaded
          << " symbols downloaded)\n";
      repaired.push_back({{"stripe", k},
                          {"node", node_id},
                          {"contacted", rep.contacted},
                          {"nodes_contacted", rep.contacted.size()},
                          {"symbols_downloaded", rep.symbols_downloaded}});
    }
    if (repaired.empty()) err << "node " << node_id << " is present in every stripe; nothing to repair\n";
    out << json{{"repaired", repaired}}.dump(2) << "\n";
    return kExitOk;
  });
}

int cmd_reconstruct(const fs::path& share_dir, const fs::path& output, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ShareSet set(share_dir);
    const LrcCode& code = set.code();
    const CodeParams& p = code.params();
    const std::uint64_t stripe_bits = static_cast<std::uint64_t>(p.M) * code.field().bits_per_element();
    std::vector<std::uint8_t> bytes;
    for (std::uint32_t k = 0; k < set.stripes().size(); ++k) {
      std::vector<mds::NodeBlock> surviving;
      for (const auto& s : set.stripes()[k].shares)
        if (s) surviving.push_back(to_block(*s));
      try {
        const auto file = code.reconstruct(surviving);
        symbols_to_bits(code.field(), file, bytes, k * stripe_bits);
      } catch (const Error& e) {
        err << "stripe " << k << ": " << surviving.size() << " of " << p.n << " shares present\n";
        throw;
      }
    }
    bytes.resize(static_cast<std::size_t>(set.header().original_byte_length));
    write_file(output, bytes);
    out << json{{"stripes", set.stripes().size()}, {"bytes", bytes.size()}}.dump(2) << "\n";
    return kExitOk;
  });
}

int cmd_verify(const CodeParams& params, const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LrcCode code(params);
    json report;
    bool ok = false;
    if (args.level == VerifyLevel::kExhaustive) {
      verify::SweepOptions opt;
      opt.workers = args.workers;
      opt.max_patterns = args.budget;
      const verify::DminReport r = verify::verify_code(code, args.seed, opt);
      report = to_json(r);
      ok = r.agree && r.bound_achieved && all_ok(r.worst_case);
    } else {
      const verify::ProbeReport r = verify::probe(code, args.seed, args.samples);
      report = to_json(r);
      ok = r.ok();
    }
    report["params"] = to_json(params);
    out << report.dump(2) << "\n";
    if (!ok) err << "verification failed\n";
    return ok ? kExitOk : kExitVerify;
  });
}

int cmd_simulate(const sim::SimConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const sim::SimStats stats = sim::simulate(config);
    json j = to_json(stats);
    j["seed"] = config.seed;
    j["failure_distribution"] = config.failures.to_string();
    j["policy"] = "repair-local-first";
    j["params"] = to_json(config.params);
    out << j.dump(2) << "\n";
    return stats.repair_mismatches == 0 ? kExitOk : kExitVerify;
  });
}

}  // namespace lrc::cli
