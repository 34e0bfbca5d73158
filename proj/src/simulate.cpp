#include "lrc/simulate.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <sstream>

#include "lrc/error.hpp"
#include "lrc/verify.hpp"

namespace lrc::sim {

using gf::FieldElem;
using mds::NodeBlock;

FailureSpec FailureSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::kInvalidParams, "failure spec must be kind:value");
  const std::string kind = text.substr(0, colon);
  const std::string value = text.substr(colon + 1);
  FailureSpec spec;
  try {
    std::size_t used = 0;
    if (kind == "fixed") {
      spec.kind = Kind::kFixed;
      spec.count = std::stoi(value, &used);
      if (spec.count < 0) throw Error(ErrorCode::kInvalidParams, "negative failure count");
    } else if (kind == "bernoulli") {
      spec.kind = Kind::kBernoulli;
      spec.probability = std::stod(value, &used);
      if (spec.probability < 0 || spec.probability > 1)
        throw Error(ErrorCode::kInvalidParams, "failure probability outside [0, 1]");
    } else {
      throw Error(ErrorCode::kInvalidParams, "unknown failure distribution '" + kind + "'");
    }
    if (used != value.size()) throw Error(ErrorCode::kInvalidParams, "trailing characters in failure spec");
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kInvalidParams, "bad failure spec value '" + value + "'");
  }
  return spec;
}

std::string FailureSpec::to_string() const {
  std::ostringstream os;
  if (kind == Kind::kFixed)
    os << "fixed:" << count;
  else
    os << "bernoulli:" << probability;
  return os.str();
}

double SimStats::mean_nodes_contacted() const noexcept {
  return local_repairs == 0 ? 0.0 : static_cast<double>(local_nodes_contacted) / static_cast<double>(local_repairs);
}

namespace {

std::vector<int> draw_failures(const FailureSpec& spec, int n, std::mt19937_64& rng) {
  std::vector<int> out;
  if (spec.kind == FailureSpec::Kind::kFixed) {
    std::vector<int> nodes(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) nodes[static_cast<std::size_t>(i)] = i;
    const int k = std::min(spec.count, n);
    for (int j = 0; j < k; ++j) {
      const auto pick = static_cast<std::size_t>(j) + static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(n - j));
      std::swap(nodes[static_cast<std::size_t>(j)], nodes[pick]);
      out.push_back(nodes[static_cast<std::size_t>(j)]);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      // 53 random bits -> uniform double in [0, 1).
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u < spec.probability) out.push_back(i);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SimStats simulate(const SimConfig& config) {
  const LrcCode code(config.params);
  const CodeParams& p = code.params();
  if (config.rounds < 0) throw Error(ErrorCode::kInvalidParams, "negative round count");
  for (const InjectedFailure& inj : config.injected)
    for (int v : inj.nodes)
      if (v < 0 || v >= p.n) throw Error(ErrorCode::kInvalidParams, "injected node out of range");

  std::mt19937_64 rng(config.seed);
  const std::vector<FieldElem> file = verify::random_file(code, config.seed);
  const Codeword original = code.encode(file);

  SimStats stats;
  stats.rounds = config.rounds;
  for (int round = 0; round < config.rounds; ++round) {
    std::vector<int> failed = draw_failures(config.failures, p.n, rng);
    for (const InjectedFailure& inj : config.injected)
      if (inj.round == round) failed.insert(failed.end(), inj.nodes.begin(), inj.nodes.end());
    const ErasurePattern pattern(failed);
    if (pattern.size() == 0) continue;
    stats.failures += pattern.size();
    if (static_cast<int>(pattern.size()) >= p.dmin) ++stats.patterns_beyond_dmin;

    std::vector<std::optional<NodeBlock>> shares(original.shares.begin(), original.shares.end());
    for (int v : pattern.nodes()) shares[static_cast<std::size_t>(v)].reset();

    // Local repairs first, repeated while they make progress.
    std::vector<int> pending = pattern.nodes();
    bool progress = true;
    while (progress && !pending.empty()) {
      progress = false;
      for (auto it = pending.begin(); it != pending.end();) {
        try {
          LocalRepair rep = code.local_repair(shares, *it);
          const int contacted = static_cast<int>(rep.contacted.size());
          ++stats.local_repairs;
          stats.local_nodes_contacted += static_cast<std::uint64_t>(contacted);
          stats.symbols_downloaded += rep.symbols_downloaded;
          stats.min_local_contacted = stats.local_repairs == 1 ? contacted : std::min(stats.min_local_contacted, contacted);
          stats.max_local_contacted = std::max(stats.max_local_contacted, contacted);
          if (rep.block != original.shares[static_cast<std::size_t>(*it)]) ++stats.repair_mismatches;
          shares[static_cast<std::size_t>(*it)] = std::move(rep.block);
          it = pending.erase(it);
          progress = true;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kGroupOverwhelmed) throw;
          ++it;
        }
      }
    }
    if (pending.empty()) continue;

    // Global fallback: download nodes until their points span the file.
    std::vector<NodeBlock> read;
    gf::BaseSpan span(code.field());
    for (const auto& s : shares) {
      if (!s || span.dim() >= p.M) continue;
      bool grew = false;
      for (int t = 0; t < p.alpha; ++t) grew = span.insert(code.eval_point(s->node_id, t)) || grew;
      if (grew) read.push_back(*s);
    }
    if (span.dim() < p.M) {
      ++stats.loss_events;
      stats.losses.push_back({round, pattern.nodes()});
      continue;
    }
    ++stats.reconstruct_fallbacks;
    stats.symbols_downloaded += read.size() * static_cast<std::size_t>(p.alpha);
    const std::vector<FieldElem> decoded = code.reconstruct(read);
    const Codeword rebuilt = code.encode(decoded);
    for (int v : pending)
      if (rebuilt.shares[static_cast<std::size_t>(v)] != original.shares[static_cast<std::size_t>(v)])
        ++stats.repair_mismatches;
  }
  return stats;
}

}  // namespace lrc::sim
