#include "lrc/lrc.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "lrc/error.hpp"

namespace lrc {

using gf::FieldElem;
using mds::NodeBlock;

int ceil_div(int a, int b) { return (a + b - 1) / b; }

std::string_view to_string(OptimalityCase c) {
  switch (c) {
    case OptimalityCase::kDivisible: return "divisible";
    case OptimalityCase::kRemainder: return "remainder";
    case OptimalityCase::kForced: return "forced";
  }
  return "unknown";
}

int dmin_bound(int n, int M, int r, int delta, int alpha) {
  return n - ceil_div(M, alpha) + 1 - (ceil_div(M, r * alpha) - 1) * (delta - 1);
}

int dmin_scalar_bound(int n, int M, int r, int delta) {
  return n - M + 1 - (ceil_div(M, r) - 1) * (delta - 1);
}

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::kInvalidParams, what); }

std::string str(int v) { return std::to_string(v); }

}  // namespace

CodeParams derive_params(int n, int M, int r, int delta, int alpha, unsigned q, const DeriveOptions& options) {
  if (n < 1 || M < 1 || r < 1 || alpha < 1) invalid("n, M, r and alpha must be positive");
  if (delta < 2) invalid("delta must be at least 2");
  if (q < 2 || !std::has_single_bit(q) || q > (1u << gf::kMaxBaseBits))
    invalid("q must be a power of two between 2 and 256, got " + std::to_string(q));
  if (M < r * alpha) invalid("need M >= r*alpha (" + str(M) + " < " + str(r * alpha) + ")");
  if (delta > 2 && q < static_cast<unsigned>(r + delta - 1))
    invalid("delta > 2 needs q >= r + delta - 1 = " + str(r + delta - 1));

  CodeParams p;
  p.n = n;
  p.M = M;
  p.r = r;
  p.delta = delta;
  p.alpha = alpha;
  p.q = q;
  p.s = std::countr_zero(q);

  const int local = r + delta - 1;
  const int rem = n % local - (delta - 1);
  const int file_nodes_mod = ceil_div(M, alpha) % r;
  if (n % local == 0) {
    p.N = n * r * alpha / local;
    p.optimality = OptimalityCase::kDivisible;
  } else if (rem >= file_nodes_mod && file_nodes_mod > 0) {
    p.N = alpha * (n - delta + 1 - (delta - 1) * (n / local));
    p.optimality = OptimalityCase::kRemainder;
  } else if (options.force) {
    // Any data node count d with d + ceil(d/r)(delta-1) = n fills n nodes.
    int data = 0;
    for (int d = 1; d <= n && data == 0; ++d)
      if (d + ceil_div(d, r) * (delta - 1) == n) data = d;
    if (data == 0) invalid("no group layout fills exactly n = " + str(n) + " nodes");
    p.N = alpha * data;
    p.optimality = OptimalityCase::kForced;
  } else {
    std::ostringstream os;
    os << "(r+delta-1) = " << local << " does not divide n = " << n << ", and ";
    if (file_nodes_mod == 0)
      os << "ceil(M/alpha) mod r = 0 violates ceil(M/alpha) mod r > 0";
    else
      os << "n mod (r+delta-1) - (delta-1) = " << rem << " < ceil(M/alpha) mod r = " << file_nodes_mod;
    throw Error(ErrorCode::kNotOptimalConfiguration, os.str());
  }

  if (p.N < M) invalid("Gabidulin length N = " + str(p.N) + " is smaller than M = " + str(M));
  if (options.ext_degree != 0 && options.ext_degree < p.N)
    invalid("extension degree m = " + str(options.ext_degree) + " is below N = " + str(p.N));
  p.m = options.ext_degree != 0 ? options.ext_degree : p.N;
  if (p.m > gf::kMaxExtDegree) invalid("extension degree m = " + str(p.m) + " exceeds " + str(gf::kMaxExtDegree));
  p.D = p.N - M + 1;

  const int data_nodes = p.N / alpha;
  p.g = ceil_div(data_nodes, r);
  p.beta0 = data_nodes % r;
  int node = 0;
  for (int i = 0; i < p.g; ++i) {
    GroupLayout gl;
    gl.first_node = node;
    gl.first_data_index = i * r;
    gl.data_nodes = (i == p.g - 1 && p.beta0 > 0) ? p.beta0 : r;
    gl.parity_nodes = delta - 1;
    node += gl.size();
    p.groups.push_back(gl);
  }
  if (node != n || data_nodes + p.g * (delta - 1) != n)
    throw Error(ErrorCode::kInternal, "group layout does not fill n nodes");

  if (p.optimality != OptimalityCase::kForced) {
    const bool divisible = p.N % (r * alpha) == 0;
    const bool remainder = p.beta0 >= file_nodes_mod && file_nodes_mod > 0;
    if (!(divisible || remainder)) throw Error(ErrorCode::kInternal, "optimality condition on N does not hold");
  }
  p.dmin = dmin_bound(n, M, r, delta, alpha);
  return p;
}

// ---------------------------------------------------------------------------

ErasurePattern::ErasurePattern(std::vector<int> nodes) : nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
}

ErasurePattern ErasurePattern::from_mask(std::uint64_t mask) {
  std::vector<int> nodes;
  while (mask != 0) {
    nodes.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return ErasurePattern(std::move(nodes));
}

bool ErasurePattern::contains(int node) const { return std::binary_search(nodes_.begin(), nodes_.end(), node); }

std::uint64_t ErasurePattern::mask() const {
  std::uint64_t m = 0;
  for (int v : nodes_) {
    if (v < 0 || v >= 64) throw Error(ErrorCode::kTooLarge, "node index does not fit a 64-bit mask");
    m |= std::uint64_t{1} << v;
  }
  return m;
}

std::vector<int> ErasurePattern::per_group_counts(const CodeParams& params) const {
  std::vector<int> counts(params.groups.size(), 0);
  for (int v : nodes_) {
    if (v < 0 || v >= params.n) throw Error(ErrorCode::kInvalidParams, "erased node out of range");
    for (std::size_t i = 0; i < params.groups.size(); ++i) {
      const GroupLayout& gl = params.groups[i];
      if (v >= gl.first_node && v < gl.first_node + gl.size()) ++counts[i];
    }
  }
  return counts;
}

// ---------------------------------------------------------------------------

namespace {

std::shared_ptr<const gf::ExtField> make_field(const CodeParams& p) {
  return std::make_shared<const gf::ExtField>(gf::BaseField(p.s), p.m);
}

}  // namespace

LrcCode::LrcCode(CodeParams params)
    : params_(std::move(params)), field_(make_field(params_)), gabidulin_(field_, params_.N, params_.M) {
  const CodeParams& p = params_;
  node_group_.assign(static_cast<std::size_t>(p.n), 0);
  points_.assign(static_cast<std::size_t>(p.n), {});
  for (int gi = 0; gi < p.g; ++gi) {
    const GroupLayout& gl = p.groups[static_cast<std::size_t>(gi)];
    layers_.push_back(mds::MdsLayer::build(field_->base(), gl.data_nodes, p.delta));
    const mds::MdsLayer& layer = layers_.back();
    for (int pos = 0; pos < gl.size(); ++pos) {
      const int node = gl.first_node + pos;
      node_group_[static_cast<std::size_t>(node)] = gi;
      auto& pts = points_[static_cast<std::size_t>(node)];
      const auto row = layer.generator_row(pos);
      for (int t = 0; t < p.alpha; ++t) {
        FieldElem pt = field_->zero();
        for (int j = 0; j < gl.data_nodes; ++j) {
          const int symbol = (gl.first_data_index + j) * p.alpha + t;
          field_->add_scaled(pt, row[static_cast<std::size_t>(j)],
                             gabidulin_.eval_points()[static_cast<std::size_t>(symbol)]);
        }
        pts.push_back(pt);
      }
    }
  }
}

const mds::MdsLayer& LrcCode::layer(int group) const {
  if (group < 0 || group >= params_.g) throw Error(ErrorCode::kInvalidParams, "group out of range");
  return layers_[static_cast<std::size_t>(group)];
}

int LrcCode::group_of(int node) const {
  if (node < 0 || node >= params_.n) throw Error(ErrorCode::kInvalidParams, "node out of range");
  return node_group_[static_cast<std::size_t>(node)];
}

int LrcCode::position_in_group(int node) const {
  return node - params_.groups[static_cast<std::size_t>(group_of(node))].first_node;
}

const FieldElem& LrcCode::eval_point(int node, int symbol) const {
  if (node < 0 || node >= params_.n || symbol < 0 || symbol >= params_.alpha)
    throw Error(ErrorCode::kInvalidParams, "node or symbol index out of range");
  return points_[static_cast<std::size_t>(node)][static_cast<std::size_t>(symbol)];
}

Codeword LrcCode::encode(std::span<const FieldElem> file) const {
  const CodeParams& p = params_;
  if (static_cast<int>(file.size()) != p.M)
    throw Error(ErrorCode::kShapeMismatch, "file has " + std::to_string(file.size()) + " symbols, expected " +
                                               std::to_string(p.M));
  const std::vector<FieldElem> c = gabidulin_.encode(file);

  Codeword cw;
  cw.params = p;
  cw.shares.reserve(static_cast<std::size_t>(p.n));
  for (int gi = 0; gi < p.g; ++gi) {
    const GroupLayout& gl = p.groups[static_cast<std::size_t>(gi)];
    std::vector<NodeBlock> data;
    for (int j = 0; j < gl.data_nodes; ++j) {
      NodeBlock b;
      b.node_id = gl.first_node + j;
      b.group_id = gi;
      const auto first = c.begin() + (gl.first_data_index + j) * p.alpha;
      b.symbols.assign(first, first + p.alpha);
      data.push_back(std::move(b));
    }
    std::vector<NodeBlock> blocks = layers_[static_cast<std::size_t>(gi)].encode(*field_, data);
    for (int pos = 0; pos < gl.size(); ++pos) blocks[static_cast<std::size_t>(pos)].node_id = gl.first_node + pos;
    for (NodeBlock& b : blocks) cw.shares.push_back(std::move(b));
  }
  return cw;
}

LocalRepair LrcCode::local_repair(std::span<const std::optional<NodeBlock>> shares, int target) const {
  const CodeParams& p = params_;
  if (static_cast<int>(shares.size()) != p.n) throw Error(ErrorCode::kShapeMismatch, "expected one slot per node");
  const int gi = group_of(target);
  const GroupLayout& gl = p.groups[static_cast<std::size_t>(gi)];
  const mds::MdsLayer& layer = layers_[static_cast<std::size_t>(gi)];

  std::vector<std::optional<NodeBlock>> group(static_cast<std::size_t>(gl.size()));
  int missing = 0;
  for (int pos = 0; pos < gl.size(); ++pos) {
    const int node = gl.first_node + pos;
    if (node != target && shares[static_cast<std::size_t>(node)])
      group[static_cast<std::size_t>(pos)] = shares[static_cast<std::size_t>(node)];
    else
      ++missing;
  }
  if (missing > layer.parity_count())
    throw Error(ErrorCode::kGroupOverwhelmed, "group " + std::to_string(gi) + " has " + std::to_string(missing) +
                                                  " unavailable nodes, local repair handles at most " +
                                                  std::to_string(layer.parity_count()) + "; run reconstruct");

  const int pos = target - gl.first_node;
  mds::RepairResult rr = layer.repair(*field_, group, std::span<const int>(&pos, 1));
  LocalRepair out;
  out.block = std::move(rr.repaired.front());
  out.block.node_id = target;
  out.block.group_id = gi;
  for (int read_pos : rr.positions_read) out.contacted.push_back(gl.first_node + read_pos);
  out.symbols_downloaded = out.contacted.size() * static_cast<std::size_t>(p.alpha);
  out.group_size = gl.size();
  return out;
}

std::vector<FieldElem> LrcCode::reconstruct(std::span<const NodeBlock> surviving) const {
  const CodeParams& p = params_;
  std::vector<bool> seen(static_cast<std::size_t>(p.n), false);
  std::vector<FieldElem> points;
  std::vector<FieldElem> values;
  points.reserve(surviving.size() * static_cast<std::size_t>(p.alpha));
  values.reserve(points.capacity());
  for (const NodeBlock& b : surviving) {
    if (b.node_id < 0 || b.node_id >= p.n) throw Error(ErrorCode::kInvalidParams, "share with bad node id");
    if (seen[static_cast<std::size_t>(b.node_id)])
      throw Error(ErrorCode::kInvalidParams, "duplicate share for node " + std::to_string(b.node_id));
    seen[static_cast<std::size_t>(b.node_id)] = true;
    if (static_cast<int>(b.symbols.size()) != p.alpha)
      throw Error(ErrorCode::kShapeMismatch, "share does not hold alpha symbols");
    for (int t = 0; t < p.alpha; ++t) {
      points.push_back(points_[static_cast<std::size_t>(b.node_id)][static_cast<std::size_t>(t)]);
      values.push_back(b.symbols[static_cast<std::size_t>(t)]);
    }
  }
  return gabidulin_.erasure_decode(points, values);
}

}  // namespace lrc
