#pragma once

// Two-stage locally repairable code: a Gabidulin precode over F_{q^m}
// followed by an F_q-linear MDS array code inside each local group.
//
// Node layout: groups in sequence; inside a group the data nodes come first
// and the delta - 1 parity nodes follow. Data node d (counting data nodes
// across groups) stores Gabidulin symbols d*alpha .. d*alpha + alpha - 1.
// When r does not divide N/alpha the smaller remainder group is last.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lrc/gabidulin.hpp"
#include "lrc/gf.hpp"
#include "lrc/mds.hpp"

namespace lrc {

int ceil_div(int a, int b);

/// Which length formula produced N.
enum class OptimalityCase {
  kDivisible,  // (r + delta - 1) | n, N = n r alpha / (r + delta - 1)
  kRemainder,  // remainder group, N = alpha (n - delta + 1 - (delta - 1) floor(n / (r + delta - 1)))
  kForced,     // neither condition holds; the distance bound is not certified
};

std::string_view to_string(OptimalityCase c);

struct GroupLayout {
  int first_node = 0;
  int data_nodes = 0;
  int parity_nodes = 0;
  int first_data_index = 0;  // index of the group's first data node among all data nodes

  int size() const noexcept { return data_nodes + parity_nodes; }
};

struct CodeParams {
  int n = 0;
  int M = 0;
  int r = 0;
  int delta = 0;
  int alpha = 0;
  unsigned q = 0;
  int s = 0;  // q = 2^s
  int m = 0;
  int N = 0;
  int D = 0;
  int g = 0;
  int beta0 = 0;
  std::vector<GroupLayout> groups;
  int dmin = 0;
  OptimalityCase optimality = OptimalityCase::kForced;

  bool certified() const noexcept { return optimality != OptimalityCase::kForced; }
  int data_node_count() const noexcept { return N / alpha; }
};

struct DeriveOptions {
  /// Build even when neither optimality condition holds.
  bool force = false;
  /// Extension degree; 0 selects the minimal m = N.
  int ext_degree = 0;
};

/// Derives the full parameter record. Throws InvalidParams on precondition
/// failures and NotOptimalConfiguration when neither length formula applies
/// (unless forced).
CodeParams derive_params(int n, int M, int r, int delta, int alpha, unsigned q, const DeriveOptions& options = {});

/// n - ceil(M/alpha) + 1 - (ceil(M/(r alpha)) - 1)(delta - 1)
int dmin_bound(int n, int M, int r, int delta, int alpha);
/// n - M + 1 - (ceil(M/r) - 1)(delta - 1), the scalar (alpha = 1) bound.
int dmin_scalar_bound(int n, int M, int r, int delta);

/// A set of failed node indices, kept sorted and unique.
class ErasurePattern {
 public:
  ErasurePattern() = default;
  explicit ErasurePattern(std::vector<int> nodes);
  static ErasurePattern from_mask(std::uint64_t mask);

  const std::vector<int>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool contains(int node) const;
  std::uint64_t mask() const;
  std::vector<int> per_group_counts(const CodeParams& params) const;

  friend bool operator==(const ErasurePattern&, const ErasurePattern&) = default;

 private:
  std::vector<int> nodes_;
};

struct Codeword {
  CodeParams params;
  std::vector<mds::NodeBlock> shares;
};

struct LocalRepair {
  mds::NodeBlock block;
  std::vector<int> contacted;  // node ids read
  std::size_t symbols_downloaded = 0;
  int group_size = 0;
};

class LrcCode {
 public:
  explicit LrcCode(CodeParams params);

  const CodeParams& params() const noexcept { return params_; }
  const gf::ExtField& field() const noexcept { return *field_; }
  std::shared_ptr<const gf::ExtField> field_ptr() const noexcept { return field_; }
  const gabidulin::GabidulinCode& gabidulin() const noexcept { return gabidulin_; }
  const mds::MdsLayer& layer(int group) const;

  int group_of(int node) const;
  int position_in_group(int node) const;

  Codeword encode(std::span<const gf::FieldElem> file) const;

  /// Evaluation point behind a stored symbol: the Gabidulin point for data
  /// nodes, the F_q-combination of the group's points for parity nodes.
  const gf::FieldElem& eval_point(int node, int symbol) const;

  /// Rebuilds `target` from its group. `shares` has one slot per node
  /// (nullopt = unavailable); the target's own slot is ignored.
  /// Throws GroupOverwhelmed if the group has more than delta - 1 losses.
  LocalRepair local_repair(std::span<const std::optional<mds::NodeBlock>> shares, int target) const;

  /// Recovers the file from any collection of shares whose evaluation points
  /// span at least M dimensions. Throws RankDeficient otherwise.
  std::vector<gf::FieldElem> reconstruct(std::span<const mds::NodeBlock> surviving) const;

 private:
  CodeParams params_;
  std::shared_ptr<const gf::ExtField> field_;
  gabidulin::GabidulinCode gabidulin_;
  std::vector<mds::MdsLayer> layers_;
  std::vector<int> node_group_;
  std::vector<std::vector<gf::FieldElem>> points_;  // [node][symbol]
};

}  // namespace lrc
