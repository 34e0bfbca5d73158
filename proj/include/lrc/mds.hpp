#pragma once

// Per-group systematic MDS array code over F_q. The array code is alpha
// stacked copies of one scalar [k + delta - 1, k, delta] code, so every
// parity symbol is an F_q-combination of the data symbols in the same row.

#include <optional>
#include <span>
#include <vector>

#include "lrc/gf.hpp"

namespace lrc::mds {

/// Content of one storage node.
struct NodeBlock {
  std::vector<gf::FieldElem> symbols;
  int node_id = -1;
  int group_id = -1;
  bool is_parity = false;

  friend bool operator==(const NodeBlock&, const NodeBlock&) = default;
};

struct RepairResult {
  std::vector<NodeBlock> repaired;   // in the order of the requested positions
  std::vector<int> positions_read;   // never more than data_count()
};

class MdsLayer {
 public:
  /// delta = 2 gives the all-ones parity row over any q. For delta > 2 the
  /// parity rows form the Cauchy matrix C[p][j] = 1 / (x_j + y_p) with
  /// x_j = j and y_p = k_local + p; throws FieldTooSmall if q < k_local + delta - 1.
  static MdsLayer build(const gf::BaseField& base, int k_local, int delta);

  int data_count() const noexcept { return k_; }
  int parity_count() const noexcept { return delta_ - 1; }
  int total_count() const noexcept { return k_ + delta_ - 1; }
  int delta() const noexcept { return delta_; }

  gf::BaseElem coeff(int parity, int data) const {
    return coeffs_.at(static_cast<std::size_t>(parity * k_ + data));
  }
  /// Row of the systematic generator for a position: unit vector for data
  /// positions, the coefficient row for parity positions.
  std::vector<gf::BaseElem> generator_row(int position) const;

  /// Returns total_count() blocks: the data unchanged followed by the parities.
  /// Parity blocks inherit the group id of the data and have node_id -1.
  std::vector<NodeBlock> encode(const gf::ExtField& field, std::span<const NodeBlock> data) const;

  /// Rebuilds the blocks at `erased` positions. `blocks` is indexed by position;
  /// nullopt marks a missing block. Reads exactly data_count() surviving blocks.
  RepairResult repair(const gf::ExtField& field,
                      std::span<const std::optional<NodeBlock>> blocks,
                      std::span<const int> erased) const;

 private:
  MdsLayer(int k, int delta, std::vector<gf::BaseElem> coeffs)
      : k_(k), delta_(delta), coeffs_(std::move(coeffs)) {}

  int k_;
  int delta_;
  std::vector<gf::BaseElem> coeffs_;  // (delta-1) x k, row-major
};

}  // namespace lrc::mds
