#include "lrc/mds.hpp"

#include <algorithm>
#include <string>

#include "lrc/error.hpp"

namespace lrc::mds {

using gf::BaseElem;
using gf::FieldElem;

namespace {

// Inverts a k x k matrix over F_q (row-major). Throws Internal if singular.
std::vector<BaseElem> invert(const gf::BaseField& base, std::vector<BaseElem> a, std::size_t k) {
  std::vector<BaseElem> inv(k * k, 0);
  for (std::size_t i = 0; i < k; ++i) inv[i * k + i] = 1;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    while (pivot < k && a[pivot * k + col] == 0) ++pivot;
    if (pivot == k) throw Error(ErrorCode::kInternal, "singular MDS submatrix");
    if (pivot != col) {
      for (std::size_t c = 0; c < k; ++c) {
        std::swap(a[pivot * k + c], a[col * k + c]);
        std::swap(inv[pivot * k + c], inv[col * k + c]);
      }
    }
    const BaseElem s = base.inv(a[col * k + col]);
    for (std::size_t c = 0; c < k; ++c) {
      a[col * k + c] = base.mul(s, a[col * k + c]);
      inv[col * k + c] = base.mul(s, inv[col * k + c]);
    }
    for (std::size_t r = 0; r < k; ++r) {
      const BaseElem f = a[r * k + col];
      if (r == col || f == 0) continue;
      for (std::size_t c = 0; c < k; ++c) {
        a[r * k + c] ^= base.mul(f, a[col * k + c]);
        inv[r * k + c] ^= base.mul(f, inv[col * k + c]);
      }
    }
  }
  return inv;
}

std::size_t block_width(std::span<const NodeBlock> blocks) {
  if (blocks.empty()) throw Error(ErrorCode::kShapeMismatch, "no blocks");
  const std::size_t alpha = blocks.front().symbols.size();
  if (alpha == 0) throw Error(ErrorCode::kShapeMismatch, "empty block");
  for (const NodeBlock& b : blocks)
    if (b.symbols.size() != alpha) throw Error(ErrorCode::kShapeMismatch, "blocks differ in length");
  return alpha;
}

}  // namespace

MdsLayer MdsLayer::build(const gf::BaseField& base, int k_local, int delta) {
  if (k_local < 1 || delta < 2)
    throw Error(ErrorCode::kInvalidParams, "MDS layer needs k >= 1 and delta >= 2");
  const auto k = static_cast<std::size_t>(k_local);
  if (delta == 2) return MdsLayer(k_local, delta, std::vector<BaseElem>(k, 1));

  if (static_cast<unsigned>(k_local + delta - 1) > base.order())
    throw Error(ErrorCode::kFieldTooSmall, "Cauchy parities need q >= " + std::to_string(k_local + delta - 1) +
                                               ", have q = " + std::to_string(base.order()));
  std::vector<BaseElem> coeffs;
  coeffs.reserve(static_cast<std::size_t>(delta - 1) * k);
  for (int p = 0; p < delta - 1; ++p) {
    const auto y = static_cast<BaseElem>(k_local + p);
    for (int j = 0; j < k_local; ++j) coeffs.push_back(base.inv(static_cast<BaseElem>(j) ^ y));
  }
  return MdsLayer(k_local, delta, std::move(coeffs));
}

std::vector<BaseElem> MdsLayer::generator_row(int position) const {
  if (position < 0 || position >= total_count()) throw Error(ErrorCode::kInvalidParams, "position out of range");
  if (position < k_) {
    std::vector<BaseElem> row(static_cast<std::size_t>(k_), 0);
    row[static_cast<std::size_t>(position)] = 1;
    return row;
  }
  const auto begin = coeffs_.begin() + (position - k_) * k_;
  return {begin, begin + k_};
}

std::vector<NodeBlock> MdsLayer::encode(const gf::ExtField& field, std::span<const NodeBlock> data) const {
  if (static_cast<int>(data.size()) != k_)
    throw Error(ErrorCode::kShapeMismatch, "expected " + std::to_string(k_) + " data blocks, got " +
                                               std::to_string(data.size()));
  const std::size_t alpha = block_width(data);
  std::vector<NodeBlock> out(data.begin(), data.end());
  for (int p = 0; p < parity_count(); ++p) {
    NodeBlock parity;
    parity.group_id = data.front().group_id;
    parity.is_parity = true;
    parity.symbols.assign(alpha, field.zero());
    for (int j = 0; j < k_; ++j) {
      const BaseElem c = coeff(p, j);
      for (std::size_t t = 0; t < alpha; ++t)
        field.add_scaled(parity.symbols[t], c, data[static_cast<std::size_t>(j)].symbols[t]);
    }
    out.push_back(std::move(parity));
  }
  return out;
}

RepairResult MdsLayer::repair(const gf::ExtField& field,
                              std::span<const std::optional<NodeBlock>> blocks,
                              std::span<const int> erased) const {
  if (static_cast<int>(blocks.size()) != total_count())
    throw Error(ErrorCode::kShapeMismatch, "expected one slot per group position");
  std::vector<bool> lost(blocks.size(), false);
  for (int p : erased) {
    if (p < 0 || p >= total_count()) throw Error(ErrorCode::kInvalidParams, "erased position out of range");
    lost[static_cast<std::size_t>(p)] = true;
  }
  for (std::size_t p = 0; p < blocks.size(); ++p)
    if (!blocks[p]) lost[p] = true;
  const auto missing = std::count(lost.begin(), lost.end(), true);
  if (missing > parity_count())
    throw Error(ErrorCode::kTooManyErasures, std::to_string(missing) + " of " + std::to_string(total_count()) +
                                                 " blocks missing, at most " + std::to_string(parity_count()) +
                                                 " repairable");

  RepairResult result;
  std::vector<const NodeBlock*> read;
  for (std::size_t p = 0; p < blocks.size() && static_cast<int>(read.size()) < k_; ++p) {
    if (lost[p]) continue;
    result.positions_read.push_back(static_cast<int>(p));
    read.push_back(&*blocks[p]);
  }
  const std::size_t alpha = read.front()->symbols.size();
  for (const NodeBlock* b : read)
    if (b->symbols.size() != alpha || alpha == 0) throw Error(ErrorCode::kShapeMismatch, "blocks differ in length");

  const auto k = static_cast<std::size_t>(k_);
  std::vector<BaseElem> sub;
  sub.reserve(k * k);
  for (int p : result.positions_read) {
    const auto row = generator_row(p);
    sub.insert(sub.end(), row.begin(), row.end());
  }
  // data = sub^{-1} * read, so target = row(target) * sub^{-1} * read.
  const std::vector<BaseElem> inv = invert(field.base(), std::move(sub), k);
  for (int target : erased) {
    const auto row = generator_row(target);
    std::vector<BaseElem> weights(k, 0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) weights[i] ^= field.base().mul(row[j], inv[j * k + i]);
    NodeBlock block;
    block.symbols.assign(alpha, field.zero());
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t t = 0; t < alpha; ++t) field.add_scaled(block.symbols[t], weights[i], read[i]->symbols[t]);
    block.group_id = read.front()->group_id;
    block.is_parity = target >= k_;
    result.repaired.push_back(std::move(block));
  }
  return result;
}

}  // namespace lrc::mds
