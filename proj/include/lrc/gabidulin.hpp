#pragma once

#include <memory>
#include <span>
#include <vector>

#include "lrc/gf.hpp"

namespace lrc::gabidulin {

/// [N, K, D = N - K + 1] Gabidulin code: messages are the coefficients of a
/// linearized polynomial of q-degree < K, codewords its values at N points
/// that are linearly independent over F_q.
///
/// Evaluation points are the first N polynomial basis elements 1, x, ..., x^{N-1}.
class GabidulinCode {
 public:
  GabidulinCode(std::shared_ptr<const gf::ExtField> field, int length, int dimension);

  const gf::ExtField& field() const noexcept { return *field_; }
  int length() const noexcept { return length_; }
  int dimension() const noexcept { return dimension_; }
  int min_rank_distance() const noexcept { return length_ - dimension_ + 1; }
  const std::vector<gf::FieldElem>& eval_points() const noexcept { return points_; }

  std::vector<gf::FieldElem> encode(std::span<const gf::FieldElem> message) const;

  /// Recovers the message from (point, value) pairs. Points need not be code
  /// evaluation points: any pair with value = f(point) is a valid observation.
  std::vector<gf::FieldElem> erasure_decode(std::span<const gf::FieldElem> points,
                                            std::span<const gf::FieldElem> values) const;

 private:
  std::shared_ptr<const gf::ExtField> field_;
  int length_;
  int dimension_;
  std::vector<gf::FieldElem> points_;
};

/// rank over F_q of u - v.
int rank_distance(const gf::ExtField& field, std::span<const gf::FieldElem> u, std::span<const gf::FieldElem> v);

}  // namespace lrc::gabidulin
