#include "lrc/gabidulin.hpp"

#include <string>

#include "lrc/error.hpp"
#include "lrc/linpoly.hpp"

namespace lrc::gabidulin {

using gf::FieldElem;

GabidulinCode::GabidulinCode(std::shared_ptr<const gf::ExtField> field, int length, int dimension)
    : field_(std::move(field)), length_(length), dimension_(dimension) {
  if (!field_) throw Error(ErrorCode::kInvalidParams, "null field");
  if (dimension_ < 1 || dimension_ > length_ || length_ > field_->degree())
    throw Error(ErrorCode::kInvalidParams, "Gabidulin code needs m >= N >= K >= 1 (m=" +
                                               std::to_string(field_->degree()) + ", N=" + std::to_string(length_) +
                                               ", K=" + std::to_string(dimension_) + ")");
  points_.reserve(static_cast<std::size_t>(length_));
  for (int j = 0; j < length_; ++j) points_.push_back(field_->basis(j));
}

std::vector<FieldElem> GabidulinCode::encode(std::span<const FieldElem> message) const {
  if (static_cast<int>(message.size()) != dimension_)
    throw Error(ErrorCode::kShapeMismatch, "message length " + std::to_string(message.size()) + ", expected " +
                                               std::to_string(dimension_));
  for (const FieldElem& c : message)
    if (!field_->contains(c)) throw Error(ErrorCode::kParamMismatch, "message symbol from a different field");
  const linpoly::LinearizedPoly f(std::vector<FieldElem>(message.begin(), message.end()));
  std::vector<FieldElem> out;
  out.reserve(points_.size());
  for (const FieldElem& g : points_) out.push_back(linpoly::evaluate(*field_, f, g));
  return out;
}

std::vector<FieldElem> GabidulinCode::erasure_decode(std::span<const FieldElem> points,
                                                     std::span<const FieldElem> values) const {
  const linpoly::LinearizedPoly f = linpoly::interpolate(*field_, points, values, dimension_);
  std::vector<FieldElem> message = f.coeffs();
  message.resize(static_cast<std::size_t>(dimension_), field_->zero());
  return message;
}

int rank_distance(const gf::ExtField& field, std::span<const FieldElem> u, std::span<const FieldElem> v) {
  if (u.size() != v.size()) throw Error(ErrorCode::kShapeMismatch, "rank distance of unequal lengths");
  std::vector<FieldElem> diff;
  diff.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) diff.push_back(field.add(u[i], v[i]));
  return field.rank_over_base(diff);
}

}  // namespace lrc::gabidulin
