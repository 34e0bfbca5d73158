#include "lrc/linpoly.hpp"

#include <string>

#include "lrc/error.hpp"

namespace lrc::linpoly {

using gf::FieldElem;

LinearizedPoly::LinearizedPoly(std::vector<FieldElem> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error(ErrorCode::kInvalidParams, "linearized polynomial needs a coefficient");
  for (const FieldElem& c : coeffs_)
    if (c.degree() != coeffs_.front().degree())
      throw Error(ErrorCode::kParamMismatch, "coefficients from different fields");
}

int LinearizedPoly::q_degree() const noexcept {
  for (int i = static_cast<int>(coeffs_.size()) - 1; i >= 0; --i)
    if (!coeffs_[static_cast<std::size_t>(i)].is_zero()) return i;
  return -1;
}

bool operator==(const LinearizedPoly& a, const LinearizedPoly& b) {
  const int d = a.q_degree();
  if (d != b.q_degree()) return false;
  for (int i = 0; i <= d; ++i)
    if (a.coeff(i) != b.coeff(i)) return false;
  return true;
}

FieldElem evaluate(const gf::ExtField& field, const LinearizedPoly& f, const FieldElem& x) {
  const int d = f.q_degree();
  FieldElem acc = field.zero();
  FieldElem power = x;  // x^(q^i)
  for (int i = 0; i <= d; ++i) {
    if (i > 0) power = field.frobenius(power);
    const FieldElem& a = f.coeff(i);
    if (!a.is_zero()) acc = field.add(acc, field.mul(a, power));
  }
  return acc;
}

std::vector<std::size_t> independent_subset(const gf::ExtField& field,
                                            std::span<const FieldElem> points,
                                            int limit) {
  gf::BaseSpan span(field);
  std::vector<std::size_t> chosen;
  for (std::size_t j = 0; j < points.size() && static_cast<int>(chosen.size()) < limit; ++j)
    if (span.insert(points[j])) chosen.push_back(j);
  return chosen;
}

std::vector<FieldElem> solve(const gf::ExtField& field, std::vector<FieldElem> a, std::vector<FieldElem> b) {
  const std::size_t n = b.size();
  if (a.size() != n * n) throw Error(ErrorCode::kShapeMismatch, "system matrix is not square");
  auto at = [&](std::size_t r, std::size_t c) -> FieldElem& { return a[r * n + c]; };

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && at(pivot, col).is_zero()) ++pivot;
    if (pivot == n) throw Error(ErrorCode::kInternal, "singular system");
    if (pivot != col) {
      for (std::size_t c = col; c < n; ++c) std::swap(at(pivot, c), at(col, c));
      std::swap(b[pivot], b[col]);
    }
    const FieldElem inv = field.inv(at(col, col));
    for (std::size_t c = col; c < n; ++c) at(col, c) = field.mul(at(col, c), inv);
    b[col] = field.mul(b[col], inv);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || at(r, col).is_zero()) continue;
      const FieldElem factor = at(r, col);
      for (std::size_t c = col; c < n; ++c) at(r, c) = field.add(at(r, c), field.mul(factor, at(col, c)));
      b[r] = field.add(b[r], field.mul(factor, b[col]));
    }
  }
  return b;
}

LinearizedPoly interpolate(const gf::ExtField& field,
                           std::span<const FieldElem> points,
                           std::span<const FieldElem> values,
                           int k) {
  if (points.size() != values.size())
    throw Error(ErrorCode::kShapeMismatch, "points and values differ in length");
  if (k < 1) throw Error(ErrorCode::kInvalidParams, "interpolation dimension must be positive");

  const std::vector<std::size_t> chosen = independent_subset(field, points, k);
  if (static_cast<int>(chosen.size()) < k)
    throw Error(ErrorCode::kRankDeficient, "points span " + std::to_string(chosen.size()) +
                                               " dimensions over the base field, need " + std::to_string(k));

  const auto kk = static_cast<std::size_t>(k);
  std::vector<FieldElem> moore;
  moore.reserve(kk * kk);
  std::vector<FieldElem> rhs;
  rhs.reserve(kk);
  for (std::size_t j : chosen) {
    FieldElem power = points[j];
    for (std::size_t i = 0; i < kk; ++i) {
      if (i > 0) power = field.frobenius(power);
      moore.push_back(power);
    }
    rhs.push_back(values[j]);
  }
  LinearizedPoly f(solve(field, std::move(moore), std::move(rhs)));

  std::size_t next = 0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (next < chosen.size() && chosen[next] == j) {
      ++next;
      continue;
    }
    if (evaluate(field, f, points[j]) != values[j])
      throw Error(ErrorCode::kInconsistent, "observation " + std::to_string(j) + " disagrees with interpolant");
  }
  return f;
}

}  // namespace lrc::linpoly
