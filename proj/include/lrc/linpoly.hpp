#pragma once

// Linearized polynomials f(x) = sum_i a_i x^(q^i) over F_{q^m}.

#include <span>
#include <vector>

#include "lrc/gf.hpp"

namespace lrc::linpoly {

class LinearizedPoly {
 public:
  /// Entry i is the coefficient of x^(q^i). Must be non-empty.
  explicit LinearizedPoly(std::vector<gf::FieldElem> coeffs);

  /// Index of the last nonzero coefficient, -1 for the zero polynomial.
  int q_degree() const noexcept;
  const std::vector<gf::FieldElem>& coeffs() const noexcept { return coeffs_; }
  const gf::FieldElem& coeff(int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }

  friend bool operator==(const LinearizedPoly& a, const LinearizedPoly& b);

 private:
  std::vector<gf::FieldElem> coeffs_;
};

gf::FieldElem evaluate(const gf::ExtField& field, const LinearizedPoly& f, const gf::FieldElem& x);

/// Indices of the first points (in input order) that each enlarge the F_q-span,
/// stopping once `limit` have been found.
std::vector<std::size_t> independent_subset(const gf::ExtField& field,
                                            std::span<const gf::FieldElem> points,
                                            int limit);

/// The unique f of q-degree < k with f(points[j]) = values[j] for all j.
///
/// Solves the k x k Moore system on a greedily chosen independent subset and
/// then checks every remaining constraint. Throws RankDeficient when the
/// points span fewer than k dimensions and Inconsistent when a leftover
/// constraint fails.
LinearizedPoly interpolate(const gf::ExtField& field,
                           std::span<const gf::FieldElem> points,
                           std::span<const gf::FieldElem> values,
                           int k);

/// Solves A x = b over F_{q^m} by Gaussian elimination; A is row-major n x n.
/// Throws Internal if A is singular.
std::vector<gf::FieldElem> solve(const gf::ExtField& field,
                                 std::vector<gf::FieldElem> a,
                                 std::vector<gf::FieldElem> b);

}  // namespace lrc::linpoly
