#include "lrc/gf.hpp"

#include <algorithm>
#include <string>

#include "lrc/error.hpp"

namespace lrc::gf {

namespace {

// Polynomials over a base field, lowest coefficient first, no trailing zeros
// (the zero polynomial is empty).
using Poly = std::vector<BaseElem>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& f, const BaseField& k) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const BaseElem lead_inv = k.inv(f.back());
  while (a.size() >= f.size()) {
    const BaseElem c = k.mul(a.back(), lead_inv);
    const std::size_t shift = a.size() - f.size();
    for (std::size_t j = 0; j <= df; ++j) a[shift + j] ^= k.mul(c, f[j]);
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, const BaseField& k) {
  if (a.empty() || b.empty()) return {};
  Poly p(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    const BaseElem* row = k.mul_row(a[i]);
    for (std::size_t j = 0; j < b.size(); ++j) p[i + j] ^= row[b[j]];
  }
  return poly_mod(std::move(p), f, k);
}

Poly poly_gcd(Poly a, Poly b, const BaseField& k) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, k);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<int> prime_divisors(int n) {
  std::vector<int> out;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

BaseField make_gf2() { return BaseField(1, 0b10u); }

std::uint32_t binary_mulmod(std::uint32_t a, std::uint32_t b, std::uint32_t poly, int bits) {
  std::uint32_t r = 0;
  for (int i = 0; i < bits; ++i)
    if ((b >> i) & 1u) r ^= a << i;
  for (int i = 2 * bits - 2; i >= bits; --i)
    if ((r >> i) & 1u) r ^= poly << (i - bits);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

bool is_irreducible(const BaseField& base, std::span<const BaseElem> poly_in) {
  Poly f(poly_in.begin(), poly_in.end());
  trim(f);
  if (f.size() < 2) return false;
  const int m = static_cast<int>(f.size()) - 1;
  if (m == 1) return true;

  // h[i] = x^(q^i) mod f
  const Poly x = poly_mod(Poly{0, 1}, f, base);
  std::vector<Poly> h(static_cast<std::size_t>(m) + 1);
  h[0] = x;
  for (int i = 1; i <= m; ++i) {
    Poly cur = h[static_cast<std::size_t>(i) - 1];
    for (int j = 0; j < base.bits(); ++j) cur = poly_mulmod(cur, cur, f, base);
    h[static_cast<std::size_t>(i)] = std::move(cur);
  }
  if (h[static_cast<std::size_t>(m)] != x) return false;
  for (int p : prime_divisors(m)) {
    Poly d = h[static_cast<std::size_t>(m / p)];
    d.resize(std::max<std::size_t>(d.size(), 2), 0);
    d[1] ^= 1;
    trim(d);
    if (d.empty()) return false;
    if (poly_gcd(d, f, base).size() != 1) return false;
  }
  return true;
}

std::vector<BaseElem> smallest_irreducible(const BaseField& base, int degree) {
  if (degree < 1 || degree > kMaxExtDegree)
    throw Error(ErrorCode::kInvalidParams, "extension degree out of range: " + std::to_string(degree));
  Poly f(static_cast<std::size_t>(degree) + 1, 0);
  f.back() = 1;
  const unsigned q = base.order();
  for (;;) {
    if (is_irreducible(base, f)) return f;
    // Increment the tail as a base-q counter, x^0 least significant.
    int i = 0;
    while (i < degree) {
      if (++f[static_cast<std::size_t>(i)] < q) break;
      f[static_cast<std::size_t>(i)] = 0;
      ++i;
    }
    if (i == degree) throw Error(ErrorCode::kInternal, "no irreducible polynomial found");
  }
}

std::uint32_t smallest_binary_irreducible(int degree) {
  if (degree < 1 || degree > kMaxBaseBits)
    throw Error(ErrorCode::kInvalidParams, "base field bits out of range: " + std::to_string(degree));
  const Poly f = smallest_irreducible(make_gf2(), degree);
  std::uint32_t out = 0;
  for (std::size_t i = 0; i < f.size(); ++i) out |= static_cast<std::uint32_t>(f[i]) << i;
  return out;
}

// ---------------------------------------------------------------------------

BaseField::BaseField(int bits) : BaseField(bits, smallest_binary_irreducible(bits)) {}

BaseField::BaseField(int bits, std::uint32_t irreducible)
    : bits_(bits), order_(1u << bits), poly_(irreducible) {
  if (bits < 1 || bits > kMaxBaseBits)
    throw Error(ErrorCode::kInvalidParams, "base field bits out of range: " + std::to_string(bits));
  if ((irreducible >> bits) != 1u)
    throw Error(ErrorCode::kInvalidParams, "base polynomial degree does not match bits");
  if (bits > 1) {
    Poly f;
    for (int i = 0; i <= bits; ++i) f.push_back(static_cast<BaseElem>((irreducible >> i) & 1u));
    if (!is_irreducible(make_gf2(), f))
      throw Error(ErrorCode::kInvalidParams, "base polynomial is reducible");
  }
  build_tables();
}

void BaseField::build_tables() {
  table_.assign(static_cast<std::size_t>(order_) * order_, 0);
  inv_.assign(order_, 0);
  for (unsigned a = 0; a < order_; ++a) {
    for (unsigned b = 0; b < order_; ++b) {
      const auto p = static_cast<BaseElem>(binary_mulmod(a, b, poly_, bits_));
      table_[a * order_ + b] = p;
      if (p == 1) inv_[a] = static_cast<BaseElem>(b);
    }
  }
}

BaseElem BaseField::inv(BaseElem a) const {
  if (a == 0) throw Error(ErrorCode::kZeroInverse, "inverse of zero in base field");
  if (a >= order_) throw Error(ErrorCode::kParamMismatch, "value outside base field");
  return inv_[a];
}

// ---------------------------------------------------------------------------

FieldElem::FieldElem(int degree) : degree_(static_cast<std::uint8_t>(degree)) {
  if (degree < 1 || degree > kMaxExtDegree)
    throw Error(ErrorCode::kInvalidParams, "extension degree out of range: " + std::to_string(degree));
}

bool FieldElem::is_zero() const noexcept {
  return std::all_of(c_.begin(), c_.begin() + degree_, [](BaseElem v) { return v == 0; });
}

// ---------------------------------------------------------------------------

ExtField::ExtField(BaseField base, int degree)
    : base_(std::move(base)), degree_(degree), modulus_(smallest_irreducible(base_, degree)) {
  init();
}

ExtField::ExtField(BaseField base, std::vector<BaseElem> modulus)
    : base_(std::move(base)), degree_(static_cast<int>(modulus.size()) - 1), modulus_(std::move(modulus)) {
  if (degree_ < 1 || degree_ > kMaxExtDegree)
    throw Error(ErrorCode::kInvalidParams, "extension degree out of range");
  if (modulus_.back() != 1) throw Error(ErrorCode::kInvalidParams, "extension modulus must be monic");
  for (BaseElem c : modulus_)
    if (!base_.contains(c)) throw Error(ErrorCode::kInvalidParams, "modulus coefficient outside base field");
  if (!is_irreducible(base_, modulus_))
    throw Error(ErrorCode::kInvalidParams, "extension modulus is reducible");
  init();
}

void ExtField::init() {
  tail_.clear();
  for (int j = 0; j < degree_; ++j)
    if (modulus_[static_cast<std::size_t>(j)] != 0) tail_.emplace_back(j, modulus_[static_cast<std::size_t>(j)]);

  // x^q by repeated squaring, then (x^j)^q = (x^q)^j.
  // For m = 1 the field is F_q itself and Frobenius is the identity.
  FieldElem xq = one();
  if (degree_ > 1) {
    xq = basis(1);
    for (int i = 0; i < base_.bits(); ++i) xq = mul(xq, xq);
  }
  frobenius_cols_.clear();
  FieldElem cur = one();
  for (int j = 0; j < degree_; ++j) {
    frobenius_cols_.push_back(cur);
    cur = mul(cur, xq);
  }
}

FieldElem ExtField::one() const { return embed(1); }

FieldElem ExtField::basis(int i) const {
  if (i < 0 || i >= degree_) throw Error(ErrorCode::kInvalidParams, "basis index out of range");
  FieldElem e(degree_);
  e[i] = 1;
  return e;
}

FieldElem ExtField::embed(BaseElem c) const {
  if (!base_.contains(c)) throw Error(ErrorCode::kParamMismatch, "value outside base field");
  FieldElem e(degree_);
  e[0] = c;
  return e;
}

FieldElem ExtField::from_coords(std::span<const BaseElem> coords) const {
  if (static_cast<int>(coords.size()) != degree_)
    throw Error(ErrorCode::kParamMismatch, "coordinate count does not match extension degree");
  FieldElem e(degree_);
  for (int i = 0; i < degree_; ++i) {
    if (!base_.contains(coords[static_cast<std::size_t>(i)]))
      throw Error(ErrorCode::kParamMismatch, "coordinate outside base field");
    e[i] = coords[static_cast<std::size_t>(i)];
  }
  return e;
}

bool ExtField::contains(const FieldElem& a) const noexcept {
  if (a.degree() != degree_) return false;
  for (int i = 0; i < degree_; ++i)
    if (!base_.contains(a[i])) return false;
  return true;
}

void ExtField::check(const FieldElem& a) const {
  if (a.degree() != degree_) throw Error(ErrorCode::kParamMismatch, "element belongs to a different field");
}

FieldElem ExtField::add(const FieldElem& a, const FieldElem& b) const {
  check(a);
  check(b);
  FieldElem r = a;
  for (int i = 0; i < degree_; ++i) r[i] ^= b[i];
  return r;
}

FieldElem ExtField::mul(const FieldElem& a, const FieldElem& b) const {
  check(a);
  check(b);
  std::array<BaseElem, 2 * kMaxExtDegree> prod{};
  const int m = degree_;
  for (int i = 0; i < m; ++i) {
    if (a[i] == 0) continue;
    const BaseElem* row = base_.mul_row(a[i]);
    BaseElem* out = prod.data() + i;
    for (int j = 0; j < m; ++j) out[j] ^= row[b[j]];
  }
  // x^m = sum of tail terms (characteristic 2).
  for (int k = 2 * m - 2; k >= m; --k) {
    const BaseElem c = prod[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    const BaseElem* row = base_.mul_row(c);
    for (const auto& [j, e] : tail_) prod[static_cast<std::size_t>(k - m + j)] ^= row[e];
  }
  FieldElem r(m);
  for (int i = 0; i < m; ++i) r[i] = prod[static_cast<std::size_t>(i)];
  return r;
}

FieldElem ExtField::inv(const FieldElem& a) const {
  check(a);
  if (a.is_zero()) throw Error(ErrorCode::kZeroInverse, "inverse of zero");
  // a^{-1} = a^{q + q^2 + ... + q^{m-1}} / N(a), with N(a) = a^{1 + q + ... + q^{m-1}} in F_q.
  FieldElem acc = one();
  FieldElem t = a;
  for (int i = 1; i < degree_; ++i) {
    t = frobenius_once(t);
    acc = mul(acc, t);
  }
  const FieldElem norm = mul(a, acc);
  for (int i = 1; i < degree_; ++i)
    if (norm[i] != 0) throw Error(ErrorCode::kInternal, "norm not in base field");
  return scale(base_.inv(norm[0]), acc);
}

FieldElem ExtField::scale(BaseElem c, const FieldElem& a) const {
  check(a);
  if (!base_.contains(c)) throw Error(ErrorCode::kParamMismatch, "scalar outside base field");
  FieldElem r(degree_);
  const BaseElem* row = base_.mul_row(c);
  for (int i = 0; i < degree_; ++i) r[i] = row[a[i]];
  return r;
}

void ExtField::add_scaled(FieldElem& acc, BaseElem c, const FieldElem& a) const noexcept {
  if (c == 0) return;
  const BaseElem* row = base_.mul_row(c);
  for (int i = 0; i < degree_; ++i) acc[i] ^= row[a[i]];
}

FieldElem ExtField::frobenius_once(const FieldElem& a) const noexcept {
  // Frobenius is F_q-linear and fixes F_q, so a^q = sum_j a_j (x^j)^q.
  FieldElem r(degree_);
  for (int j = 0; j < degree_; ++j) add_scaled(r, a[j], frobenius_cols_[static_cast<std::size_t>(j)]);
  return r;
}

FieldElem ExtField::frobenius(const FieldElem& a, int i) const {
  check(a);
  if (i < 0) throw Error(ErrorCode::kInvalidParams, "negative Frobenius power");
  FieldElem r = a;
  for (int k = i % degree_; k > 0; --k) r = frobenius_once(r);
  return r;
}

int ExtField::rank_over_base(std::span<const FieldElem> v) const {
  BaseSpan span(*this);
  for (const FieldElem& e : v) {
    check(e);
    span.insert(e);
    if (span.dim() == degree_) break;
  }
  return span.dim();
}

void ExtField::write(const FieldElem& a, std::span<std::uint8_t> out) const {
  check(a);
  if (out.size() != bytes_per_element()) throw Error(ErrorCode::kShapeMismatch, "output buffer size");
  std::fill(out.begin(), out.end(), std::uint8_t{0});
  const int s = base_.bits();
  for (int j = 0; j < degree_; ++j) {
    for (int b = 0; b < s; ++b) {
      if ((a[j] >> b) & 1) {
        const int bit = j * s + b;
        out[static_cast<std::size_t>(bit / 8)] |= static_cast<std::uint8_t>(1u << (bit % 8));
      }
    }
  }
}

FieldElem ExtField::read(std::span<const std::uint8_t> in) const {
  if (in.size() != bytes_per_element()) throw Error(ErrorCode::kShapeMismatch, "input buffer size");
  const int s = base_.bits();
  const int used = bits_per_element();
  for (int bit = used; bit < static_cast<int>(in.size()) * 8; ++bit)
    if ((in[static_cast<std::size_t>(bit / 8)] >> (bit % 8)) & 1)
      throw Error(ErrorCode::kFormat, "nonzero padding bits in serialized element");
  FieldElem r(degree_);
  for (int j = 0; j < degree_; ++j) {
    BaseElem v = 0;
    for (int b = 0; b < s; ++b) {
      const int bit = j * s + b;
      if ((in[static_cast<std::size_t>(bit / 8)] >> (bit % 8)) & 1) v |= static_cast<BaseElem>(1u << b);
    }
    r[j] = v;
  }
  return r;
}

// ---------------------------------------------------------------------------

FieldElem BaseSpan::reduce(FieldElem v) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const BaseElem c = v[pivots_[i]];
    if (c != 0) field_->add_scaled(v, c, rows_[i]);  // char 2: subtract == add
  }
  return v;
}

bool BaseSpan::insert(const FieldElem& v) {
  FieldElem r = reduce(v);
  const int m = field_->degree();
  int pivot = 0;
  while (pivot < m && r[pivot] == 0) ++pivot;
  if (pivot == m) return false;
  r = field_->scale(field_->base().inv(r[pivot]), r);
  rows_.push_back(r);
  pivots_.push_back(pivot);
  return true;
}

bool BaseSpan::contains(const FieldElem& v) const { return reduce(v).is_zero(); }

FieldElem random_element(const ExtField& field, std::mt19937_64& rng) {
  FieldElem e(field.degree());
  const unsigned q = field.base().order();
  for (int i = 0; i < field.degree(); ++i) e[i] = static_cast<BaseElem>(rng() % q);
  return e;
}

}  // namespace lrc::gf
