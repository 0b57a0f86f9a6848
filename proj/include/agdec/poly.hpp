#ifndef AGDEC_POLY_HPP
#define AGDEC_POLY_HPP

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "field.hpp"

namespace agdec::algebra {

// Dense univariate polynomial, coefficients low to high. The zero polynomial
// has no coefficients and degree kNegInf.
class Poly {
 public:
  Poly() = default;
  explicit Poly(Field F) : F_(F) {}
  Poly(Field F, std::vector<u32> c) : F_(F), c_(std::move(c)) { trim(); }

  static Poly constant(Field F, u32 a) { return Poly(F, {a}); }
  static Poly one(Field F) { return Poly(F, {1}); }
  // c * x^m
  static Poly monomial(Field F, u32 c, std::size_t m) {
    if (c == 0) return Poly(F);
    std::vector<u32> v(m + 1, 0);
    v[m] = c;
    return Poly(F, std::move(v));
  }
  static Poly x(Field F) { return monomial(F, 1, 1); }

  Field field() const { return F_; }
  bool is_zero() const { return c_.empty(); }
  long deg() const { return c_.empty() ? kNegInf : static_cast<long>(c_.size()) - 1; }
  std::size_t size() const { return c_.size(); }
  u32 lc() const { return c_.empty() ? 0 : c_.back(); }
  u32 operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  const std::vector<u32>& coeffs() const { return c_; }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }

  // x-adic valuation; kNegInf for zero
  long valuation() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i]) return static_cast<long>(i);
    return kNegInf;
  }

  void set(std::size_t i, u32 a) {
    if (i >= c_.size()) {
      if (a == 0) return;
      c_.resize(i + 1, 0);
    }
    c_[i] = a;
    trim();
  }

  u32 eval(u32 a) const {
    u32 r = 0;
    for (std::size_t i = c_.size(); i-- > 0;) r = F_.add(F_.mul(r, a), c_[i]);
    return r;
  }
  Felt eval(const Felt& a) const { return {F_, eval(a.v)}; }

  Poly& operator+=(const Poly& o) {
    adopt(o);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = F_.add(c_[i], o.c_[i]);
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    adopt(o);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = F_.sub(c_[i], o.c_[i]);
    trim();
    return *this;
  }

  // this -= c * x^m * o
  void sub_scaled_shift(const Poly& o, u32 c, std::size_t m) {
    if (c == 0 || o.is_zero()) return;
    adopt(o);
    if (o.c_.size() + m > c_.size()) c_.resize(o.c_.size() + m, 0);
    const u32 nc = F_.neg(c);
    for (std::size_t i = 0; i < o.c_.size(); ++i)
      if (o.c_[i]) c_[i + m] = F_.add(c_[i + m], F_.mul(nc, o.c_[i]));
    trim();
  }

  Poly scaled(u32 a) const {
    if (a == 0) return Poly(F_);
    if (a == 1) return *this;
    Poly r(F_);
    r.c_.resize(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = F_.mul(c_[i], a);
    r.trim();
    return r;
  }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(F_.inv(lc()));
  }

  // multiply by x^m
  Poly shifted(std::size_t m) const {
    if (is_zero() || m == 0) return *this;
    Poly r(F_);
    r.c_.assign(m, 0);
    r.c_.insert(r.c_.end(), c_.begin(), c_.end());
    return r;
  }
  // floor division by x^m
  Poly shifted_down(std::size_t m) const {
    if (m >= c_.size()) return Poly(F_);
    return Poly(F_, std::vector<u32>(c_.begin() + static_cast<long>(m), c_.end()));
  }

  Poly truncated(std::size_t beta) const {
    if (c_.size() <= beta) return *this;
    return Poly(F_, std::vector<u32>(c_.begin(), c_.begin() + static_cast<long>(beta)));
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a) { return Poly(a.F_) - a; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Field F = a.F_.valid() ? a.F_ : b.F_;
    if (a.is_zero() || b.is_zero()) return Poly(F);
    std::vector<u32> r(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      const u32 ai = a.c_[i];
      if (!ai) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        if (b.c_[j]) r[i + j] = F.add(r[i + j], F.mul(ai, b.c_[j]));
    }
    return Poly(F, std::move(r));
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return a.c_ != b.c_; }
  // lexicographic on coefficient lists, for deterministic ordering
  friend bool operator<(const Poly& a, const Poly& b) { return a.c_ < b.c_; }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (!c_[i]) continue;
      if (!s.empty()) s += " + ";
      if (c_[i] != 1 || i == 0) s += std::to_string(c_[i]);
      if (i >= 1) s += (c_[i] != 1 ? "*x" : "x");
      if (i >= 2) s += "^" + std::to_string(i);
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  void adopt(const Poly& o) {
    if (!F_.valid()) F_ = o.F_;
  }

  Field F_;
  std::vector<u32> c_;
};

inline std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw Error("divmod: division by zero polynomial");
  Field F = b.field();
  if (a.deg() < b.deg()) return {Poly(F), a};
  std::vector<u32> r = a.coeffs();
  const std::size_t db = static_cast<std::size_t>(b.deg());
  std::vector<u32> q(r.size() - db, 0);
  const u32 inv_lc = F.inv(b.lc());
  const auto& bc = b.coeffs();
  for (std::size_t i = r.size(); i-- > db;) {
    u32 c = F.mul(r[i], inv_lc);
    if (!c) continue;
    q[i - db] = c;
    const u32 nc = F.neg(c);
    for (std::size_t j = 0; j <= db; ++j)
      if (bc[j]) r[i - db + j] = F.add(r[i - db + j], F.mul(nc, bc[j]));
  }
  r.resize(db);
  return {Poly(F, std::move(q)), Poly(F, std::move(r))};
}

inline Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }
inline Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }

// monic gcd; gcd(0,0) = 0
inline Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

inline Poly pow(const Poly& a, u64 e) {
  Poly r = Poly::one(a.field());
  Poly b = a;
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

inline Poly mul_trunc(const Poly& a, const Poly& b, std::size_t beta) {
  Field F = a.field().valid() ? a.field() : b.field();
  if (a.is_zero() || b.is_zero() || beta == 0) return Poly(F);
  const auto& ac = a.coeffs();
  const auto& bc = b.coeffs();
  std::size_t n = std::min(beta, ac.size() + bc.size() - 1);
  std::vector<u32> r(n, 0);
  for (std::size_t i = 0; i < ac.size() && i < n; ++i) {
    if (!ac[i]) continue;
    for (std::size_t j = 0; j < bc.size() && i + j < n; ++j)
      if (bc[j]) r[i + j] = F.add(r[i + j], F.mul(ac[i], bc[j]));
  }
  return Poly(F, std::move(r));
}

inline Poly vanishing_poly(Field F, const std::vector<u32>& points) {
  std::vector<u32> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error("vanishing_poly: duplicate points");
  Poly r = Poly::one(F);
  for (u32 a : points) r *= Poly(F, {F.neg(a), 1});
  return r;
}

namespace detail {

inline Poly range_product(Field F, const std::vector<u32>& pts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return Poly(F, {F.neg(pts[lo]), 1});
  std::size_t mid = lo + (hi - lo) / 2;
  return range_product(F, pts, lo, mid) * range_product(F, pts, mid, hi);
}

// Remainder descent down a subproduct tree built on the fly.
inline void mpe_rec(const Poly& a, const std::vector<u32>& pts, std::size_t lo, std::size_t hi,
                    std::vector<u32>& out) {
  if (hi - lo <= 16) {
    for (std::size_t j = lo; j < hi; ++j) out[j] = a.eval(pts[j]);
    return;
  }
  Field F = a.field();
  std::size_t mid = lo + (hi - lo) / 2;
  mpe_rec(a % range_product(F, pts, lo, mid), pts, lo, mid, out);
  mpe_rec(a % range_product(F, pts, mid, hi), pts, mid, hi, out);
}

}  // namespace detail

inline std::vector<u32> multipoint_eval(const Poly& a, const std::vector<u32>& points) {
  std::vector<u32> out(points.size(), 0);
  if (a.is_zero() || points.empty()) return out;
  if (a.deg() < 32) {
    for (std::size_t j = 0; j < points.size(); ++j) out[j] = a.eval(points[j]);
    return out;
  }
  detail::mpe_rec(a, points, 0, points.size(), out);
  return out;
}

inline std::vector<u32> naive_eval(const Poly& a, const std::vector<u32>& points) {
  std::vector<u32> out(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) out[j] = a.eval(points[j]);
  return out;
}

inline Poly lagrange_interpolate(Field F, const std::vector<u32>& points, const std::vector<u32>& values) {
  if (points.size() != values.size()) throw Error("lagrange_interpolate: length mismatch");
  Poly M = vanishing_poly(F, points);
  Poly r(F);
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (!values[j]) continue;
    Poly b = divmod(M, Poly(F, {F.neg(points[j]), 1})).first;
    u32 w = F.div(values[j], b.eval(points[j]));
    r += b.scaled(w);
  }
  return r;
}

inline std::vector<std::pair<u32, unsigned>> roots_in_field(const Poly& a) {
  if (a.is_zero()) throw Error("roots_in_field: zero polynomial");
  Field F = a.field();
  std::vector<std::pair<u32, unsigned>> out;
  if (a.deg() == 0) return out;
  for (u64 c = 0; c < F.q(); ++c) {
    u32 v = static_cast<u32>(c);
    if (a.eval(v) != 0) continue;
    Poly lin(F, {F.neg(v), 1});
    Poly cur = a;
    unsigned mult = 0;
    for (;;) {
      auto [qq, rr] = divmod(cur, lin);
      if (!rr.is_zero()) break;
      ++mult;
      cur = std::move(qq);
    }
    out.emplace_back(v, mult);
  }
  return out;
}

// Truncated power series: value mod x^prec.
struct SeriesTrunc {
  Poly value;
  std::size_t prec = 0;

  SeriesTrunc() = default;
  SeriesTrunc(Poly v, std::size_t beta) : value(v.truncated(beta)), prec(beta) {}

  friend SeriesTrunc operator*(const SeriesTrunc& a, const SeriesTrunc& b) {
    std::size_t p = std::min(a.prec, b.prec);
    return {mul_trunc(a.value, b.value, p), p};
  }
  friend SeriesTrunc operator+(const SeriesTrunc& a, const SeriesTrunc& b) {
    std::size_t p = std::min(a.prec, b.prec);
    return {(a.value + b.value).truncated(p), p};
  }
};

// Inverse of a unit series mod x^beta (Newton iteration).
inline Poly series_inverse(const Poly& a, std::size_t beta) {
  Field F = a.field();
  if (a[0] == 0) throw Error("series_inverse: constant term is zero");
  Poly g = Poly::constant(F, F.inv(a[0]));
  std::size_t prec = 1;
  const Poly two = Poly::constant(F, F.from_int(2));
  while (prec < beta) {
    prec = std::min(2 * prec, beta);
    Poly ag = mul_trunc(a.truncated(prec), g, prec);
    g = mul_trunc(g, two - ag, prec);
  }
  return g.truncated(beta);
}

inline Poly series_pow(const Poly& a, long e, std::size_t beta) {
  if (e < 0) return series_pow(series_inverse(a, beta), -e, beta);
  Field F = a.field();
  Poly r = Poly::one(F).truncated(beta);
  Poly b = a.truncated(beta);
  u64 n = static_cast<u64>(e);
  while (n) {
    if (n & 1) r = mul_trunc(r, b, beta);
    n >>= 1;
    if (n) b = mul_trunc(b, b, beta);
  }
  return r;
}

}  // namespace agdec::algebra

#endif
