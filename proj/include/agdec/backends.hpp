#ifndef AGDEC_BACKENDS_HPP
#define AGDEC_BACKENDS_HPP

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "funcfield.hpp"

namespace agdec::funcfield {

// Rational function field F_q(X); P_inf the usual place at infinity.
class RationalBackend : public Backend {
 public:
  explicit RationalBackend(Field F, u32 offset = 0) : Backend(F, 1, 0, offset) {
    set_mul_table({{Poly::one(F)}});
  }

  std::string kind() const override { return "rational"; }
  std::string describe() const override {
    return "rational over " + F_.name() + " (x = X - " + std::to_string(offset_) + ")";
  }

  const std::vector<PlaceId>& places() const override {
    std::call_once(places_once_, [this] {
      places_.reserve(F_.q());
      for (u64 a = 0; a < F_.q(); ++a) places_.push_back(PlaceId::affine1(static_cast<u32>(a)));
    });
    return places_;
  }
  bool is_place(const PlaceId& P) const override { return P.inf || (P.arity == 1 && P.a < F_.q()); }

  std::shared_ptr<const Backend> extend(unsigned e) const override {
    Field K = Field::make(F_.p(), F_.k() * e);
    return std::make_shared<RationalBackend>(K, F_.embedding(K).map(offset_));
  }

  PlaceId p0() const override { return PlaceId::affine1(offset_); }

  long base_delta(std::size_t) const override { return 0; }
  u32 base_eval(std::size_t, const PlaceId&) const override { return 1; }
  Poly base_series(std::size_t, std::size_t beta, const PlaceId&) const override {
    return Poly::one(F_).truncated(beta);
  }

  std::map<u32, long> h_factors(const Divisor& A) const override {
    std::map<u32, long> h;
    for (const auto& [P, v] : A.terms()) {
      if (P.inf) continue;
      if (P.arity != 1) throw Error("rational backend: place " + P.str() + " is not of the form x=a");
      h[P.a] = -v;
    }
    return h;
  }

 private:
  mutable std::once_flag places_once_;
  mutable std::vector<PlaceId> places_;
};

// Hermitian curve x2^q0 + x2 = x1^(q0+1) over F_{q0^(2e)}; x = x1 - offset,
// Apery basis of the coordinate ring y_j = x2^j with delta(y_j) = j(q0+1).
class HermitianBackend : public Backend {
 public:
  HermitianBackend(u64 q0, unsigned e = 1, u32 offset = 0)
      : Backend(make_field(q0, e), static_cast<long>(q0), static_cast<long>(q0 * (q0 - 1) / 2), offset),
        q0_(q0),
        e_(e) {
    std::vector<std::vector<Poly>> t(q0 * q0);
    Poly x1 = Poly(F_, {offset_, 1});
    Poly x1pow = algebra::pow(x1, q0 + 1);
    for (std::size_t j = 0; j < q0; ++j)
      for (std::size_t k = 0; k < q0; ++k) {
        std::vector<Poly> c(q0, Poly(F_));
        std::size_t s = j + k;
        if (s < q0) {
          c[s] = Poly::one(F_);
        } else {
          // x2^q0 = x1^(q0+1) - x2
          c[s - q0] += x1pow;
          c[s - q0 + 1] -= Poly::one(F_);
        }
        t[j * q0 + k] = std::move(c);
      }
    set_mul_table(std::move(t));
  }

  static Field make_field(u64 q0, unsigned e) {
    u64 p = 0;
    for (u64 d = 2; d <= q0; ++d)
      if (q0 % d == 0) {
        p = d;
        break;
      }
    if (p == 0) throw Error("hermitian backend: q0 must be a prime power >= 2");
    unsigned a = 0;
    u64 r = q0;
    while (r % p == 0) {
      r /= p;
      ++a;
    }
    if (r != 1) throw Error("hermitian backend: q0 must be a prime power");
    return Field::make(p, 2 * a * e);
  }

  u64 q0() const { return q0_; }
  unsigned extension_degree() const { return e_; }

  std::string kind() const override { return "hermitian"; }
  std::string describe() const override {
    return "hermitian q0=" + std::to_string(q0_) + " over " + F_.name() + " (x = x1 - " + std::to_string(offset_) +
           ")";
  }

  u32 curve_rhs(u32 x1) const { return F_.pow(x1, q0_ + 1); }
  u32 curve_lhs(u32 x2) const { return F_.add(F_.pow(x2, q0_), x2); }

  const std::vector<PlaceId>& places() const override {
    std::call_once(places_once_, [this] {
      std::unordered_map<u32, std::vector<u32>> pre;
      for (u64 b = 0; b < F_.q(); ++b) pre[curve_lhs(static_cast<u32>(b))].push_back(static_cast<u32>(b));
      for (u64 a = 0; a < F_.q(); ++a) {
        auto it = pre.find(curve_rhs(static_cast<u32>(a)));
        if (it == pre.end()) continue;
        for (u32 b : it->second) places_.push_back(PlaceId::affine2(static_cast<u32>(a), b));
      }
      std::sort(places_.begin(), places_.end());
    });
    return places_;
  }
  bool is_place(const PlaceId& P) const override {
    if (P.inf) return true;
    return P.arity == 2 && P.a < F_.q() && P.b < F_.q() && curve_lhs(P.b) == curve_rhs(P.a);
  }

  std::shared_ptr<const Backend> extend(unsigned e) const override {
    Field K = make_field(q0_, e_ * e);
    return std::make_shared<HermitianBackend>(q0_, e_ * e, F_.embedding(K).map(offset_));
  }

  PlaceId p0() const override {
    const u32 rhs = curve_rhs(offset_);
    for (u64 b = 0; b < F_.q(); ++b)
      if (curve_lhs(static_cast<u32>(b)) == rhs) return PlaceId::affine2(offset_, static_cast<u32>(b));
    throw Error("hermitian backend: no rational place over x1 = offset");
  }

  long base_delta(std::size_t j) const override { return static_cast<long>(j * (q0_ + 1)); }
  u32 base_eval(std::size_t j, const PlaceId& P) const override { return F_.pow(P.b, j); }

  // x2 at P as a series in t = x1 - x1(P). The map y -> (t+a)^(q0+1) - y^q0
  // sends an error of valuation v to one of valuation q0*v.
  Poly x2_series(std::size_t beta, const PlaceId& P) const {
    if (beta == 0) return Poly(F_);
    Poly target = algebra::pow(Poly(F_, {P.a, 1}), q0_ + 1).truncated(beta);
    Poly y = Poly::constant(F_, P.b);
    for (std::size_t v = 1; v < beta; v *= q0_) y = target - algebra::series_pow(y, static_cast<long>(q0_), beta);
    return y.truncated(beta);
  }
  Poly base_series(std::size_t j, std::size_t beta, const PlaceId& P) const override {
    return algebra::series_pow(x2_series(beta, P), static_cast<long>(j), beta);
  }

  // Supported shape: c*P_inf minus whole x1-fibers with a common multiplicity.
  std::map<u32, long> h_factors(const Divisor& A) const override {
    std::map<u32, std::pair<long, std::size_t>> fib;
    for (const auto& [P, v] : A.terms()) {
      if (P.inf) continue;
      if (P.arity != 2) throw Error("hermitian backend: place " + P.str() + " is not a curve point");
      auto& f = fib[P.a];
      if (f.second == 0)
        f.first = v;
      else if (f.first != v)
        throw Error("hermitian backend: unsupported divisor shape (unequal multiplicities in the fiber over x1=" +
                    std::to_string(P.a) + ")");
      ++f.second;
    }
    std::map<u32, long> h;
    for (const auto& [a, f] : fib) {
      if (f.second != q0_)
        throw Error("hermitian backend: unsupported divisor shape (partial fiber over x1=" + std::to_string(a) +
                    ")");
      h[a] = -f.first;
    }
    return h;
  }

 private:
  u64 q0_;
  unsigned e_;
  mutable std::once_flag places_once_;
  mutable std::vector<PlaceId> places_;
};

inline std::shared_ptr<const Backend> backend_rational(Field F, u32 offset = 0) {
  return std::make_shared<RationalBackend>(F, offset);
}
inline std::shared_ptr<const Backend> backend_hermitian(u64 q0, u32 offset = 0) {
  return std::make_shared<HermitianBackend>(q0, 1, offset);
}

}  // namespace agdec::funcfield

#endif
