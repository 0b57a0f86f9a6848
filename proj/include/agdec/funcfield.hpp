#ifndef AGDEC_FUNCFIELD_HPP
#define AGDEC_FUNCFIELD_HPP

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "divisor.hpp"
#include "polymat.hpp"

namespace agdec::funcfield {

using algebra::Field;
using algebra::Poly;
using polymat::floor_rem;

class FuncElem;

// A curve with a distinguished place P_inf and an Apery system of the ring
// of functions regular away from P_inf. Concrete backends describe the
// unshifted basis y_j (j < mu, delta(y_j) = j mod mu) and the divisor shapes
// for which the ideal of A is principal, generated by h_A = prod (X-a)^r.
//
// The decoder's variable is x = X - offset (X = x1 for Hermitian).
class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string kind() const = 0;
  Field field() const { return F_; }
  long mu() const { return mu_; }
  long genus() const { return genus_; }
  u32 offset() const { return offset_; }

  // All affine rational places over the backend's field, sorted.
  virtual const std::vector<PlaceId>& places() const = 0;
  virtual bool is_place(const PlaceId& P) const = 0;
  // The same curve over F_{q^e}, with the offset carried along.
  virtual std::shared_ptr<const Backend> extend(unsigned e) const = 0;
  std::vector<PlaceId> enumerate_places(unsigned e) const {
    if (e == 1) return places();
    return extend(e)->places();
  }

  PlaceId embed_place(const PlaceId& P, const Backend& target) const {
    if (P.inf) return P;
    const auto& emb = F_.embedding(target.field());
    PlaceId Q = P;
    Q.a = emb.map(P.a);
    if (P.arity == 2) Q.b = emb.map(P.b);
    return Q;
  }

  u32 x_eval(const PlaceId& P) const {
    if (P.inf) throw Error("x_eval: x has a pole at infinity");
    return F_.sub(P.a, offset_);
  }
  virtual PlaceId p0() const = 0;

  // --- unshifted Apery basis ---
  virtual long base_delta(std::size_t j) const = 0;
  // y_j * y_k over the basis (y_0..y_{mu-1}), coordinates polynomial in x
  const std::vector<Poly>& base_mul(std::size_t j, std::size_t k) const {
    return mul_table_[j * static_cast<std::size_t>(mu_) + k];
  }
  virtual u32 base_eval(std::size_t j, const PlaceId& P) const = 0;
  // expansion of y_j at P in t = x - x(P), mod t^beta
  virtual Poly base_series(std::size_t j, std::size_t beta, const PlaceId& P) const = 0;

  // Throws if A is not a supported shape; returns h_A as X-root -> exponent.
  virtual std::map<u32, long> h_factors(const Divisor& A) const = 0;

  // --- Apery system of Я(A): y_i^{(A)} = h_A * y_{sigma_A(i)} ---
  std::size_t sigma(const Divisor& A, std::size_t i) const {
    return static_cast<std::size_t>(floor_rem(static_cast<long>(i) + A.inf_coeff(), mu_));
  }
  std::size_t sigma_inv(const Divisor& A, std::size_t j) const {
    return static_cast<std::size_t>(floor_rem(static_cast<long>(j) - A.inf_coeff(), mu_));
  }
  long h_degree(const Divisor& A) const {
    long d = 0;
    for (const auto& [a, r] : h_factors(A)) d += r;
    return d;
  }
  long apery_delta(const Divisor& A, std::size_t i) const {
    return mu_ * h_degree(A) + base_delta(sigma(A, i)) - A.inf_coeff();
  }
  std::vector<long> apery_deltas(const Divisor& A) const {
    std::vector<long> d(static_cast<std::size_t>(mu_));
    const long hd = h_degree(A);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = mu_ * hd + base_delta(sigma(A, i)) - A.inf_coeff();
    return d;
  }

  u32 h_eval(const std::map<u32, long>& h, const PlaceId& P) const {
    u32 v = 1;
    for (const auto& [a, r] : h) {
      u32 f = F_.sub(P.a, a);
      if (f == 0) {
        if (r < 0) throw Error("apery_eval: pole at evaluation place");
        return 0;
      }
      v = F_.mul(v, r >= 0 ? F_.pow(f, static_cast<u64>(r)) : F_.pow(F_.inv(f), static_cast<u64>(-r)));
    }
    return v;
  }
  u32 apery_eval(const Divisor& A, std::size_t i, const PlaceId& P) const {
    return F_.mul(h_eval(h_factors(A), P), base_eval(sigma(A, i), P));
  }

  Poly h_series(const std::map<u32, long>& h, std::size_t beta, const PlaceId& P) const {
    Poly s = Poly::one(F_).truncated(beta);
    for (const auto& [a, r] : h) {
      Poly lin(F_, {F_.sub(P.a, a), 1});
      s = algebra::mul_trunc(s, algebra::series_pow(lin, r, beta), beta);
    }
    return s;
  }
  Poly local_series(const Divisor& A, std::size_t i, std::size_t beta, const PlaceId& P) const {
    return algebra::mul_trunc(h_series(h_factors(A), beta, P), base_series(sigma(A, i), beta, P), beta);
  }
  Poly apery_series(const Divisor& A, std::size_t i, std::size_t beta) const {
    return local_series(A, i, beta, p0());
  }

  virtual std::string describe() const = 0;

 protected:
  Backend(Field F, long mu, long genus, u32 offset) : F_(F), mu_(mu), genus_(genus), offset_(offset) {}
  void set_mul_table(std::vector<std::vector<Poly>> t) { mul_table_ = std::move(t); }

  Field F_;
  long mu_;
  long genus_;
  u32 offset_;
  std::vector<std::vector<Poly>> mul_table_;
};

// a = sum_i c[i] * y_i^{(A)}
class FuncElem {
 public:
  FuncElem() = default;
  FuncElem(const Backend* B, Divisor A, std::vector<Poly> c) : B_(B), A_(std::move(A)), c_(std::move(c)) {
    if (c_.size() != static_cast<std::size_t>(B_->mu())) throw Error("FuncElem: coordinate count must equal mu");
  }
  static FuncElem zero(const Backend& B, const Divisor& A) {
    return FuncElem(&B, A, std::vector<Poly>(static_cast<std::size_t>(B.mu()), Poly(B.field())));
  }
  // y_i^{(A)} scaled by the polynomial p
  static FuncElem basis(const Backend& B, const Divisor& A, std::size_t i, Poly p) {
    FuncElem r = zero(B, A);
    r.c_[i] = std::move(p);
    return r;
  }

  const Backend& backend() const { return *B_; }
  const Backend* backend_ptr() const { return B_; }
  const Divisor& divisor() const { return A_; }
  const std::vector<Poly>& coords() const { return c_; }
  std::vector<Poly>& coords() { return c_; }
  const Poly& operator[](std::size_t i) const { return c_[i]; }

  bool is_zero() const {
    for (const auto& p : c_)
      if (!p.is_zero()) return false;
    return true;
  }

  long delta() const {
    long best = kNegInf;
    auto d = B_->apery_deltas(A_);
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!c_[i].is_zero()) best = std::max(best, B_->mu() * c_[i].deg() + d[i]);
    return best;
  }

  u32 eval(const PlaceId& P) const {
    Field F = B_->field();
    const u32 xv = B_->x_eval(P);
    auto h = B_->h_factors(A_);
    const u32 hv = B_->h_eval(h, P);
    u32 s = 0;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i].is_zero()) continue;
      s = F.add(s, F.mul(c_[i].eval(xv), B_->base_eval(B_->sigma(A_, i), P)));
    }
    return F.mul(s, hv);
  }

  FuncElem& operator+=(const FuncElem& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  FuncElem& operator-=(const FuncElem& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend FuncElem operator+(FuncElem a, const FuncElem& b) { return a += b; }
  friend FuncElem operator-(FuncElem a, const FuncElem& b) { return a -= b; }
  FuncElem operator-() const {
    FuncElem r = *this;
    for (auto& p : r.c_) p = -p;
    return r;
  }
  FuncElem scaled(u32 a) const {
    FuncElem r = *this;
    for (auto& p : r.c_) p = p.scaled(a);
    return r;
  }
  FuncElem times_poly(const Poly& q) const {
    FuncElem r = *this;
    for (auto& p : r.c_) p = p * q;
    return r;
  }

  // Exact product in Я(A+B): h_A h_B = h_{A+B} and the basis products come
  // from the backend's multiplication table.
  friend FuncElem operator*(const FuncElem& a, const FuncElem& b) {
    const Backend& B = *a.B_;
    if (a.B_ != b.B_) throw Error("FuncElem: backend mismatch");
    Divisor S = a.A_ + b.A_;
    FuncElem r = zero(B, S);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      const std::size_t ji = B.sigma(a.A_, i);
      for (std::size_t k = 0; k < b.c_.size(); ++k) {
        if (b.c_[k].is_zero()) continue;
        const std::size_t jk = B.sigma(b.A_, k);
        Poly ab = a.c_[i] * b.c_[k];
        const auto& m = B.base_mul(ji, jk);
        for (std::size_t l = 0; l < m.size(); ++l) {
          if (m[l].is_zero()) continue;
          r.c_[B.sigma_inv(S, l)] += ab * m[l];
        }
      }
    }
    return r;
  }

  friend bool operator==(const FuncElem& a, const FuncElem& b) {
    return a.B_ == b.B_ && a.A_ == b.A_ && a.c_ == b.c_;
  }
  friend bool operator!=(const FuncElem& a, const FuncElem& b) { return !(a == b); }
  friend bool operator<(const FuncElem& a, const FuncElem& b) { return a.c_ < b.c_; }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < c_.size(); ++i) s += (i ? "; " : "") + c_[i].str();
    return s + "]";
  }

 private:
  void check_same(const FuncElem& o) const {
    if (B_ != o.B_ || A_ != o.A_) throw Error("FuncElem: operands live in different modules");
  }

  const Backend* B_ = nullptr;
  Divisor A_;
  std::vector<Poly> c_;
};

inline long delta(const FuncElem& a) { return a.delta(); }

// Expansion of a at the place P in t = x - x(P), mod t^beta.
inline Poly series_at(const FuncElem& a, const PlaceId& P, std::size_t beta) {
  const Backend& B = a.backend();
  Field F = B.field();
  const Poly xs(F, {B.x_eval(P), 1});
  const auto h = B.h_factors(a.divisor());
  const Poly hs = B.h_series(h, beta, P);
  Poly acc(F);
  for (std::size_t i = 0; i < a.coords().size(); ++i) {
    const Poly& c = a[i];
    if (c.is_zero()) continue;
    Poly ct(F);
    for (long e = c.deg(); e >= 0; --e) ct = (ct * xs + Poly::constant(F, c[static_cast<std::size_t>(e)])).truncated(beta);
    acc += algebra::mul_trunc(ct, B.base_series(B.sigma(a.divisor(), i), beta, P), beta);
  }
  return algebra::mul_trunc(acc, hs, beta);
}

// Generators of Я(A) over Я. The shipped backends only see principal ideals,
// so this is h_A, i.e. the basis element mapped to y_0.
inline std::vector<FuncElem> ideal_generators(const Backend& B, const Divisor& A) {
  B.h_factors(A);
  std::size_t i0 = B.sigma_inv(A, 0);
  return {FuncElem::basis(B, A, i0, Poly::one(B.field()))};
}

// Balanced split of places into mu parts, each injective under x. Follows the
// inductive construction: insert into a smallest part with no x-collision,
// swapping one place between parts when the smallest part collides.
inline std::vector<std::vector<std::size_t>> x_partition(const Backend& B, const std::vector<PlaceId>& E) {
  const std::size_t mu = static_cast<std::size_t>(B.mu());
  {
    std::vector<PlaceId> s = E;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw Error("x_partition: repeated place");
    for (const auto& P : E)
      if (P.inf) throw Error("x_partition: infinite place in support");
  }
  std::vector<std::vector<std::size_t>> U(mu);
  std::vector<u32> xs(E.size());
  for (std::size_t j = 0; j < E.size(); ++j) xs[j] = B.x_eval(E[j]);
  auto collides = [&](const std::vector<std::size_t>& part, u32 x) {
    for (std::size_t j : part)
      if (xs[j] == x) return true;
    return false;
  };
  for (std::size_t n = 0; n < E.size(); ++n) {
    std::size_t a = 0;
    for (std::size_t k = 1; k < mu; ++k)
      if (U[k].size() < U[a].size()) a = k;
    std::size_t b = mu;
    for (std::size_t k = 0; k < mu; ++k) {
      if (collides(U[k], xs[n])) continue;
      if (b == mu || U[k].size() < U[b].size()) b = k;
    }
    if (b == mu) throw Error("x_partition: more than mu places share an x-value");
    if (U[a].size() == U[b].size()) {
      U[b].push_back(n);
      continue;
    }
    // U[a] holds a place with x equal to x(E_n); U[b] holds one whose x is
    // absent from U[a]. Swap them and add E_n to U[a].
    std::size_t ia = U[a].size(), ib = U[b].size();
    for (std::size_t t = 0; t < U[a].size(); ++t)
      if (xs[U[a][t]] == xs[n]) {
        ia = t;
        break;
      }
    for (std::size_t t = 0; t < U[b].size(); ++t)
      if (!collides(U[a], xs[U[b][t]])) {
        ib = t;
        break;
      }
    if (ia == U[a].size() || ib == U[b].size()) throw Error("x_partition: swap step failed");
    std::swap(U[a][ia], U[b][ib]);
    U[a].push_back(n);
  }
  // clause checks
  std::size_t lo = E.size(), hi = 0, total = 0;
  for (const auto& part : U) {
    lo = std::min(lo, part.size());
    hi = std::max(hi, part.size());
    total += part.size();
    for (std::size_t i = 0; i < part.size(); ++i)
      for (std::size_t j = i + 1; j < part.size(); ++j)
        if (xs[part[i]] == xs[part[j]]) throw Error("x_partition: part not x-injective");
  }
  if (total != E.size() || hi - lo > 1) throw Error("x_partition: unbalanced or lossy partition");
  return U;
}

}  // namespace agdec::funcfield

#endif
