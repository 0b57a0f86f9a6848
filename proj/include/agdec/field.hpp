#ifndef AGDEC_FIELD_HPP
#define AGDEC_FIELD_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "common.hpp"

namespace agdec::algebra {

namespace detail {

// Dense polynomials over F_p with u64 coefficients, only used to build
// extension fields (irreducibility tests, generic multiplication).
using FpPoly = std::vector<u64>;

inline void fp_trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline u64 fp_mulmod(u64 a, u64 b, u64 p) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p);
}

inline u64 fp_pow(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = fp_mulmod(r, a, p);
    a = fp_mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline u64 fp_inv(u64 a, u64 p) {
  // extended Euclid on signed 128-bit to stay exact for p < 2^32
  __int128 t = 0, nt = 1, r = static_cast<__int128>(p), nr = static_cast<__int128>(a % p);
  while (nr != 0) {
    __int128 q = r / nr;
    __int128 tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw Error("fp_inv: element not invertible");
  if (t < 0) t += p;
  return static_cast<u64>(t);
}

inline FpPoly fp_mod(FpPoly a, const FpPoly& m, u64 p) {
  fp_trim(a);
  const std::size_t dm = m.size() - 1;
  const u64 inv_lc = fp_inv(m.back(), p);
  while (a.size() > dm) {
    u64 c = fp_mulmod(a.back(), inv_lc, p);
    std::size_t sh = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      a[sh + i] = (a[sh + i] + p - fp_mulmod(c, m[i], p)) % p;
    }
    fp_trim(a);
  }
  return a;
}

inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + fp_mulmod(a[i], b[j], p)) % p;
  fp_trim(r);
  return r;
}

inline FpPoly fp_mulmod_poly(const FpPoly& a, const FpPoly& b, const FpPoly& m, u64 p) {
  return fp_mod(fp_mul(a, b, p), m, p);
}

inline FpPoly fp_powmod(FpPoly a, u64 e, const FpPoly& m, u64 p) {
  FpPoly r{1};
  a = fp_mod(std::move(a), m, p);
  while (e) {
    if (e & 1) r = fp_mulmod_poly(r, a, m, p);
    a = fp_mulmod_poly(a, a, m, p);
    e >>= 1;
  }
  return r;
}

inline FpPoly fp_gcd(FpPoly a, FpPoly b, u64 p) {
  fp_trim(a);
  fp_trim(b);
  while (!b.empty()) {
    FpPoly r = fp_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> f;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      f.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) f.push_back(n);
  return f;
}

// Ben-Or style test: f of degree k is irreducible iff gcd(f, x^{p^i} - x) = 1
// for i = 1..k/2.
inline bool fp_irreducible(const FpPoly& f, u64 p) {
  const std::size_t k = f.size() - 1;
  if (k == 1) return true;
  FpPoly xp{0, 1};
  FpPoly cur = xp;
  for (std::size_t i = 1; i <= k / 2; ++i) {
    cur = fp_powmod(cur, p, f, p);
    FpPoly diff = cur;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    fp_trim(diff);
    FpPoly g = fp_gcd(f, diff, p);
    if (g.size() != 1) return false;
  }
  return true;
}

class Embedding;

struct FieldImpl {
  u64 p = 0;
  unsigned k = 0;
  u64 q = 0;
  FpPoly modulus;  // monic, degree k
  bool tables = false;
  std::vector<u32> exp;  // length 2(q-1)
  std::vector<u32> log;  // length q
  std::vector<u64> pw;   // p^i, i <= k

  mutable std::mutex emb_mu;
  mutable std::map<const FieldImpl*, std::unique_ptr<Embedding>> embeddings;

  FpPoly to_poly(u64 a) const {
    FpPoly r(k, 0);
    for (unsigned i = 0; i < k; ++i) {
      r[i] = a % p;
      a /= p;
    }
    fp_trim(r);
    return r;
  }
  u64 from_poly(const FpPoly& c) const {
    u64 r = 0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * p + c[i];
    return r;
  }
  u32 generic_mul(u32 a, u32 b) const {
    return static_cast<u32>(from_poly(fp_mulmod_poly(to_poly(a), to_poly(b), modulus, p)));
  }
};

}  // namespace detail

// Handle to an interned finite field F_{p^k}. Copies are cheap and compare
// by identity; the underlying data lives for the whole process.
class Field {
 public:
  Field() = default;

  static Field make(u64 p, unsigned k = 1);

  bool valid() const { return impl_ != nullptr; }
  u64 p() const { return impl_->p; }
  unsigned k() const { return impl_->k; }
  u64 q() const { return impl_->q; }
  const std::vector<u64>& modulus() const { return impl_->modulus; }

  u32 add(u32 a, u32 b) const {
    const auto& F = *impl_;
    if (F.k == 1) {
      u64 s = static_cast<u64>(a) + b;
      return static_cast<u32>(s >= F.p ? s - F.p : s);
    }
    if (F.p == 2) return a ^ b;
    u64 r = 0, m = 1, x = a, y = b;
    for (unsigned i = 0; i < F.k; ++i) {
      u64 d = x % F.p + y % F.p;
      if (d >= F.p) d -= F.p;
      r += d * m;
      m *= F.p;
      x /= F.p;
      y /= F.p;
    }
    return static_cast<u32>(r);
  }

  u32 neg(u32 a) const {
    const auto& F = *impl_;
    if (a == 0) return 0;
    if (F.k == 1) return static_cast<u32>(F.p - a);
    if (F.p == 2) return a;
    u64 r = 0, m = 1, x = a;
    for (unsigned i = 0; i < F.k; ++i) {
      u64 d = x % F.p;
      r += (d ? F.p - d : 0) * m;
      m *= F.p;
      x /= F.p;
    }
    return static_cast<u32>(r);
  }

  u32 sub(u32 a, u32 b) const { return add(a, neg(b)); }

  u32 mul(u32 a, u32 b) const {
    const auto& F = *impl_;
    if (a == 0 || b == 0) return 0;
    if (F.k == 1) return static_cast<u32>((static_cast<u64>(a) * b) % F.p);
    if (F.tables) return F.exp[F.log[a] + F.log[b]];
    return F.generic_mul(a, b);
  }

  u32 inv(u32 a) const {
    const auto& F = *impl_;
    if (a == 0) throw Error("inverse of zero field element");
    if (F.k == 1) return static_cast<u32>(detail::fp_inv(a, F.p));
    if (F.tables) return F.exp[(F.q - 1 - F.log[a]) % (F.q - 1)];
    return pow(a, F.q - 2);
  }

  u32 div(u32 a, u32 b) const { return mul(a, inv(b)); }

  u32 pow(u32 a, u64 e) const {
    u32 r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  // Image of the prime-field integer n (reduced mod p).
  u32 from_int(long long n) const {
    long long m = n % static_cast<long long>(impl_->p);
    if (m < 0) m += static_cast<long long>(impl_->p);
    return static_cast<u32>(m);
  }

  bool contains_code(u64 v) const { return v < impl_->q; }

  template <class Rng>
  u32 random(Rng& rng) const {
    std::uniform_int_distribution<u64> d(0, impl_->q - 1);
    return static_cast<u32>(d(rng));
  }
  template <class Rng>
  u32 random_nonzero(Rng& rng) const {
    std::uniform_int_distribution<u64> d(1, impl_->q - 1);
    return static_cast<u32>(d(rng));
  }

  // Fixed embedding of this field into `target` (target.k a multiple of k).
  const detail::Embedding& embedding(Field target) const;

  std::string name() const {
    return "F_" + std::to_string(impl_->p) + (impl_->k > 1 ? "^" + std::to_string(impl_->k) : "");
  }

  friend bool operator==(Field a, Field b) { return a.impl_ == b.impl_; }
  friend bool operator!=(Field a, Field b) { return a.impl_ != b.impl_; }

  const detail::FieldImpl* impl() const { return impl_; }

 private:
  explicit Field(const detail::FieldImpl* impl) : impl_(impl) {}
  const detail::FieldImpl* impl_ = nullptr;
};

namespace detail {

// Maps F_{p^k} into F_{p^K} by sending the generator class of x to the
// least-code root of the source modulus in the target.
class Embedding {
 public:
  Embedding(Field src, Field dst) : src_(src), dst_(dst) {
    if (src.p() != dst.p() || dst.k() % src.k() != 0)
      throw Error("field_embed: " + dst.name() + " is not an extension of " + src.name());
    if (src.k() == 1) {
      trivial_ = true;
      return;
    }
    const auto& mod = src.modulus();
    u32 root = 0;
    bool found = false;
    for (u64 c = 0; c < dst.q() && !found; ++c) {
      u32 v = 0;
      for (std::size_t i = mod.size(); i-- > 0;)
        v = dst.add(dst.mul(v, static_cast<u32>(c)), static_cast<u32>(mod[i]));
      if (v == 0) {
        root = static_cast<u32>(c);
        found = true;
      }
    }
    if (!found) throw Error("field_embed: no root of source modulus in target");
    gpow_.resize(src.k());
    u32 g = 1;
    for (unsigned i = 0; i < src.k(); ++i) {
      gpow_[i] = g;
      g = dst.mul(g, root);
    }
  }

  u32 map(u32 a) const {
    if (trivial_) return a;
    const u64 p = src_.p();
    u32 r = 0;
    u64 x = a;
    for (unsigned i = 0; i < src_.k(); ++i) {
      u32 d = static_cast<u32>(x % p);
      x /= p;
      if (d) r = dst_.add(r, dst_.mul(d, gpow_[i]));
    }
    return r;
  }

  // Preimage of b, or nullopt if b is not in the image.
  std::optional<u32> preimage(u32 b) const {
    if (trivial_) {
      if (b < src_.p()) return b;
      return std::nullopt;
    }
    std::call_once(rev_once_, [this] {
      for (u64 a = 0; a < src_.q(); ++a) rev_.emplace(map(static_cast<u32>(a)), static_cast<u32>(a));
    });
    auto it = rev_.find(b);
    if (it == rev_.end()) return std::nullopt;
    return it->second;
  }

  Field source() const { return src_; }
  Field target() const { return dst_; }

 private:
  Field src_, dst_;
  bool trivial_ = false;
  std::vector<u32> gpow_;
  mutable std::once_flag rev_once_;
  mutable std::unordered_map<u32, u32> rev_;
};

inline constexpr u64 kTableCap = u64{1} << 20;

inline std::unique_ptr<FieldImpl> build_field(u64 p, unsigned k) {
  if (!is_prime(p)) throw Error("field_make: " + std::to_string(p) + " is not prime");
  if (k == 0) throw Error("field_make: extension degree must be positive");
  auto F = std::make_unique<FieldImpl>();
  F->p = p;
  F->k = k;
  unsigned __int128 q = 1;
  F->pw.push_back(1);
  for (unsigned i = 0; i < k; ++i) {
    q *= p;
    if (q > (static_cast<unsigned __int128>(1) << 32))
      throw Error("field_make: cardinality exceeds 2^32");
    F->pw.push_back(static_cast<u64>(q));
  }
  F->q = static_cast<u64>(q);
  if (k == 1) {
    F->modulus = {0, 1};
    return F;
  }
  // least monic irreducible: low coefficients enumerated as a base-p integer
  u64 low_count = F->q;
  for (u64 c = 0; c < low_count; ++c) {
    FpPoly f(k + 1, 0);
    u64 x = c;
    for (unsigned i = 0; i < k; ++i) {
      f[i] = x % p;
      x /= p;
    }
    f[k] = 1;
    if (f[0] == 0) continue;
    if (fp_irreducible(f, p)) {
      F->modulus = f;
      break;
    }
  }
  if (F->q <= kTableCap) {
    const u64 n = F->q - 1;
    auto factors = prime_factors(n);
    u32 gen = 0;
    for (u64 g = 2; g < F->q; ++g) {
      bool ok = true;
      for (u64 r : factors) {
        FpPoly e = fp_powmod(F->to_poly(g), n / r, F->modulus, p);
        if (e.size() == 1 && e[0] == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        gen = static_cast<u32>(g);
        break;
      }
    }
    F->exp.assign(2 * n, 0);
    F->log.assign(F->q, 0);
    u32 cur = 1;
    for (u64 i = 0; i < n; ++i) {
      F->exp[i] = cur;
      F->exp[i + n] = cur;
      F->log[cur] = static_cast<u32>(i);
      cur = F->generic_mul(cur, gen);
    }
    F->tables = true;
  }
  return F;
}

inline std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}
inline std::map<std::pair<u64, unsigned>, std::unique_ptr<FieldImpl>>& registry() {
  static std::map<std::pair<u64, unsigned>, std::unique_ptr<FieldImpl>> r;
  return r;
}

}  // namespace detail

inline Field Field::make(u64 p, unsigned k) {
  std::lock_guard<std::mutex> lock(detail::registry_mutex());
  auto& reg = detail::registry();
  auto key = std::make_pair(p, k);
  auto it = reg.find(key);
  if (it == reg.end()) it = reg.emplace(key, detail::build_field(p, k)).first;
  return Field(it->second.get());
}

inline Field field_make(u64 p, unsigned k) { return Field::make(p, k); }

inline const detail::Embedding& Field::embedding(Field target) const {
  std::lock_guard<std::mutex> lock(impl_->emb_mu);
  auto& m = impl_->embeddings;
  auto it = m.find(target.impl_);
  if (it == m.end()) it = m.emplace(target.impl_, std::make_unique<detail::Embedding>(*this, target)).first;
  return *it->second;
}

// A field element together with its field.
struct Felt {
  Field F;
  u32 v = 0;

  Felt() = default;
  Felt(Field f, u32 val) : F(f), v(val) {}

  bool is_zero() const { return v == 0; }
  Felt operator+(const Felt& o) const { return {F, F.add(v, o.v)}; }
  Felt operator-(const Felt& o) const { return {F, F.sub(v, o.v)}; }
  Felt operator-() const { return {F, F.neg(v)}; }
  Felt operator*(const Felt& o) const { return {F, F.mul(v, o.v)}; }
  Felt operator/(const Felt& o) const { return {F, F.div(v, o.v)}; }
  Felt inv() const { return {F, F.inv(v)}; }
  Felt pow(u64 e) const { return {F, F.pow(v, e)}; }
  friend bool operator==(const Felt& a, const Felt& b) { return a.F == b.F && a.v == b.v; }
  friend bool operator!=(const Felt& a, const Felt& b) { return !(a == b); }
};

inline Felt field_embed(const Felt& e, Field target) {
  return {target, e.F.embedding(target).map(e.v)};
}

}  // namespace agdec::algebra

#endif
