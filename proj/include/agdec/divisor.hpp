#ifndef AGDEC_DIVISOR_HPP
#define AGDEC_DIVISOR_HPP

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "common.hpp"

namespace agdec::funcfield {

// Rational place. Finite places carry one coordinate (rational backend) or
// two (Hermitian); `arity` records which. The infinite place is unique.
struct PlaceId {
  bool inf = false;
  unsigned arity = 1;
  u32 a = 0;
  u32 b = 0;

  static PlaceId infinity() { return PlaceId{true, 0, 0, 0}; }
  static PlaceId affine1(u32 x) { return PlaceId{false, 1, x, 0}; }
  static PlaceId affine2(u32 x1, u32 x2) { return PlaceId{false, 2, x1, x2}; }

  std::string str() const {
    if (inf) return "inf";
    if (arity == 1) return "x=" + std::to_string(a);
    return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
  }

  friend bool operator<(const PlaceId& p, const PlaceId& q) {
    return std::tie(p.inf, p.a, p.b) < std::tie(q.inf, q.a, q.b);
  }
  friend bool operator==(const PlaceId& p, const PlaceId& q) {
    return p.inf == q.inf && p.a == q.a && p.b == q.b;
  }
  friend bool operator!=(const PlaceId& p, const PlaceId& q) { return !(p == q); }
};

// Parse `inf`, `x=<n>` or `(<n>,<n>)`.
inline PlaceId parse_place(const std::string& s) {
  auto num = [&](const std::string& t) -> u32 {
    if (t.empty()) throw InputError("bad place descriptor: " + s);
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(t, &pos);
    } catch (...) {
      throw InputError("bad place descriptor: " + s);
    }
    if (pos != t.size() || v > 0xffffffffULL) throw InputError("bad place descriptor: " + s);
    return static_cast<u32>(v);
  };
  if (s == "inf" || s == "Pinf") return PlaceId::infinity();
  if (s.size() > 2 && s[0] == 'x' && s[1] == '=') return PlaceId::affine1(num(s.substr(2)));
  if (s.size() > 4 && s.front() == '(' && s.back() == ')') {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw InputError("bad place descriptor: " + s);
    return PlaceId::affine2(num(s.substr(1, comma - 1)), num(s.substr(comma + 1, s.size() - comma - 2)));
  }
  throw InputError("bad place descriptor: " + s);
}

class Divisor {
 public:
  Divisor() = default;
  static Divisor single(const PlaceId& P, long m = 1) {
    Divisor D;
    D.set(P, m);
    return D;
  }
  static Divisor sum_of(const std::vector<PlaceId>& places) {
    Divisor D;
    for (const auto& P : places) D.set(P, D[P] + 1);
    return D;
  }

  long operator[](const PlaceId& P) const {
    auto it = m_.find(P);
    return it == m_.end() ? 0 : it->second;
  }
  void set(const PlaceId& P, long v) {
    if (v == 0)
      m_.erase(P);
    else
      m_[P] = v;
  }

  long degree() const {
    long d = 0;
    for (const auto& [P, v] : m_) d += v;
    return d;
  }
  long inf_coeff() const { return (*this)[PlaceId::infinity()]; }
  Divisor finite_part() const {
    Divisor r = *this;
    r.m_.erase(PlaceId::infinity());
    return r;
  }
  std::vector<PlaceId> support() const {
    std::vector<PlaceId> s;
    for (const auto& [P, v] : m_) s.push_back(P);
    return s;
  }
  bool is_zero() const { return m_.empty(); }
  bool effective() const {
    for (const auto& [P, v] : m_)
      if (v < 0) return false;
    return true;
  }
  bool disjoint(const Divisor& o) const {
    for (const auto& [P, v] : m_)
      if (o[P] != 0) return false;
    return true;
  }
  const std::map<PlaceId, long>& terms() const { return m_; }

  Divisor operator+(const Divisor& o) const {
    Divisor r = *this;
    for (const auto& [P, v] : o.m_) r.set(P, r[P] + v);
    return r;
  }
  Divisor operator-() const {
    Divisor r;
    for (const auto& [P, v] : m_) r.m_[P] = -v;
    return r;
  }
  Divisor operator-(const Divisor& o) const { return *this + (-o); }
  Divisor scaled(long k) const {
    Divisor r;
    if (k == 0) return r;
    for (const auto& [P, v] : m_) r.m_[P] = v * k;
    return r;
  }

  std::string str() const {
    if (m_.empty()) return "0";
    std::string s;
    for (const auto& [P, v] : m_) {
      if (!s.empty()) s += " ";
      s += std::to_string(v) + "@" + P.str();
    }
    return s;
  }

  friend bool operator==(const Divisor& a, const Divisor& b) { return a.m_ == b.m_; }
  friend bool operator!=(const Divisor& a, const Divisor& b) { return a.m_ != b.m_; }
  friend bool operator<(const Divisor& a, const Divisor& b) { return a.m_ < b.m_; }

 private:
  std::map<PlaceId, long> m_;
};

}  // namespace agdec::funcfield

#endif
