#ifndef AGDEC_ROOTFIND_HPP
#define AGDEC_ROOTFIND_HPP

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "gscore.hpp"

namespace agdec::rootfind {

using algebra::Field;
using algebra::Poly;
using funcfield::Backend;
using funcfield::Divisor;
using funcfield::FuncElem;
using gscore::ZPoly;

// Expansions at P_0 of y_i^{(-tG)} (t = 0..ell) and y_i^{(G)}.
struct SeriesTables {
  std::size_t beta = 0;
  std::vector<std::vector<Poly>> mtG;  // [t][i]
  std::vector<Poly> G;                 // [i]
};

inline SeriesTables build_series(const Backend& B, const Divisor& G, long ell, std::size_t beta) {
  if (G[B.p0()] != 0) throw Error("series tables: P_0 lies in the support of G");
  SeriesTables S;
  S.beta = beta;
  for (long t = 0; t <= ell; ++t) {
    std::vector<Poly> row;
    for (long i = 0; i < B.mu(); ++i) row.push_back(B.apery_series(G.scaled(-t), static_cast<std::size_t>(i), beta));
    S.mtG.push_back(std::move(row));
  }
  for (long i = 0; i < B.mu(); ++i) S.G.push_back(B.apery_series(G, static_cast<std::size_t>(i), beta));
  return S;
}

// Polynomial in z with power-series coefficients, all known mod x^beta.
struct SeriesZPoly {
  std::vector<Poly> c;
  std::size_t beta = 0;

  bool is_zero() const {
    for (const auto& p : c)
      if (!p.is_zero()) return false;
    return true;
  }
  long zdeg() const {
    for (std::size_t t = c.size(); t-- > 0;)
      if (!c[t].is_zero()) return static_cast<long>(t);
    return kNegInf;
  }
  // value at a truncated series f, mod x^beta
  Poly eval(const Poly& f) const {
    Field F = c.empty() ? f.field() : c[0].field();
    Poly acc(F);
    for (std::size_t t = c.size(); t-- > 0;) acc = (algebra::mul_trunc(acc, f, beta) + c[t]).truncated(beta);
    return acc;
  }
};

inline SeriesZPoly to_series(const ZPoly& Q, const SeriesTables& S, std::size_t beta) {
  if (beta > S.beta) throw Error("to_series: series tables hold precision " + std::to_string(S.beta) + " < " +
                                 std::to_string(beta));
  if (Q.size() > S.mtG.size()) throw Error("to_series: z-degree exceeds the tables");
  SeriesZPoly out;
  out.beta = beta;
  for (std::size_t t = 0; t < Q.size(); ++t) {
    Field F = Q[t].backend().field();
    Poly acc(F);
    for (std::size_t i = 0; i < Q[t].coords().size(); ++i)
      if (!Q[t][i].is_zero()) acc += algebra::mul_trunc(Q[t][i].truncated(beta), S.mtG[t][i], beta);
    out.c.push_back(std::move(acc));
  }
  return out;
}

struct RootPrefix {
  Poly f;
  std::size_t alpha;
  friend bool operator==(const RootPrefix& a, const RootPrefix& b) { return a.alpha == b.alpha && a.f == b.f; }
};
using BasicRootSet = std::vector<RootPrefix>;

namespace detail {

// R(c + x z) mod x^rho
inline std::vector<Poly> shift_scale(const std::vector<Poly>& R, u32 c, std::size_t rho) {
  Field F = R[0].field();
  const std::size_t m = R.size();
  std::vector<Poly> out(m, Poly(F));
  for (std::size_t t = 0; t < m; ++t) {
    if (R[t].is_zero()) continue;
    u32 cp = 1;  // c^(t-u)
    for (std::size_t k = 0; k <= t; ++k) {
      const std::size_t u = t - k;
      if (u < rho) {
        u32 b = F.mul(gscore::binom_mod(static_cast<long>(t), static_cast<long>(u), F), cp);
        if (b) out[u] += R[t].scaled(b).shifted(u).truncated(rho);
      }
      cp = F.mul(cp, c);
    }
  }
  return out;
}

inline void rr(std::vector<Poly> R, std::size_t rho, const Poly& f, std::size_t a, std::size_t cap,
               BasicRootSet& out) {
  long v = kNegInf;
  for (const auto& p : R) {
    if (p.is_zero()) continue;
    long pv = p.valuation();
    if (v == kNegInf || pv < v) v = pv;
  }
  if (v == kNegInf || static_cast<std::size_t>(v) >= rho) {
    out.push_back({f, a});
    if (out.size() > cap) throw Error("basic_root_set: more branches than the z-degree allows");
    return;
  }
  rho -= static_cast<std::size_t>(v);
  Field F = R[0].field();
  std::vector<u32> r0(R.size());
  for (std::size_t t = 0; t < R.size(); ++t) {
    R[t] = R[t].shifted_down(static_cast<std::size_t>(v));
    r0[t] = R[t][0];
  }
  Poly R0(F, r0);
  if (R0.deg() <= 0) return;
  for (auto [c, mult] : algebra::roots_in_field(R0)) {
    (void)mult;
    Poly g = f;
    g.set(a, c);
    rr(shift_scale(R, c, rho), rho, g, a + 1, cap, out);
  }
}

}  // namespace detail

// Roth-Ruckenstein recursion. Pairs come back sorted by (f, alpha), with any
// pair whose coset lies inside another's removed.
inline BasicRootSet basic_root_set(const SeriesZPoly& Qh, std::size_t beta) {
  std::vector<Poly> R;
  for (const auto& p : Qh.c) R.push_back(p.truncated(beta));
  bool zero = true;
  for (const auto& p : R) zero = zero && p.is_zero();
  if (R.empty() || zero) throw Error("basic_root_set: Q is zero modulo x^beta");
  long dz = 0;
  for (std::size_t t = 0; t < R.size(); ++t)
    if (!R[t].is_zero()) dz = static_cast<long>(t);
  R.resize(static_cast<std::size_t>(dz) + 1);
  BasicRootSet raw;
  detail::rr(R, beta, Poly(R[0].field()), 0, static_cast<std::size_t>(dz), raw);
  auto contains = [](const RootPrefix& big, const RootPrefix& small) {
    return big.alpha <= small.alpha && small.f.truncated(big.alpha) == big.f.truncated(big.alpha);
  };
  BasicRootSet out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < raw.size() && !drop; ++j) {
      if (i == j) continue;
      if (contains(raw[j], raw[i]) && (!(raw[j] == raw[i]) || j < i)) drop = true;
    }
    if (!drop) out.push_back(raw[i]);
  }
  std::sort(out.begin(), out.end(), [](const RootPrefix& a, const RootPrefix& b) {
    return a.f < b.f || (a.f == b.f && a.alpha < b.alpha);
  });
  return out;
}

// The unique f in L(G) with f^ = fh mod x^alpha (alpha = deg G + 1), or
// nullopt.
inline std::optional<FuncElem> series_to_function(const Backend& B, const Poly& fh, const SeriesTables& S,
                                                  const Divisor& G) {
  const std::size_t mu = static_cast<std::size_t>(B.mu());
  const long alpha = G.degree() + 1;
  if (alpha < 1) throw Error("series_to_function: deg G must be non-negative");
  if (S.beta < static_cast<std::size_t>(alpha)) throw Error("series_to_function: series precision too low");
  Field F = B.field();
  const Poly xa = Poly::monomial(F, 1, static_cast<std::size_t>(alpha));
  polymat::HPInstance inst{polymat::PolyMat(F, mu + 1, 1), {xa}, polymat::Shift(B.mu(), std::vector<long>(mu + 1, 0))};
  for (std::size_t i = 0; i < mu; ++i) inst.A(i, 0) = S.G[i].truncated(static_cast<std::size_t>(alpha));
  inst.A(mu, 0) = -fh.truncated(static_cast<std::size_t>(alpha));
  auto d = B.apery_deltas(G);
  for (std::size_t i = 0; i < mu; ++i) inst.d.num[i] = -d[i];  // hp_basis yields the (-num)-Popov basis
  polymat::PolyMat V = polymat::hp_basis(inst);
  polymat::Shift sd = inst.d.negated();
  for (std::size_t r = 0; r < V.rows(); ++r) {
    if (!V(r, mu).is_one()) continue;
    if (polymat::sdeg(V.row(r), sd) != 0) continue;
    std::vector<Poly> c(V.row(r).begin(), V.row(r).begin() + static_cast<long>(mu));
    return FuncElem(&B, G, std::move(c));
  }
  return std::nullopt;
}

namespace detail {

// All f in L(G) with f^ = fh mod x^a, by linear algebra over a basis of
// L(G). Used only for prefixes shorter than deg G + 1.
inline std::vector<FuncElem> lift_short_prefix(const Backend& B, const Poly& fh, std::size_t a,
                                               const SeriesTables& S, const Divisor& G, std::size_t limit) {
  Field F = B.field();
  auto d = B.apery_deltas(G);
  std::vector<FuncElem> basis;
  std::vector<std::vector<u32>> rows;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (long j = 0; B.mu() * j + d[i] <= 0; ++j) {
      basis.push_back(FuncElem::basis(B, G, i, Poly::monomial(F, 1, static_cast<std::size_t>(j))));
      Poly s = algebra::mul_trunc(Poly::monomial(F, 1, static_cast<std::size_t>(j)), S.G[i], a);
      std::vector<u32> r(a);
      for (std::size_t k = 0; k < a; ++k) r[k] = s[k];
      rows.push_back(std::move(r));
    }
  const std::size_t nb = basis.size();
  // columns = unknowns; equations k < a: sum_b c_b rows[b][k] = fh[k]
  std::vector<std::vector<u32>> M(a, std::vector<u32>(nb + 1, 0));
  for (std::size_t k = 0; k < a; ++k) {
    for (std::size_t b = 0; b < nb; ++b) M[k][b] = rows[b][k];
    M[k][nb] = fh[k];
  }
  std::vector<std::size_t> piv;
  std::size_t row = 0;
  for (std::size_t col = 0; col < nb && row < a; ++col) {
    std::size_t sel = a;
    for (std::size_t i = row; i < a; ++i)
      if (M[i][col]) {
        sel = i;
        break;
      }
    if (sel == a) continue;
    std::swap(M[sel], M[row]);
    u32 inv = F.inv(M[row][col]);
    for (auto& v : M[row]) v = F.mul(v, inv);
    for (std::size_t i = 0; i < a; ++i) {
      if (i == row || !M[i][col]) continue;
      u32 m = M[i][col];
      for (std::size_t k = 0; k <= nb; ++k) M[i][k] = F.sub(M[i][k], F.mul(m, M[row][k]));
    }
    piv.push_back(col);
    ++row;
  }
  for (std::size_t i = row; i < a; ++i)
    if (M[i][nb]) return {};
  std::vector<std::size_t> freecols;
  for (std::size_t c = 0, p = 0; c < nb; ++c) {
    if (p < piv.size() && piv[p] == c) {
      ++p;
      continue;
    }
    freecols.push_back(c);
  }
  u64 count = 1;
  for (std::size_t i = 0; i < freecols.size(); ++i) {
    count *= F.q();
    if (count > limit) throw Error("root_finding: root prefix too short to resolve");
  }
  std::vector<FuncElem> out;
  for (u64 code = 0; code < count; ++code) {
    std::vector<u32> x(nb, 0);
    u64 cc = code;
    for (std::size_t fcol : freecols) {
      x[fcol] = static_cast<u32>(cc % F.q());
      cc /= F.q();
    }
    for (std::size_t i = 0; i < piv.size(); ++i) {
      u32 v = M[i][nb];
      for (std::size_t fcol : freecols) v = F.sub(v, F.mul(M[i][fcol], x[fcol]));
      x[piv[i]] = v;
    }
    FuncElem f = FuncElem::zero(B, G);
    for (std::size_t b = 0; b < nb; ++b)
      if (x[b]) f += basis[b].scaled(x[b]);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace detail

// Algorithm 6: all f in L(G) with Q(f) = 0, sorted by coordinates.
inline std::vector<FuncElem> root_finding(const Backend& B, const Divisor& G, const ZPoly& Q, const SeriesTables& S,
                                          std::size_t beta) {
  if (Q.is_zero()) throw Error("root_finding: Q is zero");
  SeriesZPoly Qh = to_series(Q, S, beta);
  const std::size_t alpha = static_cast<std::size_t>(G.degree() + 1);
  std::vector<FuncElem> out;
  for (const auto& [fh, a] : basic_root_set(Qh, beta)) {
    if (a >= alpha) {
      auto f = series_to_function(B, fh, S, G);
      if (!f) continue;
      // the lift only matched deg G + 1 terms; the prefix may pin more
      const std::size_t prec = std::min(a, beta);
      Poly ser(B.field());
      for (std::size_t i = 0; i < f->coords().size(); ++i) ser += algebra::mul_trunc((*f)[i], S.G[i], prec);
      if (ser == fh.truncated(prec)) out.push_back(std::move(*f));
      continue;
    }
    // every candidate of the coset is a root mod x^beta, hence an exact root
    for (auto& f : detail::lift_short_prefix(B, fh, a, S, G, 1u << 16)) {
      if (gscore::zpoly_eval(Q, f).is_zero()) out.push_back(std::move(f));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace agdec::rootfind

#endif
