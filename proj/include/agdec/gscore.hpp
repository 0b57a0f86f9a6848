#ifndef AGDEC_GSCORE_HPP
#define AGDEC_GSCORE_HPP

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "backends.hpp"

namespace agdec::gscore {

using algebra::Field;
using algebra::Poly;
using funcfield::Backend;
using funcfield::Divisor;
using funcfield::FuncElem;
using funcfield::PlaceId;
using polymat::PolyMat;
using polymat::Shift;

// Evaluation places with their x-values and x-partition.
struct PlaceTable {
  std::vector<PlaceId> places;
  std::vector<u32> x;
  std::vector<std::vector<std::size_t>> parts;  // mu parts of place indices
  std::vector<std::vector<u32>> part_x;
  std::vector<Poly> u;  // vanishing polynomial of each part

  PlaceTable() = default;
  PlaceTable(const Backend& B, std::vector<PlaceId> P) : places(std::move(P)) {
    Field F = B.field();
    x.reserve(places.size());
    for (const auto& p : places) x.push_back(B.x_eval(p));
    parts = funcfield::x_partition(B, places);
    for (const auto& part : parts) {
      std::vector<u32> xs;
      for (std::size_t j : part) xs.push_back(x[j]);
      u.push_back(algebra::vanishing_poly(F, xs));
      part_x.push_back(std::move(xs));
    }
  }
  std::size_t size() const { return places.size(); }
};

// Values y_i^{(A)}(P_j) on a place table, plus the per-part interpolants
// S_{i,k} of those values (rows of the Hermite–Padé instances).
struct EvalTable {
  std::shared_ptr<const PlaceTable> pt;
  Divisor A;
  std::vector<long> delta;              // delta_A(y_i^{(A)})
  std::vector<std::vector<u32>> y;      // y[i][j]
  std::vector<std::vector<Poly>> S;     // S[i][k]

  EvalTable() = default;
  EvalTable(const Backend& B, std::shared_ptr<const PlaceTable> table, Divisor div)
      : pt(std::move(table)), A(std::move(div)) {
    const std::size_t mu = static_cast<std::size_t>(B.mu());
    delta = B.apery_deltas(A);
    auto h = B.h_factors(A);
    for (const auto& P : pt->places)
      if (A[P] != 0) throw Error("evaluation table: place " + P.str() + " lies in the support of the divisor");
    y.assign(mu, std::vector<u32>(pt->size()));
    for (std::size_t j = 0; j < pt->size(); ++j) {
      const u32 hv = B.h_eval(h, pt->places[j]);
      for (std::size_t i = 0; i < mu; ++i)
        y[i][j] = B.field().mul(hv, B.base_eval(B.sigma(A, i), pt->places[j]));
    }
    build_S(B.field());
  }
  // Rebuild from stored values (precomp reload).
  EvalTable(Field F, std::shared_ptr<const PlaceTable> table, Divisor div, std::vector<long> d,
            std::vector<std::vector<u32>> vals)
      : pt(std::move(table)), A(std::move(div)), delta(std::move(d)), y(std::move(vals)) {
    build_S(F);
  }

  std::vector<u32> part_values(const std::vector<u32>& w, std::size_t k) const {
    std::vector<u32> v;
    for (std::size_t j : pt->parts[k]) v.push_back(w[j]);
    return v;
  }

 private:
  void build_S(Field F) {
    S.assign(y.size(), {});
    for (std::size_t i = 0; i < y.size(); ++i)
      for (std::size_t k = 0; k < pt->parts.size(); ++k)
        S[i].push_back(algebra::lagrange_interpolate(F, pt->part_x[k], part_values(y[i], k)));
  }
};

// Algorithm 1: values of a on the table's places.
inline std::vector<u32> evaluate(const FuncElem& a, const EvalTable& T) {
  if (a.divisor() != T.A) throw Error("evaluate: table built for divisor " + T.A.str() + ", element lives in " +
                                      a.divisor().str());
  Field F = a.backend().field();
  std::vector<u32> out(T.pt->size(), 0);
  for (std::size_t i = 0; i < a.coords().size(); ++i) {
    if (a[i].is_zero()) continue;
    auto v = algebra::multipoint_eval(a[i], T.pt->x);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = F.add(out[j], F.mul(v[j], T.y[i][j]));
  }
  return out;
}

// Algorithm 2: the delta-minimal a in Я(A) with a(E_j) = w_j.
inline FuncElem interpolate(const Backend& B, const std::vector<u32>& w, const EvalTable& T) {
  Field F = B.field();
  const std::size_t mu = static_cast<std::size_t>(B.mu());
  if (w.size() != T.pt->size()) throw Error("interpolate: value count does not match the place count");
  bool all_zero = true;
  for (u32 v : w) all_zero = all_zero && v == 0;
  if (all_zero) return FuncElem::zero(B, T.A);
  const long N = static_cast<long>(T.pt->size());
  const long target = N + 2 * B.genus() - T.A.degree();
  polymat::HPInstance inst{PolyMat(F, mu + 1, mu), T.pt->u, Shift(B.mu(), std::vector<long>(mu + 1, 0))};
  for (std::size_t k = 0; k < mu; ++k) {
    for (std::size_t i = 0; i < mu; ++i) inst.A(i, k) = T.S[i][k];
    inst.A(mu, k) = -algebra::lagrange_interpolate(F, T.pt->part_x[k], T.part_values(w, k));
  }
  for (std::size_t i = 0; i < mu; ++i) inst.d.num[i] = target - T.delta[i];
  PolyMat V = polymat::hp_basis(inst);
  for (std::size_t r = 0; r < V.rows(); ++r) {
    if (!V(r, mu).is_one()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < mu && ok; ++i)
      if (!V(r, i).is_zero() && B.mu() * V(r, i).deg() >= inst.d.num[i]) ok = false;
    if (!ok) continue;
    std::vector<Poly> c(V.row(r).begin(), V.row(r).begin() + static_cast<long>(mu));
    return FuncElem(&B, T.A, std::move(c));
  }
  throw Error("interpolate: no interpolant within the degree bound (too few evaluation places for divisor " +
              T.A.str() + ")");
}

// Algorithm 4: (a*y_0, ..., a*y_{mu-1}) over the basis y^{(A)}. TA holds the
// basis of a's divisor on E, T0 the unshifted basis on the same places.
inline std::vector<FuncElem> basis_products(const FuncElem& a, const EvalTable& TA, const EvalTable& T0) {
  const Backend& B = a.backend();
  Field F = B.field();
  const std::size_t mu = static_cast<std::size_t>(B.mu());
  if (a.is_zero()) return std::vector<FuncElem>(mu, FuncElem::zero(B, a.divisor()));
  if (!T0.A.is_zero() || TA.pt != T0.pt) throw Error("basis_products: inconsistent tables");
  const long N = static_cast<long>(TA.pt->size());
  const long degA = a.divisor().degree();
  const long da = a.delta();
  if (N < degA + da + 2 * B.genus() + B.mu())
    throw Error("basis_products: " + std::to_string(N) + " places are too few (need " +
                std::to_string(degA + da + 2 * B.genus() + B.mu()) + ")");
  auto av = evaluate(a, TA);
  polymat::HPInstance inst{PolyMat(F, 2 * mu, mu), TA.pt->u, Shift(B.mu(), std::vector<long>(2 * mu, 0))};
  for (std::size_t k = 0; k < mu; ++k) {
    for (std::size_t i = 0; i < mu; ++i) {
      inst.A(i, k) = TA.S[i][k];
      std::vector<u32> vals;
      for (std::size_t j : TA.pt->parts[k]) vals.push_back(F.mul(av[j], T0.y[i][j]));
      inst.A(mu + i, k) = algebra::lagrange_interpolate(F, TA.pt->part_x[k], vals);
    }
  }
  // d = (delta_A(y_i^{(A)}), delta(y_i) + delta_A(a)) / mu, and we want the
  // d-Popov basis, i.e. hp_basis with -d.
  for (std::size_t i = 0; i < mu; ++i) {
    inst.d.num[i] = -TA.delta[i];
    inst.d.num[mu + i] = -(T0.delta[i] + da);
  }
  PolyMat V = polymat::hp_basis(inst);
  Shift d = inst.d.negated();
  std::vector<FuncElem> out;
  for (std::size_t k = 0; k < mu; ++k) {
    const auto& row = V.row(mu + k);
    for (std::size_t i = 0; i < mu; ++i) {
      bool want_one = i == k;
      if (want_one ? !row[mu + i].is_one() : !row[mu + i].is_zero())
        throw Error("basis_products: unexpected Popov row shape");
    }
    if (polymat::sdeg(row, d) >= N - degA) throw Error("basis_products: product row exceeds the degree bound");
    std::vector<Poly> c;
    for (std::size_t i = 0; i < mu; ++i) c.push_back(-row[i]);
    out.emplace_back(&B, a.divisor(), std::move(c));
  }
  return out;
}

// Q = sum_t z^t Q^{(t)}, Q^{(t)} in Я(-tG).
struct ZPoly {
  std::vector<FuncElem> c;

  std::size_t size() const { return c.size(); }
  const FuncElem& operator[](std::size_t t) const { return c[t]; }
  bool is_zero() const {
    for (const auto& e : c)
      if (!e.is_zero()) return false;
    return true;
  }
  // delta_G(Q) = max_t delta_{-tG}(Q^{(t)})
  long delta() const {
    long d = kNegInf;
    for (const auto& e : c) d = std::max(d, e.delta());
    return d;
  }
  // z-degree
  long zdeg() const {
    for (std::size_t t = c.size(); t-- > 0;)
      if (!c[t].is_zero()) return static_cast<long>(t);
    return kNegInf;
  }
};

// Q(f) in Я for f in Я(G) (so f^t * Q^{(t)} lands in Я(0)).
inline FuncElem zpoly_eval(const ZPoly& Q, const FuncElem& f) {
  const Backend& B = f.backend();
  FuncElem acc = FuncElem::zero(B, Divisor());
  FuncElem fp = FuncElem::basis(B, Divisor(), B.sigma_inv(Divisor(), 0), Poly::one(B.field()));  // 1
  for (std::size_t t = 0; t < Q.size(); ++t) {
    if (t > 0) fp = fp * f;
    acc += fp * Q[t];
  }
  return acc;
}

struct GenSet {
  std::vector<ZPoly> gens;
  std::vector<std::pair<long, long>> index;  // (u, v), plus basis index i after expansion
  std::vector<long> basis_index;
  bool alternative = false;
  bool expanded = false;
};

// C(n, k) mod p by Lucas' theorem.
inline u32 binom_mod(long n, long k, Field F) {
  if (k < 0 || k > n) return 0;
  const u64 p = F.p();
  u64 r = 1;
  u64 nn = static_cast<u64>(n), kk = static_cast<u64>(k);
  while (nn || kk) {
    u64 ni = nn % p, ki = kk % p;
    if (ki > ni) return 0;
    u64 c = 1;
    for (u64 i = 0; i < ki; ++i) c = c * (ni - i) / (i + 1);
    r = (r * (c % p)) % p;
    nn /= p;
    kk /= p;
  }
  return static_cast<u32>(r);
}

// Everything Algorithms 1-5 need about the code and its evaluation places.
struct Tables {
  std::shared_ptr<const Backend> backend;
  std::vector<PlaceId> D, E;
  Divisor G;
  long s = 1, ell = 1;
  std::shared_ptr<const PlaceTable> ptD, ptE;
  EvalTable D_G;                      // y^{(G)} on D
  EvalTable E_G;                      // y^{(G)} on E
  std::vector<EvalTable> E_mtG;       // y^{(-tG)} on E, t = 0..ell
  std::vector<Divisor> Gu;            // G_u = -uG - max(0, s-u) D
  std::vector<FuncElem> gen;          // generator of Я(G_u)
  std::vector<std::vector<u32>> gen_eval;

  long n() const { return static_cast<long>(D.size()); }
  long N() const { return static_cast<long>(E.size()); }
  const Backend& B() const { return *backend; }
};

inline Divisor divisor_Gu(const Divisor& G, const std::vector<PlaceId>& D, long s, long u) {
  return G.scaled(-u) - Divisor::sum_of(D).scaled(std::max(0L, s - u));
}

// Lower bound on the number of auxiliary places for Algorithms 3 and 5.
inline long required_places(long n, long g, long degG, long mu, long s, long ell) {
  long a = degG + (ell + 3) * (2 * g - 1) + (s + 1) * n + 2 + mu;
  long b = (ell + 1) * degG + 4 * g + (s + 1) * n;
  return std::max(a, b);
}

inline Tables build_tables(std::shared_ptr<const Backend> B, std::vector<PlaceId> D, std::vector<PlaceId> E,
                           const Divisor& G, long s, long ell) {
  Tables T;
  T.backend = B;
  T.D = std::move(D);
  T.E = std::move(E);
  T.G = G;
  T.s = s;
  T.ell = ell;
  T.ptD = std::make_shared<PlaceTable>(*B, T.D);
  T.ptE = std::make_shared<PlaceTable>(*B, T.E);
  T.D_G = EvalTable(*B, T.ptD, G);
  T.E_G = EvalTable(*B, T.ptE, G);
  for (long t = 0; t <= ell; ++t) T.E_mtG.emplace_back(*B, T.ptE, G.scaled(-t));
  for (long u = 0; u <= ell; ++u) {
    Divisor Gu = divisor_Gu(G, T.D, s, u);
    auto g = funcfield::ideal_generators(*B, Gu);
    T.Gu.push_back(Gu);
    T.gen.push_back(g[0]);
    EvalTable tab(*B, T.ptE, Gu);
    T.gen_eval.push_back(evaluate(g[0], tab));
  }
  return T;
}

// Bound on delta_{-tG} of the generator coefficients c_{t,v}^{(u)}.
inline long coefficient_bound(long t, long u, long degG, long g, long s, long n) {
  return (t + 1) * degG + (u - t + 2) * (2 * g - 1) + 1 + (s + 1) * n;
}

// Algorithm 3: generators B_v^{(u)} = (z - R)^u g_v^{(u)} of M_{s,l}(D,G) over
// Я; with `alternative`, (z - R)^s z^{u-s} g^{(u)} for u > s.
inline GenSet generators_ring(const std::vector<u32>& r, const Tables& T, bool alternative) {
  const Backend& B = T.B();
  Field F = B.field();
  const long ell = T.ell, s = T.s, n = T.n();
  if (static_cast<long>(r.size()) != n) throw Error("generators_ring: received word has wrong length");
  const long degG = T.G.degree();
  if (T.N() < (ell + 1) * degG + 4 * B.genus() + (s + 1) * n)
    throw Error("generators_ring: not enough auxiliary places");
  FuncElem R = interpolate(B, r, T.D_G);
  std::vector<u32> rh = evaluate(-R, T.E_G);
  const std::size_t N = T.E.size();
  std::vector<std::vector<u32>> pw(static_cast<std::size_t>(ell) + 1, std::vector<u32>(N, 1));
  for (long e = 1; e <= ell; ++e)
    for (std::size_t j = 0; j < N; ++j)
      pw[static_cast<std::size_t>(e)][j] = F.mul(pw[static_cast<std::size_t>(e) - 1][j], rh[j]);
  GenSet out;
  out.alternative = alternative;
  for (long u = 0; u <= ell; ++u) {
    ZPoly Z;
    const bool alt = alternative && u > s;
    for (long t = 0; t <= ell; ++t) {
      const Divisor Dt = T.G.scaled(-t);
      u32 bc = 0;
      if (t <= u) bc = alt ? binom_mod(s, t - u + s, F) : binom_mod(u, t, F);
      if (bc == 0) {
        Z.c.push_back(FuncElem::zero(B, Dt));
        continue;
      }
      std::vector<u32> vals(N);
      const auto& gv = T.gen_eval[static_cast<std::size_t>(u)];
      const auto& pv = pw[static_cast<std::size_t>(u - t)];
      for (std::size_t j = 0; j < N; ++j) vals[j] = F.mul(bc, F.mul(pv[j], gv[j]));
      FuncElem c = interpolate(B, vals, T.E_mtG[static_cast<std::size_t>(t)]);
      if (c.delta() > coefficient_bound(t, u, degG, B.genus(), s, n))
        throw Error("generators_ring: coefficient exceeds its delta bound");
      Z.c.push_back(std::move(c));
    }
    out.gens.push_back(Z);
    out.index.emplace_back(u, 1);
    out.gens.push_back(Z);  // the ideal is principal: g_2 repeats g_1
    out.index.emplace_back(u, 2);
  }
  return out;
}

// Algorithm 5: the F_q[x]-generators y_i * B_v^{(u)}.
inline GenSet generators_polyring(const std::vector<u32>& r, const Tables& T, bool alternative) {
  const Backend& B = T.B();
  const long mu = B.mu();
  if (T.N() < required_places(T.n(), B.genus(), T.G.degree(), mu, T.s, T.ell))
    throw Error("generators_polyring: not enough auxiliary places");
  GenSet ring = generators_ring(r, T, alternative);
  GenSet out;
  out.alternative = alternative;
  out.expanded = true;
  for (std::size_t g = 0; g < ring.gens.size(); ++g) {
    std::vector<ZPoly> prod(static_cast<std::size_t>(mu));
    for (std::size_t t = 0; t < ring.gens[g].size(); ++t) {
      auto p = basis_products(ring.gens[g][t], T.E_mtG[t], T.E_mtG[0]);
      for (std::size_t i = 0; i < p.size(); ++i) prod[i].c.push_back(std::move(p[i]));
    }
    for (long i = 0; i < mu; ++i) {
      out.gens.push_back(std::move(prod[static_cast<std::size_t>(i)]));
      out.index.push_back(ring.index[g]);
      out.basis_index.push_back(i);
    }
  }
  return out;
}

struct InterpMatrix {
  PolyMat M;
  Shift d;
};

inline polymat::Row flatten(const ZPoly& Q) {
  polymat::Row row;
  for (const auto& e : Q.c)
    for (const auto& p : e.coords()) row.push_back(p);
  return row;
}

inline ZPoly unflatten(const polymat::Row& row, const Tables& T) {
  const Backend& B = T.B();
  const std::size_t mu = static_cast<std::size_t>(B.mu());
  ZPoly Q;
  for (long t = 0; t <= T.ell; ++t) {
    std::vector<Poly> c(row.begin() + static_cast<long>(t * static_cast<long>(mu)),
                        row.begin() + static_cast<long>((t + 1) * static_cast<long>(mu)));
    Q.c.emplace_back(&B, T.G.scaled(-t), std::move(c));
  }
  return Q;
}

inline Shift module_shift(const Tables& T) {
  const Backend& B = T.B();
  Shift d(B.mu(), {});
  for (long t = 0; t <= T.ell; ++t)
    for (long v : B.apery_deltas(T.G.scaled(-t))) d.num.push_back(v);
  return d;
}

inline InterpMatrix assemble(const GenSet& gens, const Tables& T) {
  if (!gens.expanded) throw Error("assemble: generator set is not expanded over F_q[x]");
  const Backend& B = T.B();
  const std::size_t width = static_cast<std::size_t>(B.mu() * (T.ell + 1));
  InterpMatrix IM{PolyMat(B.field(), width, std::vector<polymat::Row>{}), module_shift(T)};
  for (const auto& Z : gens.gens) IM.M.push_row(flatten(Z));
  return IM;
}

// delta_G-minimal Q, or nullopt (FAIL) if delta_G(Q) >= bound.
inline std::optional<ZPoly> find_Q(const InterpMatrix& IM, long bound, const Tables& T) {
  PolyMat P0 = polymat::popov(IM.M, Shift::zero(IM.M.cols()));
  PolyMat V = polymat::popov(P0, IM.d);
  std::size_t r = polymat::minimal_row(V, IM.d);
  if (polymat::sdeg(V.row(r), IM.d) >= bound) return std::nullopt;
  return unflatten(V.row(r), T);
}

}  // namespace agdec::gscore

#endif
