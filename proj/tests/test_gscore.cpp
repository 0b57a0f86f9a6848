#include <gtest/gtest.h>

#include <random>

#include "agdec/gscore.hpp"
#include "oracles.hpp"

using namespace agdec;
using namespace agdec::algebra;
using namespace agdec::funcfield;
using namespace agdec::gscore;

namespace {

// Random element of L(A) (delta_A <= 0), or of delta_A <= bound.
FuncElem random_bounded(const Backend& B, const Divisor& A, std::mt19937_64& rng, long bound = 0) {
  FuncElem a = FuncElem::zero(B, A);
  auto d = B.apery_deltas(A);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] > bound) continue;
    long maxdeg = polymat::floor_div(bound - d[i], B.mu());
    std::vector<u32> c(static_cast<std::size_t>(maxdeg + 1));
    for (auto& v : c) v = B.field().random(rng);
    a.coords()[i] = Poly(B.field(), c);
  }
  return a;
}

Tables make_tables(std::shared_ptr<const Backend> B, std::size_t n, const Divisor& G, long s, long ell) {
  const auto& P = B->places();
  std::vector<PlaceId> D(P.begin(), P.begin() + static_cast<long>(n));
  long N = required_places(static_cast<long>(n), B->genus(), G.degree(), B->mu(), s, ell);
  if (P.size() < n + static_cast<std::size_t>(N)) throw Error("test setup: not enough places");
  std::vector<PlaceId> E(P.begin() + static_cast<long>(n), P.begin() + static_cast<long>(n) + N);
  return build_tables(B, D, E, G, s, ell);
}

// Q has multiplicity >= s at (P, r): the z^k coefficient of Q(t, z + r)
// vanishes to order s - k at P.
bool has_multiplicity(const ZPoly& Q, const PlaceId& P, u32 r, long s) {
  if (s <= 0) return true;
  Field F = Q[0].backend().field();
  const std::size_t beta = static_cast<std::size_t>(s);
  std::vector<Poly> ser;
  for (std::size_t t = 0; t < Q.size(); ++t) ser.push_back(series_at(Q[t], P, beta));
  for (long k = 0; k < s; ++k) {
    Poly acc(F);
    for (std::size_t t = static_cast<std::size_t>(k); t < Q.size(); ++t) {
      u32 c = F.mul(binom_mod(static_cast<long>(t), k, F), F.pow(r, t - static_cast<std::size_t>(k)));
      acc += ser[t].scaled(c);
    }
    acc = acc.truncated(static_cast<std::size_t>(s - k));
    if (!acc.is_zero()) return false;
  }
  return true;
}

std::vector<u32> add_errors(Field F, std::vector<u32> c, long tau, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(c.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  for (long e = 0; e < tau; ++e) c[idx[static_cast<std::size_t>(e)]] = F.add(c[idx[static_cast<std::size_t>(e)]], F.random_nonzero(rng));
  return c;
}

std::shared_ptr<const Backend> herm64() { return std::make_shared<HermitianBackend>(2, 3); }

}  // namespace

TEST(Binom, LucasMatchesDirect) {
  Field F2 = Field::make(2), F13 = Field::make(13), F3 = Field::make(3, 2);
  EXPECT_EQ(binom_mod(5, 2, F13), 10u);
  EXPECT_EQ(binom_mod(5, 2, F2), 0u);
  EXPECT_EQ(binom_mod(3, 4, F13), 0u);
  for (Field F : {F2, F13, F3})
    for (long n = 0; n < 30; ++n)
      for (long k = 0; k <= n; ++k) {
        u64 c = 1;  // exact for n < 30 via Pascal
        std::vector<u64> row(static_cast<std::size_t>(n) + 1, 0);
        row[0] = 1;
        for (long i = 1; i <= n; ++i)
          for (long j = i; j > 0; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j) - 1];
        c = row[static_cast<std::size_t>(k)];
        EXPECT_EQ(binom_mod(n, k, F), static_cast<u32>(c % F.p()));
      }
}

TEST(Evaluate, MatchesPointwise) {
  std::mt19937_64 rng(31);
  auto B = herm64();
  std::vector<PlaceId> E(B->places().begin() + 10, B->places().begin() + 40);
  auto pt = std::make_shared<PlaceTable>(*B, E);
  Divisor A = Divisor::single(PlaceId::infinity(), 5);
  A = A + Divisor::single(B->places()[0], -1) + Divisor::single(B->places()[1], -1);
  EvalTable T(*B, pt, A);
  for (int it = 0; it < 20; ++it) {
    FuncElem a = random_bounded(*B, A, rng, 20);
    auto v = evaluate(a, T);
    for (std::size_t j = 0; j < E.size(); ++j) EXPECT_EQ(v[j], a.eval(E[j]));
  }
  EXPECT_THROW(evaluate(FuncElem::zero(*B, Divisor()), T), Error);
  // places in the divisor's support are rejected
  EXPECT_THROW(EvalTable(*B, std::make_shared<PlaceTable>(*B, std::vector<PlaceId>{B->places()[0]}), A), Error);
}

TEST(Interpolate, RecoversLowDeltaElements) {
  std::mt19937_64 rng(32);
  auto B = herm64();
  std::vector<PlaceId> E(B->places().begin(), B->places().begin() + 30);
  auto pt = std::make_shared<PlaceTable>(*B, E);
  for (long m : {-4L, 0L, 3L, 9L}) {
    Divisor A = Divisor::single(PlaceId::infinity(), m);
    EvalTable T(*B, pt, A);
    for (int it = 0; it < 10; ++it) {
      // delta below N - deg A - 2g - ... the interpolant is unique
      FuncElem a = random_bounded(*B, A, rng, 30 - A.degree() - 2 * B->genus() - 1 - 2 * B->mu());
      FuncElem b = interpolate(*B, evaluate(a, T), T);
      EXPECT_EQ(b, a);
    }
  }
}

TEST(Interpolate, DeltaMinimalAgainstLinearAlgebra) {
  std::mt19937_64 rng(33);
  auto B = herm64();
  Field F = B->field();
  const std::size_t N = 14;
  std::vector<PlaceId> E(B->places().begin() + 20, B->places().begin() + 20 + static_cast<long>(N));
  auto pt = std::make_shared<PlaceTable>(*B, E);
  Divisor A = Divisor::single(PlaceId::infinity(), 2);
  EvalTable T(*B, pt, A);
  // monomials x^k y_i^{(A)} ordered by delta
  std::vector<std::pair<long, std::vector<u32>>> mons;
  for (std::size_t i = 0; i < 2; ++i)
    for (long k = 0; k < 20; ++k) {
      FuncElem m = FuncElem::basis(*B, A, i, Poly::monomial(F, 1, static_cast<std::size_t>(k)));
      mons.emplace_back(m.delta(), evaluate(m, T));
    }
  std::sort(mons.begin(), mons.end());
  for (int it = 0; it < 30; ++it) {
    std::vector<u32> w(N);
    if (it % 2) {
      for (auto& v : w) v = F.random(rng);
    } else {
      w = evaluate(random_bounded(*B, A, rng, static_cast<long>(rng() % 12) - 2), T);
    }
    bool zero = std::all_of(w.begin(), w.end(), [](u32 v) { return v == 0; });
    FuncElem a = interpolate(*B, w, T);
    EXPECT_EQ(evaluate(a, T), w);
    if (zero) {
      EXPECT_TRUE(a.is_zero());
      continue;
    }
    long best = kNegInf;
    std::vector<std::vector<u32>> M;
    for (const auto& [d, v] : mons) {
      M.push_back(v);
      if (oracle::solve_left(F, M, w)) {
        best = d;
        break;
      }
    }
    EXPECT_EQ(a.delta(), best);
  }
}

TEST(BasisProducts, MatchExactProduct) {
  std::mt19937_64 rng(34);
  for (auto B : {herm64(), std::shared_ptr<const Backend>(std::make_shared<HermitianBackend>(3, 3))}) {
    std::vector<PlaceId> E(B->places().begin(), B->places().begin() + 60);
    auto pt = std::make_shared<PlaceTable>(*B, E);
    EvalTable T0(*B, pt, Divisor());
    for (long m : {-6L, 0L, 4L}) {
      Divisor A = Divisor::single(PlaceId::infinity(), m);
      EvalTable TA(*B, pt, A);
      for (int it = 0; it < 5; ++it) {
        FuncElem a = random_bounded(*B, A, rng, static_cast<long>(rng() % 15));
        auto prods = basis_products(a, TA, T0);
        for (std::size_t k = 0; k < prods.size(); ++k) {
          FuncElem yk = FuncElem::basis(*B, Divisor(), k, Poly::one(B->field()));
          EXPECT_EQ(prods[k], a * yk);
        }
      }
    }
    // too few places
    Divisor big = Divisor::single(PlaceId::infinity(), 80);
    EvalTable TB(*B, pt, big);
    FuncElem a = random_bounded(*B, big, rng, 0);
    EXPECT_THROW(basis_products(a, TB, T0), Error);
  }
}

TEST(Generators, RingGeneratorsAreInTheModule) {
  std::mt19937_64 rng(35);
  Field F169 = Field::make(13, 2);
  auto R = std::shared_ptr<const Backend>(backend_rational(F169));
  struct Case {
    std::shared_ptr<const Backend> B;
    std::size_t n;
    long m, s, ell;
  };
  std::vector<Case> cases{{R, 12, 3, 2, 3}, {R, 10, 4, 1, 1}, {herm64(), 16, 7, 1, 2}, {herm64(), 8, 3, 2, 2}};
  for (const auto& c : cases) {
    Divisor G = Divisor::single(PlaceId::infinity(), c.m);
    Tables T = make_tables(c.B, c.n, G, c.s, c.ell);
    Field F = c.B->field();
    std::vector<u32> r(c.n);
    for (auto& v : r) v = F.random(rng);
    for (bool alt : {false, true}) {
      GenSet gs = generators_ring(r, T, alt);
      ASSERT_EQ(gs.gens.size(), static_cast<std::size_t>(2 * (c.ell + 1)));
      for (std::size_t g = 0; g < gs.gens.size(); ++g) {
        const ZPoly& Q = gs.gens[g];
        const long u = gs.index[g].first;
        EXPECT_EQ(Q.zdeg(), u);
        for (long t = 0; t <= c.ell; ++t) EXPECT_EQ(Q[static_cast<std::size_t>(t)].divisor(), G.scaled(-t));
        for (std::size_t j = 0; j < c.n; ++j) EXPECT_TRUE(has_multiplicity(Q, T.D[j], r[j], c.s)) << g;
      }
      // F_q[x]-expansion equals y_i * generator
      GenSet ex = generators_polyring(r, T, alt);
      ASSERT_EQ(ex.gens.size(), gs.gens.size() * static_cast<std::size_t>(c.B->mu()));
      for (std::size_t g = 0; g < ex.gens.size(); ++g) {
        const ZPoly& base = gs.gens[g / static_cast<std::size_t>(c.B->mu())];
        FuncElem yi = FuncElem::basis(*c.B, Divisor(), static_cast<std::size_t>(ex.basis_index[g]), Poly::one(F));
        for (std::size_t t = 0; t < base.size(); ++t) EXPECT_EQ(ex.gens[g][t], yi * base[t]);
      }
    }
  }
}

TEST(FindQ, InterpolationPolynomialProperties) {
  std::mt19937_64 rng(36);
  Field F169 = Field::make(13, 2);
  auto R = std::shared_ptr<const Backend>(backend_rational(F169));
  struct Case {
    std::shared_ptr<const Backend> B;
    std::size_t n;
    long m, s, ell, tau;
  };
  std::vector<Case> cases{{R, 12, 3, 1, 1, 4}, {R, 12, 3, 2, 3, 5}, {herm64(), 16, 7, 1, 1, 3},
                          {std::make_shared<HermitianBackend>(2, 5), 16, 7, 2, 2, 3}};
  for (const auto& c : cases) {
    Divisor G = Divisor::single(PlaceId::infinity(), c.m);
    Tables T = make_tables(c.B, c.n, G, c.s, c.ell);
    Field F = c.B->field();
    for (int it = 0; it < 3; ++it) {
      FuncElem f = random_bounded(*c.B, G, rng);
      auto cw = evaluate(f, T.D_G);
      auto r = add_errors(F, cw, c.tau, rng);
      GenSet gs = generators_polyring(r, T, c.s < c.ell);
      InterpMatrix IM = assemble(gs, T);
      EXPECT_EQ(IM.M.rows(), static_cast<std::size_t>(2 * (c.ell + 1) * c.B->mu()));
      auto Q = find_Q(IM, c.s * (static_cast<long>(c.n) - c.tau), T);
      ASSERT_TRUE(Q.has_value()) << c.n << " " << c.s << " " << c.ell;
      EXPECT_FALSE(Q->is_zero());
      EXPECT_LT(Q->delta(), c.s * (static_cast<long>(c.n) - c.tau));
      EXPECT_LE(Q->zdeg(), c.ell);
      for (std::size_t j = 0; j < c.n; ++j) EXPECT_TRUE(has_multiplicity(*Q, T.D[j], r[j], c.s));
      // the transmitted message is a root
      EXPECT_TRUE(zpoly_eval(*Q, f).is_zero());
      // a generous-looking bound that is too small reports failure
      EXPECT_FALSE(find_Q(IM, Q->delta(), T).has_value());
    }
  }
}
