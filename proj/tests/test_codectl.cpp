#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "agdec/codectl.hpp"

using namespace agdec;
using namespace agdec::codectl;

namespace {

const char* kGrs =
    "backend = rational\n"
    "p = 13\n"
    "n = 8\n"
    "D = x=0 x=1 x=2 x=3 x=4 x=5 x=6 x=7\n"
    "G = 3*Pinf\n"
    "s = 1\n"
    "ell = 1\n"
    "offset = 12\n";

std::string herm(int m, int s, int ell) {
  return "backend = hermitian\nq0 = 2\nD = all\nG = " + std::to_string(m) + "*Pinf\ns = " + std::to_string(s) +
         "\nell = " + std::to_string(ell) + "\n";
}

std::string with(std::string base, const std::string& line) { return base + line + "\n"; }

}  // namespace

TEST(ChooseRadius, Examples) {
  EXPECT_EQ(choose_radius(8, 0, 3, 1, 1), 2);
  EXPECT_EQ(choose_radius(8, 0, 8, 1, 1), 0);
  EXPECT_EQ(choose_radius(8, 0, 10, 2, 3), 0);
  EXPECT_EQ(choose_radius(8, 1, 1, 1, 1), 2);
  EXPECT_EQ(choose_radius(8, 1, 2, 1, 1), 2);
  EXPECT_EQ(choose_radius(8, 1, 3, 1, 1), 1);
  // list decoding goes past half the distance for low rate
  EXPECT_EQ(choose_radius(12, 0, 2, 1, 2), 5);
}

TEST(ChooseRadius, UniqueDecodingFloor) {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 100; ++it) {
    long n = 4 + static_cast<long>(rng() % 60), g = static_cast<long>(rng() % 10);
    long degG = static_cast<long>(rng() % static_cast<std::size_t>(n));
    long tau = choose_radius(n, g, degG, 1, 1);
    long num = n - degG - g;
    long expect = num > 0 ? (num + 1) / 2 - 1 : 0;
    EXPECT_EQ(tau, expect) << n << " " << g << " " << degG;
    EXPECT_GE(2 * tau, std::min(0L, n - degG - 1 - g) - 1);
  }
}

TEST(CodeSpec, ParseAndCanonical) {
  auto c = CodeSpec::from_text(kGrs);
  EXPECT_EQ(c.n(), 8);
  EXPECT_EQ(c.G.degree(), 3);
  EXPECT_EQ(c.radius(), 2);
  auto spaced = CodeSpec::from_text("backend=rational\np=13\nD=x=0, x=1,x=2 x=3 x=4 x=5 x=6 x=7\nG=3@inf\noffset=12\n");
  EXPECT_EQ(c.canonical(), spaced.canonical());
  auto h = CodeSpec::from_text(herm(2, 1, 2));
  EXPECT_EQ(h.n(), 8);
  EXPECT_EQ(h.genus(), 1);
  auto t = CodeSpec::from_text(with(kGrs, "tau = 9"));
  EXPECT_EQ(t.radius(), 2);
  auto t1 = CodeSpec::from_text(with(kGrs, "tau = 1"));
  EXPECT_EQ(t1.radius(), 1);
  auto g = CodeSpec::from_text("backend=rational\np=13\nD=x=0,x=1,x=2,x=3,x=4\nG=2@x=9 1@inf\n");
  EXPECT_EQ(g.G.degree(), 3);
  EXPECT_EQ(g.ell, 1);
}

TEST(CodeSpec, Rejects) {
  const std::vector<std::string> bad = {
      "backend = rational\np = 13\nD = x=0 x=1\nG = -1*Pinf\n",                  // not effective
      "backend = rational\np = 13\nD = x=0 x=1\nG = 1@x=1\n",                    // meets D
      "backend = rational\np = 13\nD = x=0 x=1\nG = 2*Pinf\n",                   // deg G > n + 2g - 1
      "backend = rational\np = 13\nD = x=0 x=1 x=2\nG = 1*Pinf\ns = 2\nell = 1\n",  // s > ell
      "backend = rational\np = 13\nD = x=0 x=0\nG = 1*Pinf\n",                   // repeated
      "backend = rational\np = 13\nD = x=0 x=20\nG = 1*Pinf\n",                  // not a place
      "backend = rational\np = 13\nD = x=1 x=2\nG = 1@x=0\n",                    // P0 in supp G
      "backend = rational\np = 12\nD = x=1\nG = 0\n",                            // bad field
      "backend = elliptic\np = 13\nD = x=1\nG = 0\n",
      "backend = rational\np = 13\nD = x=1 x=2\nG = 1*Pinf\nn = 3\n",            // n mismatch
      "backend = rational\np = 13\nD = x=1\nG = 0\ncolour = red\n",
      "backend = rational\nD = x=1\nG = 0\n",
      "backend = hermitian\nq0 = 2\nD = (0,0) (1,2)\nG = 1*Pinf\ns = 1\nell = 2\n",  // partial fibers
      "backend = hermitian\nq0 = 2\nD = (0,0) (0,2)\nG = 1*Pinf\n",                  // not on the curve
  };
  for (const auto& s : bad) EXPECT_THROW(CodeSpec::from_text(s), InputError) << s;
}

TEST(Precompute, PlaceSelection) {
  // two fibers of the Hermitian curve over F_4
  auto h = CodeSpec::from_text("backend=hermitian\nq0=2\nD=(2,2) (2,3) (3,2) (3,3)\nG=1*Pinf\n");
  auto pre = precompute(h);
  EXPECT_GE(static_cast<long>(pre.T.E.size()), required_places(h));
  EXPECT_GT(pre.ext, 1u);
  // the unused base places come first, embedded
  std::set<PlaceId> base_img;
  for (const auto& P : h.base->places()) base_img.insert(h.base->embed_place(P, *pre.B));
  std::size_t lead = 0;
  while (lead < pre.T.E.size() && base_img.count(pre.T.E[lead])) ++lead;
  EXPECT_EQ(lead, 4u);
  for (std::size_t i = lead; i < pre.T.E.size(); ++i) EXPECT_FALSE(base_img.count(pre.T.E[i]));

  auto c = CodeSpec::from_text(kGrs);
  auto pr = precompute(c);
  std::set<PlaceId> E(pr.T.E.begin(), pr.T.E.end());
  EXPECT_EQ(E.size(), pr.T.E.size());
  for (u32 a = 8; a < 13; ++a) EXPECT_TRUE(E.count(c.base->embed_place(PlaceId::affine1(a), *pr.B)));
  EXPECT_FALSE(E.count(PlaceId::infinity()));
  for (const auto& P : pr.T.D) EXPECT_FALSE(E.count(P));
}

TEST(Precompute, TablesMatchEvaluation) {
  auto c = CodeSpec::from_text(herm(3, 1, 2));
  auto pre = precompute(c);
  const auto& T = pre.T;
  auto check = [&](const gscore::EvalTable& tab, const std::vector<PlaceId>& P) {
    for (std::size_t i = 0; i < tab.y.size(); ++i) {
      auto y = funcfield::FuncElem::basis(*pre.B, tab.A, i, algebra::Poly::one(pre.B->field()));
      for (std::size_t j = 0; j < P.size(); ++j) EXPECT_EQ(tab.y[i][j], y.eval(P[j]));
    }
  };
  check(T.D_G, T.D);
  check(T.E_G, T.E);
  for (const auto& t : T.E_mtG) check(t, T.E);
  for (std::size_t u = 0; u < T.gen.size(); ++u)
    for (std::size_t j = 0; j < T.E.size(); ++j) EXPECT_EQ(T.gen_eval[u][j], T.gen[u].eval(T.E[j]));
}

TEST(Precompute, FileRoundTrip) {
  for (const auto& text : {std::string(kGrs), herm(2, 1, 2), herm(1, 1, 1)}) {
    auto c = CodeSpec::from_text(text);
    auto pre = precompute(c);
    std::stringstream ss;
    save_precomp(ss, pre);
    auto back = load_precomp(ss, c);
    std::stringstream s2;
    save_precomp(s2, back);
    EXPECT_EQ(ss.str(), s2.str());
    std::mt19937_64 rng(3);
    auto cb = make_codebook(c);
    for (int it = 0; it < 20; ++it) {
      Word r(static_cast<std::size_t>(c.n()));
      for (auto& v : r) v = c.field().random(rng);
      auto a = decode(c, pre, r), b = decode(c, back, r);
      EXPECT_EQ(a.fail, b.fail);
      EXPECT_EQ(a.messages, b.messages);
    }
  }
  auto c = CodeSpec::from_text(kGrs);
  std::string t = kGrs;
  auto other = CodeSpec::from_text(t.replace(t.find("3*Pinf"), 6, "2*Pinf"));
  std::stringstream ss;
  save_precomp(ss, precompute(c));
  EXPECT_THROW(load_precomp(ss, other), InputError);
  std::stringstream junk("AGDEC0\n");
  EXPECT_THROW(load_precomp(junk, c), InputError);
  std::stringstream cut(ss.str().substr(0, ss.str().size() / 2));
  EXPECT_THROW(load_precomp(cut, c), InputError);
}

TEST(Encode, ExamplesAndWeight) {
  for (const auto& text : {std::string(kGrs), herm(1, 1, 1), herm(3, 1, 1), herm(5, 1, 1)}) {
    auto c = CodeSpec::from_text(text);
    auto pre = precompute(c);
    const std::size_t k = pre.basis.size();
    Word zero = encode(c, pre, Message(k, 0));
    EXPECT_EQ(zero, Word(static_cast<std::size_t>(c.n()), 0));
    // the first basis element is the constant 1
    Message one(k, 0);
    one[0] = 1;
    EXPECT_EQ(encode(c, pre, one), Word(static_cast<std::size_t>(c.n()), 1));
    auto cb = make_codebook(c);
    std::set<Word> seen;
    for (std::size_t i = 0; i < cb.words.size(); ++i) {
      EXPECT_EQ(encode(c, pre, cb.messages[i]), cb.words[i]);
      seen.insert(cb.words[i]);
      long w = 0;
      for (u32 v : cb.words[i]) w += v != 0;
      bool z = std::all_of(cb.messages[i].begin(), cb.messages[i].end(), [](u32 v) { return v == 0; });
      if (!z) {
        EXPECT_GE(w, c.n() - c.G.degree());
      }
    }
    EXPECT_EQ(seen.size(), cb.words.size());
    EXPECT_THROW(encode(c, pre, Message(k + 1, 0)), InputError);
  }
}

TEST(Decode, Examples) {
  auto c = CodeSpec::from_text(kGrs);
  auto pre = precompute(c);
  auto cb = make_codebook(c);
  std::mt19937_64 rng(11);
  for (int it = 0; it < 50; ++it) {
    std::size_t i = rng() % cb.words.size();
    auto res = decode(c, pre, cb.words[i]);
    ASSERT_FALSE(res.fail);
    ASSERT_EQ(res.messages.size(), 1u);
    EXPECT_EQ(res.messages[0], cb.messages[i]);
    EXPECT_EQ(res.codewords[0], cb.words[i]);
    Word r = channel(cb.words[i], 2, rng(), c.field());
    res = decode(c, pre, r);
    ASSERT_FALSE(res.fail);
    ASSERT_EQ(res.messages.size(), 1u);
    EXPECT_EQ(res.messages[0], cb.messages[i]);
  }
  // tau = 0 on a non-codeword
  for (int it = 0; it < 20; ++it) {
    Word r = channel(cb.words[rng() % cb.words.size()], 1, rng(), c.field());
    auto res = decode(c, pre, r, 0);
    EXPECT_TRUE(res.fail || res.messages.empty());
  }
  EXPECT_THROW(decode(c, pre, Word(7, 0)), InputError);
  EXPECT_THROW(decode(c, pre, Word(8, 13)), InputError);
}

TEST(Decode, TwoCodewordList) {
  // RS over F_13 with n = 12, k = 3: distance 10, list radius 5 at s=1, l=2
  auto c = CodeSpec::from_text(
      "backend = rational\np = 13\nD = x=0 x=1 x=2 x=3 x=4 x=5 x=6 x=7 x=8 x=9 x=10 x=11\nG = 2*Pinf\n"
      "s = 1\nell = 2\noffset = 12\n");
  ASSERT_EQ(c.radius(), 5);
  auto pre = precompute(c);
  auto cb = make_codebook(c);
  std::mt19937_64 rng(5);
  int found = 0;
  for (std::size_t i = 0; i < cb.words.size() && found < 10; ++i) {
    const Word& c2 = cb.words[i];
    long w = 0;
    for (u32 v : c2) w += v != 0;
    if (w != 10) continue;
    // r agrees with 0 outside five support positions and with c2 on them
    Word r(c2.size(), 0);
    int taken = 0;
    for (std::size_t j = 0; j < c2.size(); ++j)
      if (c2[j] && taken < 5) {
        r[j] = c2[j];
        ++taken;
      }
    auto bf = brute_force_list_decode(cb, r, 5);
    if (bf.size() != 2) continue;
    auto res = decode(c, pre, r);
    ASSERT_FALSE(res.fail);
    EXPECT_EQ(res.messages, bf);
    ++found;
  }
  EXPECT_EQ(found, 10);
}

TEST(BruteForce, Examples) {
  auto c = CodeSpec::from_text(herm(2, 1, 1));
  auto cb = make_codebook(c);
  Word zero(8, 0);
  auto z = brute_force_list_decode(cb, zero, 0);
  ASSERT_EQ(z.size(), 1u);
  EXPECT_EQ(z[0], Message(2, 0));
  EXPECT_EQ(brute_force_list_decode(cb, zero, 8).size(), cb.words.size());
  EXPECT_THROW(make_codebook(c, 10), Error);
}

TEST(Channel, Examples) {
  Field F = Field::make(13);
  Word c{1, 2, 3, 4, 5, 6, 7, 8};
  EXPECT_EQ(channel(c, 0, 1, F), c);
  Word all = channel(c, 8, 1, F);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NE(all[i], c[i]);
  for (long t = 0; t <= 8; ++t)
    for (u64 seed = 0; seed < 20; ++seed) {
      Word r = channel(c, t, seed, F);
      EXPECT_EQ(hamming(r, c), t);
      EXPECT_EQ(r, channel(c, t, seed, F));
    }
  EXPECT_THROW(channel(c, 9, 0, F), InputError);
  EXPECT_THROW(channel(c, -1, 0, F), InputError);
}
