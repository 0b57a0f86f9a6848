#ifndef AGDEC_CODECTL_HPP
#define AGDEC_CODECTL_HPP

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rootfind.hpp"

namespace agdec::codectl {

using algebra::Field;
using algebra::Poly;
using funcfield::Backend;
using funcfield::Divisor;
using funcfield::FuncElem;
using funcfield::PlaceId;

using Word = std::vector<u32>;
using Message = std::vector<u32>;

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Split on whitespace and commas that are not inside parentheses.
inline std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && (c == ',' || std::isspace(static_cast<unsigned char>(c)))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
      continue;
    }
    if (!std::isspace(static_cast<unsigned char>(c))) cur += c;
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline long parse_long(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (...) {
    throw InputError("bad integer for " + what + ": '" + s + "'");
  }
  if (pos != s.size()) throw InputError("bad integer for " + what + ": '" + s + "'");
  return v;
}

}  // namespace detail

// `m*Pinf`, or a list of `mult@place` terms; "0" is the zero divisor.
inline Divisor parse_divisor(const std::string& s) {
  Divisor D;
  for (const auto& tok : detail::tokens(s)) {
    if (tok == "0") continue;
    auto star = tok.find('*');
    auto at = tok.find('@');
    std::string m, p;
    if (at != std::string::npos) {
      m = tok.substr(0, at);
      p = tok.substr(at + 1);
    } else if (star != std::string::npos) {
      m = tok.substr(0, star);
      p = tok.substr(star + 1);
    } else {
      m = "1";
      p = tok;
    }
    PlaceId P = funcfield::parse_place(p);
    D.set(P, D[P] + detail::parse_long(m, "divisor multiplicity"));
  }
  return D;
}

inline std::string divisor_str(const Divisor& D) {
  if (D.is_zero()) return "0";
  std::string s;
  for (const auto& [P, v] : D.terms()) s += (s.empty() ? "" : ",") + std::to_string(v) + "@" + P.str();
  return s;
}

// The largest tau for which a nonzero Q with delta_G(Q) < s(n - tau) is
// guaranteed by counting dimensions. For s = l = 1 the error-locator bound
// ceil((n - deg G - g)/2) - 1 is also admissible and is used when larger.
inline long choose_radius(long n, long g, long degG, long s, long ell) {
  if (degG >= n) return 0;
  const long need = n * s * (s + 1) / 2;
  long best = 0;
  for (long tau = 0; tau < n; ++tau) {
    long dim = 0;
    for (long t = 0; t <= ell; ++t) dim += std::max(0L, s * (n - tau) - t * degG - g);
    if (dim > need) best = tau;
  }
  if (s == 1 && ell == 1) {
    long num = n - degG - g;
    long unique = num > 0 ? (num + 1) / 2 - 1 : 0;
    best = std::max(best, unique);
  }
  return best;
}

struct CodeSpec {
  std::string backend;
  u64 p = 0;
  unsigned k = 1;
  u64 q0 = 0;
  u32 offset = 0;
  std::shared_ptr<const Backend> base;
  std::vector<PlaceId> D;
  Divisor G;
  long s = 1, ell = 1;
  std::optional<long> tau;

  long n() const { return static_cast<long>(D.size()); }
  long genus() const { return base->genus(); }
  Field field() const { return base->field(); }
  long radius() const {
    long t = choose_radius(n(), genus(), G.degree(), s, ell);
    return tau ? std::min(*tau, t) : t;
  }

  std::string canonical() const {
    std::ostringstream o;
    o << "backend=" << backend << ";field=" << field().name();
    if (backend == "hermitian") o << ";q0=" << q0;
    o << ";offset=" << offset << ";D=";
    for (std::size_t i = 0; i < D.size(); ++i) o << (i ? "," : "") << D[i].str();
    o << ";G=" << divisor_str(G) << ";s=" << s << ";ell=" << ell;
    return o.str();
  }

  static CodeSpec from_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      auto eq = line.find('=');
      // keys never contain '='; values may (x=3)
      auto key = detail::trim(line.substr(0, eq));
      if (eq == std::string::npos || key.empty() || key.find_first_of(" (") != std::string::npos)
        throw InputError("spec line " + std::to_string(lineno) + ": expected key = value");
      kv[key] = detail::trim(line.substr(eq + 1));
    }
    auto get = [&](const std::string& k) -> std::optional<std::string> {
      auto it = kv.find(k);
      if (it == kv.end()) return std::nullopt;
      return it->second;
    };
    auto need = [&](const std::string& k) {
      auto v = get(k);
      if (!v) throw InputError("spec: missing key '" + k + "'");
      return *v;
    };
    static const std::set<std::string> known{"backend", "p", "k", "q0", "n", "D", "G", "s", "ell", "tau", "offset"};
    for (const auto& [k, v] : kv)
      if (!known.count(k)) throw InputError("spec: unknown key '" + k + "'");

    CodeSpec c;
    c.backend = need("backend");
    if (auto o = get("offset")) c.offset = static_cast<u32>(detail::parse_long(*o, "offset"));
    try {
      if (c.backend == "rational") {
        c.p = static_cast<u64>(detail::parse_long(need("p"), "p"));
        c.k = static_cast<unsigned>(get("k") ? detail::parse_long(*get("k"), "k") : 1);
        Field F = Field::make(c.p, c.k);
        if (c.offset >= F.q()) throw InputError("spec: offset is not a field element");
        c.base = funcfield::backend_rational(F, c.offset);
      } else if (c.backend == "hermitian") {
        c.q0 = static_cast<u64>(detail::parse_long(need("q0"), "q0"));
        auto H = std::make_shared<funcfield::HermitianBackend>(c.q0, 1, 0);
        if (c.offset >= H->field().q()) throw InputError("spec: offset is not a field element");
        c.base = std::make_shared<funcfield::HermitianBackend>(c.q0, 1, c.offset);
        c.p = c.base->field().p();
        c.k = c.base->field().k();
        if (get("p") && static_cast<u64>(detail::parse_long(*get("p"), "p")) != c.p)
          throw InputError("spec: p does not match q0");
        if (get("k") && static_cast<unsigned>(detail::parse_long(*get("k"), "k")) != c.k)
          throw InputError("spec: k does not match q0");
      } else {
        throw InputError("spec: backend must be 'rational' or 'hermitian'");
      }
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      throw InputError(std::string("spec: ") + e.what());
    }
    std::string Ds = need("D");
    if (Ds == "all") {
      c.D = c.base->places();
    } else {
      for (const auto& t : detail::tokens(Ds)) c.D.push_back(funcfield::parse_place(t));
    }
    if (auto nn = get("n")) {
      long n = detail::parse_long(*nn, "n");
      if (Ds == "all" && n < static_cast<long>(c.D.size()) && n > 0) c.D.resize(static_cast<std::size_t>(n));
      if (n != c.n()) throw InputError("spec: n = " + std::to_string(n) + " but D lists " + std::to_string(c.n()) + " places");
    }
    c.G = parse_divisor(need("G"));
    c.s = get("s") ? detail::parse_long(*get("s"), "s") : 1;
    c.ell = get("ell") ? detail::parse_long(*get("ell"), "ell") : c.s;
    if (auto t = get("tau")) c.tau = detail::parse_long(*t, "tau");
    c.validate();
    return c;
  }

  static CodeSpec from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open spec file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return from_text(ss.str());
  }

  void validate() const {
    if (D.empty()) throw InputError("spec: D is empty");
    std::set<PlaceId> seen;
    for (const auto& P : D) {
      if (P.inf) throw InputError("spec: P_inf cannot be an evaluation place");
      if (!base->is_place(P)) throw InputError("spec: " + P.str() + " is not a rational place of the curve");
      if (!seen.insert(P).second) throw InputError("spec: repeated place " + P.str() + " in D");
    }
    if (!G.effective()) throw InputError("spec: G must be effective");
    for (const auto& P : G.support()) {
      if (!base->is_place(P)) throw InputError("spec: " + P.str() + " in G is not a rational place of the curve");
      if (seen.count(P)) throw InputError("spec: supp G meets D at " + P.str());
    }
    if (G[base->p0()] != 0) throw InputError("spec: P_0 = " + base->p0().str() + " lies in supp G; choose another offset");
    const long g = genus();
    if (G.degree() > n() + 2 * g - 1)
      throw InputError("spec: deg G = " + std::to_string(G.degree()) + " exceeds n + 2g - 1");
    if (s < 1 || ell < s) throw InputError("spec: need 1 <= s <= ell");
    if (tau && *tau < 0) throw InputError("spec: tau must be non-negative");
    try {
      for (long u = 0; u <= ell; ++u) base->h_factors(gscore::divisor_Gu(G, D, s, u));
    } catch (const Error& e) {
      throw InputError(std::string("spec: unsupported divisor shape: ") + e.what());
    }
  }
};

// Basis x^j y_i^{(G)} of L(G), ordered by delta_G.
struct MonomialBasis {
  std::vector<std::pair<std::size_t, long>> mono;  // (i, j)
  std::size_t size() const { return mono.size(); }
};

inline MonomialBasis message_basis(const Backend& B, const Divisor& G) {
  auto d = B.apery_deltas(G);
  std::vector<std::tuple<long, std::size_t, long>> v;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (long j = 0; B.mu() * j + d[i] <= 0; ++j) v.emplace_back(B.mu() * j + d[i], i, j);
  std::sort(v.begin(), v.end());
  MonomialBasis M;
  for (auto [dl, i, j] : v) M.mono.emplace_back(i, j);
  return M;
}

inline FuncElem message_to_func(const Backend& B, const Divisor& G, const MonomialBasis& M, const Message& m) {
  if (m.size() != M.size())
    throw InputError("message has " + std::to_string(m.size()) + " symbols, dimension is " + std::to_string(M.size()));
  FuncElem f = FuncElem::zero(B, G);
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m[k] >= B.field().q()) throw InputError("message symbol out of range");
    if (m[k]) f.coords()[M.mono[k].first].set(static_cast<std::size_t>(M.mono[k].second), m[k]);
  }
  return f;
}

inline Message func_to_message(const FuncElem& f, const MonomialBasis& M) {
  if (f.delta() > 0) throw Error("function is not in L(G)");
  Message m(M.size());
  for (std::size_t k = 0; k < M.size(); ++k) m[k] = f[M.mono[k].first][static_cast<std::size_t>(M.mono[k].second)];
  return m;
}

struct Precomp {
  std::string spec_key;
  unsigned ext = 1;
  std::shared_ptr<const Backend> B;  // backend over F_{q^ext}
  gscore::Tables T;
  rootfind::SeriesTables S;
  MonomialBasis basis;

  Field base_field() const { return ext == 1 ? B->field() : Field::make(B->field().p(), B->field().k() / ext); }
};

namespace detail {

inline std::vector<PlaceId> embed_all(const Backend& src, const Backend& dst, const std::vector<PlaceId>& P) {
  std::vector<PlaceId> out;
  for (const auto& p : P) out.push_back(src.embed_place(p, dst));
  return out;
}

inline Divisor embed_divisor(const Backend& src, const Backend& dst, const Divisor& D) {
  Divisor out;
  for (const auto& [P, v] : D.terms()) out.set(src.embed_place(P, dst), v);
  return out;
}

inline Precomp assemble_precomp(const CodeSpec& spec, unsigned e, std::shared_ptr<const Backend> K,
                                std::vector<PlaceId> E) {
  Precomp pre;
  pre.spec_key = spec.canonical();
  pre.ext = e;
  pre.B = K;
  auto Dk = embed_all(*spec.base, *K, spec.D);
  Divisor Gk = embed_divisor(*spec.base, *K, spec.G);
  pre.T = gscore::build_tables(K, Dk, std::move(E), Gk, spec.s, spec.ell);
  const std::size_t beta = static_cast<std::size_t>(2 * spec.ell * spec.G.degree() + spec.s * spec.n());
  pre.S = rootfind::build_series(*K, Gk, spec.ell, std::max<std::size_t>(beta, static_cast<std::size_t>(spec.G.degree() + 1)));
  pre.basis = message_basis(*K, Gk);
  return pre;
}

}  // namespace detail

inline long required_places(const CodeSpec& spec) {
  return gscore::required_places(spec.n(), spec.genus(), spec.G.degree(), spec.base->mu(), spec.s, spec.ell);
}

// Auxiliary places E: unused base places first, then places of the least
// sufficient constant field extension.
inline Precomp precompute(const CodeSpec& spec) {
  const long N = required_places(spec);
  std::set<PlaceId> used(spec.D.begin(), spec.D.end());
  for (const auto& P : spec.G.support()) used.insert(P);
  std::vector<PlaceId> free_base;
  for (const auto& P : spec.base->places())
    if (!used.count(P)) free_base.push_back(P);
  if (static_cast<long>(free_base.size()) >= N) {
    free_base.resize(static_cast<std::size_t>(N));
    return detail::assemble_precomp(spec, 1, spec.base, std::move(free_base));
  }
  const Field F = spec.field();
  for (unsigned e = 2; e <= 64; ++e) {
    double size = 1;
    for (unsigned i = 0; i < e; ++i) size *= static_cast<double>(F.q());
    if (size > double(1u << 22)) break;
    auto K = spec.base->extend(e);
    std::set<PlaceId> base_img;
    for (const auto& P : spec.base->places()) base_img.insert(spec.base->embed_place(P, *K));
    std::vector<PlaceId> E = detail::embed_all(*spec.base, *K, free_base);
    for (const auto& P : K->places()) {
      if (static_cast<long>(E.size()) >= N) break;
      if (!base_img.count(P)) E.push_back(P);
    }
    if (static_cast<long>(E.size()) >= N) return detail::assemble_precomp(spec, e, K, std::move(E));
  }
  throw Error("precompute: no supported constant field extension provides " + std::to_string(N) + " places");
}

inline void check_consistent(const CodeSpec& spec, const Precomp& pre) {
  if (pre.spec_key != spec.canonical()) throw InputError("precomputed tables were built for a different code");
}

inline Word to_ext(const Precomp& pre, const Word& w) {
  if (pre.ext == 1) return w;
  const auto& emb = pre.base_field().embedding(pre.B->field());
  Word out;
  for (u32 v : w) out.push_back(emb.map(v));
  return out;
}

inline std::optional<Word> from_ext(const Precomp& pre, const Word& w) {
  if (pre.ext == 1) return w;
  const auto& emb = pre.base_field().embedding(pre.B->field());
  Word out;
  for (u32 v : w) {
    auto b = emb.preimage(v);
    if (!b) return std::nullopt;
    out.push_back(*b);
  }
  return out;
}

inline Word encode(const CodeSpec& spec, const Precomp& pre, const Message& m) {
  check_consistent(spec, pre);
  for (u32 v : m)
    if (v >= spec.field().q()) throw InputError("message symbol out of range");
  FuncElem f = message_to_func(*pre.B, pre.T.G, pre.basis, to_ext(pre, m));
  return *from_ext(pre, gscore::evaluate(f, pre.T.D_G));
}

struct DecodeResult {
  bool fail = false;
  std::vector<Message> messages;  // sorted
  std::vector<Word> codewords;    // aligned with messages
};

inline long hamming(const Word& a, const Word& b) {
  long d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

// All messages whose codeword lies within tau of r, or FAIL.
inline DecodeResult decode(const CodeSpec& spec, const Precomp& pre, const Word& r, std::optional<long> tau_override = {}) {
  check_consistent(spec, pre);
  if (static_cast<long>(r.size()) != spec.n()) throw InputError("received word has wrong length");
  for (u32 v : r)
    if (v >= spec.field().q()) throw InputError("received symbol out of range");
  const long tau = tau_override ? std::min(*tau_override, choose_radius(spec.n(), spec.genus(), spec.G.degree(), spec.s, spec.ell))
                                : spec.radius();
  const auto& T = pre.T;
  Word rk = to_ext(pre, r);
  auto gens = gscore::generators_polyring(rk, T, spec.s < spec.ell);
  auto IM = gscore::assemble(gens, T);
  const long bound = spec.s * (spec.n() - tau);
  auto Q = gscore::find_Q(IM, bound, T);
  DecodeResult res;
  if (!Q) {
    res.fail = true;
    return res;
  }
  const std::size_t beta = static_cast<std::size_t>(2 * spec.ell * spec.G.degree() + bound);
  auto roots = rootfind::root_finding(*pre.B, T.G, *Q, pre.S, beta);
  std::vector<std::pair<Message, Word>> hits;
  for (const auto& f : roots) {
    auto m = from_ext(pre, func_to_message(f, pre.basis));
    if (!m) continue;
    auto c = from_ext(pre, gscore::evaluate(f, T.D_G));
    if (!c || hamming(*c, r) > tau) continue;
    hits.emplace_back(*m, *c);
  }
  std::sort(hits.begin(), hits.end());
  for (auto& [m, c] : hits) {
    res.messages.push_back(std::move(m));
    res.codewords.push_back(std::move(c));
  }
  return res;
}

// All codewords, enumerated over the base field from the L(G) basis. Used
// as the exhaustive oracle.
struct Codebook {
  Field F;
  std::vector<Word> basis_words;  // ev_D of the basis monomials
  std::vector<Message> messages;
  std::vector<Word> words;
};

inline Codebook make_codebook(const CodeSpec& spec, u64 limit = 10000000) {
  Codebook cb{spec.field(), {}, {}, {}};
  const Backend& B = *spec.base;
  auto M = message_basis(B, spec.G);
  for (const auto& [i, j] : M.mono) {
    FuncElem f = FuncElem::basis(B, spec.G, i, Poly::monomial(cb.F, 1, static_cast<std::size_t>(j)));
    Word w;
    for (const auto& P : spec.D) w.push_back(f.eval(P));
    cb.basis_words.push_back(std::move(w));
  }
  u64 total = 1;
  for (std::size_t i = 0; i < M.size(); ++i) {
    total *= cb.F.q();
    if (total > limit) throw Error("brute force: codebook too large (" + std::to_string(total) + "+ words)");
  }
  const std::size_t n = spec.D.size();
  cb.messages.reserve(total);
  cb.words.reserve(total);
  for (u64 code = 0; code < total; ++code) {
    Message m(M.size());
    u64 c = code;
    for (auto& v : m) {
      v = static_cast<u32>(c % cb.F.q());
      c /= cb.F.q();
    }
    Word w(n, 0);
    for (std::size_t k = 0; k < m.size(); ++k)
      if (m[k])
        for (std::size_t j = 0; j < n; ++j) w[j] = cb.F.add(w[j], cb.F.mul(m[k], cb.basis_words[k][j]));
    cb.messages.push_back(std::move(m));
    cb.words.push_back(std::move(w));
  }
  return cb;
}

inline std::vector<Message> brute_force_list_decode(const Codebook& cb, const Word& r, long tau) {
  std::vector<Message> out;
  for (std::size_t i = 0; i < cb.words.size(); ++i)
    if (hamming(cb.words[i], r) <= tau) out.push_back(cb.messages[i]);
  std::sort(out.begin(), out.end());
  return out;
}

// Exactly t positions get a random nonzero error.
inline Word channel(const Word& c, long t, u64 seed, Field F) {
  if (t < 0 || t > static_cast<long>(c.size())) throw InputError("channel: error count out of range");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx(c.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  Word out = c;
  for (long e = 0; e < t; ++e) {
    std::size_t j = idx[static_cast<std::size_t>(e)];
    out[j] = F.add(out[j], F.random_nonzero(rng));
  }
  return out;
}

// ---- precomputation file (textual, magic AGDEC1) ----

namespace detail {

inline void put_vec(std::ostream& o, const std::vector<u32>& v) {
  o << v.size();
  for (u32 x : v) o << ' ' << x;
  o << '\n';
}
inline void put_poly(std::ostream& o, const Poly& p) { put_vec(o, p.coeffs()); }
inline void put_places(std::ostream& o, const std::vector<PlaceId>& P) {
  o << P.size();
  for (const auto& p : P) o << ' ' << p.str();
  o << '\n';
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}
  std::string word() {
    std::string s;
    if (!(in_ >> s)) throw InputError("precomp file: unexpected end of data");
    return s;
  }
  void expect(const std::string& label) {
    std::string s = word();
    if (s != label) throw InputError("precomp file: expected '" + label + "', found '" + s + "'");
  }
  u64 num() {
    std::string s = word();
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &pos);
    } catch (...) {
      throw InputError("precomp file: bad number '" + s + "'");
    }
    if (pos != s.size()) throw InputError("precomp file: bad number '" + s + "'");
    return v;
  }
  long snum() {
    std::string s = word();
    return parse_long(s, "precomp field");
  }
  std::vector<u32> vec() {
    u64 n = num();
    std::vector<u32> v(n);
    for (auto& x : v) x = static_cast<u32>(num());
    return v;
  }
  std::vector<PlaceId> places() {
    u64 n = num();
    std::vector<PlaceId> P;
    for (u64 i = 0; i < n; ++i) P.push_back(funcfield::parse_place(word()));
    return P;
  }
  std::string rest_of_line() {
    std::string s;
    std::getline(in_, s);
    return trim(s);
  }

 private:
  std::istream& in_;
};

inline void put_evaltable(std::ostream& o, const std::string& name, const gscore::EvalTable& T) {
  o << "evaltable " << name << ' ' << divisor_str(T.A) << ' ' << T.delta.size();
  for (long d : T.delta) o << ' ' << d;
  o << '\n';
  for (const auto& row : T.y) put_vec(o, row);
}

inline gscore::EvalTable get_evaltable(Reader& r, const std::string& name, Field F,
                                       std::shared_ptr<const gscore::PlaceTable> pt) {
  r.expect("evaltable");
  r.expect(name);
  Divisor A = parse_divisor(r.word());
  u64 mu = r.num();
  std::vector<long> d(mu);
  for (auto& v : d) v = r.snum();
  std::vector<std::vector<u32>> y(mu);
  for (auto& row : y) {
    row = r.vec();
    if (row.size() != pt->size()) throw InputError("precomp file: table " + name + " has the wrong width");
  }
  return gscore::EvalTable(F, std::move(pt), std::move(A), std::move(d), std::move(y));
}

}  // namespace detail

inline void save_precomp(std::ostream& o, const Precomp& pre) {
  const auto& T = pre.T;
  o << "AGDEC1\n";
  o << "spec " << pre.spec_key << '\n';
  o << "ext " << pre.ext << '\n';
  o << "s " << T.s << " ell " << T.ell << '\n';
  o << "G " << divisor_str(T.G) << '\n';
  o << "D ";
  detail::put_places(o, T.D);
  o << "E ";
  detail::put_places(o, T.E);
  detail::put_evaltable(o, "DG", T.D_G);
  detail::put_evaltable(o, "EG", T.E_G);
  for (std::size_t t = 0; t < T.E_mtG.size(); ++t) detail::put_evaltable(o, "EmtG" + std::to_string(t), T.E_mtG[t]);
  for (std::size_t u = 0; u < T.Gu.size(); ++u) {
    o << "gen " << u << ' ' << divisor_str(T.Gu[u]) << '\n';
    for (const auto& c : T.gen[u].coords()) detail::put_poly(o, c);
    detail::put_vec(o, T.gen_eval[u]);
  }
  o << "series " << pre.S.beta << ' ' << pre.S.mtG.size() << '\n';
  for (const auto& row : pre.S.mtG)
    for (const auto& p : row) detail::put_poly(o, p);
  for (const auto& p : pre.S.G) detail::put_poly(o, p);
  o << "end\n";
}

inline Precomp load_precomp(std::istream& in, const CodeSpec& spec) {
  detail::Reader r(in);
  if (r.word() != "AGDEC1") throw InputError("precomp file: bad magic (expected AGDEC1)");
  r.expect("spec");
  Precomp pre;
  pre.spec_key = r.rest_of_line();
  check_consistent(spec, pre);
  r.expect("ext");
  pre.ext = static_cast<unsigned>(r.num());
  if (pre.ext < 1 || pre.ext > 64) throw InputError("precomp file: bad extension degree");
  pre.B = pre.ext == 1 ? spec.base : spec.base->extend(pre.ext);
  const Backend& B = *pre.B;
  Field F = B.field();
  auto& T = pre.T;
  T.backend = pre.B;
  r.expect("s");
  T.s = r.snum();
  r.expect("ell");
  T.ell = r.snum();
  r.expect("G");
  T.G = parse_divisor(r.word());
  r.expect("D");
  T.D = r.places();
  r.expect("E");
  T.E = r.places();
  for (const auto& P : T.E)
    if (!B.is_place(P)) throw InputError("precomp file: " + P.str() + " is not a place");
  T.ptD = std::make_shared<gscore::PlaceTable>(B, T.D);
  T.ptE = std::make_shared<gscore::PlaceTable>(B, T.E);
  T.D_G = detail::get_evaltable(r, "DG", F, T.ptD);
  T.E_G = detail::get_evaltable(r, "EG", F, T.ptE);
  for (long t = 0; t <= T.ell; ++t) T.E_mtG.push_back(detail::get_evaltable(r, "EmtG" + std::to_string(t), F, T.ptE));
  for (long u = 0; u <= T.ell; ++u) {
    r.expect("gen");
    if (static_cast<long>(r.num()) != u) throw InputError("precomp file: generator index out of order");
    Divisor Gu = parse_divisor(r.word());
    std::vector<Poly> c;
    for (long i = 0; i < B.mu(); ++i) c.emplace_back(F, r.vec());
    T.Gu.push_back(Gu);
    T.gen.emplace_back(&B, Gu, std::move(c));
    T.gen_eval.push_back(r.vec());
    if (T.gen_eval.back().size() != T.E.size()) throw InputError("precomp file: generator table has the wrong width");
  }
  r.expect("series");
  pre.S.beta = r.num();
  u64 rows = r.num();
  for (u64 t = 0; t < rows; ++t) {
    std::vector<Poly> row;
    for (long i = 0; i < B.mu(); ++i) row.emplace_back(F, r.vec());
    pre.S.mtG.push_back(std::move(row));
  }
  for (long i = 0; i < B.mu(); ++i) pre.S.G.emplace_back(F, r.vec());
  r.expect("end");
  pre.basis = message_basis(B, T.G);
  if (static_cast<long>(T.E.size()) < required_places(spec)) throw InputError("precomp file: too few auxiliary places");
  return pre;
}

inline void save_precomp_file(const std::string& path, const Precomp& pre) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  save_precomp(f, pre);
}

inline Precomp load_precomp_file(const std::string& path, const CodeSpec& spec) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open precomp file " + path);
  return load_precomp(f, spec);
}

}  // namespace agdec::codectl

#endif
