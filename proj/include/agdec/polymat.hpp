#ifndef AGDEC_POLYMAT_HPP
#define AGDEC_POLYMAT_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "poly.hpp"

namespace agdec::polymat {

using algebra::Field;
using algebra::Poly;
using Row = std::vector<Poly>;

// Shift with entries num[i] / mu.
struct Shift {
  long mu = 1;
  std::vector<long> num;

  Shift() = default;
  Shift(long m, std::vector<long> n) : mu(m), num(std::move(n)) {}
  static Shift zero(std::size_t m, long mu = 1) { return Shift(mu, std::vector<long>(m, 0)); }
  std::size_t size() const { return num.size(); }
  Shift negated() const {
    Shift r = *this;
    for (auto& v : r.num) v = -v;
    return r;
  }
};

class PolyMat {
 public:
  PolyMat() = default;
  PolyMat(Field F, std::size_t r, std::size_t m) : F_(F), cols_(m), rows_(r, Row(m, Poly(F))) {}
  PolyMat(Field F, std::size_t m, std::vector<Row> rows) : F_(F), cols_(m), rows_(std::move(rows)) {
    for (const auto& row : rows_)
      if (row.size() != cols_) throw Error("PolyMat: ragged rows");
  }

  static PolyMat identity(Field F, std::size_t m) {
    PolyMat I(F, m, m);
    for (std::size_t i = 0; i < m; ++i) I(i, i) = Poly::one(F);
    return I;
  }

  Field field() const { return F_; }
  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  Poly& operator()(std::size_t i, std::size_t j) { return rows_[i][j]; }
  const Poly& operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  Row& row(std::size_t i) { return rows_[i]; }
  const Row& row(std::size_t i) const { return rows_[i]; }
  std::vector<Row>& row_list() { return rows_; }
  const std::vector<Row>& row_list() const { return rows_; }
  void push_row(Row r) {
    if (r.size() != cols_) throw Error("PolyMat: row length mismatch");
    rows_.push_back(std::move(r));
  }

  long max_deg() const {
    long d = kNegInf;
    for (const auto& r : rows_)
      for (const auto& p : r) d = std::max(d, p.deg());
    return d;
  }

  friend bool operator==(const PolyMat& a, const PolyMat& b) {
    return a.cols_ == b.cols_ && a.rows_ == b.rows_;
  }

  friend PolyMat operator*(const PolyMat& a, const PolyMat& b) {
    if (a.cols_ != b.rows()) throw Error("PolyMat: product dimension mismatch");
    PolyMat c(a.F_, a.rows(), b.cols_);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

 private:
  Field F_;
  std::size_t cols_ = 0;
  std::vector<Row> rows_;
};

inline bool row_is_zero(const Row& v) {
  return std::all_of(v.begin(), v.end(), [](const Poly& p) { return p.is_zero(); });
}

// mu-scaled shifted degree max_k(mu*deg v_k + num_k); kNegInf for zero rows.
inline long sdeg(const Row& v, const Shift& s) {
  if (v.size() != s.size()) throw Error("sdeg: length mismatch");
  long best = kNegInf;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k].is_zero()) continue;
    best = std::max(best, s.mu * v[k].deg() + s.num[k]);
  }
  return best;
}

// Largest index attaining the shifted degree.
inline std::size_t spivot(const Row& v, const Shift& s) {
  if (v.size() != s.size()) throw Error("spivot: length mismatch");
  long best = kNegInf;
  std::size_t idx = v.size();
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k].is_zero()) continue;
    long d = s.mu * v[k].deg() + s.num[k];
    if (d >= best) {
      best = d;
      idx = k;
    }
  }
  if (idx == v.size()) throw Error("spivot: zero row");
  return idx;
}

inline bool is_popov(const PolyMat& P, const Shift& s) {
  const std::size_t m = P.cols();
  if (P.rows() != m || s.size() != m) return false;
  for (std::size_t i = 0; i < m; ++i) {
    if (row_is_zero(P.row(i))) return false;
    if (spivot(P.row(i), s) != i) return false;
    if (P(i, i).lc() != 1) return false;
    for (std::size_t k = 0; k < m; ++k)
      if (k != i && P(k, i).deg() >= P(i, i).deg()) return false;
  }
  return true;
}

// a -= c * x^m * b, entrywise
inline void row_sub_scaled_shift(Row& a, const Row& b, u32 c, std::size_t m) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k].sub_scaled_shift(b[k], c, m);
}

inline void row_sub_mul(Row& a, const Row& b, const Poly& q) {
  if (q.is_zero()) return;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!b[k].is_zero()) a[k] -= q * b[k];
}

namespace detail {

// Mulders–Storjohann: simple transformations until all s-pivots are distinct.
// Zero rows are discarded.
inline std::vector<Row> weak_popov(std::vector<Row> rows, const Shift& s) {
  Field F;
  for (const auto& r : rows)
    for (const auto& p : r)
      if (p.field().valid()) F = p.field();
  const std::size_t m = s.size();
  std::vector<long> owner(m, -1);
  std::vector<std::size_t> work;
  for (std::size_t i = rows.size(); i-- > 0;) work.push_back(i);
  std::vector<bool> dead(rows.size(), false);
  while (!work.empty()) {
    std::size_t i = work.back();
    work.pop_back();
    for (;;) {
      if (row_is_zero(rows[i])) {
        dead[i] = true;
        break;
      }
      std::size_t k = spivot(rows[i], s);
      if (owner[k] < 0) {
        owner[k] = static_cast<long>(i);
        break;
      }
      std::size_t j = static_cast<std::size_t>(owner[k]);
      if (rows[i][k].deg() < rows[j][k].deg()) {
        owner[k] = static_cast<long>(i);
        std::swap(i, j);
      }
      // reduce row i by row j on pivot column k
      const long delta = rows[i][k].deg() - rows[j][k].deg();
      u32 c = F.div(rows[i][k].lc(), rows[j][k].lc());
      row_sub_scaled_shift(rows[i], rows[j], c, static_cast<std::size_t>(delta));
    }
  }
  std::vector<Row> out;
  for (std::size_t k = 0; k < m; ++k)
    if (owner[k] >= 0) out.push_back(std::move(rows[static_cast<std::size_t>(owner[k])]));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (dead[i]) continue;
    bool is_owner = false;
    for (long o : owner)
      if (o == static_cast<long>(i)) is_owner = true;
    if (!is_owner && !row_is_zero(rows[i])) throw Error("weak_popov: internal inconsistency");
  }
  return out;
}

}  // namespace detail

// s-Popov basis of the row space of V (full column rank required).
inline PolyMat popov(const PolyMat& V, const Shift& s) {
  const std::size_t m = V.cols();
  if (s.size() != m) throw Error("popov: shift length mismatch");
  Field F = V.field();
  std::vector<Row> rows;
  for (const auto& r : V.row_list())
    if (!row_is_zero(r)) rows.push_back(r);
  rows = detail::weak_popov(std::move(rows), s);
  if (rows.size() != m) throw Error("popov: input is rank deficient");
  // rows are ordered by pivot index already
  for (std::size_t i = 0; i < m; ++i) {
    u32 inv = F.inv(rows[i][i].lc());
    for (auto& p : rows[i]) p = p.scaled(inv);
  }
  for (std::size_t i = 0; i < m; ++i) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t k = 0; k < m; ++k) {
        if (k == i) continue;
        if (rows[i][k].deg() >= rows[k][k].deg()) {
          Poly q = divmod(rows[i][k], rows[k][k]).first;
          row_sub_mul(rows[i], rows[k], q);
          changed = true;
        }
      }
    }
  }
  return PolyMat(F, m, std::move(rows));
}

// Reduce v against an s-Popov basis P; returns the remainder (zero iff v lies
// in the row space).
inline Row reduce_row(const PolyMat& P, const Shift& s, Row v) {
  Field F = P.field();
  while (!row_is_zero(v)) {
    std::size_t k = spivot(v, s);
    if (v[k].deg() < P(k, k).deg()) return v;
    const long delta = v[k].deg() - P(k, k).deg();
    row_sub_scaled_shift(v, P.row(k), F.div(v[k].lc(), P(k, k).lc()), static_cast<std::size_t>(delta));
  }
  return v;
}

inline std::size_t minimal_row(const PolyMat& P, const Shift& s) {
  std::size_t best = P.rows();
  long bd = kNegInf;
  for (std::size_t i = 0; i < P.rows(); ++i) {
    if (row_is_zero(P.row(i))) continue;
    long d = sdeg(P.row(i), s);
    if (best == P.rows() || d < bd) {
      best = i;
      bd = d;
    }
  }
  if (best == P.rows()) throw Error("minimal_row: zero matrix");
  return best;
}

inline long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline long floor_rem(long a, long b) { return a - b * floor_div(a, b); }

// perm[i] = old column placed at new position i; exps[i] = exponent of the
// x-power multiplying new column i (normalized so the minimum is 0).
struct FracShiftPerm {
  std::vector<std::size_t> perm;
  std::vector<long> exps;
};

inline FracShiftPerm frac_shift_permutation(const Shift& d) {
  const std::size_t m = d.size();
  FracShiftPerm r;
  r.perm.resize(m);
  std::iota(r.perm.begin(), r.perm.end(), 0);
  std::stable_sort(r.perm.begin(), r.perm.end(), [&](std::size_t a, std::size_t b) {
    long ra = floor_rem(d.num[a], d.mu), rb = floor_rem(d.num[b], d.mu);
    if (ra != rb) return ra < rb;
    return a < b;
  });
  r.exps.resize(m);
  long lo = 0;
  for (std::size_t i = 0; i < m; ++i) {
    r.exps[i] = floor_div(d.num[r.perm[i]], d.mu);
    if (i == 0 || r.exps[i] < lo) lo = r.exps[i];
  }
  for (auto& e : r.exps) e -= lo;
  return r;
}

// Psi(V): permute columns by pi, scale new column i by x^{exps[i]}, and (for
// square V) permute rows the same way so diagonal pivots stay diagonal.
inline PolyMat apply_frac_shift(const PolyMat& V, const Shift& d, bool permute_rows) {
  auto fs = frac_shift_permutation(d);
  const std::size_t m = V.cols();
  PolyMat W(V.field(), V.rows(), m);
  for (std::size_t i = 0; i < V.rows(); ++i) {
    std::size_t src = permute_rows ? fs.perm[i] : i;
    for (std::size_t j = 0; j < m; ++j)
      W(i, j) = V(src, fs.perm[j]).shifted(static_cast<std::size_t>(fs.exps[j]));
  }
  return W;
}

struct HPInstance {
  PolyMat A;             // phi x theta
  std::vector<Poly> u;   // theta moduli
  Shift d;               // length phi
};

// Basis of H_u(A) = { v : v*A_k = 0 mod u_k } in (-d)-Popov form, via the
// kernel embedding [[I, A],[0, diag(u)]] with a dominating shift on the
// right block.
inline PolyMat hp_basis(const HPInstance& inst) {
  const std::size_t phi = inst.A.rows();
  const std::size_t theta = inst.A.cols();
  Field F = inst.A.field();
  if (inst.u.size() != theta) throw Error("hp_basis: modulus count mismatch");
  if (inst.d.size() != phi) throw Error("hp_basis: shift length mismatch");
  for (const auto& u : inst.u)
    if (u.is_zero()) throw Error("hp_basis: zero modulus");
  const long mu = inst.d.mu;
  long total = 0;
  for (const auto& u : inst.u) total += u.deg();
  long maxabs = 0;
  for (long v : inst.d.num) maxabs = std::max(maxabs, v < 0 ? -v : v);
  const long W = mu * (total + 2) + 2 * maxabs + 1;

  const std::size_t n = phi + theta;
  PolyMat K(F, n, n);
  for (std::size_t i = 0; i < phi; ++i) {
    K(i, i) = Poly::one(F);
    for (std::size_t k = 0; k < theta; ++k) K(i, phi + k) = inst.A(i, k) % inst.u[k];
  }
  for (std::size_t k = 0; k < theta; ++k) K(phi + k, phi + k) = inst.u[k];
  Shift s(mu, std::vector<long>(n, W));
  for (std::size_t i = 0; i < phi; ++i) s.num[i] = -inst.d.num[i];
  PolyMat P = popov(K, s);
  PolyMat out(F, phi, phi);
  for (std::size_t i = 0; i < phi; ++i) {
    for (std::size_t k = 0; k < theta; ++k)
      if (!P(i, phi + k).is_zero()) throw Error("hp_basis: dominating shift too small");
    for (std::size_t j = 0; j < phi; ++j) out(i, j) = std::move(P(i, j));
  }
  return out;
}

}  // namespace agdec::polymat

#endif
