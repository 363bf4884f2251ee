#pragma once
// Exact integer linear algebra and shared vocabulary types.

#include <boost/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tropabel {

using Int = std::int64_t;
using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;  // row-major
using Rational = boost::rational<Int>;
using RatVec = std::vector<Rational>;

// Edge subsets are bitmasks over edge indices in canonical order.
using EdgeSet = std::uint64_t;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : Error {
  using Error::Error;
};
// Desk-scale enumeration limit hit; the message names the limit.
struct CapExceeded : Error {
  using Error::Error;
};
struct SearchBoundExceeded : Error {
  using Error::Error;
};
// An internal cross-check between two independent computations failed.
struct InvariantViolation : Error {
  using Error::Error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvariantViolation(what);
}

inline Int env_cap(Int fallback) {
  if (const char* s = std::getenv("TAK_CAP")) {
    char* end = nullptr;
    long long v = std::strtoll(s, &end, 10);
    if (end != s && v > 0) return static_cast<Int>(v);
  }
  return fallback;
}

// ---- checked arithmetic -------------------------------------------------

inline Int add_ck(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("integer overflow (add)");
  return r;
}
inline Int sub_ck(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw Error("integer overflow (sub)");
  return r;
}
inline Int mul_ck(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("integer overflow (mul)");
  return r;
}

inline Int dot(const IntVec& a, const IntVec& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = add_ck(s, mul_ck(a[i], b[i]));
  return s;
}

inline Rational dot(const IntVec& a, const RatVec& x) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rational(a[i]) * x[i];
  return s;
}

inline IntVec add(const IntVec& a, const IntVec& b) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = add_ck(a[i], b[i]);
  return r;
}
inline IntVec sub(const IntVec& a, const IntVec& b) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = sub_ck(a[i], b[i]);
  return r;
}
inline IntVec scale(Int c, const IntVec& a) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = mul_ck(c, a[i]);
  return r;
}
// c*a + d*b
inline IntVec lincomb(Int c, const IntVec& a, Int d, const IntVec& b) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = add_ck(mul_ck(c, a[i]), mul_ck(d, b[i]));
  return r;
}

inline bool is_zero(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; });
}

inline Int content(const IntVec& v) {
  Int g = 0;
  for (Int x : v) g = std::gcd(g, x);
  return g;
}

// Divide by the gcd of the entries (sign untouched).
inline IntVec primitive(IntVec v) {
  Int g = content(v);
  if (g > 1)
    for (Int& x : v) x /= g;
  return v;
}

// Primitive with first nonzero entry positive: the representative used for
// lines and for hyperplanes where the sign is not meaningful.
inline IntVec primitive_line(IntVec v) {
  v = primitive(std::move(v));
  for (Int x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (Int& y : v) y = -y;
    break;
  }
  return v;
}

inline IntVec unit_vector(std::size_t n, std::size_t i) {
  IntVec e(n, 0);
  e[i] = 1;
  return e;
}

inline IntMat identity(std::size_t n) {
  IntMat m(n, IntVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline IntMat transpose(const IntMat& a, std::size_t ncols) {
  IntMat t(ncols, IntVec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < ncols; ++j) t[j][i] = a[i][j];
  return t;
}

inline IntVec mat_vec(const IntMat& a, const IntVec& x) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = dot(a[i], x);
  return r;
}

// Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0.
inline std::tuple<Int, Int, Int> xgcd(Int a, Int b) {
  Int s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (b != 0) {
    Int q = a / b;
    Int r = a - q * b;
    a = b;
    b = r;
    Int s2 = sub_ck(s0, mul_ck(q, s1));
    Int t2 = sub_ck(t0, mul_ck(q, t1));
    s0 = s1;
    s1 = s2;
    t0 = t1;
    t1 = t2;
  }
  if (a < 0) return {-a, -s0, -t0};
  return {a, s0, t0};
}

// Column echelon form by unimodular column operations: A * V = B where the
// first `rank` columns of B are in echelon form and the rest vanish.  Vinv is
// the inverse of V, maintained alongside.
struct ColumnEchelon {
  IntMat B;     // m x n
  IntMat V;     // n x n, unimodular
  IntMat Vinv;  // n x n
  std::size_t rank = 0;
  std::size_t ncols = 0;

  // Columns rank..n-1 of V: a basis of the integer kernel of A.  Because V is
  // unimodular the basis spans the full lattice ker(A) ∩ Z^n.
  IntMat kernel() const {
    IntMat out;
    for (std::size_t j = rank; j < ncols; ++j) {
      IntVec c(ncols);
      for (std::size_t i = 0; i < ncols; ++i) c[i] = V[i][j];
      out.push_back(std::move(c));
    }
    return out;
  }
};

inline ColumnEchelon column_echelon(const IntMat& A, std::size_t n) {
  ColumnEchelon ce;
  ce.B = A;
  ce.V = identity(n);
  ce.Vinv = identity(n);
  ce.ncols = n;
  std::size_t p = 0;
  for (std::size_t i = 0; i < ce.B.size() && p < n; ++i) {
    for (std::size_t j = p + 1; j < n; ++j) {
      Int b = ce.B[i][j];
      if (b == 0) continue;
      Int a = ce.B[i][p];
      auto [g, s, t] = xgcd(a, b);
      Int ag = a / g, bg = b / g;
      // new col p = s*col_p + t*col_j ; new col j = -bg*col_p + ag*col_j
      auto colop = [&](IntMat& M) {
        for (auto& row : M) {
          Int cp = row[p], cj = row[j];
          row[p] = add_ck(mul_ck(s, cp), mul_ck(t, cj));
          row[j] = add_ck(mul_ck(-bg, cp), mul_ck(ag, cj));
        }
      };
      colop(ce.B);
      colop(ce.V);
      // inverse: new row p = ag*row_p + bg*row_j ; new row j = -t*row_p + s*row_j
      IntVec rp = ce.Vinv[p], rj = ce.Vinv[j];
      ce.Vinv[p] = lincomb(ag, rp, bg, rj);
      ce.Vinv[j] = lincomb(-t, rp, s, rj);
    }
    if (ce.B[i][p] != 0) ++p;
  }
  ce.rank = p;
  return ce;
}

inline std::size_t rank(const IntMat& rows, std::size_t n) {
  if (rows.empty()) return 0;
  return column_echelon(rows, n).rank;
}

// Basis of the saturated lattice {x in Z^n : A x = 0}.
inline IntMat integer_kernel(const IntMat& A, std::size_t n) {
  if (A.empty()) return identity(n);
  return column_echelon(A, n).kernel();
}

// A saturated sublattice L of Z^n with basis columns `basis` (stored as rows
// here, one vector each) and a left inverse `coords` so coords·basis = I.
// Used to express points of a linear span in intrinsic integer coordinates.
struct Sublattice {
  std::size_t n = 0;
  IntMat basis;   // k vectors in Z^n
  IntMat coords;  // k covectors on Z^n with coords[i]·basis[j] = δ_ij

  std::size_t dim() const { return basis.size(); }

  IntVec to_coords(const IntVec& x) const { return mat_vec(coords, x); }
  IntVec from_coords(const IntVec& c) const {
    IntVec x(n, 0);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < n; ++j)
        x[j] = add_ck(x[j], mul_ck(c[i], basis[i][j]));
    return x;
  }
  // Restriction of a covector on Z^n to L, in the dual basis.
  IntVec restrict_covector(const IntVec& u) const {
    IntVec w(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) w[i] = dot(u, basis[i]);
    return w;
  }
  // A covector on Z^n restricting to w (well defined modulo L^⊥).
  IntVec lift_covector(const IntVec& w) const {
    IntVec u(n, 0);
    for (std::size_t i = 0; i < coords.size(); ++i)
      for (std::size_t j = 0; j < n; ++j)
        u[j] = add_ck(u[j], mul_ck(w[i], coords[i][j]));
    return u;
  }
};

// span(gens) ∩ Z^n.  When the span is everything the standard basis is used
// so that coordinates stay readable.
inline Sublattice saturated_span(const IntMat& gens, std::size_t n) {
  Sublattice L;
  L.n = n;
  IntMat nonzero;
  for (const auto& g : gens)
    if (!is_zero(g)) nonzero.push_back(g);
  std::size_t r = rank(nonzero, n);
  if (r == n) {
    L.basis = identity(n);
    L.coords = identity(n);
    return L;
  }
  if (r == 0) return L;
  // Orthogonal complement P of the span, then L = ker(P).
  IntMat P = integer_kernel(nonzero, n);
  ColumnEchelon ce = column_echelon(P, n);
  for (std::size_t j = ce.rank; j < n; ++j) {
    IntVec c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = ce.V[i][j];
    L.basis.push_back(std::move(c));
    L.coords.push_back(ce.Vinv[j]);
  }
  return L;
}

// Sign of a rational.  Mixed Rational/int comparisons recurse in some boost
// versions under C++20, so rational signs go through the numerator.
inline int sgn(const Rational& q) { return q.numerator() > 0 ? 1 : (q.numerator() < 0 ? -1 : 0); }

inline Int floor_q(const Rational& q) {
  Int n = q.numerator(), d = q.denominator();  // d > 0
  Int f = n / d;
  if (n % d != 0 && n < 0) --f;
  return f;
}
inline Int ceil_q(const Rational& q) { return -floor_q(-q); }

// ---- formatting helpers -------------------------------------------------

inline std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << q.numerator();
  if (q.denominator() != 1) os << '/' << q.denominator();
  return os.str();
}

inline Rational parse_rational(const std::string& s) {
  auto bad = [&] { return ValidationError("not an exact rational: '" + s + "'"); };
  std::string t;
  for (char c : s)
    if (c != ' ') t.push_back(c);
  if (t.empty()) throw bad();
  auto slash = t.find('/');
  auto parse_int = [&](const std::string& part) -> Int {
    if (part.empty()) throw bad();
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(part, &pos);
    } catch (...) {
      throw bad();
    }
    if (pos != part.size()) throw bad();
    return static_cast<Int>(v);
  };
  if (slash == std::string::npos) return Rational(parse_int(t));
  Int p = parse_int(t.substr(0, slash));
  Int q = parse_int(t.substr(slash + 1));
  if (q == 0) throw bad();
  return Rational(p, q);
}

inline std::string vec_str(const IntVec& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

inline int popcount(EdgeSet s) { return __builtin_popcountll(s); }
inline bool has(EdgeSet s, std::size_t i) { return (s >> i) & 1u; }
inline EdgeSet bit(std::size_t i) { return EdgeSet(1) << i; }

}  // namespace tropabel
