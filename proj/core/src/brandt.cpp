#include "mulab/brandt.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mulab {

namespace {

using Vec4 = std::array<Int, 4>;

Vec4 get_col(const IntMat& m, long j) {
  return {m.at(0, j), m.at(1, j), m.at(2, j), m.at(3, j)};
}

long mod_ui(const Int& x, long m) {
  return static_cast<long>(mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(m)));
}

Int isqrt_exact(const Int& n) {
  if (n < 0) throw std::logic_error("square root of a negative integer");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  if (r * r != n) throw std::logic_error("integer is not a perfect square");
  return r;
}

Int abs_int(Int x) {
  if (x < 0) x = -x;
  return x;
}

// ---- arithmetic in the presentation basis 1, i, j, k = ij ----
// i^2 = a, j^2 = b, ji = -ij, so ik = aj, ki = -aj, jk = -bi, kj = bi,
// k^2 = -ab. Coordinates are numerators over a denominator the caller tracks.

Vec4 pmul(const QuaternionAlgebra& A, const Vec4& x, const Vec4& y) {
  const Int &a = A.a, &b = A.b;
  return {x[0] * y[0] + a * x[1] * y[1] + b * x[2] * y[2] - a * b * x[3] * y[3],
          x[0] * y[1] + x[1] * y[0] - b * x[2] * y[3] + b * x[3] * y[2],
          x[0] * y[2] + x[2] * y[0] + a * x[1] * y[3] - a * x[3] * y[1],
          x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1]};
}

Int pnrd(const QuaternionAlgebra& A, const Vec4& x) {
  return x[0] * x[0] - A.a * x[1] * x[1] - A.b * x[2] * x[2] +
         A.a * A.b * x[3] * x[3];
}

// Trd(x * conj(y)), the bilinear form of the norm
Int ppolar(const QuaternionAlgebra& A, const Vec4& x, const Vec4& y) {
  return 2 * (x[0] * y[0] - A.a * x[1] * y[1] - A.b * x[2] * y[2] +
              A.a * A.b * x[3] * y[3]);
}

QuatLattice lat_canon(const IntMat& cols, const Int& den) {
  IntMat h = hnf_columns(cols);
  if (h.rows() != 4 || h.cols() != 4)
    throw std::logic_error("quaternion lattice is not full rank");
  Int g = den;
  for (long i = 0; i < 4; ++i)
    for (long j = 0; j <= i; ++j) g = gcd(g, h.at(i, j));
  if (g > 1) {
    for (long i = 0; i < 4; ++i)
      for (long j = 0; j < 4; ++j) h.at(i, j) /= g;
  }
  QuatLattice L;
  L.basis = h;
  L.den = den / g;
  return L;
}

// one multiplicative-closure sweep; reports whether the span was already stable
bool pclosure_step(const QuaternionAlgebra& A, QuatLattice& L) {
  IntMat cols(4, 20);
  for (long j = 0; j < 4; ++j)
    for (long i = 0; i < 4; ++i) cols.at(i, j) = L.basis.at(i, j) * L.den;
  long c = 4;
  for (long u = 0; u < 4; ++u)
    for (long v = 0; v < 4; ++v, ++c) {
      Vec4 p = pmul(A, get_col(L.basis, u), get_col(L.basis, v));
      for (long i = 0; i < 4; ++i) cols.at(i, c) = p[i];
    }
  QuatLattice next = lat_canon(cols, L.den * L.den);
  bool stable = next.basis == L.basis && next.den == L.den;
  L = next;
  return stable;
}

bool pintegral(const QuaternionAlgebra& A, const QuatLattice& L) {
  Int d2 = L.den * L.den;
  for (long j = 0; j < 4; ++j) {
    Vec4 v = get_col(L.basis, j);
    if ((2 * v[0]) % L.den != 0) return false;
    if (pnrd(A, v) % d2 != 0) return false;
  }
  return true;
}

// A lattice that fails to close keeps deepening its denominator, and the
// entries square every sweep; bail on the first non-integral basis instead of
// riding that out.
bool pclose_ring(const QuaternionAlgebra& A, QuatLattice& L, int budget = 10) {
  Int cap = L.den * L.den;
  for (int i = 0; i < budget; ++i) {
    bool stable = pclosure_step(A, L);
    if (L.den > cap || !pintegral(A, L)) return false;
    if (stable) return true;
  }
  return false;
}

// reduced discriminant of an integral order
Int pdisc(const QuaternionAlgebra& A, const QuatLattice& L) {
  Int d2 = L.den * L.den;
  IntMat G(4, 4);
  for (long u = 0; u < 4; ++u)
    for (long v = 0; v < 4; ++v) {
      Int num = ppolar(A, get_col(L.basis, u), get_col(L.basis, v));
      if (num % d2 != 0) throw std::logic_error("trace pairing is not integral");
      G.at(u, v) = num / d2;
    }
  return isqrt_exact(abs_int(det(G)));
}

// Enlarges Z<1,i,j,k> until the reduced discriminant equals the target: at
// each step adjoin an integral element of (1/ell)O and close under products.
QuatLattice maximal_order(const QuaternionAlgebra& A) {
  QuatLattice O;
  O.basis = IntMat::identity(4);
  O.den = 1;
  if (!pclose_ring(A, O)) throw std::logic_error("seed order is broken");
  Int target(A.disc);
  Int d = pdisc(A, O);
  while (d != target) {
    if (d % target != 0)
      throw std::logic_error("order discriminant drifted off its target");
    long ell = static_cast<long>(factorize(d / target).front().first.get_si());
    bool grew = false;
    // candidates (sum_u c_u f_u)/ell, c projective with leading coefficient 1
    for (long lead = 0; lead < 4 && !grew; ++lead) {
      long total = 1;
      for (long u = lead + 1; u < 4; ++u) total *= ell;
      for (long t = 0; t < total && !grew; ++t) {
        std::array<long, 4> c{0, 0, 0, 0};
        c[lead] = 1;
        long rem = t;
        for (long u = lead + 1; u < 4; ++u) {
          c[u] = rem % ell;
          rem /= ell;
        }
        Vec4 num{0, 0, 0, 0};
        for (long u = 0; u < 4; ++u) {
          if (c[u] == 0) continue;
          for (long i = 0; i < 4; ++i) num[i] += Int(c[u]) * O.basis.at(i, u);
        }
        Int nden = O.den * ell;
        if ((2 * num[0]) % nden != 0) continue;
        if (pnrd(A, num) % (nden * nden) != 0) continue;
        {
          // trace-dual condition: Trd(x f_u) must be integral too
          bool dual = true;
          for (long u = 0; u < 4 && dual; ++u) {
            Vec4 fu = get_col(O.basis, u);
            dual = ppolar(A, num, {fu[0], -fu[1], -fu[2], -fu[3]}) %
                       (nden * O.den) ==
                   0;
          }
          if (!dual) continue;
        }
        IntMat cols(4, 5);
        for (long j = 0; j < 4; ++j)
          for (long i = 0; i < 4; ++i) cols.at(i, j) = O.basis.at(i, j) * ell;
        for (long i = 0; i < 4; ++i) cols.at(i, 4) = num[i];
        QuatLattice cand = lat_canon(cols, nden);
        if (cand.basis == O.basis && cand.den == O.den) continue;
        if (!pclose_ring(A, cand)) continue;
        Int nd = pdisc(A, cand);
        if (nd == d || nd % target != 0) continue;
        O = cand;
        d = nd;
        grew = true;
      }
    }
    if (!grew) throw std::logic_error("maximal order enlargement found no candidate");
  }
  return O;
}

// ---- element arithmetic in the coordinates of the maximal order ----

Vec4 emul(const BrandtModule& M, const Vec4& x, const Vec4& y) {
  Vec4 z{0, 0, 0, 0};
  for (long u = 0; u < 4; ++u) {
    if (x[u] == 0) continue;
    for (long w = 0; w < 4; ++w) {
      Int acc = 0;
      for (long v = 0; v < 4; ++v) acc += M.mult[u].at(w, v) * y[v];
      z[w] += x[u] * acc;
    }
  }
  return z;
}

Vec4 econj(const BrandtModule& M, const Vec4& x) {
  Vec4 z{0, 0, 0, 0};
  for (long w = 0; w < 4; ++w)
    for (long v = 0; v < 4; ++v) z[w] += M.conj_map.at(w, v) * x[v];
  return z;
}

Int enrd2(const BrandtModule& M, const Vec4& x) {  // 2 * Nrd
  Int s = 0;
  for (long u = 0; u < 4; ++u)
    for (long v = 0; v < 4; ++v) s += x[u] * M.gram.at(u, v) * x[v];
  return s;
}

QuatLattice lmul(const BrandtModule& M, const QuatLattice& A, const QuatLattice& B) {
  IntMat cols(4, 16);
  long c = 0;
  for (long u = 0; u < 4; ++u)
    for (long v = 0; v < 4; ++v, ++c) {
      Vec4 p = emul(M, get_col(A.basis, u), get_col(B.basis, v));
      for (long i = 0; i < 4; ++i) cols.at(i, c) = p[i];
    }
  return lat_canon(cols, A.den * B.den);
}

QuatLattice lmul_elem(const BrandtModule& M, const Vec4& xnum, const Int& xden,
                      const QuatLattice& B) {
  IntMat cols(4, 4);
  for (long v = 0; v < 4; ++v) {
    Vec4 p = emul(M, xnum, get_col(B.basis, v));
    for (long i = 0; i < 4; ++i) cols.at(i, v) = p[i];
  }
  return lat_canon(cols, xden * B.den);
}

QuatLattice lconj(const BrandtModule& M, const QuatLattice& L) {
  return lat_canon(M.conj_map * L.basis, L.den);
}

QuatLattice lscale(const QuatLattice& L, const Rat& s) {
  if (s <= 0) throw std::logic_error("lattice scale must be positive");
  return lat_canon(Int(s.get_num()) * L.basis, L.den * s.get_den());
}

Rat lat_nrd(const BrandtModule& M, const QuatLattice& L) {
  Int d4 = L.den * L.den;
  d4 = d4 * d4;
  Rat n2 = Rat(abs_int(det(L.basis))) / Rat(abs_int(det(M.order.basis)) * d4);
  return Rat(isqrt_exact(n2.get_num())) / Rat(isqrt_exact(n2.get_den()));
}

QuatLattice linv(const BrandtModule& M, const QuatLattice& I) {
  return lscale(lconj(M, I), Rat(1) / lat_nrd(M, I));
}

// ---- exact vector enumeration on the norm form ----

struct NormEnum {
  Rat d[4];
  Rat r[4][4];
  Int target;
  bool exists_only;
  long count = 0;
  bool found = false;
  Vec4 c{0, 0, 0, 0};
  Vec4 witness{0, 0, 0, 0};

  NormEnum(const IntMat& G, Int t, bool ex) : target(std::move(t)), exists_only(ex) {
    for (int i = 0; i < 4; ++i) {
      Rat di(G.at(i, i));
      for (int k = 0; k < i; ++k) di -= d[k] * r[k][i] * r[k][i];
      if (di <= 0) throw std::logic_error("norm form is not positive definite");
      d[i] = di;
      for (int j = i + 1; j < 4; ++j) {
        Rat v(G.at(i, j));
        for (int k = 0; k < i; ++k) v -= d[k] * r[k][i] * r[k][j];
        r[i][j] = v / di;
      }
    }
    descend(3, Rat(0));
  }

  void descend(int i, const Rat& used) {
    if (i < 0) {
      if (used == Rat(target)) {
        ++count;
        if (!found) {
          found = true;
          witness = c;
        }
      }
      return;
    }
    Rat mu(0);
    for (int j = i + 1; j < 4; ++j) mu += r[i][j] * Rat(c[j]);
    Int base = rat_floor(-mu);
    for (Int ci = base;; --ci) {
      Rat off = Rat(ci) + mu;
      Rat tot = used + d[i] * off * off;
      if (tot > Rat(target)) break;
      c[i] = ci;
      descend(i - 1, tot);
      if (found && exists_only) return;
    }
    for (Int ci = base + 1;; ++ci) {
      Rat off = Rat(ci) + mu;
      Rat tot = used + d[i] * off * off;
      if (tot > Rat(target)) break;
      c[i] = ci;
      descend(i - 1, tot);
      if (found && exists_only) return;
    }
  }
};

// #{x in L : Nrd(x) = t} for t > 0; witness (if asked) is returned as
// coordinate numerators over L.den
long norm_count(const BrandtModule& M, const QuatLattice& L, const Rat& t,
                bool exists_only = false, Vec4* witness = nullptr) {
  if (t <= 0) return 0;
  Rat tt = t * Rat(2 * L.den * L.den);
  if (tt.get_den() != 1) return 0;
  IntMat G = L.basis.transpose() * (M.gram * L.basis);
  NormEnum e(G, tt.get_num(), exists_only);
  if (witness != nullptr && e.found) {
    Vec4 x{0, 0, 0, 0};
    for (long i = 0; i < 4; ++i)
      for (long u = 0; u < 4; ++u) x[i] += L.basis.at(i, u) * e.witness[u];
    *witness = x;
  }
  return e.count;
}

// replace an ideal by x^{-1} I for a shortest vector x in it; keeps norms of
// class representatives bounded so later counting stays cheap
QuatLattice reduce_class(const BrandtModule& M, const QuatLattice& J) {
  Rat nj = lat_nrd(M, J);
  for (long k = 1; k <= 64; ++k) {
    Vec4 w;
    if (norm_count(M, J, nj * k, true, &w) > 0) {
      QuatLattice out = lmul_elem(M, econj(M, w), J.den, J);
      return lscale(out, Rat(1) / (nj * Rat(k)));
    }
  }
  throw std::logic_error("no short vector found in an ideal");
}

bool same_class(const BrandtModule& M, const QuatLattice& J, const Rat& nrd_j,
                const QuatLattice& R, const Rat& nrd_r) {
  return norm_count(M, lmul(M, J, linv(M, R)), nrd_j / nrd_r, true) > 0;
}

// the ell+1 right subideals of index ell^2 and norm ell * Nrd(I), ell prime
// to the level
std::vector<QuatLattice> neighbors(const BrandtModule& M, const QuatLattice& I,
                                   long ell) {
  // right action of the order basis in I's own coordinates, mod ell
  std::array<std::array<std::array<long, 4>, 4>, 4> R{};
  for (long w = 0; w < 4; ++w) {
    IntMat prods(4, 4);
    for (long v = 0; v < 4; ++v) {
      Vec4 p = emul(M, get_col(I.basis, v), get_col(M.order.basis, w));
      for (long i = 0; i < 4; ++i) prods.at(i, v) = p[i];
    }
    IntMat Z = coordinates_in_basis(I.basis, prods);
    for (long i = 0; i < 4; ++i)
      for (long v = 0; v < 4; ++v) R[w][i][v] = mod_ui(Z.at(i, v), ell);
  }

  std::vector<QuatLattice> out;
  Rat nrd_i = lat_nrd(M, I);
  // canonical two-row echelon bases of the 2-dimensional subspaces of F_ell^4
  for (long j1 = 0; j1 < 4; ++j1)
    for (long j2 = j1 + 1; j2 < 4; ++j2) {
      std::array<long, 4> free1{}, free2{};
      long n1 = 0, n2 = 0;
      for (long j = 0; j < 4; ++j) {
        if (j == j1 || j == j2) continue;
        if (j > j1) free1[n1++] = j;
        if (j > j2) free2[n2++] = j;
      }
      long total = 1;
      for (long t = 0; t < n1 + n2; ++t) total *= ell;
      for (long t = 0; t < total; ++t) {
        std::array<long, 4> r1{0, 0, 0, 0}, r2{0, 0, 0, 0};
        r1[j1] = 1;
        r2[j2] = 1;
        long rem = t;
        for (long u = 0; u < n1; ++u) {
          r1[free1[u]] = rem % ell;
          rem /= ell;
        }
        for (long u = 0; u < n2; ++u) {
          r2[free2[u]] = rem % ell;
          rem /= ell;
        }
        auto member = [&](const std::array<long, 4>& x) {
          std::array<long, 4> y = x;
          for (long s = 0; s < 4; ++s)
            y[s] = ((y[s] - x[j1] * r1[s] - x[j2] * r2[s]) % ell + ell) % ell;
          return y[0] == 0 && y[1] == 0 && y[2] == 0 && y[3] == 0;
        };
        bool stable = true;
        for (long w = 0; w < 4 && stable; ++w) {
          for (const auto& v : {r1, r2}) {
            std::array<long, 4> y{0, 0, 0, 0};
            for (long s = 0; s < 4; ++s) {
              long acc = 0;
              for (long u = 0; u < 4; ++u) acc += R[w][s][u] * v[u];
              y[s] = acc % ell;
            }
            if (!member(y)) {
              stable = false;
              break;
            }
          }
        }
        if (!stable) continue;
        IntMat cols(4, 6);
        for (long j = 0; j < 4; ++j)
          for (long i = 0; i < 4; ++i) cols.at(i, j) = I.basis.at(i, j) * ell;
        for (long i = 0; i < 4; ++i) {
          Int a = 0, b = 0;
          for (long u = 0; u < 4; ++u) {
            a += I.basis.at(i, u) * r1[u];
            b += I.basis.at(i, u) * r2[u];
          }
          cols.at(i, 4) = a;
          cols.at(i, 5) = b;
        }
        QuatLattice J = lat_canon(cols, I.den);
        if (lat_nrd(M, J) != nrd_i * ell)
          throw std::logic_error("neighbor norm is off");
        out.push_back(J);
      }
    }
  if (static_cast<long>(out.size()) != ell + 1)
    throw std::logic_error("neighbor count is off");
  return out;
}

Vec4 split_idempotent(const BrandtModule& M, long q) {
  Vec4 one = get_col(M.unit, 0);
  if (q == 2) {
    for (long code = 1; code < 16; ++code) {
      Vec4 u{Int((code >> 0) & 1), Int((code >> 1) & 1), Int((code >> 2) & 1),
             Int((code >> 3) & 1)};
      Vec4 sq = emul(M, u, u);
      bool idem = true, zero = true, unit = true;
      for (long i = 0; i < 4; ++i) {
        if (mod_ui(sq[i] - u[i], 2) != 0) idem = false;
        if (mod_ui(u[i], 2) != 0) zero = false;
        if (mod_ui(u[i] - one[i], 2) != 0) unit = false;
      }
      if (idem && !zero && !unit) return u;
    }
    throw std::logic_error("no split idempotent mod 2");
  }
  std::vector<Int> trd(4);
  for (long u = 0; u < 4; ++u) {
    trd[u] = 0;
    for (long w = 0; w < 4; ++w) trd[u] += M.gram.at(u, w) * one[w];
  }
  for (long code = 1; code < q * q * q * q; ++code) {
    std::array<long, 4> cs{};
    long rem = code;
    for (long u = 0; u < 4; ++u) {
      cs[u] = rem % q;
      rem /= q;
    }
    Vec4 u{Int(cs[0]), Int(cs[1]), Int(cs[2]), Int(cs[3])};
    long t = 0, n = mod_ui(enrd2(M, u) / 2, q);
    for (long s = 0; s < 4; ++s) t = (t + cs[s] * mod_ui(trd[s], q)) % q;
    long disc = ((t * t - 4 * n) % q + q) % q;
    if (disc == 0 || kronecker_symbol(Int(disc), Int(q)) != 1) continue;
    long s = 0;
    while (s < q && (s * s) % q != disc) ++s;
    long inv2 = modp::inv(2, q);
    long lam = (t + s) % q * inv2 % q;
    long mu = ((t - s) % q + q) % q * inv2 % q;
    long scale = modp::inv(((lam - mu) % q + q) % q, q);
    Vec4 e;
    for (long i = 0; i < 4; ++i)
      e[i] = Int(mod_ui(u[i] - Int(mu) * one[i], q) * scale % q);
    Vec4 sq = emul(M, e, e);
    for (long i = 0; i < 4; ++i)
      if (mod_ui(sq[i] - e[i], q) != 0)
        throw std::logic_error("split element is not idempotent");
    return e;
  }
  throw std::logic_error("no split element mod q");
}

// intersect with the preimage of the upper-triangular matrices under the
// splitting at each prime dividing n_plus
QuatLattice eichler_order(const BrandtModule& M, long np) {
  QuatLattice L;
  L.basis = IntMat::identity(4);
  L.den = 1;
  if (np == 1) return L;
  Vec4 one = get_col(M.unit, 0);
  for (long q : prime_factors_squarefree(np)) {
    Vec4 e = split_idempotent(M, q);
    Vec4 f;
    for (long i = 0; i < 4; ++i) f[i] = one[i] - e[i];
    std::vector<std::vector<long>> W(4, std::vector<long>(4));
    for (long v = 0; v < 4; ++v) {
      Vec4 t = emul(M, f, emul(M, get_col(L.basis, v), e));
      for (long i = 0; i < 4; ++i) W[i][v] = mod_ui(t[i], q);
    }
    auto K = modp::kernel(W, q);
    if (K.size() != 3)
      throw std::logic_error("local splitting produced the wrong condition rank");
    IntMat sub(4, 7);
    for (size_t tcol = 0; tcol < K.size(); ++tcol)
      for (long i = 0; i < 4; ++i) sub.at(i, tcol) = K[tcol][i];
    for (long j = 0; j < 4; ++j)
      for (long i = 0; i < 4; ++i) sub.at(i, 3 + j) = (i == j) ? Int(q) : Int(0);
    IntMat red = hnf_columns(sub);
    QuatLattice next = lat_canon(L.basis * red, L.den);
    if (abs_int(det(next.basis)) != abs_int(det(L.basis)) * q)
      throw std::logic_error("level condition has the wrong index");
    L = next;
  }
  return L;
}

Rat mass_target(long np, long nm) {
  Rat m = Rat(1) / Rat(12);
  for (long q : prime_factors_squarefree(nm)) m *= Rat(q - 1);
  if (np > 1)
    for (long q : prime_factors_squarefree(np)) m *= Rat(q + 1);
  return m;
}

void certify_ramification(const QuaternionAlgebra& alg) {
  if (alg.a >= 0 || alg.b >= 0)
    throw std::invalid_argument("structure constants must be negative");
  for (auto& [p, e] : factorize(2 * alg.a * alg.b * alg.disc)) {
    bool want = Int(alg.disc) % p == 0;
    bool got = hilbert_symbol(alg.a, alg.b, p.get_si()) == -1;
    if (want != got)
      throw std::invalid_argument("structure constants have the wrong ramification");
  }
}

std::vector<std::pair<long, Int>> packet_ops(const BrandtModule& M,
                                             const EigenformPacket& f) {
  long N = M.n_plus * M.n_minus;
  if (f.N != N) throw std::runtime_error("JL transfer failed");
  std::vector<std::pair<long, Int>> ops;
  for (long q : prime_factors_squarefree(N)) ops.push_back({q, f.uq.at(q)});
  for (long ell : primes_up_to(sturm_bound(N).bound))
    if (N % ell != 0) ops.push_back({ell, f.a.at(ell)});
  return ops;
}

}  // namespace

long hilbert_symbol(const Int& a, const Int& b, long v) {
  if (a == 0 || b == 0)
    throw std::invalid_argument("hilbert symbol needs nonzero arguments");
  if (v == 0) return (a < 0 && b < 0) ? -1 : 1;
  if (v < 2 || !is_prime(Int(v)))
    throw std::invalid_argument("hilbert symbol place must be prime or 0");
  Int u = a, w = b;
  long alpha = 0, beta = 0;
  while (u % v == 0) {
    u /= v;
    ++alpha;
  }
  while (w % v == 0) {
    w /= v;
    ++beta;
  }
  auto eps = [](const Int& x) { return mod_ui(x - 1, 4) / 2; };
  if (v == 2) {
    auto omega = [](const Int& x) {
      long m = mod_ui(x, 8);
      return (m == 3 || m == 5) ? 1L : 0L;
    };
    long e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u);
    return e % 2 == 0 ? 1 : -1;
  }
  long s = 1;
  if (beta % 2 != 0) s *= kronecker_symbol(u, Int(v));
  if (alpha % 2 != 0) s *= kronecker_symbol(w, Int(v));
  if ((alpha * beta) % 2 != 0 && eps(Int(v)) == 1) s = -s;
  return s;
}

QuaternionAlgebra quaternion_algebra(long n_minus) {
  auto qs = prime_factors_squarefree(n_minus);
  if (n_minus < 2 || qs.size() % 2 == 0)
    throw std::invalid_argument(
        "discriminant must be squarefree with an odd number of prime factors");
  for (long tot = 2; tot <= 128; ++tot)
    for (long aa = 1; aa < tot; ++aa) {
      long m = tot - aa;
      QuaternionAlgebra alg;
      alg.disc = n_minus;
      alg.a = -aa;
      alg.b = Int(-m) * n_minus;
      try {
        certify_ramification(alg);
      } catch (const std::invalid_argument&) {
        continue;
      }
      return alg;
    }
  throw std::logic_error("no small definite presentation found");
}

BrandtModule ideal_class_module(long n_plus, long n_minus,
                                const QuaternionAlgebra& alg) {
  if (n_plus < 1 || n_minus < 2)
    throw std::invalid_argument("level factors out of range");
  auto qminus = prime_factors_squarefree(n_minus);
  if (n_plus > 1) prime_factors_squarefree(n_plus);
  if (qminus.size() % 2 == 0)
    throw std::invalid_argument(
        "definite side needs an odd number of prime factors");
  if (std::gcd(n_plus, n_minus) != 1)
    throw std::invalid_argument("level factors must be coprime");
  if (alg.disc != n_minus)
    throw std::invalid_argument("algebra does not match the discriminant");
  certify_ramification(alg);

  BrandtModule M;
  M.n_plus = n_plus;
  M.n_minus = n_minus;
  M.alg = alg;

  QuatLattice O = maximal_order(alg);

  // structure tables in the basis of O; every divisibility check here is a
  // certificate that O really is an order
  Int den = O.den, d2 = den * den;
  for (long u = 0; u < 4; ++u) {
    IntMat P(4, 4);
    for (long v = 0; v < 4; ++v) {
      Vec4 p = pmul(alg, get_col(O.basis, u), get_col(O.basis, v));
      for (long i = 0; i < 4; ++i) {
        if (p[i] % den != 0) throw std::logic_error("order is not closed");
        P.at(i, v) = p[i] / den;
      }
    }
    M.mult[u] = coordinates_in_basis(O.basis, P);
  }
  {
    IntMat C(4, 4);
    for (long v = 0; v < 4; ++v) {
      Vec4 x = get_col(O.basis, v);
      C.at(0, v) = x[0];
      for (long i = 1; i < 4; ++i) C.at(i, v) = -x[i];
    }
    M.conj_map = coordinates_in_basis(O.basis, C);
    IntMat G(4, 4);
    for (long u = 0; u < 4; ++u)
      for (long v = 0; v < 4; ++v) {
        Int num = ppolar(alg, get_col(O.basis, u), get_col(O.basis, v));
        if (num % d2 != 0) throw std::logic_error("trace pairing is not integral");
        G.at(u, v) = num / d2;
      }
    M.gram = G;
    IntMat one(4, 1);
    one.at(0, 0) = den;
    M.unit = coordinates_in_basis(O.basis, one);
    if (abs_int(det(G)) != Int(n_minus) * n_minus)
      throw std::logic_error("order is not maximal");
  }

  M.order = eichler_order(M, n_plus);
  {
    // ring checks for the level order: closed, unital, right discriminant
    IntMat prods(4, 16);
    long c = 0;
    for (long u = 0; u < 4; ++u)
      for (long v = 0; v < 4; ++v, ++c) {
        Vec4 p = emul(M, get_col(M.order.basis, u), get_col(M.order.basis, v));
        for (long i = 0; i < 4; ++i) prods.at(i, c) = p[i];
      }
    coordinates_in_basis(M.order.basis, prods);
    coordinates_in_basis(M.order.basis, M.unit);
    IntMat G0 = M.order.basis.transpose() * (M.gram * M.order.basis);
    Int lvl = Int(n_minus) * n_plus;
    if (abs_int(det(G0)) != lvl * lvl)
      throw std::logic_error("level order has the wrong discriminant");
  }

  // class-set walk along the prime-neighbor graph, mass as the certificate
  long N = n_plus * n_minus;
  long ell = 2;
  while (N % ell == 0 || !is_prime(Int(ell))) ++ell;
  Rat target = mass_target(n_plus, n_minus);
  std::vector<QuatLattice> cls{M.order};
  std::vector<Rat> nrds{Rat(1)};
  long cnt0 = norm_count(M, M.order, Rat(1));
  if (cnt0 <= 0 || cnt0 % 2 != 0) throw std::logic_error("unit count is odd");
  std::vector<long> ws{cnt0 / 2};
  Rat mass = Rat(1) / Rat(ws[0]);
  for (size_t t = 0; t < cls.size() && mass != target; ++t) {
    for (QuatLattice J : neighbors(M, cls[t], ell)) {
      J = reduce_class(M, J);
      Rat nj = lat_nrd(M, J);
      bool known = false;
      for (size_t k = 0; k < cls.size() && !known; ++k)
        known = same_class(M, J, nj, cls[k], nrds[k]);
      if (known) continue;
      QuatLattice OL = lmul(M, J, linv(M, J));
      if (lat_nrd(M, OL) != 1) throw std::logic_error("left order has nonunit norm");
      coordinates_in_basis(OL.basis, OL.den * M.unit);
      long cnt = norm_count(M, OL, Rat(1));
      if (cnt <= 0 || cnt % 2 != 0) throw std::logic_error("unit count is odd");
      cls.push_back(J);
      nrds.push_back(nj);
      ws.push_back(cnt / 2);
      mass += Rat(1) / Rat(cnt / 2);
      if (mass > target) throw std::logic_error("mass exceeded its target");
      if (mass == target) break;
    }
  }
  if (mass != target) throw std::runtime_error("class set incomplete");
  M.classes = cls;
  M.weights = ws;
  return M;
}

BrandtModule ideal_class_module(long n_plus, long n_minus) {
  return ideal_class_module(n_plus, n_minus, quaternion_algebra(n_minus));
}

const IntMat& brandt_matrix(BrandtModule& M, long n) {
  if (n < 1) throw std::invalid_argument("operator index must be positive");
  auto it = M.cache.find(n);
  if (it != M.cache.end()) return it->second;
  long N = M.n_plus * M.n_minus;
  if (std::gcd(n, M.n_minus) != 1 && !(is_prime(Int(n)) && N % n == 0))
    throw std::invalid_argument(
        "operator index meets the discriminant but is not a level prime");

  long h = static_cast<long>(M.classes.size());
  std::vector<QuatLattice> inv;
  std::vector<Rat> nrd;
  inv.reserve(h);
  for (long j = 0; j < h; ++j) {
    inv.push_back(linv(M, M.classes[j]));
    nrd.push_back(lat_nrd(M, M.classes[j]));
  }
  IntMat B(h, h);
  for (long i = 0; i < h; ++i)
    for (long j = i; j < h; ++j) {
      QuatLattice L = lmul(M, M.classes[i], inv[j]);
      long cnt = norm_count(M, L, Rat(n) * nrd[i] / nrd[j]);
      if (cnt % (2 * M.weights[i]) != 0)
        throw std::logic_error("orbit count is not divisible by the unit order");
      B.at(i, j) = cnt / (2 * M.weights[i]);
      if (j > i) {
        // weighted self-adjointness fixes the mirror entry
        Int mirror = Int(M.weights[i]) * B.at(i, j);
        if (mirror % M.weights[j] != 0)
          throw std::logic_error("pairing symmetry fails on an entry");
        B.at(j, i) = mirror / M.weights[j];
      }
    }
  return M.cache.emplace(n, std::move(B)).first->second;
}

DefiniteEigenvector definite_eigenvector(BrandtModule& M, const EigenformPacket& f) {
  auto ops = packet_ops(M, f);
  long h = static_cast<long>(M.classes.size());
  IntMat stack(0, h);
  for (auto& [idx, a] : ops)
    stack = vstack(stack, brandt_matrix(M, idx) - a * IntMat::identity(h));
  IntMat K = kernel_saturated(stack);
  if (K.cols() == 0) throw std::runtime_error("JL transfer failed");
  if (K.cols() > 1)
    throw std::logic_error("transferred eigenspace has excess multiplicity");

  DefiniteEigenvector g;
  g.packet = packet_label(f);
  g.weights = M.weights;
  g.g.resize(h);
  for (long i = 0; i < h; ++i) g.g[i] = K.at(i, 0);
  Int content = 0;
  for (auto& x : g.g) content = gcd(content, x);
  if (content != 1) throw std::logic_error("eigenvector is not primitive");
  for (auto& x : g.g) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : g.g) y = -y;
    break;
  }
  for (auto& [idx, a] : ops) {
    const IntMat& A = brandt_matrix(M, idx);
    std::vector<Int> img = mat_vec(A, g.g);
    for (long i = 0; i < h; ++i)
      if (img[i] != a * g.g[i])
        throw std::logic_error("eigenvalue certificate failed");
    g.certified[idx] = a;
  }
  return g;
}

long xi_exponent(const DefiniteEigenvector& g, long p) {
  if (p < 2 || !is_prime(Int(p))) throw std::invalid_argument("p must be prime");
  if (g.g.size() != g.weights.size() || g.g.empty())
    throw std::invalid_argument("eigenvector carries no pairing data");
  Int s = 0;
  for (size_t i = 0; i < g.g.size(); ++i) s += Int(g.weights[i]) * g.g[i] * g.g[i];
  return padic_valuation_finite(s, Int(p));
}

bool unit_pairing_check(const BrandtModule& M, const DefiniteEigenvector& g, long p) {
  if (p < 2 || !is_prime(Int(p))) throw std::invalid_argument("p must be prime");
  if (g.g.size() != M.classes.size())
    throw std::invalid_argument("eigenvector does not belong to the module");
  for (size_t i = 0; i < g.g.size(); ++i)
    if (mod_ui(Int(M.weights[i]) * g.g[i], p) != 0) return true;
  return false;
}

bool freeness_check(BrandtModule& M, const EigenformPacket& f, long p) {
  if (p < 2 || !is_prime(Int(p))) throw std::invalid_argument("p must be prime");
  auto ops = packet_ops(M, f);
  long h = static_cast<long>(M.classes.size());
  std::vector<std::vector<long>> rows;
  for (auto& [idx, a] : ops) {
    const IntMat& A = brandt_matrix(M, idx);
    long am = mod_ui(a, p);
    for (long r = 0; r < h; ++r) {
      std::vector<long> row(h);
      for (long c = 0; c < h; ++c)
        row[c] = (mod_ui(A.at(r, c), p) + (r == c ? p - am : 0)) % p;
      rows.push_back(std::move(row));
    }
  }
  long rk = modp::echelon(rows, p);
  return h - rk == 1;
}

}  // namespace mulab
