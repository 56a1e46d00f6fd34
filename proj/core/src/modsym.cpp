#include "mulab/modsym.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mulab {

namespace {

long mod_pos(long x, long n) {
  long r = x % n;
  return r < 0 ? r + n : r;
}

// a*x + b*y = gcd(a,b) >= 0
long exgcd(long a, long b, long& x, long& y) {
  if (b == 0) {
    x = a < 0 ? -1 : 1;
    y = 0;
    return std::abs(a);
  }
  long x1, y1;
  long g = exgcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

Int fdiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

long mod_ui(const Int& x, long n) {
  return static_cast<long>(mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(n)));
}

Int poly_eval(const std::vector<Int>& c, const Int& a) {
  Int v = 0;
  for (size_t i = c.size(); i-- > 0;) v = v * a + c[i];
  return v;
}

// divide by (x - a); caller guarantees a is a root
std::vector<Int> poly_deflate(const std::vector<Int>& c, const Int& a) {
  size_t deg = c.size() - 1;
  std::vector<Int> q(deg);
  q[deg - 1] = c[deg];
  for (size_t j = deg - 1; j-- > 0;) q[j] = c[j + 1] + a * q[j + 1];
  return q;
}

IntMat poly_at_matrix(const std::vector<Int>& c, const IntMat& A) {
  long k = A.rows();
  IntMat R = c.back() * IntMat::identity(k);
  for (size_t i = c.size() - 1; i-- > 0;) {
    R = R * A;
    for (long t = 0; t < k; ++t) R.at(t, t) += c[i];
  }
  return R;
}

bool is_scalar(const IntMat& A, Int* value) {
  long k = A.rows();
  if (k == 0) return false;
  Int c0 = A.at(0, 0);
  for (long i = 0; i < k; ++i)
    for (long j = 0; j < k; ++j)
      if (A.at(i, j) != (i == j ? c0 : Int(0))) return false;
  if (value) *value = c0;
  return true;
}

IntMat inverse_unimodular(const IntMat& U) {
  long n = U.rows();
  RatMat I(n, n);
  for (long i = 0; i < n; ++i) I.at(i, i) = 1;
  RatMat X = solve_right(to_rat(U), I);
  IntMat out(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      const Rat& v = X.at(i, j);
      if (v.get_den() != 1) throw std::logic_error("inverse_unimodular: fractional entry");
      out.at(i, j) = v.get_num();
    }
  return out;
}

IntMat submatrix_rows(const IntMat& A, long from) {
  IntMat out(A.rows() - from, A.cols());
  for (long i = from; i < A.rows(); ++i)
    for (long j = 0; j < A.cols(); ++j) out.at(i - from, j) = A.at(i, j);
  return out;
}

IntMat submatrix_cols(const IntMat& A, long from) {
  IntMat out(A.rows(), A.cols() - from);
  for (long i = 0; i < A.rows(); ++i)
    for (long j = from; j < A.cols(); ++j) out.at(i, j - from) = A.at(i, j);
  return out;
}

std::pair<long, long> cusp_norm(long p, long q) {
  if (q == 0) return {1, 0};
  if (q < 0) {
    p = -p;
    q = -q;
  }
  long g = std::gcd(std::abs(p), q);
  if (g > 1) {
    p /= g;
    q /= g;
  }
  return {p, q};
}

bool cusp_equiv(std::pair<long, long> c1, std::pair<long, long> c2, long N) {
  auto inv_mod = [](long p, long q) -> long {
    if (q == 0) return 1;  // normalized infinity is 1/0
    if (q == 1) return 0;
    long x, y;
    exgcd(mod_pos(p, q), q, x, y);
    return mod_pos(x, q);
  };
  long s1 = inv_mod(c1.first, c1.second);
  long s2 = inv_mod(c2.first, c2.second);
  long long g = std::gcd(static_cast<long long>(c1.second) * c2.second,
                         static_cast<long long>(N));
  long long diff = static_cast<long long>(s1) * c2.second -
                   static_cast<long long>(s2) * c1.second;
  return diff % g == 0;
}

long weil_range(long n) {
  long w = static_cast<long>(std::floor(2.0 * std::sqrt(static_cast<double>(n))));
  while ((w + 1) * (w + 1) <= 4 * n) ++w;
  while (w > 0 && w * w > 4 * n) --w;
  return w;
}

std::vector<long> splitting_operators(long N) {
  std::vector<long> ops = prime_factors_squarefree(N);
  long B = sturm_bound(N).bound;
  for (long ell : primes_up_to(B))
    if (N % ell != 0) ops.push_back(ell);
  return ops;
}

}  // namespace

SturmBound sturm_bound(long N) {
  if (N < 1) throw std::invalid_argument("sturm_bound: N must be positive");
  Int num = N;
  Int den = 6;
  for (const auto& [p, e] : factorize(Int(N))) {
    num *= p + 1;
    den *= p;
  }
  Int b = fdiv(num + den - 1, den);
  return SturmBound{N, b.get_si()};
}

long ModSymSpace::p1_index(long c, long d) const {
  return p1_table_[mod_pos(c, N) * N + mod_pos(d, N)];
}

ModSymSpace build_space(long N) {
  if (N < 1 || !is_squarefree(Int(N)))
    throw std::invalid_argument("build_space: level must be positive and squarefree");
  ModSymSpace S;
  S.N = N;

  // P^1(Z/N), each class keyed by its lexicographically smallest representative
  S.p1_table_.assign(static_cast<size_t>(N) * N, -1);
  if (N == 1) {
    S.symbols = {{0, 0}};
    S.p1_table_[0] = 0;
  } else {
    std::vector<long> units;
    for (long u = 1; u < N; ++u)
      if (std::gcd(u, N) == 1) units.push_back(u);
    std::map<std::pair<long, long>, long> seen;
    for (long c = 0; c < N; ++c)
      for (long d = 0; d < N; ++d) {
        if (std::gcd(std::gcd(c, d), N) != 1) continue;
        std::pair<long, long> best{N, N};
        for (long u : units)
          best = std::min(best, std::make_pair(c * u % N, d * u % N));
        auto [it, fresh] = seen.emplace(best, static_cast<long>(S.symbols.size()));
        if (fresh) S.symbols.push_back(best);
        S.p1_table_[c * N + d] = it->second;
      }
  }
  long nsym = static_cast<long>(S.symbols.size());

  // lift each (c:d) to a matrix (a,b;c0,d0) in SL_2(Z)
  for (auto [c, d] : S.symbols) {
    if (N == 1 || c % N == 0) {
      S.lifts.push_back({1, 0, 0, 1});
      continue;
    }
    long c0 = c;
    long d0 = -1;
    for (long k = 0; k <= c0; ++k) {
      if (std::gcd(c0, d + k * N) == 1) {
        d0 = d + k * N;
        break;
      }
    }
    if (d0 < 0) throw std::logic_error("build_space: no coprime lift found");
    long x, y;
    exgcd(d0, c0, x, y);  // x*d0 + y*c0 = 1
    S.lifts.push_back({x, -y, c0, d0});
  }

  // relations: [x] + [xS] = 0 and [x] + [xT] + [xT^2] = 0
  // with (c:d)S = (d:-c), (c:d)T = (d:-c-d)
  std::vector<std::map<long, long>> rows;
  std::vector<char> seen_s(nsym, 0), seen_t(nsym, 0);
  for (long i = 0; i < nsym; ++i) {
    if (seen_s[i]) continue;
    auto [c, d] = S.symbols[i];
    long j = S.p1_index(d, -c);
    std::map<long, long> row;
    row[i] += 1;
    row[j] += 1;
    rows.push_back(row);
    seen_s[i] = seen_s[j] = 1;
  }
  for (long i = 0; i < nsym; ++i) {
    if (seen_t[i]) continue;
    auto [c, d] = S.symbols[i];
    long j = S.p1_index(d, -c - d);
    auto [c2, d2] = S.symbols[j];
    long k = S.p1_index(d2, -c2 - d2);
    std::map<long, long> row;
    row[i] += 1;
    row[j] += 1;
    row[k] += 1;
    rows.push_back(row);
    seen_t[i] = seen_t[j] = seen_t[k] = 1;
  }
  S.relations = IntMat(static_cast<long>(rows.size()), nsym);
  for (long r = 0; r < S.relations.rows(); ++r)
    for (auto& [j, v] : rows[r]) S.relations.at(r, j) = v;

  S.dual_basis = kernel_saturated(S.relations);
  long m = S.dual_basis.cols();
  S.full_dim = m;

  // cusp classes and the boundary functionals
  IntMat Dm(nsym, 0);
  std::vector<std::pair<long, long>> reps;
  auto cusp_index = [&](long p, long q) -> long {
    auto c = cusp_norm(p, q);
    for (size_t t = 0; t < reps.size(); ++t)
      if (cusp_equiv(reps[t], c, N)) return static_cast<long>(t);
    reps.push_back(c);
    return static_cast<long>(reps.size()) - 1;
  };
  std::vector<std::pair<long, long>> delta(nsym);  // (cusp of g.inf, cusp of g.0)
  for (long i = 0; i < nsym; ++i) {
    const auto& L = S.lifts[i];
    delta[i] = {cusp_index(L[0], L[2]), cusp_index(L[1], L[3])};
  }
  long ncusp = static_cast<long>(reps.size());
  S.cusps = reps;
  Dm = IntMat(nsym, ncusp);
  for (long i = 0; i < nsym; ++i) {
    Dm.at(i, delta[i].first) += 1;
    Dm.at(i, delta[i].second) -= 1;
  }
  {
    IntMat chk = S.relations * Dm;
    for (long i = 0; i < chk.rows(); ++i)
      for (long j = 0; j < chk.cols(); ++j)
        if (chk.at(i, j) != 0)
          throw std::logic_error("build_space: boundary not relation-invariant");
  }

  if (m == 0) {
    S.boundary = IntMat(0, ncusp);
    S.proj = IntMat(0, 0);
    S.section = IntMat(0, 0);
    S.cusp_dim = 0;
    S.genus = 0;
    return S;
  }

  S.boundary = coordinates_in_basis(S.dual_basis, Dm);  // m x ncusp

  long r = 0;
  if (ncusp <= 1) {
    S.proj = IntMat::identity(m);
    S.section = IntMat::identity(m);
  } else {
    IntMat Er = row_saturation(S.boundary.transpose());  // (ncusp-1) x m
    r = Er.rows();
    if (r != ncusp - 1)
      throw std::logic_error("build_space: boundary rank is not #cusps - 1");
    SmithForm sf = smith_normal_form(Er.transpose());
    for (const Int& d : sf.divisors())
      if (d != 1) throw std::logic_error("build_space: boundary image not saturated");
    S.proj = submatrix_rows(sf.U, r);
    S.section = submatrix_cols(inverse_unimodular(sf.U), r);
  }
  S.cusp_dim = m - r;
  if (S.cusp_dim % 2 != 0)
    throw std::logic_error("build_space: cuspidal dimension must be even");
  S.genus = S.cusp_dim / 2;
  return S;
}

IntMat hecke_operator(const ModSymSpace& S, long n) {
  if (n < 1) throw std::invalid_argument("hecke_operator: index must be positive");
  long s = S.cusp_dim;
  if (s == 0) return IntMat(0, 0);
  long N = S.N;
  long nsym = static_cast<long>(S.symbols.size());
  long m = S.full_dim;

  std::vector<std::array<long, 3>> mats;  // (a, b; 0, d), ad = n, 0 <= b < d
  for (long a = 1; a <= n; ++a) {
    if (n % a != 0 || std::gcd(a, N) != 1) continue;
    long d = n / a;
    for (long b = 0; b < d; ++b) mats.push_back({a, b, d});
  }

  IntMat PK(nsym, m);
  for (long i = 0; i < nsym; ++i) {
    std::map<long, long> coeffs;
    auto add_inf_chain = [&](Int p, Int q, int sgn) {
      // {infinity, p/q} as a sum of Manin symbols via continued fractions
      if (q == 0) return;
      if (q < 0) {
        p = -p;
        q = -q;
      }
      Int qm2 = 1, qm1 = 0;
      Int num = p, den = q;
      long k = 0;
      while (den != 0) {
        Int a = fdiv(num, den);
        Int qk = a * qm1 + qm2;
        Int cs = (k % 2 == 1) ? qk : Int(-qk);
        long idx = S.p1_index(mod_ui(cs, N), mod_ui(qm1, N));
        coeffs[idx] += sgn;
        qm2 = qm1;
        qm1 = qk;
        Int rr = num - a * den;
        num = den;
        den = rr;
        ++k;
      }
    };
    const auto& L = S.lifts[i];  // path {b/d, a/c}
    for (const auto& M : mats) {
      Int bn = Int(M[0]) * L[0] + Int(M[1]) * L[2];
      Int bd = Int(M[2]) * L[2];
      Int an = Int(M[0]) * L[1] + Int(M[1]) * L[3];
      Int ad = Int(M[2]) * L[3];
      add_inf_chain(bn, bd, +1);
      add_inf_chain(an, ad, -1);
    }
    for (auto& [j, cf] : coeffs) {
      if (cf == 0) continue;
      for (long t = 0; t < m; ++t)
        PK.at(i, t) += Int(cf) * S.dual_basis.at(j, t);
    }
  }
  IntMat Bm = coordinates_in_basis(S.dual_basis, PK);
  return S.proj * Bm * S.section;
}

std::vector<HeckeBlock> isotypic_blocks(const ModSymSpace& S) {
  std::vector<HeckeBlock> blocks;
  long s = S.cusp_dim;
  if (s == 0) return blocks;

  // Each isotypic piece is cut out as the simultaneous kernel of one
  // charpoly factor per splitting operator, all expressed in the coordinates
  // of the full cuspidal lattice.  Restricting operators to intermediate
  // pieces instead would compound saturated kernel bases into badly skew
  // lattices (kilobit entries by the third split) and everything downstream
  // pays for that.  The refinement below tracks piece dimensions mod a large
  // prime, which can only overcount, so a vanishing modular dimension is a
  // sound reason to discard a factor combination; the exact kernels at the
  // end settle the rest, certified by the dimension count.
  constexpr long P = 1'000'000'007;
  std::vector<std::pair<long, IntMat>> action;
  std::vector<IntMat> factors;
  std::vector<std::vector<std::vector<long>>> factors_p;  // row-major mod P
  struct Piece {
    std::vector<long> cut;                  // indices into factors
    std::vector<std::vector<long>> span_p;  // mod-P basis, columns of length s
  };
  std::vector<Piece> pieces(1);
  pieces[0].span_p.assign(s, std::vector<long>(s));
  for (long i = 0; i < s; ++i) pieces[0].span_p[i][i] = 1;

  for (long n : splitting_operators(S.N)) {
    const IntMat& T = action.emplace_back(n, hecke_operator(S, n)).second;
    std::vector<Int> res = charpoly(T);
    std::vector<long> cur;
    long w = weil_range(n);
    for (long a = -w; a <= w; ++a) {
      bool hit = false;
      while (res.size() > 1 && poly_eval(res, a) == 0) {
        res = poly_deflate(res, a);
        hit = true;
      }
      if (hit) {
        cur.push_back(factors.size());
        factors.push_back(T - a * IntMat::identity(s));
      }
    }
    if (res.size() > 1) {
      if (cur.empty()) continue;  // full charpoly: zero matrix by Cayley-Hamilton
      cur.push_back(factors.size());
      factors.push_back(poly_at_matrix(res, T));
    }
    for (size_t fi = factors_p.size(); fi < factors.size(); ++fi) {
      auto& Fp = factors_p.emplace_back(s, std::vector<long>(s));
      for (long i = 0; i < s; ++i)
        for (long j = 0; j < s; ++j)
          Fp[i][j] = mod_ui(factors[fi].at(i, j), P);
    }
    std::vector<Piece> next;
    for (auto& pc : pieces) {
      long d = static_cast<long>(pc.span_p.size());
      for (long fi : cur) {
        std::vector<std::vector<long>> C(s, std::vector<long>(d));
        for (long i = 0; i < s; ++i)
          for (long j = 0; j < d; ++j) {
            long acc = 0;
            for (long t = 0; t < s; ++t)
              acc = (acc + factors_p[fi][i][t] * pc.span_p[j][t]) % P;
            C[i][j] = acc;
          }
        auto ker = modp::kernel(C, P);
        if (ker.empty()) continue;
        Piece np;
        np.cut = pc.cut;
        np.cut.push_back(fi);
        for (auto& c : ker) {
          std::vector<long> v(s);
          for (long t = 0; t < s; ++t) {
            long acc = 0;
            for (long j = 0; j < d; ++j)
              acc = (acc + c[j] * pc.span_p[j][t]) % P;
            v[t] = acc;
          }
          np.span_p.push_back(std::move(v));
        }
        next.push_back(std::move(np));
      }
    }
    pieces = std::move(next);
  }

  for (auto& pc : pieces) {
    // ker(sum of constraints) contains the simultaneous kernel, and stays a
    // single s x s Hermite elimination instead of a tall stack whose entries
    // swell; any excess is cut by intersecting inside the (already small)
    // candidate, each round dropping its dimension, so this terminates
    IntMat K = IntMat::identity(s);
    if (!pc.cut.empty()) {
      IntMat sum(s, s);
      for (long fi : pc.cut)
        for (long i = 0; i < s; ++i)
          for (long j = 0; j < s; ++j) sum.at(i, j) += factors[fi].at(i, j);
      K = kernel_saturated(sum);
      for (bool stable = false; !stable && K.cols() > 0;) {
        stable = true;
        for (long fi : pc.cut) {
          IntMat img = factors[fi] * K;
          if (img == IntMat(s, K.cols())) continue;
          K = K * kernel_saturated(img);
          stable = false;
          break;
        }
      }
    }
    if (K.cols() == 0) continue;
    HeckeBlock blk;
    blk.basis = lll_columns(K);
    for (auto& [n, T] : action)
      blk.ops[n] = coordinates_in_basis(blk.basis, T * blk.basis);
    blocks.push_back(std::move(blk));
  }

  long total = 0;
  for (auto& blk : blocks) {
    total += blk.basis.cols();
    blk.rational_scalar = true;
    for (auto& [on, Am] : blk.ops) {
      Int v;
      if (is_scalar(Am, &v)) {
        blk.scalars[on] = v;
      } else {
        blk.rational_scalar = false;
        blk.scalars.clear();
        break;
      }
    }
  }
  if (total != s) throw std::logic_error("isotypic_blocks: dimensions do not add up");
  return blocks;
}

PacketList newform_packets(const ModSymSpace& S, long N2) {
  if (N2 < 1 || S.N % N2 != 0)
    throw std::invalid_argument("newform_packets: N2 must divide the level");
  PacketList out;
  std::vector<long> qs = N2 == 1 ? std::vector<long>{} : prime_factors_squarefree(N2);
  for (auto& blk : isotypic_blocks(S)) {
    long k = blk.basis.cols();
    bool is_new = true;
    for (long q : qs) {
      const IntMat& Uq = blk.ops.at(q);
      if (!(Uq * Uq == IntMat::identity(k))) {
        is_new = false;
        break;
      }
    }
    if (!is_new) continue;
    if (blk.rational_scalar) {
      if (k != 2)
        throw std::logic_error("newform_packets: eigenvalue lists collide below the Sturm bound");
      EigenformPacket f;
      f.N = S.N;
      f.eigenspace = blk.basis;
      f.degree = 1;
      for (auto& [n, v] : blk.scalars) {
        if (S.N % n == 0) {
          if (v != 1 && v != -1)
            throw std::logic_error("newform_packets: U_q eigenvalue is not a unit");
          f.uq[n] = v;
        } else {
          f.a[n] = v;
        }
      }
      long reach = std::max(sturm_bound(S.N).bound, 7L);
      for (long ell : primes_up_to(reach))
        if (S.N % ell != 0 && !f.a.count(ell)) packet_eigenvalue(S, f, ell);
      out.packets.push_back(std::move(f));
    } else {
      SkippedClass sk;
      sk.N = S.N;
      sk.dimension = k;
      for (auto& [on, Am] : blk.ops) {
        Int v;
        if (!is_scalar(Am, &v)) {
          sk.witness_op = on;
          sk.witness_charpoly = charpoly(Am);
          break;
        }
      }
      out.skipped.push_back(std::move(sk));
    }
  }
  std::sort(out.packets.begin(), out.packets.end(),
            [](const EigenformPacket& x, const EigenformPacket& y) {
              auto xa = x.a.begin();
              for (auto ya = y.a.begin(); xa != x.a.end() && ya != y.a.end(); ++xa, ++ya) {
                if (xa->second != ya->second) return xa->second < ya->second;
              }
              auto xu = x.uq.begin();
              for (auto yu = y.uq.begin(); xu != x.uq.end() && yu != y.uq.end(); ++xu, ++yu) {
                if (xu->second != yu->second) return xu->second < yu->second;
              }
              return false;
            });
  return out;
}

Int packet_eigenvalue(const ModSymSpace& S, EigenformPacket& f, long ell) {
  if (!is_prime(Int(ell))) throw std::invalid_argument("packet_eigenvalue: prime required");
  if (S.N % ell == 0) return f.uq.at(ell);
  auto it = f.a.find(ell);
  if (it != f.a.end()) return it->second;
  IntMat T = hecke_operator(S, ell);
  IntMat A = coordinates_in_basis(f.eigenspace, T * f.eigenspace);
  Int v;
  if (!is_scalar(A, &v))
    throw std::logic_error("packet_eigenvalue: operator is not scalar on the packet");
  if (v * v > 4 * Int(ell))
    throw std::logic_error("packet_eigenvalue: eigenvalue violates the Weil bound");
  f.a[ell] = v;
  return v;
}

Int packet_an(const ModSymSpace& S, EigenformPacket& f, long n) {
  if (n < 1) throw std::invalid_argument("packet_an: index must be positive");
  Int out = 1;
  for (const auto& [p, e] : factorize(Int(n))) {
    long pl = p.get_si();
    Int ap = packet_eigenvalue(S, f, pl);
    if (S.N % pl == 0) {
      out *= pow_int(ap, e);
      continue;
    }
    Int prev = 1, cur = ap;  // a_{p^0}, a_{p^1}
    for (long t = 1; t < e; ++t) {
      Int nxt = ap * cur - p * prev;
      prev = cur;
      cur = nxt;
    }
    out *= (e == 0 ? Int(1) : cur);
  }
  return out;
}

std::string packet_label(const EigenformPacket& f) {
  std::ostringstream os;
  os << f.N;
  for (auto& [q, v] : f.uq) os << " U" << q << "=" << v;
  for (auto& [ell, a] : f.a) os << " a" << ell << "=" << a;
  return os.str();
}

}  // namespace mulab
