#include "mulab/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

namespace mulab {

IntMat IntMat::identity(long n) {
  IntMat I(n, n);
  for (long i = 0; i < n; i++) I.at(i, i) = 1;
  return I;
}

bool IntMat::is_zero() const {
  for (const auto& x : e_)
    if (x != 0) return false;
  return true;
}

IntMat IntMat::transpose() const {
  IntMat t(c_, r_);
  for (long i = 0; i < r_; i++)
    for (long j = 0; j < c_; j++) t.at(j, i) = at(i, j);
  return t;
}

void IntMat::swap_rows(long i, long j) {
  if (i == j) return;
  for (long k = 0; k < c_; k++) std::swap(at(i, k), at(j, k));
}

void IntMat::swap_cols(long i, long j) {
  if (i == j) return;
  for (long k = 0; k < r_; k++) std::swap(at(k, i), at(k, j));
}

IntMat operator*(const IntMat& a, const IntMat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("IntMat mul: shape mismatch");
  IntMat c(a.rows(), b.cols());
  Int tmp;
  for (long i = 0; i < a.rows(); i++)
    for (long k = 0; k < a.cols(); k++) {
      const Int& aik = a.at(i, k);
      if (aik == 0) continue;
      for (long j = 0; j < b.cols(); j++) {
        tmp = aik * b.at(k, j);
        c.at(i, j) += tmp;
      }
    }
  return c;
}

IntMat operator+(const IntMat& a, const IntMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("IntMat add: shape mismatch");
  IntMat c(a.rows(), a.cols());
  for (long i = 0; i < a.rows(); i++)
    for (long j = 0; j < a.cols(); j++) c.at(i, j) = a.at(i, j) + b.at(i, j);
  return c;
}

IntMat operator-(const IntMat& a, const IntMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("IntMat sub: shape mismatch");
  IntMat c(a.rows(), a.cols());
  for (long i = 0; i < a.rows(); i++)
    for (long j = 0; j < a.cols(); j++) c.at(i, j) = a.at(i, j) - b.at(i, j);
  return c;
}

IntMat operator*(const Int& s, const IntMat& a) {
  IntMat c(a.rows(), a.cols());
  for (long i = 0; i < a.rows(); i++)
    for (long j = 0; j < a.cols(); j++) c.at(i, j) = s * a.at(i, j);
  return c;
}

IntMat vstack(const IntMat& a, const IntMat& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("vstack: column mismatch");
  IntMat c(a.rows() + b.rows(), a.cols());
  for (long i = 0; i < a.rows(); i++)
    for (long j = 0; j < a.cols(); j++) c.at(i, j) = a.at(i, j);
  for (long i = 0; i < b.rows(); i++)
    for (long j = 0; j < b.cols(); j++) c.at(a.rows() + i, j) = b.at(i, j);
  return c;
}

IntMat hstack(const IntMat& a, const IntMat& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack: row mismatch");
  IntMat c(a.rows(), a.cols() + b.cols());
  for (long i = 0; i < a.rows(); i++) {
    for (long j = 0; j < a.cols(); j++) c.at(i, j) = a.at(i, j);
    for (long j = 0; j < b.cols(); j++) c.at(i, a.cols() + j) = b.at(i, j);
  }
  return c;
}

std::vector<Int> mat_vec(const IntMat& a, const std::vector<Int>& v) {
  if (a.cols() != static_cast<long>(v.size()))
    throw std::invalid_argument("mat_vec: shape mismatch");
  std::vector<Int> out(a.rows());
  for (long i = 0; i < a.rows(); i++)
    for (long j = 0; j < a.cols(); j++) out[i] += a.at(i, j) * v[j];
  return out;
}

std::vector<Int> SmithForm::divisors() const {
  std::vector<Int> d;
  for (long i = 0; i < rank; i++) d.push_back(D.at(i, i));
  return d;
}

namespace {

// Locate the entry of minimal nonzero absolute value in the lower-right block
// starting at (t, t). Returns false if the block is zero.
bool min_pivot(const IntMat& D, long t, long& pi, long& pj) {
  bool found = false;
  Int best;
  for (long i = t; i < D.rows(); i++)
    for (long j = t; j < D.cols(); j++) {
      const Int& x = D.at(i, j);
      if (x == 0) continue;
      Int ax = abs(x);
      if (!found || ax < best) {
        found = true;
        best = ax;
        pi = i;
        pj = j;
      }
    }
  return found;
}

void add_row_multiple(IntMat& M, long dst, long src, const Int& q) {
  if (q == 0) return;
  for (long k = 0; k < M.cols(); k++) M.at(dst, k) -= q * M.at(src, k);
}

void add_col_multiple(IntMat& M, long dst, long src, const Int& q) {
  if (q == 0) return;
  for (long k = 0; k < M.rows(); k++) M.at(k, dst) -= q * M.at(k, src);
}

}  // namespace

SmithForm smith_normal_form(const IntMat& A) {
  SmithForm sf;
  long m = A.rows(), n = A.cols();
  sf.U = IntMat::identity(m);
  sf.V = IntMat::identity(n);
  sf.D = A;
  IntMat& D = sf.D;

  long t = 0;
  while (t < std::min(m, n)) {
    long pi, pj;
    if (!min_pivot(D, t, pi, pj)) break;
    D.swap_rows(t, pi);
    sf.U.swap_rows(t, pi);
    D.swap_cols(t, pj);
    sf.V.swap_cols(t, pj);

    bool clean = false;
    while (!clean) {
      clean = true;
      // clear column t below the pivot
      for (long i = t + 1; i < m; i++) {
        if (D.at(i, t) == 0) continue;
        Int q = D.at(i, t) / D.at(t, t);  // truncated
        add_row_multiple(D, i, t, q);
        add_row_multiple(sf.U, i, t, q);
        if (D.at(i, t) != 0) {
          // remainder is strictly smaller; promote it to pivot
          D.swap_rows(t, i);
          sf.U.swap_rows(t, i);
          clean = false;
        }
      }
      // clear row t right of the pivot
      for (long j = t + 1; j < n; j++) {
        if (D.at(t, j) == 0) continue;
        Int q = D.at(t, j) / D.at(t, t);
        add_col_multiple(D, j, t, q);
        add_col_multiple(sf.V, j, t, q);
        if (D.at(t, j) != 0) {
          D.swap_cols(t, j);
          sf.V.swap_cols(t, j);
          clean = false;
        }
      }
    }

    // divisibility fix-up: the pivot must divide every remaining entry
    bool restart = false;
    for (long i = t + 1; i < m && !restart; i++)
      for (long j = t + 1; j < n && !restart; j++) {
        if (D.at(i, j) % D.at(t, t) != 0) {
          Int minus_one = -1;
          add_row_multiple(D, t, i, minus_one);  // row_t += row_i
          add_row_multiple(sf.U, t, i, minus_one);
          restart = true;
        }
      }
    if (restart) continue;

    if (D.at(t, t) < 0) {
      for (long k = 0; k < n; k++) D.at(t, k) = -D.at(t, k);
      for (long k = 0; k < m; k++) sf.U.at(t, k) = -sf.U.at(t, k);
    }
    t++;
  }
  sf.rank = t;
  return sf;
}

IntMat hermite_row(const IntMat& A, IntMat* transform) {
  long m = A.rows(), n = A.cols();
  IntMat H = A;
  IntMat T = IntMat::identity(m);
  long r = 0;
  for (long j = 0; j < n && r < m; j++) {
    // choose the row with minimal nonzero |entry| in column j at or below r
    long piv = -1;
    Int best;
    for (long i = r; i < m; i++) {
      if (H.at(i, j) == 0) continue;
      Int ax = abs(H.at(i, j));
      if (piv < 0 || ax < best) {
        piv = i;
        best = ax;
      }
    }
    if (piv < 0) continue;
    H.swap_rows(r, piv);
    T.swap_rows(r, piv);
    bool again = true;
    while (again) {
      again = false;
      for (long i = r + 1; i < m; i++) {
        if (H.at(i, j) == 0) continue;
        Int q = H.at(i, j) / H.at(r, j);
        add_row_multiple(H, i, r, q);
        add_row_multiple(T, i, r, q);
        if (H.at(i, j) != 0) {
          H.swap_rows(r, i);
          T.swap_rows(r, i);
          again = true;
        }
      }
    }
    if (H.at(r, j) < 0) {
      for (long k = 0; k < n; k++) H.at(r, k) = -H.at(r, k);
      for (long k = 0; k < m; k++) T.at(r, k) = -T.at(r, k);
    }
    // reduce entries above the pivot into [0, pivot)
    for (long i = 0; i < r; i++) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), H.at(i, j).get_mpz_t(), H.at(r, j).get_mpz_t());
      add_row_multiple(H, i, r, q);
      add_row_multiple(T, i, r, q);
    }
    r++;
  }
  if (transform) *transform = T;
  IntMat out(r, n);
  for (long i = 0; i < r; i++)
    for (long j = 0; j < n; j++) out.at(i, j) = H.at(i, j);
  return out;
}

// fraction-free elimination; entries stay bounded by minors of A, unlike the
// Euclidean Hermite reduction whose intermediate entries can blow up
// doubly-exponentially on unlucky inputs
long rank(const IntMat& A) {
  IntMat a = A;
  long m = a.rows(), n = a.cols(), r = 0;
  Int prev = 1;
  while (r < m && r < n) {
    long pi = -1, pj = -1;
    Int best;
    for (long i = r; i < m; ++i)
      for (long j = r; j < n; ++j) {
        if (a.at(i, j) == 0) continue;
        Int ax = abs(a.at(i, j));
        if (pi < 0 || ax < best) {
          pi = i;
          pj = j;
          best = ax;
        }
      }
    if (pi < 0) break;
    a.swap_rows(r, pi);
    if (pj != r)
      for (long i = 0; i < m; ++i) std::swap(a.at(i, r), a.at(i, pj));
    for (long i = r + 1; i < m; ++i)
      for (long j = r + 1; j < n; ++j) {
        Int num = a.at(i, j) * a.at(r, r) - a.at(i, r) * a.at(r, j);
        mpz_divexact(a.at(i, j).get_mpz_t(), num.get_mpz_t(),
                     prev.get_mpz_t());
      }
    prev = a.at(r, r);
    ++r;
  }
  return r;
}

IntMat hnf_columns(const IntMat& A) { return hermite_row(A.transpose()).transpose(); }

Int rat_floor(const Rat& x) {
  Int num = x.get_num(), den = x.get_den(), q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

// all-integer LLL: lambda[i][j] = mu_ij * d[j+1], d[i] = Gram minor of order i
IntMat lll_columns(const IntMat& A) {
  long n = A.rows(), k = A.cols();
  if (k <= 1) return A;
  std::vector<std::vector<Int>> b(k, std::vector<Int>(n));
  for (long j = 0; j < k; ++j)
    for (long i = 0; i < n; ++i) b[j][i] = A.at(i, j);

  auto dot = [&](long i, long j) {
    Int s = 0;
    for (long t = 0; t < n; ++t) s += b[i][t] * b[j][t];
    return s;
  };
  std::vector<std::vector<Int>> lambda(k, std::vector<Int>(k));
  std::vector<Int> d(k + 1);
  d[0] = 1;
  for (long i = 0; i < k; ++i)
    for (long j = 0; j <= i; ++j) {
      Int u = dot(i, j);
      for (long t = 0; t < j; ++t)
        u = (d[t + 1] * u - lambda[i][t] * lambda[j][t]) / d[t];
      if (j < i) {
        lambda[i][j] = u;
      } else {
        if (u <= 0) throw std::logic_error("lll_columns: dependent columns");
        d[i + 1] = u;
      }
    }

  auto redi = [&](long i, long j) {
    Int two = 2 * abs(lambda[i][j]);
    if (two <= d[j + 1]) return;
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), Int(2 * lambda[i][j] + d[j + 1]).get_mpz_t(),
               Int(2 * d[j + 1]).get_mpz_t());
    for (long t = 0; t < n; ++t) b[i][t] -= q * b[j][t];
    lambda[i][j] -= q * d[j + 1];
    for (long t = 0; t < j; ++t) lambda[i][t] -= q * lambda[j][t];
  };

  long kk = 1;
  while (kk < k) {
    redi(kk, kk - 1);
    const Int& lam = lambda[kk][kk - 1];
    if (4 * (d[kk + 1] * d[kk - 1] + lam * lam) < 3 * d[kk] * d[kk]) {
      std::swap(b[kk], b[kk - 1]);
      for (long j = 0; j < kk - 1; ++j) std::swap(lambda[kk][j], lambda[kk - 1][j]);
      Int l0 = lambda[kk][kk - 1];
      Int B = (d[kk - 1] * d[kk + 1] + l0 * l0) / d[kk];
      for (long i = kk + 1; i < k; ++i) {
        Int t = lambda[i][kk];
        lambda[i][kk] = (d[kk + 1] * lambda[i][kk - 1] - l0 * t) / d[kk];
        lambda[i][kk - 1] = (B * t + l0 * lambda[i][kk]) / d[kk + 1];
      }
      d[kk] = B;
      if (kk > 1) --kk;
    } else {
      for (long j = kk - 2; j >= 0; --j) redi(kk, j);
      ++kk;
    }
  }
  IntMat out(n, k);
  for (long j = 0; j < k; ++j)
    for (long i = 0; i < n; ++i) out.at(i, j) = b[j][i];
  return out;
}

IntMat kernel_saturated(const IntMat& A) {
  // Reduce the column lattice of [gamma*A; I]: a reduced-basis column whose
  // top block vanishes is an integer kernel vector, and once n - rank(A) of
  // them appear they form a basis of the full kernel sublattice, because the
  // quotient by the zero-top sublattice is torsion-free.  That count is the
  // whole correctness certificate; gamma only affects how soon it is met.
  // (A Hermite transform would give the same lattice, but its intermediate
  // entries can blow up doubly-exponentially on unlucky inputs.)
  long m = A.rows(), n = A.cols();
  long k = n - rank(A);
  if (k == 0) return IntMat(n, 0);
  Int maxabs = 1;
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < n; ++j) {
      Int ax = abs(A.at(i, j));
      if (ax > maxabs) maxabs = ax;
    }
  Int gamma = Int(2 * n) * maxabs;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 8)
      throw std::logic_error("kernel_saturated: certificate never met");
    IntMat E(m + n, n);
    for (long i = 0; i < m; ++i)
      for (long j = 0; j < n; ++j) E.at(i, j) = gamma * A.at(i, j);
    for (long j = 0; j < n; ++j) E.at(m + j, j) = 1;
    IntMat R = lll_columns(E);
    std::vector<long> zc;
    for (long j = 0; j < n; ++j) {
      bool zero = true;
      for (long i = 0; i < m && zero; ++i) zero = R.at(i, j) == 0;
      if (zero) zc.push_back(j);
    }
    if (static_cast<long>(zc.size()) == k) {
      IntMat K(n, k);
      for (long j = 0; j < k; ++j)
        for (long i = 0; i < n; ++i) K.at(i, j) = R.at(m + i, zc[j]);
      return K;
    }
    gamma = gamma * gamma;
  }
}

IntMat row_saturation(const IntMat& A) {
  IntMat K = kernel_saturated(A);          // cols span ker(A), saturated
  IntMat S = kernel_saturated(K.transpose());  // cols span {v : K^T v = 0}
  return S.transpose();
}

Int det(IntMat a) {
  long n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("det: not square");
  if (n == 0) return 1;
  int sign = 1;
  Int prev = 1;
  for (long k = 0; k + 1 < n; k++) {
    if (a.at(k, k) == 0) {
      long s = -1;
      for (long i = k + 1; i < n; i++)
        if (a.at(i, k) != 0) {
          s = i;
          break;
        }
      if (s < 0) return 0;
      a.swap_rows(k, s);
      sign = -sign;
    }
    for (long i = k + 1; i < n; i++)
      for (long j = k + 1; j < n; j++) {
        Int num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
        mpz_divexact(a.at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    prev = a.at(k, k);
  }
  return sign > 0 ? a.at(n - 1, n - 1) : Int(-a.at(n - 1, n - 1));
}

std::vector<Int> charpoly(const IntMat& A) {
  long n = A.rows();
  if (n != A.cols()) throw std::invalid_argument("charpoly: not square");
  // Berkowitz. p holds coefficients leading-first, p[0] = 1.
  std::vector<Int> p{Int(1)};
  for (long k = 1; k <= n; k++) {
    // Toeplitz column tau for the k-th step
    std::vector<Int> tau(k + 1);
    tau[0] = 1;
    tau[1] = -A.at(k - 1, k - 1);
    if (k >= 2) {
      std::vector<Int> v(k - 1);
      for (long i = 0; i < k - 1; i++) v[i] = A.at(i, k - 1);  // column above diagonal
      for (long s = 2; s <= k; s++) {
        Int q = 0;
        for (long i = 0; i < k - 1; i++) q += A.at(k - 1, i) * v[i];
        tau[s] = -q;
        if (s < k) {
          std::vector<Int> w(k - 1);
          for (long i = 0; i < k - 1; i++) {
            for (long j = 0; j < k - 1; j++) w[i] += A.at(i, j) * v[j];
          }
          v = std::move(w);
        }
      }
    }
    std::vector<Int> np(k + 1);
    for (long i = 0; i <= k; i++)
      for (long j = 0; j < std::min<long>(static_cast<long>(p.size()), i + 1); j++)
        np[i] += tau[i - j] * p[j];
    p = std::move(np);
  }
  // convert to constant-first
  std::vector<Int> out(n + 1);
  for (long i = 0; i <= n; i++) out[i] = p[n - i];
  return out;
}

RatMat to_rat(const IntMat& a) {
  RatMat r(a.rows(), a.cols());
  for (long i = 0; i < a.rows(); i++)
    for (long j = 0; j < a.cols(); j++) r.at(i, j) = Rat(a.at(i, j));
  return r;
}

RatMat solve_right(const RatMat& A, const RatMat& B) {
  long m = A.rows(), n = A.cols(), w = B.cols();
  if (B.rows() != m) throw std::invalid_argument("solve_right: shape mismatch");
  // augmented elimination
  RatMat M(m, n + w);
  for (long i = 0; i < m; i++) {
    for (long j = 0; j < n; j++) M.at(i, j) = A.at(i, j);
    for (long j = 0; j < w; j++) M.at(i, n + j) = B.at(i, j);
  }
  std::vector<long> pivot_col;
  long r = 0;
  for (long j = 0; j < n && r < m; j++) {
    long piv = -1;
    for (long i = r; i < m; i++)
      if (M.at(i, j) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    for (long k = 0; k < n + w; k++) std::swap(M.at(r, k), M.at(piv, k));
    Rat inv = 1 / M.at(r, j);
    for (long k = j; k < n + w; k++) M.at(r, k) *= inv;
    for (long i = 0; i < m; i++) {
      if (i == r || M.at(i, j) == 0) continue;
      Rat f = M.at(i, j);
      for (long k = j; k < n + w; k++) M.at(i, k) -= f * M.at(r, k);
    }
    pivot_col.push_back(j);
    r++;
  }
  for (long i = r; i < m; i++)
    for (long j = 0; j < w; j++)
      if (M.at(i, n + j) != 0) throw std::runtime_error("solve_right: inconsistent system");
  RatMat X(n, w);
  for (long i = 0; i < r; i++)
    for (long j = 0; j < w; j++) X.at(pivot_col[i], j) = M.at(i, n + j);
  return X;
}

IntMat coordinates_in_basis(const IntMat& S, const IntMat& B) {
  RatMat X = solve_right(to_rat(S), to_rat(B));
  IntMat out(X.rows(), X.cols());
  for (long i = 0; i < X.rows(); i++)
    for (long j = 0; j < X.cols(); j++) {
      const Rat& x = X.at(i, j);
      if (x.get_den() != 1)
        throw std::runtime_error("coordinates_in_basis: non-integral coordinate");
      out.at(i, j) = x.get_num();
    }
  return out;
}

PadicVal padic_valuation(const Int& x, const Int& p) {
  if (p < 2) throw std::invalid_argument("padic_valuation: p < 2");
  if (x == 0) return PadicVal{true, 0};
  PadicVal r{false, 0};
  Int y = x;
  while (y % p == 0) {
    y /= p;
    r.v++;
  }
  return r;
}

PadicVal padic_valuation(const Rat& x, const Int& p) {
  if (x == 0) return PadicVal{true, 0};
  PadicVal num = padic_valuation(Int(x.get_num()), p);
  PadicVal den = padic_valuation(Int(x.get_den()), p);
  return PadicVal{false, num.v - den.v};
}

long padic_valuation_finite(const Int& x, const Int& p) {
  PadicVal v = padic_valuation(x, p);
  if (v.infinite) throw std::domain_error("padic_valuation_finite: valuation of zero");
  return v.v;
}

long padic_valuation_finite(const Rat& x, const Int& p) {
  PadicVal v = padic_valuation(x, p);
  if (v.infinite) throw std::domain_error("padic_valuation_finite: valuation of zero");
  return v.v;
}

namespace modp {

long normalize(long x, long p) {
  long r = x % p;
  return r < 0 ? r + p : r;
}

long pow(long b, long e, long p) {
  b = normalize(b, p);
  long r = 1;
  while (e > 0) {
    if (e & 1) r = (r * b) % p;
    b = (b * b) % p;
    e >>= 1;
  }
  return r;
}

long inv(long x, long p) {
  x = normalize(x, p);
  if (x == 0) throw std::domain_error("modp::inv of 0");
  long a = x, b = p, u = 1, v = 0;
  while (b) {
    long q = a / b;
    a -= q * b;
    std::swap(a, b);
    u -= q * v;
    std::swap(u, v);
  }
  if (a != 1) throw std::domain_error("modp::inv: not invertible");
  return normalize(u, p);
}

long echelon(std::vector<std::vector<long>>& mat, long p) {
  if (mat.empty()) return 0;
  long m = static_cast<long>(mat.size()), n = static_cast<long>(mat[0].size());
  long r = 0;
  for (long j = 0; j < n && r < m; j++) {
    long piv = -1;
    for (long i = r; i < m; i++)
      if (normalize(mat[i][j], p) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(mat[r], mat[piv]);
    long iv = inv(mat[r][j], p);
    for (long k = 0; k < n; k++) mat[r][k] = (normalize(mat[r][k], p) * iv) % p;
    for (long i = 0; i < m; i++) {
      if (i == r) continue;
      long f = normalize(mat[i][j], p);
      if (f == 0) continue;
      for (long k = 0; k < n; k++)
        mat[i][k] = normalize(mat[i][k] - f * mat[r][k], p);
    }
    r++;
  }
  return r;
}

std::vector<std::vector<long>> kernel(std::vector<std::vector<long>> mat, long p) {
  if (mat.empty()) return {};
  long n = static_cast<long>(mat[0].size());
  for (auto& row : mat)
    for (auto& x : row) x = normalize(x, p);
  echelon(mat, p);
  // locate pivot columns
  std::vector<long> pivot_of_col(n, -1);
  long r = 0;
  for (long i = 0; i < static_cast<long>(mat.size()); i++) {
    long j = 0;
    while (j < n && mat[i][j] == 0) j++;
    if (j == n) break;
    pivot_of_col[j] = i;
    r++;
  }
  std::vector<std::vector<long>> basis;
  for (long j = 0; j < n; j++) {
    if (pivot_of_col[j] >= 0) continue;
    std::vector<long> v(n, 0);
    v[j] = 1;
    for (long k = 0; k < n; k++)
      if (pivot_of_col[k] >= 0) v[k] = normalize(-mat[pivot_of_col[k]][j], p);
    basis.push_back(v);
  }
  return basis;
}

}  // namespace modp

Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Int pow_int(const Int& b, long e) {
  if (e < 0) throw std::invalid_argument("pow_int: negative exponent");
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

std::vector<std::pair<Int, long>> factorize(const Int& n) {
  if (n == 0) throw std::invalid_argument("factorize: n = 0");
  std::vector<std::pair<Int, long>> out;
  Int m = abs(n);
  for (Int d = 2; d * d <= m && d < 2000000; d = (d == 2 ? Int(3) : Int(d + 2))) {
    if (m % d != 0) continue;
    long e = 0;
    while (m % d == 0) {
      m /= d;
      e++;
    }
    out.emplace_back(d, e);
  }
  if (m > 1) {
    if (is_prime(m)) {
      out.emplace_back(m, 1);
    } else if (mpz_perfect_square_p(m.get_mpz_t())) {
      Int r;
      mpz_sqrt(r.get_mpz_t(), m.get_mpz_t());
      if (!is_prime(r)) throw std::runtime_error("factorize: cofactor out of reach");
      out.emplace_back(r, 2);
    } else {
      throw std::runtime_error("factorize: cofactor out of reach");
    }
  }
  return out;
}

std::vector<long> prime_factors_squarefree(long n) {
  if (n <= 0) throw std::invalid_argument("prime_factors_squarefree: n <= 0");
  std::vector<long> fs;
  long m = n;
  for (long d = 2; d * d <= m; d++) {
    if (m % d == 0) {
      m /= d;
      if (m % d == 0) throw std::invalid_argument("prime_factors_squarefree: not squarefree");
      fs.push_back(d);
    }
  }
  if (m > 1) fs.push_back(m);
  return fs;
}

std::vector<long> primes_up_to(long bound) {
  std::vector<long> out;
  if (bound < 2) return out;
  std::vector<bool> comp(bound + 1, false);
  for (long i = 2; i <= bound; i++) {
    if (comp[i]) continue;
    out.push_back(i);
    for (long j = 2 * i; j <= bound; j += i) comp[j] = true;
  }
  return out;
}

long kronecker_symbol(const Int& a, const Int& n) {
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

bool is_squarefree(const Int& n) {
  if (n == 0) return false;
  Int m = abs(n);
  for (Int d = 2; d * d <= m && d < 100000; d++) {
    if (m % d == 0) {
      m /= d;
      if (m % d == 0) return false;
    }
  }
  if (m > 1 && !is_prime(m) && mpz_perfect_square_p(m.get_mpz_t())) return false;
  return true;
}

}  // namespace mulab
