#pragma once

// Exact integer and rational linear algebra on top of GMP. Everything here is
// deterministic and allocation-heavy rather than clever; matrix sizes in this
// project stay small (a few hundred rows at the very worst).

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mulab {

using Int = mpz_class;
using Rat = mpq_class;

class IntMat {
 public:
  IntMat() : r_(0), c_(0) {}
  IntMat(long r, long c) : r_(r), c_(c), e_(static_cast<size_t>(r) * c) {
    if (r < 0 || c < 0) throw std::invalid_argument("IntMat: negative shape");
  }
  static IntMat identity(long n);

  long rows() const { return r_; }
  long cols() const { return c_; }
  Int& at(long i, long j) { return e_[idx(i, j)]; }
  const Int& at(long i, long j) const { return e_[idx(i, j)]; }

  bool is_zero() const;
  bool operator==(const IntMat& o) const { return r_ == o.r_ && c_ == o.c_ && e_ == o.e_; }

  IntMat transpose() const;
  void swap_rows(long i, long j);
  void swap_cols(long i, long j);

 private:
  size_t idx(long i, long j) const {
    if (i < 0 || i >= r_ || j < 0 || j >= c_) throw std::out_of_range("IntMat index");
    return static_cast<size_t>(i) * c_ + j;
  }
  long r_, c_;
  std::vector<Int> e_;
};

IntMat operator*(const IntMat& a, const IntMat& b);
IntMat operator+(const IntMat& a, const IntMat& b);
IntMat operator-(const IntMat& a, const IntMat& b);
IntMat operator*(const Int& s, const IntMat& a);

// Stack a on top of b (columns must agree) / a left of b (rows must agree).
IntMat vstack(const IntMat& a, const IntMat& b);
IntMat hstack(const IntMat& a, const IntMat& b);

std::vector<Int> mat_vec(const IntMat& a, const std::vector<Int>& v);

// Smith normal form: U*A*V = D with U, V unimodular and D diagonal,
// d_1 | d_2 | ... | d_rank, all nonnegative.
struct SmithForm {
  IntMat U, D, V;
  long rank = 0;
  std::vector<Int> divisors() const;  // the nonzero diagonal entries
};
SmithForm smith_normal_form(const IntMat& A);

// Row-style Hermite normal form of the row lattice of A. Returns the matrix
// of nonzero echelon rows (positive pivots, entries above a pivot reduced into
// [0, pivot)). If transform is non-null it receives a full-rank map T with
// T*A = (H padded with zero rows); T is unimodular.
IntMat hermite_row(const IntMat& A, IntMat* transform = nullptr);

// canonical basis (as columns) of the column span of A
IntMat hnf_columns(const IntMat& A);

// LLL-reduced basis of the column lattice (delta = 3/4, exact arithmetic);
// requires full column rank
IntMat lll_columns(const IntMat& A);

Int rat_floor(const Rat& x);

long rank(const IntMat& A);

// Columns form a basis of the saturation of ker(A) in Z^cols. The result
// always has exactly cols - rank(A) columns.
IntMat kernel_saturated(const IntMat& A);

// Rows form a basis of the saturation of the row space of A in Z^cols.
IntMat row_saturation(const IntMat& A);

Int det(IntMat A);  // Bareiss fraction-free elimination

// Characteristic polynomial by the Berkowitz division-free algorithm.
// Returned constant-first: c[k] is the coefficient of x^k, c[n] = 1.
std::vector<Int> charpoly(const IntMat& A);

// ---- rational matrices (only what the exact solvers need) ----

class RatMat {
 public:
  RatMat() : r_(0), c_(0) {}
  RatMat(long r, long c) : r_(r), c_(c), e_(static_cast<size_t>(r) * c) {}
  long rows() const { return r_; }
  long cols() const { return c_; }
  Rat& at(long i, long j) { return e_[static_cast<size_t>(i) * c_ + j]; }
  const Rat& at(long i, long j) const { return e_[static_cast<size_t>(i) * c_ + j]; }

 private:
  long r_, c_;
  std::vector<Rat> e_;
};

RatMat to_rat(const IntMat& a);

// Solve A*X = B exactly over Q. Throws if the system is inconsistent; if the
// solution is not unique the free coordinates are set to 0.
RatMat solve_right(const RatMat& A, const RatMat& B);

// Integer coordinates X with S*X = B, for S a basis (full column rank) of a
// lattice containing the columns of B. Throws if any coordinate is fractional.
IntMat coordinates_in_basis(const IntMat& S, const IntMat& B);

// ---- p-adic valuations ----

struct PadicVal {
  bool infinite = false;  // valuation of 0
  long v = 0;
  bool operator==(const PadicVal& o) const {
    return infinite == o.infinite && (infinite || v == o.v);
  }
};

PadicVal padic_valuation(const Int& x, const Int& p);
PadicVal padic_valuation(const Rat& x, const Int& p);

// Finite valuation or throw (for callers that already excluded 0).
long padic_valuation_finite(const Int& x, const Int& p);
long padic_valuation_finite(const Rat& x, const Int& p);

// ---- small prime-field linear algebra (word-sized p) ----

namespace modp {

long normalize(long x, long p);
long inv(long x, long p);  // throws on non-invertible
long pow(long b, long e, long p);

// Row echelon over F_p; returns rank. mat is row-major with given shape.
long echelon(std::vector<std::vector<long>>& mat, long p);

// Basis of the right kernel of mat over F_p (each element a column vector).
std::vector<std::vector<long>> kernel(std::vector<std::vector<long>> mat, long p);

}  // namespace modp

// ---- misc integer utilities shared across modules ----

Int gcd(const Int& a, const Int& b);
Int pow_int(const Int& b, long e);  // b^e, e >= 0
bool is_prime(const Int& n);
// Factorization of |n| as (prime, exponent) pairs, primes increasing.
// Trial division plus a primality certificate on the cofactor; throws when the
// cofactor cannot be certified prime (never happens at the sizes we handle).
std::vector<std::pair<Int, long>> factorize(const Int& n);
std::vector<long> prime_factors_squarefree(long n);  // throws if n not squarefree
std::vector<long> primes_up_to(long bound);
long kronecker_symbol(const Int& a, const Int& n);
bool is_squarefree(const Int& n);

}  // namespace mulab
