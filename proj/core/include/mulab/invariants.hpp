#pragma once

// Per-prime local invariants of elliptic curves and the quadratic-field
// bookkeeping they feed: level splitting N = N+*N-, global minimal models,
// Tamagawa exponents t(ell), residual-image checks, unit roots, and the
// trivial-character valuation predictions.

#include <optional>
#include <string>
#include <vector>

#include "mulab/linalg.hpp"

namespace mulab {

enum class Verdict { yes, no, unknown };
std::string to_string(Verdict v);

// ---- imaginary quadratic fields and binary quadratic form class numbers ----

struct QuadraticField {
  long D;                // fundamental discriminant, < 0
  long class_number;     // h(D)
  long unit_half_order;  // |O_K^x| / 2: 3 for D=-3, 2 for D=-4, else 1
};

bool is_fundamental_discriminant(long D);
QuadraticField quadratic_field(long D);  // throws unless D < 0 and fundamental

// Number of classes of primitive reduced positive-definite binary quadratic
// forms of discriminant disc (any disc < 0 with disc = 0,1 mod 4).
long form_class_number(long disc);

// ---- level splitting relative to K ----

struct LevelSplitting {
  long N = 1;
  long n_plus = 1;   // product of q | N split in K
  long n_minus = 1;  // product of q | N inert in K
  bool definite = false;  // odd number of primes dividing n_minus
};

// Kronecker classification of every q | N. Throws if gcd(N, D) > 1 or N is
// not squarefree. definite = false marks the indefinite case (out of scope
// for the pairing machinery; callers must check).
LevelSplitting split_level(long N, const QuadraticField& K);

// ---- Weierstrass models ----

struct Curve {
  Int a1, a2, a3, a4, a6;

  Int b2() const { return a1 * a1 + 4 * a2; }
  Int b4() const { return 2 * a4 + a1 * a3; }
  Int b6() const { return a3 * a3 + 4 * a6; }
  Int b8() const {
    return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  }
  Int c4() const { return b2() * b2() - 24 * b4(); }
  Int c6() const {
    Int B2 = b2();
    return -B2 * B2 * B2 + 36 * B2 * b4() - 216 * b6();
  }
  Int discriminant() const {
    Int B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
  }
  bool operator==(const Curve& o) const {
    return a1 == o.a1 && a2 == o.a2 && a3 == o.a3 && a4 == o.a4 && a6 == o.a6;
  }
};

// Global minimal model (Laska-Kraus-Connell). Throws on singular input.
// Idempotent, and the result is certified by recomputing its invariants.
Curve minimal_model(const Curve& E);

Int minimal_discriminant(const Curve& E);

// A curve admitted to the working scope: squarefree conductor, i.e.
// multiplicative reduction at every bad prime.
struct CurveRecord {
  Curve model;  // minimal
  Int delta_min;
  long conductor;
};

// nullopt when some bad prime is additive (conductor not squarefree).
// Throws on singular input.
std::optional<CurveRecord> curve_record_if_squarefree(const Curve& E);

// One curve per line, `N : a1 a2 a3 a4 a6`. Validates the stated conductor.
CurveRecord parse_curve_line(const std::string& line);

// Trace of Frobenius at ell. Good reduction: point count over F_ell.
// Multiplicative ell | N: +1 split, -1 nonsplit. ell is a prime.
long curve_ap(const CurveRecord& E, long ell);

// Number of points of E over F_ell (good reduction required), ell prime.
long curve_point_count(const CurveRecord& E, long ell);

// True iff E(Q) has a rational point of exact odd prime order r within the
// search region (used as a positive certificate only; false is not a proof
// of absence).
bool has_rational_point_of_order(const CurveRecord& E, long r);

// ---- Tamagawa exponents ----

struct TamagawaRecord {
  long ell;
  long t;              // the exponent t(ell) at p
  long ord_ell_delta;  // ord_ell of the minimal discriminant (0 if ell good)
};

// t = ord_p(ord_ell(delta_min)) for ell | N (multiplicative), 0 for good ell.
// Requires p odd, p != ell.
TamagawaRecord tamagawa_exponent(const CurveRecord& E, long ell, long p);

// ---- residual-image hypothesis ----

struct CRPrimeClause {
  long q;
  long q_mod_p;
  bool q_pm_one_mod_p;  // q = +-1 mod p, the only case with content
  bool ramified;        // p does not divide ord_q(delta_min)
  bool ok;              // !q_pm_one_mod_p || ramified
};

struct CRReport {
  Verdict surjective = Verdict::unknown;
  std::string surjective_basis;  // which certificate or obstruction decided it
  std::vector<CRPrimeClause> clauses;  // one per q | n_minus
  Verdict overall = Verdict::unknown;
  long sample_bound = 0;
};

// Checks the two-part residual hypothesis for (E mod p, n_minus):
// (1) the mod-p image is all of GL2(F_p), decided by a subgroup-classification
//     certificate over Frobenius traces at good ell <= sample_bound;
//     falsified by a rational p-torsion point or by a reducible eigenvalue
//     pattern holding up to the certification bound; otherwise unknown.
// (2) every q | n_minus with q = +-1 mod p has p not dividing ord_q(delta_min).
// Requires p >= 5, p not dividing conductor, n_minus | conductor squarefree.
CRReport check_cr(const CurveRecord& E, long n_minus, long p,
                  long sample_bound = 1000);

// ---- ordinary unit root ----

// alpha mod p^m with alpha^2 - a_p*alpha + p = 0 and alpha = a_p mod p.
// Throws if p | a_p.
Int unit_root(const Int& a_p, long p, long precision);

// ---- trivial-character valuation predictions ----

struct TrivialCharacterPrediction {
  long minimal_ord;  // places above N+ only
  long full_ord;     // places above all of N
};

// ord_p of the two predicted special values: selmer_order * prod_{v|p}
// |E(k_v)|^2 * p^(sum of t(ell) over places above N+ resp. over all of N).
// Places of K: split ell contributes twice, inert once. Requires good
// ordinary-or-not reduction at p (p not dividing conductor) and gcd(D,p)=1.
TrivialCharacterPrediction trivial_character_prediction(
    const CurveRecord& E, const QuadraticField& K, long p,
    const Int& selmer_order);

}  // namespace mulab
