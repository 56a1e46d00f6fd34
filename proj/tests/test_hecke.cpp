#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <utility>
#include <vector>

#include "mulab/hecke.hpp"
#include "mulab/invariants.hpp"
#include "mulab/linalg.hpp"
#include "mulab/modsym.hpp"

using namespace mulab;

namespace {

long mod_reduce(const Int& v, long p) { return static_cast<long>(mpz_fdiv_ui(v.get_mpz_t(), p)); }

// Independent congruence detector: f is congruent mod (a prime over p) to an
// eigensystem of block g iff the operators A_n - a_n(f) have a common kernel
// over F_p.
bool oracle_congruent(const HeckeBlock& g, const EigenformPacket& f, long N, long p) {
  std::vector<std::vector<long>> rows;
  for (auto& [n, op] : g.ops) {
    const Int& fv = (N % n == 0) ? f.uq.at(n) : f.a.at(n);
    for (long i = 0; i < op.rows(); ++i) {
      std::vector<long> row(op.cols());
      for (long j = 0; j < op.cols(); ++j)
        row[j] = mod_reduce(op.at(i, j) - (i == j ? fv : Int(0)), p);
      rows.push_back(row);
    }
  }
  return !modp::kernel(rows, p).empty();
}

bool block_is_packet(const HeckeBlock& g, const EigenformPacket& f, long N) {
  if (!g.rational_scalar) return false;
  for (auto& [n, s] : g.scalars)
    if (((N % n == 0) ? f.uq.at(n) : f.a.at(n)) != s) return false;
  return true;
}

bool oracle_has_congruence(const HeckeAlgebra& A, const EigenformPacket& f, long p) {
  long N = A.N1 * A.N2;
  for (auto& g : A.blocks) {
    if (block_is_packet(g, f, N)) continue;
    if (oracle_congruent(g, f, N, p)) return true;
  }
  return false;
}

long exponent_of(const HeckeAlgebra& A, const EigenformPacket& f, long p) {
  return congruence_exponent(A, f, p).exponent;
}

}  // namespace

TEST_CASE("algebra construction validates its factorization") {
  CHECK_THROWS(hecke_algebra(4, 1));    // not squarefree
  CHECK_THROWS(hecke_algebra(3, 3));    // not coprime
  CHECK_THROWS(hecke_algebra(6, 2));    // not coprime
  CHECK_THROWS(hecke_algebra(0, 5));
  CHECK_THROWS(hecke_algebra(-11, 1));
  CHECK_THROWS(hecke_algebra(build_space(11), 13, 1));  // level mismatch
}

TEST_CASE("ranks and space dimensions across newness constraints") {
  struct Row {
    long N1, N2, rank, dim;
  };
  // rank = sum of coefficient degrees of the surviving classes; the space
  // they act on has twice that dimension
  for (auto [N1, N2, rank, dim] : std::vector<Row>{
           {11, 1, 1, 2},
           {1, 11, 1, 2},
           {37, 1, 2, 4},
           {26, 1, 2, 4},
           {33, 1, 3, 6},   // new class + the level-11 class (degree 2 with U_3)
           {3, 11, 3, 6},   // the level-11 class is 11-new at level 33
           {11, 3, 1, 2},   // ... but not 3-new
           {1, 33, 1, 2},
           {22, 1, 2, 4},   // Z[U_2] on the level-11 class, U_2^2 + 2U_2 + 2 = 0
           {2, 11, 2, 4},
           {11, 2, 0, 0},
           {1, 22, 0, 0},
       }) {
    CAPTURE(N1);
    CAPTURE(N2);
    HeckeAlgebra A = hecke_algebra(N1, N2);
    CHECK(A.rank() == rank);
    CHECK(A.space_dim == dim);
    CHECK(2 * A.rank() == A.space_dim);
    CHECK(A.closed_after_one_pass);
  }
}

TEST_CASE("the level-11 algebra is the integers on the newform line") {
  HeckeAlgebra A = hecke_algebra(11, 1);
  REQUIRE(A.rank() == 1);
  CHECK(A.element(0) == std::vector<IntMat>{IntMat::identity(2)});
  CHECK(A.mult[0] == IntMat::identity(1));
  CHECK(hecke_algebra(1, 11).basis == A.basis);
}

TEST_CASE("multiplication table is commutative and has an identity") {
  HeckeAlgebra A = hecke_algebra(37, 1);
  long r = A.rank();
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < r; ++j)
      for (long s = 0; s < r; ++s) CHECK(A.mult[i].at(s, j) == A.mult[j].at(s, i));
  // the identity tuple lies in the lattice
  std::vector<IntMat> idt{IntMat::identity(2), IntMat::identity(2)};
  IntMat flat(8, 1);
  long off = 0;
  for (auto& M : idt)
    for (long i = 0; i < 2; ++i)
      for (long j = 0; j < 2; ++j) flat.at(off++, 0) = M.at(i, j);
  CHECK_NOTHROW(coordinates_in_basis(A.basis, flat));
}

TEST_CASE("composite Hecke operators satisfy the multiplicative identities") {
  ModSymSpace S = build_space(37);
  IntMat T2 = hecke_operator(S, 2), T3 = hecke_operator(S, 3);
  CHECK(hecke_operator(S, 4) == T2 * T2 - Int(2) * IntMat::identity(4));
  CHECK(hecke_operator(S, 6) == T2 * T3);
  ModSymSpace S26 = build_space(26);
  IntMat U2 = hecke_operator(S26, 2);
  CHECK(hecke_operator(S26, 4) == U2 * U2);  // no lower-order term at q | N
}

TEST_CASE("congruence exponents at levels 11, 37, 26, 33") {
  ModSymSpace S11 = build_space(11);
  auto P11 = newform_packets(S11, 11);
  HeckeAlgebra A11 = hecke_algebra(S11, 11, 1);
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L})
    CHECK(exponent_of(A11, P11.packets[0], p) == 0);

  ModSymSpace S37 = build_space(37);
  auto P37 = newform_packets(S37, 37);
  HeckeAlgebra A37 = hecke_algebra(S37, 37, 1);
  for (auto& f : P37.packets) {
    CHECK(exponent_of(A37, f, 2) >= 1);  // the two classes are congruent mod 2
    CHECK(exponent_of(A37, f, 2) == 1);
    CHECK(exponent_of(A37, f, 3) == 0);
    CHECK(exponent_of(A37, f, 5) == 0);  // a_2 values -2 and 0 differ by a 5-unit
  }

  ModSymSpace S26 = build_space(26);
  auto P26 = newform_packets(S26, 26);
  HeckeAlgebra A26 = hecke_algebra(S26, 26, 1);
  for (auto& f : P26.packets) {
    CHECK(exponent_of(A26, f, 2) == 1);
    CHECK(exponent_of(A26, f, 3) == 0);
    CHECK(exponent_of(A26, f, 7) == 0);  // the mod-7 congruence here is Eisenstein only
    CHECK(exponent_of(A26, f, 13) == 0);
  }

  // level 33: the new class is congruent mod 3 to the level-11 old class
  ModSymSpace S33 = build_space(33);
  auto P33 = newform_packets(S33, 33);
  EigenformPacket& f33 = P33.packets[0];
  CHECK(exponent_of(hecke_algebra(S33, 33, 1), f33, 3) == 1);
  CHECK(exponent_of(hecke_algebra(S33, 3, 11), f33, 3) == 1);   // old class kept: 11-new
  CHECK(exponent_of(hecke_algebra(S33, 11, 3), f33, 3) == 0);   // old class dropped
  CHECK(exponent_of(hecke_algebra(S33, 1, 33), f33, 3) == 0);
  CHECK(exponent_of(hecke_algebra(S33, 33, 1), f33, 2) == 0);
  CHECK(exponent_of(hecke_algebra(S33, 33, 1), f33, 5) == 0);
}

TEST_CASE("a packet from another level is rejected") {
  ModSymSpace S11 = build_space(11);
  auto P11 = newform_packets(S11, 11);
  HeckeAlgebra A37 = hecke_algebra(37, 1);
  CHECK_THROWS_WITH_AS(congruence_exponent(A37, P11.packets[0], 2),
                       "packet not in space", std::invalid_argument);
  CHECK_THROWS(congruence_exponent(A37, P11.packets[0], 4));  // p not prime
}

TEST_CASE("exponent positivity agrees with the mod-p kernel detector") {
  for (long N = 1; N <= 60; ++N) {
    if (!is_squarefree(Int(N))) continue;
    ModSymSpace S = build_space(N);
    auto P = newform_packets(S, 1);
    if (P.packets.empty()) continue;
    HeckeAlgebra Aall = hecke_algebra(S, N, 1);
    HeckeAlgebra Anew = hecke_algebra(S, 1, N);
    CHECK(Aall.closed_after_one_pass);
    CHECK(Anew.closed_after_one_pass);
    for (auto& f : P.packets)
      for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        CAPTURE(N);
        CAPTURE(p);
        CHECK((exponent_of(Aall, f, p) > 0) == oracle_has_congruence(Aall, f, p));
        CHECK((exponent_of(Anew, f, p) > 0) == oracle_has_congruence(Anew, f, p));
      }
  }
}

TEST_CASE("moving a prime into the newness constraint preserves the exponent "
          "when the packet's curve is ramified there") {
  struct Case {
    const char* curve;
    long packet_index;  // within the sorted packet list at that level
  };
  for (auto [line, idx] : std::vector<Case>{{"26 : 1 -1 1 -3 3", 0},
                                            {"26 : 1 0 1 -5 -8", 1},
                                            {"33 : 1 1 0 -11 0", 0}}) {
    CurveRecord E = parse_curve_line(line);
    long N = E.conductor;
    ModSymSpace S = build_space(N);
    auto P = newform_packets(S, N);
    EigenformPacket& f = P.packets[idx];
    HeckeAlgebra A = hecke_algebra(S, N, 1);
    for (long q : prime_factors_squarefree(N)) {
      long ordq = padic_valuation_finite(E.delta_min, Int(q));
      for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        if (ordq % p == 0) continue;  // not ramified at q, nothing asserted
        CAPTURE(line);
        CAPTURE(q);
        CAPTURE(p);
        HeckeAlgebra Aq = hecke_algebra(S, N / q, q);
        CHECK(exponent_of(A, f, p) == exponent_of(Aq, f, p));
      }
    }
  }
}
