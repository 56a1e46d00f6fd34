#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "mulab/invariants.hpp"
#include "mulab/linalg.hpp"
#include "mulab/modsym.hpp"

using namespace mulab;

namespace {

constexpr const char* kCurve11 = "11 : 0 -1 1 -10 -20";
constexpr const char* kCurve37a = "37 : 0 0 1 -1 0";
constexpr const char* kCurve37b = "37 : 0 1 1 -23 -50";
constexpr const char* kCurve26a = "26 : 1 0 1 -5 -8";
constexpr const char* kCurve26b = "26 : 1 -1 1 -3 3";
constexpr const char* kCurve33a = "33 : 1 1 0 -11 0";

// Riemann-Hurwitz count for X_0(N), N squarefree: independent of the
// modular-symbol pipeline.
long genus_oracle(long N) {
  if (N == 1) return 0;
  long mu = N, nu2 = 1, nu3 = 1, nuinf = 1;
  for (long p : prime_factors_squarefree(N)) {
    mu = mu / p * (p + 1);
    nu2 *= (p == 2) ? 1 : 1 + kronecker_symbol(Int(-1), Int(p));
    nu3 *= (p == 3) ? 1 : 1 + kronecker_symbol(Int(-3), Int(p));
    nuinf *= 2;
  }
  long g12 = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * nuinf;
  REQUIRE(g12 % 12 == 0);
  return g12 / 12;
}

long omega(long N) {
  return static_cast<long>(prime_factors_squarefree(N).size());
}

// check a rational packet against the point counts of a curve
void check_packet_matches_curve(const ModSymSpace& S, EigenformPacket& f,
                                const char* curve_line) {
  CurveRecord E = parse_curve_line(curve_line);
  REQUIRE(E.conductor == Int(S.N));
  for (long ell : primes_up_to(13)) {
    Int got = packet_eigenvalue(S, f, ell);
    CHECK(got == Int(curve_ap(E, ell)));
  }
}

}  // namespace

TEST_CASE("Sturm bounds") {
  CHECK(sturm_bound(11).bound == 2);
  CHECK(sturm_bound(1).bound == 1);
  CHECK(sturm_bound(37).bound == 7);
  CHECK(sturm_bound(14).bound == 4);
  CHECK(sturm_bound(15).bound == 4);
  CHECK(sturm_bound(30).bound == 12);
  CHECK(sturm_bound(26).bound == 7);
  for (long N = 1; N <= 60; ++N) CHECK(sturm_bound(N).bound >= 1);
  CHECK_THROWS(sturm_bound(0));
}

TEST_CASE("space dimensions match the genus of the modular curve") {
  for (long N = 1; N <= 100; ++N) {
    if (!is_squarefree(Int(N))) continue;
    ModSymSpace S = build_space(N);
    long g = genus_oracle(N);
    long c = static_cast<long>(S.cusps.size());
    CAPTURE(N);
    CHECK(S.genus == g);
    CHECK(S.cusp_dim == 2 * g);
    CHECK(c == (N == 1 ? 1 : 1L << omega(N)));
    CHECK(S.full_dim == 2 * g + c - 1);
    CHECK(S.proj * S.section == IntMat::identity(S.cusp_dim));
  }
  CHECK_THROWS(build_space(12));
  CHECK_THROWS(build_space(45));
  CHECK_THROWS(build_space(0));
}

TEST_CASE("T_1 is the identity") {
  for (long N : {11L, 14L, 30L}) {
    ModSymSpace S = build_space(N);
    CHECK(hecke_operator(S, 1) == IntMat::identity(S.cusp_dim));
  }
  CHECK_THROWS(hecke_operator(build_space(11), 0));
}

TEST_CASE("Hecke operators commute") {
  for (long N : {14L, 15L, 37L}) {
    ModSymSpace S = build_space(N);
    std::vector<IntMat> ops;
    for (long n : {2L, 3L, 5L, 7L, 13L}) ops.push_back(hecke_operator(S, n));
    ops.push_back(hecke_operator(S, N));  // a U_q composite for 14, 15
    for (size_t i = 0; i < ops.size(); ++i)
      for (size_t j = i + 1; j < ops.size(); ++j)
        CHECK(ops[i] * ops[j] == ops[j] * ops[i]);
  }
}

TEST_CASE("level 11: the single packet and its operators") {
  ModSymSpace S = build_space(11);
  IntMat T2 = hecke_operator(S, 2);
  CHECK(T2 == Int(-2) * IntMat::identity(2));
  CHECK(charpoly(T2) == std::vector<Int>{4, 4, 1});  // (x+2)^2

  auto P = newform_packets(S, 11);
  REQUIRE(P.packets.size() == 1);
  CHECK(P.skipped.empty());
  EigenformPacket& f = P.packets[0];
  CHECK(f.a.at(2) == -2);
  CHECK(f.a.at(3) == -1);
  CHECK(f.a.at(5) == 1);
  CHECK(f.a.at(7) == -2);
  CHECK(f.uq.at(11) == 1);
  CHECK(f.degree == 1);
  check_packet_matches_curve(S, f, kCurve11);
  CurveRecord E11 = parse_curve_line(kCurve11);
  CHECK(f.uq.at(11) == Int(curve_ap(E11, 11)));
}

TEST_CASE("level 37: two rational packets split by a_2") {
  ModSymSpace S = build_space(37);
  auto P = newform_packets(S, 37);
  REQUIRE(P.packets.size() == 2);
  CHECK(P.skipped.empty());
  CHECK(P.packets[0].a.at(2) == -2);
  CHECK(P.packets[1].a.at(2) == 0);
  check_packet_matches_curve(S, P.packets[0], kCurve37a);
  check_packet_matches_curve(S, P.packets[1], kCurve37b);
  CHECK(P.packets[0].uq.at(37) == -1);
  CHECK(P.packets[1].uq.at(37) == 1);
  CurveRecord E37a = parse_curve_line(kCurve37a);
  CHECK(P.packets[0].uq.at(37) == Int(curve_ap(E37a, 37)));
}

TEST_CASE("level 22 is entirely old") {
  ModSymSpace S = build_space(22);
  auto P = newform_packets(S, 22);
  CHECK(P.packets.empty());
  CHECK(P.skipped.empty());

  // with no newness constraint the level-11 class shows up, and its U_2
  // eigenvalues generate a quadratic ring: reported, not processed
  auto P1 = newform_packets(S, 1);
  CHECK(P1.packets.empty());
  REQUIRE(P1.skipped.size() == 1);
  CHECK(P1.skipped[0].dimension == 4);
  CHECK(P1.skipped[0].witness_op == 2);
  CHECK(P1.skipped[0].witness_charpoly ==
        std::vector<Int>{4, 8, 8, 4, 1});  // (x^2+2x+2)^2

  // eigenvalues of the old class match its level-11 origin
  CHECK(hecke_operator(S, 3) == Int(-1) * IntMat::identity(4));
  CHECK(hecke_operator(S, 11) == IntMat::identity(4));
  CHECK_THROWS(newform_packets(S, 5));
}

TEST_CASE("level 23: irrational eigensystem is reported, never dropped") {
  ModSymSpace S = build_space(23);
  auto P = newform_packets(S, 23);
  CHECK(P.packets.empty());
  REQUIRE(P.skipped.size() == 1);
  CHECK(P.skipped[0].dimension == 4);
  CHECK(P.skipped[0].witness_op == 2);
  CHECK(P.skipped[0].witness_charpoly ==
        std::vector<Int>{1, -2, -1, 2, 1});  // (x^2+x-1)^2
  // equivalently: T_2^2 + T_2 - 1 kills the cuspidal space
  IntMat T2 = hecke_operator(S, 2);
  CHECK(T2 * T2 + T2 == IntMat::identity(4));
}

TEST_CASE("levels 26 and 33: packets match point counts of their curves") {
  ModSymSpace S26 = build_space(26);
  auto P26 = newform_packets(S26, 26);
  REQUIRE(P26.packets.size() == 2);
  CHECK(P26.skipped.empty());
  // sorted by eigenvalue list: a_3 = -3 before a_3 = 1
  check_packet_matches_curve(S26, P26.packets[0], kCurve26b);
  check_packet_matches_curve(S26, P26.packets[1], kCurve26a);

  ModSymSpace S33 = build_space(33);
  auto P33 = newform_packets(S33, 33);
  REQUIRE(P33.packets.size() == 1);
  CHECK(P33.skipped.empty());
  check_packet_matches_curve(S33, P33.packets[0], kCurve33a);

  // the blocks of level 33: the new class plus the old level-11 class,
  // whose good-prime scalars match the level-11 packet
  auto blocks = isotypic_blocks(S33);
  REQUIRE(blocks.size() == 2);
  ModSymSpace S11 = build_space(11);
  auto P11 = newform_packets(S11, 11);
  for (auto& blk : blocks) {
    if (blk.basis.cols() == 2) continue;  // the new class
    CHECK(blk.basis.cols() == 4);
    CHECK_FALSE(blk.rational_scalar);
    for (auto& [n, A] : blk.ops) {
      if (33 % n == 0) continue;
      CHECK(A == P11.packets[0].a.at(n) * IntMat::identity(4));
    }
  }
}

TEST_CASE("packet eigenvalues satisfy the Weil bound") {
  for (long N : {11L, 26L, 33L, 37L}) {
    ModSymSpace S = build_space(N);
    auto P = newform_packets(S, N);
    for (auto& f : P.packets)
      for (long ell : primes_up_to(13)) {
        Int a = packet_eigenvalue(S, f, ell);
        CHECK(a * a <= 4 * Int(ell));
      }
  }
}

TEST_CASE("packet a_n is multiplicative with the prime-power recurrence") {
  ModSymSpace S = build_space(11);
  auto P = newform_packets(S, 11);
  EigenformPacket& f = P.packets[0];
  CHECK(packet_an(S, f, 1) == 1);
  CHECK(packet_an(S, f, 6) == f.a.at(2) * f.a.at(3));
  CHECK(packet_an(S, f, 4) == f.a.at(2) * f.a.at(2) - 2);
  CHECK(packet_an(S, f, 8) ==
        f.a.at(2) * packet_an(S, f, 4) - 2 * f.a.at(2));
  CHECK(packet_an(S, f, 121) == f.uq.at(11) * f.uq.at(11));
  CHECK(packet_an(S, f, 22) == f.a.at(2) * f.uq.at(11));
  CHECK_THROWS(packet_an(S, f, 0));
}

TEST_CASE("degenerate levels have no cusp forms") {
  for (long N : {1L, 2L, 3L, 5L, 6L, 7L, 10L, 13L}) {
    ModSymSpace S = build_space(N);
    CHECK(S.cusp_dim == 0);
    CHECK(newform_packets(S, N).packets.empty());
    CHECK(isotypic_blocks(S).empty());
  }
}
