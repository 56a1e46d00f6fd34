#pragma once
// Weight-2 modular symbols for Gamma_0(N), N squarefree.
//
// The space is presented by Manin symbols indexed by P^1(Z/N) modulo the
// two- and three-term relations. We compute with the dual lattice (integer
// functionals on the symbol quotient): it is torsion-free and sits inside
// Z^#symbols as a saturated kernel, so all operator matrices stay integral.
// The cuspidal model is the quotient of the dual by the boundary functionals;
// its dimension is 2*genus(X_0(N)).

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "mulab/linalg.hpp"

namespace mulab {

struct SturmBound {
  long N = 1;
  long bound = 1;  // ceil(N/6 * prod_{q|N} (1 + 1/q))
};

SturmBound sturm_bound(long N);

struct ModSymSpace {
  long N = 1;
  std::vector<std::pair<long, long>> symbols;  // canonical P^1(Z/N) reps (c:d)
  std::vector<std::array<long, 4>> lifts;      // SL_2(Z) lift (a,b;c,d) per symbol
  IntMat relations;   // rows span the Manin relation lattice in Z^#symbols
  IntMat dual_basis;  // #symbols x m, columns = saturated dual of the quotient
  std::vector<std::pair<long, long>> cusps;  // cusp class representatives p/q
  IntMat boundary;    // m x #cusps: cusp-coefficient functionals in dual coords
  IntMat proj;        // s x m: dual coords -> cuspidal coords
  IntMat section;     // m x s: right inverse of proj
  long full_dim = 0;  // m = 2*genus + #cusps - 1
  long cusp_dim = 0;  // s = 2*genus
  long genus = 0;

  // index of (c:d) in `symbols`, any representative; -1 when gcd(c,d,N) > 1
  long p1_index(long c, long d) const;

 private:
  friend ModSymSpace build_space(long N);
  std::vector<long> p1_table_;  // (c mod N)*N + (d mod N) -> symbol index
};

ModSymSpace build_space(long N);

// Matrix of T_n (U_q when q | N) on the cuspidal basis, n >= 1 arbitrary.
IntMat hecke_operator(const ModSymSpace& S, long n);

// A joint eigenvalue-stable piece of the cuspidal space under all U_q (q | N)
// and all T_ell (ell prime, ell not dividing N, ell <= Sturm bound). Each
// piece carries one Galois conjugacy class of eigenforms.
struct HeckeBlock {
  IntMat basis;              // cusp_dim x k columns, saturated
  std::map<long, IntMat> ops;  // splitting operator index -> k x k restriction
  bool rational_scalar = false;  // every recorded op is an integer scalar
  std::map<long, Int> scalars;   // filled when rational_scalar
};

std::vector<HeckeBlock> isotypic_blocks(const ModSymSpace& S);

struct EigenformPacket {
  long N = 1;
  std::map<long, Int> a;   // prime ell (not dividing N) -> a_ell
  std::map<long, Int> uq;  // q | N -> U_q eigenvalue, always +-1
  IntMat eigenspace;       // cusp_dim x 2 columns, saturated
  long degree = 1;
};

// An eigenvalue class whose coefficient ring has degree > 1: reported but not
// processed. `witness_op` is the first operator acting without an integer
// scalar; `witness_charpoly` its characteristic polynomial on the class
// (constant-first).
struct SkippedClass {
  long N = 1;
  long dimension = 0;
  long witness_op = 0;
  std::vector<Int> witness_charpoly;
};

struct PacketList {
  std::vector<EigenformPacket> packets;  // sorted by eigenvalue lists
  std::vector<SkippedClass> skipped;
};

// Rational eigenform packets new at every prime dividing N2 (N2 | N). Classes
// whose eigensystem leaves Z are reported in `skipped`, never dropped.
PacketList newform_packets(const ModSymSpace& S, long N2);

// a_ell for a prime ell (U_q value when ell | N); computed on demand from the
// stored eigenspace and cached in the packet.
Int packet_eigenvalue(const ModSymSpace& S, EigenformPacket& f, long ell);

// a_n for arbitrary n >= 1 via multiplicativity and the prime-power
// recurrences a_{p^{k+1}} = a_p a_{p^k} - p a_{p^{k-1}} (p good), a_{q^k} =
// a_q^k (q | N).
Int packet_an(const ModSymSpace& S, EigenformPacket& f, long n);

// canonical name "N Uq=.. a_ell=..", shared by everything that reports on a
// packet
std::string packet_label(const EigenformPacket& f);

}  // namespace mulab
