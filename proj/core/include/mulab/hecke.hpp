#pragma once
// The integral Hecke ring on the N2-new cuspidal subspace of level N1*N2,
// and congruence-number exponents.
//
// An algebra element is the tuple of its restrictions to the N2-new isotypic
// blocks; the lattice spanned by T_n (n up to the Sturm bound) and U_q (q | N)
// inside that product is closed under multiplication -- closure is verified,
// not assumed -- so annihilators and image ideals are exact integer
// computations. Only the exponent ord_p of the congruence ideal is exposed:
// the ideal itself is defined up to unit.

#include <string>
#include <vector>

#include "mulab/linalg.hpp"
#include "mulab/modsym.hpp"

namespace mulab {

struct HeckeAlgebra {
  long N1 = 1, N2 = 1;
  long space_dim = 0;  // dimension of the N2-new cuspidal subspace
  std::vector<HeckeBlock> blocks;  // the N2-new isotypic blocks of level N1*N2
  IntMat basis;  // columns = lattice basis of the ring, flattened block tuples
  std::vector<IntMat> mult;  // mult[i](s,j) = coefficient of b_s in b_i * b_j
  bool closed_after_one_pass = false;  // generator span was already a ring

  long rank() const { return basis.cols(); }
  // restrictions of basis element i, one matrix per block
  std::vector<IntMat> element(long i) const;
};

// Requires N = N1*N2 squarefree with gcd(N1,N2) = 1 (and S at level N for the
// shared-space variant).
HeckeAlgebra hecke_algebra(const ModSymSpace& S, long N1, long N2);
HeckeAlgebra hecke_algebra(long N1, long N2);

struct CongruenceExponent {
  std::string packet;  // eigenvalue fingerprint of f
  long N1 = 1, N2 = 1;
  long p = 0;
  long exponent = 0;
};

// ord_p of a generator of pi_f(Ann(ker pi_f)) in the N2-new Hecke ring; zero
// exactly when f admits no congruence there. f must match one of the rational
// eigenclasses of the algebra ("packet not in space" otherwise).
CongruenceExponent congruence_exponent(const HeckeAlgebra& A,
                                       const EigenformPacket& f, long p);
CongruenceExponent congruence_exponent(const EigenformPacket& f, long N1,
                                       long N2, long p);

}  // namespace mulab
