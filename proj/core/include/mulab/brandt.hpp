#pragma once
// The definite side: a quaternion algebra ramified exactly at the primes
// dividing n_minus (and infinity), an Eichler order of level n_plus inside a
// certified maximal order, the right-ideal class set with its weights, and
// Brandt matrices acting on the class module.
//
// Everything is certified rather than trusted: Hilbert symbols pin the
// ramification set, the reduced discriminant pins maximality and the Eichler
// level, and the Eichler mass formula pins completeness of the class set.
// All lattices live in the coordinates of the maximal order, as column spans
// scaled by a common denominator.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "mulab/linalg.hpp"
#include "mulab/modsym.hpp"

namespace mulab {

// (a,b/Q)_v for v = p prime (p = 2 included) or v = 0 meaning the real place.
long hilbert_symbol(const Int& a, const Int& b, long v);

struct QuaternionAlgebra {
  long disc = 2;  // squarefree, odd number of prime factors
  Int a, b;       // i^2 = a, j^2 = b, ij = -ji; both negative (definite)
};

// Searches the classical presentations first, certifying the ramification
// set with Hilbert symbols at every place dividing 2ab and at infinity.
QuaternionAlgebra quaternion_algebra(long n_minus);

struct QuatLattice {
  IntMat basis;  // 4x4, columns; lattice = (1/den) * column span
  Int den = 1;
};

struct BrandtModule {
  long n_plus = 1, n_minus = 2;
  QuaternionAlgebra alg;
  // arithmetic of the ambient maximal order O in its own basis e_0..e_3:
  std::array<IntMat, 4> mult;  // e_u * e_v = sum_w mult[u].at(w, v) * e_w
  IntMat conj_map;             // column v = coordinates of conj(e_v)
  IntMat gram;                 // Trd(e_u * conj(e_v)); Nrd(x) = x^T G x / 2
  IntMat unit;                 // 4x1, coordinates of 1
  QuatLattice order;           // the Eichler order of level n_plus
  std::vector<QuatLattice> classes;  // right-ideal class representatives
  std::vector<long> weights;         // w_i = |left-order units| / 2
  std::map<long, IntMat> cache;      // Brandt matrices by index
};

// Right-ideal classes of the level-n_plus Eichler order, enumerated along the
// prime-neighbor graph and certified complete by the mass formula.
BrandtModule ideal_class_module(long n_plus, long n_minus);
BrandtModule ideal_class_module(long n_plus, long n_minus, const QuaternionAlgebra& alg);

// B(n) on the class module (columns transform, pairing diag(w), so that
// weighted self-adjointness reads B^T diag(w) = diag(w) B). Requires
// gcd(n, n_minus) = 1 or n a prime dividing the level.
const IntMat& brandt_matrix(BrandtModule& M, long n);

struct DefiniteEigenvector {
  std::string packet;
  std::vector<Int> g;           // primitive; first nonzero entry positive
  std::vector<long> weights;    // copied from the module, for the pairing
  std::map<long, Int> certified;  // operator index -> eigenvalue, verified
};

// The rank-one eigenspace of f transferred to the class module; throws
// "JL transfer failed" when the eigensystem is absent.
DefiniteEigenvector definite_eigenvector(BrandtModule& M, const EigenformPacket& f);

// ord_p of <g, g> = sum_i w_i g_i^2.
long xi_exponent(const DefiniteEigenvector& g, long p);

// true iff some coordinate pairing <e_i, g> = w_i g_i is a p-unit.
bool unit_pairing_check(const BrandtModule& M, const DefiniteEigenvector& g, long p);

// true iff M/(p, ops - eigenvalues)M is one-dimensional over F_p.
bool freeness_check(BrandtModule& M, const EigenformPacket& f, long p);

}  // namespace mulab
