#include "mulab/hecke.hpp"

#include <stdexcept>

namespace mulab {

namespace {

// T_n on one block from its stored prime operators: multiplicative across
// coprime factors, T_{p^{k+1}} = T_p T_{p^k} - p T_{p^{k-1}} at good p,
// U_{q^k} = U_q^k.
IntMat block_tn(const HeckeBlock& blk, long N, long n) {
  long k = blk.basis.cols();
  IntMat result = IntMat::identity(k);
  for (auto& [q, e] : factorize(Int(n))) {
    long ql = static_cast<long>(q.get_si());
    const IntMat& Tq = blk.ops.at(ql);
    IntMat prev = IntMat::identity(k), cur = Tq;
    for (long i = 1; i < e; ++i) {
      IntMat next = Tq * cur;
      if (N % ql != 0) next = next - Int(ql) * prev;
      prev = cur;
      cur = next;
    }
    result = result * cur;
  }
  return result;
}

long flatten_dim(const std::vector<HeckeBlock>& blocks) {
  long D = 0;
  for (auto& blk : blocks) D += blk.basis.cols() * blk.basis.cols();
  return D;
}

IntMat flatten_tuple(const std::vector<IntMat>& tuple, long D) {
  IntMat v(D, 1);
  long off = 0;
  for (auto& M : tuple)
    for (long i = 0; i < M.rows(); ++i)
      for (long j = 0; j < M.cols(); ++j) v.at(off++, 0) = M.at(i, j);
  return v;
}

std::vector<IntMat> unflatten_column(const IntMat& A, long col,
                                     const std::vector<HeckeBlock>& blocks) {
  std::vector<IntMat> tuple;
  long off = 0;
  for (auto& blk : blocks) {
    long k = blk.basis.cols();
    IntMat M(k, k);
    for (long i = 0; i < k; ++i)
      for (long j = 0; j < k; ++j) M.at(i, j) = A.at(off++, col);
    tuple.push_back(M);
  }
  return tuple;
}

std::vector<IntMat> tuple_product(const std::vector<IntMat>& a,
                                  const std::vector<IntMat>& b) {
  std::vector<IntMat> c;
  c.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) c.push_back(a[i] * b[i]);
  return c;
}

}  // namespace

std::vector<IntMat> HeckeAlgebra::element(long i) const {
  return unflatten_column(basis, i, blocks);
}

HeckeAlgebra hecke_algebra(const ModSymSpace& S, long N1, long N2) {
  if (N1 < 1 || N2 < 1 || gcd(Int(N1), Int(N2)) != 1)
    throw std::invalid_argument("hecke_algebra: factors must be coprime positive integers");
  long N = N1 * N2;
  if (!is_squarefree(Int(N))) throw std::invalid_argument("hecke_algebra: level not squarefree");
  if (S.N != N) throw std::invalid_argument("hecke_algebra: space level mismatch");

  HeckeAlgebra A;
  A.N1 = N1;
  A.N2 = N2;
  for (auto& blk : isotypic_blocks(S)) {
    bool is_new = true;
    for (long q : prime_factors_squarefree(N2)) {
      const IntMat& Uq = blk.ops.at(q);
      if (Uq * Uq != IntMat::identity(Uq.rows())) {
        is_new = false;
        break;
      }
    }
    if (is_new) A.blocks.push_back(blk);
  }
  for (auto& blk : A.blocks) A.space_dim += blk.basis.cols();

  long D = flatten_dim(A.blocks);
  if (D == 0) {
    A.basis = IntMat(0, 0);
    A.closed_after_one_pass = true;
    return A;
  }

  long B = sturm_bound(N).bound;
  IntMat gens(D, 0);
  auto push_tuple = [&](const std::vector<IntMat>& t) { gens = hstack(gens, flatten_tuple(t, D)); };
  for (long n = 1; n <= B; ++n) {
    std::vector<IntMat> t;
    for (auto& blk : A.blocks) t.push_back(block_tn(blk, N, n));
    push_tuple(t);
  }
  for (long q : prime_factors_squarefree(N)) {
    std::vector<IntMat> t;
    for (auto& blk : A.blocks) t.push_back(blk.ops.at(q));
    push_tuple(t);
  }

  IntMat H = hnf_columns(gens);
  for (long pass = 0;; ++pass) {
    IntMat extended = H;
    for (long i = 0; i < H.cols(); ++i) {
      auto bi = unflatten_column(H, i, A.blocks);
      for (long j = i; j < H.cols(); ++j) {
        auto bj = unflatten_column(H, j, A.blocks);
        auto prod = tuple_product(bi, bj);
        if (tuple_product(bj, bi) != prod)
          throw std::logic_error("hecke_algebra: operators fail to commute");
        extended = hstack(extended, flatten_tuple(prod, D));
      }
    }
    IntMat H2 = hnf_columns(extended);
    if (H2 == H) {
      A.closed_after_one_pass = (pass == 0);
      break;
    }
    if (pass > 60) throw std::logic_error("hecke_algebra: multiplicative closure fails to stabilize");
    H = H2;
  }
  A.basis = H;

  long r = A.basis.cols();
  coordinates_in_basis(A.basis, flatten_tuple(
      [&] {
        std::vector<IntMat> t;
        for (auto& blk : A.blocks) t.push_back(IntMat::identity(blk.basis.cols()));
        return t;
      }(),
      D));  // the ring contains 1
  for (long i = 0; i < r; ++i) {
    auto bi = A.element(i);
    IntMat products(D, r);
    for (long j = 0; j < r; ++j) {
      IntMat pj = flatten_tuple(tuple_product(bi, A.element(j)), D);
      for (long s = 0; s < D; ++s) products.at(s, j) = pj.at(s, 0);
    }
    A.mult.push_back(coordinates_in_basis(A.basis, products));
  }
  return A;
}

HeckeAlgebra hecke_algebra(long N1, long N2) {
  if (N1 < 1 || N2 < 1) throw std::invalid_argument("hecke_algebra: factors must be positive");
  ModSymSpace S = build_space(N1 * N2);
  return hecke_algebra(S, N1, N2);
}

CongruenceExponent congruence_exponent(const HeckeAlgebra& A,
                                       const EigenformPacket& f, long p) {
  if (p < 2 || !is_prime(Int(p))) throw std::invalid_argument("congruence_exponent: p must be prime");
  long N = A.N1 * A.N2;

  long bf = -1;
  for (size_t i = 0; i < A.blocks.size(); ++i) {
    const HeckeBlock& blk = A.blocks[i];
    if (!blk.rational_scalar || f.N != N) continue;
    bool match = true;
    for (auto& [n, s] : blk.scalars) {
      const Int& fv = (N % n == 0) ? f.uq.at(n) : f.a.at(n);
      if (fv != s) {
        match = false;
        break;
      }
    }
    if (match) {
      bf = static_cast<long>(i);
      break;
    }
  }
  if (bf < 0) throw std::invalid_argument("packet not in space");

  long r = A.rank();
  IntMat pi(1, r);
  for (long i = 0; i < r; ++i) {
    IntMat M = A.element(i)[bf];
    if (M != M.at(0, 0) * IntMat::identity(M.rows()))
      throw std::logic_error("congruence_exponent: non-scalar action on a scalar block");
    pi.at(0, i) = M.at(0, 0);
  }

  IntMat K = kernel_saturated(pi);
  IntMat ann_coef;
  if (K.cols() == 0) {
    ann_coef = IntMat::identity(r);
  } else {
    IntMat stack(r * K.cols(), r);
    for (long i = 0; i < r; ++i) {
      IntMat Mi = A.mult[i] * K;  // column j = coords of b_i * (j-th kernel vector)
      for (long j = 0; j < K.cols(); ++j)
        for (long s = 0; s < r; ++s) stack.at(j * r + s, i) = Mi.at(s, j);
    }
    ann_coef = kernel_saturated(stack);
  }

  IntMat values = pi * ann_coef;
  Int g = 0;
  for (long j = 0; j < values.cols(); ++j) g = gcd(g, values.at(0, j));
  if (g == 0) throw std::logic_error("congruence_exponent: annihilator vanishes on the packet line");

  CongruenceExponent result;
  result.packet = packet_label(f);
  result.N1 = A.N1;
  result.N2 = A.N2;
  result.p = p;
  result.exponent = padic_valuation_finite(g, Int(p));
  return result;
}

CongruenceExponent congruence_exponent(const EigenformPacket& f, long N1,
                                       long N2, long p) {
  return congruence_exponent(hecke_algebra(N1, N2), f, p);
}

}  // namespace mulab
