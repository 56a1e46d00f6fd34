#include <chrono>
#include <cstdio>

#include "mulab/brandt.hpp"
#include "mulab/hecke.hpp"

using namespace mulab;

static void show(const char* tag, BrandtModule& M) {
  std::fprintf(stderr, "== (%ld,%ld) %s: a=%s b=%s h=%zu w=[", M.n_plus, M.n_minus, tag,
              M.alg.a.get_str().c_str(), M.alg.b.get_str().c_str(),
              M.classes.size());
  for (size_t i = 0; i < M.weights.size(); ++i)
    std::printf("%s%ld", i ? "," : "", M.weights[i]);
  std::printf("]\n");
}

int main() {
  {
    auto M = ideal_class_module(3, 2);
    show("level6", M);
  }
  {
    auto M = ideal_class_module(1, 30);
    show("disc30", M);
  }
  {
    // second presentation of the same algebra: invariants must not move
    QuaternionAlgebra alg;
    alg.disc = 11;
    alg.a = -3;
    alg.b = -11;
    auto M = ideal_class_module(1, 11, alg);
    show("disc11 alt", M);
    auto S = build_space(11);
    auto pk = newform_packets(S, 1);
    auto g = definite_eigenvector(M, pk.packets[0]);
    std::printf("alt g = [");
    for (size_t i = 0; i < g.g.size(); ++i)
      std::printf("%s%s", i ? "," : "", g.g[i].get_str().c_str());
    std::printf("]  xi p=5: %ld p=7: %ld\n", xi_exponent(g, 5), xi_exponent(g, 7));
  }
  {
    auto M = ideal_class_module(1, 11);
    const IntMat& B6 = brandt_matrix(M, 6);
    IntMat P = brandt_matrix(M, 2) * brandt_matrix(M, 3);
    std::printf("B(6) == B(2)B(3): %d\n", B6 == P);
    const IntMat& B9 = brandt_matrix(M, 9);
    IntMat Q = brandt_matrix(M, 3) * brandt_matrix(M, 3) - Int(3) * brandt_matrix(M, 1);
    std::printf("B(9) == B(3)^2 - 3B(1): %d\n", B9 == Q);
  }

  // h == 1 + rank of the new-at-n_minus Hecke algebra, every admissible split
  auto t0 = std::chrono::steady_clock::now();
  for (long N = 2; N <= 100; ++N) {
    if (!is_squarefree(N)) continue;
    auto qs = prime_factors_squarefree(N);
    long k = static_cast<long>(qs.size());
    for (long msk = 1; msk < (1 << k); ++msk) {
      if (__builtin_popcountl(msk) % 2 == 0) continue;
      long nm = 1, np = 1;
      for (long t = 0; t < k; ++t) ((msk >> t) & 1 ? nm : np) *= qs[t];
      std::fprintf(stderr, "  [%ld,%ld]", np, nm);
      auto M = ideal_class_module(np, nm);
      std::fprintf(stderr, "=h%zu", M.classes.size());
      auto S = build_space(N);
      auto T = hecke_algebra(S, np, nm);
      long expect = 1 + T.rank();
      if (static_cast<long>(M.classes.size()) != expect) {
        std::fprintf(stderr, "JL MISMATCH at (%ld,%ld): h=%zu expect=%ld\n", np, nm,
                    M.classes.size(), expect);
        return 1;
      }
    }
    if (N % 10 == 0) {
      auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
      std::fprintf(stderr, "JL sweep through N=%ld ok (%lld ms)\n", N,
                  static_cast<long long>(dt));
    }
  }
  std::printf("JL sweep done\n");
  return 0;
}
