#include <cstdio>

#include "mulab/brandt.hpp"
#include "mulab/hecke.hpp"

using namespace mulab;

static void show(const char* tag, BrandtModule& M) {
  std::printf("== (%ld,%ld) %s: disc=%ld a=%s b=%s h=%zu w=[", M.n_plus,
              M.n_minus, tag, M.alg.disc, M.alg.a.get_str().c_str(),
              M.alg.b.get_str().c_str(), M.classes.size());
  for (size_t i = 0; i < M.weights.size(); ++i)
    std::printf("%s%ld", i ? "," : "", M.weights[i]);
  std::printf("]\n");
}

static void show_mat(const char* tag, const IntMat& B) {
  std::printf("%s =", tag);
  for (long i = 0; i < B.rows(); ++i) {
    std::printf(" [");
    for (long j = 0; j < B.cols(); ++j)
      std::printf("%s%s", j ? "," : "", B.at(i, j).get_str().c_str());
    std::printf("]");
  }
  std::printf("\n");
}

int main() {
  {
    auto M = ideal_class_module(1, 2);
    show("disc2", M);
  }
  {
    auto M = ideal_class_module(1, 3);
    show("disc3", M);
  }
  {
    auto M = ideal_class_module(1, 11);
    show("disc11", M);
    show_mat("B(1)", brandt_matrix(M, 1));
    show_mat("B(2)", brandt_matrix(M, 2));
    show_mat("B(3)", brandt_matrix(M, 3));
    show_mat("B(4)", brandt_matrix(M, 4));
    show_mat("B(11)", brandt_matrix(M, 11));
    auto S = build_space(11);
    auto pk = newform_packets(S, 1);
    std::printf("packets at 11: %zu\n", pk.packets.size());
    auto g = definite_eigenvector(M, pk.packets[0]);
    std::printf("g (%s) = [", g.packet.c_str());
    for (size_t i = 0; i < g.g.size(); ++i)
      std::printf("%s%s", i ? "," : "", g.g[i].get_str().c_str());
    std::printf("]  xi_exp p=5: %ld  p=7: %ld\n", xi_exponent(g, 5),
                xi_exponent(g, 7));
    std::printf("unit_pairing p=7: %d  p=3: %d\n",
                unit_pairing_check(M, g, 7), unit_pairing_check(M, g, 3));
    std::printf("freeness p=7: %d\n", freeness_check(M, pk.packets[0], 7));
  }
  {
    auto M = ideal_class_module(2, 11);
    show("q|N+ side", M);
    show_mat("B(2)", brandt_matrix(M, 2));
    show_mat("B(3)", brandt_matrix(M, 3));
  }
  {
    auto M = ideal_class_module(7, 2);
    show("14 split A", M);
    show_mat("B(7)", brandt_matrix(M, 7));
    show_mat("B(2)", brandt_matrix(M, 2));
    show_mat("B(3)", brandt_matrix(M, 3));
    auto S = build_space(14);
    auto pk = newform_packets(S, 2);
    std::printf("packets at 14 (2-new): %zu\n", pk.packets.size());
    auto g = definite_eigenvector(M, pk.packets[0]);
    std::printf("g (%s) = [", g.packet.c_str());
    for (size_t i = 0; i < g.g.size(); ++i)
      std::printf("%s%s", i ? "," : "", g.g[i].get_str().c_str());
    std::printf("]\n");
  }
  {
    auto M = ideal_class_module(2, 7);
    show("14 split B", M);
    show_mat("B(2)", brandt_matrix(M, 2));
    show_mat("B(7)", brandt_matrix(M, 7));
    show_mat("B(3)", brandt_matrix(M, 3));
    auto S = build_space(14);
    auto pk = newform_packets(S, 7);
    auto g = definite_eigenvector(M, pk.packets[0]);
    std::printf("g (%s) = [", g.packet.c_str());
    for (size_t i = 0; i < g.g.size(); ++i)
      std::printf("%s%s", i ? "," : "", g.g[i].get_str().c_str());
    std::printf("]\n");
  }
  return 0;
}
