#include <cstdio>

// Placeholder entry point; subcommands are wired up as the library modules
// land. TODO: replace with the CLI11 application once mulab/cache.hpp exists.
int main() {
  std::fprintf(stderr, "mulab: no subcommands wired up yet\n");
  return 2;
}
