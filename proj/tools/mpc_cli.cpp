#include <unistd.h>

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mpc/session.hpp"

int main(int argc, char** argv) {
  CLI::App app{"meadowcalc: exact probability calculus over signed meadows"};
  size_t max_atoms = 3;
  uint64_t seed = 0;
  std::string script;
  app.add_option("--max-atoms", max_atoms, "Largest sample space a script may declare")
      ->capture_default_str();
  app.add_option("--seed", seed, "Seed for randomized commands (reserved)")
      ->capture_default_str();
  app.add_option("script", script, "Script to run; omitted, lines come from stdin");
  CLI11_PARSE(app, argc, argv);

  mpc::Session session(max_atoms, seed);
  std::string line;

  if (!script.empty()) {
    std::ifstream in(script);
    if (!in) {
      std::cerr << "cannot open " << script << "\n";
      return 2;
    }
    while (std::getline(in, line))
      for (const std::string& out : session.run_line(line)) std::cout << out << "\n";
    return session.failed() ? 1 : 0;
  }

  bool tty = isatty(STDIN_FILENO);
  if (tty) std::cerr << "> ";
  while (std::getline(std::cin, line)) {
    for (const std::string& out : session.run_line(line)) std::cout << out << "\n";
    if (tty) std::cerr << "> ";
  }
  return 0;
}
