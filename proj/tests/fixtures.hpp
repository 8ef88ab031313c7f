#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef HARDYSEQ_FIXTURE_DIR
#error "HARDYSEQ_FIXTURE_DIR must be defined"
#endif

namespace fixtures {

// c -> theta_c from counterexample_floor.txt.
inline std::map<double, double> counterexample_floors() {
  std::ifstream in(std::string(HARDYSEQ_FIXTURE_DIR) + "/counterexample_floor.txt");
  if (!in) throw std::runtime_error("missing counterexample_floor.txt");
  std::map<double, double> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double c = 0, theta = 0;
    if (ls >> c >> theta) out[c] = theta;
  }
  return out;
}

}  // namespace fixtures
