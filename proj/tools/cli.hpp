#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace derham::cli {

enum ExitCode { kPass = 0, kFail = 1, kUsage = 2 };

struct RunConfig {
  std::string command;
  std::string mesh;               // file path or builtin:NAME
  std::string grid;               // nx,ny,nz for the body-centred cubic grid
  int dim = 0;
  int r = 1;
  int k = -1;
  int p = -1;
  std::string p_range;            // A:B
  std::string family;             // hz, trimmed, vector_hermite, vector_lagrange
  bool mixed = false;
  std::string format = "json";
  std::string out;
  double tol = 0.0;
  std::string betti;
  std::string what = "d";         // export target: d or mesh
};

// Degree list from --p or --p-range; empty when neither was given.
std::vector<int> degree_list(const RunConfig& c);
std::vector<int> parse_int_list(const std::string& s, char sep = ',');
double default_tolerance();  // DERHAM_TOL or the library default

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace derham::cli
