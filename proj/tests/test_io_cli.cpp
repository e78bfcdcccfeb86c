#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "derham/io.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace derham;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("derham_test_" + name)).string();
}

void write_file(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("mesh JSON round trip") {
  for (const char* name : {"chain3", "square3", "annulus", "three_tets"}) {
    const auto m = meshes::by_name(name);
    const auto r = parse_mesh(mesh_to_json(m));
    CHECK(r.dim == m.dim);
    CHECK(r.cells == m.cells);
    for (int d = 0; d <= m.dim; ++d) CHECK(r.count(d) == m.count(d));
    for (std::size_t i = 0; i < m.vertices.size(); ++i) CHECK((r.vertices[i] - m.vertices[i]).norm() == 0.0);
  }
}

TEST_CASE("malformed meshes are rejected with a diagnostic") {
  const char* bad[] = {
      "not json",
      "[]",
      R"({"vertices": [[0,0]], "cells": [[0]]})",
      R"({"dim": 4, "vertices": [], "cells": []})",
      R"({"dim": 2, "vertices": [[0,0],[1,0],[0,1]], "cells": []})",
      R"({"dim": 2, "vertices": [[0,0],[1,0],[0]], "cells": [[0,1,2]]})",
      R"({"dim": 2, "vertices": [[0,0],[1,0],[0,1]], "cells": [[0,1,5]]})",
      R"({"dim": 2, "vertices": [[0,0],[1,0],[2,0]], "cells": [[0,1,2]]})",
      R"({"dim": 2, "vertices": [[0,0],[1,0],["x",1]], "cells": [[0,1,2]]})",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_mesh(text), MeshFormatError);
  }
  CHECK_THROWS_AS(read_mesh("/nonexistent/mesh.json"), MeshFormatError);
}

TEST_CASE("sparse matrix text format round trip") {
  std::mt19937 g(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat m = Mat::Zero(7, 5);
  for (int i = 0; i < 12; ++i) m(g() % 7, g() % 5) = u(g) * 1e3;
  std::stringstream ss;
  write_sparse(ss, m);
  const Mat r = read_sparse(ss);
  CHECK(r.rows() == 7);
  CHECK(r.cols() == 5);
  CHECK((r - m).cwiseAbs().maxCoeff() == 0.0);
  std::stringstream bad("2 2 1\n5 0 1.0\n");
  CHECK_THROWS(read_sparse(bad));
}

TEST_CASE("cli: tables") {
  const Result r = run({"tables", "--dim", "2", "--p", "3"});
  CHECK(r.code == cli::kPass);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "dim,r,k,p,element,local_dofs,global_dim,formula_dim,formula,match");
  int rows[3] = {0, 0, 0};
  std::string line;
  while (std::getline(lines, line)) rows[line[2] - '0'] += 1;
  CHECK(rows[0] == 3);
  CHECK(rows[1] == 3);
  CHECK(rows[2] == 3);
  // the r = 1 top form counts C(p + 2, 2) per triangle
  CHECK(r.out.find("2,1,2,3,\"DG (r1, p=3, k=2, n=2)\",10,20,20,\"10F\",yes") != std::string::npos);

  const Result tet = run({"tables", "--mesh", "builtin:tet", "--p", "3", "--format", "json"});
  const auto j = nlohmann::json::parse(tet.out);
  bool found = false;
  for (const auto& row : j["rows"])
    if (row["r"] == 2 && row["k"] == 2) {
      CHECK(row["global_dim"] == 60);
      found = true;
    }
  CHECK(found);
}

TEST_CASE("cli: verify exit codes") {
  CHECK(run({"verify", "--mesh", "builtin:square2", "--r", "1"}).code == cli::kPass);
  const Result ann = run({"verify", "--mesh", "builtin:annulus", "--r", "1", "--p", "3"});
  CHECK(ann.code == cli::kFail);
  CHECK(ann.err.find("observed Betti numbers 1 1 0") != std::string::npos);
  CHECK(run({"verify", "--mesh", "builtin:annulus", "--r", "1", "--p", "3", "--betti", "1,1,0"}).code == cli::kPass);

  const std::string bad = temp_path("corrupt.json");
  write_file(bad, "{\"dim\": 2, \"vertices\": [[0,0]");
  const Result c = run({"verify", "--mesh", bad});
  CHECK(c.code == cli::kUsage);
  CHECK(c.err.find("mesh") != std::string::npos);
  std::filesystem::remove(bad);
}

TEST_CASE("cli: mesh files written by export are accepted") {
  const std::string path = temp_path("square.json");
  CHECK(run({"export", "--what", "mesh", "--mesh", "builtin:square3", "--out", path}).code == cli::kPass);
  const Result r = run({"bc", "--mesh", path, "--r", "1", "--p", "4"});
  CHECK(r.code == cli::kPass);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["classification"]["V0"] == 5);
  CHECK(j["classification"]["V0s"] == 1);
  std::filesystem::remove(path);

  const auto sq = nlohmann::json::parse(run({"bc", "--mesh", "builtin:square2", "--r", "1", "--p", "4"}).out);
  CHECK(sq["classification"]["V0"] == 4);
  CHECK(sq["classification"]["V0s"] == 0);
  for (const auto& s : sq["spaces"]) CHECK(s["match"] == true);
}

TEST_CASE("cli: element, compare, bgg, export") {
  const Result e = run({"element", "--r", "2", "--k", "1", "--dim", "3", "--p", "4"});
  CHECK(e.code == cli::kPass);
  const auto j = nlohmann::json::parse(e.out);
  CHECK(j["unisolvence"]["pass"] == true);
  CHECK(j["dofs"].size() == 105);

  const Result c = run({"compare", "--p", "4", "--grid", "2,2,2"});
  CHECK(c.code == cli::kPass);
  CHECK(c.out.find("printed_per_T,170,30.5,139.5") != std::string::npos);

  CHECK(run({"bgg", "--p", "1"}).code == cli::kPass);

  const Result d = run({"export", "--mesh", "builtin:square2", "--r", "1", "--k", "0", "--p", "3"});
  CHECK(d.code == cli::kPass);
  std::istringstream in(d.out);
  const Mat m = read_sparse(in);
  CHECK(m.rows() == 19);
  CHECK(m.cols() == 14);
  CHECK(numerical_rank(m) == 13);
}

TEST_CASE("cli: usage errors") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"tables", "--dim", "2"}).code == cli::kUsage);
  CHECK(run({"tables", "--p", "3", "--bogus"}).code == cli::kUsage);
  CHECK(run({"tables", "--p-range", "5:2"}).code == cli::kUsage);
  CHECK(run({"verify", "--format", "xml"}).code == cli::kUsage);
  CHECK(run({"verify", "--mesh", "builtin:nowhere"}).code == cli::kUsage);
  CHECK(run({"verify", "--r", "1", "--p", "1"}).code == cli::kUsage);
  CHECK(run({"verify", "--betti", "1,x"}).code == cli::kUsage);
  CHECK(run({"element", "--r", "1"}).code == cli::kUsage);
  CHECK(run({"compare", "--grid", "2,2"}).code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kPass);
}

TEST_CASE("cli: tolerance precedence") {
  ::unsetenv("DERHAM_TOL");
  CHECK(cli::default_tolerance() == kRankTol);
  ::setenv("DERHAM_TOL", "1e-7", 1);
  CHECK(cli::default_tolerance() == 1e-7);
  ::setenv("DERHAM_TOL", "garbage", 1);
  CHECK(cli::default_tolerance() == kRankTol);
  // a tolerance so loose that true ranks collapse makes verification fail
  ::setenv("DERHAM_TOL", "0.9", 1);
  CHECK(run({"verify", "--mesh", "builtin:square2", "--p", "3"}).code == cli::kFail);
  CHECK(run({"verify", "--mesh", "builtin:square2", "--p", "3", "--tol", "1e-9"}).code == cli::kPass);
  ::unsetenv("DERHAM_TOL");
}

TEST_CASE("cli: output is deterministic") {
  const std::vector<std::string> args{"verify", "--mesh", "builtin:two_tets", "--r", "2", "--p", "5"};
  CHECK(run(args).out == run(args).out);
  const std::vector<std::string> t{"tables", "--p-range", "3:4", "--mesh", "builtin:three_tets"};
  CHECK(run(t).out == run(t).out);
}
