#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "derham/bgg.hpp"
#include "json.hpp"

namespace derham {

struct MeshFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// { "dim": n, "vertices": [[x, ...], ...], "cells": [[i0, ...], ...] }, 0-based.
SimplicialMesh parse_mesh(const std::string& text);
SimplicialMesh read_mesh(const std::string& path);
std::string mesh_to_json(const SimplicialMesh& mesh);
void write_mesh(const std::string& path, const SimplicialMesh& mesh);

// "rows cols nnz" then "row col value" lines, 0-based, 17 significant digits.
void write_sparse(std::ostream& os, const Mat& m, double drop = 0.0);
Mat read_sparse(std::istream& is);

nlohmann::json to_json(const ExactnessReport& r);
nlohmann::json to_json(const UnisolvenceReport& r);
nlohmann::json to_json(const SavingsReport& r);
nlohmann::json to_json(const DecompositionReport& r);
nlohmann::json to_json(const BggIdentity& r);
nlohmann::json to_json(const HuZhangStressElement& h);
nlohmann::json to_json(const StressComplexReport& r);
nlohmann::json to_json(const BoundaryClassification& bc);

}  // namespace derham
