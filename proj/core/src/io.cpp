#include "derham/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace derham {

using nlohmann::json;

SimplicialMesh parse_mesh(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MeshFormatError(std::string("mesh: ") + e.what());
  }
  if (!j.is_object()) throw MeshFormatError("mesh: top level must be an object");
  for (const char* key : {"dim", "vertices", "cells"})
    if (!j.contains(key)) throw MeshFormatError(std::string("mesh: missing \"") + key + "\"");
  if (!j["dim"].is_number_integer()) throw MeshFormatError("mesh: \"dim\" must be an integer");
  const int dim = j["dim"].get<int>();
  if (dim < 1 || dim > 3) throw MeshFormatError("mesh: dim must be 1, 2 or 3");
  if (!j["vertices"].is_array() || !j["cells"].is_array()) throw MeshFormatError("mesh: vertices and cells must be arrays");

  std::vector<Vec> verts;
  for (std::size_t i = 0; i < j["vertices"].size(); ++i) {
    const auto& v = j["vertices"][i];
    if (!v.is_array() || static_cast<int>(v.size()) != dim)
      throw MeshFormatError("mesh: vertex " + std::to_string(i) + " needs " + std::to_string(dim) + " coordinates");
    Vec x(dim);
    for (int c = 0; c < dim; ++c) {
      if (!v[c].is_number()) throw MeshFormatError("mesh: vertex " + std::to_string(i) + " has a non-numeric coordinate");
      x(c) = v[c].get<double>();
    }
    verts.push_back(std::move(x));
  }
  std::vector<std::vector<int>> cells;
  for (std::size_t i = 0; i < j["cells"].size(); ++i) {
    const auto& c = j["cells"][i];
    if (!c.is_array() || static_cast<int>(c.size()) != dim + 1)
      throw MeshFormatError("mesh: cell " + std::to_string(i) + " needs " + std::to_string(dim + 1) + " vertices");
    std::vector<int> cell;
    for (const auto& v : c) {
      if (!v.is_number_integer()) throw MeshFormatError("mesh: cell " + std::to_string(i) + " has a non-integer index");
      const long id = v.get<long>();
      if (id < 0 || id >= static_cast<long>(verts.size()))
        throw MeshFormatError("mesh: cell " + std::to_string(i) + " references missing vertex " + std::to_string(id));
      cell.push_back(static_cast<int>(id));
    }
    cells.push_back(std::move(cell));
  }
  if (cells.empty()) throw MeshFormatError("mesh: no cells");
  try {
    return build_mesh(std::move(verts), std::move(cells));
  } catch (const std::invalid_argument& e) {
    throw MeshFormatError(e.what());
  }
}

SimplicialMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshFormatError("cannot open mesh file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_mesh(ss.str());
}

std::string mesh_to_json(const SimplicialMesh& mesh) {
  json j;
  j["dim"] = mesh.dim;
  j["vertices"] = json::array();
  for (const auto& v : mesh.vertices) {
    json row = json::array();
    for (long c = 0; c < v.size(); ++c) row.push_back(v(c));
    j["vertices"].push_back(row);
  }
  j["cells"] = mesh.cells;
  return j.dump();
}

void write_mesh(const std::string& path, const SimplicialMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << mesh_to_json(mesh) << '\n';
}

void write_sparse(std::ostream& os, const Mat& m, double drop) {
  long nnz = 0;
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > drop) ++nnz;
  os << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
  char buf[64];
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > drop) {
        std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
        os << i << ' ' << j << ' ' << buf << '\n';
      }
}

Mat read_sparse(std::istream& is) {
  long rows = 0, cols = 0, nnz = 0;
  if (!(is >> rows >> cols >> nnz) || rows < 0 || cols < 0) throw std::runtime_error("sparse: bad header");
  Mat m = Mat::Zero(rows, cols);
  for (long e = 0; e < nnz; ++e) {
    long i = 0, j = 0;
    double v = 0.0;
    if (!(is >> i >> j >> v) || i < 0 || i >= rows || j < 0 || j >= cols)
      throw std::runtime_error("sparse: bad entry " + std::to_string(e));
    m(i, j) = v;
  }
  return m;
}

json to_json(const ExactnessReport& r) {
  return {{"name", r.name},
          {"spaces", r.spaces},
          {"dims", r.dims},
          {"ranks", r.ranks},
          {"nullities", r.nullities},
          {"dd_residuals", r.dd_residuals},
          {"containment", r.containment},
          {"betti", r.betti},
          {"expected_betti", r.expected_betti},
          {"alternating_sum", r.alternating_sum},
          {"complex", r.complex_ok},
          {"exact", r.exact},
          {"pass", r.pass()}};
}

json to_json(const UnisolvenceReport& r) {
  return {{"pass", r.pass},         {"rows", r.rows},   {"cols", r.cols},
          {"rank", r.rank},         {"sv_ratio", r.sv_ratio}, {"shape_dim", r.shape_dim},
          {"formula_total", r.paper_total}, {"identity", r.identity}};
}

json to_json(const SavingsReport& r) {
  return {{"p", r.p},
          {"V", r.counts.V},
          {"E", r.counts.E},
          {"F", r.counts.F},
          {"T", r.counts.T},
          {"dim_P_p_L1", r.dim_full},
          {"dim_P_2p_L1", r.dim_smooth},
          {"difference", r.dim_full - r.dim_smooth},
          {"formula_P_p_L1", r.formula_full},
          {"formula_P_2p_L1", r.formula_smooth},
          {"printed_per_T_P_p_L1", r.printed_full_per_T},
          {"printed_per_T_P_2p_L1", r.printed_smooth_per_T},
          {"printed_per_T_difference", r.printed_difference_per_T},
          {"asymptotic_per_T_P_p_L1", r.asymptotic_full_per_T},
          {"asymptotic_per_T_P_2p_L1", r.asymptotic_smooth_per_T},
          {"E_over_V", r.edge_vertex_ratio}};
}

json to_json(const DecompositionReport& r) {
  return {{"name", r.name},
          {"target_dim", r.target_dim},
          {"conforming_dim", r.lagrange_dim},
          {"bubble_dim", r.bubble_dim},
          {"rank_parts", r.rank_parts},
          {"rank_union", r.rank_union},
          {"continuity_residual", r.continuity_residual},
          {"split_residual", r.split_residual},
          {"pass", r.pass}};
}

json to_json(const BggIdentity& r) {
  return {{"identity_residual", r.residual}, {"s0_rows", r.s0_rows}, {"s0_cols", r.s0_cols},
          {"s0_rank", r.s0_rank},            {"s0_inverse_residual", r.s0_inverse_residual},
          {"s1_rows", r.s1_rows},            {"s1_rank", r.s1_rank}};
}

json to_json(const HuZhangStressElement& h) {
  return {{"p", h.p},
          {"vertex_dofs", h.vertex_dofs},
          {"edge_dofs", h.edge_dofs},
          {"skew_dofs", h.skew_dofs},
          {"bubble_dofs", h.bubble_dofs},
          {"total", h.total},
          {"shape_dim", h.shape_dim},
          {"trimmed_dim", h.trimmed_dim},
          {"count_identity", h.count_identity},
          {"rank", h.rank},
          {"unisolvent", h.unisolvent},
          {"symmetric_rank", h.symmetric_rank},
          {"symmetric_dim", h.symmetric_dim},
          {"symmetric_unisolvent", h.symmetric_unisolvent},
          {"pass", h.pass()}};
}

json to_json(const StressComplexReport& r) {
  return {{"exactness", to_json(r.exactness)},
          {"sigma_dim", r.sigma_dim},
          {"ih_right_inverse", r.ih_right_inverse},
          {"ih_conformity", r.ih_conformity},
          {"pi_h_rank", r.pi_h_rank},
          {"pass", r.pass}};
}

json to_json(const BoundaryClassification& bc) {
  return {{"V0", bc.V0()},
          {"V0s", bc.V0s()},
          {"E0", bc.E0()},
          {"corner_vertices", bc.corner_vertices},
          {"noncorner_vertices", bc.noncorner_vertices},
          {"corner_edges", bc.corner_edges},
          {"noncorner_edges", bc.noncorner_edges}};
}

}  // namespace derham
