#pragma once

#include <map>
#include <string>
#include <vector>

#include "derham/linalg.hpp"
#include "derham/polyspace.hpp"

namespace derham {

// Simplicial mesh with its full skeleton. Simplices are ascending vertex tuples.
struct SimplicialMesh {
  int dim = 0;
  std::vector<Vec> vertices;
  std::vector<std::vector<int>> cells;  // sorted copies of the input cells
  // simplices[d][id] is the vertex tuple of the d-simplex `id`
  std::vector<std::vector<std::vector<int>>> simplices;
  std::vector<std::map<std::vector<int>, int>> lookup;
  // faces_of[d][id][j]: id of the (d-1)-face opposite local vertex j
  std::vector<std::vector<std::vector<int>>> faces_of;
  // cofaces[d][id]: ids of (d+1)-simplices containing the simplex
  std::vector<std::vector<std::vector<int>>> cofaces;
  // cells_around[d][id]: top cells containing the simplex, ascending
  std::vector<std::vector<std::vector<int>>> cells_around;
  std::vector<std::vector<bool>> on_boundary;

  int count(int d) const { return static_cast<int>(simplices.at(d).size()); }
  int find(const std::vector<int>& sorted) const;  // -1 when absent
  Simplex cell_simplex(int c) const;
  Simplex simplex(int d, int id) const;
  bool has_boundary() const;
};

SimplicialMesh build_mesh(std::vector<Vec> vertices, std::vector<std::vector<int>> cells);
int euler_characteristic(const SimplicialMesh& m);

// Orthonormal frames. Edges carry a tangent (and normals in 2D/3D); 3D faces carry
// a normal and two tangents.
struct Frame {
  Vec tangent;
  std::vector<Vec> normals;
  Vec normal;
  std::vector<Vec> tangents;
};

Frame edge_frame(const Vec& a, const Vec& b);
Frame face_frame(const Vec& a, const Vec& b, const Vec& c);
Frame simplex_frame(const SimplicialMesh& m, int d, int id);

// Rotates every 3D edge-normal pair about its tangent; used to check that counts
// and ranks do not depend on the normal completion.
void set_edge_normal_rotation(double angle);
double edge_normal_rotation();

struct BoundaryClassification {
  bool has_corner_notion = true;
  std::vector<int> boundary_vertices;
  std::vector<int> corner_vertices;
  std::vector<int> noncorner_vertices;
  std::vector<int> boundary_edges;
  std::vector<int> corner_edges;
  std::vector<int> noncorner_edges;
  std::vector<int> boundary_faces;

  int V0() const { return static_cast<int>(boundary_vertices.size()); }
  int V0s() const { return static_cast<int>(noncorner_vertices.size()); }
  int E0() const { return static_cast<int>(boundary_edges.size()); }
  bool empty() const { return boundary_vertices.empty(); }
};

BoundaryClassification classify_boundary(const SimplicialMesh& m, double tol = 1e-12);

// Body-centred cubic tetrahedralisation: every cube centre is joined to its 8 corners
// and to the 6 neighbouring centres, boundary faces using their face centres.
SimplicialMesh fourteen_tet_grid(int nx, int ny, int nz);

namespace meshes {
SimplicialMesh single_simplex(int n);
SimplicialMesh interval_chain(int segments);
SimplicialMesh two_triangle_square();
SimplicialMesh three_triangle_square();  // split boundary edge: one non-corner vertex
SimplicialMesh annulus();
SimplicialMesh two_tets();
SimplicialMesh three_tets_edge();
// All contractible test meshes of dimension n.
std::vector<std::pair<std::string, SimplicialMesh>> contractible(int n);
SimplicialMesh by_name(const std::string& name);
}  // namespace meshes

}  // namespace derham
