#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "derham/elements.hpp"
#include "derham/mesh.hpp"

namespace derham {

struct GlobalDof {
  int dim = 0;      // dimension of the carrying subsimplex
  int sub_id = 0;   // mesh simplex id
  int local_index = 0;
  int cell = -1;    // owning cell for per_cell DoFs
  Continuity continuity = Continuity::single_valued;
  int rep_cell = 0;   // first cell seeing the DoF
  int rep_local = 0;  // its local index there
  std::string label;
};

// Interelement continuity imposed on a broken polynomial space, per subsimplex dimension.
enum class Constraint { none, value, trace, jet1, jet2, normals };

struct ContinuitySpec {
  std::vector<Constraint> by_dim;  // entries for d = 0 .. n-1
};

// Piecewise polynomial k-forms of degree `degree` on a mesh. Every global basis
// function is stored cellwise in full monomial coordinates.
struct GlobalSpace {
  std::shared_ptr<const SimplicialMesh> mesh;
  std::string name;
  int n = 0;
  int k = 0;
  int degree = 0;
  std::optional<ElementKey> key;  // DoF-defined spaces
  long dimension = 0;
  std::vector<Simplex> cells;
  std::vector<Mat> basis;                // per cell: nmono x nloc
  std::vector<std::vector<long>> l2g;    // per cell: local column -> global id
  // DoF-defined spaces only
  std::vector<Mat> dof_mono;             // per cell: local DoFs on the monomials
  std::vector<GlobalDof> dofs;
  std::vector<std::vector<long>> dof_l2g;  // per cell: local DoF -> global DoF

  bool has_dofs() const { return key.has_value(); }
  long nmono() const { return dim_full(n, degree, k); }
};

enum class AssemblyMode { full, count_only };

GlobalSpace assemble_space(const SimplicialMesh& mesh, const ElementKey& key, AssemblyMode mode = AssemblyMode::full);
// Kernel of the continuity constraints on broken P_degree Lambda^k.
GlobalSpace constrained_space(const SimplicialMesh& mesh, int k, int degree, const ContinuitySpec& spec,
                              const std::string& name);
ContinuitySpec continuity_spec(const ElementKey& key);

// Functionals of one constraint kind at a point x of the subsimplex `sub` (global vertex
// ids), on the monomials of `cell`. Columns: comp * nmono + a.
Mat constraint_functionals(const SimplicialMesh& m, const Simplex& cell, int k, int degree, Constraint ct,
                           const std::vector<int>& sub, const Vec& x);

// Rows: constraint functionals of `spec` applied to the broken space (cells x nmono).
Mat constraint_matrix(const SimplicialMesh& mesh, int k, int degree, const ContinuitySpec& spec);
// Broken coordinates of every global basis function: (cells * nmono) x dimension.
Mat broken_basis(const GlobalSpace& s);
// Broken coordinates of a space elevated to degree q.
Mat broken_basis(const GlobalSpace& s, int q);
// Max relative violation of `spec` by the members of s.
double constraint_residual(const GlobalSpace& s, const ContinuitySpec& spec);

// Global DoF values of a broken function (per-cell monomial coordinates of degree s.degree).
Vec interpolate(const GlobalSpace& s, const std::vector<Vec>& cellwise);

// Cell operator on monomial coordinates: (cell, source degree, source k) -> matrix
// into P_{dst degree} Lambda^{dst k}.
using CellOperator = std::function<Mat(const Simplex& cell, int src_degree, int dst_degree)>;

struct OperatorMatrix {
  std::string name;
  long rows = 0;
  long cols = 0;
  Mat dense;
  double containment_residual = 0.0;

  std::vector<std::tuple<long, long, double>> entries(double drop = 0.0) const;
};

// Column j: target DoFs of op(basis_j). Throws when op(src) leaves dst.
OperatorMatrix assemble_operator(const GlobalSpace& src, const GlobalSpace& dst, const CellOperator& op,
                                 const std::string& name, double tol = 1e-8);
OperatorMatrix assemble_d(const GlobalSpace& src, const GlobalSpace& dst, double tol = 1e-8);
CellOperator exterior_derivative_operator(int k);

// Containment of spans (broken coordinates, same degree).
bool space_equal(const GlobalSpace& a, const GlobalSpace& b, double tol = 1e-8);

}  // namespace derham
