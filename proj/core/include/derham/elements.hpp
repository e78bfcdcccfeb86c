#pragma once

#include <string>
#include <vector>

#include "derham/linalg.hpp"
#include "derham/polyspace.hpp"

namespace derham {

enum class DofKind { point_value, point_derivative, edge_moment, face_moment, interior_moment };
enum class Continuity { single_valued, per_cell };

// r0: Lagrange/Nedelec II/BDM/DG with moment DoFs; r1, r2: the smooth families;
// hz: Hu-Zhang type H(div); trimmed: P^- with moment DoFs; vector_hermite and
// vector_lagrange: componentwise copies used by the decomposition lemmas.
enum class Family { r0, r1, r2, hz, trimmed, vector_hermite, vector_lagrange };

struct ElementKey {
  Family family = Family::r0;
  int p = 0;
  int k = 0;
  int n = 0;
  friend bool operator==(const ElementKey&, const ElementKey&) = default;
};

std::string family_name(Family f);
std::string describe(const ElementKey& key);
int min_degree(Family f, int k, int n);
// Empty string when valid, otherwise the reason (naming the minimal degree).
std::string validate(const ElementKey& key);

struct PointTerm {
  Vec bary;
  int comp = 0;
  double weight = 1.0;
  std::vector<Vec> dirs;  // Cartesian directional derivatives
};

struct MomentTerm {
  int comp = 0;
  Poly weight;            // cell barycentric polynomial, integrated over the subsimplex
  std::vector<Vec> dirs;
};

struct DoFFunctional {
  DofKind kind = DofKind::point_value;
  std::vector<int> sub;  // local vertex indices of the target subsimplex
  Continuity continuity = Continuity::single_valued;
  int local_index = 0;   // position among the DoFs of the same subsimplex
  int deriv_order = 0;
  int test_degree = -1;
  std::string label;
  double sub_volume = 1.0;
  std::vector<PointTerm> points;
  std::vector<MomentTerm> moments;
};

// DoF list of a family on a concrete simplex, ordered vertex, edge, face, interior.
std::vector<DoFFunctional> build_dofs(const ElementKey& key, const Simplex& cell);

double apply_dof(const DoFFunctional& dof, const Simplex& cell, const FormPolynomial& f);
// Row i: DoF i applied to the monomials of full_basis(cell, q, k).
Mat dof_monomial_matrix(const std::vector<DoFFunctional>& dofs, const Simplex& cell, int q, int k);

struct ElementDef {
  ElementKey key;
  std::string name;
  Simplex simplex;
  SpaceBasis shape;
  std::vector<DoFFunctional> dofs;

  int degree() const { return key.p; }
  // Shape basis in full P_p monomial coordinates (identity for full spaces).
  Mat shape_coefficients() const;
};

ElementDef make_element(const ElementKey& key, const Simplex& cell);
// r in {0, 1, 2}; realised on the reference simplex.
ElementDef element_def(int r, int p, int k, int n);
ElementDef element_def(const ElementKey& key);

Mat dof_matrix(const ElementDef& e);
Mat dof_matrix(const ElementDef& e, const Simplex& cell);

struct UnisolvenceReport {
  bool pass = false;
  int rows = 0;
  int cols = 0;
  int rank = 0;
  double sv_ratio = 0.0;       // smallest / largest singular value after row equilibration
  long shape_dim = 0;
  long paper_total = 0;        // the closed-form local count, -1 when none is printed
  std::string identity;
};

UnisolvenceReport unisolvence_check(const ElementDef& e, double tol = kRankTol);
UnisolvenceReport unisolvence_check(const ElementDef& e, const Simplex& cell, double tol = kRankTol);
long local_total_formula(const ElementKey& key);
// DoFs attached to one d-simplex, d = 0 .. n.
std::vector<long> dofs_per_subsimplex(const ElementKey& key);

struct DualBasis {
  ElementDef element;
  Mat coeffs;  // full P_p monomial coordinates, one column per DoF
  std::vector<FormPolynomial> basis;
  std::vector<std::string> classes;
  double kronecker_residual = 0.0;
};

DualBasis dual_basis(const ElementDef& e);
std::string dof_class(const DoFFunctional& d, int n);

// Local subsimplices of dimension d of an n-simplex (ascending vertex tuples).
const std::vector<std::vector<int>>& local_subsimplices(int n, int d);
// Principal lattice points of degree q on a subsimplex (cell barycentrics).
std::vector<Vec> lattice_points(int n, const std::vector<int>& sub, int q);

// Bubbles: members with vanishing trace on the cell boundary.
SpaceBasis trace_free_basis(const Simplex& cell, int p, int k);
SpaceBasis sigma_c_span(const Simplex& cell, int p);  // sum_i P_{p-3} l_j l_l l_m nu_i
SpaceBasis bubble_basis(const ElementDef& e, const Simplex& cell);
long sigma_c_dimension_formula(int p);

// Matrix of d on monomial coordinates: P_q Lambda^k -> P_{q-1} Lambda^{k+1}.
Mat derivative_matrix(const Simplex& cell, int q, int k);
// Degree elevation on monomial coordinates: P_a Lambda^k -> P_b Lambda^k (b >= a).
Mat elevation_matrix(int n, int k, int a, int b);

// Vertex jet sequences.
struct JetReport {
  int n = 0;
  int r = 0;
  std::vector<long> dims;       // spaces J^{r-k} Lambda^k
  std::vector<int> ranks;       // rank of each d
  std::vector<double> composition;  // max |d d| entries
  bool kernel_is_constants = false;
  bool exact = false;
  std::vector<long> expected;   // 1 -> ... chain from the closed forms
};
JetReport jet_complex_ranks(int n, int r);

struct BubbleChain {
  int d = 0;                    // subsimplex dimension
  std::vector<long> dims;       // DoF counts on the subsimplex per form degree
  std::vector<int> ranks;
  double composition = 0.0;
  long alternating_sum = 0;     // with the top slot taken modulo constants
  bool exact = false;
};
struct BubbleReport {
  int n = 0;
  int r = 0;
  int p = 0;
  std::vector<BubbleChain> chains;
  bool pass = false;
};
BubbleReport subsimplex_bubble_dims(int n, int r, int p);

}  // namespace derham
