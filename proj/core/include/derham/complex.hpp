#pragma once

#include <string>
#include <vector>

#include "derham/space.hpp"

namespace derham {

// One row of Tables 1-2: slot k holds the k-form element.
struct FamilyRow {
  std::string name;
  int n = 0;
  std::vector<ElementKey> slots;
};

// Slot k uses family r with degree p - k.
FamilyRow family_row(int r, int n, int p);
// P_{1,p} L0 -> P_{1,p-1} L1 -> P^-_{p-1} L2 -> P_{p-2} L3 (tetrahedra, p >= 3).
FamilyRow mixed_row(int p);
std::string validate_row(const FamilyRow& row);

struct ExactnessReport {
  std::string name;
  std::vector<std::string> spaces;
  std::vector<long> dims;
  std::vector<int> ranks;             // one per operator
  std::vector<long> nullities;
  std::vector<double> dd_residuals;   // row/column normalised max |D_{k+1} D_k|
  std::vector<double> containment;    // interpolation residual of each operator
  std::vector<int> betti;
  std::vector<int> expected_betti;
  long alternating_sum = 0;
  bool complex_ok = false;
  bool exact = false;

  bool pass() const { return complex_ok && exact; }
};

struct AssembledRow {
  FamilyRow row;
  std::vector<GlobalSpace> spaces;
  std::vector<OperatorMatrix> ops;
};

AssembledRow assemble_row(const SimplicialMesh& mesh, const FamilyRow& row);
double normalized_product(const Mat& next, const Mat& prev);
ExactnessReport exactness_report(const std::string& name, const std::vector<std::string>& spaces,
                                 const std::vector<long>& dims, const std::vector<Mat>& ops,
                                 std::vector<int> expected_betti, double tol = kRankTol);
// Default expectation: b0 = 1, all others 0.
ExactnessReport verify_exactness(const SimplicialMesh& mesh, const FamilyRow& row,
                                 std::vector<int> expected_betti = {}, double tol = kRankTol);
ExactnessReport mixed_sequence(const SimplicialMesh& mesh, int p, std::vector<int> expected_betti = {});

struct SurjectivityReport {
  std::string name;
  long target_dim = 0;
  int rank = 0;
  bool onto = false;
};
SurjectivityReport check_surjective(const SimplicialMesh& mesh, const ElementKey& src, const ElementKey& dst);

// ---------------------------------------------------------------- boundary conditions

struct HomogeneousSpace {
  GlobalSpace parent;
  Mat basis;                 // orthonormal, parent coordinates
  long dimension = 0;
  long removed = 0;
  long formula_removed = -1; // the printed count where one exists
  bool mean_zero = false;    // top forms are taken modulo constants
};

HomogeneousSpace restrict_homogeneous(const GlobalSpace& space, const BoundaryClassification& bc);
long homogeneous_removed_formula(const ElementKey& key, const BoundaryClassification& bc);
ExactnessReport homogeneous_exactness(const SimplicialMesh& mesh, const FamilyRow& row);

// Non-homogeneous data at a boundary vertex: the gradient DoFs fixed by the boundary
// function. Corner vertices fix both gradient components from two tangential derivatives;
// elsewhere only the tangential one is fixed.
struct VertexBoundaryData {
  int vertex = 0;
  bool corner = false;
  double value = 0.0;
  std::vector<Vec> tangents;
  std::vector<double> tangential_derivatives;
  Vec gradient;  // valid at corners
};
std::vector<VertexBoundaryData> boundary_vertex_data(const SimplicialMesh& mesh, const BoundaryClassification& bc,
                                                     const std::function<double(const Vec&)>& g,
                                                     const std::function<Vec(const Vec&)>& grad_g);
Vec corner_gradient(const Vec& t1, const Vec& t2, double d1, double d2);

// ---------------------------------------------------------------- dimensions

struct SimplexCounts {
  long V = 0;
  long E = 0;
  long F = 0;
  long T = 0;
  long get(int d) const { return d == 0 ? V : d == 1 ? E : d == 2 ? F : T; }
};
SimplexCounts simplex_counts(const SimplicialMesh& mesh);
long dim_formula(const ElementKey& key, const SimplexCounts& c);
std::string dim_formula_text(const ElementKey& key);

struct SavingsReport {
  int p = 0;
  SimplexCounts counts;
  long dim_full = 0;        // P_p Lambda^1 (Nedelec second kind), assembled
  long dim_smooth = 0;      // P_{2,p} Lambda^1, assembled
  long formula_full = 0;    // closed forms on the actual counts
  long formula_smooth = 0;
  double printed_full_per_T = 0.0;    // 1/2 p^3 + 7 p^2 + 13 p / 2
  double printed_smooth_per_T = 0.0;  // 1/2 p^3 + p^2 - 3p - 11/2
  double printed_difference_per_T = 0.0;
  double asymptotic_full_per_T = 0.0;  // closed forms with V : E : F : T = 1 : 7 : 12 : 6
  double asymptotic_smooth_per_T = 0.0;
  double edge_vertex_ratio = 0.0;
};
SavingsReport dof_savings(int p, const SimplicialMesh& mesh);

// ---------------------------------------------------------------- decompositions

struct DecompositionReport {
  std::string name;
  long target_dim = 0;
  long lagrange_dim = 0;     // conforming part (vector Lagrange / vector Hermite)
  long bubble_dim = 0;       // sum of the per-cell bubble spaces
  int rank_parts = 0;        // rank of the concatenated parts
  int rank_union = 0;        // rank of parts together with the target basis
  double continuity_residual = 0.0;  // conforming part against the target's continuity
  double split_residual = 0.0;       // u - I^c u tangential trace (3D)
  bool pass = false;
};
DecompositionReport verify_decomposition(int n, int p, const SimplicialMesh& mesh);

}  // namespace derham
