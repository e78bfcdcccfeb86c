#pragma once

#include <string>
#include <vector>

#include "derham/complex.hpp"

namespace derham {

// Two-dimensional BGG diagram for a degree index p:
//   top (skew-valued, chi implicit):  P_{2,p+3}L0 -> P_{2,p+2}L1 -> P_{2,p+1}L2
//   bottom (vector-valued, 2 copies): P_{1,p+2}L0 -> P_{1,p+1}L1 -> P_{1,p}L2
// A V-valued 1-form (w^1, w^2), w^i = w_i1 dx1 + w_i2 dx2, is the matrix M with rows
// (-w_i2, w_i1): row i of M is the Stenberg proxy of w^i.
enum class ValueType { scalar, vector, skew };

struct ValuedSpace {
  GlobalSpace base;
  ValueType value = ValueType::scalar;
  int copies = 1;
  long dimension() const { return base.dimension * copies; }
};

struct BggSpaces {
  int p = 0;
  ValuedSpace top[3];
  ValuedSpace bottom[3];
};

BggSpaces bgg_spaces(const SimplicialMesh& mesh, int p);

// (u1, u2) -> -u2 dx1 + u1 dx2
OperatorMatrix s0_operator(const ValuedSpace& src, const ValuedSpace& dst);
// (w^1, w^2) -> -(w_11 + w_22) dx1 ^ dx2
OperatorMatrix s1_operator(const ValuedSpace& src, const ValuedSpace& dst);

// [[d_k, -S_k], [0, d_k]]
struct BlockOperator {
  Mat d_top;
  Mat s;
  Mat d_bottom;
  Mat dense() const;
};

struct BggOperators {
  BggSpaces spaces;
  Mat d0_top, d1_top;
  Mat d0_bottom, d1_bottom;  // block diagonal over the two components
  Mat s0, s1;
  BlockOperator a0() const { return {d0_top, s0, d0_bottom}; }
  BlockOperator a1() const { return {d1_top, s1, d1_bottom}; }
};

BggOperators bgg_operators(const SimplicialMesh& mesh, int p);

struct BggIdentity {
  double residual = 0.0;  // max |D1 S0 + S1 D0|, relative to the largest entry of either term
  int s0_rank = 0;
  long s0_rows = 0;
  long s0_cols = 0;
  double s0_inverse_residual = 0.0;
  int s1_rank = 0;
  long s1_rows = 0;
};
BggIdentity verify_bgg_identity(int p, const SimplicialMesh& mesh);

// Expected Betti numbers default to the rigid motions in slot 0: {3, 0, 0}.
ExactnessReport xi_complex(const SimplicialMesh& mesh, int p, std::vector<int> expected_betti = {});

struct ProjectionReport {
  double a0_commutes = 0.0;  // |A0 pi0 x - pi1 A0 x|
  double a1_commutes = 0.0;  // |A1 pi1 y - A1 y|
  double pi0_idempotent = 0.0;
  double pi1_idempotent = 0.0;
  bool pass = false;
};
ProjectionReport projection_check(const SimplicialMesh& mesh, int p, unsigned seed = 7);

// Step 3: P_{2,p+3}L0 --Airy--> P_{1,p+1}L1(V) --(-S1, d1)--> Xi^2_p
ExactnessReport weak_symmetry_complex(const SimplicialMesh& mesh, int p, std::vector<int> expected_betti = {});

struct AiryCheck {
  double formula_residual = 0.0;  // against -[[u_22, -u_12], [-u_12, u_11]]
  double symmetry_residual = 0.0; // |S1 Airy|
  bool pass = false;
};
// Interpolates a fixed polynomial of degree p+3 (p >= 2) and compares the discrete Airy image.
AiryCheck airy_check(const SimplicialMesh& mesh, int p);

struct StressComplexReport {
  ExactnessReport exactness;   // P_{2,p+3}L0 -> Sigma_h -> P_{1,p}L2(V)
  long sigma_dim = 0;
  double ih_right_inverse = 0.0;  // |S1 i_h - I|
  double ih_conformity = 0.0;     // cellwise construction against the assembled space
  int pi_h_rank = 0;              // rank of Pi_h on Xi^2
  long xi2_bottom_dim = 0;
  bool pass = false;
};
StressComplexReport huzhang_complex(const SimplicialMesh& mesh, int p, std::vector<int> expected_betti = {});

// Local Hu-Zhang stress element on a triangle, DoFs in the order
// vertex M(v), edge (M nu).q, interior skew, interior symmetric bubbles.
struct HuZhangStressElement {
  int p = 0;
  long vertex_dofs = 0;
  long edge_dofs = 0;
  long skew_dofs = 0;
  long bubble_dofs = 0;
  long total = 0;
  long shape_dim = 0;             // 4 dim P_p
  long trimmed_dim = 0;           // dim P^-_{p-1} L1
  bool count_identity = false;    // skew + bubble = 2 trimmed_dim
  int rank = 0;
  bool unisolvent = false;
  int symmetric_rank = 0;
  long symmetric_rows = 0;
  long symmetric_dim = 0;
  bool symmetric_unisolvent = false;
  double skew_of_symmetric = 0.0; // skew moments of symmetric shape functions
  bool pass() const { return count_identity && unisolvent && symmetric_unisolvent; }
};

// Rows: DoFs; columns: M_ij monomial coefficients, (2 i + j) * nmono + a. p >= 2.
Mat stress_dof_matrix(const Simplex& t, int p, std::vector<std::string>* kinds = nullptr);
HuZhangStressElement huzhang_stress(int p);
HuZhangStressElement huzhang_stress(int p, const Simplex& t);

}  // namespace derham
