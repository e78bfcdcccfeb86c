#include "doctest.h"
#include "support.hpp"

using namespace derham;

namespace {

const Family kFamilies[] = {Family::r0,      Family::r1,             Family::r2,
                            Family::hz,      Family::trimmed,        Family::vector_hermite,
                            Family::vector_lagrange};

// Every implemented key with p = p_min .. p_min + extra.
std::vector<ElementKey> implemented(int extra) {
  std::vector<ElementKey> out;
  for (Family f : kFamilies)
    for (int n = 1; n <= 3; ++n)
      for (int k = 0; k <= n; ++k) {
        int pm = 0;
        try {
          pm = min_degree(f, k, n);
        } catch (const std::exception&) {
          continue;
        }
        if (!validate({f, pm, k, n}).empty()) continue;
        for (int p = pm; p <= pm + extra; ++p) out.push_back({f, p, k, n});
      }
  return out;
}

Vec tangential_part(const Vec& w, const Vec& normal) { return w - w.dot(normal) * normal; }

}  // namespace

TEST_CASE("DoF counts per subsimplex of the lowest elements") {
  CHECK(dofs_per_subsimplex({Family::r1, 2, 1, 2}) == std::vector<long>{2, 1, 3});
  CHECK(dofs_per_subsimplex({Family::r1, 2, 1, 3}) == std::vector<long>{3, 1, 3, 0});
  CHECK(local_total_formula({Family::r1, 2, 1, 3}) == 30);
  CHECK(dofs_per_subsimplex({Family::r2, 3, 2, 3}) == std::vector<long>{3, 0, 7, 20});
  CHECK(local_total_formula({Family::r2, 3, 2, 3}) == 60);
}

TEST_CASE("invalid keys are rejected") {
  CHECK_FALSE(validate({Family::r1, 1, 1, 2}).empty());
  CHECK_FALSE(validate({Family::r2, 4, 0, 3}).empty());
  CHECK_THROWS_AS(element_def({Family::r1, 1, 1, 2}), std::invalid_argument);
}

TEST_CASE("reference DoF matrices are invertible") {
  CHECK(numerical_rank(dof_matrix(element_def(1, 2, 1, 3))) == 30);
  const Mat m = dof_matrix(element_def(2, 5, 0, 3));
  CHECK(m.rows() == 56);
  CHECK(m.cols() == 56);
  CHECK(numerical_rank(m) == 56);
}

TEST_CASE("linear Lagrange dual basis is the barycentric coordinates") {
  const ElementDef e = element_def(0, 1, 0, 2);
  const DualBasis db = dual_basis(e);
  std::mt19937 g(1);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec b = testing::random_bary(2, g);
    std::vector<double> vals;
    for (const auto& f : db.basis) vals.push_back(f.eval(b)(0));
    std::sort(vals.begin(), vals.end());
    std::vector<double> bs(b.data(), b.data() + 3);
    std::sort(bs.begin(), bs.end());
    for (int i = 0; i < 3; ++i) CHECK(vals[i] == doctest::Approx(bs[i]));
  }
}

TEST_CASE("Stenberg vertex basis takes unit vector values at its vertex") {
  const ElementDef e = element_def(1, 2, 1, 2);
  const DualBasis db = dual_basis(e);
  int vertex_functions = 0;
  for (std::size_t j = 0; j < e.dofs.size(); ++j) {
    if (e.dofs[j].sub.size() != 1) continue;
    ++vertex_functions;
    const int x = e.dofs[j].sub[0];
    for (int v = 0; v < 3; ++v) {
      Vec b = Vec::Zero(3);
      b(v) = 1.0;
      const Vec val = db.basis[j].eval(b);
      if (v != x) CHECK(val.norm() < 1e-10);
      else CHECK(std::abs(val.norm() - 1.0) < 1e-10);
    }
  }
  CHECK(vertex_functions == 6);
}

TEST_CASE("unisolvence of every implemented element on random simplices") {
  std::mt19937 g(77);
  std::vector<Simplex> cells[4];
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i < 5; ++i) cells[n].push_back(testing::random_simplex(n, g));
  for (const ElementKey& key : implemented(2)) {
    const ElementDef e = element_def(key);
    CAPTURE(describe(key));
    CHECK(static_cast<long>(e.dofs.size()) == static_cast<long>(e.shape.size()));
    CHECK(static_cast<long>(e.dofs.size()) == local_total_formula(key));
    for (const Simplex& c : cells[key.n]) {
      const UnisolvenceReport u = unisolvence_check(e, c);
      CHECK(u.pass);
      CHECK(u.sv_ratio > 1e-6);
      CHECK(u.rows == static_cast<int>(e.dofs.size()));
    }
  }
}

TEST_CASE("r1 and r2 three-dimensional elements over a degree range") {
  std::mt19937 g(5);
  for (int p = 2; p <= 5; ++p)
    for (const ElementKey key : {ElementKey{Family::r1, p, 1, 3}, ElementKey{Family::r2, p, 2, 3}}) {
      const ElementDef e = element_def(key);
      for (int i = 0; i < 3; ++i) CHECK(unisolvence_check(e, testing::random_simplex(3, g)).pass);
    }
}

TEST_CASE("dropping one interior DoF leaves a one-dimensional kernel") {
  for (const ElementKey key : {ElementKey{Family::r2, 3, 2, 3}, ElementKey{Family::r1, 3, 1, 2}}) {
    const ElementDef e = element_def(key);
    const Mat m = dof_matrix(e);
    int interior = -1;
    for (std::size_t i = 0; i < e.dofs.size(); ++i)
      if (static_cast<int>(e.dofs[i].sub.size()) == key.n + 1) interior = static_cast<int>(i);
    REQUIRE(interior >= 0);
    Mat reduced(m.rows() - 1, m.cols());
    reduced << m.topRows(interior), m.bottomRows(m.rows() - interior - 1);
    CHECK(reduced.cols() - numerical_rank(reduced) == 1);
  }
}

TEST_CASE("dual bases satisfy the Kronecker property") {
  for (const ElementKey& key : implemented(2)) {
    CAPTURE(describe(key));
    const DualBasis db = dual_basis(element_def(key));
    CHECK(db.kronecker_residual < 1e-8);
    CHECK(db.classes.size() == db.basis.size());
  }
}

TEST_CASE("trace-free bubbles of the r2 one-forms") {
  const Simplex tet = Simplex::reference(3);
  CHECK(trace_free_basis(tet, 2, 1).size() == 0);
  CHECK(sigma_c_dimension_formula(2) == 0);
  CHECK(trace_free_basis(tet, 4, 1).size() == 15);
  CHECK(sigma_c_dimension_formula(4) == 15);
}

TEST_CASE("Stenberg bubbles have vanishing normal trace") {
  const Simplex t = Simplex::reference(2);
  const SpaceBasis b = bubble_basis(element_def(1, 3, 1, 2), t);
  CHECK(b.size() > 0);
  for (const auto& edge : local_subsimplices(2, 1)) {
    const Vec tau = (t.vertex(edge[1]) - t.vertex(edge[0])).normalized();
    for (int i = 1; i <= 20; ++i) {
      Vec bary = Vec::Zero(3);
      const double s = i / 21.0;
      bary(edge[0]) = 1 - s;
      bary(edge[1]) = s;
      // the tangential pullback of the form is the normal flux of its proxy field
      for (const auto& w : b.basis) CHECK(std::abs(w.eval(bary).dot(tau)) < 1e-10);
    }
  }
}

TEST_CASE("sigma_c span: zero tangential traces and equal span with the trace-free space") {
  std::mt19937 g(8);
  const Simplex t = testing::random_simplex(3, g);
  for (int p = 3; p <= 5; ++p) {
    const SpaceBasis sc = sigma_c_span(t, p);
    for (const auto& face : local_subsimplices(3, 2)) {
      const Eigen::Vector3d a = t.vertex(face[1]) - t.vertex(face[0]), c = t.vertex(face[2]) - t.vertex(face[0]);
      const Vec nu = a.cross(c).normalized();
      for (int i = 0; i < 25; ++i) {
        Vec bary = Vec::Zero(4);
        const Vec fb = testing::random_bary(2, g);
        for (int j = 0; j < 3; ++j) bary(face[j]) = fb(j);
        for (const auto& w : sc.basis) CHECK(tangential_part(w.eval(bary), nu).norm() < 1e-10);
      }
    }
    const Mat A = coefficient_matrix(sc.basis, 3, 1, p);
    const Mat B = coefficient_matrix(trace_free_basis(t, p, 1).basis, 3, 1, p);
    Mat U(A.rows(), A.cols() + B.cols());
    U << A, B;
    CHECK(numerical_rank(A) == numerical_rank(B));
    CHECK(numerical_rank(U) == numerical_rank(A));
    CHECK(numerical_rank(A) == sigma_c_dimension_formula(p));
  }
}

TEST_CASE("conforming plus bubble decompositions") {
  const DecompositionReport d2 = verify_decomposition(2, 2, meshes::two_triangle_square());
  CHECK(d2.pass);
  CHECK(d2.lagrange_dim < d2.target_dim);  // vector Lagrange alone is too small
  CHECK(d2.rank_parts == d2.target_dim);
  const DecompositionReport d3 = verify_decomposition(3, 4, meshes::single_simplex(3));
  CHECK(d3.pass);
  // on one cell vector Hermite is already all of P_4; across a face it is not
  const DecompositionReport d3m = verify_decomposition(3, 4, meshes::two_tets());
  CHECK(d3m.pass);
  CHECK(d3m.lagrange_dim < d3m.target_dim);
}

TEST_CASE("vertex jet sequences") {
  for (int n = 1; n <= 5; ++n) {
    const JetReport r1 = jet_complex_ranks(n, 1);
    CHECK(r1.exact);
    CHECK(r1.dims == std::vector<long>{n + 1, n});
    const JetReport r2 = jet_complex_ranks(n, 2);
    CHECK(r2.exact);
    CHECK(r2.kernel_is_constants);
    CHECK(r2.dims == std::vector<long>{(n * n + 3 * n + 2) / 2, n * (n + 1), n * (n - 1) / 2});
  }
  const JetReport five = jet_complex_ranks(5, 2);
  CHECK(five.ranks == std::vector<int>{20, 10});
}

TEST_CASE("subsimplex bubble sequences") {
  for (int p = 5; p <= 8; ++p) {
    const BubbleReport b = subsimplex_bubble_dims(3, 2, p);
    CHECK(b.pass);
    const BubbleChain& edge = b.chains.at(0);
    REQUIRE(edge.d == 1);
    CHECK(edge.dims[0] == (p - 5) + 2 * (p - 4));
    CHECK(edge.dims[1] - 1 == 3 * (p - 4) - 1);
  }
  for (int p = 3; p <= 5; ++p) {
    const BubbleReport b = subsimplex_bubble_dims(3, 1, p);
    CHECK(b.pass);
    CHECK(b.chains.back().alternating_sum == 0);
  }
}
