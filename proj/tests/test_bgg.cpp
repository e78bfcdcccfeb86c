#include "doctest.h"
#include "support.hpp"

using namespace derham;

namespace {

// Global coefficients of a constant form with the given Cartesian components.
Vec interpolate_constant(const GlobalSpace& s, const Vec& comps) {
  std::vector<Vec> cellwise;
  for (std::size_t c = 0; c < s.cells.size(); ++c) {
    FormPolynomial w(s.n, s.k);
    for (int i = 0; i < w.ncomp(); ++i) w.comp[i] = Poly::constant(s.n + 1, comps(i));
    cellwise.push_back(coefficients(w, s.degree));
  }
  return interpolate(s, cellwise);
}

Vec evaluate(const GlobalSpace& s, const Vec& y, int c, const Vec& bary) {
  Vec local(static_cast<long>(s.l2g[c].size()));
  for (long j = 0; j < local.size(); ++j) local(j) = y(s.l2g[c][j]);
  return from_coefficients(s.n, s.k, s.degree, s.basis[c] * local).eval(bary);
}

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

SimplicialMesh perturbed_square(std::mt19937& g) {
  std::uniform_real_distribution<double> u(-0.15, 0.15);
  const auto m = meshes::three_triangle_square();
  std::vector<Vec> v;
  for (const auto& x : m.vertices) v.push_back(x + vec2(u(g), u(g)));
  return build_mesh(v, m.cells);
}

}  // namespace

TEST_CASE("S0 rotates a constant vector field into a constant one-form") {
  const auto m = meshes::single_simplex(2);
  const BggOperators o = bgg_operators(m, 1);
  const GlobalSpace& src = o.spaces.bottom[0].base;
  const GlobalSpace& dst = o.spaces.top[1].base;
  Vec u(2 * src.dimension);
  u << interpolate_constant(src, vec2(1, 0).head(1)), interpolate_constant(src, vec2(0, 0).head(1));
  const Vec y = o.s0 * u;
  std::mt19937 g(1);
  for (int i = 0; i < 5; ++i) CHECK((evaluate(dst, y, 0, testing::random_bary(2, g)) - vec2(0, 1)).norm() < 1e-12);
}

TEST_CASE("S0 is an isomorphism") {
  const BggIdentity id = verify_bgg_identity(1, meshes::two_triangle_square());
  CHECK(id.s0_rows == id.s0_cols);
  CHECK(id.s0_rank == id.s0_cols);
  CHECK(id.s0_inverse_residual < 1e-10);
}

TEST_CASE("S1 kills symmetric fields and maps the identity to a constant") {
  const auto m = meshes::two_triangle_square();
  const BggOperators o = bgg_operators(m, 2);
  const GlobalSpace& src = o.spaces.bottom[1].base;
  const GlobalSpace& dst = o.spaces.top[2].base;
  // symmetric M = [[a, b], [b, c]] gives w^1 = (b, -a), w^2 = (c, -b)
  const double a = 0.7, b = -1.3, c = 2.1;
  Vec w(2 * src.dimension);
  w << interpolate_constant(src, vec2(b, -a)), interpolate_constant(src, vec2(c, -b));
  CHECK((o.s1 * w).cwiseAbs().maxCoeff() < 1e-12);

  Vec id(2 * src.dimension);
  id << interpolate_constant(src, vec2(1, 0)), interpolate_constant(src, vec2(0, 1));
  const Vec y = o.s1 * id;
  std::mt19937 g(2);
  for (int cell = 0; cell < 2; ++cell) CHECK(evaluate(dst, y, cell, testing::random_bary(2, g))(0) == doctest::Approx(-2.0));

  const BggIdentity r = verify_bgg_identity(2, m);
  CHECK(r.s1_rank == r.s1_rows);
}

TEST_CASE("anticommuting identity D1 S0 + S1 D0 = 0") {
  CHECK(verify_bgg_identity(1, meshes::single_simplex(2)).residual < 1e-10);
  CHECK(verify_bgg_identity(2, meshes::two_triangle_square()).residual < 1e-10);
  std::mt19937 g(4);
  for (int trial = 0; trial < 3; ++trial) {
    const auto m = perturbed_square(g);
    for (int p = 1; p <= 2; ++p) CHECK(verify_bgg_identity(p, m).residual < 1e-9);
  }
}

TEST_CASE("the twisted operators form a complex") {
  for (const char* name : {"triangle", "square2", "square3"})
    for (int p = 1; p <= 2; ++p) {
      const BggOperators o = bgg_operators(meshes::by_name(name), p);
      const Mat prod = o.a1().dense() * o.a0().dense();
      CAPTURE(name);
      CHECK(prod.cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("Xi complex exactness") {
  for (const char* name : {"triangle", "square2", "square3"})
    for (int p = 1; p <= 2; ++p) {
      const ExactnessReport r = xi_complex(meshes::by_name(name), p);
      CAPTURE(name);
      CHECK(r.pass());
      CHECK(r.betti == std::vector<int>{3, 0, 0});
    }
  const ExactnessReport ann = xi_complex(meshes::annulus(), 1);
  CHECK(ann.betti == std::vector<int>{3, 3, 0});
  CHECK_FALSE(ann.pass());
  CHECK(xi_complex(meshes::annulus(), 1, {3, 3, 0}).pass());
}

TEST_CASE("projections commute with the twisted operators") {
  for (int p = 1; p <= 2; ++p) {
    const ProjectionReport r = projection_check(meshes::three_triangle_square(), p, 13);
    CHECK(r.pass);
    CHECK(r.a0_commutes < 1e-9);
    CHECK(r.a1_commutes < 1e-9);
    CHECK(r.pi0_idempotent < 1e-9);
    CHECK(r.pi1_idempotent < 1e-9);
  }
}

TEST_CASE("weak symmetry and Hu-Zhang complexes") {
  for (const char* name : {"triangle", "square2"})
    for (int p = 1; p <= 2; ++p) {
      CAPTURE(name);
      CHECK(weak_symmetry_complex(meshes::by_name(name), p).pass());
      const StressComplexReport hz = huzhang_complex(meshes::by_name(name), p);
      CHECK(hz.pass);
      CHECK(hz.ih_right_inverse < 1e-10);
      CHECK(hz.pi_h_rank == hz.exactness.dims.back());
    }
}

TEST_CASE("discrete Airy operator") {
  for (int p = 2; p <= 3; ++p) {
    const AiryCheck a = airy_check(meshes::two_triangle_square(), p);
    CHECK(a.pass);
    CHECK(a.formula_residual < 1e-9);
    CHECK(a.symmetry_residual < 1e-9);
  }
  CHECK_THROWS(airy_check(meshes::two_triangle_square(), 1));
}

TEST_CASE("Hu-Zhang interior DoF count identity") {
  const HuZhangStressElement e3 = huzhang_stress(3);
  CHECK(e3.skew_dofs + e3.bubble_dofs == 16);
  CHECK(e3.trimmed_dim == 8);
  const HuZhangStressElement e4 = huzhang_stress(4);
  CHECK(e4.skew_dofs == 12);
  CHECK(e4.bubble_dofs == 18);
  CHECK(e4.trimmed_dim == dim_trimmed(2, 3, 1));
  for (int p = 3; p <= 6; ++p) {
    const HuZhangStressElement e = huzhang_stress(p);
    CAPTURE(p);
    CHECK(e.count_identity);
    CHECK(e.skew_dofs + e.bubble_dofs == 2 * (p - 1) * (p + 1));
    CHECK(e.pass());
    CHECK(e.skew_of_symmetric < 1e-12);
    CHECK(e.symmetric_rank == e.symmetric_dim);
  }
  CHECK_THROWS_AS(huzhang_stress(2), std::invalid_argument);
}

TEST_CASE("Hu-Zhang element is unisolvent on random triangles") {
  std::mt19937 g(6);
  for (int p = 3; p <= 5; ++p)
    for (int i = 0; i < 3; ++i) {
      const HuZhangStressElement e = huzhang_stress(p, testing::random_simplex(2, g));
      CHECK(e.unisolvent);
      CHECK(e.symmetric_unisolvent);
    }
}
