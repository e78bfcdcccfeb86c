#include "doctest.h"
#include "support.hpp"

using namespace derham;

namespace {

long assembled(const SimplicialMesh& m, Family f, int p, int k) {
  return assemble_space(m, {f, p, k, m.dim}).dimension;
}

struct RowCase {
  int r;
  int n;
  int p;
};

// Lowest rows of each family, one or two degrees each.
std::vector<RowCase> row_cases() {
  return {{1, 1, 3}, {1, 1, 4}, {1, 2, 3}, {1, 2, 4}, {2, 2, 5}, {1, 3, 3}, {1, 3, 4}, {2, 3, 5}};
}

}  // namespace

TEST_CASE("global dimensions of named examples") {
  CHECK(assembled(meshes::two_triangle_square(), Family::r1, 3, 0) == 3 * 4 + 0 * 5 + 1 * 2);
  CHECK(assembled(meshes::single_simplex(2), Family::r1, 2, 1) == 2 * dim_full(2, 2, 0));
  CHECK(assembled(meshes::single_simplex(3), Family::r2, 3, 2) == 3 * 4 + 7 * 4 + 20);
  CHECK(assembled(meshes::single_simplex(3), Family::r2, 4, 1) == 3 * binomial(7, 3));
  CHECK(assembled(meshes::single_simplex(3), Family::hz, 2, 2) == 30);
  const auto sq = meshes::three_triangle_square();
  for (int p = 1; p <= 4; ++p) CHECK(assembled(sq, Family::r1, p, 2) == binomial(p + 2, 2) * sq.count(2));
}

TEST_CASE("assembled dimension equals the closed form on every test mesh") {
  for (int n = 1; n <= 3; ++n)
    for (const auto& [name, m] : testing::test_meshes(n)) {
      const SimplexCounts c = simplex_counts(m);
      for (Family f : {Family::r0, Family::r1, Family::r2, Family::hz})
        for (int k = 0; k <= n; ++k) {
          int pm = 0;
          try {
            pm = min_degree(f, k, n);
          } catch (const std::exception&) {
            continue;
          }
          for (int p = pm; p <= pm + 2; ++p) {
            const ElementKey key{f, p, k, n};
            if (!validate(key).empty()) continue;
            CAPTURE(name);
            CAPTURE(describe(key));
            const GlobalSpace s = assemble_space(m, key);
            CHECK(s.dimension == dim_formula(key, c));
            CHECK(assemble_space(m, key, AssemblyMode::count_only).dimension == s.dimension);
          }
        }
    }
}

TEST_CASE("gradient on an interval chain has a one-dimensional kernel") {
  const auto m = meshes::interval_chain(3);
  for (int p = 3; p <= 5; ++p) {
    const GlobalSpace a = assemble_space(m, {Family::r1, p, 0, 1});
    const GlobalSpace b = assemble_space(m, {Family::r1, p - 1, 1, 1});
    const OperatorMatrix d = assemble_d(a, b);
    CHECK(d.rows == b.dimension);
    CHECK(d.cols == a.dimension);
    CHECK(numerical_rank(d.dense) == a.dimension - 1);
  }
}

TEST_CASE("divergence onto the discontinuous space") {
  const auto sq = meshes::two_triangle_square();
  const SurjectivityReport s = check_surjective(sq, {Family::r1, 3, 1, 2}, {Family::r1, 2, 2, 2});
  CHECK(s.onto);
  CHECK(s.rank == s.target_dim);
  for (const auto& [name, m] : testing::test_meshes(3)) {
    CAPTURE(name);
    CHECK(check_surjective(m, {Family::r2, 3, 2, 3}, {Family::r2, 2, 3, 3}).onto);
    CHECK(check_surjective(m, {Family::hz, 3, 2, 3}, {Family::r0, 2, 3, 3}).onto);
  }
}

TEST_CASE("complex property and exactness of the family rows") {
  for (const RowCase& rc : row_cases())
    for (const auto& [name, m] : testing::test_meshes(rc.n)) {
      const FamilyRow row = family_row(rc.r, rc.n, rc.p);
      REQUIRE(validate_row(row).empty());
      const ExactnessReport rep = verify_exactness(m, row);
      CAPTURE(name);
      CAPTURE(rep.name);
      CHECK(rep.complex_ok);
      CHECK(rep.exact);
      for (double r : rep.dd_residuals) CHECK(r < 1e-10);
      for (std::size_t k = 0; k + 1 < rep.dims.size(); ++k)
        CHECK(rep.ranks[k] + rep.nullities[k] == rep.dims[k]);
      CHECK(rep.betti.front() == 1);
      CHECK(rep.alternating_sum == 0);
    }
}

TEST_CASE("lowest 2D and 3D rows") {
  const ExactnessReport fig1 = verify_exactness(meshes::two_triangle_square(), family_row(1, 2, 3));
  CHECK(fig1.pass());
  CHECK(fig1.betti == std::vector<int>{1, 0, 0});
  const ExactnessReport r2 = verify_exactness(meshes::single_simplex(3), family_row(2, 3, 5));
  CHECK(r2.pass());
  CHECK(r2.dims == std::vector<long>{56, 105, 60, 10});
}

TEST_CASE("the annulus carries one harmonic one-form") {
  const auto a = meshes::annulus();
  for (int r = 1; r <= 2; ++r) {
    const FamilyRow row = family_row(r, 2, r == 1 ? 3 : 5);
    const ExactnessReport def = verify_exactness(a, row);
    CHECK_FALSE(def.pass());
    CHECK(def.betti == std::vector<int>{1, 1, 0});
    CHECK(verify_exactness(a, row, {1, 1, 0}).pass());
  }
}

TEST_CASE("mixed tetrahedral row") {
  CHECK(mixed_sequence(meshes::single_simplex(3), 3).pass());
  CHECK(mixed_sequence(meshes::single_simplex(3), 4).pass());
  const ExactnessReport two = mixed_sequence(meshes::two_tets(), 3);
  CHECK(two.pass());
  for (double r : two.dd_residuals) CHECK(r < 1e-10);
  CHECK_THROWS_AS(mixed_sequence(meshes::two_triangle_square(), 3), std::invalid_argument);
}

TEST_CASE("ranks do not depend on the edge normal completion") {
  const auto m = meshes::two_tets();
  const ExactnessReport base = verify_exactness(m, family_row(2, 3, 5));
  std::mt19937 g(3);
  std::uniform_real_distribution<double> u(0.0, 6.28);
  for (int trial = 0; trial < 2; ++trial) {
    set_edge_normal_rotation(u(g));
    const ExactnessReport rot = verify_exactness(m, family_row(2, 3, 5));
    CHECK(rot.dims == base.dims);
    CHECK(rot.ranks == base.ranks);
    CHECK(rot.pass());
  }
  set_edge_normal_rotation(0.0);
}

TEST_CASE("homogeneous boundary conditions in 2D") {
  const auto sq = meshes::two_triangle_square();
  const auto bc = classify_boundary(sq);
  const HomogeneousSpace h = restrict_homogeneous(assemble_space(sq, {Family::r1, 2, 1, 2}), bc);
  CHECK(h.removed == (2 - 1) * 4 + 2 * 4 - 0);
  CHECK(h.formula_removed == h.removed);
  CHECK(h.dimension == 19 - 12);

  for (const char* name : {"square2", "square3"}) {
    const auto m = meshes::by_name(name);
    const auto b = classify_boundary(m);
    for (int p = 3; p <= 5; ++p) {
      const FamilyRow row = family_row(1, 2, p);
      for (const auto& key : row.slots) {
        const HomogeneousSpace hs = restrict_homogeneous(assemble_space(m, key), b);
        CAPTURE(name);
        CAPTURE(describe(key));
        CHECK(hs.removed == hs.formula_removed);
        CHECK(hs.dimension == hs.parent.dimension - hs.removed);
      }
      const ExactnessReport rep = homogeneous_exactness(m, row);
      CHECK(rep.pass());
      CHECK(rep.alternating_sum == 0);
    }
  }
  // a non-corner vertex frees one value in the first two slots relative to the all-corner count
  const auto m3 = meshes::three_triangle_square();
  const auto b3 = classify_boundary(m3);
  for (int k = 0; k <= 1; ++k) {
    const ElementKey key{Family::r1, 3 - k, k, 2};
    const HomogeneousSpace hs = restrict_homogeneous(assemble_space(m3, key), b3);
    const long all_corner = k == 0 ? (key.p - 3) * b3.E0() + 3 * b3.V0() : (key.p - 1) * b3.E0() + 2 * b3.V0();
    CHECK(hs.removed == all_corner - 1);
  }
}

TEST_CASE("homogeneous 3D row is exact") {
  const ExactnessReport rep = homogeneous_exactness(meshes::two_tets(), family_row(1, 3, 3));
  CHECK(rep.pass());
  CHECK(rep.alternating_sum == 0);
}

TEST_CASE("boundary vertex data recovers gradients at corners") {
  const auto m = meshes::three_triangle_square();
  const auto bc = classify_boundary(m);
  auto g = [](const Vec& x) { return 2.0 * x(0) - 3.0 * x(1) + 0.5; };
  auto grad = [](const Vec&) {
    Vec r(2);
    r << 2.0, -3.0;
    return r;
  };
  const auto data = boundary_vertex_data(m, bc, g, grad);
  CHECK(static_cast<int>(data.size()) == bc.V0());
  int corners = 0;
  for (const auto& d : data) {
    CHECK(d.value == doctest::Approx(g(m.vertices[d.vertex])));
    if (d.corner) {
      ++corners;
      CHECK((d.gradient - grad(m.vertices[d.vertex])).norm() < 1e-12);
    } else {
      // both boundary edges are collinear here, so they fix a single tangential value
      REQUIRE(d.tangents.size() == 2);
      const double c = d.tangents[0].dot(d.tangents[1]);
      CHECK(std::abs(std::abs(c) - 1.0) < 1e-12);
      CHECK(d.tangential_derivatives[1] == doctest::Approx(c * d.tangential_derivatives[0]));
    }
  }
  CHECK(corners == 4);
}

TEST_CASE("box identities between families") {
  const auto m3 = meshes::two_tets();
  const auto m2 = meshes::three_triangle_square();
  for (int p = 2; p <= 3; ++p) {
    CHECK(space_equal(assemble_space(m3, {Family::r1, p, 2, 3}), assemble_space(m3, {Family::r0, p, 2, 3})));
    CHECK(space_equal(assemble_space(m3, {Family::r1, p, 3, 3}), assemble_space(m3, {Family::r0, p, 3, 3})));
    CHECK(space_equal(assemble_space(m2, {Family::r1, p, 2, 2}), assemble_space(m2, {Family::r0, p, 2, 2})));
    const GlobalSpace s = assemble_space(m2, {Family::r1, p, 1, 2});
    const GlobalSpace bdm = assemble_space(m2, {Family::r0, p, 1, 2});
    CHECK_FALSE(space_equal(s, bdm));
    CHECK(s.dimension < bdm.dimension);
  }
}

TEST_CASE("savings of the smooth edge element") {
  const SavingsReport s = dof_savings(4, fourteen_tet_grid(2, 2, 2));
  CHECK(s.printed_full_per_T == doctest::Approx(170.0));
  CHECK(s.printed_smooth_per_T == doctest::Approx(30.5));
  CHECK(s.printed_difference_per_T == doctest::Approx(139.5));
  CHECK(s.dim_full == s.formula_full);
  CHECK(s.dim_smooth == s.formula_smooth);
  const SimplexCounts& c = s.counts;
  // p = 4: second-kind Nedelec has 5 per edge, 15 per face, 15 interior;
  // the smooth element has 12 per vertex, 3 per edge, 6 per face, 15 interior
  CHECK(s.dim_full == 5 * c.E + 15 * c.F + 15 * c.T);
  CHECK(s.dim_smooth == 12 * c.V + 3 * c.E + 6 * c.F + 15 * c.T);
}
