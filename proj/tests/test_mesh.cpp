#include "doctest.h"
#include "support.hpp"

using namespace derham;

namespace {

Vec v(std::initializer_list<double> xs) {
  Vec r(static_cast<long>(xs.size()));
  long i = 0;
  for (double x : xs) r(i++) = x;
  return r;
}

}  // namespace

TEST_CASE("skeleton counts of small meshes") {
  const auto t = meshes::single_simplex(2);
  CHECK(t.count(0) == 3);
  CHECK(t.count(1) == 3);
  CHECK(t.count(2) == 1);

  const auto sq = meshes::two_triangle_square();
  CHECK(sq.count(0) == 4);
  CHECK(sq.count(1) == 5);
  CHECK(sq.count(2) == 2);

  const auto tet = meshes::single_simplex(3);
  CHECK(tet.count(0) == 4);
  CHECK(tet.count(1) == 6);
  CHECK(tet.count(2) == 4);
  CHECK(tet.count(3) == 1);
}

TEST_CASE("euler characteristic") {
  CHECK(euler_characteristic(meshes::two_triangle_square()) == 1);
  CHECK(euler_characteristic(meshes::single_simplex(3)) == 1);
  // square with a square hole: 8 vertices, 4 + 4 + 8 edges, 8 triangles
  const auto a = meshes::annulus();
  CHECK(a.count(0) == 8);
  CHECK(a.count(1) == 16);
  CHECK(a.count(2) == 8);
  CHECK(euler_characteristic(a) == 0);
  for (int n = 1; n <= 3; ++n)
    for (const auto& [name, m] : testing::test_meshes(n)) {
      CAPTURE(name);
      CHECK(euler_characteristic(m) == 1);
    }
}

TEST_CASE("cells must be nondegenerate and well formed") {
  CHECK_THROWS_AS(build_mesh({v({0, 0}), v({1, 0}), v({2, 0})}, {{0, 1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh({v({0, 0}), v({1, 0}), v({0, 1})}, {{0, 1, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh({v({0, 0}), v({1, 0}), v({0, 1})}, {{0, 1}}), std::invalid_argument);
}

TEST_CASE("boundary classification") {
  const auto sq = classify_boundary(meshes::two_triangle_square());
  CHECK(sq.V0() == 4);
  CHECK(sq.V0s() == 0);
  CHECK(sq.E0() == 4);

  const auto chain = classify_boundary(meshes::interval_chain(3));
  CHECK_FALSE(chain.has_corner_notion);
  CHECK(chain.V0() == 2);

  // one boundary edge split at its midpoint
  const auto m = meshes::three_triangle_square();
  const auto bc = classify_boundary(m);
  REQUIRE(bc.V0s() == 1);
  const Vec q = m.vertices[bc.noncorner_vertices[0]];
  int between = 0;
  for (int a : bc.corner_vertices)
    for (int b : bc.corner_vertices)
      if (a < b && (q - 0.5 * (m.vertices[a] + m.vertices[b])).norm() < 1e-12) ++between;
  CHECK(between == 1);
  CHECK(bc.V0() == 5);

  const auto ann = classify_boundary(meshes::annulus());
  CHECK(ann.V0() == 8);
  CHECK(ann.V0s() == 0);
}

TEST_CASE("boundary classification is invariant under rigid motions") {
  std::mt19937 g(11);
  for (const char* name : {"square2", "square3", "annulus", "two_tets", "three_tets"}) {
    const auto m = meshes::by_name(name);
    const auto ref = classify_boundary(m);
    for (int trial = 0; trial < 10; ++trial) {
      const auto bc = classify_boundary(testing::rigid_motion(m, g));
      CAPTURE(name);
      CHECK(bc.boundary_vertices == ref.boundary_vertices);
      CHECK(bc.corner_vertices == ref.corner_vertices);
      CHECK(bc.corner_edges == ref.corner_edges);
      CHECK(bc.boundary_faces == ref.boundary_faces);
    }
  }
}

TEST_CASE("frames of axis-aligned simplices") {
  const auto t = meshes::single_simplex(2);
  const Frame f = simplex_frame(t, 1, t.find({0, 1}));
  CHECK((f.tangent - v({1, 0})).norm() < 1e-14);
  REQUIRE(f.normals.size() == 1);
  CHECK(std::abs(std::abs(f.normals[0](1)) - 1.0) < 1e-14);

  const auto tet = meshes::single_simplex(3);
  const Frame e = simplex_frame(tet, 1, tet.find({0, 3}));
  CHECK((e.tangent - v({0, 0, 1})).norm() < 1e-14);
  REQUIRE(e.normals.size() == 2);
  CHECK(std::abs(e.normals[0].dot(e.normals[1])) < 1e-14);

  // face z = 0: cross product of its edge vectors
  const Frame fz = simplex_frame(tet, 2, tet.find({0, 1, 2}));
  const Eigen::Vector3d a = tet.vertices[1] - tet.vertices[0], b = tet.vertices[2] - tet.vertices[0];
  const Vec c = a.cross(b).normalized();
  CHECK(std::abs(std::abs(fz.normal.dot(c)) - 1.0) < 1e-14);
  CHECK(std::abs(fz.normal(2)) == doctest::Approx(1.0));
}

TEST_CASE("every frame is orthonormal and follows the sorted-index rule") {
  std::mt19937 g(5);
  std::vector<SimplicialMesh> ms{meshes::annulus(), meshes::three_tets_edge(), fourteen_tet_grid(1, 1, 1)};
  ms.push_back(testing::rigid_motion(meshes::two_tets(), g));
  for (const auto& m : ms)
    for (int d = 1; d < m.dim; ++d)
      for (int id = 0; id < m.count(d); ++id) {
        const Frame f = simplex_frame(m, d, id);
        std::vector<Vec> all;
        if (d == 1) {
          const auto& s = m.simplices[1][id];
          CHECK(s[0] < s[1]);
          const Vec dir = (m.vertices[s[1]] - m.vertices[s[0]]).normalized();
          CHECK((f.tangent - dir).norm() < 1e-12);
          all.push_back(f.tangent);
          for (const auto& n : f.normals) all.push_back(n);
        } else {
          all.push_back(f.normal);
          for (const auto& t : f.tangents) all.push_back(t);
        }
        CHECK(static_cast<int>(all.size()) == m.dim);
        for (std::size_t i = 0; i < all.size(); ++i)
          for (std::size_t j = 0; j < all.size(); ++j)
            CHECK(std::abs(all[i].dot(all[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
      }
}

TEST_CASE("body-centred cube grid") {
  // one cube: 8 corners, 1 centre, 6 face centres; each face fans into 4 triangles
  const auto one = fourteen_tet_grid(1, 1, 1);
  CHECK(one.count(0) == 15);
  CHECK(one.count(3) == 24);
  // the centre vertex meets 8 corners and 6 face centres
  int centre_degree = 0;
  for (const auto& e : one.simplices[1])
    for (int x : e)
      if ((one.vertices[x] - Vec::Constant(3, 0.5)).norm() < 1e-12) ++centre_degree;
  CHECK(centre_degree == 14);

  const auto two = fourteen_tet_grid(2, 1, 1);
  CHECK(euler_characteristic(two) == 1);

  double last = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const auto m = fourteen_tet_grid(n, n, n);
    const double ratio = static_cast<double>(m.count(1)) / m.count(0);
    CHECK(ratio > last);
    CHECK(ratio < 7.0);
    CHECK(euler_characteristic(m) == 1);
    last = ratio;
  }
}
