#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "derham/bgg.hpp"

namespace derham::testing {

// Affine simplex with vertices in [-1, 1]^n, rejected until reasonably shaped.
inline Simplex random_simplex(int n, std::mt19937& g, double quality = 0.08) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    std::vector<Vec> pts;
    for (int i = 0; i <= n; ++i) {
      Vec x(n);
      for (int c = 0; c < n; ++c) x(c) = u(g);
      pts.push_back(x);
    }
    double h = 0.0;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j < i; ++j) h = std::max(h, (pts[i] - pts[j]).norm());
    Simplex s(pts);
    if (s.volume() / std::pow(h, n) > quality) return s;
  }
}

inline Poly random_poly(int nvars, int degree, std::mt19937& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Poly f(nvars);
  for (int d = 0; d <= degree; ++d)
    for (const auto& a : multi_indices(nvars, d)) f.add(a, u(g));
  return f;
}

inline FormPolynomial random_form(int n, int k, int degree, std::mt19937& g) {
  FormPolynomial w(n, k);
  for (auto& c : w.comp) c = random_poly(n + 1, degree, g);
  return w;
}

// Barycentric point strictly inside the simplex.
inline Vec random_bary(int n, std::mt19937& g) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Vec b(n + 1);
  for (int i = 0; i <= n; ++i) b(i) = u(g);
  return b / b.sum();
}

// Random rotation (QR of a Gaussian matrix, determinant fixed to +1) and shift.
inline SimplicialMesh rigid_motion(const SimplicialMesh& m, std::mt19937& g) {
  std::normal_distribution<double> z;
  const int n = m.dim;
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = z(g);
  Mat q = Eigen::HouseholderQR<Mat>(a).householderQ();
  if (q.determinant() < 0) q.col(0) *= -1.0;
  Vec shift(n);
  for (int i = 0; i < n; ++i) shift(i) = z(g);
  std::vector<Vec> v;
  for (const auto& x : m.vertices) v.push_back(q * x + shift);
  return build_mesh(v, m.cells);
}

inline std::vector<std::pair<std::string, SimplicialMesh>> test_meshes(int n) { return meshes::contractible(n); }

}  // namespace derham::testing
