#include <Eigen/LU>
#include <algorithm>
#include <stdexcept>

#include "derham/complex.hpp"

namespace derham {

namespace {

Mat rows_to_matrix(const std::vector<Vec>& rows, long cols) {
  Mat a(static_cast<long>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) a.row(i) = rows[i].transpose();
  return a;
}

}  // namespace

HomogeneousSpace restrict_homogeneous(const GlobalSpace& space, const BoundaryClassification& bc) {
  const SimplicialMesh& m = *space.mesh;
  const int n = space.n;
  const int k = space.k;
  const long nm = space.nmono();
  const int ncells = static_cast<int>(space.cells.size());
  const Mat B = broken_basis(space);
  std::vector<Vec> rows;

  // vanishing tangential trace on every boundary facet
  if (k < n)
    for (int f = 0; f < m.count(n - 1); ++f) {
      if (!m.on_boundary[n - 1][f]) continue;
      const int c = m.cells_around[n - 1][f][0];
      const auto& sub = m.simplices[n - 1][f];
      std::vector<int> local(n);
      for (int i = 0; i < n; ++i) local[i] = i;
      for (const auto& lb : lattice_points(n - 1, local, std::max(space.degree, 0))) {
        Vec x = Vec::Zero(n);
        for (int i = 0; i < n; ++i) x += lb(i) * m.vertices[sub[i]];
        const Mat F = constraint_functionals(m, space.cells[c], k, space.degree, Constraint::trace, sub, x);
        for (long r = 0; r < F.rows(); ++r) {
          Vec row = F.row(r) * B.middleRows(c * nm, nm);
          const double s = row.size() ? row.cwiseAbs().maxCoeff() : 0.0;
          if (s > 0.0) rows.push_back(row / s);
        }
      }
    }

  HomogeneousSpace h;
  // top forms: quotient by constants, realised as the mean-zero subspace
  if (k == n && !bc.empty()) {
    h.mean_zero = true;
    const auto& mons = multi_indices(n + 1, space.degree);
    Vec row = Vec::Zero(space.dimension);
    for (int c = 0; c < ncells; ++c) {
      Vec w(nm);
      for (long a = 0; a < nm; ++a) w(a) = integrate_monomial(space.cells[c], mons[a]);
      row += (w.transpose() * B.middleRows(c * nm, nm)).transpose();
    }
    rows.push_back(row / row.cwiseAbs().maxCoeff());
  }

  h.parent = space;
  h.basis = rows.empty() ? Mat(Mat::Identity(space.dimension, space.dimension))
                         : null_space(rows_to_matrix(rows, space.dimension));
  h.dimension = h.basis.cols();
  h.removed = space.dimension - h.dimension;
  if (space.key) h.formula_removed = homogeneous_removed_formula(*space.key, bc);
  return h;
}

long homogeneous_removed_formula(const ElementKey& key, const BoundaryClassification& bc) {
  if (bc.empty()) return 0;
  if (key.k == key.n) return 1;
  if (key.family != Family::r1 || key.n != 2) return -1;
  const long p = key.p;
  if (key.k == 0) return (p - 3) * bc.E0() + 3L * bc.V0() - bc.V0s();
  return (p - 1) * bc.E0() + 2L * bc.V0() - bc.V0s();
}

ExactnessReport homogeneous_exactness(const SimplicialMesh& mesh, const FamilyRow& row) {
  const BoundaryClassification bc = classify_boundary(mesh);
  const AssembledRow a = assemble_row(mesh, row);
  std::vector<HomogeneousSpace> hs;
  for (const auto& s : a.spaces) hs.push_back(restrict_homogeneous(s, bc));
  std::vector<std::string> names;
  std::vector<long> dims;
  std::vector<Mat> ops;
  std::vector<double> containment;
  for (const auto& h : hs) {
    names.push_back("hom " + h.parent.name);
    dims.push_back(h.dimension);
  }
  for (int k = 0; k < row.n; ++k) {
    const Mat img = a.ops[k].dense * hs[k].basis;
    const Mat D = hs[k + 1].basis.transpose() * img;
    const Mat back = hs[k + 1].basis * D;
    const double scale = img.size() ? img.cwiseAbs().maxCoeff() : 0.0;
    const double res = img.size() ? (img - back).cwiseAbs().maxCoeff() : 0.0;
    containment.push_back(scale > 0.0 ? res / scale : res);
    ops.push_back(D);
  }
  ExactnessReport r = exactness_report("homogeneous " + row.name, names, dims, ops, std::vector<int>(row.n + 1, 0));
  r.containment = containment;
  r.complex_ok = r.complex_ok && std::all_of(containment.begin(), containment.end(), [](double x) { return x < 1e-8; });
  return r;
}

Vec corner_gradient(const Vec& t1, const Vec& t2, double d1, double d2) {
  Mat A(2, 2);
  A.row(0) = t1.transpose();
  A.row(1) = t2.transpose();
  Eigen::FullPivLU<Mat> lu(A);
  if (!lu.isInvertible()) throw std::invalid_argument("corner_gradient: tangents are collinear");
  return lu.solve(Vec((Vec(2) << d1, d2).finished()));
}

std::vector<VertexBoundaryData> boundary_vertex_data(const SimplicialMesh& mesh, const BoundaryClassification& bc,
                                                     const std::function<double(const Vec&)>& g,
                                                     const std::function<Vec(const Vec&)>& grad_g) {
  if (mesh.dim != 2) throw std::invalid_argument("boundary_vertex_data: triangular meshes only");
  std::vector<VertexBoundaryData> out;
  for (int v : bc.boundary_vertices) {
    VertexBoundaryData d;
    d.vertex = v;
    d.corner = std::find(bc.corner_vertices.begin(), bc.corner_vertices.end(), v) != bc.corner_vertices.end();
    const Vec& x = mesh.vertices[v];
    d.value = g(x);
    const Vec grad = grad_g(x);
    for (int e : bc.boundary_edges) {
      const auto& ev = mesh.simplices[1][e];
      if (ev[0] != v && ev[1] != v) continue;
      const Frame fr = edge_frame(mesh.vertices[ev[0]], mesh.vertices[ev[1]]);
      d.tangents.push_back(fr.tangent);
      d.tangential_derivatives.push_back(grad.dot(fr.tangent));
    }
    if (d.corner && d.tangents.size() >= 2)
      d.gradient = corner_gradient(d.tangents[0], d.tangents[1], d.tangential_derivatives[0], d.tangential_derivatives[1]);
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace derham
