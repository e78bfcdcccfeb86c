#include "derham/space.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace derham {

namespace {

double monomial_value(const MultiIndex& a, const Vec& bary) {
  double v = 1.0;
  for (int j = 0; j < a.len; ++j)
    for (int e = 0; e < a[j]; ++e) v *= bary(j);
  return v;
}

// Cartesian derivative of lambda^a along the given axes, evaluated at bary.
double monomial_derivative(const Mat& grads, const MultiIndex& a, const std::vector<int>& axes, std::size_t from,
                           const Vec& bary) {
  if (from == axes.size()) return monomial_value(a, bary);
  double s = 0.0;
  for (int i = 0; i < a.len; ++i) {
    if (a[i] == 0) continue;
    const double g = grads(i, axes[from]);
    if (g == 0.0) continue;
    MultiIndex b = a;
    b[i] -= 1;
    s += a[i] * g * monomial_derivative(grads, b, axes, from + 1, bary);
  }
  return s;
}

std::vector<std::vector<int>> axis_tuples_upto(int n, int order) {
  std::vector<std::vector<int>> out{{}};
  std::vector<std::vector<int>> layer{{}};
  for (int o = 1; o <= order; ++o) {
    std::vector<std::vector<int>> next;
    for (const auto& t : layer)
      for (int i = t.empty() ? 0 : t.back(); i < n; ++i) {
        auto u = t;
        u.push_back(i);
        next.push_back(u);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

}  // namespace

Mat constraint_functionals(const SimplicialMesh& m, const Simplex& cell, int k, int degree, Constraint ct,
                const std::vector<int>& sub, const Vec& x) {
  const int n = m.dim;
  const auto& mons = multi_indices(n + 1, degree);
  const long nm = static_cast<long>(mons.size());
  const auto& Is = form_indices(n, k);
  const long nc = static_cast<long>(Is.size());
  const Vec bary = cell.barycentric(x);
  const int d = static_cast<int>(sub.size()) - 1;
  std::vector<Vec> rows;
  auto comp_rows = [&](const std::vector<int>& axes) {
    for (long c = 0; c < nc; ++c) {
      Vec r = Vec::Zero(nc * nm);
      for (long a = 0; a < nm; ++a) r(c * nm + a) = monomial_derivative(cell.gradients(), mons[a], axes, 0, bary);
      rows.push_back(std::move(r));
    }
  };
  // sum_I coef_I * u_I
  auto combo_row = [&](const std::vector<double>& coef) {
    Vec r = Vec::Zero(nc * nm);
    for (long c = 0; c < nc; ++c) {
      if (coef[c] == 0.0) continue;
      for (long a = 0; a < nm; ++a) r(c * nm + a) = coef[c] * monomial_value(mons[a], bary);
    }
    rows.push_back(std::move(r));
  };
  switch (ct) {
    case Constraint::none: break;
    case Constraint::value: comp_rows({}); break;
    case Constraint::jet1:
    case Constraint::jet2:
      for (const auto& ax : axis_tuples_upto(n, ct == Constraint::jet1 ? 1 : 2)) comp_rows(ax);
      break;
    case Constraint::trace: {
      if (d < k) break;
      if (k == 0) {
        comp_rows({});
        break;
      }
      Mat V(n, d);
      for (int i = 1; i <= d; ++i) V.col(i - 1) = m.vertices[sub[i]] - m.vertices[sub[0]];
      for (const auto& J : form_indices(d, k)) {
        std::vector<double> coef(nc, 0.0);
        for (long c = 0; c < nc; ++c) {
          Mat sq(k, k);
          for (int r = 0; r < k; ++r)
            for (int s = 0; s < k; ++s) sq(r, s) = V(Is[c][r], J[s]);
          coef[c] = sq.determinant();
        }
        combo_row(coef);
      }
      break;
    }
    case Constraint::normals: {
      // 2-form proxy u = (w23, -w13, w12) paired with the edge normals
      if (n != 3 || k != 2 || d != 1) throw std::logic_error("normals constraint: 3D 2-forms on edges only");
      const Frame fr = edge_frame(m.vertices[sub[0]], m.vertices[sub[1]]);
      for (const auto& nu : fr.normals) combo_row({nu(2), -nu(1), nu(0)});
      break;
    }
  }
  Mat out(static_cast<long>(rows.size()), nc * nm);
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = rows[i].transpose();
  return out;
}

namespace {

Mat evaluation_matrix(int n, int k, int q, const Mat& pts) {
  const auto& mons = multi_indices(n + 1, q);
  const long nm = static_cast<long>(mons.size());
  const long nc = binomial(n, k);
  Mat e = Mat::Zero(pts.rows() * nc, nm * nc);
  for (long i = 0; i < pts.rows(); ++i) {
    const Vec b = pts.row(i).transpose();
    for (long a = 0; a < nm; ++a) {
      const double v = monomial_value(mons[a], b);
      for (long c = 0; c < nc; ++c) e(i * nc + c, c * nm + a) = v;
    }
  }
  return e;
}

void check_same_mesh(const GlobalSpace& a, const GlobalSpace& b) {
  if (a.mesh != b.mesh &&
      (a.mesh->dim != b.mesh->dim || a.mesh->cells != b.mesh->cells || a.mesh->vertices.size() != b.mesh->vertices.size()))
    throw std::invalid_argument("spaces live on different meshes");
}

}  // namespace

ContinuitySpec continuity_spec(const ElementKey& key) {
  using C = Constraint;
  const int n = key.n;
  const int k = key.k;
  ContinuitySpec s;
  switch (key.family) {
    case Family::r0:
    case Family::trimmed: s.by_dim.assign(n, C::trace); break;
    case Family::r1:
      if (n == 1) s.by_dim = {k == 0 ? C::jet1 : C::value};
      if (n == 2) {
        if (k == 0) s.by_dim = {C::jet1, C::value};
        if (k == 1) s.by_dim = {C::value, C::trace};
        if (k == 2) s.by_dim = {C::none, C::none};
      }
      if (n == 3) {
        if (k == 0) s.by_dim = {C::jet1, C::value, C::value};
        if (k == 1) s.by_dim = {C::value, C::trace, C::trace};
        if (k == 2) s.by_dim = {C::none, C::none, C::trace};
        if (k == 3) s.by_dim = {C::none, C::none, C::none};
      }
      break;
    case Family::r2:
      if (n == 1) s.by_dim = {k == 0 ? C::jet2 : C::jet1};
      if (n == 2) {
        if (k == 0) s.by_dim = {C::jet2, C::jet1};
        if (k == 1) s.by_dim = {C::jet1, C::value};
        if (k == 2) s.by_dim = {C::value, C::none};
      }
      if (n == 3) {
        if (k == 0) s.by_dim = {C::jet2, C::jet1, C::value};
        if (k == 1) s.by_dim = {C::jet1, C::value, C::trace};
        if (k == 2) s.by_dim = {C::value, C::none, C::trace};
        if (k == 3) s.by_dim = {C::none, C::none, C::none};
      }
      break;
    case Family::hz: s.by_dim = {C::value, C::normals, C::trace}; break;
    case Family::vector_hermite:
      s.by_dim.assign(n, C::value);
      s.by_dim[0] = C::jet1;
      break;
    case Family::vector_lagrange: s.by_dim.assign(n, C::value); break;
  }
  return s;
}

Mat constraint_matrix(const SimplicialMesh& m, int k, int degree, const ContinuitySpec& spec) {
  const int n = m.dim;
  const long nm = dim_full(n, degree, k);
  const long ncells = m.count(n);
  std::vector<Vec> rows;
  std::vector<Simplex> cells;
  for (int c = 0; c < ncells; ++c) cells.push_back(m.cell_simplex(c));
  for (int d = 0; d < n && d < static_cast<int>(spec.by_dim.size()); ++d) {
    const Constraint ct = spec.by_dim[d];
    if (ct == Constraint::none) continue;
    for (int id = 0; id < m.count(d); ++id) {
      const auto& around = m.cells_around[d][id];
      if (around.size() < 2) continue;
      const auto& sub = m.simplices[d][id];
      std::vector<int> local(d + 1);
      for (int i = 0; i <= d; ++i) local[i] = i;
      for (const auto& lb : lattice_points(d, local, std::max(degree, 0))) {
        Vec x = Vec::Zero(n);
        for (int i = 0; i <= d; ++i) x += lb(i) * m.vertices[sub[i]];
        const int c0 = around[0];
        const Mat f0 = constraint_functionals(m, cells[c0], k, degree, ct, sub, x);
        for (std::size_t t = 1; t < around.size(); ++t) {
          const int c = around[t];
          const Mat f = constraint_functionals(m, cells[c], k, degree, ct, sub, x);
          for (long r = 0; r < f.rows(); ++r) {
            Vec row = Vec::Zero(ncells * nm);
            row.segment(c0 * nm, nm) = f0.row(r).transpose();
            row.segment(c * nm, nm) -= f.row(r).transpose();
            const double s = row.cwiseAbs().maxCoeff();
            if (s > 0.0) rows.push_back(row / s);
          }
        }
      }
    }
  }
  Mat a(static_cast<long>(rows.size()), ncells * nm);
  for (std::size_t i = 0; i < rows.size(); ++i) a.row(i) = rows[i].transpose();
  return a;
}

GlobalSpace assemble_space(const SimplicialMesh& mesh, const ElementKey& key, AssemblyMode mode) {
  if (std::string why = validate(key); !why.empty()) throw std::invalid_argument(why);
  if (key.n != mesh.dim)
    throw std::invalid_argument("assemble_space: element dimension " + std::to_string(key.n) +
                                " does not match mesh dimension " + std::to_string(mesh.dim));
  GlobalSpace s;
  s.mesh = std::make_shared<const SimplicialMesh>(mesh);
  s.name = describe(key);
  s.n = key.n;
  s.k = key.k;
  s.degree = key.p;
  s.key = key;
  const int n = key.n;
  const ElementDef ref = element_def(key);
  const int ncells = mesh.count(n);

  // (dim, subsimplex id, local index) identifies a DoF; cells list vertices ascending,
  // so every cell realises a shared DoF with the same orientation and frame.
  using DofKey = std::tuple<int, int, int>;
  std::map<DofKey, long> index;
  std::vector<std::vector<DofKey>> keys(ncells);
  for (int c = 0; c < ncells; ++c) {
    const auto& verts = mesh.cells[c];
    for (const auto& dof : ref.dofs) {
      std::vector<int> g;
      for (int v : dof.sub) g.push_back(verts[v]);
      const int d = static_cast<int>(g.size()) - 1;
      const int id = dof.continuity == Continuity::per_cell ? c : mesh.find(g);
      if (id < 0) throw std::logic_error("assemble_space: subsimplex missing from the skeleton");
      keys[c].emplace_back(d, id, dof.local_index);
      index.emplace(keys[c].back(), 0);
    }
  }
  long next = 0;
  for (auto& [kk, v] : index) v = next++;
  s.dimension = next;
  s.dofs.assign(next, GlobalDof{});
  std::vector<bool> seen(next, false);
  s.dof_l2g.assign(ncells, {});
  for (int c = 0; c < ncells; ++c)
    for (std::size_t i = 0; i < ref.dofs.size(); ++i) {
      const long g = index.at(keys[c][i]);
      s.dof_l2g[c].push_back(g);
      if (seen[g]) continue;
      seen[g] = true;
      auto& gd = s.dofs[g];
      gd.dim = std::get<0>(keys[c][i]);
      gd.sub_id = std::get<1>(keys[c][i]);
      gd.local_index = std::get<2>(keys[c][i]);
      gd.continuity = ref.dofs[i].continuity;
      gd.cell = gd.continuity == Continuity::per_cell ? c : -1;
      gd.rep_cell = c;
      gd.rep_local = static_cast<int>(i);
      gd.label = dof_class(ref.dofs[i], n);
    }
  if (mode == AssemblyMode::count_only) return s;

  s.l2g = s.dof_l2g;
  for (int c = 0; c < ncells; ++c) {
    const Simplex T = mesh.cell_simplex(c);
    const ElementDef e = make_element(key, T);
    const Mat mono = dof_monomial_matrix(e.dofs, T, key.p, key.k);
    const Mat B = e.shape_coefficients();
    Eigen::FullPivLU<Mat> lu(mono * B);
    if (!lu.isInvertible()) throw std::runtime_error(s.name + ": DoF matrix singular on cell " + std::to_string(c));
    s.cells.push_back(T);
    s.basis.push_back(B * lu.inverse());
    s.dof_mono.push_back(mono);
  }
  return s;
}

GlobalSpace constrained_space(const SimplicialMesh& mesh, int k, int degree, const ContinuitySpec& spec,
                              const std::string& name) {
  GlobalSpace s;
  s.mesh = std::make_shared<const SimplicialMesh>(mesh);
  s.name = name;
  s.n = mesh.dim;
  s.k = k;
  s.degree = degree;
  const int ncells = mesh.count(mesh.dim);
  const long nm = dim_full(mesh.dim, degree, k);
  const Mat a = constraint_matrix(mesh, k, degree, spec);
  const Mat N = a.rows() ? null_space(a) : Mat::Identity(ncells * nm, ncells * nm);
  s.dimension = N.cols();
  std::vector<long> all(s.dimension);
  for (long j = 0; j < s.dimension; ++j) all[j] = j;
  for (int c = 0; c < ncells; ++c) {
    s.cells.push_back(mesh.cell_simplex(c));
    s.basis.push_back(N.block(c * nm, 0, nm, s.dimension));
    s.l2g.push_back(all);
  }
  return s;
}

Mat broken_basis(const GlobalSpace& s) {
  const long nm = s.nmono();
  Mat b = Mat::Zero(nm * static_cast<long>(s.basis.size()), s.dimension);
  for (std::size_t c = 0; c < s.basis.size(); ++c)
    for (long j = 0; j < s.basis[c].cols(); ++j) b.block(c * nm, s.l2g[c][j], nm, 1) += s.basis[c].col(j);
  return b;
}

Mat broken_basis(const GlobalSpace& s, int q) {
  if (q == s.degree) return broken_basis(s);
  const Mat e = elevation_matrix(s.n, s.k, s.degree, q);
  const Mat b = broken_basis(s);
  const long nm = s.nmono();
  const long nq = e.rows();
  Mat out(nq * static_cast<long>(s.basis.size()), s.dimension);
  for (std::size_t c = 0; c < s.basis.size(); ++c) out.middleRows(c * nq, nq) = e * b.middleRows(c * nm, nm);
  return out;
}

double constraint_residual(const GlobalSpace& s, const ContinuitySpec& spec) {
  const Mat a = constraint_matrix(*s.mesh, s.k, s.degree, spec);
  if (a.rows() == 0 || s.dimension == 0) return 0.0;
  const Mat b = broken_basis(s);
  const double scale = b.cwiseAbs().maxCoeff();
  return (a * b).cwiseAbs().maxCoeff() / (scale > 0.0 ? scale : 1.0);
}

Vec interpolate(const GlobalSpace& s, const std::vector<Vec>& cellwise) {
  if (!s.has_dofs()) throw std::invalid_argument("interpolate: space has no DoFs");
  Vec v(s.dimension);
  for (long g = 0; g < s.dimension; ++g) {
    const auto& d = s.dofs[g];
    v(g) = s.dof_mono[d.rep_cell].row(d.rep_local).dot(cellwise[d.rep_cell]);
  }
  return v;
}

std::vector<std::tuple<long, long, double>> OperatorMatrix::entries(double drop) const {
  std::vector<std::tuple<long, long, double>> out;
  for (long i = 0; i < dense.rows(); ++i)
    for (long j = 0; j < dense.cols(); ++j)
      if (std::abs(dense(i, j)) > drop) out.emplace_back(i, j, dense(i, j));
  return out;
}

OperatorMatrix assemble_operator(const GlobalSpace& src, const GlobalSpace& dst, const CellOperator& op,
                                 const std::string& name, double tol) {
  if (!dst.has_dofs()) throw std::invalid_argument("assemble_operator: target space needs DoFs");
  if (src.basis.empty() || dst.basis.empty())
    throw std::invalid_argument("assemble_operator: spaces were assembled without bases");
  check_same_mesh(src, dst);
  OperatorMatrix out;
  out.name = name;
  out.rows = dst.dimension;
  out.cols = src.dimension;
  out.dense = Mat::Zero(out.rows, out.cols);
  const int ncells = static_cast<int>(src.cells.size());
  std::vector<Mat> images(ncells);
  for (int c = 0; c < ncells; ++c) {
    const Mat O = op(src.cells[c], src.degree, dst.degree);
    images[c] = O * src.basis[c];
    const Mat L = dst.dof_mono[c] * images[c];
    for (long i = 0; i < L.rows(); ++i) {
      const long g = dst.dof_l2g[c][i];
      if (dst.dofs[g].rep_cell != c || dst.dofs[g].rep_local != i) continue;
      for (long j = 0; j < L.cols(); ++j) out.dense(g, src.l2g[c][j]) = L(i, j);
    }
  }
  double resid = 0.0;
  double scale = 0.0;
  for (int c = 0; c < ncells; ++c) {
    const Mat pts = sample_points(dst.n, 30, 1000u + static_cast<unsigned>(c));
    const Mat E = evaluation_matrix(dst.n, dst.k, dst.degree, pts);
    Mat sub(dst.l2g[c].size(), src.l2g[c].size());
    for (std::size_t i = 0; i < dst.l2g[c].size(); ++i)
      for (std::size_t j = 0; j < src.l2g[c].size(); ++j) sub(i, j) = out.dense(dst.l2g[c][i], src.l2g[c][j]);
    const Mat g = E * images[c];
    scale = std::max(scale, g.size() ? g.cwiseAbs().maxCoeff() : 0.0);
    const Mat diff = g - E * (dst.basis[c] * sub);
    resid = std::max(resid, diff.size() ? diff.cwiseAbs().maxCoeff() : 0.0);
  }
  out.containment_residual = scale > 0.0 ? resid / scale : resid;
  if (out.containment_residual > tol)
    throw std::runtime_error(name + ": image leaves " + dst.name + " (relative residual " +
                             std::to_string(out.containment_residual) + ")");
  return out;
}

CellOperator exterior_derivative_operator(int k) {
  return [k](const Simplex& cell, int qs, int qd) -> Mat {
    const Mat d = derivative_matrix(cell, qs, k);
    const int n = cell.dim();
    const int q = std::max(qs - 1, 0);
    if (qs == 0) return Mat::Zero(dim_full(n, qd, k + 1), d.cols());
    if (qd < q) throw std::invalid_argument("exterior derivative lands above the target degree");
    return elevation_matrix(n, k + 1, q, qd) * d;
  };
}

OperatorMatrix assemble_d(const GlobalSpace& src, const GlobalSpace& dst, double tol) {
  if (dst.k != src.k + 1) throw std::invalid_argument("assemble_d: target must hold (k+1)-forms");
  return assemble_operator(src, dst, exterior_derivative_operator(src.k), "d: " + src.name + " -> " + dst.name, tol);
}

bool space_equal(const GlobalSpace& a, const GlobalSpace& b, double tol) {
  check_same_mesh(a, b);
  if (a.k != b.k || a.n != b.n) return false;
  if (a.dimension != b.dimension) return false;
  const int q = std::max(a.degree, b.degree);
  const Mat A = broken_basis(a, q);
  const Mat B = broken_basis(b, q);
  Mat both(A.rows(), A.cols() + B.cols());
  both << A, B;
  if (numerical_rank(both) != a.dimension || numerical_rank(A) != a.dimension) return false;
  if (a.key && b.key) {
    if (constraint_residual(a, continuity_spec(*b.key)) > tol) return false;
    if (constraint_residual(b, continuity_spec(*a.key)) > tol) return false;
  }
  return true;
}

}  // namespace derham
