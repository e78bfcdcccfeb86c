#include "derham/bgg.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <random>
#include <stdexcept>

namespace derham {

namespace {

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double relative(const Mat& diff, double scale) {
  const double r = max_abs(diff);
  return scale > 0.0 ? r / scale : r;
}

Mat block_diag2(const Mat& a) {
  Mat out = Mat::Zero(2 * a.rows(), 2 * a.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(a.rows(), a.cols()) = a;
  return out;
}

Mat hstack(const Mat& a, const Mat& b) {
  Mat out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

Mat inverse(const Mat& a, const char* what) {
  Eigen::FullPivLU<Mat> lu(a);
  if (a.rows() != a.cols() || !lu.isInvertible()) throw std::runtime_error(std::string(what) + " is not invertible");
  return lu.inverse();
}

// Cell operator taking one scalar component into component `comp` of a form, times `sign`.
CellOperator embed(int src_comps, int src_comp, int dst_comps, int dst_comp, double sign) {
  return [=](const Simplex& cell, int qs, int qd) -> Mat {
    const Mat e = elevation_matrix(cell.dim(), 0, qs, qd);
    const long ns = e.cols();
    const long nd = e.rows();
    Mat m = Mat::Zero(nd * dst_comps, ns * src_comps);
    m.block(dst_comp * nd, src_comp * ns, nd, ns) = sign * e;
    return m;
  };
}

ExactnessReport default_three(const std::string& name, const std::vector<std::string>& names,
                              const std::vector<long>& dims, const std::vector<Mat>& ops, std::vector<int> expected) {
  if (expected.empty()) expected = {3, 0, 0};
  return exactness_report(name, names, dims, ops, std::move(expected));
}

}  // namespace

BggSpaces bgg_spaces(const SimplicialMesh& mesh, int p) {
  if (mesh.dim != 2) throw std::invalid_argument("bgg: triangular meshes only");
  if (p < 1) throw std::invalid_argument("bgg: p must be >= 1");
  BggSpaces s;
  s.p = p;
  // below the Argyris degree the C2-vertex / C1-edge space is defined by its constraints
  GlobalSpace top0 = p + 3 >= min_degree(Family::r2, 0, 2)
                         ? assemble_space(mesh, ElementKey{Family::r2, p + 3, 0, 2})
                         : constrained_space(mesh, 0, p + 3, ContinuitySpec{{Constraint::jet2, Constraint::jet1}},
                                             "P_{2," + std::to_string(p + 3) + "}L0 (constrained)");
  s.top[0] = {std::move(top0), ValueType::skew, 1};
  s.top[1] = {assemble_space(mesh, ElementKey{Family::r2, p + 2, 1, 2}), ValueType::skew, 1};
  s.top[2] = {assemble_space(mesh, ElementKey{Family::r2, p + 1, 2, 2}), ValueType::skew, 1};
  for (int k = 0; k < 3; ++k)
    s.bottom[k] = {assemble_space(mesh, ElementKey{Family::r1, p + 2 - k, k, 2}), ValueType::vector, 2};
  return s;
}

OperatorMatrix s0_operator(const ValuedSpace& src, const ValuedSpace& dst) {
  if (src.value != ValueType::vector || src.base.k != 0 || dst.value != ValueType::skew || dst.base.k != 1)
    throw std::invalid_argument("s0_operator: needs vector 0-forms and skew 1-forms");
  const OperatorMatrix a = assemble_operator(src.base, dst.base, embed(1, 0, 2, 1, 1.0), "S0 u1");
  const OperatorMatrix b = assemble_operator(src.base, dst.base, embed(1, 0, 2, 0, -1.0), "S0 u2");
  OperatorMatrix out;
  out.name = "S0";
  out.dense = hstack(a.dense, b.dense);
  out.rows = out.dense.rows();
  out.cols = out.dense.cols();
  out.containment_residual = std::max(a.containment_residual, b.containment_residual);
  return out;
}

OperatorMatrix s1_operator(const ValuedSpace& src, const ValuedSpace& dst) {
  if (src.value != ValueType::vector || src.base.k != 1 || dst.value != ValueType::skew || dst.base.k != 2)
    throw std::invalid_argument("s1_operator: needs vector 1-forms and skew 2-forms");
  const OperatorMatrix a = assemble_operator(src.base, dst.base, embed(2, 0, 1, 0, -1.0), "S1 w11");
  const OperatorMatrix b = assemble_operator(src.base, dst.base, embed(2, 1, 1, 0, -1.0), "S1 w22");
  OperatorMatrix out;
  out.name = "S1";
  out.dense = hstack(a.dense, b.dense);
  out.rows = out.dense.rows();
  out.cols = out.dense.cols();
  out.containment_residual = std::max(a.containment_residual, b.containment_residual);
  return out;
}

Mat BlockOperator::dense() const {
  Mat out = Mat::Zero(d_top.rows() + d_bottom.rows(), d_top.cols() + d_bottom.cols());
  out.topLeftCorner(d_top.rows(), d_top.cols()) = d_top;
  out.topRightCorner(s.rows(), s.cols()) = -s;
  out.bottomRightCorner(d_bottom.rows(), d_bottom.cols()) = d_bottom;
  return out;
}

BggOperators bgg_operators(const SimplicialMesh& mesh, int p) {
  BggOperators o;
  o.spaces = bgg_spaces(mesh, p);
  const auto& s = o.spaces;
  o.d0_top = assemble_d(s.top[0].base, s.top[1].base).dense;
  o.d1_top = assemble_d(s.top[1].base, s.top[2].base).dense;
  o.d0_bottom = block_diag2(assemble_d(s.bottom[0].base, s.bottom[1].base).dense);
  o.d1_bottom = block_diag2(assemble_d(s.bottom[1].base, s.bottom[2].base).dense);
  o.s0 = s0_operator(s.bottom[0], s.top[1]).dense;
  o.s1 = s1_operator(s.bottom[1], s.top[2]).dense;
  return o;
}

BggIdentity verify_bgg_identity(int p, const SimplicialMesh& mesh) {
  const BggOperators o = bgg_operators(mesh, p);
  BggIdentity r;
  const Mat a = o.d1_top * o.s0;
  const Mat b = o.s1 * o.d0_bottom;
  r.residual = relative(a + b, std::max(max_abs(a), max_abs(b)));
  r.s0_rows = o.s0.rows();
  r.s0_cols = o.s0.cols();
  r.s0_rank = numerical_rank(o.s0);
  if (r.s0_rows == r.s0_cols && r.s0_rank == r.s0_rows) {
    const Mat inv = inverse(o.s0, "S0");
    r.s0_inverse_residual = max_abs(inv * o.s0 - Mat::Identity(r.s0_cols, r.s0_cols));
  } else {
    r.s0_inverse_residual = 1.0;
  }
  r.s1_rows = o.s1.rows();
  r.s1_rank = numerical_rank(o.s1);
  return r;
}

ExactnessReport xi_complex(const SimplicialMesh& mesh, int p, std::vector<int> expected_betti) {
  const BggOperators o = bgg_operators(mesh, p);
  const auto& s = o.spaces;
  std::vector<std::string> names;
  std::vector<long> dims;
  for (int k = 0; k < 3; ++k) {
    names.push_back(s.top[k].base.name + " x (" + s.bottom[k].base.name + ")^2");
    dims.push_back(s.top[k].dimension() + s.bottom[k].dimension());
  }
  return default_three("Xi p=" + std::to_string(p), names, dims, {o.a0().dense(), o.a1().dense()},
                       std::move(expected_betti));
}

ProjectionReport projection_check(const SimplicialMesh& mesh, int p, unsigned seed) {
  const BggOperators o = bgg_operators(mesh, p);
  const Mat s0inv = inverse(o.s0, "S0");
  const long nt0 = o.d0_top.cols(), nb0 = o.d0_bottom.cols();
  const long nt1 = o.d1_top.cols(), nb1 = o.d1_bottom.cols();
  Mat P0 = Mat::Zero(nt0 + nb0, nt0 + nb0);
  P0.topLeftCorner(nt0, nt0).setIdentity();
  P0.bottomLeftCorner(nb0, nt0) = s0inv * o.d0_top;
  Mat P1 = Mat::Zero(nt1 + nb1, nt1 + nb1);
  P1.bottomLeftCorner(nb1, nt1) = o.d0_bottom * s0inv;
  P1.bottomRightCorner(nb1, nb1).setIdentity();
  const Mat A0 = o.a0().dense();
  const Mat A1 = o.a1().dense();

  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ProjectionReport r;
  for (int t = 0; t < 5; ++t) {
    Vec x(nt0 + nb0), y(nt1 + nb1);
    for (long i = 0; i < x.size(); ++i) x(i) = u(gen);
    for (long i = 0; i < y.size(); ++i) y(i) = u(gen);
    const Vec lhs = A0 * (P0 * x);
    const Vec rhs = P1 * (A0 * x);
    r.a0_commutes = std::max(r.a0_commutes, relative(lhs - rhs, std::max(max_abs(lhs), 1.0)));
    const Vec l1 = A1 * (P1 * y);
    const Vec r1 = A1 * y;
    r.a1_commutes = std::max(r.a1_commutes, relative(l1 - r1, std::max(max_abs(r1), 1.0)));
  }
  r.pi0_idempotent = relative(P0 * P0 - P0, max_abs(P0));
  r.pi1_idempotent = relative(P1 * P1 - P1, max_abs(P1));
  r.pass = r.a0_commutes < 1e-9 && r.a1_commutes < 1e-9 && r.pi0_idempotent < 1e-9 && r.pi1_idempotent < 1e-9;
  return r;
}

ExactnessReport weak_symmetry_complex(const SimplicialMesh& mesh, int p, std::vector<int> expected_betti) {
  const BggOperators o = bgg_operators(mesh, p);
  const Mat airy = o.d0_bottom * inverse(o.s0, "S0") * o.d0_top;
  Mat second(o.s1.rows() + o.d1_bottom.rows(), o.s1.cols());
  second << -o.s1, o.d1_bottom;
  const auto& s = o.spaces;
  return default_three("weak symmetry p=" + std::to_string(p),
                       {s.top[0].base.name, "(" + s.bottom[1].base.name + ")^2", "Xi^2"},
                       {s.top[0].dimension(), s.bottom[1].dimension(), s.top[2].dimension() + s.bottom[2].dimension()},
                       {airy, second}, std::move(expected_betti));
}

AiryCheck airy_check(const SimplicialMesh& mesh, int p) {
  if (p < 2) throw std::invalid_argument("airy_check: p must be >= 2");
  const BggOperators o = bgg_operators(mesh, p);
  const auto& top0 = o.spaces.top[0].base;
  const auto& bot1 = o.spaces.bottom[1].base;
  // u = x^4 - 2 x^2 y^2 + 3 x y^3 + y^2
  auto hessian = [](const Vec& x) {
    Mat h(2, 2);
    h(0, 0) = 12 * x(0) * x(0) - 4 * x(1) * x(1);
    h(1, 1) = -4 * x(0) * x(0) + 18 * x(0) * x(1) + 2;
    h(0, 1) = h(1, 0) = -8 * x(0) * x(1) + 9 * x(1) * x(1);
    return h;
  };
  std::vector<Vec> cellwise;
  for (const auto& T : top0.cells) {
    Poly X(3), Y(3);
    for (int i = 0; i < 3; ++i) {
      X += Poly::lambda(3, i) * T.vertex(i)(0);
      Y += Poly::lambda(3, i) * T.vertex(i)(1);
    }
    const Poly u = X * X * X * X - 2.0 * (X * X * Y * Y) + 3.0 * (X * Y * Y * Y) + Y * Y;
    cellwise.push_back(coefficients(FormPolynomial::scalar(2, 0, homogenize(u, p + 3)), p + 3));
  }
  const Vec x = interpolate(top0, cellwise);
  const Vec y = o.d0_bottom * inverse(o.s0, "S0") * (o.d0_top * x);
  const long nb = bot1.dimension;
  AiryCheck r;
  double scale = 0.0;
  double err = 0.0;
  for (std::size_t c = 0; c < bot1.cells.size(); ++c) {
    const auto& T = bot1.cells[c];
    Vec w[2];
    for (int i = 0; i < 2; ++i) {
      Vec g(bot1.l2g[c].size());
      for (std::size_t j = 0; j < bot1.l2g[c].size(); ++j) g(j) = y(i * nb + bot1.l2g[c][j]);
      w[i] = bot1.basis[c] * g;
    }
    const Mat pts = sample_points(2, 10, 77u + static_cast<unsigned>(c));
    for (long t = 0; t < pts.rows(); ++t) {
      const Vec b = pts.row(t).transpose();
      const Mat h = hessian(T.point(b));
      Mat exact(2, 2);
      exact << -h(1, 1), h(0, 1), h(0, 1), -h(0, 0);
      Mat M(2, 2);
      for (int i = 0; i < 2; ++i) {
        const Vec v = from_coefficients(2, 1, bot1.degree, w[i]).eval(b);
        M(i, 0) = -v(1);
        M(i, 1) = v(0);
      }
      scale = std::max(scale, max_abs(exact));
      err = std::max(err, max_abs(M - exact));
    }
  }
  r.formula_residual = scale > 0.0 ? err / scale : err;
  r.symmetry_residual = relative(o.s1 * y, max_abs(y));
  r.pass = r.formula_residual < 1e-9 && r.symmetry_residual < 1e-9;
  return r;
}

// ---------------------------------------------------------------- Hu-Zhang stress element

Mat stress_dof_matrix(const Simplex& t, int p, std::vector<std::string>* kinds) {
  if (t.dim() != 2) throw std::invalid_argument("stress_dof_matrix: triangles only");
  if (p < 2) throw std::invalid_argument("stress_dof_matrix: p must be >= 2");
  const auto& mons = multi_indices(3, p);
  const long nm = static_cast<long>(mons.size());
  const std::vector<int> all{0, 1, 2};
  std::vector<Vec> rows;
  std::vector<std::string> kind;
  auto push = [&](Vec r, const char* k) {
    rows.push_back(std::move(r));
    kind.emplace_back(k);
  };
  // vertex values M(v)
  for (int v = 0; v < 3; ++v)
    for (int ij = 0; ij < 4; ++ij) {
      Vec r = Vec::Zero(4 * nm);
      for (long a = 0; a < nm; ++a)
        if (mons[a][v] == p) r(ij * nm + a) = 1.0;
      push(std::move(r), "vertex");
    }
  // edge normal traces against P_{p-2}(e)^2
  for (const auto& e : local_subsimplices(2, 1)) {
    const Frame fr = edge_frame(t.vertex(e[0]), t.vertex(e[1]));
    const Vec& nu = fr.normals[0];
    const double len = (t.vertex(e[1]) - t.vertex(e[0])).norm();
    for (int s = 0; s <= p - 2; ++s) {
      MultiIndex m(3);
      m[e[0]] = s;
      m[e[1]] = p - 2 - s;
      const Poly q = Poly::monomial(m);
      for (int i = 0; i < 2; ++i) {
        Vec r = Vec::Zero(4 * nm);
        for (int j = 0; j < 2; ++j)
          for (long a = 0; a < nm; ++a) r((2 * i + j) * nm + a) = nu(j) * integrate_product_on(e, len, mons[a], q);
        push(std::move(r), "edge");
      }
    }
  }
  // skew part: int (M21 - M12) q, q in P_p vanishing at the vertices
  for (const auto& m : mons) {
    if (std::max({m[0], m[1], m[2]}) == p) continue;
    const Poly q = Poly::monomial(m);
    Vec r = Vec::Zero(4 * nm);
    for (long a = 0; a < nm; ++a) {
      const double v = integrate_product_on(all, t.volume(), mons[a], q);
      r(2 * nm + a) = v;
      r(1 * nm + a) = -v;
    }
    push(std::move(r), "skew");
  }
  // symmetric bubbles: tau in P_p(S), tau nu = 0 on the boundary; layout (t11, t12, t22)
  std::vector<Vec> cons;
  for (const auto& e : local_subsimplices(2, 1)) {
    const Vec nu = edge_frame(t.vertex(e[0]), t.vertex(e[1])).normals[0];
    for (const auto& x : lattice_points(2, e, p)) {
      for (int i = 0; i < 2; ++i) {
        Vec r = Vec::Zero(3 * nm);
        for (int j = 0; j < 2; ++j) {
          const int sym = i + j;  // (0,0)->0, (0,1)/(1,0)->1, (1,1)->2
          for (long a = 0; a < nm; ++a) {
            double v = 1.0;
            for (int l = 0; l < 3; ++l)
              for (int k = 0; k < mons[a][l]; ++k) v *= x(l);
            r(sym * nm + a) += nu(j) * v;
          }
        }
        cons.push_back(std::move(r));
      }
    }
  }
  Mat C(static_cast<long>(cons.size()), 3 * nm);
  for (std::size_t i = 0; i < cons.size(); ++i) C.row(i) = cons[i].transpose();
  const Mat theta = null_space(C);
  for (long b = 0; b < theta.cols(); ++b) {
    Poly th[3];
    for (int s = 0; s < 3; ++s) {
      th[s] = Poly(3);
      for (long a = 0; a < nm; ++a)
        if (theta(s * nm + a, b) != 0.0) th[s].add(mons[a], theta(s * nm + a, b));
    }
    Vec r = Vec::Zero(4 * nm);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (long a = 0; a < nm; ++a) r((2 * i + j) * nm + a) = integrate_product_on(all, t.volume(), mons[a], th[i + j]);
    push(std::move(r), "bubble");
  }
  Mat D(static_cast<long>(rows.size()), 4 * nm);
  for (std::size_t i = 0; i < rows.size(); ++i) D.row(i) = rows[i].transpose();
  if (kinds) *kinds = kind;
  return D;
}

HuZhangStressElement huzhang_stress(int p) {
  return huzhang_stress(p, Simplex({(Vec(2) << 0.1, -0.2).finished(), (Vec(2) << 1.3, 0.25).finished(),
                                    (Vec(2) << 0.35, 0.9).finished()}));
}

HuZhangStressElement huzhang_stress(int p, const Simplex& t) {
  if (p < 3) throw std::invalid_argument("huzhang_stress: p must be >= 3");
  HuZhangStressElement h;
  h.p = p;
  std::vector<std::string> kinds;
  Mat D = stress_dof_matrix(t, p, &kinds);
  for (const auto& k : kinds) {
    if (k == "vertex") ++h.vertex_dofs;
    if (k == "edge") ++h.edge_dofs;
    if (k == "skew") ++h.skew_dofs;
    if (k == "bubble") ++h.bubble_dofs;
  }
  h.total = static_cast<long>(kinds.size());
  const long nm = dim_full(2, p, 0);
  h.shape_dim = 4 * nm;
  h.trimmed_dim = dim_trimmed(2, p - 1, 1);
  const long pp = p;
  h.count_identity = 2 * h.skew_dofs == pp * pp + 3 * pp - 4 && 2 * h.bubble_dofs == 3 * pp * pp - 3 * pp &&
                     h.skew_dofs + h.bubble_dofs == 2 * h.trimmed_dim;
  for (long i = 0; i < D.rows(); ++i) {
    const double s = D.row(i).cwiseAbs().maxCoeff();
    if (s > 0.0) D.row(i) /= s;
  }
  h.rank = numerical_rank(D);
  h.unisolvent = D.rows() == D.cols() && h.rank == D.cols();

  // symmetric-valued P_p: M12 = M21
  Mat sym = Mat::Zero(4 * nm, 3 * nm);
  for (long a = 0; a < nm; ++a) {
    sym(a, a) = 1.0;
    sym(nm + a, nm + a) = 1.0;
    sym(2 * nm + a, nm + a) = 1.0;
    sym(3 * nm + a, 2 * nm + a) = 1.0;
  }
  std::vector<long> keep;
  std::vector<long> skew;
  for (long i = 0; i < D.rows(); ++i) {
    if (kinds[i] == "skew") {
      skew.push_back(i);
      continue;
    }
    if (kinds[i] == "vertex" && i % 4 == 2) continue;  // M21 duplicates M12
    keep.push_back(i);
  }
  const Mat DS = D * sym;
  Mat R(static_cast<long>(keep.size()), 3 * nm);
  for (std::size_t i = 0; i < keep.size(); ++i) R.row(i) = DS.row(keep[i]);
  Mat K(static_cast<long>(skew.size()), 3 * nm);
  for (std::size_t i = 0; i < skew.size(); ++i) K.row(i) = DS.row(skew[i]);
  h.symmetric_rows = R.rows();
  h.symmetric_dim = 3 * nm;
  h.symmetric_rank = numerical_rank(R);
  h.symmetric_unisolvent = R.rows() == R.cols() && h.symmetric_rank == R.cols();
  h.skew_of_symmetric = max_abs(K);
  return h;
}

StressComplexReport huzhang_complex(const SimplicialMesh& mesh, int p, std::vector<int> expected_betti) {
  const BggOperators o = bgg_operators(mesh, p);
  const auto& fn = o.spaces.top[2].base;
  const auto& st = o.spaces.bottom[1].base;
  const Mat s0inv = inverse(o.s0, "S0");
  const Mat airy = o.d0_bottom * s0inv * o.d0_top;
  const Mat N = null_space(o.s1);
  StressComplexReport r;
  r.sigma_dim = N.cols();
  r.xi2_bottom_dim = o.d1_bottom.rows();
  const Mat airy_sigma = N.transpose() * airy;
  const Mat div_sigma = o.d1_bottom * N;
  r.exactness = default_three("Hu-Zhang p=" + std::to_string(p),
                              {o.spaces.top[0].base.name, "Sigma_h", "(" + o.spaces.bottom[2].base.name + ")^2"},
                              {o.spaces.top[0].dimension(), r.sigma_dim, o.spaces.bottom[2].dimension()},
                              {airy_sigma, div_sigma}, std::move(expected_betti));
  r.exactness.containment.push_back(relative(airy - N * airy_sigma, max_abs(airy)));

  // i_h: vertex skew values and interior skew moments of K, every other DoF zero
  const int q = st.degree;
  const long nm = dim_full(2, q, 0);
  const long nst = st.dimension;
  const Mat Kb = broken_basis(fn);
  Mat IH = Mat::Zero(2 * nst, fn.dimension);
  double conform = 0.0;
  double conform_scale = 0.0;
  std::vector<Mat> per_cell(st.cells.size());
  for (std::size_t c = 0; c < st.cells.size(); ++c) {
    std::vector<std::string> kinds;
    const Mat D = stress_dof_matrix(st.cells[c], q, &kinds);
    const Mat Dinv = inverse(D, "stress DoF matrix");
    Mat M = Mat::Zero(4 * nm, fn.dimension);  // the skew field (K/2) chi
    M.middleRows(1 * nm, nm) = -0.5 * Kb.middleRows(c * nm, nm);
    M.middleRows(2 * nm, nm) = 0.5 * Kb.middleRows(c * nm, nm);
    Mat rhs = D * M;
    for (long i = 0; i < rhs.rows(); ++i)
      if (kinds[i] != "vertex" && kinds[i] != "skew") rhs.row(i).setZero();
    const Mat Ml = Dinv * rhs;
    // rows of M are the proxies of w^1, w^2: w^i = (M_i2, -M_i1)
    Mat W = Mat::Zero(4 * nm, fn.dimension);
    W.middleRows(0, nm) = Ml.middleRows(1 * nm, nm);
    W.middleRows(nm, nm) = -Ml.middleRows(0, nm);
    W.middleRows(2 * nm, nm) = Ml.middleRows(3 * nm, nm);
    W.middleRows(3 * nm, nm) = -Ml.middleRows(2 * nm, nm);
    per_cell[c] = W;
  }
  for (long j = 0; j < fn.dimension; ++j) {
    for (int i = 0; i < 2; ++i) {
      std::vector<Vec> cw;
      for (std::size_t c = 0; c < st.cells.size(); ++c) cw.push_back(per_cell[c].col(j).segment(i * 2 * nm, 2 * nm));
      const Vec g = interpolate(st, cw);
      IH.col(j).segment(i * nst, nst) = g;
      for (std::size_t c = 0; c < st.cells.size(); ++c) {
        Vec loc(st.l2g[c].size());
        for (std::size_t l = 0; l < st.l2g[c].size(); ++l) loc(l) = g(st.l2g[c][l]);
        conform = std::max(conform, max_abs(st.basis[c] * loc - cw[c]));
        conform_scale = std::max(conform_scale, max_abs(cw[c]));
      }
    }
  }
  r.ih_conformity = conform_scale > 0.0 ? conform / conform_scale : conform;
  r.ih_right_inverse = max_abs(o.s1 * IH - Mat::Identity(fn.dimension, fn.dimension));
  Mat pih(o.d1_bottom.rows(), fn.dimension + o.d1_bottom.rows());
  pih << o.d1_bottom * IH, Mat::Identity(o.d1_bottom.rows(), o.d1_bottom.rows());
  r.pi_h_rank = numerical_rank(pih);
  r.pass = r.exactness.pass() && r.exactness.containment[0] < 1e-8 && r.ih_conformity < 1e-8 &&
           r.ih_right_inverse < 1e-8 && r.pi_h_rank == r.xi2_bottom_dim;
  return r;
}

}  // namespace derham
