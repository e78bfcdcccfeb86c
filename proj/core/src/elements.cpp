#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <Eigen/LU>

#include "derham/elements.hpp"

namespace derham {

std::string family_name(Family f) {
  switch (f) {
    case Family::r0: return "r0";
    case Family::r1: return "r1";
    case Family::r2: return "r2";
    case Family::hz: return "hz";
    case Family::trimmed: return "trimmed";
    case Family::vector_hermite: return "vector_hermite";
    case Family::vector_lagrange: return "vector_lagrange";
  }
  return "?";
}

namespace {

std::string classical_name(const ElementKey& key) {
  const int n = key.n;
  const int k = key.k;
  switch (key.family) {
    case Family::r0:
      if (k == 0) return "Lagrange";
      if (k == n) return "DG";
      if (k == n - 1) return "BDM";
      return "Nedelec II";
    case Family::trimmed:
      if (k == 0) return "Lagrange";
      if (k == n) return "DG";
      if (k == n - 1) return "Raviart-Thomas";
      return "Nedelec I";
    case Family::r1:
      if (k == 0) return "Hermite";
      if (k == n) return n == 1 ? "Lagrange" : "DG";
      if (n == 2) return "Stenberg";
      return k == 1 ? "C0-vertex H(curl)" : "BDM";
    case Family::r2:
      if (k == 0) return n == 2 ? "Argyris" : (n == 3 ? "Zhang C1" : "quintic Hermite");
      if (n == 1) return "cubic Hermite";
      if (k == n) return n == 2 ? "Falk-Neilan" : "DG";
      if (n == 2) return "vector Hermite";
      return k == 1 ? "C1-vertex H(curl)" : "Stenberg";
    case Family::hz: return "Hu-Zhang H(div)";
    case Family::vector_hermite: return "vector Hermite";
    case Family::vector_lagrange: return "vector Lagrange";
  }
  return "?";
}

long nonneg(long x) { return std::max(0L, x); }

}  // namespace

std::string describe(const ElementKey& key) {
  std::ostringstream os;
  os << classical_name(key) << " (" << family_name(key.family) << ", p=" << key.p << ", k=" << key.k
     << ", n=" << key.n << ")";
  return os.str();
}

int min_degree(Family f, int k, int n) {
  switch (f) {
    case Family::r0: return k < n ? 1 : 0;
    case Family::trimmed: return 1;
    case Family::r1: {
      static const int t1[] = {3, 2};
      static const int t2[] = {3, 2, 1};
      static const int t3[] = {3, 2, 1, 0};
      return n == 1 ? t1[k] : (n == 2 ? t2[k] : t3[k]);
    }
    case Family::r2: {
      static const int t1[] = {5, 4};
      static const int t2[] = {5, 3, 2};
      static const int t3[] = {5, 4, 2, 2};
      return n == 1 ? t1[k] : (n == 2 ? t2[k] : t3[k]);
    }
    case Family::hz: return 2;
    case Family::vector_hermite: return 3;
    case Family::vector_lagrange: return 1;
  }
  return 0;
}

std::string validate(const ElementKey& key) {
  const int n = key.n;
  const int k = key.k;
  if (n < 1 || n > 3) return "dimension must be 1, 2 or 3 (got " + std::to_string(n) + ")";
  if (k < 0 || k > n) return "form degree k must lie in 0.." + std::to_string(n);
  switch (key.family) {
    case Family::hz:
      if (n != 3 || k != 2) return "hz is defined for n=3, k=2 only";
      break;
    case Family::vector_hermite:
    case Family::vector_lagrange:
      if (k != 1 || n < 2) return family_name(key.family) + " is defined for k=1, n=2 or 3";
      break;
    default: break;
  }
  const int m = min_degree(key.family, k, n);
  if (key.p < m)
    return family_name(key.family) + " with n=" + std::to_string(n) + ", k=" + std::to_string(k) +
           " needs p >= " + std::to_string(m) + " (got " + std::to_string(key.p) + ")";
  return "";
}

Mat ElementDef::shape_coefficients() const {
  if (shape.kind == SpaceKind::full) return Mat::Identity(dim_full(key.n, key.p, key.k), dim_full(key.n, key.p, key.k));
  return coefficient_matrix(shape.basis, key.n, key.k, key.p);
}

ElementDef make_element(const ElementKey& key, const Simplex& cell) {
  if (std::string why = validate(key); !why.empty()) throw std::invalid_argument(why);
  if (cell.dim() != key.n) throw std::invalid_argument("make_element: simplex dimension mismatch");
  ElementDef e;
  e.key = key;
  e.name = describe(key);
  e.simplex = cell;
  e.shape = key.family == Family::trimmed ? trimmed_basis(cell, key.p, key.k) : full_basis(cell, key.p, key.k);
  e.dofs = build_dofs(key, cell);
  if (e.dofs.size() != e.shape.size())
    throw std::logic_error(e.name + ": " + std::to_string(e.dofs.size()) + " DoFs for a " +
                           std::to_string(e.shape.size()) + "-dimensional shape space");
  return e;
}

ElementDef element_def(const ElementKey& key) { return make_element(key, Simplex::reference(key.n)); }

ElementDef element_def(int r, int p, int k, int n) {
  if (r < 0 || r > 2) throw std::invalid_argument("smoothness r must be 0, 1 or 2");
  static const Family fam[] = {Family::r0, Family::r1, Family::r2};
  return element_def(ElementKey{fam[r], p, k, n});
}

Mat dof_matrix(const ElementDef& e) {
  return dof_monomial_matrix(e.dofs, e.simplex, e.key.p, e.key.k) * e.shape_coefficients();
}

Mat dof_matrix(const ElementDef& e, const Simplex& cell) { return dof_matrix(make_element(e.key, cell)); }

std::vector<long> dofs_per_subsimplex(const ElementKey& key) {
  const int n = key.n;
  const int k = key.k;
  const long p = key.p;
  auto C = [](long a, long b) { return a < 0 ? 0L : binomial(static_cast<int>(a), static_cast<int>(b)); };
  // per[d]: DoFs attached to one d-simplex
  std::vector<long> per(n + 1, 0);
  switch (key.family) {
    case Family::r0:
      for (int d = k; d <= n; ++d) per[d] = d == k ? dim_full(d, key.p, 0) : dim_trimmed(d, key.p + k - d, d - k);
      break;
    case Family::trimmed:
      for (int d = k; d <= n; ++d) per[d] = d == 0 ? 1 : dim_full(d, key.p + k - d - 1, d - k);
      break;
    case Family::r1:
      if (n == 1) per = k == 0 ? std::vector<long>{2, nonneg(p - 3)} : std::vector<long>{1, nonneg(p - 1)};
      if (n == 2) {
        if (k == 0) per = {3, nonneg(p - 3), C(p - 1, 2)};
        if (k == 1) per = {2, nonneg(p - 1), nonneg((p - 1) * (p + 1))};
        if (k == 2) per = {0, 0, C(p + 2, 2)};
      }
      if (n == 3) {
        if (k == 0) per = {4, nonneg(p - 3), C(p - 1, 2), C(p - 1, 3)};
        if (k == 1) per = {3, nonneg(p - 1), nonneg((p - 1) * (p + 1)), nonneg((p - 2) * (p - 1) * (p + 1) / 2)};
        if (k == 2) per = {0, 0, C(p + 2, 2), nonneg((p - 1) * (p + 1) * (p + 2) / 2)};
        if (k == 3) per = {0, 0, 0, C(p + 3, 3)};
      }
      break;
    case Family::r2:
      if (n == 1) per = k == 0 ? std::vector<long>{3, nonneg(p - 5)} : std::vector<long>{2, nonneg(p - 3)};
      if (n == 2) {
        if (k == 0) per = {6, nonneg(p - 4) + nonneg(p - 5), C(p - 4, 2)};
        if (k == 1) per = {6, 2 * nonneg(p - 3), 2 * C(p - 1, 2)};
        if (k == 2) per = {1, 0, C(p + 2, 2) - 3};
      }
      if (n == 3) {
        if (k == 0) per = {10, 2 * nonneg(p - 4) + nonneg(p - 5), C(p - 4, 2), C(p - 1, 3)};
        if (k == 1) per = {12, 3 * nonneg(p - 3), 2 * C(p - 1, 2), nonneg((p - 1) * (p - 2) * (p + 1) / 2)};
        if (k == 2) per = {3, 0, C(p + 2, 2) - 3, nonneg((p - 1) * (p + 1) * (p + 2) / 2)};
        if (k == 3) per = {0, 0, 0, C(p + 3, 3)};
      }
      break;
    case Family::hz:
      per = {3, 2 * nonneg(p - 1), C(p - 1, 2), nonneg((p - 1) * (p + 1) * (p + 2) / 2)};
      break;
    case Family::vector_hermite:
      if (n == 2) per = {6, 2 * nonneg(p - 3), 2 * C(p - 1, 2)};
      else per = {12, 3 * nonneg(p - 3), 3 * C(p - 1, 2), 3 * C(p - 1, 3)};
      break;
    case Family::vector_lagrange:
      for (int d = 0; d <= n; ++d) per[d] = n * C(p - 1, d);
      break;
  }
  return per;
}

long local_total_formula(const ElementKey& key) {
  const auto per = dofs_per_subsimplex(key);
  long total = 0;
  for (int d = 0; d <= key.n; ++d) total += binomial(key.n + 1, d + 1) * per[d];
  return total;
}

UnisolvenceReport unisolvence_check(const ElementDef& e, double tol) {
  UnisolvenceReport r;
  Mat m = dof_matrix(e);
  r.rows = static_cast<int>(m.rows());
  r.cols = static_cast<int>(m.cols());
  for (long i = 0; i < m.rows(); ++i) {
    const double s = m.row(i).cwiseAbs().maxCoeff();
    if (s > 0.0) m.row(i) /= s;
  }
  r.rank = numerical_rank(m, tol);
  r.sv_ratio = singular_ratio(m);
  r.shape_dim = static_cast<long>(e.shape.size());
  r.paper_total = local_total_formula(e.key);
  r.pass = r.rows == r.cols && r.rank == r.cols && r.paper_total == r.shape_dim;
  std::ostringstream os;
  os << "DoFs " << r.rows << ", formula " << r.paper_total << ", dim " << r.shape_dim << ", rank " << r.rank;
  r.identity = os.str();
  return r;
}

UnisolvenceReport unisolvence_check(const ElementDef& e, const Simplex& cell, double tol) {
  return unisolvence_check(make_element(e.key, cell), tol);
}

std::string dof_class(const DoFFunctional& d, int n) {
  static const char* names[] = {"vertex", "edge", "face", "interior"};
  const int dim = static_cast<int>(d.sub.size()) - 1;
  const std::string where = dim == n ? "interior" : names[dim];
  return where + ":" + d.label;
}

DualBasis dual_basis(const ElementDef& e) {
  DualBasis db;
  db.element = e;
  const Mat mono = dof_monomial_matrix(e.dofs, e.simplex, e.key.p, e.key.k);
  const Mat B = e.shape_coefficients();
  const Mat D = mono * B;
  Eigen::FullPivLU<Mat> lu(D);
  if (!lu.isInvertible()) throw std::runtime_error(e.name + ": DoF matrix is singular");
  db.coeffs = B * lu.inverse();
  db.kronecker_residual = (mono * db.coeffs - Mat::Identity(D.rows(), D.cols())).cwiseAbs().maxCoeff();
  for (long j = 0; j < db.coeffs.cols(); ++j) {
    db.basis.push_back(from_coefficients(e.key.n, e.key.k, e.key.p, db.coeffs.col(j)));
    db.classes.push_back(dof_class(e.dofs[j], e.key.n));
  }
  return db;
}

Mat derivative_matrix(const Simplex& cell, int q, int k) {
  const int n = cell.dim();
  const long cols = dim_full(n, q, k);
  const long rows = dim_full(n, q - 1, k + 1);
  Mat m = Mat::Zero(rows, cols);
  if (q < 1 || k >= n) return m;
  const auto fb = full_basis(cell, q, k);
  for (long j = 0; j < cols; ++j) m.col(j) = coefficients(exterior_derivative(cell, fb.basis[j]), q - 1);
  return m;
}

Mat elevation_matrix(int n, int k, int a, int b) {
  if (b < a) throw std::invalid_argument("elevation_matrix: target degree below source");
  const auto& mons = multi_indices(n + 1, a);
  const long nm = static_cast<long>(mons.size());
  const long nc = binomial(n, k);
  Mat m = Mat::Zero(dim_full(n, b, k), nm * nc);
  if (a == b) return Mat::Identity(m.rows(), m.cols());
  const long nb = static_cast<long>(multi_indices(n + 1, b).size());
  for (long j = 0; j < nm; ++j) {
    FormPolynomial f(n, 0);
    f.comp[0] = Poly::monomial(mons[j]);
    const Vec c = coefficients(f, b);
    for (long comp = 0; comp < nc; ++comp) m.block(comp * nb, comp * nm + j, nb, 1) = c;
  }
  return m;
}

}  // namespace derham
