#include <stdexcept>

#include "derham/elements.hpp"

namespace derham {

namespace {

double monomial_value(const MultiIndex& a, const Vec& bary) {
  double v = 1.0;
  for (int j = 0; j < a.len; ++j)
    for (int e = 0; e < a[j]; ++e) v *= bary(j);
  return v;
}

}  // namespace

SpaceBasis trace_free_basis(const Simplex& cell, int p, int k) {
  const int n = cell.dim();
  SpaceBasis out{cell, SpaceKind::bubble, k, p, {}};
  if (p < 0) return out;
  const auto& mons = multi_indices(n + 1, p);
  const long nm = static_cast<long>(mons.size());
  const auto& Is = form_indices(n, k);
  const long cols = nm * static_cast<long>(Is.size());
  std::vector<Vec> rows;
  if (k < n) {
    for (const auto& facet : local_subsimplices(n, n - 1)) {
      Mat V(n, n - 1);
      for (int i = 1; i < n; ++i) V.col(i - 1) = cell.vertex(facet[i]) - cell.vertex(facet[0]);
      for (const auto& x : lattice_points(n, facet, p))
        for (const auto& J : form_indices(n - 1, k)) {
          Vec row = Vec::Zero(cols);
          for (std::size_t ci = 0; ci < Is.size(); ++ci) {
            Mat m(k, k);
            for (int r = 0; r < k; ++r)
              for (int s = 0; s < k; ++s) m(r, s) = V(Is[ci][r], J[s]);
            const double det = k == 0 ? 1.0 : m.determinant();
            if (det == 0.0) continue;
            for (long a = 0; a < nm; ++a) row(ci * nm + a) = det * monomial_value(mons[a], x);
          }
          rows.push_back(std::move(row));
        }
    }
  }
  Mat A(static_cast<long>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) A.row(i) = rows[i].transpose();
  const Mat N = null_space(A);
  for (long j = 0; j < N.cols(); ++j) out.basis.push_back(from_coefficients(n, k, p, N.col(j)));
  return out;
}

SpaceBasis sigma_c_span(const Simplex& cell, int p) {
  if (cell.dim() != 3) throw std::invalid_argument("sigma_c_span: tetrahedra only");
  SpaceBasis out{cell, SpaceKind::bubble, 1, p, {}};
  if (p < 3) return out;
  std::vector<FormPolynomial> span;
  for (int i = 0; i < 4; ++i) {
    Vec nu = cell.gradients().row(i).transpose();
    nu /= nu.norm();
    MultiIndex tri(4);
    for (int j = 0; j < 4; ++j)
      if (j != i) tri[j] = 1;
    for (const auto& a : multi_indices(4, p - 3)) {
      const Poly q = Poly::monomial(a + tri);
      FormPolynomial f(3, 1);
      for (int c = 0; c < 3; ++c)
        if (nu(c) != 0.0) f.comp[c] = q * nu(c);
      span.push_back(std::move(f));
    }
  }
  const Mat coeffs = coefficient_matrix(span, 3, 1, p);
  for (int j : independent_columns(coeffs)) out.basis.push_back(span[j]);
  return out;
}

long sigma_c_dimension_formula(int p) {
  const long q = p;
  return (q * q * q - 2 * q * q - q + 2) / 2;
}

SpaceBasis bubble_basis(const ElementDef& e, const Simplex& cell) {
  if (e.key.n == 3 && e.key.k == 1) return sigma_c_span(cell, e.key.p);
  return trace_free_basis(cell, e.key.p, e.key.k);
}

}  // namespace derham
