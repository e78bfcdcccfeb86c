#include "derham/complex.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace derham {

namespace {

constexpr double kDdTol = 1e-10;

Family family_of(int r) {
  switch (r) {
    case 0: return Family::r0;
    case 1: return Family::r1;
    case 2: return Family::r2;
    default: throw std::invalid_argument("family row: r must be 0, 1 or 2");
  }
}

}  // namespace

FamilyRow family_row(int r, int n, int p) {
  FamilyRow row;
  row.n = n;
  row.name = "r=" + std::to_string(r) + " n=" + std::to_string(n) + " p=" + std::to_string(p);
  const Family f = family_of(r);
  for (int k = 0; k <= n; ++k) row.slots.push_back(ElementKey{f, p - k, k, n});
  return row;
}

FamilyRow mixed_row(int p) {
  FamilyRow row;
  row.n = 3;
  row.name = "mixed p=" + std::to_string(p);
  row.slots = {ElementKey{Family::r1, p, 0, 3}, ElementKey{Family::r1, p - 1, 1, 3},
               ElementKey{Family::trimmed, p - 1, 2, 3}, ElementKey{Family::r0, p - 2, 3, 3}};
  return row;
}

std::string validate_row(const FamilyRow& row) {
  if (row.slots.size() != static_cast<std::size_t>(row.n + 1)) return row.name + ": needs n+1 slots";
  for (std::size_t k = 0; k < row.slots.size(); ++k) {
    const auto& s = row.slots[k];
    if (s.k != static_cast<int>(k) || s.n != row.n) return row.name + ": slot " + std::to_string(k) + " has the wrong form degree";
    if (std::string why = validate(s); !why.empty()) return row.name + ": " + why;
  }
  return {};
}

AssembledRow assemble_row(const SimplicialMesh& mesh, const FamilyRow& row) {
  if (std::string why = validate_row(row); !why.empty()) throw std::invalid_argument(why);
  AssembledRow out;
  out.row = row;
  for (const auto& key : row.slots) out.spaces.push_back(assemble_space(mesh, key));
  for (int k = 0; k < row.n; ++k) out.ops.push_back(assemble_d(out.spaces[k], out.spaces[k + 1]));
  return out;
}

double normalized_product(const Mat& next, const Mat& prev) {
  if (next.size() == 0 || prev.size() == 0) return 0.0;
  Mat a = next;
  Mat b = prev;
  for (long i = 0; i < a.rows(); ++i) {
    const double s = a.row(i).cwiseAbs().maxCoeff();
    if (s > 0.0) a.row(i) /= s;
  }
  for (long j = 0; j < b.cols(); ++j) {
    const double s = b.col(j).cwiseAbs().maxCoeff();
    if (s > 0.0) b.col(j) /= s;
  }
  return (a * b).cwiseAbs().maxCoeff();
}

ExactnessReport exactness_report(const std::string& name, const std::vector<std::string>& spaces,
                                 const std::vector<long>& dims, const std::vector<Mat>& ops,
                                 std::vector<int> expected_betti, double tol) {
  const int n = static_cast<int>(dims.size()) - 1;
  if (static_cast<int>(ops.size()) != n) throw std::invalid_argument("exactness_report: need one operator per stage");
  ExactnessReport r;
  r.name = name;
  r.spaces = spaces;
  r.dims = dims;
  if (expected_betti.empty()) {
    expected_betti.assign(n + 1, 0);
    expected_betti[0] = 1;
  }
  r.expected_betti = expected_betti;
  for (const auto& D : ops) r.ranks.push_back(D.size() ? numerical_rank(D, tol) : 0);
  for (int k = 0; k <= n; ++k) r.nullities.push_back(dims[k] - (k < n ? r.ranks[k] : 0));
  for (int k = 0; k + 1 < n; ++k) r.dd_residuals.push_back(normalized_product(ops[k + 1], ops[k]));
  for (int k = 0; k <= n; ++k) r.betti.push_back(static_cast<int>(r.nullities[k] - (k > 0 ? r.ranks[k - 1] : 0)));
  for (int k = 0; k <= n; ++k) r.alternating_sum += (k % 2 ? -1 : 1) * (dims[k] - expected_betti[k]);
  r.complex_ok = std::all_of(r.dd_residuals.begin(), r.dd_residuals.end(), [](double x) { return x < kDdTol; });
  r.exact = r.betti == r.expected_betti;
  return r;
}

ExactnessReport verify_exactness(const SimplicialMesh& mesh, const FamilyRow& row, std::vector<int> expected_betti,
                                 double tol) {
  const AssembledRow a = assemble_row(mesh, row);
  std::vector<std::string> names;
  std::vector<long> dims;
  std::vector<Mat> ops;
  for (const auto& s : a.spaces) {
    names.push_back(s.name);
    dims.push_back(s.dimension);
  }
  for (const auto& o : a.ops) ops.push_back(o.dense);
  ExactnessReport r = exactness_report(row.name, names, dims, ops, std::move(expected_betti), tol);
  for (const auto& o : a.ops) r.containment.push_back(o.containment_residual);
  return r;
}

ExactnessReport mixed_sequence(const SimplicialMesh& mesh, int p, std::vector<int> expected_betti) {
  if (mesh.dim != 3) throw std::invalid_argument("mixed_sequence: tetrahedral meshes only");
  if (p < 3) throw std::invalid_argument("mixed_sequence: p must be >= 3");
  return verify_exactness(mesh, mixed_row(p), std::move(expected_betti));
}

SurjectivityReport check_surjective(const SimplicialMesh& mesh, const ElementKey& src, const ElementKey& dst) {
  const GlobalSpace a = assemble_space(mesh, src);
  const GlobalSpace b = assemble_space(mesh, dst);
  const OperatorMatrix D = assemble_d(a, b);
  SurjectivityReport r;
  r.name = D.name;
  r.target_dim = b.dimension;
  r.rank = D.dense.size() ? numerical_rank(D.dense) : 0;
  r.onto = r.rank == r.target_dim;
  return r;
}

// ---------------------------------------------------------------- dimensions

SimplexCounts simplex_counts(const SimplicialMesh& mesh) {
  SimplexCounts c;
  c.V = mesh.count(0);
  if (mesh.dim >= 1) c.E = mesh.count(1);
  if (mesh.dim >= 2) c.F = mesh.count(2);
  if (mesh.dim >= 3) c.T = mesh.count(3);
  return c;
}

long dim_formula(const ElementKey& key, const SimplexCounts& c) {
  if (std::string why = validate(key); !why.empty()) throw std::invalid_argument(why);
  const auto per = dofs_per_subsimplex(key);
  long total = 0;
  for (int d = 0; d <= key.n; ++d) total += per[d] * c.get(d);
  return total;
}

std::string dim_formula_text(const ElementKey& key) {
  static const char* sym[] = {"V", "E", "F", "T"};
  const auto per = dofs_per_subsimplex(key);
  std::ostringstream os;
  bool first = true;
  for (int d = 0; d <= key.n; ++d) {
    if (per[d] == 0) continue;
    // the top simplex of a 1D/2D mesh is its cell count
    const char* s = d == key.n && key.n < 3 ? (key.n == 1 ? "E" : "F") : sym[d];
    os << (first ? "" : " + ") << per[d] << s;
    first = false;
  }
  return first ? "0" : os.str();
}

SavingsReport dof_savings(int p, const SimplicialMesh& mesh) {
  if (mesh.dim != 3) throw std::invalid_argument("dof_savings: tetrahedral meshes only");
  SavingsReport r;
  r.p = p;
  r.counts = simplex_counts(mesh);
  const ElementKey full{Family::r0, p, 1, 3};
  const ElementKey smooth{Family::r2, p, 1, 3};
  r.dim_full = assemble_space(mesh, full, AssemblyMode::count_only).dimension;
  r.dim_smooth = assemble_space(mesh, smooth, AssemblyMode::count_only).dimension;
  r.formula_full = dim_formula(full, r.counts);
  r.formula_smooth = dim_formula(smooth, r.counts);
  const double q = p;
  r.printed_full_per_T = 0.5 * q * q * q + 7.0 * q * q + 6.5 * q;
  r.printed_smooth_per_T = 0.5 * q * q * q + q * q - 3.0 * q - 5.5;
  r.printed_difference_per_T = 6.0 * q * q + 9.5 * q + 5.5;
  const SimplexCounts ratio{1, 7, 12, 6};
  r.asymptotic_full_per_T = static_cast<double>(dim_formula(full, ratio)) / 6.0;
  r.asymptotic_smooth_per_T = static_cast<double>(dim_formula(smooth, ratio)) / 6.0;
  r.edge_vertex_ratio = static_cast<double>(r.counts.E) / static_cast<double>(r.counts.V);
  return r;
}

// ---------------------------------------------------------------- decompositions

namespace {

// Per-cell bubbles placed in broken coordinates.
Mat broken_bubbles(const SimplicialMesh& mesh, int p, bool sigma_c, long& count) {
  const int n = mesh.dim;
  const int ncells = mesh.count(n);
  const long nm = dim_full(n, p, 1);
  std::vector<Mat> blocks;
  count = 0;
  for (int c = 0; c < ncells; ++c) {
    const Simplex T = mesh.cell_simplex(c);
    const SpaceBasis b = sigma_c ? sigma_c_span(T, p) : trace_free_basis(T, p, 1);
    blocks.push_back(b.basis.empty() ? Mat(nm, 0) : coefficient_matrix(b.basis, n, 1, p));
    count += static_cast<long>(b.basis.size());
  }
  Mat out = Mat::Zero(nm * ncells, count);
  long col = 0;
  for (int c = 0; c < ncells; ++c) {
    out.block(c * nm, col, nm, blocks[c].cols()) = blocks[c];
    col += blocks[c].cols();
  }
  return out;
}

Mat hcat(std::initializer_list<const Mat*> parts) {
  long rows = 0;
  long cols = 0;
  for (const Mat* m : parts) {
    rows = std::max(rows, m->rows());
    cols += m->cols();
  }
  Mat out(rows, cols);
  long c = 0;
  for (const Mat* m : parts) {
    out.middleCols(c, m->cols()) = *m;
    c += m->cols();
  }
  return out;
}

// Max tangential trace of a broken 1-form on every facet of every cell (lattice points).
double tangential_trace_max(const SimplicialMesh& mesh, int p, const Mat& broken) {
  const int n = mesh.dim;
  const long nm = dim_full(n, p, 1);
  double m = 0.0;
  for (int c = 0; c < mesh.count(n); ++c) {
    const Simplex T = mesh.cell_simplex(c);
    const auto& verts = mesh.cells[c];
    for (const auto& facet : local_subsimplices(n, n - 1)) {
      std::vector<int> g;
      for (int v : facet) g.push_back(verts[v]);
      std::vector<int> local(n);
      for (int i = 0; i < n; ++i) local[i] = i;
      for (const auto& lb : lattice_points(n - 1, local, p)) {
        Vec x = Vec::Zero(n);
        for (int i = 0; i < n; ++i) x += lb(i) * mesh.vertices[g[i]];
        const Mat f = constraint_functionals(mesh, T, 1, p, Constraint::trace, g, x);
        if (f.rows()) m = std::max(m, (f * broken.middleRows(c * nm, nm)).cwiseAbs().maxCoeff());
      }
    }
  }
  return m;
}

}  // namespace

DecompositionReport verify_decomposition(int n, int p, const SimplicialMesh& mesh) {
  if (mesh.dim != n) throw std::invalid_argument("verify_decomposition: mesh dimension mismatch");
  DecompositionReport r;
  if (n == 2) {
    // P_{1,p} Lambda^1 = vector Lagrange + sum of cellwise H(div) bubbles
    r.name = "P_{1," + std::to_string(p) + "}L1 = Lagrange^2 + bubbles";
    const ElementKey target{Family::r1, p, 1, 2};
    const GlobalSpace S = assemble_space(mesh, target);
    const GlobalSpace L = assemble_space(mesh, ElementKey{Family::vector_lagrange, p, 1, 2});
    const Mat St = broken_basis(S);
    const Mat Lb = broken_basis(L);
    const Mat Bb = broken_bubbles(mesh, p, false, r.bubble_dim);
    r.target_dim = S.dimension;
    r.lagrange_dim = L.dimension;
    r.rank_parts = numerical_rank(hcat({&Lb, &Bb}));
    r.rank_union = numerical_rank(hcat({&St, &Lb, &Bb}));
    r.continuity_residual = constraint_residual(L, continuity_spec(target));
    r.pass = r.rank_parts == r.target_dim && r.rank_union == r.target_dim && r.continuity_residual < 1e-8;
    return r;
  }
  if (n != 3) throw std::invalid_argument("verify_decomposition: n must be 2 or 3");
  // P_{2,p} Lambda^1 = vector Hermite + Sigma^c, with the split u = I^c u + (u - I^c u)
  r.name = "P_{2," + std::to_string(p) + "}L1 = Hermite^3 + Sigma^c";
  const ElementKey target{Family::r2, p, 1, 3};
  const GlobalSpace S = assemble_space(mesh, target);
  const GlobalSpace H = assemble_space(mesh, ElementKey{Family::vector_hermite, p, 1, 3});
  const Mat St = broken_basis(S);
  const Mat Hb = broken_basis(H);
  const Mat Bb = broken_bubbles(mesh, p, true, r.bubble_dim);
  r.target_dim = S.dimension;
  r.lagrange_dim = H.dimension;
  r.rank_parts = numerical_rank(hcat({&Hb, &Bb}));
  r.rank_union = numerical_rank(hcat({&St, &Hb, &Bb}));
  r.continuity_residual = constraint_residual(H, continuity_spec(target));

  // I^c keeps every Hermite DoF except face normal moments and interior moments.
  const long nm = dim_full(3, p, 1);
  const int ncells = mesh.count(3);
  std::vector<bool> keep(H.dimension);
  for (long g = 0; g < H.dimension; ++g) {
    const auto& d = H.dofs[g];
    keep[g] = d.dim < 2 || (d.dim == 2 && d.label.find("nu") == std::string::npos);
  }
  Mat diff(St.rows(), St.cols());
  for (long j = 0; j < St.cols(); ++j) {
    std::vector<Vec> cellwise;
    for (int c = 0; c < ncells; ++c) cellwise.push_back(St.col(j).segment(c * nm, nm));
    Vec v = interpolate(H, cellwise);
    for (long g = 0; g < H.dimension; ++g)
      if (!keep[g]) v(g) = 0.0;
    diff.col(j) = St.col(j) - Hb * v;
  }
  const double scale = St.cwiseAbs().maxCoeff();
  r.split_residual = tangential_trace_max(mesh, p, diff) / (scale > 0.0 ? scale : 1.0);
  r.pass = r.rank_parts == r.target_dim && r.rank_union == r.target_dim && r.continuity_residual < 1e-8 &&
           r.split_residual < 1e-8;
  return r;
}

}  // namespace derham
