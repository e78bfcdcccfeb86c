#include <algorithm>
#include <map>
#include <stdexcept>

#include "derham/elements.hpp"

namespace derham {

namespace {

// Cartesian monomials x^b of total degree <= m in n variables.
std::vector<std::vector<int>> cartesian_monomials(int n, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == n) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[pos] = e;
      self(self, pos + 1, left - e);
    }
    cur[pos] = 0;
  };
  if (m >= 0) rec(rec, 0, m);
  return out;
}

struct JetSpace {
  std::vector<std::vector<int>> mons;
  std::vector<std::vector<int>> forms;
  long dim() const { return static_cast<long>(mons.size() * forms.size()); }
};

JetSpace jet_space(int n, int m, int k) {
  JetSpace s;
  if (k > n || m < 0) return s;
  s.mons = cartesian_monomials(n, m);
  s.forms = form_indices(n, k);
  return s;
}

// d on J^m Lambda^k -> J^{m-1} Lambda^{k+1}: x^b dx^I -> sum_j b_j x^{b-e_j} dx^j ^ dx^I
Mat jet_derivative(int n, const JetSpace& src, const JetSpace& dst) {
  Mat d = Mat::Zero(dst.dim(), src.dim());
  std::map<std::vector<int>, long> mon_index;
  for (std::size_t i = 0; i < dst.mons.size(); ++i) mon_index[dst.mons[i]] = static_cast<long>(i);
  const long nfd = static_cast<long>(dst.forms.size());
  const long nfs = static_cast<long>(src.forms.size());
  for (std::size_t a = 0; a < src.mons.size(); ++a)
    for (long fi = 0; fi < nfs; ++fi) {
      const auto& I = src.forms[fi];
      for (int j = 0; j < n; ++j) {
        const int bj = src.mons[a][j];
        if (bj == 0 || std::find(I.begin(), I.end(), j) != I.end()) continue;
        std::vector<int> b = src.mons[a];
        b[j] -= 1;
        std::vector<int> J = I;
        J.insert(std::upper_bound(J.begin(), J.end(), j), j);
        const int before = static_cast<int>(std::count_if(I.begin(), I.end(), [j](int x) { return x < j; }));
        const long row = mon_index.at(b) * nfd + form_index(n, J);
        d(row, static_cast<long>(a) * nfs + fi) += (before % 2 ? -1.0 : 1.0) * bj;
      }
    }
  return d;
}

}  // namespace

JetReport jet_complex_ranks(int n, int r) {
  if (n < 1) throw std::invalid_argument("jet_complex_ranks: n must be >= 1");
  if (r < 1 || r > 2) throw std::invalid_argument("jet_complex_ranks: r must be 1 or 2");
  JetReport rep;
  rep.n = n;
  rep.r = r;
  std::vector<JetSpace> spaces;
  for (int k = 0; k <= r; ++k) spaces.push_back(jet_space(n, r - k, k));
  for (const auto& s : spaces) rep.dims.push_back(s.dim());
  std::vector<Mat> ds;
  for (int k = 0; k < r; ++k) {
    ds.push_back(jet_derivative(n, spaces[k], spaces[k + 1]));
    rep.ranks.push_back(numerical_rank(ds.back()));
  }
  for (int k = 0; k + 1 < r; ++k)
    rep.composition.push_back(ds[k + 1].size() && ds[k].size() ? (ds[k + 1] * ds[k]).cwiseAbs().maxCoeff() : 0.0);
  rep.kernel_is_constants = rep.dims[0] - rep.ranks[0] == 1;
  bool exact = rep.kernel_is_constants;
  for (int k = 1; k < r; ++k) exact = exact && rep.dims[k] - rep.ranks[k] == rep.ranks[k - 1];
  exact = exact && rep.ranks[r - 1] == rep.dims[r];
  for (double c : rep.composition) exact = exact && c == 0.0;
  rep.exact = exact;
  const long nn = n;
  if (r == 1)
    rep.expected = {1, nn + 1, nn, 0};
  else
    rep.expected = {1, (nn * nn + 3 * nn + 2) / 2, nn * (nn + 1), nn * (nn - 1) / 2, 0};
  return rep;
}

BubbleReport subsimplex_bubble_dims(int n, int r, int p) {
  if (r < 1 || r > 2) throw std::invalid_argument("subsimplex_bubble_dims: r must be 1 or 2");
  BubbleReport rep;
  rep.n = n;
  rep.r = r;
  rep.p = p;
  const Simplex T = Simplex::reference(n);
  std::vector<ElementDef> elems;
  std::vector<Mat> mono;
  std::vector<Mat> dual;
  for (int k = 0; k <= n; ++k) {
    elems.push_back(element_def(r, p - k, k, n));
    mono.push_back(dof_monomial_matrix(elems[k].dofs, T, p - k, k));
    dual.push_back(dual_basis(elems[k]).coeffs);
  }
  bool pass = true;
  for (int d = 1; d <= n; ++d) {
    std::vector<int> S(d + 1);
    for (int i = 0; i <= d; ++i) S[i] = i;
    BubbleChain ch;
    ch.d = d;
    std::vector<std::vector<int>> on(d + 1);
    for (int k = 0; k <= d; ++k) {
      for (std::size_t i = 0; i < elems[k].dofs.size(); ++i)
        if (elems[k].dofs[i].sub == S) on[k].push_back(static_cast<int>(i));
      ch.dims.push_back(static_cast<long>(on[k].size()));
    }
    std::vector<Mat> M;
    for (int k = 0; k < d; ++k) {
      const Mat full = mono[k + 1] * derivative_matrix(T, p - k, k) * dual[k];
      Mat m(on[k + 1].size(), on[k].size());
      for (std::size_t i = 0; i < on[k + 1].size(); ++i)
        for (std::size_t j = 0; j < on[k].size(); ++j) m(i, j) = full(on[k + 1][i], on[k][j]);
      ch.ranks.push_back(m.size() ? numerical_rank(m) : 0);
      M.push_back(std::move(m));
    }
    for (int k = 0; k + 1 < d; ++k)
      if (M[k + 1].size() && M[k].size())
        ch.composition = std::max(ch.composition, (M[k + 1] * M[k]).cwiseAbs().maxCoeff());
    long alt = 0;
    for (int k = 0; k <= d; ++k) alt += (k % 2 ? -1 : 1) * (ch.dims[k] - (k == d ? 1 : 0));
    ch.alternating_sum = alt;
    bool exact = ch.ranks[0] == ch.dims[0];
    for (int k = 1; k < d; ++k) exact = exact && ch.ranks[k - 1] + ch.ranks[k] == ch.dims[k];
    exact = exact && ch.ranks[d - 1] == ch.dims[d] - 1 && alt == 0 && ch.composition < 1e-8;
    ch.exact = exact;
    pass = pass && exact;
    rep.chains.push_back(std::move(ch));
  }
  rep.pass = pass;
  return rep;
}

}  // namespace derham
