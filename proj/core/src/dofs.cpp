#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include "derham/elements.hpp"
#include "derham/mesh.hpp"

namespace derham {

const std::vector<std::vector<int>>& local_subsimplices(int n, int d) {
  return form_indices(n + 1, d + 1);
}

std::vector<Vec> lattice_points(int n, const std::vector<int>& sub, int q) {
  std::vector<Vec> out;
  const int d = static_cast<int>(sub.size()) - 1;
  if (q <= 0) {
    Vec b = Vec::Zero(n + 1);
    for (int i : sub) b(i) = 1.0 / (d + 1);
    out.push_back(b);
    return out;
  }
  for (const auto& a : multi_indices(d + 1, q)) {
    Vec b = Vec::Zero(n + 1);
    for (int i = 0; i <= d; ++i) b(sub[i]) = static_cast<double>(a[i]) / q;
    out.push_back(b);
  }
  return out;
}

// ---------------------------------------------------------------- application

namespace {

Poly derive(const Simplex& cell, Poly f, const std::vector<Vec>& dirs) {
  for (const auto& v : dirs) f = directional_derivative(cell, f, v);
  return f;
}

}  // namespace

double apply_dof(const DoFFunctional& dof, const Simplex& cell, const FormPolynomial& f) {
  double s = 0.0;
  for (const auto& t : dof.points) s += t.weight * derive(cell, f.comp[t.comp], t.dirs).eval(t.bary);
  for (const auto& t : dof.moments)
    s += integrate_on(dof.sub, dof.sub_volume, derive(cell, f.comp[t.comp], t.dirs) * t.weight);
  return s;
}

Mat dof_monomial_matrix(const std::vector<DoFFunctional>& dofs, const Simplex& cell, int q, int k) {
  const int n = cell.dim();
  const auto& mons = multi_indices(n + 1, q);
  const long nm = static_cast<long>(mons.size());
  const long nc = binomial(n, k);
  Mat m = Mat::Zero(static_cast<long>(dofs.size()), nm * nc);
  // derivatives of monomials along a direction list are shared between DoFs
  std::map<std::vector<std::vector<double>>, std::vector<Poly>> derived;
  auto derivatives = [&](const std::vector<Vec>& dirs) -> const std::vector<Poly>& {
    std::vector<std::vector<double>> key;
    for (const auto& v : dirs) key.emplace_back(v.data(), v.data() + v.size());
    auto it = derived.find(key);
    if (it != derived.end()) return it->second;
    std::vector<Poly> ps;
    ps.reserve(nm);
    for (const auto& a : mons) ps.push_back(derive(cell, Poly::monomial(a), dirs));
    return derived.emplace(std::move(key), std::move(ps)).first->second;
  };
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    const auto& dof = dofs[i];
    for (const auto& t : dof.points) {
      if (t.dirs.empty()) {
        for (long a = 0; a < nm; ++a) {
          double v = t.weight;
          for (int j = 0; j <= n; ++j)
            for (int e = 0; e < mons[a][j]; ++e) v *= t.bary(j);
          m(i, t.comp * nm + a) += v;
        }
      } else {
        const auto& ps = derivatives(t.dirs);
        for (long a = 0; a < nm; ++a) m(i, t.comp * nm + a) += t.weight * ps[a].eval(t.bary);
      }
    }
    for (const auto& t : dof.moments) {
      if (t.dirs.empty()) {
        for (long a = 0; a < nm; ++a)
          m(i, t.comp * nm + a) += integrate_product_on(dof.sub, dof.sub_volume, mons[a], t.weight);
      } else {
        const auto& ps = derivatives(t.dirs);
        for (long a = 0; a < nm; ++a)
          m(i, t.comp * nm + a) += integrate_on(dof.sub, dof.sub_volume, ps[a] * t.weight);
      }
    }
  }
  return m;
}

// ---------------------------------------------------------------- construction

namespace {

struct ProxyMap {
  int comp;
  double sign;
};

int proxy_size(int n, int k) { return (k == 0 || k == n) ? 1 : n; }

// 2D 1-forms use the rotated proxy B = (-w2, w1); 3D 2-forms u = (w23, -w13, w12).
ProxyMap proxy_map(int n, int k, int c) {
  if (k == 0 || k == n) return {0, 1.0};
  if (n == 2) return c == 0 ? ProxyMap{1, -1.0} : ProxyMap{0, 1.0};
  if (k == 1) return {c, 1.0};
  static const ProxyMap t[3] = {{2, 1.0}, {1, -1.0}, {0, 1.0}};
  return t[c];
}

// Coordinate vector of a test form: 1-forms by components, 3D 2-forms by their proxy.
std::vector<Poly> test_vector(const FormPolynomial& q) {
  if (q.k == 0 || q.k == q.n) return {q.comp[0]};
  if (q.k == 1) return q.comp;
  return {q.comp[2], q.comp[1] * -1.0, q.comp[0]};
}

Vec unit(int n, int i) {
  Vec e = Vec::Zero(n);
  e(i) = 1.0;
  return e;
}

Vec cross(const Vec& a, const Vec& b) {
  Vec c(3);
  c << a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0);
  return c;
}

// Sorted axis tuples of the given order: (0), (1) ... or (0,0), (0,1) ...
std::vector<std::vector<int>> axis_tuples(int n, int order) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int from) -> void {
    if (static_cast<int>(cur.size()) == order) {
      out.push_back(cur);
      return;
    }
    for (int i = from; i < n; ++i) {
      cur.push_back(i);
      self(self, i);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

std::string axes_label(const std::vector<int>& axes) {
  if (axes.empty()) return "";
  std::string s = "d";
  for (int a : axes) s += std::to_string(a + 1);
  return s + " ";
}

class Builder {
 public:
  Builder(const Simplex& cell, int k) : T_(cell), n_(cell.dim()), k_(k) {}

  int n() const { return n_; }
  const Simplex& cell() const { return T_; }
  Vec x(int i) const { return T_.vertex(i); }

  // proxy component c at vertex v, differentiated along Cartesian axes
  void point(int v, int c, const std::vector<int>& axes) {
    DoFFunctional d = base({v});
    d.kind = axes.empty() ? DofKind::point_value : DofKind::point_derivative;
    d.deriv_order = static_cast<int>(axes.size());
    const ProxyMap pm = proxy_map(n_, k_, c);
    PointTerm t{vertex_bary(v), pm.comp, pm.sign, {}};
    for (int a : axes) t.dirs.push_back(unit(n_, a));
    d.points.push_back(std::move(t));
    d.label = axes_label(axes) + comp_label(c);
    dofs_.push_back(std::move(d));
  }

  // value of the proxy paired with the vector a at vertex v
  void point_dot(int v, const Vec& a, const std::string& label) {
    DoFFunctional d = base({v});
    for (int c = 0; c < proxy_size(n_, k_); ++c) {
      if (a(c) == 0.0) continue;
      const ProxyMap pm = proxy_map(n_, k_, c);
      d.points.push_back(PointTerm{vertex_bary(v), pm.comp, pm.sign * a(c), {}});
    }
    d.label = label;
    dofs_.push_back(std::move(d));
  }

  // integral over sub of sum_c D(u_c) w_c, with u the proxy and D the directional derivatives
  void moment(const std::vector<int>& sub, const std::vector<Poly>& w, int test_degree,
              const std::string& label, const std::vector<Vec>& dirs = {}) {
    DoFFunctional d = base(sub);
    d.kind = moment_kind(sub);
    d.test_degree = test_degree;
    d.deriv_order = static_cast<int>(dirs.size());
    for (int c = 0; c < static_cast<int>(w.size()); ++c) {
      if (w[c].is_zero()) continue;
      const ProxyMap pm = proxy_map(n_, k_, c);
      d.moments.push_back(MomentTerm{pm.comp, w[c] * pm.sign, dirs});
    }
    d.label = label;
    dofs_.push_back(std::move(d));
  }

  // integral over sub of tr(u ^ q); a vertex is a point evaluation
  void wedge(const std::vector<int>& sub, const FormPolynomial& q, int test_degree) {
    const int dsub = static_cast<int>(sub.size()) - 1;
    if (dsub == 0) {
      point(sub[0], 0, {});
      return;
    }
    Mat V(n_, dsub);
    for (int i = 1; i <= dsub; ++i) V.col(i - 1) = x(sub[i]) - x(sub[0]);
    const double norm = std::sqrt((V.transpose() * V).determinant());
    DoFFunctional d = base(sub);
    d.kind = moment_kind(sub);
    d.test_degree = test_degree;
    const auto& Is = form_indices(n_, k_);
    const auto& Js = form_indices(n_, dsub - k_);
    for (std::size_t ci = 0; ci < Is.size(); ++ci) {
      Poly w(n_ + 1);
      for (std::size_t cj = 0; cj < Js.size(); ++cj) {
        if (q.comp[cj].is_zero()) continue;
        const int s = shuffle_sign(Is[ci], Js[cj]);
        if (s == 0) continue;
        std::vector<int> K = Is[ci];
        K.insert(K.end(), Js[cj].begin(), Js[cj].end());
        std::sort(K.begin(), K.end());
        Mat m(dsub, dsub);
        for (int r = 0; r < dsub; ++r) m.row(r) = V.row(K[r]);
        const double c = s * m.determinant() / norm;
        if (std::abs(c) > 1e-14) w += q.comp[cj] * c;
      }
      if (!w.is_zero()) d.moments.push_back(MomentTerm{static_cast<int>(ci), w, {}});
    }
    d.label = "tr u ^ q";
    dofs_.push_back(std::move(d));
  }

  std::vector<DoFFunctional> finish() {
    std::map<std::vector<int>, int> count;
    for (auto& d : dofs_) d.local_index = count[d.sub]++;
    return std::move(dofs_);
  }

 private:
  DoFFunctional base(const std::vector<int>& sub) const {
    DoFFunctional d;
    d.sub = sub;
    d.continuity = static_cast<int>(sub.size()) == n_ + 1 ? Continuity::per_cell : Continuity::single_valued;
    d.sub_volume = sub.size() == 1 ? 1.0 : T_.sub(sub).volume();
    return d;
  }
  Vec vertex_bary(int v) const { return unit(n_ + 1, v); }
  DofKind moment_kind(const std::vector<int>& sub) const {
    const int d = static_cast<int>(sub.size()) - 1;
    if (d == n_) return DofKind::interior_moment;
    return d == 1 ? DofKind::edge_moment : DofKind::face_moment;
  }
  std::string comp_label(int c) const {
    if (proxy_size(n_, k_) == 1) return "u";
    return "u" + std::to_string(c + 1);
  }

  const Simplex& T_;
  int n_;
  int k_;
  std::vector<DoFFunctional> dofs_;
};

// Scalar monomials of degree m on a subsimplex, optionally without the vertex powers.
std::vector<Poly> scalar_tests(const Simplex& T, const std::vector<int>& sub, int m, bool vanish_at_vertices = false) {
  std::vector<Poly> out;
  if (m < 0) return out;
  for (const auto& f : full_basis_on(T, sub, m, 0)) {
    const Poly& q = f.comp[0];
    if (vanish_at_vertices && m >= 1) {
      const MultiIndex& a = q.terms().begin()->first;
      if (std::count(a.e.begin(), a.e.begin() + a.len, m) == 1) continue;
    }
    out.push_back(q);
  }
  return out;
}

std::vector<Poly> times(const Vec& a, const Poly& q) {
  std::vector<Poly> w;
  for (int i = 0; i < a.size(); ++i) w.push_back(q * a(i));
  return w;
}

std::vector<Poly> only(int n, int c, const Poly& q) {
  std::vector<Poly> w(n, Poly(q.nvars()));
  w[c] = q;
  return w;
}

// nu x omega for a 3D vector nu and coordinate vector omega
std::vector<Poly> cross_weights(const Vec& nu, const std::vector<Poly>& w) {
  return {w[2] * nu(1) - w[1] * nu(2), w[0] * nu(2) - w[2] * nu(0), w[1] * nu(0) - w[0] * nu(1)};
}

void vertex_jets(Builder& b, int v, int ncomp, int order) {
  for (int c = 0; c < ncomp; ++c)
    for (int o = 0; o <= order; ++o)
      for (const auto& ax : axis_tuples(b.n(), o)) b.point(v, c, ax);
}

void interior_scalar(Builder& b, const std::vector<int>& sub, int m, const std::string& label,
                     bool vanish = false) {
  for (const auto& q : scalar_tests(b.cell(), sub, m, vanish)) b.moment(sub, {q}, m, label);
}

void componentwise(Builder& b, const std::vector<int>& sub, int m, int ncomp) {
  for (int c = 0; c < ncomp; ++c)
    for (const auto& q : scalar_tests(b.cell(), sub, m))
      b.moment(sub, only(ncomp, c, q), m, "int u" + std::to_string(c + 1) + " q");
}

void proxy_pairing(Builder& b, const std::vector<int>& sub, const std::vector<FormPolynomial>& tests,
                   int m, const std::string& label) {
  for (const auto& q : tests) b.moment(sub, test_vector(q), m, label);
}

void r0_dofs(Builder& b, int p, int k) {
  const int n = b.n();
  for (int d = k; d <= n; ++d)
    for (const auto& s : local_subsimplices(n, d)) {
      // P^-_r Lambda^0 is P_r
      const auto tests = d == k ? full_basis_on(b.cell(), s, p, 0) : whitney_basis(b.cell(), s, p + k - d, d - k);
      for (const auto& q : tests) b.wedge(s, q, p + k - d);
    }
}

void trimmed_dofs(Builder& b, int p, int k) {
  const int n = b.n();
  for (int d = k; d <= n; ++d)
    for (const auto& s : local_subsimplices(n, d)) {
      if (d == 0) {
        b.point(s[0], 0, {});
        continue;
      }
      for (const auto& q : full_basis_on(b.cell(), s, p + k - d - 1, d - k)) b.wedge(s, q, p + k - d - 1);
    }
}

void r1_dofs(Builder& b, int p, int k) {
  const int n = b.n();
  const auto& T = b.cell();
  const std::vector<int> all = local_subsimplices(n, n)[0];
  if (k == n) {
    if (n == 1) {
      for (int v = 0; v < 2; ++v) b.point(v, 0, {});
      interior_scalar(b, all, p - 2, "int u q");
    } else {
      interior_scalar(b, all, p, "int u q");
    }
    return;
  }
  if (k == 0) {
    for (int v = 0; v <= n; ++v) vertex_jets(b, v, 1, 1);
    if (n >= 2)
      for (const auto& e : local_subsimplices(n, 1)) interior_scalar(b, e, p - 4, "int u q");
    if (n == 3)
      for (const auto& f : local_subsimplices(n, 2)) interior_scalar(b, f, p - 3, "int u q");
    interior_scalar(b, all, n == 3 ? p - 4 : (n == 2 ? p - 3 : p - 4), "int u q");
    return;
  }
  if (k == 1)
    for (int v = 0; v <= n; ++v) vertex_jets(b, v, n, 0);
  if (n == 2) {
    for (const auto& e : local_subsimplices(n, 1)) {
      const Vec nu = edge_frame(T.vertex(e[0]), T.vertex(e[1])).normals[0];
      for (const auto& q : scalar_tests(T, e, p - 2)) b.moment(e, times(nu, q), p - 2, "int (u.nu) q");
    }
    proxy_pairing(b, all, whitney_basis(T, all, p - 1, 1), p - 1, "int u.q");
    return;
  }
  if (k == 1) {
    for (const auto& e : local_subsimplices(n, 1)) {
      const Vec tau = edge_frame(T.vertex(e[0]), T.vertex(e[1])).tangent;
      for (const auto& q : scalar_tests(T, e, p - 2)) b.moment(e, times(tau, q), p - 2, "int (u.tau) q");
    }
    for (const auto& f : local_subsimplices(n, 2)) {
      const Vec nu = face_frame(T.vertex(f[0]), T.vertex(f[1]), T.vertex(f[2])).normal;
      for (const auto& w : whitney_basis(T, f, p - 1, 1))
        b.moment(f, cross_weights(nu, test_vector(w)), p - 1, "int (u x nu).w");
    }
    proxy_pairing(b, all, whitney_basis(T, all, p - 2, 2), p - 2, "int u.q");
    return;
  }
  // n = 3, k = 2: BDM
  for (const auto& f : local_subsimplices(n, 2)) {
    const Vec nu = face_frame(T.vertex(f[0]), T.vertex(f[1]), T.vertex(f[2])).normal;
    for (const auto& q : scalar_tests(T, f, p)) b.moment(f, times(nu, q), p, "int (u.nu) q", {});
  }
  proxy_pairing(b, all, whitney_basis(T, all, p - 1, 1), p - 1, "int u.q");
}

void vector_hermite_dofs(Builder& b, int p) {
  const int n = b.n();
  const auto& T = b.cell();
  const std::vector<int> all = local_subsimplices(n, n)[0];
  for (int v = 0; v <= n; ++v) vertex_jets(b, v, n, 1);
  for (const auto& e : local_subsimplices(n, 1)) componentwise(b, e, p - 4, n);
  if (n == 3)
    for (const auto& f : local_subsimplices(n, 2)) {
      const Frame fr = face_frame(T.vertex(f[0]), T.vertex(f[1]), T.vertex(f[2]));
      const std::vector<std::pair<Vec, std::string>> dirs = {
          {fr.tangents[0], "int (u.t1) q"}, {fr.tangents[1], "int (u.t2) q"}, {fr.normal, "int (u.nu) q"}};
      for (const auto& [a, label] : dirs)
        for (const auto& q : scalar_tests(T, f, p - 3)) b.moment(f, times(a, q), p - 3, label);
    }
  componentwise(b, all, n == 3 ? p - 4 : p - 3, n);
}

void vector_lagrange_dofs(Builder& b, int p) {
  const int n = b.n();
  for (int v = 0; v <= n; ++v) vertex_jets(b, v, n, 0);
  for (int d = 1; d <= n; ++d)
    for (const auto& s : local_subsimplices(n, d)) componentwise(b, s, p - d - 1, n);
}

void r2_dofs(Builder& b, int p, int k) {
  const int n = b.n();
  const auto& T = b.cell();
  const std::vector<int> all = local_subsimplices(n, n)[0];
  if (n == 1) {
    const int order = k == 0 ? 2 : 1;
    for (int v = 0; v < 2; ++v) vertex_jets(b, v, 1, order);
    interior_scalar(b, all, k == 0 ? p - 6 : p - 4, "int u q");
    return;
  }
  if (k == 0) {
    for (int v = 0; v <= n; ++v) vertex_jets(b, v, 1, 2);
    for (const auto& e : local_subsimplices(n, 1)) {
      const Frame fr = edge_frame(T.vertex(e[0]), T.vertex(e[1]));
      for (std::size_t i = 0; i < fr.normals.size(); ++i)
        for (const auto& q : scalar_tests(T, e, p - 5))
          b.moment(e, {q}, p - 5, "int (du.nu" + std::to_string(i + 1) + ") q", {fr.normals[i]});
      interior_scalar(b, e, p - 6, "int u q");
    }
    if (n == 3)
      for (const auto& f : local_subsimplices(n, 2)) interior_scalar(b, f, p - 6, "int u q");
    interior_scalar(b, all, n == 3 ? p - 4 : p - 6, "int u q");
    return;
  }
  if (k == 1 && n == 2) {
    vector_hermite_dofs(b, p);
    return;
  }
  if (k == n) {
    if (n == 2) {
      for (int v = 0; v <= n; ++v) b.point(v, 0, {});
      interior_scalar(b, all, p, "int u q", true);
    } else {
      interior_scalar(b, all, p, "int u q");
    }
    return;
  }
  if (k == 1) {  // n = 3
    for (int v = 0; v <= n; ++v) vertex_jets(b, v, 3, 1);
    for (const auto& e : local_subsimplices(n, 1)) componentwise(b, e, p - 4, 3);
    for (const auto& f : local_subsimplices(n, 2)) {
      const Frame fr = face_frame(T.vertex(f[0]), T.vertex(f[1]), T.vertex(f[2]));
      for (int i = 0; i < 2; ++i) {
        const Vec a = cross(fr.normal, fr.tangents[i]);
        for (const auto& q : scalar_tests(T, f, p - 3))
          b.moment(f, times(a, q), p - 3, "int (u x nu).t" + std::to_string(i + 1) + " q");
      }
    }
    proxy_pairing(b, all, whitney_basis(T, all, p - 2, 2), p - 2, "int u.q");
    return;
  }
  // n = 3, k = 2
  for (int v = 0; v <= n; ++v) vertex_jets(b, v, 3, 0);
  for (const auto& f : local_subsimplices(n, 2)) {
    const Vec nu = face_frame(T.vertex(f[0]), T.vertex(f[1]), T.vertex(f[2])).normal;
    for (const auto& q : scalar_tests(T, f, p, true)) b.moment(f, times(nu, q), p, "int (u.nu) q");
  }
  proxy_pairing(b, all, whitney_basis(T, all, p - 1, 1), p - 1, "int u.q");
}

void hz_dofs(Builder& b, int p) {
  const int n = b.n();
  const auto& T = b.cell();
  const std::vector<int> all = local_subsimplices(n, n)[0];
  for (int v = 0; v <= n; ++v) vertex_jets(b, v, 3, 0);
  for (const auto& e : local_subsimplices(n, 1)) {
    const Frame fr = edge_frame(T.vertex(e[0]), T.vertex(e[1]));
    for (int i = 0; i < 2; ++i)
      for (const auto& q : scalar_tests(T, e, p - 2))
        b.moment(e, times(fr.normals[i], q), p - 2, "int (u.nu" + std::to_string(i + 1) + ") q");
  }
  for (const auto& f : local_subsimplices(n, 2)) {
    const Vec nu = face_frame(T.vertex(f[0]), T.vertex(f[1]), T.vertex(f[2])).normal;
    for (const auto& q : scalar_tests(T, f, p - 3)) b.moment(f, times(nu, q), p - 3, "int (u.nu) q");
  }
  proxy_pairing(b, all, whitney_basis(T, all, p - 1, 1), p - 1, "int u.q");
}

}  // namespace

std::vector<DoFFunctional> build_dofs(const ElementKey& key, const Simplex& cell) {
  Builder b(cell, key.k);
  switch (key.family) {
    case Family::r0: r0_dofs(b, key.p, key.k); break;
    case Family::trimmed: trimmed_dofs(b, key.p, key.k); break;
    case Family::r1: r1_dofs(b, key.p, key.k); break;
    case Family::r2: r2_dofs(b, key.p, key.k); break;
    case Family::hz: hz_dofs(b, key.p); break;
    case Family::vector_hermite: vector_hermite_dofs(b, key.p); break;
    case Family::vector_lagrange: vector_lagrange_dofs(b, key.p); break;
  }
  return b.finish();
}

}  // namespace derham
