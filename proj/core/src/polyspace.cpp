#include "derham/polyspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>

namespace derham {

MultiIndex::MultiIndex(std::initializer_list<int> v) : len(static_cast<int>(v.size())) {
  if (len > kMaxBary) throw std::invalid_argument("MultiIndex: too many exponents");
  int i = 0;
  for (int x : v) e[i++] = x;
}

int MultiIndex::degree() const {
  int d = 0;
  for (int i = 0; i < len; ++i) d += e[i];
  return d;
}

MultiIndex operator+(MultiIndex a, const MultiIndex& b) {
  for (int i = 0; i < a.len; ++i) a.e[i] += b.e[i];
  return a;
}

std::string to_string(const MultiIndex& a) {
  std::string s = "(";
  for (int i = 0; i < a.len; ++i) s += (i ? "," : "") + std::to_string(a[i]);
  return s + ")";
}

namespace {

void fill_indices(MultiIndex& cur, int pos, int left, std::vector<MultiIndex>& out) {
  if (pos == cur.len - 1) {
    cur[pos] = left;
    out.push_back(cur);
    return;
  }
  for (int v = 0; v <= left; ++v) {
    cur[pos] = v;
    fill_indices(cur, pos + 1, left - v, out);
  }
  cur[pos] = 0;
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

const std::vector<MultiIndex>& multi_indices(int len, int degree) {
  static std::map<std::pair<int, int>, std::vector<MultiIndex>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto key = std::make_pair(len, degree);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<MultiIndex> out;
  if (degree >= 0 && len > 0) {
    MultiIndex cur(len);
    fill_indices(cur, 0, degree, out);
    std::sort(out.begin(), out.end());
  }
  return cache.emplace(key, std::move(out)).first->second;
}

int multi_index_rank(const MultiIndex& a) {
  // Rank among exponents of the same length and degree in ascending lex order.
  int rank = 0;
  int left = a.degree();
  for (int i = 0; i < a.len - 1; ++i) {
    const int slots = a.len - i - 1;
    for (int v = 0; v < a[i]; ++v) rank += static_cast<int>(binomial(left - v + slots - 1, slots - 1));
    left -= a[i];
  }
  return rank;
}

// ---------------------------------------------------------------- Poly

Poly Poly::constant(int nvars, double c) {
  Poly p(nvars);
  p.add(MultiIndex(nvars), c);
  return p;
}

Poly Poly::monomial(const MultiIndex& a, double c) {
  Poly p(a.len);
  p.add(a, c);
  return p;
}

Poly Poly::lambda(int nvars, int i) {
  MultiIndex a(nvars);
  a[i] = 1;
  return monomial(a);
}

int Poly::degree() const {
  int d = -1;
  for (const auto& [a, c] : terms_) d = std::max(d, a.degree());
  return d;
}

double Poly::max_abs() const {
  double m = 0.0;
  for (const auto& [a, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void Poly::add(const MultiIndex& a, double c) {
  if (c == 0.0) return;
  if (nvars_ == 0) nvars_ = a.len;
  auto [it, fresh] = terms_.emplace(a, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

void Poly::prune(double abs_tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= abs_tol)
      it = terms_.erase(it);
    else
      ++it;
  }
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [a, c] : o.terms_) add(a, c);
  if (nvars_ == 0) nvars_ = o.nvars_;
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [a, c] : o.terms_) add(a, -c);
  if (nvars_ == 0) nvars_ = o.nvars_;
  return *this;
}

Poly& Poly::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [a, c] : terms_) c *= s;
  return *this;
}

double Poly::eval(const Vec& bary) const {
  double sum = 0.0;
  for (const auto& [a, c] : terms_) {
    double t = c;
    for (int i = 0; i < a.len; ++i)
      for (int r = 0; r < a[i]; ++r) t *= bary(i);
    sum += t;
  }
  return sum;
}

Poly Poly::partial(int i) const {
  Poly out(nvars_);
  for (const auto& [a, c] : terms_) {
    if (a[i] == 0) continue;
    MultiIndex b = a;
    b[i] -= 1;
    out.add(b, c * a[i]);
  }
  return out;
}

Poly operator+(Poly a, const Poly& b) { return a += b; }
Poly operator-(Poly a, const Poly& b) { return a -= b; }
Poly operator*(Poly a, double s) { return a *= s; }
Poly operator*(double s, Poly a) { return a *= s; }

Poly operator*(const Poly& a, const Poly& b) {
  Poly out(std::max(a.nvars(), b.nvars()));
  for (const auto& [x, c] : a.terms())
    for (const auto& [y, d] : b.terms()) out.add(x + y, c * d);
  return out;
}

Poly homogenize(const Poly& f, int degree) {
  const int nv = f.nvars();
  Poly out(nv);
  Poly sum(nv);
  for (int i = 0; i < nv; ++i) sum.add(Poly::lambda(nv, i).terms().begin()->first, 1.0);
  std::vector<Poly> powers{Poly::constant(nv, 1.0)};
  for (const auto& [a, c] : f.terms()) {
    const int gap = degree - a.degree();
    if (gap < 0) throw std::runtime_error("homogenize: term degree exceeds target degree");
    while (static_cast<int>(powers.size()) <= gap) powers.push_back(powers.back() * sum);
    out += Poly::monomial(a, c) * powers[gap];
  }
  return out;
}

// ---------------------------------------------------------------- form index helpers

const std::vector<std::vector<int>>& form_indices(int n, int k) {
  static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto key = std::make_pair(n, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<std::vector<int>> out;
  if (k >= 0 && k <= n) {
    std::vector<int> sel(n, 0);
    std::fill(sel.begin(), sel.begin() + k, 1);
    do {
      std::vector<int> s;
      for (int i = 0; i < n; ++i)
        if (sel[i]) s.push_back(i);
      out.push_back(s);
    } while (std::prev_permutation(sel.begin(), sel.end()));
    std::sort(out.begin(), out.end());
  }
  return cache.emplace(key, std::move(out)).first->second;
}

int form_index(int n, const std::vector<int>& s) {
  const auto& all = form_indices(n, static_cast<int>(s.size()));
  auto it = std::lower_bound(all.begin(), all.end(), s);
  if (it == all.end() || *it != s) throw std::invalid_argument("form_index: not a sorted subset");
  return static_cast<int>(it - all.begin());
}

int shuffle_sign(const std::vector<int>& a, const std::vector<int>& b) {
  int inversions = 0;
  for (int x : a)
    for (int y : b) {
      if (x == y) return 0;
      if (x > y) ++inversions;
    }
  return inversions % 2 ? -1 : 1;
}

// ---------------------------------------------------------------- FormPolynomial

FormPolynomial::FormPolynomial(int n_, int k_) : n(n_), k(k_) {
  if (k < 0 || k > n) throw std::invalid_argument("FormPolynomial: need 0 <= k <= n");
  comp.assign(binomial(n, k), Poly(n + 1));
}

FormPolynomial FormPolynomial::scalar(int n, int k, const Poly& f) {
  if (k != 0 && k != n) throw std::invalid_argument("FormPolynomial::scalar: k must be 0 or n");
  FormPolynomial w(n, k);
  w.comp[0] = f;
  return w;
}

int FormPolynomial::degree() const {
  int d = -1;
  for (const auto& c : comp) d = std::max(d, c.degree());
  return d;
}

bool FormPolynomial::is_zero() const {
  return std::all_of(comp.begin(), comp.end(), [](const Poly& p) { return p.is_zero(); });
}

double FormPolynomial::max_abs() const {
  double m = 0.0;
  for (const auto& c : comp) m = std::max(m, c.max_abs());
  return m;
}

Vec FormPolynomial::eval(const Vec& bary) const {
  Vec v(ncomp());
  for (int i = 0; i < ncomp(); ++i) v(i) = comp[i].eval(bary);
  return v;
}

FormPolynomial& FormPolynomial::operator+=(const FormPolynomial& o) {
  if (o.n != n || o.k != k) throw std::invalid_argument("FormPolynomial: shape mismatch in +");
  for (int i = 0; i < ncomp(); ++i) comp[i] += o.comp[i];
  return *this;
}

FormPolynomial& FormPolynomial::operator-=(const FormPolynomial& o) {
  if (o.n != n || o.k != k) throw std::invalid_argument("FormPolynomial: shape mismatch in -");
  for (int i = 0; i < ncomp(); ++i) comp[i] -= o.comp[i];
  return *this;
}

FormPolynomial& FormPolynomial::operator*=(double s) {
  for (auto& c : comp) c *= s;
  return *this;
}

FormPolynomial operator+(FormPolynomial a, const FormPolynomial& b) { return a += b; }
FormPolynomial operator-(FormPolynomial a, const FormPolynomial& b) { return a -= b; }
FormPolynomial operator*(FormPolynomial a, double s) { return a *= s; }

FormPolynomial operator*(const Poly& f, const FormPolynomial& w) {
  FormPolynomial out(w.n, w.k);
  for (int i = 0; i < w.ncomp(); ++i) out.comp[i] = f * w.comp[i];
  return out;
}

FormPolynomial wedge(const FormPolynomial& a, const FormPolynomial& b) {
  if (a.n != b.n) throw std::invalid_argument("wedge: ambient mismatch");
  FormPolynomial out(a.n, a.k + b.k);
  const auto& ia = form_indices(a.n, a.k);
  const auto& ib = form_indices(b.n, b.k);
  for (int i = 0; i < a.ncomp(); ++i) {
    if (a.comp[i].is_zero()) continue;
    for (int j = 0; j < b.ncomp(); ++j) {
      const int s = shuffle_sign(ia[i], ib[j]);
      if (s == 0 || b.comp[j].is_zero()) continue;
      std::vector<int> merged = ia[i];
      merged.insert(merged.end(), ib[j].begin(), ib[j].end());
      std::sort(merged.begin(), merged.end());
      out.comp[form_index(a.n, merged)] += (a.comp[i] * b.comp[j]) * static_cast<double>(s);
    }
  }
  return out;
}

// ---------------------------------------------------------------- Simplex

Simplex::Simplex(std::vector<Vec> points) : x_(std::move(points)) {
  if (x_.empty()) throw std::invalid_argument("Simplex: no points");
  const int d = dim();
  const int n = ambient();
  if (d > n) throw std::invalid_argument("Simplex: too many points for ambient dimension");
  Mat e = edge_matrix();
  grad_ = Mat::Zero(d + 1, n);
  if (d == 0) {
    volume_ = 1.0;  // counting measure on a point
    grad_.setZero();
    return;
  }
  Mat gram = e.transpose() * e;
  const double det = gram.determinant();
  volume_ = std::sqrt(std::max(det, 0.0)) / factorial(d);
  if (!(volume_ > 0.0)) throw std::invalid_argument("Simplex: degenerate");
  Mat pinv = gram.inverse() * e.transpose();  // d x n
  for (int i = 1; i <= d; ++i) grad_.row(i) = pinv.row(i - 1);
  grad_.row(0) = -pinv.colwise().sum();
}

Simplex Simplex::reference(int n) {
  std::vector<Vec> pts;
  pts.push_back(Vec::Zero(n));
  for (int i = 0; i < n; ++i) {
    Vec v = Vec::Zero(n);
    v(i) = 1.0;
    pts.push_back(v);
  }
  return Simplex(pts);
}

Mat Simplex::edge_matrix() const {
  Mat e(ambient(), dim());
  for (int i = 1; i <= dim(); ++i) e.col(i - 1) = x_[i] - x_[0];
  return e;
}

Vec Simplex::point(const Vec& bary) const {
  Vec p = Vec::Zero(ambient());
  for (int i = 0; i <= dim(); ++i) p += bary(i) * x_[i];
  return p;
}

Vec Simplex::barycentric(const Vec& x) const {
  Vec b(dim() + 1);
  Vec rel = x - x_[0];
  for (int i = 1; i <= dim(); ++i) b(i) = grad_.row(i).dot(rel);
  b(0) = 1.0 - b.tail(dim()).sum();
  return b;
}

Simplex Simplex::sub(const std::vector<int>& local) const {
  std::vector<Vec> pts;
  for (int i : local) pts.push_back(x_[i]);
  return Simplex(pts);
}

// ---------------------------------------------------------------- integration

double factorial(int n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(171, 1.0);
    for (int i = 1; i < 171; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  if (n < 0 || n > 170) throw std::out_of_range("factorial");
  return table[n];
}

namespace {

// alpha! d! / (|alpha| + d)!, computed as a product to keep rounding small.
double monomial_mean(const int* a, int count, int d) {
  double r = 1.0;
  int m = 0;
  for (int i = 0; i < count; ++i) {
    for (int j = 2; j <= a[i]; ++j) r *= j;
    m += a[i];
  }
  for (int j = d + 1; j <= m + d; ++j) r /= j;
  return r;
}

}  // namespace

double integrate_monomial(const Simplex& s, const MultiIndex& a) {
  if (a.len != s.dim() + 1) throw std::invalid_argument("integrate_monomial: length mismatch");
  return monomial_mean(a.e.data(), a.len, s.dim()) * s.volume();
}

double integrate_on(const std::vector<int>& sub, double sub_volume, const Poly& f) {
  const int d = static_cast<int>(sub.size()) - 1;
  double total = 0.0;
  for (const auto& [a, c] : f.terms()) {
    int restricted[kMaxBary];
    int on = 0;
    int off = 0;
    for (int i = 0; i < a.len; ++i) {
      if (std::find(sub.begin(), sub.end(), i) != sub.end())
        restricted[on++] = a[i];
      else
        off += a[i];
    }
    if (off > 0) continue;  // lambda_i vanishes on the subsimplex
    total += c * monomial_mean(restricted, on, d);
  }
  return total * sub_volume;
}

double integrate_product_on(const std::vector<int>& sub, double sub_volume, const MultiIndex& a,
                            const Poly& g) {
  const int d = static_cast<int>(sub.size()) - 1;
  bool inside[kMaxBary] = {false, false, false, false};
  for (int i : sub) inside[i] = true;
  for (int i = 0; i < a.len; ++i)
    if (!inside[i] && a[i] > 0) return 0.0;
  double total = 0.0;
  for (const auto& [b, c] : g.terms()) {
    int restricted[kMaxBary];
    int on = 0;
    bool vanishes = false;
    for (int i = 0; i < a.len; ++i) {
      if (inside[i])
        restricted[on++] = a[i] + b[i];
      else if (b[i] > 0)
        vanishes = true;
    }
    if (!vanishes) total += c * monomial_mean(restricted, on, d);
  }
  return total * sub_volume;
}

double integrate_on(const Simplex& cell, const std::vector<int>& sub, const Poly& f) {
  return integrate_on(sub, cell.sub(sub).volume(), f);
}

// ---------------------------------------------------------------- calculus

Poly directional_derivative(const Simplex& cell, const Poly& f, const Vec& v) {
  const Mat& g = cell.gradients();
  Poly out(f.nvars());
  for (int i = 0; i < g.rows(); ++i) {
    const double w = g.row(i).dot(v);
    if (w == 0.0) continue;
    out += f.partial(i) * w;
  }
  return out;
}

FormPolynomial exterior_derivative(const Simplex& cell, const FormPolynomial& f) {
  if (f.k >= f.n) throw std::invalid_argument("exterior_derivative: k must be < n");
  const int n = f.n;
  const Mat& g = cell.gradients();
  FormPolynomial out(n, f.k + 1);
  const auto& src = form_indices(n, f.k);
  double scale = 0.0;
  for (int ci = 0; ci < f.ncomp(); ++ci) {
    const auto& I = src[ci];
    for (const auto& [a, c] : f.comp[ci].terms()) {
      for (int i = 0; i < a.len; ++i) {
        if (a[i] == 0) continue;
        MultiIndex b = a;
        b[i] -= 1;
        for (int j = 0; j < n; ++j) {
          if (std::find(I.begin(), I.end(), j) != I.end()) continue;
          const double gij = g(i, j);
          if (gij == 0.0) continue;
          int before = 0;
          for (int x : I)
            if (x < j) ++before;
          std::vector<int> J = I;
          J.insert(std::upper_bound(J.begin(), J.end(), j), j);
          const double contrib = (before % 2 ? -1.0 : 1.0) * c * a[i] * gij;
          scale = std::max(scale, std::abs(contrib));
          out.comp[form_index(n, J)].add(b, contrib);
        }
      }
    }
  }
  for (auto& p : out.comp) p.prune(1e-12 * scale);
  return out;
}

FormPolynomial koszul(const Simplex& cell, const FormPolynomial& f) {
  if (f.k == 0) throw std::invalid_argument("koszul: k must be >= 1");
  const int n = f.n;
  std::vector<Poly> X(n, Poly(n + 1));
  for (int m = 0; m < n; ++m)
    for (int i = 1; i <= n; ++i) {
      const double w = cell.vertex(i)(m) - cell.vertex(0)(m);
      if (w != 0.0) X[m] += Poly::lambda(n + 1, i) * w;
    }
  FormPolynomial out(n, f.k - 1);
  const auto& src = form_indices(n, f.k);
  for (int ci = 0; ci < f.ncomp(); ++ci) {
    const auto& I = src[ci];
    for (int a = 0; a < f.k; ++a) {
      std::vector<int> rest = I;
      rest.erase(rest.begin() + a);
      out.comp[form_index(n, rest)] += (X[I[a]] * f.comp[ci]) * (a % 2 ? -1.0 : 1.0);
    }
  }
  return out;
}

FormPolynomial wedge_of_gradients(const Mat& grads, const std::vector<int>& rows, int nvars) {
  const int n = static_cast<int>(grads.cols());
  const int j = static_cast<int>(rows.size());
  FormPolynomial out(n, j);
  const auto& idx = form_indices(n, j);
  for (std::size_t c = 0; c < idx.size(); ++c) {
    Mat m(j, j);
    for (int r = 0; r < j; ++r)
      for (int s = 0; s < j; ++s) m(r, s) = grads(rows[r], idx[c][s]);
    const double det = j == 0 ? 1.0 : m.determinant();
    if (std::abs(det) > 1e-15) out.comp[c] = Poly::constant(nvars, det);
  }
  return out;
}

// ---------------------------------------------------------------- spaces

long dim_full(int n, int p, int k) {
  if (p < 0 || k < 0 || k > n) return 0;
  return binomial(p + n, n) * binomial(n, k);
}

long dim_trimmed(int n, int p, int k) {
  if (p < 1 || k < 0 || k > n) return 0;
  return binomial(k + p - 1, k) * binomial(n + p, n - k);
}

SpaceBasis full_basis(const Simplex& cell, int p, int k) {
  const int n = cell.dim();
  SpaceBasis s{cell, SpaceKind::full, k, p, {}};
  if (p < 0) return s;
  const int nc = static_cast<int>(binomial(n, k));
  for (int c = 0; c < nc; ++c)
    for (const auto& a : multi_indices(n + 1, p)) {
      FormPolynomial f(n, k);
      f.comp[c] = Poly::monomial(a);
      s.basis.push_back(std::move(f));
    }
  return s;
}

Vec coefficients(const FormPolynomial& f, int p) {
  const auto& mons = multi_indices(f.n + 1, p);
  const long nm = static_cast<long>(mons.size());
  Vec c = Vec::Zero(nm * f.ncomp());
  for (int i = 0; i < f.ncomp(); ++i) {
    const Poly& comp = f.comp[i];
    const bool homogeneous = std::all_of(comp.terms().begin(), comp.terms().end(),
                                         [p](const auto& t) { return t.first.degree() == p; });
    const Poly h = homogeneous ? comp : homogenize(comp, p);
    for (const auto& [a, v] : h.terms()) c(i * nm + multi_index_rank(a)) += v;
  }
  return c;
}

FormPolynomial from_coefficients(int n, int k, int p, const Vec& c) {
  FormPolynomial f(n, k);
  const auto& mons = multi_indices(n + 1, p);
  const long nm = static_cast<long>(mons.size());
  if (c.size() != nm * f.ncomp()) throw std::invalid_argument("from_coefficients: size mismatch");
  for (int i = 0; i < f.ncomp(); ++i)
    for (long m = 0; m < nm; ++m)
      if (c(i * nm + m) != 0.0) f.comp[i].add(mons[m], c(i * nm + m));
  return f;
}

Mat coefficient_matrix(const std::vector<FormPolynomial>& fs, int n, int k, int p) {
  Mat m(dim_full(n, p, k), static_cast<long>(fs.size()));
  for (std::size_t j = 0; j < fs.size(); ++j) m.col(j) = coefficients(fs[j], p);
  return m;
}

SpaceBasis trimmed_basis(const Simplex& cell, int p, int k) {
  if (p < 1) throw std::invalid_argument("trimmed_basis: p must be >= 1");
  const int n = cell.dim();
  std::vector<FormPolynomial> span = full_basis(cell, p - 1, k).basis;
  if (k < n)
    for (const auto& f : full_basis(cell, p - 1, k + 1).basis) span.push_back(koszul(cell, f));
  Mat coeffs = coefficient_matrix(span, n, k, p);
  std::vector<int> keep = independent_columns(coeffs);
  SpaceBasis s{cell, SpaceKind::trimmed, k, p, {}};
  for (int j : keep) s.basis.push_back(span[j]);
  if (static_cast<long>(s.basis.size()) != dim_trimmed(n, p, k))
    throw std::runtime_error("trimmed_basis: rank " + std::to_string(s.basis.size()) + " != " +
                             std::to_string(dim_trimmed(n, p, k)));
  verify_independent(s);
  return s;
}

std::vector<FormPolynomial> whitney_basis(const Simplex& cell, const std::vector<int>& sub, int r, int j) {
  const int n = cell.dim();
  const int d = static_cast<int>(sub.size()) - 1;
  std::vector<FormPolynomial> out;
  if (r < 1 || j < 0 || j > d) return out;
  const Mat g = d == 0 ? Mat::Zero(1, n) : cell.sub(sub).gradients();
  const int nv = n + 1;
  // sigma: (j+1)-subsets of the subsimplex's local vertices
  for (const auto& sig : form_indices(d + 1, j + 1)) {
    FormPolynomial phi(n, j);
    for (int i = 0; i <= j; ++i) {
      std::vector<int> rows;
      for (int l = 0; l <= j; ++l)
        if (l != i) rows.push_back(sig[l]);
      FormPolynomial w = wedge_of_gradients(g, rows, nv);
      phi += (Poly::lambda(nv, sub[sig[i]]) * w) * (i % 2 ? -1.0 : 1.0);
    }
    for (const auto& a : multi_indices(d + 1, r - 1)) {
      bool ok = true;
      for (int i = 0; i < sig[0]; ++i)
        if (a[i] != 0) ok = false;
      if (!ok) continue;
      MultiIndex full(nv);
      for (int i = 0; i <= d; ++i) full[sub[i]] = a[i];
      out.push_back(Poly::monomial(full) * phi);
    }
  }
  return out;
}

std::vector<FormPolynomial> full_basis_on(const Simplex& cell, const std::vector<int>& sub, int r, int j) {
  const int n = cell.dim();
  const int d = static_cast<int>(sub.size()) - 1;
  std::vector<FormPolynomial> out;
  if (r < 0 || j < 0 || j > d) return out;
  const Mat g = d == 0 ? Mat::Zero(1, n) : cell.sub(sub).gradients();
  for (const auto& J : form_indices(d, j)) {
    std::vector<int> rows;
    for (int x : J) rows.push_back(x + 1);
    FormPolynomial w = wedge_of_gradients(g, rows, n + 1);
    for (const auto& a : multi_indices(d + 1, r)) {
      MultiIndex full(n + 1);
      for (int i = 0; i <= d; ++i) full[sub[i]] = a[i];
      out.push_back(Poly::monomial(full) * w);
    }
  }
  return out;
}

Mat sample_points(int n, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::exponential_distribution<double> ex(1.0);
  Mat pts(count, n + 1);
  for (int i = 0; i < count; ++i) {
    double s = 0.0;
    for (int j = 0; j <= n; ++j) {
      pts(i, j) = ex(rng);
      s += pts(i, j);
    }
    pts.row(i) /= s;
  }
  return pts;
}

void verify_independent(const SpaceBasis& s) {
  if (s.basis.empty()) return;
  const int n = s.basis[0].n;
  const int nc = s.basis[0].ncomp();
  const int npts = static_cast<int>(binomial(std::max(s.degree, 0) + n, n)) + 6;
  Mat pts = sample_points(n, npts, 20240611u);
  Mat e(static_cast<long>(npts) * nc, static_cast<long>(s.basis.size()));
  for (std::size_t j = 0; j < s.basis.size(); ++j)
    for (int i = 0; i < npts; ++i) e.block(i * nc, j, nc, 1) = s.basis[j].eval(pts.row(i).transpose());
  if (numerical_rank(e) != static_cast<int>(s.basis.size()))
    throw std::runtime_error("SpaceBasis: members are linearly dependent");
}

std::string serialize(const FormPolynomial& f) {
  std::ostringstream os;
  os << "# FormPolynomial n=" << f.n << " k=" << f.k << " p=" << std::max(f.degree(), 0) << "\n";
  char buf[64];
  for (int i = 0; i < f.ncomp(); ++i)
    for (const auto& [a, c] : f.comp[i].terms()) {
      os << i << " |";
      for (int j = 0; j < a.len; ++j) os << " " << a[j];
      std::snprintf(buf, sizeof buf, "%.17g", c);
      os << " | " << buf << "\n";
    }
  return os.str();
}

}  // namespace derham
