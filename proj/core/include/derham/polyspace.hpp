#pragma once

#include <array>
#include <compare>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "derham/linalg.hpp"

namespace derham {

// Barycentric exponents; a tetrahedron has four coordinates.
inline constexpr int kMaxBary = 4;

struct MultiIndex {
  std::array<int, kMaxBary> e{};
  int len = 0;

  MultiIndex() = default;
  explicit MultiIndex(int length) : len(length) {}
  MultiIndex(std::initializer_list<int> v);

  int degree() const;
  int operator[](int i) const { return e[i]; }
  int& operator[](int i) { return e[i]; }

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

MultiIndex operator+(MultiIndex a, const MultiIndex& b);
std::string to_string(const MultiIndex& a);

// All exponents of the given length and total degree, lexicographically ascending.
const std::vector<MultiIndex>& multi_indices(int len, int degree);
int multi_index_rank(const MultiIndex& a);

// Polynomial in barycentric coordinates. Terms with coefficient exactly zero are dropped.
class Poly {
 public:
  Poly() = default;
  explicit Poly(int nvars) : nvars_(nvars) {}

  static Poly constant(int nvars, double c);
  static Poly monomial(const MultiIndex& a, double c = 1.0);
  static Poly lambda(int nvars, int i);

  int nvars() const { return nvars_; }
  const std::map<MultiIndex, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  double max_abs() const;

  void add(const MultiIndex& a, double c);
  void prune(double abs_tol);

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(double s);

  double eval(const Vec& bary) const;
  Poly partial(int i) const;  // d / d lambda_i

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  int nvars_ = 0;
  std::map<MultiIndex, double> terms_;
};

Poly operator+(Poly a, const Poly& b);
Poly operator-(Poly a, const Poly& b);
Poly operator*(Poly a, double s);
Poly operator*(double s, Poly a);
Poly operator*(const Poly& a, const Poly& b);

// Multiply lower-degree terms by powers of (sum of lambdas) so every term has `degree`.
Poly homogenize(const Poly& f, int degree);

// k-subsets of {0..n-1} in lexicographic order; index into FormPolynomial::comp.
const std::vector<std::vector<int>>& form_indices(int n, int k);
int form_index(int n, const std::vector<int>& sorted_subset);
// Sign of the permutation sorting a|b, or 0 when a and b intersect.
int shuffle_sign(const std::vector<int>& a, const std::vector<int>& b);

// k-form with Cartesian components dx^I and barycentric polynomial coefficients.
struct FormPolynomial {
  int n = 0;
  int k = 0;
  std::vector<Poly> comp;

  FormPolynomial() = default;
  FormPolynomial(int n_, int k_);
  static FormPolynomial scalar(int n, int k, const Poly& f);  // k == 0 or k == n

  int ncomp() const { return static_cast<int>(comp.size()); }
  int degree() const;
  bool is_zero() const;
  double max_abs() const;
  Vec eval(const Vec& bary) const;

  FormPolynomial& operator+=(const FormPolynomial& o);
  FormPolynomial& operator-=(const FormPolynomial& o);
  FormPolynomial& operator*=(double s);

  friend bool operator==(const FormPolynomial&, const FormPolynomial&) = default;
};

FormPolynomial operator+(FormPolynomial a, const FormPolynomial& b);
FormPolynomial operator-(FormPolynomial a, const FormPolynomial& b);
FormPolynomial operator*(FormPolynomial a, double s);
FormPolynomial operator*(const Poly& f, const FormPolynomial& w);
FormPolynomial wedge(const FormPolynomial& a, const FormPolynomial& b);

// Geometric simplex: dim+1 points in R^ambient.
class Simplex {
 public:
  Simplex() = default;
  explicit Simplex(std::vector<Vec> points);
  static Simplex reference(int n);

  int dim() const { return static_cast<int>(x_.size()) - 1; }
  int ambient() const { return x_.empty() ? 0 : static_cast<int>(x_[0].size()); }
  const Vec& vertex(int i) const { return x_[i]; }
  const std::vector<Vec>& vertices() const { return x_; }
  double volume() const { return volume_; }
  // Row i: gradient of lambda_i, tangential to the simplex.
  const Mat& gradients() const { return grad_; }
  Mat edge_matrix() const;  // columns x_i - x_0

  Vec point(const Vec& bary) const;
  Vec barycentric(const Vec& x) const;
  Simplex sub(const std::vector<int>& local) const;

 private:
  std::vector<Vec> x_;
  double volume_ = 0.0;
  Mat grad_;
};

double factorial(int n);

// Integral of lambda^a over the simplex, in the simplex's own barycentrics.
double integrate_monomial(const Simplex& s, const MultiIndex& a);
// Integral over the subsimplex `sub` (local vertex list of the cell) of a cell polynomial.
double integrate_on(const std::vector<int>& sub, double sub_volume, const Poly& f);
double integrate_on(const Simplex& cell, const std::vector<int>& sub, const Poly& f);
// Integral over `sub` of lambda^a times g, without forming the product.
double integrate_product_on(const std::vector<int>& sub, double sub_volume, const MultiIndex& a, const Poly& g);

Poly directional_derivative(const Simplex& cell, const Poly& f, const Vec& v);
FormPolynomial exterior_derivative(const Simplex& cell, const FormPolynomial& f);
FormPolynomial koszul(const Simplex& cell, const FormPolynomial& f);

// Constant form dl_{i_1} ^ ... ^ dl_{i_j} from rows of a gradient matrix.
FormPolynomial wedge_of_gradients(const Mat& grads, const std::vector<int>& rows, int nvars);

enum class SpaceKind { full, trimmed, bubble };

struct SpaceBasis {
  Simplex simplex;
  SpaceKind kind = SpaceKind::full;
  int k = 0;
  int degree = 0;
  std::vector<FormPolynomial> basis;

  std::size_t size() const { return basis.size(); }
};

long dim_full(int n, int p, int k);
long dim_trimmed(int n, int p, int k);

SpaceBasis full_basis(const Simplex& cell, int p, int k);
SpaceBasis trimmed_basis(const Simplex& cell, int p, int k);

// Whitney-type basis of P^-_r Lambda^j on a subsimplex, as forms on the cell.
std::vector<FormPolynomial> whitney_basis(const Simplex& cell, const std::vector<int>& sub, int r, int j);
// Basis of P_r Lambda^j on a subsimplex (tangential constant forms times monomials).
std::vector<FormPolynomial> full_basis_on(const Simplex& cell, const std::vector<int>& sub, int r, int j);

// Coordinates in the full_basis(cell, p, k) ordering.
Vec coefficients(const FormPolynomial& f, int p);
FormPolynomial from_coefficients(int n, int k, int p, const Vec& c);
Mat coefficient_matrix(const std::vector<FormPolynomial>& fs, int n, int k, int p);

// Sampled-evaluation rank; throws std::runtime_error on dependence.
void verify_independent(const SpaceBasis& s);
Mat sample_points(int n, int count, unsigned seed);  // rows: barycentric points

std::string serialize(const FormPolynomial& f);

}  // namespace derham
