#include "doctest.h"
#include "support.hpp"

using namespace derham;

namespace {

// (d w)_I = sum_m (-1)^m d/dx_{I_m} w_{I minus I_m}, by centred differences in x.
Vec fd_exterior_derivative(const Simplex& s, const FormPolynomial& w, const Vec& x, double h) {
  const int n = w.n;
  const auto& out = form_indices(n, w.k + 1);
  Vec r = Vec::Zero(static_cast<long>(out.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& I = out[i];
    for (std::size_t m = 0; m < I.size(); ++m) {
      std::vector<int> J;
      for (std::size_t q = 0; q < I.size(); ++q)
        if (q != m) J.push_back(I[q]);
      const int j = form_index(n, J);
      Vec xp = x, xm = x;
      xp(I[m]) += h;
      xm(I[m]) -= h;
      const double dv = (w.eval(s.barycentric(xp))(j) - w.eval(s.barycentric(xm))(j)) / (2 * h);
      r(static_cast<long>(i)) += (m % 2 ? -1.0 : 1.0) * dv;
    }
  }
  return r;
}

}  // namespace

TEST_CASE("full and trimmed dimensions") {
  for (int p = 0; p <= 6; ++p) {
    CHECK(dim_full(3, p, 0) == binomial(p + 3, 3));
    CHECK(3 * dim_full(3, p, 0) == dim_full(3, p, 1));
    if (p >= 1) CHECK(dim_trimmed(3, p, 0) == binomial(p + 3, 3));
  }
  CHECK(dim_trimmed(3, 0, 0) == 0);
  CHECK(dim_full(2, 1, 2) == 3);
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k <= n; ++k) CHECK(dim_full(n, -1, k) == 0);
  for (int p = 2; p <= 7; ++p) {
    CHECK(dim_trimmed(2, p - 1, 1) == (p - 1) * (p + 1));
    CHECK(2 * dim_trimmed(3, p - 2, 2) == (p - 2) * (p - 1) * (p + 1));
  }
}

TEST_CASE("multi-index enumeration") {
  for (int len = 1; len <= 4; ++len)
    for (int d = 0; d <= 6; ++d) {
      const auto& mi = multi_indices(len, d);
      CHECK(static_cast<long>(mi.size()) == binomial(len - 1 + d, d));
      for (std::size_t i = 0; i < mi.size(); ++i) {
        CHECK(mi[i].degree() == d);
        CHECK(multi_index_rank(mi[i]) == static_cast<int>(i));
        if (i) CHECK(mi[i - 1] < mi[i]);
      }
    }
}

TEST_CASE("exact monomial integrals") {
  const Simplex tri = Simplex::reference(2);
  CHECK(integrate_monomial(tri, MultiIndex{0, 0, 0}) == doctest::Approx(0.5));
  CHECK(integrate_monomial(tri, MultiIndex{1, 0, 0}) == doctest::Approx(1.0 / 6.0));
  const Simplex tet = Simplex::reference(3);
  CHECK(integrate_monomial(tet, MultiIndex{0, 0, 0, 0}) == doctest::Approx(1.0 / 6.0));
  CHECK(integrate_monomial(tet, MultiIndex{1, 1, 0, 0}) == doctest::Approx(1.0 / 120.0));
}

TEST_CASE("monomial integrals agree with Monte-Carlo estimates") {
  std::mt19937 g(2024);
  std::exponential_distribution<double> ex(1.0);
  for (int trial = 0; trial < 24; ++trial) {
    const int n = 1 + trial % 3;
    const Simplex s = testing::random_simplex(n, g);
    MultiIndex a(n + 1);
    std::uniform_int_distribution<int> pick(0, n);
    const int deg = trial % 7;
    for (int i = 0; i < deg; ++i) a[pick(g)] += 1;
    const int samples = 20000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < samples; ++i) {
      // uniform point in the simplex: normalised exponentials
      Vec b(n + 1);
      for (int c = 0; c <= n; ++c) b(c) = ex(g);
      b /= b.sum();
      double v = 1.0;
      for (int c = 0; c <= n; ++c) v *= std::pow(b(c), a[c]);
      sum += v;
      sq += v * v;
    }
    const double mean = sum / samples;
    const double sigma = std::sqrt(std::max(0.0, sq / samples - mean * mean) / samples) * s.volume();
    CAPTURE(to_string(a));
    CHECK(std::abs(integrate_monomial(s, a) - mean * s.volume()) <= 3.0 * sigma + 1e-15);
  }
}

TEST_CASE("integration is linear") {
  std::mt19937 g(3);
  for (int n = 1; n <= 3; ++n) {
    const Simplex s = testing::random_simplex(n, g);
    std::vector<int> all(n + 1);
    for (int i = 0; i <= n; ++i) all[i] = i;
    const Poly f = testing::random_poly(n + 1, 4, g), h = testing::random_poly(n + 1, 3, g);
    const double lhs = integrate_on(s, all, 2.0 * f - 3.0 * h);
    const double rhs = 2.0 * integrate_on(s, all, f) - 3.0 * integrate_on(s, all, h);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("trimmed and full bases") {
  CHECK(trimmed_basis(Simplex::reference(2), 1, 1).size() == 3);
  CHECK(trimmed_basis(Simplex::reference(3), 1, 2).size() == 4);
  for (int p = 0; p <= 4; ++p) CHECK(static_cast<long>(full_basis(Simplex::reference(3), p, 0).size()) == binomial(p + 3, 3));

  std::mt19937 g(9);
  for (int n = 1; n <= 3; ++n) {
    const Simplex s = testing::random_simplex(n, g);
    for (int k = 0; k <= n; ++k)
      for (int p = 1; p <= 6; ++p) {
        const SpaceBasis b = trimmed_basis(s, p, k);
        CAPTURE(n);
        CAPTURE(k);
        CAPTURE(p);
        CHECK(static_cast<long>(b.size()) == dim_trimmed(n, p, k));
        CHECK(numerical_rank(coefficient_matrix(b.basis, n, k, p)) == static_cast<int>(b.size()));
        if (k < n)
          for (const auto& w : b.basis) CHECK(exterior_derivative(s, w).degree() <= p);
      }
  }
}

TEST_CASE("exterior derivative examples") {
  const Simplex tri = Simplex::reference(2);
  CHECK(exterior_derivative(tri, FormPolynomial::scalar(2, 0, Poly::constant(3, 2.5))).is_zero());

  // cubic bubble: d b carries the rotated curl; d d b = 0 is div curl b = 0
  const Poly b = Poly::lambda(3, 0) * Poly::lambda(3, 1) * Poly::lambda(3, 2);
  const FormPolynomial db = exterior_derivative(tri, FormPolynomial::scalar(2, 0, b));
  CHECK(db.degree() <= 2);
  CHECK(exterior_derivative(tri, db).max_abs() < 1e-14);
  // on the reference triangle b = (1 - x - y) x y, so db/dx = y (1 - 2x - y)
  Vec x(2);
  x << 0.25, 0.25;
  const Vec g = db.eval(tri.barycentric(x));
  CHECK(g(0) == doctest::Approx(0.25 * (1 - 0.5 - 0.25)));
  CHECK(g(1) == doctest::Approx(0.25 * (1 - 0.5 - 0.25)));

  const Simplex tet = Simplex::reference(3);
  const Poly q = Poly::lambda(4, 0) * Poly::lambda(4, 0) * Poly::lambda(4, 1);
  CHECK(exterior_derivative(tet, exterior_derivative(tet, FormPolynomial::scalar(3, 0, q))).max_abs() < 1e-13);
}

TEST_CASE("exterior derivative matches finite differences") {
  std::mt19937 g(17);
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k < n; ++k) {
      const Simplex s = testing::random_simplex(n, g);
      const FormPolynomial w = testing::random_form(n, k, 3, g);
      const FormPolynomial dw = exterior_derivative(s, w);
      for (int i = 0; i < 20; ++i) {
        const Vec bary = testing::random_bary(n, g);
        const Vec x = s.point(bary);
        const Vec exact = dw.eval(bary);
        const Vec fd = fd_exterior_derivative(s, w, x, 1e-5);
        CHECK((exact - fd).norm() <= 1e-6 * std::max(1.0, exact.norm()));
      }
    }
}

TEST_CASE("d d = 0 on random forms") {
  std::mt19937 g(23);
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k + 2 <= n; ++k) {
      const Simplex s = testing::random_simplex(n, g);
      for (int trial = 0; trial < 100; ++trial) {
        const FormPolynomial w = testing::random_form(n, k, 1 + trial % 5, g);
        const FormPolynomial dw = exterior_derivative(s, w);
        CHECK(exterior_derivative(s, dw).max_abs() <= 1e-12 * std::max(1.0, dw.max_abs()));
      }
    }
}

TEST_CASE("koszul is nilpotent and raises the degree by one") {
  std::mt19937 g(29);
  for (int n = 2; n <= 3; ++n)
    for (int k = 2; k <= n; ++k) {
      const Simplex s = testing::random_simplex(n, g);
      const FormPolynomial w = testing::random_form(n, k, 2, g);
      const FormPolynomial kw = koszul(s, w);
      CHECK(kw.degree() <= 3);
      CHECK(koszul(s, kw).max_abs() <= 1e-12 * std::max(1.0, kw.max_abs()));
    }
}

TEST_CASE("coefficient round trip") {
  std::mt19937 g(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k <= n; ++k)
      for (int p = 0; p <= 4; ++p) {
        Vec c(dim_full(n, p, k));
        for (long i = 0; i < c.size(); ++i) c(i) = u(g);
        CHECK((coefficients(from_coefficients(n, k, p, c), p) - c).norm() < 1e-13);
      }
}
