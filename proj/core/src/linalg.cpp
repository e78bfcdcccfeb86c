#include "derham/linalg.hpp"

#include <Eigen/SVD>

namespace derham {

Vec singular_values(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) return Vec();
  Eigen::BDCSVD<Mat> svd(a);
  return svd.singularValues();
}

int numerical_rank(const Mat& a, double rtol) {
  Vec s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > rtol * s(0)) ++r;
  return r;
}

Mat null_space(const Mat& a, double rtol) {
  const long n = a.cols();
  if (n == 0) return Mat(0, 0);
  if (a.rows() == 0) return Mat::Identity(n, n);
  // Pad to a square-or-tall system so the full V is always available.
  Mat work = a;
  if (work.rows() < n) {
    work.conservativeResize(n, Eigen::NoChange);
    work.bottomRows(n - a.rows()).setZero();
  }
  Eigen::BDCSVD<Mat> svd(work, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  int r = 0;
  if (s(0) > 0.0)
    for (int i = 0; i < s.size(); ++i)
      if (s(i) > rtol * s(0)) ++r;
  return svd.matrixV().rightCols(n - r);
}

Mat column_space(const Mat& a, double rtol) {
  if (a.rows() == 0 || a.cols() == 0) return Mat(a.rows(), 0);
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  int r = 0;
  if (s(0) > 0.0)
    for (int i = 0; i < s.size(); ++i)
      if (s(i) > rtol * s(0)) ++r;
  return svd.matrixU().leftCols(r);
}

std::vector<int> independent_columns(const Mat& a, double rtol) {
  std::vector<int> keep;
  Mat q(a.rows(), 0);
  for (long j = 0; j < a.cols(); ++j) {
    Vec v = a.col(j);
    const double norm0 = v.norm();
    if (norm0 == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass)
      if (q.cols() > 0) v -= q * (q.transpose() * v);
    const double norm1 = v.norm();
    if (norm1 > 10.0 * rtol * norm0) {
      q.conservativeResize(Eigen::NoChange, q.cols() + 1);
      q.col(q.cols() - 1) = v / norm1;
      keep.push_back(static_cast<int>(j));
    }
  }
  return keep;
}

double singular_ratio(const Mat& a) {
  Vec s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

long binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace derham
