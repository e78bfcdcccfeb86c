#pragma once

#include <Eigen/Dense>
#include <vector>

namespace derham {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Singular values below this fraction of the largest count as zero.
inline constexpr double kRankTol = 1e-9;

Vec singular_values(const Mat& a);
int numerical_rank(const Mat& a, double rtol = kRankTol);

// Orthonormal basis of the right null space, one column per kernel vector.
Mat null_space(const Mat& a, double rtol = kRankTol);

// Orthonormal basis of the column space.
Mat column_space(const Mat& a, double rtol = kRankTol);

// Greedy left-to-right selection of linearly independent columns.
std::vector<int> independent_columns(const Mat& a, double rtol = kRankTol);

// smallest / largest singular value (0 for an empty matrix)
double singular_ratio(const Mat& a);

long binomial(int n, int k);

}  // namespace derham
