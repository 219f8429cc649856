#pragma once

#include <span>
#include <vector>

namespace uweno {

/// Row-major dense matrix for the small least-squares systems of the
/// reconstruction (at most 13x12 here).
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), v_(rows * cols, 0.0) {}

  double& operator()(int r, int c) { return v_[r * cols_ + c]; }
  double operator()(int r, int c) const { return v_[r * cols_ + c]; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::span<const double> row(int r) const { return {v_.data() + r * cols_, size_t(cols_)}; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> v_;
};

/// Solve (zeta*I + A^T A) x = A^T b by a direct LDL^T factorization of the
/// regularized normal matrix. zeta = 0 with a singular normal matrix raises
/// singular_matrix_error.
std::vector<double> ridge_solve(const DenseMatrix& a, std::span<const double> b, double zeta);

/// Row-weighted variant: equivalent to ridge_solve(diag(d)*A, diag(d)*b, zeta).
std::vector<double> weighted_ridge_solve(const DenseMatrix& a, std::span<const double> b,
                                         std::span<const double> d, double zeta);

/// The full n x m solve operator X = (zeta*I + A^T D^2 A)^-1 A^T D^2, so that
/// weighted_ridge_solve(A, b, d, zeta) == X * b for every b. Pass d empty for
/// unit row weights. This is what gets precomputed per cell: the map from
/// cell-average differences to polynomial coefficients.
DenseMatrix ridge_solve_operator(const DenseMatrix& a, std::span<const double> d, double zeta);

}  // namespace uweno
