#include "uweno/smalldense.hpp"

#include <cmath>

#include "uweno/errors.hpp"

namespace uweno {

namespace {

// LDL^T factorization in place; no pivoting (the matrices here are symmetric
// positive semi-definite plus zeta on the diagonal).
void ldlt_factor(DenseMatrix& n) {
  const int k = n.rows();
  for (int j = 0; j < k; ++j) {
    double d = n(j, j);
    for (int p = 0; p < j; ++p) d -= n(j, p) * n(j, p) * n(p, p);
    if (std::abs(d) < 1e-300) throw singular_matrix_error("normal matrix pivot vanished");
    n(j, j) = d;
    for (int i = j + 1; i < k; ++i) {
      double s = n(i, j);
      for (int p = 0; p < j; ++p) s -= n(i, p) * n(j, p) * n(p, p);
      n(i, j) = s / d;
    }
  }
}

void ldlt_solve(const DenseMatrix& f, std::span<double> x) {
  const int k = f.rows();
  for (int i = 0; i < k; ++i)
    for (int p = 0; p < i; ++p) x[i] -= f(i, p) * x[p];
  for (int i = 0; i < k; ++i) x[i] /= f(i, i);
  for (int i = k - 1; i >= 0; --i)
    for (int p = i + 1; p < k; ++p) x[i] -= f(p, i) * x[p];
}

DenseMatrix normal_matrix(const DenseMatrix& a, std::span<const double> d, double zeta) {
  const int m = a.rows(), n = a.cols();
  DenseMatrix nm(n, n);
  for (int r = 0; r < m; ++r) {
    const double w = d.empty() ? 1.0 : d[r] * d[r];
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) nm(i, j) += w * a(r, i) * a(r, j);
  }
  for (int i = 0; i < n; ++i) {
    nm(i, i) += zeta;
    for (int j = 0; j < i; ++j) nm(i, j) = nm(j, i);
  }
  return nm;
}

}  // namespace

std::vector<double> weighted_ridge_solve(const DenseMatrix& a, std::span<const double> b,
                                         std::span<const double> d, double zeta) {
  const int m = a.rows(), n = a.cols();
  DenseMatrix nm = normal_matrix(a, d, zeta);
  ldlt_factor(nm);
  std::vector<double> x(n, 0.0);
  for (int r = 0; r < m; ++r) {
    const double w = (d.empty() ? 1.0 : d[r] * d[r]) * b[r];
    for (int i = 0; i < n; ++i) x[i] += w * a(r, i);
  }
  ldlt_solve(nm, x);
  return x;
}

std::vector<double> ridge_solve(const DenseMatrix& a, std::span<const double> b, double zeta) {
  return weighted_ridge_solve(a, b, {}, zeta);
}

DenseMatrix ridge_solve_operator(const DenseMatrix& a, std::span<const double> d, double zeta) {
  const int m = a.rows(), n = a.cols();
  DenseMatrix nm = normal_matrix(a, d, zeta);
  ldlt_factor(nm);
  DenseMatrix op(n, m);
  std::vector<double> col(n);
  for (int r = 0; r < m; ++r) {
    const double w = d.empty() ? 1.0 : d[r] * d[r];
    for (int i = 0; i < n; ++i) col[i] = w * a(r, i);
    ldlt_solve(nm, col);
    for (int i = 0; i < n; ++i) op(i, r) = col[i];
  }
  return op;
}

}  // namespace uweno
