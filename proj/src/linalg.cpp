#include "polyco/linalg.hpp"

namespace polyco {

Eigen::VectorXd singular_values(const Eigen::MatrixXd& A) {
  if (A.rows() == 0 || A.cols() == 0) return Eigen::VectorXd();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  return svd.singularValues();
}

int numerical_rank(const Eigen::MatrixXd& A, double eps) {
  auto s = singular_values(A);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) >= eps * s(0)) ++r;
  return r;
}

Eigen::MatrixXd nullspace(const Eigen::MatrixXd& A, double eps) {
  const int n = static_cast<int>(A.cols());
  if (A.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  // Pad to at least n rows so the full V is available.
  Eigen::MatrixXd M = A;
  if (M.rows() < n) {
    M.conservativeResize(n, Eigen::NoChange);
    M.bottomRows(n - A.rows()).setZero();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s(0) > 0.0)
    for (int i = 0; i < s.size(); ++i)
      if (s(i) >= eps * s(0)) ++r;
  return svd.matrixV().rightCols(n - r);
}

Eigen::MatrixXd column_basis(const Eigen::MatrixXd& A, double eps) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() == 0) return Eigen::MatrixXd(n, 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s(0) > 0.0)
    for (int i = 0; i < s.size(); ++i)
      if (s(i) >= eps * s(0)) ++r;
  return svd.matrixU().leftCols(r);
}

Eigen::MatrixXd subspace_sum(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double eps) {
  Eigen::MatrixXd Qa = column_basis(A, eps);
  Eigen::MatrixXd Qb = column_basis(B, eps);
  Eigen::MatrixXd M(Qa.rows(), Qa.cols() + Qb.cols());
  M << Qa, Qb;
  return column_basis(M, eps);
}

Eigen::MatrixXd subspace_intersection(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double eps) {
  Eigen::MatrixXd Qa = column_basis(A, eps);
  Eigen::MatrixXd Qb = column_basis(B, eps);
  const int n = static_cast<int>(A.rows());
  if (Qa.cols() == 0 || Qb.cols() == 0) return Eigen::MatrixXd(n, 0);
  Eigen::MatrixXd M(n, Qa.cols() + Qb.cols());
  M << Qa, -Qb;
  Eigen::MatrixXd N = nullspace(M, eps);
  if (N.cols() == 0) return Eigen::MatrixXd(n, 0);
  return column_basis(Qa * N.topRows(Qa.cols()), eps);
}

SubspaceComparison compare_subspaces(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double eps) {
  SubspaceComparison c;
  c.dim_a = static_cast<int>(column_basis(A, eps).cols());
  c.dim_b = static_cast<int>(column_basis(B, eps).cols());
  c.dim_sum = static_cast<int>(subspace_sum(A, B, eps).cols());
  return c;
}

std::vector<int> independent_rows(const Eigen::MatrixXd& A, double eps) {
  std::vector<int> out;
  if (A.rows() == 0 || A.cols() == 0) return out;
  Eigen::MatrixXd At = A.transpose();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(At);
  const auto& R = qr.matrixR();
  const int diag = static_cast<int>(std::min(R.rows(), R.cols()));
  const double top = diag > 0 ? std::abs(R(0, 0)) : 0.0;
  if (top == 0.0) return out;
  for (int i = 0; i < diag; ++i)
    if (std::abs(R(i, i)) >= eps * top) out.push_back(static_cast<int>(qr.colsPermutation().indices()(i)));
  return out;
}

}  // namespace polyco
