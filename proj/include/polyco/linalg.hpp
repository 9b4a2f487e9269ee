#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "polyco/dual.hpp"

namespace polyco {

// Singular values below kRankEps * sigma_max count as zero.
inline constexpr double kRankEps = 1e-8;

class SingularSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Eigen::VectorXd singular_values(const Eigen::MatrixXd& A);
int numerical_rank(const Eigen::MatrixXd& A, double eps = kRankEps);
// Orthonormal basis of ker A (columns); A may have zero rows.
Eigen::MatrixXd nullspace(const Eigen::MatrixXd& A, double eps = kRankEps);
// Orthonormal basis of the column span.
Eigen::MatrixXd column_basis(const Eigen::MatrixXd& A, double eps = kRankEps);
Eigen::MatrixXd subspace_sum(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double eps = kRankEps);
Eigen::MatrixXd subspace_intersection(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                      double eps = kRankEps);

struct SubspaceComparison {
  int dim_a = 0;
  int dim_b = 0;
  int dim_sum = 0;
  bool equal() const { return dim_a == dim_b && dim_sum == dim_a; }
  // How far each side is from containing the other.
  int deficit_a() const { return dim_sum - dim_a; }
  int deficit_b() const { return dim_sum - dim_b; }
};
SubspaceComparison compare_subspaces(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                     double eps = kRankEps);

// Indices of a maximal set of linearly independent rows (column-pivoted QR of Aᵀ).
std::vector<int> independent_rows(const Eigen::MatrixXd& A, double eps = kRankEps);

// Dense row-major square solve A X = B with partial pivoting on the value
// part, so it works unchanged for dual numbers.
template <class T>
std::vector<T> solve_square(std::vector<T> A, int n, std::vector<T> B, int nrhs) {
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = std::abs(value_of(A[static_cast<std::size_t>(c) * n + c]));
    for (int r = c + 1; r < n; ++r) {
      double v = std::abs(value_of(A[static_cast<std::size_t>(r) * n + c]));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (!(best > 1e-300)) throw SingularSystem("solve_square: singular matrix");
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(A[static_cast<std::size_t>(c) * n + j], A[static_cast<std::size_t>(piv) * n + j]);
      for (int j = 0; j < nrhs; ++j)
        std::swap(B[static_cast<std::size_t>(c) * nrhs + j], B[static_cast<std::size_t>(piv) * nrhs + j]);
    }
    const T inv = T(1.0) / A[static_cast<std::size_t>(c) * n + c];
    for (int r = c + 1; r < n; ++r) {
      const T f = A[static_cast<std::size_t>(r) * n + c] * inv;
      if (value_of(f) == 0.0 && scalar_level_v<T> == 0) continue;
      for (int j = c; j < n; ++j)
        A[static_cast<std::size_t>(r) * n + j] = A[static_cast<std::size_t>(r) * n + j] - f * A[static_cast<std::size_t>(c) * n + j];
      for (int j = 0; j < nrhs; ++j)
        B[static_cast<std::size_t>(r) * nrhs + j] = B[static_cast<std::size_t>(r) * nrhs + j] - f * B[static_cast<std::size_t>(c) * nrhs + j];
    }
  }
  for (int c = n - 1; c >= 0; --c) {
    const T inv = T(1.0) / A[static_cast<std::size_t>(c) * n + c];
    for (int j = 0; j < nrhs; ++j) {
      T acc = B[static_cast<std::size_t>(c) * nrhs + j];
      for (int k = c + 1; k < n; ++k) acc = acc - A[static_cast<std::size_t>(c) * n + k] * B[static_cast<std::size_t>(k) * nrhs + j];
      B[static_cast<std::size_t>(c) * nrhs + j] = acc * inv;
    }
  }
  return B;
}

// Solves a consistent linear system A X = B (rows×cols, row-major) that may be
// over- or under-determined. Independent rows are chosen from the value part;
// with full column rank the square subsystem is solved, otherwise the
// minimal-norm solution A_Sᵀ (A_S A_Sᵀ)⁻¹ B_S is returned. Exact derivatives
// propagate because the row choice is locally constant.
template <class T>
std::vector<T> solve_consistent(const std::vector<T>& A, int rows, int cols, const std::vector<T>& B, int nrhs,
                                int* rank_out = nullptr) {
  Eigen::MatrixXd Av(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) Av(r, c) = value_of(A[static_cast<std::size_t>(r) * cols + c]);
  const auto sel = independent_rows(Av);
  const int m = static_cast<int>(sel.size());
  if (rank_out) *rank_out = m;
  std::vector<T> As(static_cast<std::size_t>(m) * cols), Bs(static_cast<std::size_t>(m) * nrhs);
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < cols; ++c) As[static_cast<std::size_t>(i) * cols + c] = A[static_cast<std::size_t>(sel[i]) * cols + c];
    for (int j = 0; j < nrhs; ++j) Bs[static_cast<std::size_t>(i) * nrhs + j] = B[static_cast<std::size_t>(sel[i]) * nrhs + j];
  }
  if (m == cols) return solve_square<T>(std::move(As), m, std::move(Bs), nrhs);
  std::vector<T> G(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      T acc(0.0);
      for (int c = 0; c < cols; ++c) acc = acc + As[static_cast<std::size_t>(i) * cols + c] * As[static_cast<std::size_t>(j) * cols + c];
      G[static_cast<std::size_t>(i) * m + j] = acc;
    }
  auto Y = solve_square<T>(std::move(G), m, std::move(Bs), nrhs);
  std::vector<T> X(static_cast<std::size_t>(cols) * nrhs);
  for (int c = 0; c < cols; ++c)
    for (int j = 0; j < nrhs; ++j) {
      T acc(0.0);
      for (int i = 0; i < m; ++i) acc = acc + As[static_cast<std::size_t>(i) * cols + c] * Y[static_cast<std::size_t>(i) * nrhs + j];
      X[static_cast<std::size_t>(c) * nrhs + j] = acc;
    }
  return X;
}

}  // namespace polyco
