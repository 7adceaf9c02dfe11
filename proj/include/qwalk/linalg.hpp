#pragma once

// Small dense-matrix helpers shared across the library and the test suites.

#include <vector>

#include <Eigen/Dense>

namespace qwalk {

inline double max_abs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline Eigen::MatrixXd select(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                              const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

// Scatters `block` into an n x n zero matrix at positions idx x idx.
inline Eigen::MatrixXd scatter(const Eigen::MatrixXd& block, const std::vector<int>& idx, int n) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(idx[i], idx[j]) = block(i, j);
  return out;
}

// Operator (spectral) norm of a symmetric matrix: max |eigenvalue|.
inline double operator_norm_sym(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Orthonormal basis of the column space of v (columns with singular value
// above tol * sigma_max are kept).
inline Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& v, double tol = 1e-12) {
  if (v.cols() == 0) return Eigen::MatrixXd::Zero(v.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(v, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  double cutoff = tol * (sv.size() ? sv(0) : 0.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

// Orthogonal projector onto the column space of v.
inline Eigen::MatrixXd projector_onto_columns(const Eigen::MatrixXd& v) {
  Eigen::MatrixXd q = orthonormal_columns(v);
  return q * q.transpose();
}

// Distance between subspaces given by orthogonal projectors: ||p1 - p2||_2.
inline double subspace_distance(const Eigen::MatrixXd& p1, const Eigen::MatrixXd& p2) {
  return operator_norm_sym(p1 - p2);
}

}  // namespace qwalk
