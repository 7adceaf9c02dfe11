#pragma once

// Real symmetric eigendecomposition grouped into eigenprojections, and
// Schur complements of block matrices.

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"
#include "qwalk/linalg.hpp"

namespace qwalk {

// Spectral decomposition M = sum_r lambda_r G_r with distinct eigenvalues
// sorted descending and orthogonal eigenprojections G_r.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<Eigen::MatrixXd> projections;
  double group_tol = 0.0;

  int size() const { return static_cast<int>(eigenvalues.size()); }
  int multiplicity(int r) const {
    return static_cast<int>(std::lround(projections[r].trace()));
  }
  Eigen::MatrixXd reconstruct() const {
    if (projections.empty()) return Eigen::MatrixXd::Zero(0, 0);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(projections[0].rows(), projections[0].cols());
    for (int r = 0; r < size(); ++r) m += eigenvalues[r] * projections[r];
    return m;
  }
};

// Eigenvalue grouping is the single most delicate numerical choice here:
// every downstream projection formula depends on it.  The default tolerance
// is relative to the matrix scale.
inline double default_group_tol(const Eigen::MatrixXd& m) {
  double norm_inf = m.size() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
  return 1e-8 * std::max(1.0, norm_inf);
}

inline SpectralDecomposition eig_projections(const Eigen::MatrixXd& msym,
                                             double group_tol = 0.0) {
  if (msym.rows() != msym.cols()) throw NotSymmetric("matrix is not square");
  if (msym.size() > 0 && max_abs(msym - msym.transpose()) > 1e-12)
    throw NotSymmetric("matrix is not symmetric within 1e-12");
  SpectralDecomposition sd;
  sd.group_tol = group_tol > 0.0 ? group_tol : default_group_tol(msym);
  if (msym.rows() == 0) return sd;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(msym);
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  const Eigen::MatrixXd& vec = es.eigenvectors();
  int i = 0;
  while (i < ev.size()) {
    int j = i + 1;
    while (j < ev.size() && ev(j) - ev(j - 1) <= sd.group_tol) ++j;
    Eigen::MatrixXd block = vec.middleCols(i, j - i);
    sd.eigenvalues.push_back(ev.segment(i, j - i).mean());
    sd.projections.push_back(block * block.transpose());
    i = j;
  }
  std::reverse(sd.eigenvalues.begin(), sd.eigenvalues.end());
  std::reverse(sd.projections.begin(), sd.projections.end());
  return sd;
}

// Schur complement N/D = A - B D^{-1} C for N = [[A,B],[C,D]], where D is the
// principal block on `trailing`.  Computed by solving against D rather than
// forming D^{-1}.  An empty trailing set returns N; the full set returns an
// empty matrix.  If rcond is non-null it receives the reciprocal condition
// number estimate of D.
inline Eigen::MatrixXd schur_complement(const Eigen::MatrixXd& nblk,
                                        std::vector<int> trailing,
                                        double* rcond = nullptr) {
  if (nblk.rows() != nblk.cols()) throw Error("schur_complement: matrix not square");
  const int n = static_cast<int>(nblk.rows());
  std::sort(trailing.begin(), trailing.end());
  trailing.erase(std::unique(trailing.begin(), trailing.end()), trailing.end());
  for (int i : trailing)
    if (i < 0 || i >= n) throw InvalidVertex("schur_complement: split index out of range");

  if (rcond) *rcond = 1.0;
  if (trailing.empty()) return nblk;
  std::vector<char> in_trailing(n, 0);
  for (int i : trailing) in_trailing[i] = 1;
  std::vector<int> leading;
  for (int i = 0; i < n; ++i)
    if (!in_trailing[i]) leading.push_back(i);

  Eigen::MatrixXd d = select(nblk, trailing, trailing);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(d);
  if (!lu.isInvertible()) throw SingularBlock("schur_complement: trailing block is singular");
  if (rcond) *rcond = lu.rcond();
  if (leading.empty()) return Eigen::MatrixXd::Zero(0, 0);

  Eigen::MatrixXd a = select(nblk, leading, leading);
  Eigen::MatrixXd b = select(nblk, leading, trailing);
  Eigen::MatrixXd c = select(nblk, trailing, leading);
  return a - b * lu.solve(c);
}

}  // namespace qwalk
