#pragma once

// The arc/edge incidence calculus of the walk: tail/head incidence, arc
// reversal, and the signed and unsigned arc-edge and vertex-edge matrices.
// Everything is built from integer data; the stored doubles are exact.

#include <Eigen/Dense>

#include "qwalk/graph.hpp"

namespace qwalk {

struct IncidenceSet {
  Eigen::MatrixXd Dt, Dh;   // |V| x |arcs| tail / head incidence
  Eigen::MatrixXd R;        // |arcs| x |arcs| arc reversal
  Eigen::MatrixXd M, N;     // |arcs| x |E|, unsigned / signed arc-edge incidence
  Eigen::MatrixXd B, C;     // |V| x |E|, unsigned / signed vertex-edge incidence
  Eigen::MatrixXd A, Delta; // adjacency, degree diagonal
};

// The incidence matrices satisfy, exactly:
//   Dt R = Dh,  Dh R = Dt,  R M = M,  R N = -N,
//   M M^T = I + R,  N N^T = I - R,
//   Dt Dt^T = Dh Dh^T = Delta,  Dt Dh^T = A,  Dt M = B,  Dt N = C.
inline IncidenceSet incidence_set(const Graph& g) {
  const int n = g.n, m = g.num_edges(), na = g.num_arcs();
  IncidenceSet inc;
  inc.Dt = Eigen::MatrixXd::Zero(n, na);
  inc.Dh = Eigen::MatrixXd::Zero(n, na);
  inc.R = Eigen::MatrixXd::Zero(na, na);
  inc.M = Eigen::MatrixXd::Zero(na, m);
  inc.N = Eigen::MatrixXd::Zero(na, m);
  inc.B = Eigen::MatrixXd::Zero(n, m);
  inc.C = Eigen::MatrixXd::Zero(n, m);
  for (int j = 0; j < m; ++j) {
    const auto& [u, v] = g.edges[j];  // orientation u -> v (u < v)
    const int a = 2 * j, ar = 2 * j + 1;
    inc.Dt(u, a) = 1.0;
    inc.Dh(v, a) = 1.0;
    inc.Dt(v, ar) = 1.0;
    inc.Dh(u, ar) = 1.0;
    inc.R(a, ar) = 1.0;
    inc.R(ar, a) = 1.0;
    inc.M(a, j) = 1.0;
    inc.M(ar, j) = 1.0;
    inc.N(a, j) = 1.0;
    inc.N(ar, j) = -1.0;
    inc.B(u, j) = 1.0;
    inc.B(v, j) = 1.0;
    inc.C(u, j) = 1.0;
    inc.C(v, j) = -1.0;
  }
  inc.A = g.adjacency();
  inc.Delta = g.degree_matrix();
  return inc;
}

}  // namespace qwalk
