#pragma once

// Marked-set block extraction: the adjacency, Laplacian, signless-Laplacian
// and incidence blocks of the partition (S, S-complement), plus the diagonal
// neighbor-count matrices.

#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/graph.hpp"
#include "qwalk/incidence.hpp"
#include "qwalk/linalg.hpp"

namespace qwalk {

// Sorts, deduplicates and range-checks a marked set.
inline std::vector<int> normalize_marked(const Graph& g, std::vector<int> s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  for (int v : s)
    if (v < 0 || v >= g.n)
      throw InvalidVertex("marked vertex " + std::to_string(v) + " out of range");
  return s;
}

struct MarkedPartition {
  std::vector<int> S, Sbar;  // both sorted ascending
  Eigen::MatrixXd A_S;       // |S| x |S| adjacency block
  Eigen::MatrixXd H;         // |S| x |Sbar| cross block
  Eigen::MatrixXd A_Sbar;    // adjacency of the vertex-deleted subgraph
  Eigen::MatrixXd L_Sbar, Q_Sbar;      // Laplacian / signless Laplacian blocks of X
  Eigen::MatrixXd B_Sbar, C_Sbar;      // rows of B, C indexed by Sbar
  Eigen::MatrixXd DeltaSSbar;          // diag: neighbors in Sbar of each a in S
  Eigen::MatrixXd DeltaSbarSbar;       // diag: neighbors in Sbar of each u in Sbar
  Eigen::MatrixXd O_S;                 // n x n identity with [S,S] block zeroed

  int n() const { return static_cast<int>(S.size() + Sbar.size()); }

  // Positions of the original vertices in (S, Sbar) block order.
  std::vector<int> block_order() const {
    std::vector<int> ord(S);
    ord.insert(ord.end(), Sbar.begin(), Sbar.end());
    return ord;
  }
};

inline MarkedPartition marked_partition(const Graph& g, std::vector<int> S) {
  S = normalize_marked(g, S);
  MarkedPartition mp;
  mp.S = S;
  std::vector<char> marked(g.n, 0);
  for (int v : S) marked[v] = 1;
  for (int v = 0; v < g.n; ++v)
    if (!marked[v]) mp.Sbar.push_back(v);

  const Eigen::MatrixXd A = g.adjacency();
  mp.A_S = select(A, mp.S, mp.S);
  mp.H = select(A, mp.S, mp.Sbar);
  mp.A_Sbar = select(A, mp.Sbar, mp.Sbar);

  const Eigen::MatrixXd L = g.laplacian(), Q = g.signless_laplacian();
  mp.L_Sbar = select(L, mp.Sbar, mp.Sbar);
  mp.Q_Sbar = select(Q, mp.Sbar, mp.Sbar);

  const IncidenceSet inc = incidence_set(g);
  std::vector<int> all_edges(g.num_edges());
  for (int j = 0; j < g.num_edges(); ++j) all_edges[j] = j;
  mp.B_Sbar = select(inc.B, mp.Sbar, all_edges);
  mp.C_Sbar = select(inc.C, mp.Sbar, all_edges);

  mp.DeltaSSbar = Eigen::MatrixXd::Zero(mp.S.size(), mp.S.size());
  for (std::size_t i = 0; i < mp.S.size(); ++i) mp.DeltaSSbar(i, i) = mp.H.row(i).sum();
  mp.DeltaSbarSbar = Eigen::MatrixXd::Zero(mp.Sbar.size(), mp.Sbar.size());
  for (std::size_t i = 0; i < mp.Sbar.size(); ++i)
    mp.DeltaSbarSbar(i, i) = mp.A_Sbar.row(i).sum();

  mp.O_S = Eigen::MatrixXd::Identity(g.n, g.n);
  for (int v : mp.S) mp.O_S(v, v) = 0.0;
  return mp;
}

}  // namespace qwalk
