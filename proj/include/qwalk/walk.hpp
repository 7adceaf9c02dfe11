#pragma once

// The discrete walk itself: the transition matrix U, its complete
// eigensystem assembled from the spectral decomposition of the vertex-deleted
// subgraph, and the average vertex mixing matrix computed by three
// independent routes (Cesaro time average, eigenprojection sum, closed form).

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/incidence.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/marked.hpp"
#include "qwalk/spectral.hpp"

namespace qwalk {

enum class CoinForm { general, regular };

// U = R * coin, where the coin is -I on the outgoing arcs of a marked vertex
// and the Grover coin (2/deg)J - I at an unmarked one.
struct TransitionMatrix {
  Eigen::MatrixXd U;  // |arcs| x |arcs|, real orthogonal
  std::vector<int> S;
  int n = 0;
  int k = 0;  // regular degree, 0 if irregular
};

inline TransitionMatrix transition_matrix(const Graph& g, std::vector<int> S,
                                          CoinForm form = CoinForm::general) {
  S = normalize_marked(g, S);
  if (form == CoinForm::regular && !g.is_regular())
    throw NotRegular("regular coin form requested on an irregular graph");

  const int na = g.num_arcs();
  std::vector<char> marked(g.n, 0);
  for (int v : S) marked[v] = 1;

  // Outgoing arcs per vertex.
  std::vector<std::vector<int>> out(g.n);
  for (int a = 0; a < na; ++a) out[g.arc_tail(a)].push_back(a);

  Eigen::MatrixXd coin = -Eigen::MatrixXd::Identity(na, na);
  for (int u = 0; u < g.n; ++u) {
    if (marked[u]) continue;
    const double w = 2.0 / g.degree[u];
    for (int a : out[u])
      for (int b : out[u]) coin(a, b) += w;
  }

  TransitionMatrix tm;
  tm.S = std::move(S);
  tm.n = g.n;
  tm.k = g.regular_degree;
  tm.U.resize(na, na);
  for (int a = 0; a < na; ++a) tm.U.row(a) = coin.row(Graph::arc_reverse(a));
  return tm;
}

// One spectral component of U: the projection onto the e^{i theta}-eigenspace,
// stored as real and imaginary parts.  theta is signed in (-pi, pi].
struct WalkProjection {
  double theta = 0.0;
  Eigen::MatrixXd re, im;
  double source_eigenvalue = 0.0;  // eigenvalue of A(X\S) it lifts (k cos theta)

  std::complex<double> eigenvalue() const { return {std::cos(theta), std::sin(theta)}; }
  int rank() const { return static_cast<int>(std::lround(re.trace())); }
};

struct WalkEigensystem {
  std::vector<WalkProjection> projections;  // theta = 0, pi, then +/-theta_r pairs
  SpectralDecomposition subgraph;           // (lambda_r, G_r) of A(X\S)
  std::vector<int> S, Sbar;
  int n = 0, k = 0;
  int pm1_rank = 0;  // |E| - |V| + |S|, the multiplicity of both 1 and -1
};

inline void require_proper_marked(const Graph& g, const std::vector<int>& S) {
  if (!g.is_regular()) throw NotRegular("walk eigensystem requires a regular graph");
  if (S.empty()) throw EmptyMarkedSet("marked set is empty");
  if (static_cast<int>(S.size()) == g.n) throw FullMarkedSet("all vertices are marked");
}

// Complete orthogonal resolution of the identity for U:
//   F_1  = (I-R)/2 - (Dt-Dh)^T [0 ; L_Sbar^{-1}] (Dt-Dh) / 2,
//   F_-1 = (I+R)/2 - (Dt+Dh)^T [0 ; Q_Sbar^{-1}] (Dt+Dh) / 2,
//   F_{+-theta_r} = (Dt - e^{+-i theta_r} Dh)^T [0 ; G_r] (Dt - e^{-+i theta_r} Dh)
//                   / (2 k sin^2 theta_r),   theta_r = arccos(lambda_r / k).
inline WalkEigensystem walk_eigensystem(const Graph& g, std::vector<int> S) {
  S = normalize_marked(g, S);
  require_proper_marked(g, S);

  const MarkedPartition mp = marked_partition(g, S);
  const IncidenceSet inc = incidence_set(g);
  const int na = g.num_arcs();
  const double k = g.regular_degree;

  WalkEigensystem ws;
  ws.S = mp.S;
  ws.Sbar = mp.Sbar;
  ws.n = g.n;
  ws.k = g.regular_degree;
  ws.pm1_rank = g.num_edges() - g.n + static_cast<int>(mp.S.size());
  ws.subgraph = eig_projections(mp.A_Sbar);

  const int nsb = static_cast<int>(mp.Sbar.size());
  const Eigen::MatrixXd id_sb = Eigen::MatrixXd::Identity(nsb, nsb);
  const Eigen::MatrixXd linv = mp.L_Sbar.ldlt().solve(id_sb);
  const Eigen::MatrixXd qinv = mp.Q_Sbar.ldlt().solve(id_sb);

  const Eigen::MatrixXd dminus = inc.Dt - inc.Dh;
  const Eigen::MatrixXd dplus = inc.Dt + inc.Dh;
  const Eigen::MatrixXd id_arcs = Eigen::MatrixXd::Identity(na, na);
  const Eigen::MatrixXd zero_arcs = Eigen::MatrixXd::Zero(na, na);

  WalkProjection f1;
  f1.theta = 0.0;
  f1.source_eigenvalue = k;
  f1.re = 0.5 * (id_arcs - inc.R) -
          0.5 * dminus.transpose() * scatter(linv, mp.Sbar, g.n) * dminus;
  f1.im = zero_arcs;
  ws.projections.push_back(std::move(f1));

  WalkProjection fm1;
  fm1.theta = std::acos(-1.0);
  fm1.source_eigenvalue = -k;
  fm1.re = 0.5 * (id_arcs + inc.R) -
           0.5 * dplus.transpose() * scatter(qinv, mp.Sbar, g.n) * dplus;
  fm1.im = zero_arcs;
  ws.projections.push_back(std::move(fm1));

  for (int r = 0; r < ws.subgraph.size(); ++r) {
    const double lam = ws.subgraph.eigenvalues[r];
    const double c = lam / k;                 // cos theta_r; |lam| < k by interlacing
    const double s = std::sqrt(1.0 - c * c);  // sin theta_r > 0
    const Eigen::MatrixXd gr = scatter(ws.subgraph.projections[r], mp.Sbar, g.n);
    const Eigen::MatrixXd tt = inc.Dt.transpose() * gr * inc.Dt;
    const Eigen::MatrixXd hh = inc.Dh.transpose() * gr * inc.Dh;
    const Eigen::MatrixXd th = inc.Dt.transpose() * gr * inc.Dh;
    const Eigen::MatrixXd ht = inc.Dh.transpose() * gr * inc.Dt;
    const double scale = 1.0 / (2.0 * k * s * s);

    WalkProjection fp;
    fp.theta = std::acos(c);
    fp.source_eigenvalue = lam;
    fp.re = scale * (tt + hh - c * (th + ht));
    fp.im = scale * (s * (th - ht));
    WalkProjection fm = fp;
    fm.theta = -fp.theta;
    fm.im = -fp.im;
    ws.projections.push_back(std::move(fp));
    ws.projections.push_back(std::move(fm));
  }
  return ws;
}

struct MixingMatrix {
  enum class Route { time_average, projection_sum, closed_form };
  Eigen::MatrixXd Mhat;  // n x n, original vertex order, column stochastic
  Route route = Route::closed_form;
  std::vector<int> S, Sbar;

  Eigen::MatrixXd block_SS() const { return select(Mhat, S, S); }
  Eigen::MatrixXd block_SSbar() const { return select(Mhat, S, Sbar); }
  Eigen::MatrixXd block_SbarS() const { return select(Mhat, Sbar, S); }
  Eigen::MatrixXd block_SbarSbar() const { return select(Mhat, Sbar, Sbar); }
};

// Cesaro average over t = 0..T-1 of the vertex-level transfer probabilities,
// starting from (1/sqrt k) Dt^T e_v in column v.  This is the slow oracle the
// exact routes are checked against.
inline MixingMatrix mixing_time_average(const Graph& g, std::vector<int> S, long long T) {
  S = normalize_marked(g, S);
  if (!g.is_regular()) throw NotRegular("mixing matrix requires a regular graph");
  if (static_cast<int>(S.size()) == g.n) throw FullMarkedSet("all vertices are marked");
  if (T < 1) throw Error("time average requires T >= 1");

  const IncidenceSet inc = incidence_set(g);
  const TransitionMatrix tm = transition_matrix(g, S);
  const double k = g.regular_degree;

  Eigen::MatrixXd state = inc.Dt.transpose() / std::sqrt(k);  // arcs x n, real
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(g.n, g.n);
  for (long long t = 0; t < T; ++t) {
    acc += inc.Dt * state.cwiseProduct(state);
    state = tm.U * state;
  }

  MixingMatrix mm;
  mm.route = MixingMatrix::Route::time_average;
  mm.Mhat = acc / static_cast<double>(T);
  mm.S = S;
  const MarkedPartition mp = marked_partition(g, S);
  mm.Sbar = mp.Sbar;
  return mm;
}

// Exact limit from the eigenprojections:
//   Mhat_{u,v} = (1/k) sum_theta sum_{arcs a out of u} |(F_theta Dt^T e_v)_a|^2.
inline MixingMatrix mixing_projection_sum(const Graph& g, const WalkEigensystem& ws) {
  const IncidenceSet inc = incidence_set(g);
  const double k = ws.k;
  const Eigen::MatrixXd dtt = inc.Dt.transpose();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(g.n, g.n);
  for (const WalkProjection& f : ws.projections) {
    const Eigen::MatrixXd yre = f.re * dtt;
    const Eigen::MatrixXd yim = f.im * dtt;
    acc += inc.Dt * (yre.cwiseProduct(yre) + yim.cwiseProduct(yim));
  }
  MixingMatrix mm;
  mm.route = MixingMatrix::Route::projection_sum;
  mm.Mhat = acc / k;
  mm.S = ws.S;
  mm.Sbar = ws.Sbar;
  return mm;
}

inline MixingMatrix mixing_projection_sum(const Graph& g, std::vector<int> S) {
  return mixing_projection_sum(g, walk_eigensystem(g, std::move(S)));
}

// Closed form: Mhat = M1 + M-1 + sum_r Mr, assembled from the blocks of the
// marked partition and the spectral decomposition of A(X\S).  In (S, Sbar)
// block order, with P_L = L_Sbar^{-1} H^T and P_Q = Q_Sbar^{-1} H^T:
//   M1[S,S]      = (Q_S + H P_L^{o2} - 2 I o (H P_L)) / 4k      (o = entrywise)
//   M1[Sbar,S]   = (H^T - L_Sbar P_L^{o2}) / 4k
//   M-1[S,S]     = (Q_S + H P_Q^{o2} - 2 I o (H P_Q)) / 4k
//   M-1[Sbar,S]  = (H^T - L_Sbar P_Q^{o2}) / 4k
//   Mr[S,S]      = k H (G_r H^T)^{o2} / (2 (k^2-lam^2)^2)
//   Mr[S,Sbar]   = k H G_r^{o2} / (2 (k^2-lam^2))
//   Mr[Sbar,S]   = ((k^2-2 lam^2) I + k A_Sbar) (G_r H^T)^{o2} / (2 (k^2-lam^2)^2)
//   Mr[Sbar,Sbar]= ((k^2-2 lam^2) I + k A_Sbar) G_r^{o2} / (2 (k^2-lam^2))
inline MixingMatrix mixing_closed_form(const Graph& g, std::vector<int> S) {
  S = normalize_marked(g, S);
  require_proper_marked(g, S);

  const MarkedPartition mp = marked_partition(g, S);
  const SpectralDecomposition sd = eig_projections(mp.A_Sbar);
  const double k = g.regular_degree;
  const int ns = static_cast<int>(mp.S.size());
  const int nsb = static_cast<int>(mp.Sbar.size());

  const Eigen::MatrixXd id_sb = Eigen::MatrixXd::Identity(nsb, nsb);
  const Eigen::MatrixXd q_s =
      k * Eigen::MatrixXd::Identity(ns, ns) + mp.A_S;
  const Eigen::MatrixXd p_l = mp.L_Sbar.ldlt().solve(mp.H.transpose());
  const Eigen::MatrixXd p_q = mp.Q_Sbar.ldlt().solve(mp.H.transpose());
  const Eigen::MatrixXd p_l2 = p_l.cwiseProduct(p_l);
  const Eigen::MatrixXd p_q2 = p_q.cwiseProduct(p_q);

  Eigen::MatrixXd ss = q_s + mp.H * p_l2 + mp.H * p_q2;
  ss -= 2.0 * Eigen::MatrixXd((mp.H * p_l).diagonal().asDiagonal());
  ss -= 2.0 * Eigen::MatrixXd((mp.H * p_q).diagonal().asDiagonal());
  ss /= 4.0 * k;
  Eigen::MatrixXd sbs =
      (2.0 * mp.H.transpose() - mp.L_Sbar * p_l2 - mp.L_Sbar * p_q2) / (4.0 * k);
  Eigen::MatrixXd ssb = Eigen::MatrixXd::Zero(ns, nsb);
  Eigen::MatrixXd sbsb = Eigen::MatrixXd::Zero(nsb, nsb);

  for (int r = 0; r < sd.size(); ++r) {
    const double lam = sd.eigenvalues[r];
    const double gap = k * k - lam * lam;
    const Eigen::MatrixXd& gr = sd.projections[r];
    const Eigen::MatrixXd gh = gr * mp.H.transpose();
    const Eigen::MatrixXd gh2 = gh.cwiseProduct(gh);
    const Eigen::MatrixXd gr2 = gr.cwiseProduct(gr);
    const Eigen::MatrixXd lower = (k * k - 2.0 * lam * lam) * id_sb + k * mp.A_Sbar;
    ss += (k / (2.0 * gap * gap)) * (mp.H * gh2);
    ssb += (k / (2.0 * gap)) * (mp.H * gr2);
    sbs += (1.0 / (2.0 * gap * gap)) * (lower * gh2);
    sbsb += (1.0 / (2.0 * gap)) * (lower * gr2);
  }

  const std::vector<int> ord = mp.block_order();
  MixingMatrix mm;
  mm.route = MixingMatrix::Route::closed_form;
  mm.S = mp.S;
  mm.Sbar = mp.Sbar;
  mm.Mhat.resize(g.n, g.n);
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < ns; ++j) mm.Mhat(ord[i], ord[j]) = ss(i, j);
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nsb; ++j) mm.Mhat(ord[i], ord[ns + j]) = ssb(i, j);
  for (int i = 0; i < nsb; ++i)
    for (int j = 0; j < ns; ++j) mm.Mhat(ord[ns + i], ord[j]) = sbs(i, j);
  for (int i = 0; i < nsb; ++i)
    for (int j = 0; j < nsb; ++j) mm.Mhat(ord[ns + i], ord[ns + j]) = sbsb(i, j);
  return mm;
}

}  // namespace qwalk
