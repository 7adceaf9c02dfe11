#pragma once

// Walk-equitable collections, cospectrality, the entrywise bounds on the
// marked and unmarked blocks of the average vertex mixing matrix with their
// tightness certificates, and the symmetric / PSD / uniform classification
// of the marked block.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/marked.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

using MatrixXll = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// Walk matrix relative to T: columns z, Az, ..., A^{n-1}z where z is the
// characteristic vector of T.  Exact integer arithmetic; throws on overflow.
inline MatrixXll walk_matrix(const Eigen::MatrixXd& adjY, const std::vector<int>& T) {
  const int n = static_cast<int>(adjY.rows());
  for (int v : T)
    if (v < 0 || v >= n) throw InvalidVertex("walk_matrix: vertex out of range");

  std::vector<__int128> z(n, 0);
  for (int v : T) z[v] = 1;
  MatrixXll w(n, n);
  for (int m = 0; m < n; ++m) {
    for (int i = 0; i < n; ++i) {
      if (z[i] > std::numeric_limits<long long>::max() ||
          z[i] < std::numeric_limits<long long>::min())
        throw Error("walk_matrix: entry overflows 64-bit integers");
      w(i, m) = static_cast<long long>(z[i]);
    }
    if (m + 1 == n) break;
    std::vector<__int128> next(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (adjY(i, j) != 0.0) next[i] += z[j];
    z = std::move(next);
  }
  return w;
}

enum class EquitMethod { walk_matrix, eigenprojection };

struct WalkEquitWitness {
  int power_or_proj = 0;  // walk length m, or eigenprojection index r
  int u = 0, v = 0;       // two vertices of the same collection element
  int set_index = 0;      // the target subset S_j they disagree on
};

struct WalkEquitReport {
  std::vector<std::vector<int>> collection;
  bool equitable = true;
  std::optional<WalkEquitWitness> witness;
  EquitMethod method = EquitMethod::eigenprojection;
};

// A collection of vertex subsets is walk-equitable when the number of
// length-m walks from a vertex of S_i to S_j depends only on (i, j, m).
// The walk-matrix method checks all m = 0..n-1 exactly over the integers
// (capped at n <= 25); the eigenprojection method checks that each G_r z_j
// is constant on every S_i.
inline WalkEquitReport is_walk_equitable(const Eigen::MatrixXd& adjY,
                                         const std::vector<std::vector<int>>& collection,
                                         EquitMethod method = EquitMethod::eigenprojection,
                                         double tol = 1e-9) {
  const int n = static_cast<int>(adjY.rows());
  if (collection.empty()) throw Error("is_walk_equitable: empty collection");
  for (const auto& s : collection)
    for (int v : s)
      if (v < 0 || v >= n) throw InvalidVertex("is_walk_equitable: vertex out of range");

  WalkEquitReport rep;
  rep.collection = collection;
  rep.method = method;

  auto find_nonconstant = [&](auto value_at, int tag, int j) -> bool {
    for (std::size_t i = 0; i < collection.size(); ++i) {
      const auto& si = collection[i];
      for (std::size_t t = 1; t < si.size(); ++t) {
        if (!value_at(si[0], si[t])) {
          rep.equitable = false;
          rep.witness = WalkEquitWitness{tag, si[0], si[t], j};
          return true;
        }
      }
    }
    return false;
  };

  if (method == EquitMethod::walk_matrix) {
    if (n > 25)
      throw Error("is_walk_equitable: exact walk-matrix method is capped at 25 vertices; "
                  "use the eigenprojection method");
    for (std::size_t j = 0; j < collection.size(); ++j) {
      std::vector<__int128> z(n, 0);
      for (int v : collection[j]) z[v] = 1;
      for (int m = 0; m < n; ++m) {
        auto same = [&](int u, int v) { return z[u] == z[v]; };
        if (find_nonconstant(same, m, static_cast<int>(j))) return rep;
        if (m + 1 == n) break;
        std::vector<__int128> next(n, 0);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            if (adjY(a, b) != 0.0) next[a] += z[b];
        z = std::move(next);
      }
    }
  } else {
    const SpectralDecomposition sd = eig_projections(adjY);
    for (int r = 0; r < sd.size(); ++r) {
      for (std::size_t j = 0; j < collection.size(); ++j) {
        Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
        for (int v : collection[j]) z(v) = 1.0;
        const Eigen::VectorXd w = sd.projections[r] * z;
        auto same = [&](int u, int v) { return std::abs(w(u) - w(v)) <= tol; };
        if (find_nonconstant(same, r, static_cast<int>(j))) return rep;
      }
    }
  }
  return rep;
}

// Walk-equitability of the marked neighborhoods {N(a)\S : a in S} inside the
// vertex-deleted subgraph X\S.  The report speaks in original vertex labels.
inline WalkEquitReport neighborhoods_walk_equitable(
    const Graph& g, const std::vector<int>& S,
    EquitMethod method = EquitMethod::eigenprojection) {
  const std::vector<int> sn = normalize_marked(g, S);
  if (sn.empty()) throw EmptyMarkedSet("neighborhoods_walk_equitable: empty marked set");
  if (static_cast<int>(sn.size()) == g.n)
    throw FullMarkedSet("neighborhoods_walk_equitable: all vertices marked");
  const MarkedPartition mp = marked_partition(g, sn);

  std::vector<int> pos(g.n, -1);
  for (std::size_t i = 0; i < mp.Sbar.size(); ++i) pos[mp.Sbar[i]] = static_cast<int>(i);

  std::vector<std::vector<int>> collection;
  for (int a : mp.S) {
    std::vector<int> nb;
    for (int w : g.adj[a])
      if (pos[w] >= 0) nb.push_back(pos[w]);
    if (std::find(collection.begin(), collection.end(), nb) == collection.end())
      collection.push_back(std::move(nb));
  }

  WalkEquitReport rep = is_walk_equitable(mp.A_Sbar, collection, method);
  for (auto& s : rep.collection)
    for (int& v : s) v = mp.Sbar[v];
  if (rep.witness) {
    rep.witness->u = mp.Sbar[rep.witness->u];
    rep.witness->v = mp.Sbar[rep.witness->v];
  }
  return rep;
}

struct BoundReport {
  enum class Side { lower, upper };
  Side side = Side::lower;
  Eigen::MatrixXd bound;   // same shape as the target block
  Eigen::MatrixXd target;  // the block of Mhat being bounded
  Eigen::MatrixXd gap;     // target - bound, entrywise signed
  bool tight = false;            // ||gap||_inf <= tol
  bool predicted_tight = false;  // the theorem's combinatorial condition
  double tol = 1e-8;
};

namespace detail {

// Moore-Penrose inverse of a diagonal matrix: reciprocal on nonzero entries.
inline Eigen::MatrixXd diag_pinv(const Eigen::MatrixXd& d) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d.rows(), d.cols());
  for (int i = 0; i < d.rows(); ++i)
    if (d(i, i) != 0.0) out(i, i) = 1.0 / d(i, i);
  return out;
}

inline BoundReport finish_bound(BoundReport rep) {
  rep.gap = rep.side == BoundReport::Side::lower ? Eigen::MatrixXd(rep.target - rep.bound)
                                                 : Eigen::MatrixXd(rep.bound - rep.target);
  rep.tight = max_abs(rep.gap) <= rep.tol;
  return rep;
}

}  // namespace detail

// Lower bound on Mhat[S,S]: determined by the induced subgraph X[S], the
// vertex-deleted subgraph X\S and the edge-deleted subgraph X - E(S).
// Tight exactly when the marked neighborhoods are walk-equitable in X\S.
inline BoundReport mss_lower_bound(const Graph& g, const std::vector<int>& S) {
  const std::vector<int> sn = normalize_marked(g, S);
  require_proper_marked(g, sn);
  const MarkedPartition mp = marked_partition(g, sn);
  const SpectralDecomposition sd = eig_projections(mp.A_Sbar);
  const double k = g.regular_degree;
  const int ns = static_cast<int>(mp.S.size());

  const Eigen::MatrixXd dag = detail::diag_pinv(mp.DeltaSSbar);
  Eigen::MatrixXd delta_ss = Eigen::MatrixXd::Zero(ns, ns);
  for (int i = 0; i < ns; ++i) delta_ss(i, i) = mp.A_S.row(i).sum();
  const Eigen::MatrixXd q_induced = delta_ss + mp.A_S;  // signless Laplacian of X[S]

  Eigen::MatrixXd bound = q_induced / (2.0 * k);
  for (int r = 0; r < sd.size(); ++r) {
    const double gap = k * k - sd.eigenvalues[r] * sd.eigenvalues[r];
    const Eigen::MatrixXd hgh = mp.H * sd.projections[r] * mp.H.transpose();
    bound += (k / (2.0 * gap * gap)) * (dag * hgh.cwiseProduct(hgh));
  }
  // Schur complements of the edge-deleted subgraph's (signless) Laplacians.
  const Eigen::MatrixXd schur_l =
      mp.DeltaSSbar - mp.H * mp.L_Sbar.ldlt().solve(mp.H.transpose());
  const Eigen::MatrixXd schur_q =
      mp.DeltaSSbar - mp.H * mp.Q_Sbar.ldlt().solve(mp.H.transpose());
  bound += dag * (schur_l.cwiseProduct(schur_l) + schur_q.cwiseProduct(schur_q)) / (4.0 * k);

  BoundReport rep;
  rep.side = BoundReport::Side::lower;
  rep.bound = bound;
  rep.target = mixing_closed_form(g, sn).block_SS();
  rep.predicted_tight = neighborhoods_walk_equitable(g, sn).equitable;
  return detail::finish_bound(std::move(rep));
}

// Upper bound on Mhat[S,S]; tight exactly when every marked vertex has at
// most one unmarked neighbor.
inline BoundReport mss_upper_bound(const Graph& g, const std::vector<int>& S) {
  const std::vector<int> sn = normalize_marked(g, S);
  require_proper_marked(g, sn);
  const MarkedPartition mp = marked_partition(g, sn);
  const SpectralDecomposition sd = eig_projections(mp.A_Sbar);
  const double k = g.regular_degree;
  const int ns = static_cast<int>(mp.S.size());
  const int nsb = static_cast<int>(mp.Sbar.size());

  const Eigen::MatrixXd id_s = Eigen::MatrixXd::Identity(ns, ns);
  const Eigen::MatrixXd id_sb = Eigen::MatrixXd::Identity(nsb, nsb);
  const Eigen::MatrixXd l_s = k * id_s - mp.A_S;
  const Eigen::MatrixXd q_s = k * id_s + mp.A_S;
  const Eigen::MatrixXd linv = mp.L_Sbar.ldlt().solve(id_sb);
  const Eigen::MatrixXd qinv = mp.Q_Sbar.ldlt().solve(id_sb);
  const Eigen::MatrixXd l_schur = l_s - mp.H * linv * mp.H.transpose();
  const Eigen::MatrixXd q_schur = q_s - mp.H * qinv * mp.H.transpose();

  Eigen::MatrixXd bound =
      Eigen::MatrixXd((l_schur + q_schur).diagonal().asDiagonal()) / (2.0 * k) -
      l_s / (2.0 * k);
  Eigen::MatrixXd gsum = Eigen::MatrixXd::Zero(nsb, nsb);
  for (int r = 0; r < sd.size(); ++r) {
    const double gap = k * k - sd.eigenvalues[r] * sd.eigenvalues[r];
    gsum += sd.projections[r].cwiseProduct(sd.projections[r]) / (gap * gap);
  }
  bound += (k / 2.0) * mp.H * gsum * mp.H.transpose() * mp.DeltaSSbar;
  bound += (mp.H * (linv.cwiseProduct(linv) + qinv.cwiseProduct(qinv)) * mp.H.transpose() *
            mp.DeltaSSbar) /
           (4.0 * k);

  BoundReport rep;
  rep.side = BoundReport::Side::upper;
  rep.bound = bound;
  rep.target = mixing_closed_form(g, sn).block_SS();
  rep.predicted_tight = mp.DeltaSSbar.diagonal().maxCoeff() <= 1.0;
  return detail::finish_bound(std::move(rep));
}

// Lower bound on Mhat[Sbar,Sbar], from the summation form; tight exactly
// when X\S is a disjoint union of edges and isolated vertices.
inline BoundReport msbar_lower_bound(const Graph& g, const std::vector<int>& S) {
  const std::vector<int> sn = normalize_marked(g, S);
  require_proper_marked(g, sn);
  const MarkedPartition mp = marked_partition(g, sn);
  const SpectralDecomposition sd = eig_projections(mp.A_Sbar);
  const double k = g.regular_degree;
  const int nsb = static_cast<int>(mp.Sbar.size());

  const Eigen::MatrixXd dag = detail::diag_pinv(mp.DeltaSbarSbar);
  Eigen::MatrixXd bound = Eigen::MatrixXd::Zero(nsb, nsb);
  for (int r = 0; r < sd.size(); ++r) {
    const double lam = sd.eigenvalues[r];
    const double gap = k * k - lam * lam;
    const Eigen::MatrixXd g2 = sd.projections[r].cwiseProduct(sd.projections[r]);
    bound += ((k * k - 2.0 * lam * lam) * g2 + k * lam * lam * (dag * g2)) / (2.0 * gap);
  }

  BoundReport rep;
  rep.side = BoundReport::Side::lower;
  rep.bound = bound;
  rep.target = mixing_closed_form(g, sn).block_SbarSbar();
  rep.predicted_tight =
      nsb == 0 || mp.DeltaSbarSbar.diagonal().maxCoeff() <= 1.0;
  return detail::finish_bound(std::move(rep));
}

// Average return probability bounds for a single marked vertex.  The lower
// bound is computed in three algebraically equivalent forms (eigenvalue sums,
// projected all-ones Grams, and the inverse of the signless Laplacian of the
// deleted subgraph); the simplified bound drops the eigenvalue weights.
struct ReturnProbabilityBounds {
  BoundReport lower, upper;  // 1x1 target Mhat_{a,a}
  double lower_eigenvalue_form = 0.0;
  double lower_gram_form = 0.0;
  double lower_inverse_form = 0.0;
  double simplified_lower = 0.0;
  bool bipartite_branch = false;
};

inline ReturnProbabilityBounds return_probability_bounds(const Graph& g, int a) {
  const std::vector<int> sn = normalize_marked(g, {a});
  require_proper_marked(g, sn);
  const MarkedPartition mp = marked_partition(g, sn);
  const SpectralDecomposition sd = eig_projections(mp.A_Sbar);
  const double k = g.regular_degree;
  const int nsb = static_cast<int>(mp.Sbar.size());
  const Eigen::MatrixXd id_sb = Eigen::MatrixXd::Identity(nsb, nsb);
  const Eigen::VectorXd z = mp.H.transpose().col(0);  // characteristic vector of N(a)
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(nsb);
  const Eigen::MatrixXd linv = mp.L_Sbar.ldlt().solve(id_sb);
  const Eigen::MatrixXd qinv = mp.Q_Sbar.ldlt().solve(id_sb);

  ReturnProbabilityBounds out;
  out.bipartite_branch = g.bipartite;

  double extra = 0.0, q_aa_inv = 0.0;
  if (!g.bipartite) {
    // Q(X) is invertible on a non-bipartite graph; only its aa-entry enters.
    Eigen::VectorXd ea = Eigen::VectorXd::Zero(g.n);
    ea(a) = 1.0;
    q_aa_inv = g.signless_laplacian().ldlt().solve(ea)(a);
    extra = 1.0 / (4.0 * k * k * q_aa_inv * q_aa_inv);
  }

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(nsb, nsb);          // sum_r G_r J G_r
  Eigen::MatrixXd gram_weighted = Eigen::MatrixXd::Zero(nsb, nsb); // / (k+lam)^2
  Eigen::MatrixXd g2sum = Eigen::MatrixXd::Zero(nsb, nsb);         // G_r^{o2} / gap^2
  double eig_form = 0.0;
  for (int r = 0; r < sd.size(); ++r) {
    const double lam = sd.eigenvalues[r];
    const double gap = k * k - lam * lam;
    const Eigen::VectorXd g1 = sd.projections[r] * ones;
    const double elsm = z.dot(sd.projections[r] * z);
    eig_form += elsm * elsm / (gap * gap);
    gram += g1 * g1.transpose();
    gram_weighted += (g1 * g1.transpose()) / ((k + lam) * (k + lam));
    g2sum += sd.projections[r].cwiseProduct(sd.projections[r]) / (gap * gap);
  }
  out.lower_eigenvalue_form = 0.5 * eig_form + extra;
  out.lower_gram_form = 0.5 * z.dot(gram_weighted * z) + extra;
  out.lower_inverse_form = 0.5 * z.dot(qinv * gram * qinv * z) + extra;
  out.simplified_lower = z.dot(gram * z) / (8.0 * k * k) + extra;

  double upper;
  if (g.bipartite) {
    upper = 0.5 * z.dot((k * k * g2sum + linv.cwiseProduct(linv)) * z);
  } else {
    upper = 0.25 * z.dot((2.0 * k * k * g2sum + linv.cwiseProduct(linv) +
                          qinv.cwiseProduct(qinv)) *
                         z) +
            1.0 / (2.0 * k * q_aa_inv);
  }

  const double target = mixing_closed_form(g, sn).Mhat(a, a);
  out.lower.side = BoundReport::Side::lower;
  out.lower.bound = Eigen::MatrixXd::Constant(1, 1, out.lower_eigenvalue_form);
  out.lower.target = Eigen::MatrixXd::Constant(1, 1, target);
  out.lower.predicted_tight = neighborhoods_walk_equitable(g, sn).equitable;
  out.lower = detail::finish_bound(std::move(out.lower));

  out.upper.side = BoundReport::Side::upper;
  out.upper.bound = Eigen::MatrixXd::Constant(1, 1, upper);
  out.upper.target = Eigen::MatrixXd::Constant(1, 1, target);
  out.upper.predicted_tight = g.regular_degree == 1;  // only K2
  out.upper = detail::finish_bound(std::move(out.upper));
  return out;
}

// Two vertices are strongly cospectral when every eigenprojection maps their
// characteristic vectors to plus or minus each other.
inline bool strongly_cospectral(const Eigen::MatrixXd& adjY, int u, int v, double tol = 1e-9) {
  const int n = static_cast<int>(adjY.rows());
  if (u < 0 || u >= n || v < 0 || v >= n)
    throw InvalidVertex("strongly_cospectral: vertex out of range");
  const SpectralDecomposition sd = eig_projections(adjY);
  for (int r = 0; r < sd.size(); ++r) {
    const Eigen::VectorXd x = sd.projections[r].col(u);
    const Eigen::VectorXd y = sd.projections[r].col(v);
    if (std::min((x - y).cwiseAbs().maxCoeff(), (x + y).cwiseAbs().maxCoeff()) > tol)
      return false;
  }
  return true;
}

// Marked vertices a, b are neighborhood-strongly-cospectral in X\S when the
// characteristic vectors of N(a)\S and N(b)\S are strongly cospectral there:
// G_r H^T e_a = +- G_r H^T e_b for every r.
inline bool neighborhood_strongly_cospectral(const Graph& g, const std::vector<int>& S, int a,
                                             int b, double tol = 1e-9) {
  const std::vector<int> sn = normalize_marked(g, S);
  const auto ia = std::lower_bound(sn.begin(), sn.end(), a);
  const auto ib = std::lower_bound(sn.begin(), sn.end(), b);
  if (ia == sn.end() || *ia != a || ib == sn.end() || *ib != b)
    throw InvalidVertex("neighborhood_strongly_cospectral: vertex not marked");
  const MarkedPartition mp = marked_partition(g, sn);
  const SpectralDecomposition sd = eig_projections(mp.A_Sbar);
  const Eigen::VectorXd za = mp.H.row(ia - sn.begin()).transpose();
  const Eigen::VectorXd zb = mp.H.row(ib - sn.begin()).transpose();
  for (int r = 0; r < sd.size(); ++r) {
    const Eigen::VectorXd x = sd.projections[r] * za;
    const Eigen::VectorXd y = sd.projections[r] * zb;
    if (std::min((x - y).cwiseAbs().maxCoeff(), (x + y).cwiseAbs().maxCoeff()) > tol)
      return false;
  }
  return true;
}

// S is degree-separating in X\S when marked vertices with different unmarked
// degree have their unmarked neighborhoods in disjoint components of X\S.
inline bool degree_separating(const Graph& g, const std::vector<int>& S) {
  const MarkedPartition mp = marked_partition(g, S);
  const std::vector<int> comp = induced_components(g, mp.Sbar);
  std::vector<int> pos(g.n, -1);
  for (std::size_t i = 0; i < mp.Sbar.size(); ++i) pos[mp.Sbar[i]] = static_cast<int>(i);

  std::vector<std::vector<int>> comps_of(mp.S.size());
  std::vector<int> unmarked_deg(mp.S.size(), 0);
  for (std::size_t i = 0; i < mp.S.size(); ++i) {
    for (int w : g.adj[mp.S[i]]) {
      if (pos[w] < 0) continue;
      ++unmarked_deg[i];
      comps_of[i].push_back(comp[pos[w]]);
    }
    std::sort(comps_of[i].begin(), comps_of[i].end());
    comps_of[i].erase(std::unique(comps_of[i].begin(), comps_of[i].end()), comps_of[i].end());
  }
  for (std::size_t i = 0; i < mp.S.size(); ++i)
    for (std::size_t j = i + 1; j < mp.S.size(); ++j) {
      if (unmarked_deg[i] == unmarked_deg[j]) continue;
      std::vector<int> common;
      std::set_intersection(comps_of[i].begin(), comps_of[i].end(), comps_of[j].begin(),
                            comps_of[j].end(), std::back_inserter(common));
      if (!common.empty()) return false;
    }
  return true;
}

inline bool is_odd_cycle_graph(const Graph& g) {
  return g.regular_degree == 2 && g.n % 2 == 1;
}

struct MssClassification {
  // Numerical flags of Mhat[S,S] (tolerance 1e-9).
  bool symmetric = false;
  bool psd = false;
  bool uniform = false;
  // Combinatorial / spectral conditions.
  bool degree_separating = false;
  bool walk_equitable = false;
  bool neighborhood_strongly_cospectral = false;  // all pairs in S
  // Whenever the walk-equitable precondition holds, the numerical flags must
  // match the predicted equivalences.
  bool theorem_consistent = false;
};

inline MssClassification classify_mss(const Graph& g, const std::vector<int>& S,
                                      double tol = 1e-9) {
  const std::vector<int> sn = normalize_marked(g, S);
  require_proper_marked(g, sn);
  const Eigen::MatrixXd mss = mixing_closed_form(g, sn).block_SS();

  MssClassification cls;
  cls.symmetric = max_abs(mss - mss.transpose()) <= tol;
  if (cls.symmetric) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (mss + mss.transpose()),
                                                      Eigen::EigenvaluesOnly);
    cls.psd = es.eigenvalues().minCoeff() >= -tol;
  }
  double lo = mss.minCoeff(), hi = mss.maxCoeff();
  cls.uniform = hi - lo <= tol;

  cls.degree_separating = degree_separating(g, sn);
  cls.walk_equitable = neighborhoods_walk_equitable(g, sn).equitable;
  cls.neighborhood_strongly_cospectral = true;
  for (std::size_t i = 0; i < sn.size() && cls.neighborhood_strongly_cospectral; ++i)
    for (std::size_t j = i + 1; j < sn.size(); ++j)
      if (!neighborhood_strongly_cospectral(g, sn, sn[i], sn[j])) {
        cls.neighborhood_strongly_cospectral = false;
        break;
      }

  cls.theorem_consistent = true;
  if (cls.walk_equitable) {
    const bool tri_ok = cls.symmetric == cls.psd && cls.psd == cls.degree_separating;
    bool uniform_ok = true;
    if (sn.size() >= 2) {
      const bool predicted_uniform = sn.size() == 2 &&
                                     (is_odd_cycle_graph(g) || g.bipartite) &&
                                     cls.neighborhood_strongly_cospectral;
      uniform_ok = cls.uniform == predicted_uniform;
    }
    cls.theorem_consistent = tri_ok && uniform_ok;
  }
  return cls;
}

// Verifies that perm is an automorphism of g fixing S, then checks that the
// mixing matrix commutes with it: Mhat(perm u, perm v) = Mhat(u, v).
inline bool automorphism_check(const Graph& g, const std::vector<int>& S,
                               const std::vector<int>& perm,
                               std::pair<int, int>* witness = nullptr,
                               double tol = 1e-10) {
  if (static_cast<int>(perm.size()) != g.n)
    throw NotAutomorphism("permutation has wrong size");
  std::vector<char> seen(g.n, 0);
  for (int v : perm) {
    if (v < 0 || v >= g.n || seen[v]) throw NotAutomorphism("not a permutation of the vertices");
    seen[v] = 1;
  }
  for (const auto& [u, v] : g.edges)
    if (g.edge_index(perm[u], perm[v]) < 0)
      throw NotAutomorphism("edge {" + std::to_string(u) + "," + std::to_string(v) +
                            "} is not preserved");
  const std::vector<int> sn = normalize_marked(g, S);
  std::vector<int> image;
  for (int v : sn) image.push_back(perm[v]);
  std::sort(image.begin(), image.end());
  if (image != sn) throw DoesNotFixS("permutation does not fix the marked set");

  const Eigen::MatrixXd mhat = mixing_closed_form(g, sn).Mhat;
  for (int u = 0; u < g.n; ++u)
    for (int v = 0; v < g.n; ++v)
      if (std::abs(mhat(perm[u], perm[v]) - mhat(u, v)) > tol) {
        if (witness) *witness = {u, v};
        return false;
      }
  return true;
}

}  // namespace qwalk
