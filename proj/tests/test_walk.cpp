#include <cmath>
#include <complex>

#include <catch2/catch_amalgamated.hpp>

#include "qwalk/incidence.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/walk.hpp"
#include "suite.hpp"

using namespace qwalk;
using Catch::Matchers::WithinAbs;

namespace {

Eigen::MatrixXcd to_complex(const WalkProjection& f) {
  return f.re.cast<std::complex<double>>() +
         std::complex<double>(0, 1) * f.im.cast<std::complex<double>>();
}

// Hermitian operator norm.
double cnorm(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Orthogonal projector onto the numerical e^{i theta}-eigenspace of U.
Eigen::MatrixXcd numeric_phase_projector(const Eigen::MatrixXd& u, double theta) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(u);
  const std::complex<double> target(std::cos(theta), std::sin(theta));
  std::vector<int> cols;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i) - target) < 1e-6) cols.push_back(i);
  Eigen::MatrixXcd v(u.rows(), cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) v.col(i) = es.eigenvectors().col(cols[i]);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v, Eigen::ComputeThinU);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-9 * svd.singularValues()(0)) ++rank;
  Eigen::MatrixXcd q = svd.matrixU().leftCols(rank);
  return q * q.adjoint();
}

}  // namespace

TEST_CASE("transition matrix of K2 with vertex 0 marked") {
  const Graph k2 = build_graph(2, {{0, 1}});
  const TransitionMatrix tm = transition_matrix(k2, {0});
  Eigen::MatrixXd expected(2, 2);
  expected << 0, 1, -1, 0;  // arc order ((0,1),(1,0))
  CHECK(max_abs(tm.U - expected) == 0.0);
}

TEST_CASE("unmarked walk fixes the all-ones arc vector") {
  const Graph c4 = make_cycle(4);
  const TransitionMatrix tm = transition_matrix(c4, {});
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(c4.num_arcs());
  CHECK(max_abs(Eigen::MatrixXd(tm.U * ones - ones)) < 1e-14);
}

TEST_CASE("transition matrix is orthogonal and a product of two reflections") {
  for (const auto& inst : qwalk_test::standard_suite()) {
    INFO(inst.name);
    const Graph& g = inst.graph;
    const TransitionMatrix tm = transition_matrix(g, inst.marked);
    const int na = g.num_arcs();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(na, na);
    CHECK(max_abs(tm.U.transpose() * tm.U - id) < 1e-12);

    const IncidenceSet inc = incidence_set(g);
    const MarkedPartition mp = marked_partition(g, inst.marked);
    const Eigen::MatrixXd p1 = 0.5 * (id + inc.R);
    const Eigen::MatrixXd p2 =
        inc.Dt.transpose() * mp.O_S * inc.Dt / g.regular_degree;
    CHECK(max_abs(p1 * p1 - p1) < 1e-12);
    CHECK(max_abs(p2 * p2 - p2) < 1e-12);
    CHECK(max_abs((2.0 * p1 - id) * (2.0 * p2 - id) - tm.U) < 1e-12);
  }
}

TEST_CASE("transition matrix errors") {
  const Graph p3 = make_path(3);
  CHECK_THROWS_AS(transition_matrix(p3, {0}, CoinForm::regular), NotRegular);
  CHECK_NOTHROW(transition_matrix(p3, {0}));  // general-degree coin
  // Fully marked set: U = -R.
  const Graph c4 = make_cycle(4);
  const TransitionMatrix tm = transition_matrix(c4, {0, 1, 2, 3});
  CHECK(max_abs(tm.U + incidence_set(c4).R) == 0.0);
}

TEST_CASE("walk eigensystem of C4 with opposite marked vertices") {
  const Graph c4 = make_cycle(4);
  const WalkEigensystem ws = walk_eigensystem(c4, {0, 2});
  // Phases 1, -1, +-i, each of rank 2 (|E|-|V|+|S| = 2 and a doubly
  // degenerate zero eigenvalue of the deleted subgraph).
  REQUIRE(ws.projections.size() == 4);
  CHECK(ws.pm1_rank == 2);
  CHECK_THAT(ws.projections[0].theta, WithinAbs(0.0, 1e-15));
  CHECK_THAT(ws.projections[1].theta, WithinAbs(std::acos(-1.0), 1e-15));
  CHECK_THAT(ws.projections[2].theta, WithinAbs(std::acos(-1.0) / 2, 1e-12));
  CHECK_THAT(ws.projections[3].theta, WithinAbs(-std::acos(-1.0) / 2, 1e-12));
  for (const auto& f : ws.projections) CHECK(f.rank() == 2);
}

TEST_CASE("walk eigensystem of C5 with one marked vertex") {
  const WalkEigensystem ws = walk_eigensystem(make_cycle(5), {0});
  CHECK(ws.pm1_rank == 1);
  CHECK(ws.projections[0].rank() == 1);
  CHECK(ws.projections[1].rank() == 1);
}

TEST_CASE("walk eigensystem errors") {
  CHECK_THROWS_AS(walk_eigensystem(make_cycle(4), {}), EmptyMarkedSet);
  CHECK_THROWS_AS(walk_eigensystem(make_cycle(4), {0, 1, 2, 3}), FullMarkedSet);
  CHECK_THROWS_AS(walk_eigensystem(make_path(3), {0}), NotRegular);
}

TEST_CASE("walk eigensystem is a complete orthogonal resolution") {
  for (const auto& inst : qwalk_test::standard_suite()) {
    INFO(inst.name);
    const Graph& g = inst.graph;
    const WalkEigensystem ws = walk_eigensystem(g, inst.marked);
    const int na = g.num_arcs();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(na, na);

    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(na, na);
    Eigen::MatrixXcd recon = Eigen::MatrixXcd::Zero(na, na);
    int total_rank = 0;
    for (const auto& f : ws.projections) {
      const Eigen::MatrixXcd fc = to_complex(f);
      sum += fc;
      recon += f.eigenvalue() * fc;
      total_rank += f.rank();
      CHECK(max_abs(Eigen::MatrixXd(f.re - f.re.transpose())) < 1e-12);  // Hermitian
      CHECK(max_abs(Eigen::MatrixXd(f.im + f.im.transpose())) < 1e-12);
      CHECK(cnorm(fc * fc - fc) < 1e-9);  // idempotent
    }
    CHECK(cnorm(sum - id) < 1e-9);
    CHECK(total_rank == na);
    CHECK(ws.projections[0].rank() == ws.pm1_rank);
    CHECK(ws.projections[1].rank() == ws.pm1_rank);

    const TransitionMatrix tm = transition_matrix(g, inst.marked);
    CHECK(cnorm(recon - tm.U.cast<std::complex<double>>()) < 1e-9);
  }
}

TEST_CASE("walk eigensystem agrees with a direct eigendecomposition of U") {
  for (const auto& inst : qwalk_test::standard_suite()) {
    INFO(inst.name);
    const TransitionMatrix tm = transition_matrix(inst.graph, inst.marked);
    const WalkEigensystem ws = walk_eigensystem(inst.graph, inst.marked);
    for (const auto& f : ws.projections) {
      if (f.rank() == 0) continue;
      const Eigen::MatrixXcd p = numeric_phase_projector(tm.U, f.theta);
      CHECK(cnorm(p - to_complex(f)) < 1e-8);
    }
  }
}

TEST_CASE("time average of the K2 walk over a full period") {
  const Graph k2 = build_graph(2, {{0, 1}});
  // Period-4 dynamics: the average over T = 4m is exactly (1/2) J.
  for (long long T : {4, 8, 20}) {
    const MixingMatrix mm = mixing_time_average(k2, {0}, T);
    CHECK(max_abs(mm.Mhat - 0.5 * Eigen::MatrixXd::Ones(2, 2)) < 1e-14);
  }
}

TEST_CASE("time average is column stochastic") {
  const MixingMatrix mm = mixing_time_average(make_cycle(4), {0, 2}, 10000);
  for (int v = 0; v < 4; ++v) CHECK_THAT(mm.Mhat.col(v).sum(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("projection sum of the K2 walk") {
  const Graph k2 = build_graph(2, {{0, 1}});
  const MixingMatrix mm = mixing_projection_sum(k2, {0});
  CHECK(max_abs(mm.Mhat - 0.5 * Eigen::MatrixXd::Ones(2, 2)) < 1e-12);
}

TEST_CASE("mixing matrix of C4 with opposite marked vertices") {
  const Graph c4 = make_cycle(4);
  const MixingMatrix mm = mixing_projection_sum(c4, {0, 2});
  // Column of the unmarked vertex 1, in vertex order (0,1,2,3).
  CHECK_THAT(mm.Mhat(0, 1), WithinAbs(0.25, 1e-10));
  CHECK_THAT(mm.Mhat(1, 1), WithinAbs(0.5, 1e-10));
  CHECK_THAT(mm.Mhat(2, 1), WithinAbs(0.25, 1e-10));
  CHECK_THAT(mm.Mhat(3, 1), WithinAbs(0.0, 1e-12));  // vertex cut

  const MixingMatrix cf = mixing_closed_form(c4, {0, 2});
  CHECK(max_abs(cf.block_SbarSbar() - 0.5 * Eigen::MatrixXd::Identity(2, 2)) < 1e-12);
  CHECK(max_abs(cf.block_SSbar() - 0.25 * Eigen::MatrixXd::Ones(2, 2)) < 1e-12);
  CHECK(max_abs(cf.block_SS() - 0.25 * Eigen::MatrixXd::Ones(2, 2)) < 1e-12);
}

TEST_CASE("closed form is column stochastic with entries in [0,1]") {
  for (const auto& inst : qwalk_test::standard_suite()) {
    INFO(inst.name);
    const MixingMatrix mm = mixing_closed_form(inst.graph, inst.marked);
    for (int v = 0; v < inst.graph.n; ++v)
      CHECK_THAT(mm.Mhat.col(v).sum(), WithinAbs(1.0, 1e-10));
    CHECK(mm.Mhat.minCoeff() > -1e-10);
    CHECK(mm.Mhat.maxCoeff() < 1.0 + 1e-10);
  }
  const MixingMatrix c5 = mixing_closed_form(make_cycle(5), {0});
  for (int v = 0; v < 5; ++v) CHECK_THAT(c5.Mhat.col(v).sum(), WithinAbs(1.0, 1e-10));
}

TEST_CASE("triple-route agreement") {
  const long long T = 2000;
  for (const auto& inst : qwalk_test::standard_suite()) {
    INFO(inst.name);
    const MixingMatrix closed = mixing_closed_form(inst.graph, inst.marked);
    const MixingMatrix proj = mixing_projection_sum(inst.graph, inst.marked);
    const MixingMatrix avg = mixing_time_average(inst.graph, inst.marked, T);
    CHECK(max_abs(closed.Mhat - proj.Mhat) < 1e-9);
    CHECK(max_abs(avg.Mhat - proj.Mhat) < 5.0 / T);
  }
}

TEST_CASE("plus-minus-one eigenspaces ignore unmarked starts") {
  for (const auto& inst : qwalk_test::standard_suite()) {
    INFO(inst.name);
    const WalkEigensystem ws = walk_eigensystem(inst.graph, inst.marked);
    const IncidenceSet inc = incidence_set(inst.graph);
    for (int i = 0; i < 2; ++i) {
      const Eigen::MatrixXd y = ws.projections[i].re * inc.Dt.transpose();
      for (int v : ws.Sbar) CHECK(y.col(v).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("strongly cospectral unmarked vertices share mixing columns") {
  // In C4 \ {0} = P3 the endpoints 1 and 3 are strongly cospectral.
  const MixingMatrix mm = mixing_closed_form(make_cycle(4), {0});
  CHECK(max_abs(Eigen::MatrixXd(mm.Mhat.col(1) - mm.Mhat.col(3))) < 1e-9);
}

TEST_CASE("vertex cuts zero out cross-component transfer") {
  struct Case {
    Graph g;
    std::vector<int> s;
    std::vector<std::pair<int, int>> pairs;
  };
  const std::vector<Case> cases = {
      {make_cycle(4), {0, 2}, {{1, 3}}},
      {make_cycle(6), {0, 3}, {{1, 4}, {1, 5}, {2, 4}, {2, 5}}},
  };
  for (const auto& c : cases) {
    const MixingMatrix mm = mixing_closed_form(c.g, c.s);
    const IncidenceSet inc = incidence_set(c.g);
    const TransitionMatrix tm = transition_matrix(c.g, c.s);
    const double k = c.g.regular_degree;
    for (auto [u, v] : c.pairs) {
      CHECK(std::abs(mm.Mhat(u, v)) < 1e-12);
      CHECK(std::abs(mm.Mhat(v, u)) < 1e-12);
      // The instantaneous probabilities vanish as well.
      Eigen::VectorXd x = inc.Dt.transpose().col(v) / std::sqrt(k);
      for (int t = 0; t <= 50; ++t) {
        const Eigen::VectorXd probs = inc.Dt * x.cwiseProduct(x);
        CHECK(std::abs(probs(u)) < 1e-12);
        x = tm.U * x;
      }
    }
  }
}

TEST_CASE("time-average horizon validation") {
  CHECK_THROWS_AS(mixing_time_average(make_cycle(4), {0}, 0), Error);
  // The empty marked set is supported by the time-average route.
  CHECK_NOTHROW(mixing_time_average(make_cycle(4), {}, 10));
}
