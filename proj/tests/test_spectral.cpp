#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "qwalk/graph.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/spectral.hpp"
#include "suite.hpp"

using namespace qwalk;
using Catch::Matchers::WithinAbs;

namespace {

// Random symmetric positive definite matrix (Gram of a random square factor
// plus a small ridge), reproducible.
Eigen::MatrixXd random_spd(int n, std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd f(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f(i, j) = gauss(rng);
  return f * f.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
}

void check_projection_invariants(const Eigen::MatrixXd& m, const SpectralDecomposition& sd) {
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  int total_rank = 0;
  for (int r = 0; r < sd.size(); ++r) {
    sum += sd.projections[r];
    total_rank += sd.multiplicity(r);
    for (int s = 0; s < sd.size(); ++s) {
      const Eigen::MatrixXd prod = sd.projections[r] * sd.projections[s];
      if (r == s)
        CHECK(max_abs(prod - sd.projections[r]) < 1e-9);
      else
        CHECK(max_abs(prod) < 1e-9);
    }
  }
  CHECK(max_abs(sum - Eigen::MatrixXd::Identity(n, n)) < 1e-10);
  CHECK(max_abs(sd.reconstruct() - m) < 1e-9);
  CHECK(total_rank == n);
}

}  // namespace

TEST_CASE("eig_projections on the identity") {
  SpectralDecomposition sd = eig_projections(Eigen::MatrixXd::Identity(3, 3));
  REQUIRE(sd.size() == 1);
  CHECK_THAT(sd.eigenvalues[0], WithinAbs(1.0, 1e-14));
  CHECK(max_abs(sd.projections[0] - Eigen::MatrixXd::Identity(3, 3)) < 1e-14);
  CHECK(sd.multiplicity(0) == 3);
}

TEST_CASE("eig_projections of the path on three vertices") {
  // Path eigenvalues are 2 cos(j pi / 4): sqrt(2), 0, -sqrt(2).
  const Eigen::MatrixXd a = make_path(3).adjacency();
  SpectralDecomposition sd = eig_projections(a);
  REQUIRE(sd.size() == 3);
  CHECK_THAT(sd.eigenvalues[0], WithinAbs(std::sqrt(2.0), 1e-12));
  CHECK_THAT(sd.eigenvalues[1], WithinAbs(0.0, 1e-12));
  CHECK_THAT(sd.eigenvalues[2], WithinAbs(-std::sqrt(2.0), 1e-12));
  for (int r = 0; r < 3; ++r) CHECK(sd.multiplicity(r) == 1);
  check_projection_invariants(a, sd);
}

TEST_CASE("eig_projections of the 4-cycle") {
  // Cycle eigenvalues 2 cos(2 pi j / 4): {2, 0, 0, -2}.
  const Eigen::MatrixXd a = make_cycle(4).adjacency();
  SpectralDecomposition sd = eig_projections(a);
  REQUIRE(sd.size() == 3);
  CHECK_THAT(sd.eigenvalues[0], WithinAbs(2.0, 1e-12));
  CHECK_THAT(sd.eigenvalues[1], WithinAbs(0.0, 1e-12));
  CHECK_THAT(sd.eigenvalues[2], WithinAbs(-2.0, 1e-12));
  CHECK(sd.multiplicity(0) == 1);
  CHECK(sd.multiplicity(1) == 2);
  CHECK(sd.multiplicity(2) == 1);
  check_projection_invariants(a, sd);
}

TEST_CASE("eig_projections invariants on the suite subgraphs and random matrices") {
  std::mt19937 rng(20240811);
  for (int n : {1, 2, 5, 9}) {
    Eigen::MatrixXd m = random_spd(n, rng);
    check_projection_invariants(m, eig_projections(m));
  }
  for (const auto& inst : qwalk_test::standard_suite()) {
    const Eigen::MatrixXd a = inst.graph.adjacency();
    check_projection_invariants(a, eig_projections(a));
  }
}

TEST_CASE("eigenvalue grouping merges near-degenerate pairs") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0 + 1e-12;
  m(2, 2) = 2.0;
  SpectralDecomposition sd = eig_projections(m);
  REQUIRE(sd.size() == 2);
  CHECK(sd.multiplicity(1) == 2);  // the two near-1 eigenvalues merged

  // With a tiny explicit tolerance the pair stays split.
  SpectralDecomposition split = eig_projections(m, 1e-14);
  CHECK(split.size() == 3);
}

TEST_CASE("eig_projections rejects non-symmetric input") {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS_AS(eig_projections(m), NotSymmetric);
  CHECK_THROWS_AS(eig_projections(Eigen::MatrixXd::Zero(2, 3)), NotSymmetric);
}

TEST_CASE("eig_projections is permutation-equivariant") {
  std::mt19937 rng(7);
  Eigen::MatrixXd m = random_spd(6, rng);
  std::vector<int> pi = {2, 0, 5, 1, 4, 3};
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(6, 6);
  for (int i = 0; i < 6; ++i) p(pi[i], i) = 1.0;
  SpectralDecomposition sd = eig_projections(m);
  SpectralDecomposition sdp = eig_projections(Eigen::MatrixXd(p.transpose() * m * p));
  REQUIRE(sd.size() == sdp.size());
  for (int r = 0; r < sd.size(); ++r) {
    CHECK_THAT(sd.eigenvalues[r], WithinAbs(sdp.eigenvalues[r], 1e-10));
    CHECK(max_abs(Eigen::MatrixXd(p.transpose() * sd.projections[r] * p) -
                  sdp.projections[r]) < 1e-9);
  }
}

TEST_CASE("schur complement of a 2x2 matrix is a - bc/d") {
  Eigen::MatrixXd m(2, 2);
  m << 3.0, 4.0, 5.0, 2.0;
  Eigen::MatrixXd s = schur_complement(m, {1});
  REQUIRE(s.rows() == 1);
  CHECK_THAT(s(0, 0), WithinAbs(3.0 - 4.0 * 5.0 / 2.0, 1e-14));
}

TEST_CASE("Laplacian Schur complement onto one vertex vanishes") {
  const Graph c4 = make_cycle(4);
  Eigen::MatrixXd s = schur_complement(c4.laplacian(), {1, 2, 3});
  REQUIRE(s.rows() == 1);
  CHECK_THAT(s(0, 0), WithinAbs(0.0, 1e-12));
}

TEST_CASE("signless Laplacian Schur complement equals the inverse entry") {
  // For non-bipartite X, Q/Q_Sbar is the reciprocal of (Q^{-1})_aa; the
  // oracle is a direct matrix inverse.
  const Graph c5 = make_cycle(5);
  const Eigen::MatrixXd q = c5.signless_laplacian();
  double rcond = 0.0;
  Eigen::MatrixXd s = schur_complement(q, {1, 2, 3, 4}, &rcond);
  const Eigen::MatrixXd qinv = q.inverse();
  REQUIRE(s.rows() == 1);
  CHECK_THAT(s(0, 0), WithinAbs(1.0 / qinv(0, 0), 1e-10));
  CHECK(rcond > 1e-6);
}

TEST_CASE("schur complement determinant identity on random SPD matrices") {
  std::mt19937 rng(123);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 3 + trial;
    Eigen::MatrixXd m = random_spd(n, rng);
    std::vector<int> trailing;
    for (int i = n / 2; i < n; ++i) trailing.push_back(i);
    Eigen::MatrixXd s = schur_complement(m, trailing);
    Eigen::MatrixXd d = select(m, trailing, trailing);
    const double lhs = m.determinant();
    const double rhs = d.determinant() * s.determinant();
    CHECK_THAT(lhs, WithinAbs(rhs, 1e-8 * std::abs(lhs)));
  }
}

TEST_CASE("PSD iff trailing block and complement are PSD") {
  auto min_eig = [](const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  };
  std::mt19937 rng(99);
  // PSD fixtures: Gram matrices (possibly singular leading block).
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd m = random_spd(6, rng);
    Eigen::MatrixXd s = schur_complement(m, {3, 4, 5});
    CHECK(min_eig(s) >= -1e-9);
    CHECK(min_eig(select(m, {3, 4, 5}, {3, 4, 5})) >= -1e-9);
  }
  // Indefinite fixture with positive definite trailing block.
  Eigen::MatrixXd m(3, 3);
  m << -1, 0, 2, 0, 1, 0, 2, 0, 1;
  REQUIRE(min_eig(m) < -1e-9);
  Eigen::MatrixXd s = schur_complement(m, {1, 2});
  CHECK(min_eig(s) < -1e-9);  // the complement must also fail PSD
}

TEST_CASE("schur complement degenerate splits and errors") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  CHECK(max_abs(schur_complement(m, {}) - m) == 0.0);
  CHECK(schur_complement(m, {0, 1}).size() == 0);
  CHECK_THROWS_AS(schur_complement(m, {5}), InvalidVertex);

  Eigen::MatrixXd sing(3, 3);
  sing << 1, 0, 0, 0, 1, 1, 0, 1, 1;
  CHECK_THROWS_AS(schur_complement(sing, {1, 2}), SingularBlock);
}

TEST_CASE("schur complement rank identity") {
  auto rank_of = [](const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 1e-10) ++r;
    return r;
  };
  // L(C4) with trailing block on three vertices: rank 3 = 3 + 0.
  const Graph c4 = make_cycle(4);
  Eigen::MatrixXd l = c4.laplacian();
  Eigen::MatrixXd s = schur_complement(l, {1, 2, 3});
  CHECK(rank_of(l) == 3);
  CHECK(rank_of(select(l, {1, 2, 3}, {1, 2, 3})) + rank_of(s) == 3);
}
