#pragma once

// Shared fixtures for the test suites: the standard instance list and a few
// exact integer utilities used as independent oracles.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/graph.hpp"

namespace qwalk_test {

struct Instance {
  std::string name;
  qwalk::Graph graph;
  std::vector<int> marked;
};

// The standard suite: every (graph, marked set) pair the acceptance
// criteria quantify over.
inline std::vector<Instance> standard_suite() {
  using namespace qwalk;
  std::vector<Instance> s;
  s.push_back({"C4:{0}", make_cycle(4), {0}});
  s.push_back({"C4:{0,2}", make_cycle(4), {0, 2}});
  s.push_back({"C5:{0}", make_cycle(5), {0}});
  s.push_back({"C5:{0,1}", make_cycle(5), {0, 1}});
  s.push_back({"C6:{0}", make_cycle(6), {0}});
  s.push_back({"C6:{0,3}", make_cycle(6), {0, 3}});
  s.push_back({"C6:{0,1,3}", make_cycle(6), {0, 1, 3}});
  s.push_back({"K3:{0}", make_complete(3), {0}});
  s.push_back({"K4:{0}", make_complete(4), {0}});
  s.push_back({"K4:{0,1}", make_complete(4), {0, 1}});
  s.push_back({"Q3:{0}", make_cube(), {0}});
  s.push_back({"Q3:{0,7}", make_cube(), {0, 7}});
  s.push_back({"Petersen:{0}", make_petersen(), {0}});
  s.push_back({"Petersen:{0,5}", make_petersen(), {0, 5}});
  return s;
}

// Integer determinant by fraction-free Gaussian elimination (Bareiss).
inline std::int64_t integer_determinant(std::vector<std::vector<std::int64_t>> m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return 1;
  std::int64_t prev = 1, sign = 1;
  for (int p = 0; p < n; ++p) {
    if (m[p][p] == 0) {
      int q = p + 1;
      while (q < n && m[q][p] == 0) ++q;
      if (q == n) return 0;
      std::swap(m[p], m[q]);
      sign = -sign;
    }
    for (int i = p + 1; i < n; ++i)
      for (int j = p + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[p][p] - m[i][p] * m[p][j]) / prev;
    prev = m[p][p];
  }
  return sign * m[n - 1][n - 1];
}

// Gram matrix of integer vectors, over the integers.
inline std::vector<std::vector<std::int64_t>> integer_gram(
    const std::vector<Eigen::VectorXi>& vs) {
  const int d = static_cast<int>(vs.size());
  std::vector<std::vector<std::int64_t>> gram(d, std::vector<std::int64_t>(d, 0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int t = 0; t < vs[i].size(); ++t)
        gram[i][j] += static_cast<std::int64_t>(vs[i](t)) * vs[j](t);
  return gram;
}

}  // namespace qwalk_test
