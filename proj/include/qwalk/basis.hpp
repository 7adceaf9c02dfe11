#pragma once

// Combinatorial integer bases for the kernels of the truncated signed and
// unsigned vertex-edge incidence matrices, and their lifts to the (+1)- and
// (-1)-eigenspaces of the walk.  All vectors are verified in exact integer
// arithmetic at construction time.

#include <algorithm>
#include <cstdint>
#include <queue>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/incidence.hpp"
#include "qwalk/marked.hpp"

namespace qwalk {

// A BFS spanning tree rooted at the anchor, plus (for non-bipartite graphs)
// the spanning subgraph with |V| edges whose unique cycle is odd: the tree
// together with the first non-tree edge closing an odd cycle.
struct SpanningStructure {
  int anchor = 0;
  std::vector<int> tree_edges;   // edge indices, |V|-1 of them
  std::vector<char> in_tree;     // by edge index
  std::vector<int> parent;       // BFS parent vertex, -1 at the anchor
  std::vector<int> parent_edge;  // edge index to parent, -1 at the anchor
  std::vector<int> depth;
  std::vector<int> odd_unicyclic_edges;  // |V| edge indices, empty if not built
  int odd_closing_edge = -1;             // the non-tree edge of the unicyclic subgraph

  bool has_odd_unicyclic() const { return !odd_unicyclic_edges.empty(); }

  // Vertex sequence of the tree path from a to b, inclusive.
  std::vector<int> tree_path(int a, int b) const {
    std::vector<int> up, down;
    int x = a, y = b;
    while (depth[x] > depth[y]) {
      up.push_back(x);
      x = parent[x];
    }
    while (depth[y] > depth[x]) {
      down.push_back(y);
      y = parent[y];
    }
    while (x != y) {
      up.push_back(x);
      down.push_back(y);
      x = parent[x];
      y = parent[y];
    }
    up.push_back(x);
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
  }

  // Closed vertex sequence of the fundamental cycle of non-tree edge e={u,v}:
  // starts u, v, then back to u through the tree.  The wrap-around edge is
  // implied.  The first traversed edge is e itself, from its tail.
  std::vector<int> fundamental_cycle(const Graph& g, int e) const {
    const auto& [u, v] = g.edges[e];
    std::vector<int> path = tree_path(v, u);  // v ... u
    std::vector<int> cyc;
    cyc.push_back(u);
    cyc.insert(cyc.end(), path.begin(), path.end() - 1);  // drop final u (wraps)
    return cyc;
  }
};

inline SpanningStructure spanning_structures(const Graph& g, const std::vector<int>& S,
                                             int anchor, bool request_odd_unicyclic) {
  const std::vector<int> sn = normalize_marked(g, S);
  if (!std::binary_search(sn.begin(), sn.end(), anchor))
    throw InvalidVertex("anchor vertex is not marked");
  if (request_odd_unicyclic && g.bipartite)
    throw BipartiteNoOddCycle("bipartite graph has no odd cycle");

  SpanningStructure st;
  st.anchor = anchor;
  st.parent.assign(g.n, -1);
  st.parent_edge.assign(g.n, -1);
  st.depth.assign(g.n, -1);
  st.in_tree.assign(g.num_edges(), 0);
  std::queue<int> q;
  q.push(anchor);
  st.depth[anchor] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : g.adj[u]) {
      if (st.depth[w] >= 0) continue;
      st.depth[w] = st.depth[u] + 1;
      st.parent[w] = u;
      st.parent_edge[w] = g.edge_index(u, w);
      st.in_tree[st.parent_edge[w]] = 1;
      q.push(w);
    }
  }
  for (int e = 0; e < g.num_edges(); ++e)
    if (st.in_tree[e]) st.tree_edges.push_back(e);

  if (request_odd_unicyclic || !g.bipartite) {
    // A non-tree edge {u,v} closes an odd cycle iff depth[u] and depth[v]
    // have the same parity; take the first such edge in edge order.
    for (int e = 0; e < g.num_edges(); ++e) {
      if (st.in_tree[e]) continue;
      const auto& [u, v] = g.edges[e];
      if ((st.depth[u] + st.depth[v]) % 2 == 0) {
        st.odd_closing_edge = e;
        break;
      }
    }
    if (st.odd_closing_edge < 0)
      throw BipartiteNoOddCycle("bipartite graph has no odd cycle");
    st.odd_unicyclic_edges = st.tree_edges;
    st.odd_unicyclic_edges.push_back(st.odd_closing_edge);
    std::sort(st.odd_unicyclic_edges.begin(), st.odd_unicyclic_edges.end());
  }
  return st;
}

inline SpanningStructure spanning_structures(const Graph& g, const std::vector<int>& S,
                                             int anchor) {
  return spanning_structures(g, S, anchor, /*request_odd_unicyclic=*/!g.bipartite);
}

struct KernelBasis {
  enum class Space { ker_C, ker_B, eig_plus, eig_minus };
  Space space = Space::ker_C;
  int alphabet_bound = 1;  // 1 -> entries in {0,+-1}; 2 -> {0,+-1,+-2}
  std::vector<Eigen::VectorXi> vectors;  // edge-indexed (ker_*), arc-indexed (eig_*)

  int dimension() const { return static_cast<int>(vectors.size()); }
};

namespace detail {

// (C y)_w over the integers: +y_e at the tail, -y_e at the head of each edge.
inline std::vector<std::int64_t> signed_vertex_sums(const Graph& g, const Eigen::VectorXi& y) {
  std::vector<std::int64_t> s(g.n, 0);
  for (int e = 0; e < g.num_edges(); ++e) {
    s[g.edges[e].first] += y(e);
    s[g.edges[e].second] -= y(e);
  }
  return s;
}

// (B y)_w over the integers.
inline std::vector<std::int64_t> unsigned_vertex_sums(const Graph& g, const Eigen::VectorXi& y) {
  std::vector<std::int64_t> s(g.n, 0);
  for (int e = 0; e < g.num_edges(); ++e) {
    s[g.edges[e].first] += y(e);
    s[g.edges[e].second] += y(e);
  }
  return s;
}

inline void check_kernel_vector(const Graph& g, const std::vector<char>& marked,
                                const Eigen::VectorXi& y, bool signed_sums, int bound,
                                const std::string& what) {
  for (int e = 0; e < g.num_edges(); ++e)
    if (std::abs(y(e)) > bound)
      throw InvariantViolation(what + ": entry outside declared alphabet");
  const auto sums = signed_sums ? signed_vertex_sums(g, y) : unsigned_vertex_sums(g, y);
  for (int w = 0; w < g.n; ++w)
    if (!marked[w] && sums[w] != 0)
      throw InvariantViolation(what + ": nonzero sum at unmarked vertex " + std::to_string(w));
}

// Walks a closed vertex cycle and adds s * (-1)^i to edge i (alternating).
inline void add_alternating_cycle(const Graph& g, const std::vector<int>& cyc, int start_sign,
                                  Eigen::VectorXi& y) {
  const int len = static_cast<int>(cyc.size());
  for (int i = 0; i < len; ++i) {
    int e = g.edge_index(cyc[i], cyc[(i + 1) % len]);
    y(e) += start_sign * (i % 2 == 0 ? 1 : -1);
  }
}

// Rotates a closed cycle sequence so it starts at vertex w.
inline std::vector<int> rotate_cycle(const std::vector<int>& cyc, int w) {
  auto it = std::find(cyc.begin(), cyc.end(), w);
  std::vector<int> out(it, cyc.end());
  out.insert(out.end(), cyc.begin(), it);
  return out;
}

// Shortest path in the spanning subgraph `edges_in` from `sources` to any
// vertex of `targets`; returns the vertex sequence source..target.
inline std::vector<int> subgraph_path_to(const Graph& g, const std::vector<char>& edge_in,
                                         std::vector<int> sources,
                                         const std::vector<char>& target) {
  std::sort(sources.begin(), sources.end());
  std::vector<int> par(g.n, -2);
  std::queue<int> q;
  for (int s : sources) {
    par[s] = -1;
    if (target[s]) return {s};
    q.push(s);
  }
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : g.adj[u]) {
      if (!edge_in[g.edge_index(u, w)] || par[w] != -2) continue;
      par[w] = u;
      if (target[w]) {
        std::vector<int> path{w};
        for (int x = u; x != -1; x = par[x]) path.push_back(x);
        std::reverse(path.begin(), path.end());
        return path;
      }
      q.push(w);
    }
  }
  throw InvariantViolation("no path inside spanning subgraph");
}

// All simple u-v paths inside the spanning subgraph (a unicyclic subgraph has
// at most two).  Paths are returned in DFS order over sorted neighbors.
inline void simple_paths_in_subgraph(const Graph& g, const std::vector<char>& edge_in, int u,
                                     int v, std::vector<int>& cur, std::vector<char>& used,
                                     std::vector<std::vector<int>>& out) {
  int x = cur.back();
  if (x == v) {
    out.push_back(cur);
    return;
  }
  for (int w : g.adj[x]) {
    if (!edge_in[g.edge_index(x, w)] || used[w]) continue;
    used[w] = 1;
    cur.push_back(w);
    simple_paths_in_subgraph(g, edge_in, u, v, cur, used, out);
    cur.pop_back();
    used[w] = 0;
  }
}

}  // namespace detail

// Basis of ker(C restricted to unmarked rows): one {0,+-1} vector per
// fundamental cycle (oriented consistently around the cycle) and one per
// marked vertex b != anchor (oriented along the tree path anchor -> b).
inline KernelBasis ker_C_basis(const Graph& g, const std::vector<int>& S,
                               const SpanningStructure& st) {
  const std::vector<int> sn = normalize_marked(g, S);
  if (sn.empty()) throw EmptyMarkedSet("ker_C_basis requires a nonempty marked set");
  std::vector<char> marked(g.n, 0);
  for (int v : sn) marked[v] = 1;

  KernelBasis kb;
  kb.space = KernelBasis::Space::ker_C;
  kb.alphabet_bound = 1;

  auto add_oriented_walk = [&](const std::vector<int>& verts, bool closed) {
    Eigen::VectorXi y = Eigen::VectorXi::Zero(g.num_edges());
    const int steps = static_cast<int>(verts.size()) - (closed ? 0 : 1);
    for (int i = 0; i < steps; ++i) {
      int x = verts[i], w = verts[(i + 1) % verts.size()];
      y(g.edge_index(x, w)) = x < w ? 1 : -1;
    }
    kb.vectors.push_back(std::move(y));
  };

  for (int e = 0; e < g.num_edges(); ++e)
    if (!st.in_tree[e]) add_oriented_walk(st.fundamental_cycle(g, e), true);
  for (int b : sn)
    if (b != st.anchor) add_oriented_walk(st.tree_path(st.anchor, b), false);

  for (const auto& y : kb.vectors)
    detail::check_kernel_vector(g, marked, y, /*signed_sums=*/true, 1, "ker_C basis");
  return kb;
}

// Basis of ker(B restricted to unmarked rows).  Bipartite graphs get
// alternating {0,+-1} vectors on fundamental cycles and anchor paths.
// Non-bipartite graphs use the odd-unicyclic spanning subgraph: alternating
// vectors on even cycles through each extra edge, dumbbell vectors (+-2 on
// the connecting path, +-1 on the two odd cycles) when the extra edge closes
// an odd cycle, anchor paths, and the anchor vector y_a (+-2 along the path
// from the anchor to the odd cycle, +-1 around it).
inline KernelBasis ker_B_basis(const Graph& g, const std::vector<int>& S,
                               const SpanningStructure& st) {
  const std::vector<int> sn = normalize_marked(g, S);
  if (sn.empty()) throw EmptyMarkedSet("ker_B_basis requires a nonempty marked set");
  std::vector<char> marked(g.n, 0);
  for (int v : sn) marked[v] = 1;

  KernelBasis kb;
  kb.space = KernelBasis::Space::ker_B;
  kb.alphabet_bound = g.bipartite ? 1 : 2;

  auto add_alternating_path = [&](const std::vector<int>& verts) {
    Eigen::VectorXi y = Eigen::VectorXi::Zero(g.num_edges());
    for (std::size_t i = 0; i + 1 < verts.size(); ++i)
      y(g.edge_index(verts[i], verts[i + 1])) = i % 2 == 0 ? 1 : -1;
    kb.vectors.push_back(std::move(y));
  };

  if (g.bipartite) {
    for (int e = 0; e < g.num_edges(); ++e) {
      if (st.in_tree[e]) continue;
      Eigen::VectorXi y = Eigen::VectorXi::Zero(g.num_edges());
      detail::add_alternating_cycle(g, st.fundamental_cycle(g, e), 1, y);
      kb.vectors.push_back(std::move(y));
    }
    for (int b : sn)
      if (b != st.anchor) add_alternating_path(st.tree_path(st.anchor, b));
  } else {
    if (!st.has_odd_unicyclic())
      throw BipartiteNoOddCycle("spanning structure lacks the odd-unicyclic subgraph");
    std::vector<char> in_y(g.num_edges(), 0);
    for (int e : st.odd_unicyclic_edges) in_y[e] = 1;

    const std::vector<int> odd_cycle = st.fundamental_cycle(g, st.odd_closing_edge);
    std::vector<char> on_odd_cycle(g.n, 0);
    for (int v : odd_cycle) on_odd_cycle[v] = 1;

    // Dumbbell assignment: alternate +-1 around an odd cycle starting at its
    // junction vertex (leaving defect 2 there), then +-2 along the connecting
    // path, then +-1 around the second odd cycle scaled to cancel.
    auto add_dumbbell = [&](const std::vector<int>& cyc2, const std::vector<int>& connector,
                            Eigen::VectorXi& y) {
      detail::add_alternating_cycle(g, detail::rotate_cycle(cyc2, connector.front()), 1, y);
      int q = 2;  // defect entering the connector
      for (std::size_t i = 0; i + 1 < connector.size(); ++i) {
        int e = g.edge_index(connector[i], connector[i + 1]);
        y(e) = -q;
        q = -q;
      }
      const int last = connector.size() > 1 ? y(g.edge_index(connector[connector.size() - 2],
                                                             connector.back()))
                                            : 2;
      detail::add_alternating_cycle(g, detail::rotate_cycle(odd_cycle, connector.back()),
                                    -last / 2, y);
    };

    for (int e = 0; e < g.num_edges(); ++e) {
      if (in_y[e]) continue;
      const auto& [u, v] = g.edges[e];
      std::vector<std::vector<int>> paths;
      std::vector<int> cur{u};
      std::vector<char> used(g.n, 0);
      used[u] = 1;
      detail::simple_paths_in_subgraph(g, in_y, u, v, cur, used, paths);

      const std::vector<int>* even_path = nullptr;
      for (const auto& p : paths)
        if (p.size() % 2 == 0) {  // path edges odd -> cycle through e is even
          even_path = &p;
          break;
        }
      Eigen::VectorXi y = Eigen::VectorXi::Zero(g.num_edges());
      if (even_path) {
        std::vector<int> cyc{u};
        cyc.insert(cyc.end(), even_path->rbegin(), even_path->rend() - 1);
        detail::add_alternating_cycle(g, cyc, 1, y);
      } else {
        // The unique cycle through e is odd and edge-disjoint from the
        // subgraph's odd cycle; join the two.
        const auto& p = paths.front();
        std::vector<int> cyc2{u};
        cyc2.insert(cyc2.end(), p.rbegin(), p.rend() - 1);
        std::vector<int> connector =
            detail::subgraph_path_to(g, in_y, cyc2,
                                     [&] {
                                       std::vector<char> t(g.n, 0);
                                       for (int w : odd_cycle) t[w] = 1;
                                       return t;
                                     }());
        add_dumbbell(cyc2, connector, y);
      }
      kb.vectors.push_back(std::move(y));
    }

    for (int b : sn)
      if (b != st.anchor) add_alternating_path(st.tree_path(st.anchor, b));

    // y_a: path from the anchor to the odd cycle, then around it.
    {
      Eigen::VectorXi y = Eigen::VectorXi::Zero(g.num_edges());
      std::vector<int> pa = detail::subgraph_path_to(g, in_y, {st.anchor}, [&] {
        std::vector<char> t(g.n, 0);
        for (int w : odd_cycle) t[w] = 1;
        return t;
      }());
      if (pa.size() == 1) {
        detail::add_alternating_cycle(g, detail::rotate_cycle(odd_cycle, st.anchor), 1, y);
      } else {
        int q = -2;  // so the first path edge gets +2 at the anchor
        for (std::size_t i = 0; i + 1 < pa.size(); ++i) {
          q = -q;
          y(g.edge_index(pa[i], pa[i + 1])) = q;
        }
        detail::add_alternating_cycle(g, detail::rotate_cycle(odd_cycle, pa.back()), -q / 2, y);
      }
      kb.vectors.push_back(std::move(y));
    }
  }

  for (const auto& y : kb.vectors)
    detail::check_kernel_vector(g, marked, y, /*signed_sums=*/false, kb.alphabet_bound,
                                "ker_B basis");
  return kb;
}

// Lifts an edge basis to an arc basis: ker_C vectors through the signed
// arc-edge incidence (z_{2j} = y_j, z_{2j+1} = -y_j) land in the
// (+1)-eigenspace of U; ker_B vectors through the unsigned incidence
// (both arcs get y_j) land in the (-1)-eigenspace.
inline KernelBasis lift_basis(const KernelBasis& kb, const IncidenceSet& inc) {
  if (kb.space != KernelBasis::Space::ker_C && kb.space != KernelBasis::Space::ker_B)
    throw WrongSpaceTag("lift_basis expects a ker_C or ker_B basis");
  const bool from_ker_c = kb.space == KernelBasis::Space::ker_C;
  const int m = static_cast<int>(inc.M.cols());

  KernelBasis out;
  out.space = from_ker_c ? KernelBasis::Space::eig_plus : KernelBasis::Space::eig_minus;
  out.alphabet_bound = kb.alphabet_bound;
  for (const auto& y : kb.vectors) {
    if (y.size() != m) throw WrongSpaceTag("basis vector length does not match edge count");
    Eigen::VectorXi z(2 * m);
    for (int j = 0; j < m; ++j) {
      z(2 * j) = y(j);
      z(2 * j + 1) = from_ker_c ? -y(j) : y(j);
    }
    out.vectors.push_back(std::move(z));
  }
  return out;
}

// Exact integer check that U z = sign * z for a k-regular walk (k U is an
// integer matrix).
inline bool is_exact_walk_eigenvector(const Graph& g, const std::vector<int>& S,
                                      const Eigen::VectorXi& z, int sign) {
  if (!g.is_regular()) throw NotRegular("exact eigenvector check requires a regular graph");
  const std::int64_t k = g.regular_degree;
  std::vector<char> marked(g.n, 0);
  for (int v : normalize_marked(g, S)) marked[v] = 1;
  std::vector<std::int64_t> out_sum(g.n, 0);
  for (int a = 0; a < g.num_arcs(); ++a) out_sum[g.arc_tail(a)] += z(a);
  for (int a = 0; a < g.num_arcs(); ++a) {
    const int ra = Graph::arc_reverse(a);
    const int w = g.arc_tail(ra);
    const std::int64_t coin_ra = marked[w] ? -k * z(ra) : 2 * out_sum[w] - k * z(ra);
    if (coin_ra != sign * k * z(a)) return false;
  }
  return true;
}

}  // namespace qwalk
