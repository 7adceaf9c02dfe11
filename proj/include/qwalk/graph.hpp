#pragma once

// Canonical graph representation.  Vertices are 0..n-1, the edge list is
// sorted lexicographically with u < v inside each pair, and edge j carries
// the two arcs 2j = (u,v) and 2j+1 = (v,u).  The fixed orientation
// (tail = smaller label) is what the signed incidence matrices are built on;
// downstream quantities are orientation-invariant.

#include <algorithm>
#include <fstream>
#include <istream>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"

namespace qwalk {

struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // u < v, lexicographically sorted
  std::vector<std::vector<int>> adj;       // sorted neighbor lists
  std::vector<int> degree;
  int regular_degree = 0;  // k when all degrees agree (and are positive), else 0
  bool bipartite = false;
  std::vector<int> color;  // a BFS 2-coloring; meaningful when bipartite

  int num_vertices() const { return n; }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_arcs() const { return 2 * num_edges(); }
  bool is_regular() const { return regular_degree > 0; }

  // Index of edge {u, v}, or -1 if absent.
  int edge_index(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(u, v));
    if (it == edges.end() || *it != std::make_pair(u, v)) return -1;
    return static_cast<int>(it - edges.begin());
  }

  // Index of arc (tail, head); 2j when tail < head, 2j+1 otherwise.
  int arc_index(int tail, int head) const {
    int e = edge_index(tail, head);
    return e < 0 ? -1 : 2 * e + (tail < head ? 0 : 1);
  }

  std::pair<int, int> arc(int a) const {  // (tail, head)
    const auto& [u, v] = edges[a / 2];
    return a % 2 == 0 ? std::make_pair(u, v) : std::make_pair(v, u);
  }
  int arc_tail(int a) const { return arc(a).first; }
  int arc_head(int a) const { return arc(a).second; }
  static int arc_reverse(int a) { return a ^ 1; }

  Eigen::MatrixXd adjacency() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [u, v] : edges) {
      a(u, v) = 1.0;
      a(v, u) = 1.0;
    }
    return a;
  }

  Eigen::MatrixXd degree_matrix() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int v = 0; v < n; ++v) d(v, v) = degree[v];
    return d;
  }

  Eigen::MatrixXd laplacian() const { return degree_matrix() - adjacency(); }
  Eigen::MatrixXd signless_laplacian() const { return degree_matrix() + adjacency(); }
};

// Builds the canonical Graph, validating simplicity and connectivity.
inline Graph build_graph(int n, std::vector<std::pair<int, int>> edges) {
  if (n <= 0) throw EmptyGraph("graph has no vertices");
  for (auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw InvalidVertex("edge endpoint out of range 0.." + std::to_string(n - 1));
    if (u == v) throw NotSimple("loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw NotSimple("duplicate edge");

  Graph g;
  g.n = n;
  g.edges = std::move(edges);
  g.adj.assign(n, {});
  for (const auto& [u, v] : g.edges) {
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
  g.degree.resize(n);
  for (int v = 0; v < n; ++v) g.degree[v] = static_cast<int>(g.adj[v].size());

  // Connectivity and 2-coloring in one BFS.
  g.color.assign(n, -1);
  std::queue<int> q;
  q.push(0);
  g.color[0] = 0;
  int seen = 1;
  bool two_colorable = true;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : g.adj[u]) {
      if (g.color[w] < 0) {
        g.color[w] = g.color[u] ^ 1;
        ++seen;
        q.push(w);
      } else if (g.color[w] == g.color[u]) {
        two_colorable = false;
      }
    }
  }
  if (seen != n) throw NotConnected("graph is not connected");
  g.bipartite = two_colorable;

  int k = g.degree[0];
  bool regular = k > 0;
  for (int v = 0; v < n; ++v) regular = regular && g.degree[v] == k;
  g.regular_degree = regular ? k : 0;
  return g;
}

// Edge-list text format: first line "n m", then m lines "u v".
inline Graph parse_edge_list(std::istream& in) {
  int n = 0, m = 0;
  if (!(in >> n >> m)) throw ParseError("edge list: expected header line \"n m\"");
  if (m < 0) throw ParseError("edge list: negative edge count");
  std::vector<std::pair<int, int>> edges(m);
  for (int j = 0; j < m; ++j)
    if (!(in >> edges[j].first >> edges[j].second))
      throw ParseError("edge list: expected " + std::to_string(m) + " edges, got " +
                       std::to_string(j));
  return build_graph(n, std::move(edges));
}

// graph6 printable-ASCII encoding (optionally prefixed by ">>graph6<<").
inline Graph parse_graph6(std::string s) {
  const std::string header = ">>graph6<<";
  if (s.rfind(header, 0) == 0) s.erase(0, header.size());
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  if (s.empty()) throw ParseError("graph6: empty input");

  std::size_t pos = 0;
  auto next = [&]() -> int {
    if (pos >= s.size()) throw ParseError("graph6: truncated input");
    int c = static_cast<unsigned char>(s[pos++]);
    if (c < 63 || c > 126) throw ParseError("graph6: invalid character");
    return c - 63;
  };

  long long n = 0;
  int c0 = next();
  if (c0 < 63) {
    n = c0;
  } else {  // '~' escape: next three bytes hold 18 bits
    n = 0;
    for (int i = 0; i < 3; ++i) n = (n << 6) | next();
  }
  if (n <= 0) throw EmptyGraph("graph6: graph has no vertices");

  std::vector<std::pair<int, int>> edges;
  int bits = 0, buf = 0;
  for (int v = 1; v < n; ++v) {
    for (int u = 0; u < v; ++u) {
      if (bits == 0) {
        buf = next();
        bits = 6;
      }
      if (buf & (1 << (bits - 1))) edges.emplace_back(u, v);
      --bits;
    }
  }
  if (pos != s.size()) throw ParseError("graph6: trailing characters");
  return build_graph(static_cast<int>(n), std::move(edges));
}

inline Graph load_graph(const std::string& path, const std::string& format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  if (format == "edgelist") return parse_edge_list(in);
  if (format == "graph6") {
    std::string line;
    std::getline(in, line);
    return parse_graph6(line);
  }
  throw UsageError("unknown graph format: " + format);
}

inline Graph make_cycle(int n) {
  if (n < 3) throw Error("cycle requires n >= 3");
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return build_graph(n, std::move(edges));
}

inline Graph make_path(int n) {
  if (n < 2) throw Error("path requires n >= 2");
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return build_graph(n, std::move(edges));
}

inline Graph make_complete(int n) {
  if (n < 2) throw Error("complete graph requires n >= 2");
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return build_graph(n, std::move(edges));
}

// 3-cube: vertices are the 3-bit strings, edges flip one bit.
inline Graph make_cube() {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < 8; ++u)
    for (int b = 0; b < 3; ++b)
      if (u < (u ^ (1 << b))) edges.emplace_back(u, u ^ (1 << b));
  return build_graph(8, std::move(edges));
}

// Petersen graph: outer 5-cycle 0..4, inner pentagram 5..9, spokes v -- v+5.
inline Graph make_petersen() {
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < 5; ++v) {
    edges.emplace_back(v, (v + 1) % 5);
    edges.emplace_back(v, v + 5);
    edges.emplace_back(5 + v, 5 + (v + 2) % 5);
  }
  return build_graph(10, std::move(edges));
}

// Named presets: "cycle:N", "complete:N", "path:N", "cube", "petersen".
inline Graph preset_graph(const std::string& spec) {
  std::string name = spec;
  int arg = -1;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    name = spec.substr(0, colon);
    try {
      arg = std::stoi(spec.substr(colon + 1));
    } catch (const std::exception&) {
      throw UsageError("preset argument is not an integer: " + spec);
    }
  }
  if (name == "cycle" && arg > 0) return make_cycle(arg);
  if (name == "complete" && arg > 0) return make_complete(arg);
  if (name == "path" && arg > 0) return make_path(arg);
  if (name == "cube") return make_cube();
  if (name == "petersen") return make_petersen();
  throw UsageError("unknown preset: " + spec);
}

// Connected-component labels of the subgraph induced on `keep`, indexed by
// position in `keep` (labels are 0-based, in order of first appearance).
inline std::vector<int> induced_components(const Graph& g, const std::vector<int>& keep) {
  std::vector<int> pos(g.n, -1);
  for (std::size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = static_cast<int>(i);
  std::vector<int> comp(keep.size(), -1);
  int next_label = 0;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (comp[i] >= 0) continue;
    comp[i] = next_label;
    std::queue<int> q;
    q.push(static_cast<int>(i));
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int w : g.adj[keep[x]]) {
        int j = pos[w];
        if (j >= 0 && comp[j] < 0) {
          comp[j] = next_label;
          q.push(j);
        }
      }
    }
    ++next_label;
  }
  return comp;
}

}  // namespace qwalk
