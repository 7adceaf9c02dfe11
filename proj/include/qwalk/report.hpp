#pragma once

// Machine-readable analysis report: metadata, the mixing matrix by every
// requested route, bound certificates, basis listings, classification flags,
// and the numeric self-checks the CLI turns into exit codes.  Rendering is
// deterministic: identical input produces byte-identical output.

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwalk/analysis.hpp"
#include "qwalk/basis.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/marked.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

using ordered_json = nlohmann::ordered_json;

struct AnalysisRequest {
  std::string graph_path;          // file source (with format), or
  std::string format = "edgelist"; // "edgelist" | "graph6"
  std::string preset;              // named preset, e.g. "cycle:5"
  std::vector<int> marked;
  bool section_mixing = true;
  bool section_bounds = true;
  bool section_bases = true;
  bool section_classify = true;
  double route_tol = 1e-8;  // closed form vs projection sum self-check
  long long oracle_T = 0;   // time-average horizon; 0 skips the oracle
  bool table = false;       // plain-text table of Mhat instead of the report
  std::string out_path;     // empty: stdout
  bool help_requested = false;
  std::string help_text;
};

struct ReportDocument {
  ordered_json doc;
  Eigen::MatrixXd mhat;  // closed form, for the table export
  std::vector<std::string> violations;

  std::string render() const { return doc.dump(2) + "\n"; }

  std::string render_table() const {
    std::string out = "# average vertex mixing matrix (closed form); entry (u,v) = average "
                      "probability of moving from v to u\n";
    char buf[64];
    for (int i = 0; i < mhat.rows(); ++i) {
      for (int j = 0; j < mhat.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", mhat(i, j));
        out += buf;
        out += j + 1 < mhat.cols() ? ' ' : '\n';
      }
    }
    return out;
  }
};

namespace detail {

inline ordered_json matrix_json(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                                const std::vector<int>& cols) {
  ordered_json j;
  j["rows"] = rows;
  j["cols"] = cols;
  std::vector<std::vector<double>> data(m.rows());
  for (int i = 0; i < m.rows(); ++i) {
    data[i].resize(m.cols());
    for (int c = 0; c < m.cols(); ++c) data[i][c] = m(i, c);
  }
  j["data"] = data;
  return j;
}

inline std::vector<int> iota_labels(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

inline ordered_json bound_json(const BoundReport& rep, const std::vector<int>& rows,
                               const std::vector<int>& cols) {
  ordered_json j;
  j["side"] = rep.side == BoundReport::Side::lower ? "lower" : "upper";
  j["bound"] = matrix_json(rep.bound, rows, cols);
  j["gap_max_abs"] = max_abs(rep.gap);
  j["tight"] = rep.tight;
  j["predicted_tight"] = rep.predicted_tight;
  j["tol"] = rep.tol;
  return j;
}

inline ordered_json basis_json(const Graph& g, const KernelBasis& kb) {
  ordered_json j;
  const bool edge_indexed =
      kb.space == KernelBasis::Space::ker_C || kb.space == KernelBasis::Space::ker_B;
  switch (kb.space) {
    case KernelBasis::Space::ker_C: j["space"] = "ker_C"; break;
    case KernelBasis::Space::ker_B: j["space"] = "ker_B"; break;
    case KernelBasis::Space::eig_plus: j["space"] = "eig_plus"; break;
    case KernelBasis::Space::eig_minus: j["space"] = "eig_minus"; break;
  }
  j["alphabet"] = kb.alphabet_bound == 1 ? "{0,+-1}" : "{0,+-1,+-2}";
  j["dimension"] = kb.dimension();
  ordered_json vecs = ordered_json::array();
  for (const auto& y : kb.vectors) {
    ordered_json supp = ordered_json::array();
    for (int i = 0; i < y.size(); ++i) {
      if (y(i) == 0) continue;
      ordered_json entry;
      if (edge_indexed) {
        entry["edge"] = {g.edges[i].first, g.edges[i].second};
      } else {
        entry["arc"] = {g.arc_tail(i), g.arc_head(i)};
      }
      entry["value"] = y(i);
      supp.push_back(entry);
    }
    vecs.push_back(supp);
  }
  j["vectors"] = vecs;
  return j;
}

inline ordered_json equit_json(const WalkEquitReport& rep) {
  ordered_json j;
  j["equitable"] = rep.equitable;
  j["method"] = rep.method == EquitMethod::eigenprojection ? "eigenprojection" : "walk-matrix";
  j["collection"] = rep.collection;
  if (rep.witness) {
    ordered_json w;
    w[rep.method == EquitMethod::eigenprojection ? "projection" : "walk_length"] =
        rep.witness->power_or_proj;
    w["u"] = rep.witness->u;
    w["v"] = rep.witness->v;
    w["set_index"] = rep.witness->set_index;
    j["witness"] = w;
  }
  return j;
}

}  // namespace detail

inline Graph resolve_graph(const AnalysisRequest& req) {
  if (!req.preset.empty()) return preset_graph(req.preset);
  if (!req.graph_path.empty()) return load_graph(req.graph_path, req.format);
  throw UsageError("no graph source: give --graph or --preset");
}

inline ReportDocument build_report(const Graph& g, const AnalysisRequest& req) {
  const std::vector<int> S = normalize_marked(g, req.marked);
  const MarkedPartition mp = marked_partition(g, S);
  const std::vector<int> all = detail::iota_labels(g.n);

  ReportDocument rd;
  ordered_json& doc = rd.doc;

  doc["metadata"]["n"] = g.n;
  doc["metadata"]["edges"] = g.num_edges();
  doc["metadata"]["k"] = g.regular_degree;
  doc["metadata"]["regular"] = g.is_regular();
  doc["metadata"]["bipartite"] = g.bipartite;
  doc["metadata"]["connected"] = true;
  doc["metadata"]["marked"] = S;
  doc["metadata"]["marked_size"] = S.size();

  const WalkEigensystem ws = walk_eigensystem(g, S);
  const MixingMatrix closed = mixing_closed_form(g, S);
  const MixingMatrix proj = mixing_projection_sum(g, ws);
  rd.mhat = closed.Mhat;

  // Self-checks: run regardless of the requested sections.
  const double route_dev = max_abs(closed.Mhat - proj.Mhat);
  const Eigen::VectorXd col_sums = closed.Mhat.colwise().sum();
  const double col_err = (col_sums.array() - 1.0).abs().maxCoeff();
  const double range_err =
      std::max(0.0, std::max(-closed.Mhat.minCoeff(), closed.Mhat.maxCoeff() - 1.0));

  const IncidenceSet inc = incidence_set(g);
  double pm1_residual = 0.0;
  for (int i = 0; i < 2; ++i) {  // the projections at eigenvalues +1 and -1
    const Eigen::MatrixXd y = ws.projections[i].re * inc.Dt.transpose();
    for (int v : mp.Sbar) pm1_residual = std::max(pm1_residual, y.col(v).cwiseAbs().maxCoeff());
  }

  ordered_json& checks = doc["self_checks"];
  checks["route_max_deviation"] = route_dev;
  checks["route_tol"] = req.route_tol;
  checks["routes_agree"] = route_dev <= req.route_tol;
  checks["column_sum_max_error"] = col_err;
  checks["entry_range_violation"] = range_err;
  checks["pm1_unmarked_start_residual"] = pm1_residual;
  if (route_dev > req.route_tol)
    rd.violations.push_back("closed form and projection sum disagree: max deviation " +
                            std::to_string(route_dev));
  if (col_err > 1e-10)
    rd.violations.push_back("column sums deviate from 1 beyond 1e-10");

  ordered_json notes = ordered_json::array();
  notes.push_back("minus-one eigenprojection is built from (Dt+Dh) and the signless Laplacian "
                  "block; its residual on unmarked starts is " +
                  std::to_string(pm1_residual));

  // Isolated unmarked vertices: their diagonal in Mhat[Sbar,Sbar] is 1/2,
  // independent of k.  Recorded because the k-dependent constant 1/(2k^2) is
  // a plausible but wrong alternative.
  {
    std::vector<int> isolated;
    for (std::size_t i = 0; i < mp.Sbar.size(); ++i)
      if (mp.DeltaSbarSbar(i, i) == 0.0) isolated.push_back(mp.Sbar[i]);
    if (!isolated.empty()) {
      ordered_json iso;
      iso["vertices"] = isolated;
      std::vector<double> diags;
      for (int v : isolated) diags.push_back(closed.Mhat(v, v));
      iso["observed_diagonal"] = diags;
      iso["summation_form_value"] = 0.5;
      const double k = g.regular_degree;
      iso["alternative_1_over_2k2"] = 1.0 / (2.0 * k * k);
      bool match = true;
      for (double d : diags) match = match && std::abs(d - 0.5) <= 1e-10;
      iso["matches_summation_form"] = match;
      checks["isolated_vertex_diagonal"] = iso;
      notes.push_back("isolated unmarked vertices keep average return probability 1/2 "
                      "(k-independent); the alternative constant 1/(2k^2) does not match");
    }
  }

  if (req.section_mixing) {
    ordered_json& mix = doc["mixing"];
    mix["closed_form"] = detail::matrix_json(closed.Mhat, all, all);
    mix["projection_sum_deviation"] = route_dev;
    if (req.oracle_T > 0) {
      const MixingMatrix avg = mixing_time_average(g, S, req.oracle_T);
      mix["time_average"] = detail::matrix_json(avg.Mhat, all, all);
      mix["time_average_T"] = req.oracle_T;
      mix["time_average_deviation"] = max_abs(avg.Mhat - closed.Mhat);
    }

    ordered_json phases = ordered_json::array();
    Eigen::MatrixXd fsum = Eigen::MatrixXd::Zero(g.num_arcs(), g.num_arcs());
    double idem_err = 0.0;
    for (const WalkProjection& f : ws.projections) {
      ordered_json p;
      p["theta"] = f.theta;
      p["eigenvalue_re"] = std::cos(f.theta);
      p["eigenvalue_im"] = std::sin(f.theta);
      p["rank"] = f.rank();
      p["subgraph_eigenvalue"] = f.source_eigenvalue;
      phases.push_back(p);
      fsum += f.re;
      const Eigen::MatrixXd sq_re = f.re * f.re - f.im * f.im;
      const Eigen::MatrixXd sq_im = f.re * f.im + f.im * f.re;
      idem_err = std::max(idem_err, std::max(max_abs(sq_re - f.re), max_abs(sq_im - f.im)));
    }
    ordered_json& eig = mix["eigensystem"];
    eig["phases"] = phases;
    eig["completeness_error"] =
        max_abs(fsum - Eigen::MatrixXd::Identity(g.num_arcs(), g.num_arcs()));
    eig["idempotence_error"] = idem_err;
    eig["pm1_rank"] = ws.projections[0].rank();
    eig["pm1_rank_expected"] = ws.pm1_rank;

    const std::vector<int> comp = induced_components(g, mp.Sbar);
    const int ncomp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    if (ncomp > 1) {
      double cross_max = 0.0;
      for (std::size_t i = 0; i < mp.Sbar.size(); ++i)
        for (std::size_t j = 0; j < mp.Sbar.size(); ++j)
          if (comp[i] != comp[j])
            cross_max = std::max(cross_max, std::abs(closed.Mhat(mp.Sbar[i], mp.Sbar[j])));
      ordered_json vc;
      vc["components"] = ncomp;
      vc["cross_component_max_abs"] = cross_max;
      mix["vertex_cut"] = vc;
      notes.push_back("marked set is a vertex cut: entries between different components of "
                      "the unmarked subgraph vanish (max " +
                      std::to_string(cross_max) + ")");
    }
  }

  if (req.section_bounds) {
    ordered_json& bounds = doc["bounds"];
    bounds["mss_lower"] = detail::bound_json(mss_lower_bound(g, S), mp.S, mp.S);
    bounds["mss_upper"] = detail::bound_json(mss_upper_bound(g, S), mp.S, mp.S);
    bounds["msbar_lower"] = detail::bound_json(msbar_lower_bound(g, S), mp.Sbar, mp.Sbar);
    if (S.size() == 1) {
      const ReturnProbabilityBounds rp = return_probability_bounds(g, S[0]);
      ordered_json& j = bounds["return_probability"];
      j["vertex"] = S[0];
      j["branch"] = rp.bipartite_branch ? "bipartite" : "non-bipartite";
      j["target"] = rp.lower.target(0, 0);
      j["lower_eigenvalue_form"] = rp.lower_eigenvalue_form;
      j["lower_gram_form"] = rp.lower_gram_form;
      j["lower_inverse_form"] = rp.lower_inverse_form;
      j["simplified_lower"] = rp.simplified_lower;
      j["upper"] = rp.upper.bound(0, 0);
      j["lower_tight"] = rp.lower.tight;
      j["upper_tight"] = rp.upper.tight;
    }
  }

  if (req.section_bases) {
    const SpanningStructure st = spanning_structures(g, S, S.front());
    ordered_json& bas = doc["bases"];
    ordered_json tree = ordered_json::array();
    for (int e : st.tree_edges) tree.push_back({g.edges[e].first, g.edges[e].second});
    bas["anchor"] = st.anchor;
    bas["spanning_tree"] = tree;
    if (st.has_odd_unicyclic()) {
      ordered_json yedges = ordered_json::array();
      for (int e : st.odd_unicyclic_edges)
        yedges.push_back({g.edges[e].first, g.edges[e].second});
      bas["odd_unicyclic"] = yedges;
    }
    const KernelBasis kc = ker_C_basis(g, S, st);
    const KernelBasis kbb = ker_B_basis(g, S, st);
    const KernelBasis zplus = lift_basis(kc, inc);
    const KernelBasis zminus = lift_basis(kbb, inc);
    bas["ker_C"] = detail::basis_json(g, kc);
    bas["ker_B"] = detail::basis_json(g, kbb);
    bas["eig_plus"] = detail::basis_json(g, zplus);
    bas["eig_minus"] = detail::basis_json(g, zminus);
    bas["dimension_expected"] = ws.pm1_rank;

    auto span_distance = [&](const KernelBasis& kb, const Eigen::MatrixXd& f) {
      Eigen::MatrixXd v(g.num_arcs(), kb.dimension());
      for (int i = 0; i < kb.dimension(); ++i) v.col(i) = kb.vectors[i].cast<double>();
      return subspace_distance(projector_onto_columns(v), f);
    };
    bas["eig_plus_span_distance"] = span_distance(zplus, ws.projections[0].re);
    bas["eig_minus_span_distance"] = span_distance(zminus, ws.projections[1].re);
  }

  if (req.section_classify) {
    const MssClassification cls = classify_mss(g, S);
    ordered_json& cj = doc["classification"];
    cj["symmetric"] = cls.symmetric;
    cj["psd"] = cls.psd;
    cj["uniform"] = cls.uniform;
    cj["degree_separating"] = cls.degree_separating;
    cj["walk_equitable"] = cls.walk_equitable;
    cj["neighborhood_strongly_cospectral"] = cls.neighborhood_strongly_cospectral;
    cj["theorem_consistent"] = cls.theorem_consistent;
    cj["walk_equitability"] = detail::equit_json(neighborhoods_walk_equitable(g, S));
  }

  doc["notes"] = notes;
  return rd;
}

inline ReportDocument run_report(const AnalysisRequest& req) {
  return build_report(resolve_graph(req), req);
}

}  // namespace qwalk
