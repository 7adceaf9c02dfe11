#pragma once

// Command-line front end.  Exit codes: 0 success, 1 usage error,
// 2 invariant violation detected by the self-checks, 3 input/graph error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qwalk/report.hpp"

namespace qwalk {

// Parses CLI flags into a request.  `args` excludes the program name.
inline AnalysisRequest parse_request(const std::vector<std::string>& args) {
  AnalysisRequest req;
  CLI::App app{"quantum-walk mixing analysis"};
  app.name("qwalk-mix");

  std::string sections = "all";
  app.add_option("--graph", req.graph_path, "graph file (edge list: first line \"n m\")");
  app.add_option("--format", req.format, "graph file format")
      ->check(CLI::IsMember({"edgelist", "graph6"}))
      ->default_str("edgelist");
  app.add_option("--preset", req.preset,
                 "named graph: cycle:N, complete:N, path:N, cube, petersen");
  app.add_option("--marked", req.marked, "marked vertices, comma separated")
      ->required()
      ->delimiter(',');
  app.add_option("--sections", sections,
                 "comma list of mixing,bounds,bases,classify or all");
  app.add_option("--oracle-T", req.oracle_T, "time-average horizon (0 skips the oracle)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--tol", req.route_tol, "route-agreement tolerance for the self-check")
      ->envname("QWALK_TOL")
      ->check(CLI::PositiveNumber);
  app.add_flag("--table", req.table, "emit a plain-text table of the mixing matrix");
  app.add_option("--out", req.out_path, "write output to a file instead of stdout");

  std::vector<const char*> argv{"qwalk-mix"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    req.help_requested = true;
    req.help_text = app.help();
    return req;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (req.graph_path.empty() == req.preset.empty())
    throw UsageError("give exactly one graph source: --graph PATH or --preset NAME");

  req.section_mixing = req.section_bounds = req.section_bases = req.section_classify = false;
  std::stringstream ss(sections);
  std::string tok;
  bool any = false;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    any = true;
    if (tok == "all")
      req.section_mixing = req.section_bounds = req.section_bases = req.section_classify = true;
    else if (tok == "mixing")
      req.section_mixing = true;
    else if (tok == "bounds")
      req.section_bounds = true;
    else if (tok == "bases")
      req.section_bases = true;
    else if (tok == "classify")
      req.section_classify = true;
    else
      throw UsageError("unknown section: " + tok);
  }
  if (!any) throw UsageError("--sections must name at least one section");
  return req;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    const AnalysisRequest req = parse_request(args);
    if (req.help_requested) {
      out << req.help_text;
      return 0;
    }
    const ReportDocument doc = run_report(req);
    const std::string text = req.table ? doc.render_table() : doc.render();
    if (req.out_path.empty()) {
      out << text;
    } else {
      std::ofstream f(req.out_path, std::ios::binary);
      if (!f) throw Error("cannot write output file: " + req.out_path);
      f << text;
    }
    if (!doc.violations.empty()) {
      for (const auto& v : doc.violations) err << "invariant violation: " << v << "\n";
      return 2;
    }
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace qwalk
