#include "hjnet/problem_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace hjnet {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ParseError(origin + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& origin) {
  auto it = j.find(key);
  if (it == j.end()) fail(origin, std::string("missing field '") + key + "'");
  return *it;
}

double num(const json& j, const char* key, const std::string& origin) {
  const json& v = field(j, key, origin);
  if (!v.is_number()) fail(origin, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

EdgeHamiltonian parse_edge_hamiltonian(const json& j, const std::string& origin) {
  const std::string type = field(j, "type", origin).get<std::string>();
  if (type == "control") {
    ControlFormEdge e;
    for (const json& a : field(j, "actions", origin)) {
      e.actions.push_back({num(a, "speed", origin), num(a, "cost", origin)});
    }
    return e;
  }
  if (type == "closed_form") {
    const std::string name = field(j, "name", origin).get<std::string>();
    const json params = j.value("params", json::object());
    ClosedFormEdge e;
    e.name = name;
    if (name == "eikonal") {
      const double c = params.value("offset", 1.0);
      e.evaluate = [c](double, double p) { return std::fabs(p) - c; };
    } else if (name == "quadratic") {
      const double a = params.value("a", 1.0);
      const double b = params.value("b", 0.0);
      const double c = params.value("c", 0.0);
      e.evaluate = [a, b, c](double, double p) { return a * p * p + b * p + c; };
    } else if (name == "shifted_abs") {
      const double s = params.value("shift", 0.0);
      const double c = params.value("offset", 0.0);
      e.evaluate = [s, c](double, double p) { return std::fabs(p - s) - c; };
    } else {
      fail(origin, "unknown closed form '" + name +
                       "' (known: eikonal, quadratic, shifted_abs)");
    }
    return e;
  }
  fail(origin, "hamiltonian type must be 'control' or 'closed_form'");
}

BoundaryCondition parse_boundary(const json& j, const std::string& origin) {
  const std::string type = field(j, "type", origin).get<std::string>();
  if (type == "state_constraint") return {BoundaryType::StateConstraint, 0.0};
  if (type == "dirichlet") {
    return {BoundaryType::Dirichlet, num(j, "value", origin)};
  }
  fail(origin, "boundary type must be 'state_constraint' or 'dirichlet'");
}

void format_value(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

StarNetwork ProblemFile::make_network() const { return StarNetwork(edges); }

std::shared_ptr<const NetworkGrid> ProblemFile::make_grid() const {
  return std::make_shared<NetworkGrid>(make_network(), nodes_per_edge);
}

Hamiltonian ProblemFile::make_hamiltonian() const {
  return Hamiltonian(hamiltonian_edges, p_max);
}

ProblemFile parse_problem(const json& doc, const std::string& origin) {
  ProblemFile p;
  if (!doc.is_object()) fail(origin, "top level must be a JSON object");
  p.schema_version = field(doc, "schema_version", origin).get<int>();
  if (p.schema_version != 1) fail(origin, "unsupported schema_version");
  p.name = doc.value("name", "");
  p.description = doc.value("description", "");

  const json& net = field(doc, "network", origin);
  for (const json& e : field(net, "edges", origin + ".network")) {
    p.edges.push_back({num(e, "length", origin + ".network.edges"),
                       num(e, "angle", origin + ".network.edges")});
  }
  const int n = static_cast<int>(p.edges.size());
  if (n < 2) fail(origin, "network needs at least 2 edges");

  const json& ham = field(doc, "hamiltonian", origin);
  p.p_max = num(ham, "p_max", origin + ".hamiltonian");
  if (ham.contains("edges")) {
    const json& he = ham["edges"];
    if (static_cast<int>(he.size()) != n) {
      fail(origin, "hamiltonian.edges must list one entry per network edge");
    }
    for (const json& e : he) {
      p.hamiltonian_edges.push_back(
          parse_edge_hamiltonian(e, origin + ".hamiltonian.edges"));
    }
  } else if (ham.contains("all")) {
    const EdgeHamiltonian e =
        parse_edge_hamiltonian(ham["all"], origin + ".hamiltonian.all");
    p.hamiltonian_edges.assign(n, e);
  } else {
    fail(origin, "hamiltonian needs 'edges' or 'all'");
  }

  const json& opts = field(doc, "options", origin);
  const json& npe = field(opts, "nodes_per_edge", origin + ".options");
  if (npe.is_number_integer()) {
    p.nodes_per_edge.assign(n, npe.get<int>());
  } else {
    for (const json& m : npe) p.nodes_per_edge.push_back(m.get<int>());
    if (static_cast<int>(p.nodes_per_edge.size()) != n) {
      fail(origin, "options.nodes_per_edge must match the edge count");
    }
  }
  p.options.max_iterations = opts.value("max_iterations", 100000);
  p.options.residual_tolerance = opts.value("residual_tolerance", 1e-10);
  p.options.damping = opts.value("damping", 1.0);
  p.options.sl_time_step = opts.value("sl_time_step", 0.0);
  p.options.jacobi = opts.value("jacobi", false);
  if (opts.contains("boundary")) {
    const json& bc = opts["boundary"];
    if (static_cast<int>(bc.size()) != n) {
      fail(origin, "options.boundary must list one entry per edge");
    }
    for (const json& b : bc) {
      p.options.boundary.push_back(parse_boundary(b, origin + ".options.boundary"));
    }
  }
  p.selftest = doc.value("selftest", json::array());
  return p;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return parse_problem(doc, path);
}

void write_solution_csv(const std::string& path, const NetworkFunction& u) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  const NetworkGrid& g = u.grid();
  std::string line = "edge_index,node_index,y,point_x,point_y,u\n";
  out << line;
  line.clear();
  line += "0,0,0,0,0,";
  format_value(line, u.vertex_value());
  line += '\n';
  out << line;
  for (int j = 0; j < g.num_edges(); ++j) {
    for (int i = 1; i <= g.nodes_per_edge(j); ++i) {
      const double y = g.node_y(j, i);
      const Point pt = g.network().param_to_point(j, y);
      line.clear();
      line += std::to_string(j + 1);
      line += ',';
      line += std::to_string(i);
      line += ',';
      format_value(line, y);
      line += ',';
      format_value(line, pt.x);
      line += ',';
      format_value(line, pt.y);
      line += ',';
      format_value(line, u.value(j, i));
      line += '\n';
      out << line;
    }
  }
}

NetworkFunction read_solution_csv(const std::string& path,
                                  std::shared_ptr<const NetworkGrid> grid) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::string header;
  std::getline(in, header);
  if (header.rfind("edge_index,", 0) != 0) {
    throw ParseError(path + ": unexpected CSV header");
  }
  NetworkFunction u(grid);
  std::map<std::pair<int, int>, bool> seen;
  std::string row;
  int lineno = 1;
  while (std::getline(in, row)) {
    ++lineno;
    if (row.empty()) continue;
    std::stringstream ss(row);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 6 columns");
    }
    const int j = std::stoi(cells[0]);
    const int i = std::stoi(cells[1]);
    const double v = std::stod(cells[5]);
    if (j == 0) {
      if (i != 0) throw ParseError(path + ": vertex row must have node_index 0");
      u.set_vertex_value(v);
      seen[{0, 0}] = true;
      continue;
    }
    if (j < 1 || j > grid->num_edges() || i < 1 || i > grid->nodes_per_edge(j - 1)) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": node outside the problem grid (grid mismatch)");
    }
    const double y = std::stod(cells[2]);
    if (std::fabs(y - grid->node_y(j - 1, i)) > 1e-9) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": node position does not match the problem grid");
    }
    u.set_value(j - 1, i, v);
    seen[{j, i}] = true;
  }
  if (static_cast<int>(seen.size()) != grid->total_nodes()) {
    throw ParseError(path + ": row count does not cover the problem grid");
  }
  return u;
}

namespace {

json entry_to_json(const CheckEntry& e) {
  json j;
  switch (e.status) {
    case CheckStatus::Pass: j["status"] = "pass"; break;
    case CheckStatus::Fail: j["status"] = "fail"; break;
    case CheckStatus::NotApplicable: j["status"] = "not_applicable"; break;
  }
  if (std::isfinite(e.violation)) {
    j["violation"] = e.violation;
  } else {
    j["violation"] = e.violation > 0 ? "inf" : "-inf";
  }
  json witnesses = json::array();
  if (e.witness_edge >= 0) witnesses.push_back(e.witness_edge + 1);
  if (e.witness_edge2 >= 0) witnesses.push_back(e.witness_edge2 + 1);
  j["witness_edges"] = witnesses;
  j["witness_slope"] = e.witness_slope;
  j["vacuous"] = e.vacuous;
  if (!e.feasible_edge.empty()) {
    json fm = json::object();
    for (const auto& [jj, kk] : e.feasible_edge) {
      fm[std::to_string(jj + 1)] = kk + 1;
    }
    j["feasible_map"] = fm;
  }
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

}  // namespace

json report_to_json(const VerifierReport& rep) {
  json j;
  j["tolerance"] = rep.tolerance;
  j["slope_tolerance"] = rep.slope_tolerance;
  j["boundary_note"] = rep.boundary_note;
  j["checks"]["acct"]["subsolution"] = entry_to_json(rep.acct_sub);
  j["checks"]["acct"]["supersolution"] = entry_to_json(rep.acct_super);
  j["checks"]["imz"]["subsolution"] = entry_to_json(rep.imz_sub);
  j["checks"]["imz"]["supersolution"] = entry_to_json(rep.imz_super);
  j["checks"]["cs"]["subsolution"] = entry_to_json(rep.cs_sub);
  j["checks"]["cs"]["supersolution"] = entry_to_json(rep.cs_super);
  j["auxiliary"]["interior"] = {
      {"passed", rep.interior.passed},
      {"worst", rep.interior.worst},
      {"worst_edge", rep.interior.worst_edge + 1},
      {"worst_node", rep.interior.worst_node},
  };
  json l54 = json::array();
  for (const CheckEntry& e : rep.lemma54) l54.push_back(entry_to_json(e));
  j["auxiliary"]["lemma54"] = l54;
  return j;
}

json summary_to_json(const SolveResult& res, const std::string& solver,
                     double wall_seconds) {
  return json{{"solver", solver},
              {"iterations", res.iterations_used},
              {"final_residual", res.final_residual},
              {"converged", res.converged},
              {"wall_time_seconds", wall_seconds}};
}

}  // namespace hjnet
