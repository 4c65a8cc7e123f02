#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hjnet/hamiltonian.hpp"
#include "hjnet/network.hpp"
#include "hjnet/solvers.hpp"
#include "hjnet/verifier.hpp"

namespace hjnet {

/// Parsed problem file: network + hamiltonian + solve options + grid size.
struct ProblemFile {
  int schema_version = 1;
  std::string name;
  std::string description;
  std::vector<EdgeSpec> edges;
  std::vector<EdgeHamiltonian> hamiltonian_edges;
  double p_max = 5.0;
  std::vector<int> nodes_per_edge;
  SolveOptions options;
  nlohmann::json selftest;  // optional bundled expectations

  StarNetwork make_network() const;
  std::shared_ptr<const NetworkGrid> make_grid() const;
  Hamiltonian make_hamiltonian() const;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ProblemFile load_problem(const std::string& path);
ProblemFile parse_problem(const nlohmann::json& doc, const std::string& origin);

/// Solution CSV: header line, then one row per node with columns
/// edge_index (1-based, 0 = vertex), node_index, y, point_x, point_y, u.
/// Values use 17 significant digits so a round trip is bit-exact.
void write_solution_csv(const std::string& path, const NetworkFunction& u);
NetworkFunction read_solution_csv(const std::string& path,
                                  std::shared_ptr<const NetworkGrid> grid);

nlohmann::json report_to_json(const VerifierReport& rep);
nlohmann::json summary_to_json(const SolveResult& res, const std::string& solver,
                               double wall_seconds);

}  // namespace hjnet
