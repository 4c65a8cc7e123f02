// Command-line front end: load a problem file, run a solver or the verifier,
// and emit machine-readable results.
//
// Exit codes: 0 success (solve: converged; verify: all applicable checks
// pass), 1 input or assumption error, 2 solver did not converge, 3 a check
// or selftest expectation failed.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "hjnet/problem_io.hpp"
#include "hjnet/solvers.hpp"
#include "hjnet/verifier.hpp"

namespace {

using nlohmann::json;
using namespace hjnet;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Gate the assumptions a solver relies on. One-signed control edges carry
// one-way dynamics and are exempt from the two-sided coercivity requirement.
std::string check_solver_assumptions(const Hamiltonian& h,
                                     const StarNetwork& net,
                                     const std::string& solver) {
  if (solver != "imz") {
    if (!h.is_control_form()) return "control form required";
    return "";
  }
  const AssumptionReport rep = h.check_assumptions(net);
  if (!rep.quasiconvexity.passed) {
    return "assumption check failed: quasiconvexity (worst violation " +
           std::to_string(rep.quasiconvexity.worst) + " on edge " +
           std::to_string(rep.quasiconvexity.witness_edge + 1) + ")";
  }
  if (!rep.coercivity.passed) {
    const int j = rep.coercivity.witness_edge;
    if (j >= 0 && !h.is_one_signed_control(j)) {
      return "assumption check failed: coercivity (edge " + std::to_string(j + 1) +
             ", H(" + std::to_string(rep.coercivity.witness_p) +
             ") does not dominate H(0))";
    }
  }
  return "";
}

int cmd_solve(const std::string& problem_path, const std::string& solver,
              const std::string& out_path, int oracle_iterations) {
  ProblemFile pf;
  std::shared_ptr<const NetworkGrid> grid;
  try {
    pf = load_problem(problem_path);
    grid = pf.make_grid();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    const Hamiltonian h = pf.make_hamiltonian();
    const std::string gate = check_solver_assumptions(h, grid->network(), solver);
    if (!gate.empty()) {
      std::cerr << "error: " << gate << "\n";
      return 1;
    }

    const auto t0 = std::chrono::steady_clock::now();
    SolveResult res{NetworkFunction(grid), 0, 0.0, false, {}};
    if (solver == "imz") {
      res = solve_imz(h, grid, pf.options);
    } else if (solver == "acct") {
      res = solve_acct(h, grid, pf.options);
    } else {  // oracle
      SolveOptions probe = pf.options;
      double step = probe.sl_time_step;
      res.solution = oracle_dp(h, grid, step, oracle_iterations,
                               pf.options.boundary);
      res.converged = true;
      res.iterations_used = oracle_iterations;
      res.final_residual =
          residual(res.solution, h, Scheme::Acct, pf.options).sup;
    }
    const double wall = seconds_since(t0);

    write_solution_csv(out_path, res.solution);
    const json summary = summary_to_json(res, solver, wall);
    std::ofstream(out_path + ".summary.json") << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
    return res.converged ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_verify(const std::string& problem_path, const std::string& solution_path,
               double tol, const std::string& out_path) {
  try {
    const ProblemFile pf = load_problem(problem_path);
    const auto grid = pf.make_grid();
    const Hamiltonian h = pf.make_hamiltonian();
    const NetworkFunction u = read_solution_csv(solution_path, grid);
    if (tol <= 0.0) tol = 5.0 * grid->max_spacing();

    const VerifierReport rep = run_all_checks(u, h, tol);
    const json doc = report_to_json(rep);
    if (out_path.empty()) {
      std::cout << doc.dump(2) << "\n";
    } else {
      std::ofstream(out_path) << doc.dump(2) << "\n";
    }
    return rep.all_applicable_pass() ? 0 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_compare(const std::string& problem_path, int levels, double bound,
                const std::string& out_path) {
  try {
    const ProblemFile pf = load_problem(problem_path);
    const Hamiltonian h = pf.make_hamiltonian();
    if (!h.is_control_form()) {
      std::cerr << "error: control form required\n";
      return 1;
    }
    const StarNetwork net = pf.make_network();

    std::string table = "level,dy,sup_diff,ratio\n";
    std::vector<double> gaps;
    for (int level = 0; level < levels; ++level) {
      std::vector<int> nodes = pf.nodes_per_edge;
      for (int& m : nodes) m <<= level;
      const auto grid = std::make_shared<NetworkGrid>(net, nodes);
      SolveOptions opts = pf.options;
      opts.sl_time_step = grid->min_spacing();  // h = dy refinement coupling
      const SolveResult a = solve_imz(h, grid, opts);
      const SolveResult b = solve_acct(h, grid, opts);
      if (!a.converged || !b.converged) {
        std::cerr << "error: solver did not converge at level " << level << "\n";
        return 2;
      }
      const double gap = compare(a.solution, b.solution).sup_norm;
      char row[128];
      std::snprintf(row, sizeof(row), "%d,%.6g,%.10g,%.6g\n", level,
                    grid->max_spacing(), gap,
                    gaps.empty() ? 0.0 : gaps.back() / gap);
      table += row;
      gaps.push_back(gap);
    }
    if (out_path.empty()) {
      std::cout << table;
    } else {
      std::ofstream(out_path) << table;
    }
    bool monotone = true;
    for (size_t i = 1; i < gaps.size(); ++i) {
      if (gaps[i] >= gaps[i - 1]) monotone = false;
    }
    return (monotone && gaps.back() <= bound) ? 0 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

// One bundled-fixture expectation. Returns an empty string on success and a
// human-readable failure description otherwise.
std::string run_selftest_check(const ProblemFile& pf, const json& check) {
  const auto grid = pf.make_grid();
  const Hamiltonian h = pf.make_hamiltonian();
  const std::string type = check.at("type").get<std::string>();

  auto solve_with = [&](const std::string& solver) {
    if (solver == "imz") return solve_imz(h, grid, pf.options);
    return solve_acct(h, grid, pf.options);
  };

  if (type == "constant") {
    const std::string solver = check.value("solver", "imz");
    const double expected = check.at("value").get<double>();
    const double tol = check.value("tol", 1e-8);
    const SolveResult r = solve_with(solver);
    if (!r.converged) return solver + " did not converge";
    double worst = std::fabs(r.solution.vertex_value() - expected);
    for (int j = 0; j < grid->num_edges(); ++j) {
      for (int i = 1; i <= grid->nodes_per_edge(j); ++i) {
        worst = std::max(worst, std::fabs(r.solution.value(j, i) - expected));
      }
    }
    if (worst > tol) {
      return "constant check: |u - " + std::to_string(expected) +
             "| = " + std::to_string(worst) + " > tol";
    }
    return "";
  }
  if (type == "cross_solver") {
    const double tol = check.value("tol", 0.05);
    const SolveResult a = solve_with("imz");
    const SolveResult b = solve_with("acct");
    if (!a.converged || !b.converged) return "a solver did not converge";
    const double gap = compare(a.solution, b.solution).sup_norm;
    if (gap > tol) {
      return "cross-solver gap " + std::to_string(gap) + " > tol";
    }
    return "";
  }
  if (type == "node_values") {
    const std::string solver = check.value("solver", "acct");
    const double tol = check.value("tol", 0.02);
    const SolveResult r = solve_with(solver);
    if (!r.converged) return solver + " did not converge";
    for (const json& v : check.at("values")) {
      const int j = v.at("edge").get<int>() - 1;
      const int i = v.at("node").get<int>();
      const double expected = v.at("u").get<double>();
      const double got = r.solution.value(j, i);
      if (std::fabs(got - expected) > tol) {
        return "node (" + std::to_string(j + 1) + "," + std::to_string(i) +
               "): got " + std::to_string(got) + ", expected " +
               std::to_string(expected);
      }
    }
    return "";
  }
  if (type == "verify_all") {
    const std::string solver = check.value("solver", "imz");
    const SolveResult r = solve_with(solver);
    if (!r.converged) return solver + " did not converge";
    const double tol = check.value("tol", 5.0 * grid->max_spacing());
    const VerifierReport rep = run_all_checks(r.solution, h, tol);
    if (!rep.all_applicable_pass()) return "a junction check failed";
    return "";
  }
  return "unknown selftest check type '" + type + "'";
}

int cmd_selftest(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    std::cerr << "error: fixture directory '" << dir << "' not found\n";
    return 1;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "error: no fixture files in '" << dir << "'\n";
    return 1;
  }

  int failures = 0;
  for (const fs::path& f : files) {
    ProblemFile pf;
    try {
      pf = load_problem(f.string());
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
    int idx = 0;
    for (const json& check : pf.selftest) {
      ++idx;
      std::string err;
      try {
        err = run_selftest_check(pf, check);
      } catch (const std::exception& e) {
        err = e.what();
      }
      const std::string label =
          f.filename().string() + " #" + std::to_string(idx) + " (" +
          check.value("type", "?") + ")";
      if (err.empty()) {
        std::cout << "PASS  " << label << "\n";
      } else {
        std::cout << "FAIL  " << label << ": " << err << "\n";
        ++failures;
      }
    }
  }
  if (failures > 0) {
    std::cout << failures << " selftest check(s) failed\n";
    return 3;
  }
  std::cout << "all selftest checks passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamilton-Jacobi solver and junction-condition verifier for "
               "star-shaped networks"};
  app.require_subcommand(1);
  // HJNET_SEED is reserved for future stochastic features; every algorithm
  // here is deterministic and the variable is ignored.

  std::string problem, out, solution, fixture_dir = "fixtures";
  std::string solver = "imz";
  double tol = -1.0, bound = 0.05;
  int levels = 3, oracle_iterations = 4000;

  CLI::App* solve = app.add_subcommand("solve", "solve a problem file");
  solve->add_option("--problem", problem, "problem JSON file")->required();
  solve->add_option("--solver", solver, "imz | acct | oracle")
      ->check(CLI::IsMember({"imz", "acct", "oracle"}));
  solve->add_option("--out", out, "solution CSV path")->required();
  solve->add_option("--oracle-iterations", oracle_iterations,
                    "fixed sweep count for the oracle");

  CLI::App* verify = app.add_subcommand("verify", "run the junction checks");
  verify->add_option("--problem", problem, "problem JSON file")->required();
  verify->add_option("--solution", solution, "solution CSV path")->required();
  verify->add_option("--tol", tol, "check tolerance (default 5 * max dy)");
  verify->add_option("--out", out, "report JSON path (default stdout)");

  CLI::App* cmp = app.add_subcommand("compare", "cross-solver refinement study");
  cmp->add_option("--problem", problem, "problem JSON file")->required();
  cmp->add_option("--levels", levels, "number of refinement levels");
  cmp->add_option("--bound", bound, "required gap bound at the finest level");
  cmp->add_option("--out", out, "table CSV path (default stdout)");

  CLI::App* self = app.add_subcommand("selftest", "run the bundled corpus");
  self->add_option("--dir", fixture_dir, "fixture directory");

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) return cmd_solve(problem, solver, out, oracle_iterations);
  if (verify->parsed()) return cmd_verify(problem, solution, tol, out);
  if (cmp->parsed()) return cmd_compare(problem, levels, bound, out);
  return cmd_selftest(fixture_dir);
}
