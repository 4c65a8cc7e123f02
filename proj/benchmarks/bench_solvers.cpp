#include <benchmark/benchmark.h>

#include "hjnet/hamiltonian.hpp"
#include "hjnet/solvers.hpp"

namespace {

using namespace hjnet;

// Three-edge star with the symmetric eikonal dynamics |p| - 1 in control form.
std::shared_ptr<const NetworkGrid> make_grid(int nodes) {
  const StarNetwork net({{1.0, 0.0}, {1.0, 2.0}, {1.0, 4.0}});
  return std::make_shared<NetworkGrid>(net, std::vector<int>(3, nodes));
}

Hamiltonian make_hamiltonian() {
  const std::vector<Action> acts = {{1.0, 1.0}, {-1.0, 1.0}};
  std::vector<EdgeHamiltonian> edges(3, ControlFormEdge{acts, nullptr});
  return Hamiltonian(std::move(edges), 5.0);
}

void bm_solve_imz(benchmark::State& state) {
  const auto grid = make_grid(static_cast<int>(state.range(0)));
  const Hamiltonian h = make_hamiltonian();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_imz(h, grid, {}));
  }
}
BENCHMARK(bm_solve_imz)->Arg(50)->Arg(100)->Arg(200);

void bm_solve_acct(benchmark::State& state) {
  const auto grid = make_grid(static_cast<int>(state.range(0)));
  const Hamiltonian h = make_hamiltonian();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_acct(h, grid, {}));
  }
}
BENCHMARK(bm_solve_acct)->Arg(50)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
