#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "hjnet/network.hpp"

using namespace hjnet;

namespace {

StarNetwork three_star() {
  return StarNetwork({{1.0, 0.0}, {2.0, 2.0}, {0.5, 4.0}});
}

}  // namespace

TEST_CASE("star network validates its construction data") {
  CHECK_THROWS_AS(StarNetwork({{1.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(StarNetwork({{1.0, 0.0}, {0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(StarNetwork({{1.0, 0.0}, {-1.0, 1.0}}),
                  std::invalid_argument);
  // angles equal modulo 2*pi collide
  CHECK_THROWS_AS(StarNetwork({{1.0, 0.5}, {1.0, 0.5 + 2.0 * M_PI}}),
                  std::invalid_argument);
  CHECK_NOTHROW(three_star());
}

TEST_CASE("edge parametrization starts at the vertex") {
  const StarNetwork net = three_star();
  CHECK(net.num_edges() == 3);
  CHECK(net.length(1) == doctest::Approx(2.0));

  const Point origin = net.param_to_point(0, 0.0);
  CHECK(origin.x == doctest::Approx(0.0));
  CHECK(origin.y == doctest::Approx(0.0));

  // y = 1 along edge 1 (angle 2.0) lands on the unit direction vector
  const Point p = net.param_to_point(1, 1.0);
  CHECK(p.x == doctest::Approx(std::cos(2.0)));
  CHECK(p.y == doctest::Approx(std::sin(2.0)));
  CHECK(std::hypot(p.x, p.y) == doctest::Approx(1.0));

  CHECK_THROWS_AS(net.param_to_point(0, -0.1), std::out_of_range);
  CHECK_THROWS_AS(net.param_to_point(0, 1.1), std::out_of_range);
}

TEST_CASE("grid node positions are uniform and hit both endpoints") {
  const StarNetwork net = three_star();
  const NetworkGrid g(net, {4, 8, 2});

  CHECK(g.total_nodes() == 1 + 4 + 8 + 2);
  CHECK(g.spacing(0) == doctest::Approx(0.25));
  CHECK(g.spacing(1) == doctest::Approx(0.25));
  CHECK(g.spacing(2) == doctest::Approx(0.25));
  CHECK(g.max_spacing() == doctest::Approx(0.25));

  CHECK(g.node_y(0, 0) == 0.0);
  CHECK(g.node_y(0, 4) == 1.0);  // exact outer endpoint, no rounding
  CHECK(g.node_y(1, 8) == 2.0);
  CHECK(g.node_y(1, 3) == doctest::Approx(0.75));

  CHECK_THROWS_AS(NetworkGrid(net, {4, 8}), std::invalid_argument);
  CHECK_THROWS_AS(NetworkGrid(net, {1, 8, 2}), std::invalid_argument);
}

TEST_CASE("network function shares a single vertex slot across edges") {
  const StarNetwork net = three_star();
  auto g = std::make_shared<NetworkGrid>(net, std::vector<int>{4, 4, 4});
  NetworkFunction u(g);

  u.set_vertex_value(7.0);
  CHECK(u.value(0, 0) == 7.0);
  CHECK(u.value(1, 0) == 7.0);
  CHECK(u.value(2, 0) == 7.0);

  u.set_value(1, 0, 3.0);  // writing through any edge updates the shared slot
  CHECK(u.vertex_value() == 3.0);
  CHECK(u.value(2, 0) == 3.0);

  u.set_value(2, 4, -1.5);
  CHECK(u.value(2, 4) == -1.5);

  CHECK_THROWS_AS(u.set_value(0, 1, std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(u.set_value(0, 5, 0.0), std::out_of_range);
}

TEST_CASE("discrete derivatives match hand-computed quotients") {
  const StarNetwork net = three_star();
  auto g = std::make_shared<NetworkGrid>(net, std::vector<int>{4, 4, 4});
  NetworkFunction u(g);
  // u = y^2 on edge 0 (spacing 0.25)
  for (int i = 0; i <= 4; ++i) {
    const double y = g->node_y(0, i);
    u.set_value(0, i, y * y);
  }
  // forward at i=1: (u(0.5) - u(0.25)) / 0.25 = (0.25 - 0.0625) / 0.25
  CHECK(discrete_derivative(u, 0, 1, DiffSide::Forward) ==
        doctest::Approx(0.75));
  CHECK(discrete_derivative(u, 0, 1, DiffSide::Backward) ==
        doctest::Approx(0.25));
  CHECK_THROWS_AS(discrete_derivative(u, 0, 0, DiffSide::Backward),
                  std::out_of_range);
  CHECK_THROWS_AS(discrete_derivative(u, 0, 4, DiffSide::Forward),
                  std::out_of_range);
}
