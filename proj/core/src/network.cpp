#include "hjnet/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hjnet {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

}  // namespace

StarNetwork::StarNetwork(std::vector<EdgeSpec> edges) : edges_(std::move(edges)) {
  const int n = static_cast<int>(edges_.size());
  if (n < 2) {
    throw std::invalid_argument("StarNetwork: need at least 2 edges, got " +
                                std::to_string(n));
  }
  dirs_.reserve(edges_.size());
  for (int j = 0; j < n; ++j) {
    if (!(edges_[j].length > 0.0) || !std::isfinite(edges_[j].length)) {
      throw std::invalid_argument("StarNetwork: edge " + std::to_string(j + 1) +
                                  " has non-positive length");
    }
    dirs_.push_back({std::cos(edges_[j].angle), std::sin(edges_[j].angle)});
  }
  // Directions must be pairwise distinct (angles distinct modulo 2*pi).
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const double dj = wrap_angle(edges_[j].angle);
      const double dk = wrap_angle(edges_[k].angle);
      double gap = std::fabs(dj - dk);
      gap = std::min(gap, kTwoPi - gap);
      if (gap < 1e-12) {
        throw std::invalid_argument(
            "StarNetwork: edges " + std::to_string(j + 1) + " and " +
            std::to_string(k + 1) + " share the same direction");
      }
    }
  }
}

Point StarNetwork::param_to_point(int j, double y) const {
  if (j < 0 || j >= num_edges()) {
    throw std::out_of_range("param_to_point: edge index out of range");
  }
  if (y < 0.0 || y > edges_[j].length) {
    throw std::out_of_range("param_to_point: parameter y=" + std::to_string(y) +
                            " outside [0, " + std::to_string(edges_[j].length) +
                            "] on edge " + std::to_string(j + 1));
  }
  return {y * dirs_[j][0], y * dirs_[j][1]};
}

NetworkGrid::NetworkGrid(StarNetwork net, std::vector<int> nodes_per_edge)
    : net_(std::move(net)), nodes_(std::move(nodes_per_edge)) {
  if (static_cast<int>(nodes_.size()) != net_.num_edges()) {
    throw std::invalid_argument("NetworkGrid: nodes_per_edge size mismatch");
  }
  spacing_.reserve(nodes_.size());
  for (int j = 0; j < net_.num_edges(); ++j) {
    if (nodes_[j] < 2) {
      throw std::invalid_argument("NetworkGrid: edge " + std::to_string(j + 1) +
                                  " needs at least 2 nodes");
    }
    spacing_.push_back(net_.length(j) / nodes_[j]);
  }
}

NetworkGrid::NetworkGrid(StarNetwork net, int nodes_per_edge)
    : NetworkGrid(std::move(net),
                  std::vector<int>(static_cast<size_t>(net.num_edges()),
                                   nodes_per_edge)) {}

double NetworkGrid::node_y(int j, int i) const {
  if (i < 0 || i > nodes_.at(j)) {
    throw std::out_of_range("node_y: node index out of range");
  }
  if (i == nodes_[j]) return net_.length(j);  // exact at the outer endpoint
  return i * spacing_[j];
}

double NetworkGrid::max_spacing() const {
  double m = 0.0;
  for (double s : spacing_) m = std::max(m, s);
  return m;
}

double NetworkGrid::min_spacing() const {
  double m = spacing_.front();
  for (double s : spacing_) m = std::min(m, s);
  return m;
}

int NetworkGrid::total_nodes() const {
  int n = 1;
  for (int m : nodes_) n += m;
  return n;
}

NetworkFunction::NetworkFunction(std::shared_ptr<const NetworkGrid> grid,
                                 double initial_value)
    : grid_(std::move(grid)), vertex_(initial_value) {
  if (!grid_) throw std::invalid_argument("NetworkFunction: null grid");
  edge_values_.resize(grid_->num_edges());
  for (int j = 0; j < grid_->num_edges(); ++j) {
    edge_values_[j].assign(grid_->nodes_per_edge(j), initial_value);
  }
}

void NetworkFunction::set_vertex_value(double v) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument("NetworkFunction: non-finite vertex value");
  }
  vertex_ = v;
}

double NetworkFunction::value(int j, int i) const {
  if (i == 0) return vertex_;
  return edge_values_.at(j).at(i - 1);
}

void NetworkFunction::set_value(int j, int i, double v) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument("NetworkFunction: non-finite value at edge " +
                                std::to_string(j + 1) + ", node " +
                                std::to_string(i));
  }
  if (i == 0) {
    vertex_ = v;
    return;
  }
  edge_values_.at(j).at(i - 1) = v;
}

double discrete_derivative(const NetworkFunction& u, int j, int i,
                           DiffSide side) {
  const NetworkGrid& g = u.grid();
  const int m = g.nodes_per_edge(j);
  const double dy = g.spacing(j);
  if (i < 0 || i > m) throw std::out_of_range("discrete_derivative: bad node");
  if (side == DiffSide::Forward) {
    if (i == m) {
      throw std::out_of_range(
          "discrete_derivative: forward quotient at the outer endpoint");
    }
    return (u.value(j, i + 1) - u.value(j, i)) / dy;
  }
  if (i == 0) {
    throw std::out_of_range(
        "discrete_derivative: backward quotient at the vertex");
  }
  return (u.value(j, i) - u.value(j, i - 1)) / dy;
}

}  // namespace hjnet
