#pragma once

#include <array>
#include <memory>
#include <vector>

namespace hjnet {

/// One straight edge of the star: arclength and planar direction angle.
struct EdgeSpec {
  double length = 1.0;
  double angle = 0.0;  // radians
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Planar star-shaped network: a single vertex at the origin with N >= 2
/// straight edges, each parametrized by arclength from the vertex.
/// Immutable after construction.
class StarNetwork {
 public:
  explicit StarNetwork(std::vector<EdgeSpec> edges);

  int num_edges() const { return static_cast<int>(edges_.size()); }
  double length(int j) const { return edges_.at(j).length; }
  double angle(int j) const { return edges_.at(j).angle; }
  const std::array<double, 2>& direction(int j) const { return dirs_.at(j); }
  const std::vector<EdgeSpec>& edges() const { return edges_; }

  /// Maps the arclength parameter y in [0, l_j] on edge j to the plane.
  /// y = 0 is the vertex for every edge.
  Point param_to_point(int j, double y) const;

 private:
  std::vector<EdgeSpec> edges_;
  std::vector<std::array<double, 2>> dirs_;
};

/// Uniform per-edge grid. Node i on edge j sits at y = i * spacing(j),
/// i = 0..M_j, where i = 0 is the shared vertex node.
class NetworkGrid {
 public:
  NetworkGrid(StarNetwork net, std::vector<int> nodes_per_edge);
  NetworkGrid(StarNetwork net, int nodes_per_edge);

  const StarNetwork& network() const { return net_; }
  int num_edges() const { return net_.num_edges(); }
  int nodes_per_edge(int j) const { return nodes_.at(j); }
  double spacing(int j) const { return spacing_.at(j); }
  double node_y(int j, int i) const;
  double max_spacing() const;
  double min_spacing() const;
  int total_nodes() const;  // 1 + sum of M_j

 private:
  StarNetwork net_;
  std::vector<int> nodes_;
  std::vector<double> spacing_;
};

/// A grid function on the network. The vertex value is stored once and
/// shared by every edge, so continuity of u at the vertex is structural.
class NetworkFunction {
 public:
  explicit NetworkFunction(std::shared_ptr<const NetworkGrid> grid,
                           double initial_value = 0.0);

  const NetworkGrid& grid() const { return *grid_; }
  const std::shared_ptr<const NetworkGrid>& grid_ptr() const { return grid_; }

  double vertex_value() const { return vertex_; }
  void set_vertex_value(double v);

  /// Value at node i on edge j; i = 0 reads the shared vertex slot.
  double value(int j, int i) const;
  void set_value(int j, int i, double v);

 private:
  std::shared_ptr<const NetworkGrid> grid_;
  double vertex_;
  std::vector<std::vector<double>> edge_values_;
};

enum class DiffSide { Backward, Forward };

/// One-sided difference quotient of u along edge j at node i, taken with
/// respect to the arclength parametrization. At the vertex (i = 0) only the
/// forward quotient exists; at the outer node only the backward one.
double discrete_derivative(const NetworkFunction& u, int j, int i,
                           DiffSide side);

}  // namespace hjnet
