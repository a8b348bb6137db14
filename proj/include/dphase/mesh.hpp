#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "dphase/expr.hpp"
#include "dphase/problem.hpp"

namespace dphase {

struct Triangle {
  std::array<std::size_t, 3> v;
  double area;
  // grad(phi_v) = (bx[k], by[k]) for the hat function of vertex v[k]
  std::array<double, 3> bx;
  std::array<double, 3> by;
  Point centroid;
};

struct BoundaryEdge {
  std::size_t a;
  std::size_t b;
  double length;
};

/// Uniform triangulation of an axis-aligned rectangle with lumped quadrature data.
class Mesh {
 public:
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t triangle_count() const { return triangles_.size(); }

  std::span<const Point> nodes() const { return nodes_; }
  std::span<const Triangle> triangles() const { return triangles_; }
  std::span<const BoundaryEdge> boundary_edges() const { return boundary_edges_; }
  std::span<const std::size_t> boundary_nodes() const { return boundary_nodes_; }
  /// One third of the area of the triangles touching each node.
  std::span<const double> node_weights() const { return node_weight_; }
  /// Half the length of the boundary edges touching each node (0 for interior nodes).
  std::span<const double> boundary_weights() const { return boundary_weight_; }
  const Rect& rect() const { return rect_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

 private:
  friend Mesh build_rect_mesh(int nx, int ny, Rect rect);

  std::vector<Point> nodes_;
  std::vector<Triangle> triangles_;
  std::vector<BoundaryEdge> boundary_edges_;
  std::vector<std::size_t> boundary_nodes_;
  std::vector<double> node_weight_;
  std::vector<double> boundary_weight_;
  Rect rect_{};
  int nx_ = 0;
  int ny_ = 0;
};

/// (nx+1)(ny+1) nodes in row-major order, two triangles per cell split along
/// the lower-left to upper-right diagonal.
Mesh build_rect_mesh(int nx, int ny, Rect rect = {});

struct Vec2 {
  double x;
  double y;
};

/// Constant gradient of the piecewise-linear interpolant of `u` on triangle `tri`.
Vec2 gradient_on_triangle(const Mesh& mesh, std::size_t tri, std::span<const double> u);

}  // namespace dphase
