#include "dphase/mesh.hpp"

#include <string>

#include "dphase/error.hpp"

namespace dphase {

Mesh build_rect_mesh(int nx, int ny, Rect rect) {
  if (nx < 1 || ny < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "mesh subdivisions must be positive, got " + std::to_string(nx) + " x " + std::to_string(ny));
  }
  if (!(rect.x1 > rect.x0) || !(rect.y1 > rect.y0)) {
    throw Error(ErrorCode::InvalidArgument, "degenerate mesh rectangle");
  }

  Mesh m;
  m.rect_ = rect;
  m.nx_ = nx;
  m.ny_ = ny;
  const auto id = [nx](int i, int j) { return static_cast<std::size_t>(j) * (nx + 1) + i; };
  const double hx = (rect.x1 - rect.x0) / nx;
  const double hy = (rect.y1 - rect.y0) / ny;

  m.nodes_.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    // Pin the last row/column to the rectangle edge exactly.
    const double y = j == ny ? rect.y1 : rect.y0 + j * hy;
    for (int i = 0; i <= nx; ++i) {
      const double x = i == nx ? rect.x1 : rect.x0 + i * hx;
      m.nodes_.push_back({x, y});
    }
  }

  const auto add_triangle = [&m](std::size_t a, std::size_t b, std::size_t c) {
    const Point& p0 = m.nodes_[a];
    const Point& p1 = m.nodes_[b];
    const Point& p2 = m.nodes_[c];
    const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
    Triangle t{};
    t.v = {a, b, c};
    t.area = 0.5 * det;
    const std::array<const Point*, 3> p{&p0, &p1, &p2};
    for (int k = 0; k < 3; ++k) {
      const Point& pj = *p[(k + 1) % 3];
      const Point& pk = *p[(k + 2) % 3];
      t.bx[k] = (pj.y - pk.y) / det;
      t.by[k] = (pk.x - pj.x) / det;
    }
    t.centroid = {(p0.x + p1.x + p2.x) / 3.0, (p0.y + p1.y + p2.y) / 3.0};
    m.triangles_.push_back(t);
  };

  m.triangles_.reserve(2 * static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const auto n00 = id(i, j), n10 = id(i + 1, j), n01 = id(i, j + 1), n11 = id(i + 1, j + 1);
      add_triangle(n00, n10, n11);
      add_triangle(n00, n11, n01);
    }
  }

  // Boundary edges counter-clockwise: bottom, right, top, left.
  for (int i = 0; i < nx; ++i) m.boundary_edges_.push_back({id(i, 0), id(i + 1, 0), hx});
  for (int j = 0; j < ny; ++j) m.boundary_edges_.push_back({id(nx, j), id(nx, j + 1), hy});
  for (int i = nx; i > 0; --i) m.boundary_edges_.push_back({id(i, ny), id(i - 1, ny), hx});
  for (int j = ny; j > 0; --j) m.boundary_edges_.push_back({id(0, j), id(0, j - 1), hy});

  m.node_weight_.assign(m.nodes_.size(), 0.0);
  for (const auto& t : m.triangles_) {
    for (auto v : t.v) m.node_weight_[v] += t.area / 3.0;
  }
  m.boundary_weight_.assign(m.nodes_.size(), 0.0);
  for (const auto& e : m.boundary_edges_) {
    m.boundary_weight_[e.a] += 0.5 * e.length;
    m.boundary_weight_[e.b] += 0.5 * e.length;
  }
  for (std::size_t i = 0; i < m.nodes_.size(); ++i) {
    if (m.boundary_weight_[i] > 0.0) m.boundary_nodes_.push_back(i);
  }
  return m;
}

Vec2 gradient_on_triangle(const Mesh& mesh, std::size_t tri, std::span<const double> u) {
  if (tri >= mesh.triangle_count()) {
    throw Error(ErrorCode::InvalidArgument, "triangle index " + std::to_string(tri) + " out of range");
  }
  if (u.size() != mesh.node_count()) {
    throw Error(ErrorCode::InvalidArgument, "nodal vector length does not match the mesh");
  }
  const Triangle& t = mesh.triangles()[tri];
  Vec2 g{0.0, 0.0};
  for (int k = 0; k < 3; ++k) {
    g.x += u[t.v[k]] * t.bx[k];
    g.y += u[t.v[k]] * t.by[k];
  }
  return g;
}

}  // namespace dphase
