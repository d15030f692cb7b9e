#pragma once

#include <array>
#include <optional>
#include <vector>

#include "handsem/math.hpp"

namespace handsem {

struct RayHit {
  Vec3d point;
  Vec3d normal;  // interpolated vertex normal, unit length
  int triangle = -1;
  double distance = 0.0;
};

// Triangle mesh with per-vertex normals. Holds a bounding-volume hierarchy
// built at construction, so ray queries are logarithmic on average.
class TriMesh {
 public:
  using Triangle = std::array<int, 3>;

  // Throws InputError on out-of-range indices, non-unit normals or
  // zero-area triangles.
  TriMesh(std::vector<Vec3d> vertices, std::vector<Triangle> triangles, std::vector<Vec3d> vertex_normals);

  // Normals from the angle-weighted average of incident face normals.
  static TriMesh with_computed_normals(std::vector<Vec3d> vertices, std::vector<Triangle> triangles);

  const std::vector<Vec3d>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Vec3d>& normals() const { return normals_; }

  TriMesh scaled(double s) const;
  TriMesh merged(const TriMesh& other) const;

  // Nearest intersection with t > 0 along a unit direction.
  std::optional<RayHit> intersect(const Vec3d& origin, const Vec3d& direction) const;

 private:
  struct Node {
    Vec3d lo, hi;
    int left = -1, right = -1;  // children; -1 for leaves
    int begin = 0, end = 0;     // range into order_ for leaves
  };

  void build();
  int build_node(int begin, int end, int depth);
  bool hit_triangle(int tri, const Vec3d& origin, const Vec3d& dir, double t_max, RayHit& hit) const;

  std::vector<Vec3d> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Vec3d> normals_;
  std::vector<Node> nodes_;
  std::vector<int> order_;
};

std::optional<RayHit> ray_mesh_intersect(const Vec3d& origin, const Vec3d& direction, const TriMesh& mesh);

}  // namespace handsem
