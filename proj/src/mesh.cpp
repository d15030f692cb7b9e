#include "handsem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "handsem/error.hpp"

namespace handsem {

namespace {

constexpr int kLeafSize = 4;
constexpr double kMinT = 1e-12;

Vec3d min3(const Vec3d& a, const Vec3d& b) { return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)}; }
Vec3d max3(const Vec3d& a, const Vec3d& b) { return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)}; }

// Slab test; returns the entry distance or +inf on a miss.
double box_entry(const Vec3d& lo, const Vec3d& hi, const Vec3d& o, const Vec3d& inv_d, double t_max) {
  double t0 = 0.0, t1 = t_max;
  for (int a = 0; a < 3; ++a) {
    double tn = (lo[a] - o[a]) * inv_d[a];
    double tf = (hi[a] - o[a]) * inv_d[a];
    if (tn > tf) std::swap(tn, tf);
    // NaN from 0 * inf means the ray lies in the slab plane; keep the interval.
    if (!std::isnan(tn)) t0 = std::max(t0, tn);
    if (!std::isnan(tf)) t1 = std::min(t1, tf);
    if (t0 > t1) return std::numeric_limits<double>::infinity();
  }
  return t0;
}

}  // namespace

TriMesh::TriMesh(std::vector<Vec3d> vertices, std::vector<Triangle> triangles, std::vector<Vec3d> vertex_normals)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), normals_(std::move(vertex_normals)) {
  if (normals_.size() != vertices_.size()) throw InputError("mesh needs one normal per vertex");
  const int n = static_cast<int>(vertices_.size());
  for (std::size_t i = 0; i < normals_.size(); ++i)
    if (!(std::abs(norm(normals_[i]) - 1.0) <= 1e-6))
      throw InputError("vertex normal " + std::to_string(i) + " is not unit length");
  for (std::size_t f = 0; f < triangles_.size(); ++f) {
    const Triangle& tri = triangles_[f];
    for (int idx : tri)
      if (idx < 0 || idx >= n) throw InputError("triangle " + std::to_string(f) + " has an out-of-range index");
    const Vec3d e = cross(vertices_[tri[1]] - vertices_[tri[0]], vertices_[tri[2]] - vertices_[tri[0]]);
    if (!(norm(e) > 0.0)) throw InputError("triangle " + std::to_string(f) + " is degenerate (zero area)");
  }
  build();
}

TriMesh TriMesh::with_computed_normals(std::vector<Vec3d> vertices, std::vector<Triangle> triangles) {
  std::vector<Vec3d> acc(vertices.size());
  for (const Triangle& tri : triangles) {
    for (int c = 0; c < 3; ++c) {
      if (tri[c] < 0 || tri[c] >= static_cast<int>(vertices.size()))
        throw InputError("triangle references a missing vertex");
    }
    const Vec3d fn = cross(vertices[tri[1]] - vertices[tri[0]], vertices[tri[2]] - vertices[tri[0]]);
    const double area2 = norm(fn);
    if (!(area2 > 0.0)) throw InputError("degenerate (zero area) triangle");
    for (int c = 0; c < 3; ++c) {
      const Vec3d e1 = normalized(vertices[tri[(c + 1) % 3]] - vertices[tri[c]]);
      const Vec3d e2 = normalized(vertices[tri[(c + 2) % 3]] - vertices[tri[c]]);
      const double angle = std::acos(std::clamp(dot(e1, e2), -1.0, 1.0));
      acc[tri[c]] = acc[tri[c]] + fn * (angle / area2);
    }
  }
  for (auto& v : acc) {
    if (!(norm(v) > 0.0)) throw InputError("vertex without incident faces has no normal");
    v = normalized(v);
  }
  return TriMesh(std::move(vertices), std::move(triangles), std::move(acc));
}

TriMesh TriMesh::scaled(double s) const {
  std::vector<Vec3d> v = vertices_;
  for (auto& p : v) p = p * s;
  return TriMesh(std::move(v), triangles_, normals_);
}

TriMesh TriMesh::merged(const TriMesh& other) const {
  std::vector<Vec3d> v = vertices_;
  std::vector<Vec3d> n = normals_;
  std::vector<Triangle> t = triangles_;
  const int base = static_cast<int>(v.size());
  v.insert(v.end(), other.vertices_.begin(), other.vertices_.end());
  n.insert(n.end(), other.normals_.begin(), other.normals_.end());
  for (Triangle tri : other.triangles_) t.push_back({tri[0] + base, tri[1] + base, tri[2] + base});
  return TriMesh(std::move(v), std::move(t), std::move(n));
}

void TriMesh::build() {
  order_.resize(triangles_.size());
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.clear();
  if (!triangles_.empty()) build_node(0, static_cast<int>(order_.size()), 0);
}

int TriMesh::build_node(int begin, int end, int depth) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  Vec3d lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity()};
  Vec3d hi = -lo;
  for (int i = begin; i < end; ++i)
    for (int c = 0; c < 3; ++c) {
      lo = min3(lo, vertices_[triangles_[order_[i]][c]]);
      hi = max3(hi, vertices_[triangles_[order_[i]][c]]);
    }
  nodes_[id].lo = lo;
  nodes_[id].hi = hi;
  if (end - begin <= kLeafSize || depth > 40) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }
  const Vec3d ext = hi - lo;
  const int axis = ext.x >= ext.y && ext.x >= ext.z ? 0 : (ext.y >= ext.z ? 1 : 2);
  auto centroid = [&](int tri) {
    const Triangle& t = triangles_[tri];
    return vertices_[t[0]][axis] + vertices_[t[1]][axis] + vertices_[t[2]][axis];
  };
  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) { return centroid(a) < centroid(b) || (centroid(a) == centroid(b) && a < b); });
  const int l = build_node(begin, mid, depth + 1);
  const int r = build_node(mid, end, depth + 1);
  nodes_[id].left = l;
  nodes_[id].right = r;
  return id;
}

// Moller-Trumbore with barycentric normal interpolation.
bool TriMesh::hit_triangle(int tri, const Vec3d& o, const Vec3d& d, double t_max, RayHit& hit) const {
  const Triangle& t = triangles_[tri];
  const Vec3d& a = vertices_[t[0]];
  const Vec3d e1 = vertices_[t[1]] - a;
  const Vec3d e2 = vertices_[t[2]] - a;
  const Vec3d p = cross(d, e2);
  const double det = dot(e1, p);
  if (std::abs(det) < 1e-300) return false;
  const double inv = 1.0 / det;
  const Vec3d s = o - a;
  const double u = dot(s, p) * inv;
  if (u < 0.0 || u > 1.0) return false;
  const Vec3d q = cross(s, e1);
  const double v = dot(d, q) * inv;
  if (v < 0.0 || u + v > 1.0) return false;
  const double dist = dot(e2, q) * inv;
  if (!(dist > kMinT) || dist >= t_max) return false;
  const Vec3d n = normals_[t[0]] * (1.0 - u - v) + normals_[t[1]] * u + normals_[t[2]] * v;
  const double nn = norm(n);
  hit.point = o + d * dist;
  hit.normal = nn > 0.0 ? n / nn : normals_[t[0]];
  hit.triangle = tri;
  hit.distance = dist;
  return true;
}

std::optional<RayHit> TriMesh::intersect(const Vec3d& origin, const Vec3d& direction) const {
  if (nodes_.empty()) return std::nullopt;
  const Vec3d inv_d{1.0 / direction.x, 1.0 / direction.y, 1.0 / direction.z};
  double best = std::numeric_limits<double>::infinity();
  RayHit hit;
  bool found = false;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (box_entry(node.lo, node.hi, origin, inv_d, best) == std::numeric_limits<double>::infinity()) continue;
    if (node.left < 0) {
      // Ascending triangle id within the leaf keeps ties deterministic.
      for (int i = node.begin; i < node.end; ++i) {
        RayHit h;
        if (hit_triangle(order_[i], origin, direction, best, h)) {
          best = h.distance;
          hit = h;
          found = true;
        }
      }
    } else {
      stack.push_back(node.right);
      stack.push_back(node.left);
    }
  }
  if (!found) return std::nullopt;
  return hit;
}

std::optional<RayHit> ray_mesh_intersect(const Vec3d& origin, const Vec3d& direction, const TriMesh& mesh) {
  return mesh.intersect(origin, direction);
}

}  // namespace handsem
