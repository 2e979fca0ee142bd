#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "confsym/errors.hpp"
#include "confsym/numerics/alt_tensor.hpp"

namespace confsym {

/// Halfspace <normal, x> <= offset with a unit normal. For affine-hull
/// equations the relation is an equality.
struct Facet {
  Vec normal;
  double offset = 0.0;
  std::vector<int> vertices;
};

/// Convex polytope of affine rank <= 3 inside R^N.
///
/// Geometry is stored twice: in ambient coordinates (vertices, facets,
/// equations) and in the orthonormal affine chart x = base_point + basis * y
/// (local_vertices, local_facets, polygon, triangles).
struct Polytope {
  int ambient_dim = 0;
  int affine_rank = 0;
  std::vector<Vec> vertices;
  std::vector<Facet> facets;
  std::vector<Facet> equations;
  bool unbounded_suspected = false;
  Vec base_point;
  Mat basis;

  std::vector<Vec> local_vertices;
  std::vector<Facet> local_facets;
  std::vector<int> polygon;                            // rank 2, counterclockwise
  std::vector<std::array<Eigen::Vector3d, 3>> triangles;  // rank 3 boundary

  Vec to_local(const Vec& x) const { return basis.transpose() * (x - base_point); }
  Vec from_local(const Vec& y) const { return base_point + basis * y; }

  /// Largest signed facet excess; equations count with absolute value.
  /// Nonpositive iff x lies in the polytope (up to rounding).
  double violation(const Vec& x) const {
    double v = -std::numeric_limits<double>::infinity();
    for (const auto& f : facets) v = std::max(v, f.normal.dot(x) - f.offset);
    for (const auto& e : equations) v = std::max(v, std::abs(e.normal.dot(x) - e.offset));
    if (!std::isfinite(v)) v = 0.0;
    return v;
  }

  /// Euclidean distance from x to the polytope.
  double distance(const Vec& x) const;

  double diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
      for (std::size_t j = i + 1; j < vertices.size(); ++j) d = std::max(d, (vertices[i] - vertices[j]).norm());
    return d;
  }
};

namespace detail {

inline double segment_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

// Closest point on triangle abc to p.
inline Eigen::Vector3d closest_on_triangle(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                                           const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  const Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return a;
  const Eigen::Vector3d bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + (d1 / (d1 - d3)) * ab;
  const Eigen::Vector3d cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

inline double cross2(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Returns indices (into pts) of the counterclockwise strictly convex hull.
inline std::vector<int> planar_hull(const std::vector<Vec>& pts, double extreme_tol) {
  std::vector<int> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return pts[a][0] < pts[b][0] || (pts[a][0] == pts[b][0] && pts[a][1] < pts[b][1]);
  });
  std::vector<int> h(2 * idx.size());
  std::size_t k = 0;
  for (int i : idx) {
    while (k >= 2 && cross2(pts[h[k - 2]], pts[h[k - 1]], pts[i]) <= 0) --k;
    h[k++] = i;
  }
  for (std::size_t j = idx.size() - 1, t = k + 1; j-- > 0;) {
    const int i = idx[j];
    while (k >= t && cross2(pts[h[k - 2]], pts[h[k - 1]], pts[i]) <= 0) --k;
    h[k++] = i;
  }
  h.resize(k - 1);

  bool changed = true;
  while (changed && h.size() > 3) {
    changed = false;
    for (std::size_t i = 0; i < h.size() && h.size() > 3; ++i) {
      const Vec& a = pts[h[(i + h.size() - 1) % h.size()]];
      const Vec& b = pts[h[i]];
      const Vec& c = pts[h[(i + 1) % h.size()]];
      if (segment_distance(b, a, c) <= extreme_tol) {
        h.erase(h.begin() + static_cast<long>(i));
        changed = true;
        --i;
      }
    }
  }
  return h;
}

struct Hull3 {
  std::vector<std::array<int, 3>> faces;  // outward counterclockwise
};

inline Hull3 spatial_hull(const std::vector<Eigen::Vector3d>& P, double eps) {
  const int n = static_cast<int>(P.size());
  struct Face {
    std::array<int, 3> v;
    Eigen::Vector3d normal;
    double offset;
    bool alive;
    int stamp;
  };
  std::vector<Face> faces;
  std::unordered_map<std::uint64_t, int> edge_face;
  auto key = [n](int u, int v) { return static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(n) + v; };

  // Initial simplex from extreme points.
  int i0 = 0;
  for (int i = 1; i < n; ++i)
    if (P[i].x() < P[i0].x()) i0 = i;
  int i1 = i0;
  for (int i = 0; i < n; ++i)
    if ((P[i] - P[i0]).squaredNorm() > (P[i1] - P[i0]).squaredNorm()) i1 = i;
  const Eigen::Vector3d dir = (P[i1] - P[i0]).normalized();
  int i2 = i0;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d w = P[i] - P[i0];
    const double dist = (w - w.dot(dir) * dir).squaredNorm();
    if (dist > best) best = dist, i2 = i;
  }
  const Eigen::Vector3d pn = (P[i1] - P[i0]).cross(P[i2] - P[i0]).normalized();
  int i3 = i0;
  best = -1.0;
  for (int i = 0; i < n; ++i) {
    const double dist = std::abs(pn.dot(P[i] - P[i0]));
    if (dist > best) best = dist, i3 = i;
  }
  const Eigen::Vector3d inside = 0.25 * (P[i0] + P[i1] + P[i2] + P[i3]);

  auto add_face = [&](int a, int b, int c) {
    Eigen::Vector3d nrm = (P[b] - P[a]).cross(P[c] - P[a]);
    nrm.normalize();
    faces.push_back({{a, b, c}, nrm, nrm.dot(P[a]), true, -1});
    const int id = static_cast<int>(faces.size()) - 1;
    edge_face[key(a, b)] = id;
    edge_face[key(b, c)] = id;
    edge_face[key(c, a)] = id;
  };
  auto add_oriented = [&](int a, int b, int c) {
    const Eigen::Vector3d nrm = (P[b] - P[a]).cross(P[c] - P[a]);
    if (nrm.dot(inside - P[a]) > 0) std::swap(b, c);
    add_face(a, b, c);
  };
  add_oriented(i0, i1, i2);
  add_oriented(i0, i1, i3);
  add_oriented(i0, i2, i3);
  add_oriented(i1, i2, i3);

  std::vector<int> order;
  order.reserve(n);
  for (int i = 0; i < n; ++i)
    if (i != i0 && i != i1 && i != i2 && i != i3) order.push_back(i);
  std::vector<double> far(n);
  for (int i = 0; i < n; ++i) far[i] = (P[i] - inside).squaredNorm();
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return far[a] > far[b]; });

  std::vector<int> alive = {0, 1, 2, 3};
  for (int p : order) {
    std::vector<int> vis;
    for (int f : alive)
      if (faces[f].normal.dot(P[p]) - faces[f].offset > eps) vis.push_back(f);
    if (vis.empty()) continue;
    for (int f : vis) faces[f].stamp = p;
    std::vector<std::pair<int, int>> horizon;
    for (int f : vis) {
      for (int e = 0; e < 3; ++e) {
        const int u = faces[f].v[e], v = faces[f].v[(e + 1) % 3];
        const int g = edge_face.at(key(v, u));
        if (faces[g].stamp != p) horizon.emplace_back(u, v);
      }
    }
    for (int f : vis) {
      faces[f].alive = false;
      for (int e = 0; e < 3; ++e) edge_face.erase(key(faces[f].v[e], faces[f].v[(e + 1) % 3]));
    }
    for (auto [u, v] : horizon) add_face(u, v, p);
    std::vector<int> next;
    next.reserve(alive.size() + horizon.size());
    for (int f : alive)
      if (faces[f].alive) next.push_back(f);
    for (int f = static_cast<int>(faces.size() - horizon.size()); f < static_cast<int>(faces.size()); ++f)
      next.push_back(f);
    alive.swap(next);
  }

  Hull3 out;
  for (int f : alive) out.faces.push_back(faces[f].v);
  return out;
}

}  // namespace detail

inline double Polytope::distance(const Vec& x) const {
  const Vec rel = x - base_point;
  const Vec y = basis.transpose() * rel;
  const double perp2 = std::max(0.0, (rel - basis * y).squaredNorm());
  double in = 0.0;
  if (affine_rank == 1) {
    double lo = local_vertices[0][0], hi = lo;
    for (const auto& v : local_vertices) lo = std::min(lo, v[0]), hi = std::max(hi, v[0]);
    in = y[0] < lo ? lo - y[0] : (y[0] > hi ? y[0] - hi : 0.0);
  } else if (affine_rank >= 2) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& f : local_facets) worst = std::max(worst, f.normal.dot(y) - f.offset);
    if (worst > 0.0) {
      in = std::numeric_limits<double>::infinity();
      if (affine_rank == 2) {
        for (std::size_t i = 0; i < polygon.size(); ++i)
          in = std::min(in, detail::segment_distance(y, local_vertices[polygon[i]],
                                                     local_vertices[polygon[(i + 1) % polygon.size()]]));
      } else {
        const Eigen::Vector3d p = y;
        for (const auto& t : triangles)
          in = std::min(in, (p - detail::closest_on_triangle(p, t[0], t[1], t[2])).norm());
      }
    }
  }
  return std::sqrt(perp2 + in * in);
}

/// Convex hull of a point set whose affine hull has dimension <= 3.
/// Singular values of the centered cloud below rank_tol * sigma_max count as
/// zero, as do those below an absolute floor of 1e-10 * max(1, |x|_inf) per point.
inline Polytope hull(const std::vector<Vec>& points, double rank_tol = 1e-7) {
  if (points.empty()) throw EmptyInput("hull of an empty point set");
  const Eigen::Index N = points.front().size();
  const auto m = static_cast<Eigen::Index>(points.size());
  double scale = 1.0;
  Vec centroid = Vec::Zero(N);
  for (const auto& p : points) {
    if (p.size() != N) throw DimensionMismatch("hull points have different dimensions");
    centroid += p;
    scale = std::max(scale, p.cwiseAbs().maxCoeff());
  }
  centroid /= static_cast<double>(m);

  Mat X(m, N);
  for (Eigen::Index i = 0; i < m; ++i) X.row(i) = (points[i] - centroid).transpose();
  Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double floor = 1e-10 * scale * std::sqrt(static_cast<double>(m));
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rank_tol * s(0) && s(i) > floor) ++rank;
  if (rank > 3) throw RankTooHigh("affine rank " + std::to_string(rank) + " exceeds 3");

  Polytope poly;
  poly.ambient_dim = static_cast<int>(N);
  poly.affine_rank = rank;
  poly.base_point = centroid;
  poly.basis = svd.matrixV().leftCols(rank);
  for (Eigen::Index k = rank; k < N; ++k) {
    const Vec n = svd.matrixV().col(k);
    poly.equations.push_back({n, n.dot(centroid), {}});
  }

  std::vector<Vec> local(points.size());
  for (Eigen::Index i = 0; i < m; ++i) local[i] = poly.to_local(points[i]);

  auto lift = [&](const Vec& n_loc, double off_loc, std::vector<int> ids) {
    const Vec n = poly.basis * n_loc;
    poly.local_facets.push_back({n_loc, off_loc, ids});
    poly.facets.push_back({n, off_loc + n.dot(centroid), std::move(ids)});
  };
  auto keep = [&](int i) {
    poly.vertices.push_back(points[i]);
    poly.local_vertices.push_back(local[i]);
    return static_cast<int>(poly.vertices.size()) - 1;
  };

  const double extreme_tol = 1e-9 * scale;
  if (rank == 0) {
    int best = 0;
    for (Eigen::Index i = 1; i < m; ++i)
      if ((points[i] - centroid).norm() < (points[best] - centroid).norm()) best = static_cast<int>(i);
    keep(best);
  } else if (rank == 1) {
    int lo = 0, hi = 0;
    for (Eigen::Index i = 1; i < m; ++i) {
      if (local[i][0] < local[lo][0]) lo = static_cast<int>(i);
      if (local[i][0] > local[hi][0]) hi = static_cast<int>(i);
    }
    const int a = keep(lo), b = keep(hi);
    lift(Vec::Constant(1, -1.0), -local[lo][0], {a});
    lift(Vec::Constant(1, 1.0), local[hi][0], {b});
  } else if (rank == 2) {
    const auto h = detail::planar_hull(local, extreme_tol);
    for (int i : h) poly.polygon.push_back(keep(i));
    for (std::size_t i = 0; i < h.size(); ++i) {
      const Vec& a = local[h[i]];
      const Vec& b = local[h[(i + 1) % h.size()]];
      Vec n(2);
      n << b[1] - a[1], a[0] - b[0];
      n.normalize();
      lift(n, n.dot(a), {static_cast<int>(i), static_cast<int>((i + 1) % h.size())});
    }
  } else {
    std::vector<Eigen::Vector3d> P(points.size());
    for (Eigen::Index i = 0; i < m; ++i) P[i] = local[i];
    const auto h3 = detail::spatial_hull(P, 1e-12 * scale);
    const int F = static_cast<int>(h3.faces.size());
    std::vector<Eigen::Vector3d> normals(F);
    std::vector<double> areas(F);
    std::unordered_map<std::uint64_t, int> edge_face;
    for (int f = 0; f < F; ++f) {
      const auto& t = h3.faces[f];
      const Eigen::Vector3d c = (P[t[1]] - P[t[0]]).cross(P[t[2]] - P[t[0]]);
      areas[f] = c.norm();
      normals[f] = c / areas[f];
      for (int e = 0; e < 3; ++e)
        edge_face[static_cast<std::uint64_t>(t[e]) * m + t[(e + 1) % 3]] = f;
      poly.triangles.push_back({P[t[0]], P[t[1]], P[t[2]]});
    }
    detail::UnionFind uf(F);
    for (int f = 0; f < F; ++f) {
      const auto& t = h3.faces[f];
      for (int e = 0; e < 3; ++e) {
        const int g = edge_face.at(static_cast<std::uint64_t>(t[(e + 1) % 3]) * m + t[e]);
        if (g < f || normals[f].dot(normals[g]) <= 0.0) continue;
        double dev = 0.0;
        for (int v : h3.faces[g]) dev = std::max(dev, std::abs(normals[f].dot(P[v] - P[t[0]])));
        for (int v : t) dev = std::max(dev, std::abs(normals[g].dot(P[v] - P[h3.faces[g][0]])));
        if (dev <= extreme_tol) uf.unite(f, g);
      }
    }
    std::unordered_map<int, int> group_of_root;
    std::vector<Eigen::Vector3d> gnormal;
    std::vector<std::vector<int>> gverts;
    for (int f = 0; f < F; ++f) {
      const int r = uf.find(f);
      auto [it, fresh] = group_of_root.try_emplace(r, static_cast<int>(gnormal.size()));
      if (fresh) {
        gnormal.push_back(Eigen::Vector3d::Zero());
        gverts.emplace_back();
      }
      gnormal[it->second] += areas[f] * normals[f];
      for (int v : h3.faces[f]) gverts[it->second].push_back(v);
    }
    std::unordered_map<int, std::vector<int>> facets_at;
    for (std::size_t g = 0; g < gverts.size(); ++g) {
      auto& vs = gverts[g];
      std::sort(vs.begin(), vs.end());
      vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
      for (int v : vs) facets_at[v].push_back(static_cast<int>(g));
    }
    std::unordered_map<int, int> out_id;
    std::vector<int> hull_vertices;
    for (auto& [v, fs] : facets_at) hull_vertices.push_back(v);
    std::sort(hull_vertices.begin(), hull_vertices.end());
    for (int v : hull_vertices)
      if (facets_at[v].size() >= 3) out_id[v] = keep(v);
    for (std::size_t g = 0; g < gverts.size(); ++g) {
      const Eigen::Vector3d n = gnormal[g].normalized();
      double off = -std::numeric_limits<double>::infinity();
      std::vector<int> ids;
      for (int v : gverts[g]) {
        off = std::max(off, n.dot(P[v]));
        if (auto it = out_id.find(v); it != out_id.end()) ids.push_back(it->second);
      }
      lift(Vec(n), off, std::move(ids));
    }
  }
  return poly;
}

/// Hausdorff distance between two polytopes via their vertex sets.
inline double hausdorff(const Polytope& a, const Polytope& b) {
  double d = 0.0;
  for (const auto& v : a.vertices) d = std::max(d, b.distance(v));
  for (const auto& v : b.vertices) d = std::max(d, a.distance(v));
  return d;
}

}  // namespace confsym
