#ifndef MDFLOW_GEOMETRY_HPP
#define MDFLOW_GEOMETRY_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "mdflow/core.hpp"

namespace mdflow {

// ---------------------------------------------------------------------------
// Input description
// ---------------------------------------------------------------------------

struct Box {
  Vec3 lo, hi;
  int dim = 2;
};

/// Axis-aligned fracture: a segment in 2D or a rectangle in 3D, lying on the
/// plane `coord` of the given axis. Permeabilities are scalars; the reduced
/// model's cross-section scaling is assumed to be folded into them.
struct FractureSpec {
  int axis = 0;       ///< fixed coordinate axis
  double coord = 0.0; ///< plane position, lo[axis] == hi[axis] == coord
  Vec3 lo, hi;        ///< extent corners
  double aperture = 1e-2;
  double k_tangential = 1.0;
  double k_normal = 1.0;

  /// 2D fracture from endpoints; rejects segments that are not axis-aligned.
  static FractureSpec segment(const Vec3& a, const Vec3& b, double aperture, double kf,
                              double knu) {
    FractureSpec f;
    if (a.x == b.x && a.y != b.y) {
      f.axis = 0;
      f.coord = a.x;
    } else if (a.y == b.y && a.x != b.x) {
      f.axis = 1;
      f.coord = a.y;
    } else {
      throw unsupported_geometry_error("fracture segment is not axis-aligned");
    }
    f.lo = {std::min(a.x, b.x), std::min(a.y, b.y), 0.0};
    f.hi = {std::max(a.x, b.x), std::max(a.y, b.y), 0.0};
    f.aperture = aperture;
    f.k_tangential = kf;
    f.k_normal = knu;
    return f;
  }

  static FractureSpec rectangle(int axis, double coord, const Vec3& lo, const Vec3& hi,
                                double aperture, double kf, double knu) {
    FractureSpec f;
    f.axis = axis;
    f.coord = coord;
    f.lo = lo;
    f.hi = hi;
    f.lo[axis] = f.hi[axis] = coord;
    f.aperture = aperture;
    f.k_tangential = kf;
    f.k_normal = knu;
    return f;
  }
};

struct BoundaryCondition {
  enum class Kind { Dirichlet, Neumann };
  Kind kind = Kind::Dirichlet;
  double value = 0.0;
};

// ---------------------------------------------------------------------------
// Decomposition records
// ---------------------------------------------------------------------------

struct Subdomain {
  int id = -1;
  int dim = 0;
  Vec3 lo, hi;          ///< bounding box of the subdomain
  double perm = 1.0;    ///< K (rock) or K_f (fracture, intersection line)
  double aperture = 0.0;
  double k_normal = 1.0;
  int parent_fracture = -1;
};

/// Coupling record between a d-dimensional subdomain (`lower`) and an
/// adjacent (d+1)-dimensional subdomain (`upper`). Interfaces are keyed by
/// their lower-dimensional side. `side` encodes the direction from the lower
/// subdomain toward the upper one as 2*axis + (positive ? 1 : 0).
struct Interface {
  int id = -1;
  int lower = -1;
  int upper = -1;
  double gamma = 0.0;
  double k_normal = 1.0;
  int side = 0;
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void merge(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

/// The coarse rectilinear arrangement induced by the fracture coordinates.
/// It classifies boxes, plane facets, ridges and corners of that grid and is
/// what the structured mesher queries to label fine entities.
class Arrangement {
 public:
  int n = 2;
  std::array<std::vector<double>, 3> coords;  ///< sorted plane positions per axis

  int planes(int a) const { return int(coords[a].size()); }
  int slabs(int a) const { return std::max(0, planes(a) - 1); }

  /// The two axes other than `a`, in ascending order.
  static std::array<int, 2> other_axes(int a) {
    return {a == 0 ? 1 : 0, a == 2 ? 1 : 2};
  }

  int box_subdomain(int i, int j, int k) const { return box_sub_[box_index(i, j, k)]; }

  int facet_fracture(int a, int ia, int u, int v) const {
    return facet_frac_[a][facet_index(a, ia, u, v)];
  }
  int facet_branch(int a, int ia, int u, int v) const {
    return facet_sub_[a][facet_index(a, ia, u, v)];
  }

  /// 3D only: ridge along free axis c, fixed planes (ia, ib) on the other two
  /// axes in ascending order, slab jc along c.
  bool ridge_is_line(int c, int ia, int ib, int jc) const {
    return ridge_sub_[c][ridge_index(c, ia, ib, jc)] >= 0 || ridge_line_[c][ridge_index(c, ia, ib, jc)];
  }
  int ridge_branch(int c, int ia, int ib, int jc) const {
    return ridge_sub_[c][ridge_index(c, ia, ib, jc)];
  }

  /// Corner by plane indices per axis (k ignored in 2D); -1 if no 0-d subdomain.
  int corner_point(int i, int j, int k) const { return corner_sub_[corner_index(i, j, k)]; }

  int box_index(int i, int j, int k) const {
    return (i * std::max(1, slabs(1)) + j) * std::max(1, slabs(2)) + k;
  }
  int facet_index(int a, int ia, int u, int v) const {
    const auto o = other_axes(a);
    return (ia * std::max(1, slabs(o[0])) + u) * std::max(1, slabs(o[1])) + v;
  }
  int ridge_index(int c, int ia, int ib, int jc) const {
    const auto o = other_axes(c);
    return (ia * planes(o[1]) + ib) * std::max(1, slabs(c)) + jc;
  }
  int corner_index(int i, int j, int k) const {
    return (i * planes(1) + j) * std::max(1, planes(2)) + k;
  }

  // Filled by build_fracture_geometry.
  std::vector<int> box_sub_;
  std::array<std::vector<int>, 3> facet_frac_;
  std::array<std::vector<int>, 3> facet_sub_;
  std::array<std::vector<char>, 3> ridge_line_;
  std::array<std::vector<int>, 3> ridge_sub_;
  std::vector<int> corner_sub_;
};

/// The mixed-dimensional decomposition: subdomains of every dimension,
/// interfaces between consecutive dimensions, boundary partition, and the
/// arrangement used to build it.
struct MdGeometry {
  Box domain;
  std::vector<FractureSpec> fractures;
  std::vector<Subdomain> subdomains;
  std::vector<Interface> interfaces;
  /// Boundary partition: per axis, per side (0 = lower face of the box).
  std::array<std::array<BoundaryCondition, 2>, 3> boundary;
  Arrangement arr;

  int dim() const { return domain.dim; }

  std::vector<int> subdomains_of_dim(int d) const {
    std::vector<int> out;
    for (const auto& s : subdomains)
      if (s.dim == d) out.push_back(s.id);
    return out;
  }

  /// Interfaces adjacent to a lower-dimensional subdomain (the set J_i).
  std::vector<int> interfaces_of_lower(int sub) const {
    std::vector<int> out;
    for (const auto& g : interfaces)
      if (g.lower == sub) out.push_back(g.id);
    return out;
  }

  int interface_by_key(int lower, int upper, int side) const {
    auto it = iface_key_.find(std::make_tuple(lower, upper, side));
    return it == iface_key_.end() ? -1 : it->second;
  }

  std::map<std::tuple<int, int, int>, int> iface_key_;
};

// ---------------------------------------------------------------------------
// build_fracture_geometry
// ---------------------------------------------------------------------------

namespace detail {

inline bool covers_interval(const FractureSpec& f, int axis, double lo, double hi) {
  return f.lo[axis] <= lo + 1e-14 && hi <= f.hi[axis] + 1e-14;
}

inline bool covers_point(const FractureSpec& f, const Vec3& p, int n) {
  if (p[f.axis] != f.coord) return false;
  for (int a = 0; a < n; ++a) {
    if (a == f.axis) continue;
    if (p[a] < f.lo[a] - 1e-14 || p[a] > f.hi[a] + 1e-14) return false;
  }
  return true;
}

}  // namespace detail

inline MdGeometry build_fracture_geometry(const Box& domain,
                                          const std::vector<FractureSpec>& fractures) {
  const int n = domain.dim;
  if (n != 2 && n != 3) throw unsupported_geometry_error("domain dimension must be 2 or 3");

  MdGeometry g;
  g.domain = domain;
  g.fractures = fractures;
  for (auto& side : g.boundary)
    side = {BoundaryCondition{BoundaryCondition::Kind::Dirichlet, 0.0},
            BoundaryCondition{BoundaryCondition::Kind::Dirichlet, 0.0}};

  // Input validation.
  for (std::size_t k = 0; k < fractures.size(); ++k) {
    const auto& f = fractures[k];
    const std::string tag = "fracture " + std::to_string(k);
    if (f.axis < 0 || f.axis >= n) throw unsupported_geometry_error(tag + ": bad axis");
    if (!(f.aperture > 0.0) || !(f.k_tangential > 0.0) || !(f.k_normal > 0.0))
      throw degenerate_input_error(tag + ": aperture and permeabilities must be positive");
    if (f.coord <= domain.lo[f.axis] || f.coord >= domain.hi[f.axis])
      throw unsupported_geometry_error(tag + ": plane must lie strictly inside the domain");
    int extent_axes = 0;
    for (int a = 0; a < n; ++a) {
      if (f.lo[a] < domain.lo[a] - 1e-14 || f.hi[a] > domain.hi[a] + 1e-14)
        throw unsupported_geometry_error(tag + ": extent outside the domain box");
      if (!is_dyadic(f.lo[a]) || !is_dyadic(f.hi[a]))
        throw unsupported_geometry_error(tag + ": coordinates must be dyadic rationals");
      if (a != f.axis) {
        if (f.hi[a] < f.lo[a]) throw degenerate_input_error(tag + ": inverted extent");
        if (f.hi[a] > f.lo[a]) ++extent_axes;
      }
    }
    if (extent_axes != n - 1) throw degenerate_input_error(tag + ": degenerate extent");
  }

  // Arrangement coordinates.
  Arrangement& arr = g.arr;
  arr.n = n;
  for (int a = 0; a < n; ++a) {
    auto& cs = arr.coords[a];
    cs = {domain.lo[a], domain.hi[a]};
    for (const auto& f : fractures) {
      if (f.axis == a) cs.push_back(f.coord);
      else {
        cs.push_back(f.lo[a]);
        cs.push_back(f.hi[a]);
      }
    }
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  }
  if (n == 2) arr.coords[2] = {0.0};

  const auto plane_index = [&](int a, double x) -> int {
    const auto& cs = arr.coords[a];
    auto it = std::lower_bound(cs.begin(), cs.end(), x);
    return (it != cs.end() && *it == x) ? int(it - cs.begin()) : -1;
  };

  // Facet covers.
  for (int a = 0; a < n; ++a) {
    const auto o = Arrangement::other_axes(a);
    const int nu = std::max(1, arr.slabs(o[0]));
    const int nv = std::max(1, arr.slabs(o[1]));
    arr.facet_frac_[a].assign(std::size_t(arr.planes(a)) * nu * nv, -1);
    arr.facet_sub_[a].assign(arr.facet_frac_[a].size(), -1);
  }
  for (std::size_t k = 0; k < fractures.size(); ++k) {
    const auto& f = fractures[k];
    const int a = f.axis;
    const auto o = Arrangement::other_axes(a);
    const int ia = plane_index(a, f.coord);
    const int u0 = plane_index(o[0], f.lo[o[0]]);
    const int u1 = plane_index(o[0], f.hi[o[0]]);
    const int v0 = (n == 3) ? plane_index(o[1], f.lo[o[1]]) : 0;
    const int v1 = (n == 3) ? plane_index(o[1], f.hi[o[1]]) : 1;
    for (int u = u0; u < u1; ++u)
      for (int v = v0; v < v1; ++v) {
        int& cover = arr.facet_frac_[a][arr.facet_index(a, ia, u, v)];
        if (cover >= 0)
          throw degenerate_input_error("coincident overlapping fractures " +
                                       std::to_string(cover) + " and " + std::to_string(k));
        cover = int(k);
      }
  }

  // Rock components: boxes merged across unfractured interior facets.
  const int sx = arr.slabs(0), sy = arr.slabs(1), sz = std::max(1, arr.slabs(2));
  const int nboxes = sx * sy * sz;
  detail::UnionFind rock_uf(nboxes);
  for (int a = 0; a < n; ++a) {
    const auto o = Arrangement::other_axes(a);
    const int nu = arr.slabs(o[0]);
    const int nv = (n == 3) ? arr.slabs(o[1]) : 1;
    for (int ia = 1; ia + 1 < arr.planes(a); ++ia)
      for (int u = 0; u < nu; ++u)
        for (int v = 0; v < nv; ++v) {
          if (arr.facet_fracture(a, ia, u, v) >= 0) continue;
          int lo_idx[3] = {0, 0, 0}, hi_idx[3] = {0, 0, 0};
          lo_idx[a] = ia - 1;
          hi_idx[a] = ia;
          lo_idx[o[0]] = hi_idx[o[0]] = u;
          if (n == 3) lo_idx[o[1]] = hi_idx[o[1]] = v;
          rock_uf.merge(arr.box_index(lo_idx[0], lo_idx[1], lo_idx[2]),
                        arr.box_index(hi_idx[0], hi_idx[1], hi_idx[2]));
        }
  }

  // Ridge classification (3D): a ridge covered by fractures of two distinct
  // axes is part of the 1-d intersection network.
  std::array<std::vector<std::vector<int>>, 3> ridge_cover;
  if (n == 3) {
    for (int c = 0; c < 3; ++c) {
      const auto o = Arrangement::other_axes(c);
      const std::size_t count =
          std::size_t(arr.planes(o[0])) * arr.planes(o[1]) * std::max(1, arr.slabs(c));
      arr.ridge_line_[c].assign(count, 0);
      arr.ridge_sub_[c].assign(count, -1);
      ridge_cover[c].assign(count, {});
    }
    for (int c = 0; c < 3; ++c) {
      const auto o = Arrangement::other_axes(c);
      for (int ia = 0; ia < arr.planes(o[0]); ++ia)
        for (int ib = 0; ib < arr.planes(o[1]); ++ib)
          for (int jc = 0; jc < arr.slabs(c); ++jc) {
            Vec3 p;
            p[o[0]] = arr.coords[o[0]][ia];
            p[o[1]] = arr.coords[o[1]][ib];
            const double seg_lo = arr.coords[c][jc], seg_hi = arr.coords[c][jc + 1];
            auto& cover = ridge_cover[c][arr.ridge_index(c, ia, ib, jc)];
            std::set<int> axes;
            for (std::size_t k = 0; k < fractures.size(); ++k) {
              const auto& f = fractures[k];
              if (f.axis == c) continue;
              const int fixed_other = (f.axis == o[0]) ? o[1] : o[0];
              if (f.coord != p[f.axis]) continue;
              if (p[fixed_other] < f.lo[fixed_other] - 1e-14 ||
                  p[fixed_other] > f.hi[fixed_other] + 1e-14)
                continue;
              if (!detail::covers_interval(f, c, seg_lo, seg_hi)) continue;
              cover.push_back(int(k));
              axes.insert(f.axis);
            }
            if (axes.size() >= 2) arr.ridge_line_[c][arr.ridge_index(c, ia, ib, jc)] = 1;
          }
    }
  }

  // Corner classification: 0-d subdomains.
  const int px = arr.planes(0), py = arr.planes(1), pz = std::max(1, arr.planes(2));
  arr.corner_sub_.assign(std::size_t(px) * py * pz, -1);
  std::vector<std::array<int, 3>> point_corners;
  if (n == 2) {
    for (int i = 0; i < px; ++i)
      for (int j = 0; j < py; ++j) {
        const Vec3 p{arr.coords[0][i], arr.coords[1][j], 0.0};
        std::set<int> axes;
        for (const auto& f : fractures)
          if (detail::covers_point(f, p, n)) axes.insert(f.axis);
        if (axes.size() >= 2) point_corners.push_back({i, j, 0});
      }
  } else {
    for (int i = 0; i < px; ++i)
      for (int j = 0; j < py; ++j)
        for (int k = 0; k < pz; ++k) {
          // Incident line ridges: (free axis, direction, cover set).
          const int pidx[3] = {i, j, k};
          std::vector<std::tuple<int, int, std::vector<int>>> incident;
          for (int c = 0; c < 3; ++c) {
            const auto o = Arrangement::other_axes(c);
            for (int dir = -1; dir <= 1; dir += 2) {
              const int jc = pidx[c] + (dir < 0 ? -1 : 0);
              if (jc < 0 || jc >= arr.slabs(c)) continue;
              const int ridx = arr.ridge_index(c, pidx[o[0]], pidx[o[1]], jc);
              if (!arr.ridge_line_[c][ridx]) continue;
              auto cover = ridge_cover[c][ridx];
              std::sort(cover.begin(), cover.end());
              incident.emplace_back(c, dir, std::move(cover));
            }
          }
          bool is_point = false;
          if (incident.size() >= 3) is_point = true;
          else if (incident.size() == 2) {
            const bool collinear = std::get<0>(incident[0]) == std::get<0>(incident[1]);
            const bool same_cover = std::get<2>(incident[0]) == std::get<2>(incident[1]);
            is_point = !(collinear && same_cover);
          }
          if (is_point) point_corners.push_back({i, j, k});
        }
  }

  // Fracture branches: fractured facets merged across unblocked ridges/corners.
  std::array<std::vector<int>, 3> facet_node;  // facet -> union-find node
  std::vector<std::tuple<int, int, int, int>> node_facet;
  for (int a = 0; a < n; ++a) {
    facet_node[a].assign(arr.facet_frac_[a].size(), -1);
    const auto o = Arrangement::other_axes(a);
    const int nu = std::max(1, arr.slabs(o[0]));
    const int nv = (n == 3) ? arr.slabs(o[1]) : 1;
    for (int ia = 0; ia < arr.planes(a); ++ia)
      for (int u = 0; u < nu; ++u)
        for (int v = 0; v < nv; ++v)
          if (arr.facet_fracture(a, ia, u, v) >= 0) {
            facet_node[a][arr.facet_index(a, ia, u, v)] = int(node_facet.size());
            node_facet.emplace_back(a, ia, u, v);
          }
  }
  detail::UnionFind branch_uf(int(node_facet.size()));
  const auto corner_is_point = [&](int i, int j, int k) {
    for (const auto& pc : point_corners)
      if (pc[0] == i && pc[1] == j && pc[2] == k) return true;
    return false;
  };
  for (std::size_t node = 0; node < node_facet.size(); ++node) {
    const auto [a, ia, u, v] = node_facet[node];
    const auto o = Arrangement::other_axes(a);
    if (n == 2) {
      // Neighbor along the fracture line; shared corner at plane u+1.
      if (u + 1 < arr.slabs(o[0])) {
        const int nb = facet_node[a][arr.facet_index(a, ia, u + 1, v)];
        if (nb >= 0) {
          int ci[3] = {0, 0, 0};
          ci[a] = ia;
          ci[o[0]] = u + 1;
          if (!corner_is_point(ci[0], ci[1], ci[2])) branch_uf.merge(int(node), nb);
        }
      }
    } else {
      // Neighbor along o[0]; shared ridge runs along o[1].
      if (u + 1 < arr.slabs(o[0])) {
        const int nb = facet_node[a][arr.facet_index(a, ia, u + 1, v)];
        if (nb >= 0) {
          const int c = o[1];
          const auto oc = Arrangement::other_axes(c);
          int fixed[3] = {0, 0, 0};
          fixed[a] = ia;
          fixed[o[0]] = u + 1;
          if (!arr.ridge_line_[c][arr.ridge_index(c, fixed[oc[0]], fixed[oc[1]], v)])
            branch_uf.merge(int(node), nb);
        }
      }
      // Neighbor along o[1]; shared ridge runs along o[0].
      if (v + 1 < arr.slabs(o[1])) {
        const int nb = facet_node[a][arr.facet_index(a, ia, u, v + 1)];
        if (nb >= 0) {
          const int c = o[0];
          const auto oc = Arrangement::other_axes(c);
          int fixed[3] = {0, 0, 0};
          fixed[a] = ia;
          fixed[o[1]] = v + 1;
          if (!arr.ridge_line_[c][arr.ridge_index(c, fixed[oc[0]], fixed[oc[1]], u)])
            branch_uf.merge(int(node), nb);
        }
      }
    }
  }

  // 1-d branches (3D): line ridges merged across non-point corners.
  std::array<std::vector<int>, 3> ridge_node;
  std::vector<std::tuple<int, int, int, int>> node_ridge;
  if (n == 3) {
    for (int c = 0; c < 3; ++c) {
      ridge_node[c].assign(arr.ridge_line_[c].size(), -1);
      const auto o = Arrangement::other_axes(c);
      for (int ia = 0; ia < arr.planes(o[0]); ++ia)
        for (int ib = 0; ib < arr.planes(o[1]); ++ib)
          for (int jc = 0; jc < arr.slabs(c); ++jc)
            if (arr.ridge_line_[c][arr.ridge_index(c, ia, ib, jc)]) {
              ridge_node[c][arr.ridge_index(c, ia, ib, jc)] = int(node_ridge.size());
              node_ridge.emplace_back(c, ia, ib, jc);
            }
    }
  }
  detail::UnionFind line_uf(std::max<std::size_t>(1, node_ridge.size()));
  for (std::size_t node = 0; node < node_ridge.size(); ++node) {
    const auto [c, ia, ib, jc] = node_ridge[node];
    if (jc + 1 >= arr.slabs(c)) continue;
    const int nb = ridge_node[c][arr.ridge_index(c, ia, ib, jc + 1)];
    if (nb < 0) continue;
    const auto o = Arrangement::other_axes(c);
    int ci[3] = {0, 0, 0};
    ci[o[0]] = ia;
    ci[o[1]] = ib;
    ci[c] = jc + 1;
    if (!corner_is_point(ci[0], ci[1], ci[2])) line_uf.merge(int(node), nb);
  }

  // ---- subdomain records, dimension-descending ----
  const auto grow = [](Subdomain& s, const Vec3& lo, const Vec3& hi) {
    for (int a = 0; a < 3; ++a) {
      s.lo[a] = std::min(s.lo[a], lo[a]);
      s.hi[a] = std::max(s.hi[a], hi[a]);
    }
  };
  const auto fresh_box = [](int id, int dim) {
    Subdomain s;
    s.id = id;
    s.dim = dim;
    s.lo = {1e300, 1e300, 1e300};
    s.hi = {-1e300, -1e300, -1e300};
    return s;
  };

  arr.box_sub_.assign(nboxes, -1);
  std::map<int, int> root_to_sub;
  for (int i = 0; i < sx; ++i)
    for (int j = 0; j < sy; ++j)
      for (int k = 0; k < sz; ++k) {
        const int b = arr.box_index(i, j, k);
        const int r = rock_uf.find(b);
        auto it = root_to_sub.find(r);
        if (it == root_to_sub.end()) {
          const int id = int(g.subdomains.size());
          it = root_to_sub.emplace(r, id).first;
          g.subdomains.push_back(fresh_box(id, n));
        }
        arr.box_sub_[b] = it->second;
        Vec3 lo{arr.coords[0][i], arr.coords[1][j], n == 3 ? arr.coords[2][k] : 0.0};
        Vec3 hi{arr.coords[0][i + 1], arr.coords[1][j + 1], n == 3 ? arr.coords[2][k + 1] : 0.0};
        grow(g.subdomains[it->second], lo, hi);
      }

  root_to_sub.clear();
  for (std::size_t node = 0; node < node_facet.size(); ++node) {
    const auto [a, ia, u, v] = node_facet[node];
    const int r = branch_uf.find(int(node));
    auto it = root_to_sub.find(r);
    if (it == root_to_sub.end()) {
      const int id = int(g.subdomains.size());
      it = root_to_sub.emplace(r, id).first;
      Subdomain s = fresh_box(id, n - 1);
      const auto& f = fractures[arr.facet_fracture(a, ia, u, v)];
      s.parent_fracture = arr.facet_fracture(a, ia, u, v);
      s.perm = f.k_tangential;
      s.aperture = f.aperture;
      s.k_normal = f.k_normal;
      g.subdomains.push_back(s);
    }
    arr.facet_sub_[a][arr.facet_index(a, ia, u, v)] = it->second;
    const auto o = Arrangement::other_axes(a);
    Vec3 lo, hi;
    lo[a] = hi[a] = arr.coords[a][ia];
    lo[o[0]] = arr.coords[o[0]][u];
    hi[o[0]] = arr.coords[o[0]][u + 1];
    if (n == 3) {
      lo[o[1]] = arr.coords[o[1]][v];
      hi[o[1]] = arr.coords[o[1]][v + 1];
    }
    grow(g.subdomains[it->second], lo, hi);
  }

  if (n == 3) {
    root_to_sub.clear();
    for (std::size_t node = 0; node < node_ridge.size(); ++node) {
      const auto [c, ia, ib, jc] = node_ridge[node];
      const int r = line_uf.find(int(node));
      auto it = root_to_sub.find(r);
      if (it == root_to_sub.end()) {
        const int id = int(g.subdomains.size());
        it = root_to_sub.emplace(r, id).first;
        Subdomain s = fresh_box(id, 1);
        const auto& cover = ridge_cover[c][arr.ridge_index(c, ia, ib, jc)];
        for (int fk : cover) {
          const auto& f = fractures[fk];
          if (f.k_tangential >= s.perm || s.aperture == 0.0) {
            s.perm = f.k_tangential;
            s.aperture = f.aperture;
            s.k_normal = f.k_normal;
          }
        }
        g.subdomains.push_back(s);
      }
      arr.ridge_sub_[c][arr.ridge_index(c, ia, ib, jc)] = it->second;
      const auto o = Arrangement::other_axes(c);
      Vec3 lo, hi;
      lo[o[0]] = hi[o[0]] = arr.coords[o[0]][ia];
      lo[o[1]] = hi[o[1]] = arr.coords[o[1]][ib];
      lo[c] = arr.coords[c][jc];
      hi[c] = arr.coords[c][jc + 1];
      grow(g.subdomains[it->second], lo, hi);
    }
  }

  for (const auto& pc : point_corners) {
    const int id = int(g.subdomains.size());
    Subdomain s;
    s.id = id;
    s.dim = 0;
    s.lo = s.hi = {arr.coords[0][pc[0]], arr.coords[1][pc[1]],
                   n == 3 ? arr.coords[2][pc[2]] : 0.0};
    // Coupling parameters inherited from the adjacent network.
    double best = -1.0;
    for (const auto& f : fractures)
      if (detail::covers_point(f, s.lo, n) && f.k_tangential > best) {
        best = f.k_tangential;
        s.perm = f.k_tangential;
        s.aperture = f.aperture;
        s.k_normal = f.k_normal;
      }
    arr.corner_sub_[arr.corner_index(pc[0], pc[1], pc[2])] = id;
    g.subdomains.push_back(s);
  }

  // ---- interfaces, keyed (lower, upper, side) ----
  const auto add_interface = [&](int lower, int upper, int side) {
    const auto key = std::make_tuple(lower, upper, side);
    if (g.iface_key_.count(key)) return;
    Interface gi;
    gi.id = int(g.interfaces.size());
    gi.lower = lower;
    gi.upper = upper;
    gi.side = side;
    gi.gamma = g.subdomains[lower].aperture;
    gi.k_normal = g.subdomains[lower].k_normal;
    g.iface_key_[key] = gi.id;
    g.interfaces.push_back(gi);
  };

  // Rock-side interfaces: lower = fracture branch, upper = rock component.
  for (const auto& [a, ia, u, v] : node_facet) {
    const int branch = arr.facet_branch(a, ia, u, v);
    const auto o = Arrangement::other_axes(a);
    for (int dir = 0; dir < 2; ++dir) {
      int bi[3] = {0, 0, 0};
      bi[a] = ia - 1 + dir;
      bi[o[0]] = u;
      if (n == 3) bi[o[1]] = v;
      const int comp = arr.box_subdomain(bi[0], bi[1], bi[2]);
      add_interface(branch, comp, 2 * a + dir);
    }
  }
  // Plane-line interfaces (3D): lower = 1-d branch, upper = 2-d branch.
  if (n == 3) {
    for (const auto& [c, ia, ib, jc] : node_ridge) {
      const int line = arr.ridge_branch(c, ia, ib, jc);
      const auto o = Arrangement::other_axes(c);
      // Facets on plane-axis o[0] at plane ia: cells (ib-1, jc) and (ib, jc) in (o[1], c).
      for (int dir = 0; dir < 2; ++dir) {
        const int ub = ib - 1 + dir;
        if (ub < 0 || ub >= arr.slabs(o[1])) continue;
        const auto of = Arrangement::other_axes(o[0]);
        const int uu = (of[0] == o[1]) ? ub : jc;
        const int vv = (of[0] == o[1]) ? jc : ub;
        const int br = arr.facet_branch(o[0], ia, uu, vv);
        if (br >= 0) add_interface(line, br, 2 * o[1] + dir);
      }
      for (int dir = 0; dir < 2; ++dir) {
        const int ua = ia - 1 + dir;
        if (ua < 0 || ua >= arr.slabs(o[0])) continue;
        const auto of = Arrangement::other_axes(o[1]);
        const int uu = (of[0] == o[0]) ? ua : jc;
        const int vv = (of[0] == o[0]) ? jc : ua;
        const int br = arr.facet_branch(o[1], ib, uu, vv);
        if (br >= 0) add_interface(line, br, 2 * o[0] + dir);
      }
    }
  }
  // Point interfaces: lower = 0-d subdomain, upper = adjacent 1-d branch.
  if (n == 2) {
    // The four sub-edges adjacent to the corner, grouped by the axis they run
    // along (the fracture carrying them is a plane of the other axis).
    for (const auto& pc : point_corners) {
      const int point = arr.corner_sub_[arr.corner_index(pc[0], pc[1], 0)];
      for (int along = 0; along < 2; ++along) {  // axis the branch runs along
        const int plane_axis = 1 - along;
        for (int dir = 0; dir < 2; ++dir) {
          const int u = pc[along] - 1 + dir;
          if (u < 0 || u >= arr.slabs(along)) continue;
          const int br = arr.facet_branch(plane_axis, pc[plane_axis], u, 0);
          if (br >= 0) add_interface(point, br, 2 * along + dir);
        }
      }
    }
  } else {
    for (const auto& pc : point_corners) {
      const int point = arr.corner_sub_[arr.corner_index(pc[0], pc[1], pc[2])];
      for (int c = 0; c < 3; ++c) {
        const auto o = Arrangement::other_axes(c);
        for (int dir = 0; dir < 2; ++dir) {
          const int jc = pc[c] - 1 + dir;
          if (jc < 0 || jc >= arr.slabs(c)) continue;
          const int br = arr.ridge_sub_[c][arr.ridge_index(c, pc[o[0]], pc[o[1]], jc)];
          if (br >= 0) add_interface(point, br, 2 * c + dir);
        }
      }
    }
  }

  return g;
}

// ---------------------------------------------------------------------------
// validate_geometry
// ---------------------------------------------------------------------------

/// Reports invariant violations; empty result means the geometry is sound.
inline std::vector<std::string> validate_geometry(const MdGeometry& g) {
  std::vector<std::string> out;
  const int n = g.dim();
  for (const auto& s : g.subdomains) {
    if (s.dim < 0 || s.dim > n)
      out.push_back("subdomain " + std::to_string(s.id) + ": dimension out of range");
    if (!(s.perm > 0.0) && s.dim > 0)
      out.push_back("subdomain " + std::to_string(s.id) + ": nonpositive permeability");
  }
  std::vector<int> lower_count(g.subdomains.size(), 0);
  for (const auto& gi : g.interfaces) {
    if (gi.lower < 0 || gi.lower >= int(g.subdomains.size()) || gi.upper < 0 ||
        gi.upper >= int(g.subdomains.size())) {
      out.push_back("interface " + std::to_string(gi.id) + ": subdomain id out of range");
      continue;
    }
    const int dl = g.subdomains[gi.lower].dim;
    const int du = g.subdomains[gi.upper].dim;
    if (du != dl + 1)
      out.push_back("interface " + std::to_string(gi.id) + ": connects dimensions " +
                    std::to_string(dl) + " and " + std::to_string(du));
    if (!(gi.gamma > 0.0) || !(gi.k_normal > 0.0))
      out.push_back("interface " + std::to_string(gi.id) + ": nonpositive gamma or K_nu");
    ++lower_count[gi.lower];
  }
  for (const auto& s : g.subdomains) {
    if (s.dim == n) continue;
    if (lower_count[s.id] == 0)
      out.push_back("subdomain " + std::to_string(s.id) + ": no adjacent interface (empty J set)");
    if (s.dim == 0 && lower_count[s.id] < 2)
      out.push_back("subdomain " + std::to_string(s.id) +
                    ": 0-d subdomain with fewer than 2 adjacent branch ends");
  }
  bool has_dirichlet = false;
  for (int a = 0; a < n; ++a)
    for (int s = 0; s < 2; ++s)
      if (g.boundary[a][s].kind == BoundaryCondition::Kind::Dirichlet) has_dirichlet = true;
  if (!has_dirichlet) out.push_back("boundary: Dirichlet part has zero measure");
  return out;
}

}  // namespace mdflow

#endif  // MDFLOW_GEOMETRY_HPP
