#include "plap/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace plap {
namespace {

struct Tri {
  std::array<int, 3> v;
  std::array<int, 3> n;  // neighbour across the edge opposite v[k]
};

inline int next3(int k) { return k == 2 ? 0 : k + 1; }
inline int prev3(int k) { return k == 0 ? 2 : k - 1; }

class Builder {
 public:
  explicit Builder(std::vector<Point> pts) : pts_(std::move(pts)) {
    double lo_x = pts_[0].x, hi_x = lo_x, lo_y = pts_[0].y, hi_y = lo_y;
    for (const Point& p : pts_) {
      lo_x = std::min(lo_x, p.x);
      hi_x = std::max(hi_x, p.x);
      lo_y = std::min(lo_y, p.y);
      hi_y = std::max(hi_y, p.y);
    }
    scale_ = std::max(hi_x - lo_x, hi_y - lo_y);
  }

  void ear_clip(int n_boundary);
  void make_delaunay();
  void insert(int vertex);
  void refine(double max_edge);

  Triangulation result() && {
    Triangulation out;
    out.vertices = std::move(pts_);
    out.triangles.reserve(tris_.size());
    for (const Tri& t : tris_) out.triangles.push_back(t.v);
    return out;
  }

 private:
  double orient_eps(Point a, Point b) const {
    return 1e-13 * std::max(distance(a, b), 1e-300) * scale_;
  }
  bool incircle_violated(int t, int k) const;
  bool flip_if_illegal(int t, int k);
  void replace_neighbor(int tri, int old_nb, int new_nb) {
    if (tri < 0) return;
    for (int& nb : tris_[tri].n)
      if (nb == old_nb) {
        nb = new_nb;
        return;
      }
  }
  void legalize(int t);
  int locate(Point p, int& on_edge);
  void split_inside(int t, int p);
  void split_edge(int t, int k, int p);

  std::vector<Point> pts_;
  std::vector<Tri> tris_;
  double scale_ = 1.0;
  int last_ = 0;
};

void Builder::ear_clip(int n) {
  std::vector<int> prev(n), next(n);
  for (int i = 0; i < n; ++i) {
    prev[i] = (i + n - 1) % n;
    next[i] = (i + 1) % n;
  }
  std::vector<std::array<int, 3>> raw;
  raw.reserve(n);
  int remaining = n;
  int i = 0;
  int misses = 0;
  while (remaining > 3) {
    const int a = prev[i], b = next[i];
    bool ear = orient(pts_[a], pts_[i], pts_[b]) > orient_eps(pts_[a], pts_[b]);
    if (ear) {
      for (int q = next[b]; q != a; q = next[q]) {
        const Point& pq = pts_[q];
        if (orient(pts_[a], pts_[i], pq) >= 0 && orient(pts_[i], pts_[b], pq) >= 0 &&
            orient(pts_[b], pts_[a], pq) >= 0) {
          ear = false;
          break;
        }
      }
    }
    if (ear) {
      raw.push_back({a, i, b});
      next[a] = b;
      prev[b] = a;
      --remaining;
      misses = 0;
      i = b;
    } else {
      i = next[i];
      if (++misses > remaining) throw InputError("triangulation: polygon has no ear (not simple?)");
    }
  }
  raw.push_back({prev[i], i, next[i]});

  tris_.clear();
  tris_.reserve(raw.size() * 3 + pts_.size() * 2);
  std::unordered_map<std::uint64_t, std::pair<int, int>> edges;
  const auto key = [](int p, int q) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p)) << 32) |
           static_cast<std::uint32_t>(q);
  };
  for (const auto& tv : raw) {
    const int t = static_cast<int>(tris_.size());
    tris_.push_back({tv, {-1, -1, -1}});
    for (int k = 0; k < 3; ++k) {
      const int p = tv[next3(k)], q = tv[prev3(k)];
      auto it = edges.find(key(q, p));
      if (it != edges.end()) {
        tris_[t].n[k] = it->second.first;
        tris_[it->second.first].n[it->second.second] = t;
      } else {
        edges.emplace(key(p, q), std::make_pair(t, k));
      }
    }
  }
}

bool Builder::incircle_violated(int t, int k) const {
  const int u = tris_[t].n[k];
  if (u < 0) return false;
  int m = 0;
  while (tris_[u].n[m] != t) ++m;
  const Point& a = pts_[tris_[t].v[0]];
  const Point& b = pts_[tris_[t].v[1]];
  const Point& c = pts_[tris_[t].v[2]];
  const Point& d = pts_[tris_[u].v[m]];
  const long double adx = a.x - d.x, ady = a.y - d.y;
  const long double bdx = b.x - d.x, bdy = b.y - d.y;
  const long double cdx = c.x - d.x, cdy = c.y - d.y;
  const long double ad = adx * adx + ady * ady;
  const long double bd = bdx * bdx + bdy * bdy;
  const long double cd = cdx * cdx + cdy * cdy;
  const long double det = ad * (bdx * cdy - cdx * bdy) + bd * (cdx * ady - adx * cdy) +
                          cd * (adx * bdy - bdx * ady);
  const long double perm = ad * std::fabs(bdx * cdy) + ad * std::fabs(cdx * bdy) +
                           bd * std::fabs(cdx * ady) + bd * std::fabs(adx * cdy) +
                           cd * std::fabs(adx * bdy) + cd * std::fabs(bdx * ady);
  return det > 1e-10L * perm;
}

// Flips the edge opposite tris_[t].v[k] when it fails the empty-circle test.
// After a flip, tris_[t] and the former neighbour both start with v[k].
bool Builder::flip_if_illegal(int t, int k) {
  if (!incircle_violated(t, k)) return false;
  const int u = tris_[t].n[k];
  int m = 0;
  while (tris_[u].n[m] != t) ++m;
  const int a = tris_[t].v[k], b = tris_[t].v[next3(k)], c = tris_[t].v[prev3(k)];
  const int d = tris_[u].v[m];
  if (orient(pts_[a], pts_[b], pts_[d]) <= 0 || orient(pts_[a], pts_[d], pts_[c]) <= 0) return false;
  const int t_ca = tris_[t].n[next3(k)];
  const int t_ab = tris_[t].n[prev3(k)];
  // u = (d, c, b): opposite c is edge b-d, opposite b is edge d-c.
  const int u_bd = tris_[u].n[next3(m)];
  const int u_dc = tris_[u].n[prev3(m)];
  tris_[t] = {{a, b, d}, {u_bd, u, t_ab}};
  tris_[u] = {{a, d, c}, {u_dc, t_ca, t}};
  replace_neighbor(u_bd, u, t);
  replace_neighbor(t_ca, t, u);
  return true;
}

void Builder::make_delaunay() {
  std::vector<std::pair<int, int>> stack;
  for (int t = 0; t < static_cast<int>(tris_.size()); ++t)
    for (int k = 0; k < 3; ++k)
      if (tris_[t].n[k] > t) stack.emplace_back(t, k);
  std::size_t guard = 0;
  const std::size_t limit = 200 * (tris_.size() + 10) * (tris_.size() + 10);
  while (!stack.empty()) {
    if (++guard > limit) throw NumericalError("triangulation: edge flipping did not terminate");
    auto [t, k] = stack.back();
    stack.pop_back();
    const int u = tris_[t].n[k];
    if (!flip_if_illegal(t, k)) continue;
    for (int j = 0; j < 3; ++j) {
      stack.emplace_back(t, j);
      stack.emplace_back(u, j);
    }
  }
}

void Builder::legalize(int start) {
  // Every triangle on the stack has the freshly inserted point at v[0].
  std::vector<int> stack{start};
  while (!stack.empty()) {
    const int t = stack.back();
    stack.pop_back();
    const int u = tris_[t].n[0];
    if (flip_if_illegal(t, 0)) {
      stack.push_back(t);
      stack.push_back(u);
    }
  }
}

int Builder::locate(Point p, int& on_edge) {
  const auto classify = [&](int t, int& edge) {
    // 1 inside/on, 0 outside; `edge` set when p sits on an edge.
    edge = -1;
    for (int k = 0; k < 3; ++k) {
      const Point& b = pts_[tris_[t].v[next3(k)]];
      const Point& c = pts_[tris_[t].v[prev3(k)]];
      const double o = orient(b, c, p);
      if (o < -orient_eps(b, c)) return 0;
      if (o <= orient_eps(b, c)) edge = k;
    }
    return 1;
  };
  int t = std::min<int>(last_, static_cast<int>(tris_.size()) - 1);
  const std::size_t max_steps = tris_.size() + 16;
  for (std::size_t step = 0; step < max_steps; ++step) {
    int moved = -1;
    for (int k = 0; k < 3; ++k) {
      const Point& b = pts_[tris_[t].v[next3(k)]];
      const Point& c = pts_[tris_[t].v[prev3(k)]];
      if (orient(b, c, p) < -orient_eps(b, c)) {
        moved = tris_[t].n[k];
        if (moved >= 0) break;
      }
    }
    if (moved < 0) break;
    t = moved;
  }
  if (classify(t, on_edge)) return t;
  for (int s = 0; s < static_cast<int>(tris_.size()); ++s)
    if (classify(s, on_edge)) return s;
  return -1;
}

void Builder::split_inside(int t, int p) {
  const auto [a, b, c] = tris_[t].v;
  const auto [na, nb, nc] = tris_[t].n;
  const int t1 = static_cast<int>(tris_.size());
  const int t2 = t1 + 1;
  tris_[t] = {{p, b, c}, {na, t1, t2}};
  tris_.push_back({{p, c, a}, {nb, t2, t}});
  tris_.push_back({{p, a, b}, {nc, t, t1}});
  replace_neighbor(nb, t, t1);
  replace_neighbor(nc, t, t2);
  legalize(t);
  legalize(t1);
  legalize(t2);
  last_ = t;
}

void Builder::split_edge(int t, int k, int p) {
  const int a = tris_[t].v[k], b = tris_[t].v[next3(k)], c = tris_[t].v[prev3(k)];
  const int u = tris_[t].n[k];
  const int t_ca = tris_[t].n[next3(k)];
  const int t_ab = tris_[t].n[prev3(k)];
  const int t1 = static_cast<int>(tris_.size());
  if (u < 0) {
    tris_[t] = {{p, a, b}, {t_ab, -1, t1}};
    tris_.push_back({{p, c, a}, {t_ca, t, -1}});
    replace_neighbor(t_ca, t, t1);
    legalize(t);
    legalize(t1);
    last_ = t;
    return;
  }
  int m = 0;
  while (tris_[u].n[m] != t) ++m;
  const int d = tris_[u].v[m];
  const int u_bd = tris_[u].n[next3(m)];
  const int u_dc = tris_[u].n[prev3(m)];
  const int t3 = t1 + 1;
  tris_[t] = {{p, a, b}, {t_ab, t3, t1}};
  tris_.push_back({{p, c, a}, {t_ca, t, u}});
  tris_[u] = {{p, d, c}, {u_dc, t1, t3}};
  tris_.push_back({{p, b, d}, {u_bd, u, t}});
  replace_neighbor(t_ca, t, t1);
  replace_neighbor(u_bd, u, t3);
  legalize(t);
  legalize(t1);
  legalize(u);
  legalize(t3);
  last_ = t;
}

void Builder::insert(int vertex) {
  int edge = -1;
  const int t = locate(pts_[vertex], edge);
  if (t < 0) throw InputError("triangulation: interior point lies outside the boundary polygon");
  if (edge >= 0)
    split_edge(t, edge, vertex);
  else
    split_inside(t, vertex);
}

void Builder::refine(double max_edge) {
  for (int round = 0; round < 64; ++round) {
    std::vector<std::pair<int, int>> long_edges;
    for (const Tri& t : tris_) {
      for (int k = 0; k < 3; ++k) {
        const int p = t.v[next3(k)], q = t.v[prev3(k)];
        if (t.n[k] >= 0 && p < q && distance(pts_[p], pts_[q]) > max_edge)
          long_edges.emplace_back(p, q);
      }
    }
    if (long_edges.empty()) return;
    std::sort(long_edges.begin(), long_edges.end(), [&](auto e, auto f) {
      return distance(pts_[e.first], pts_[e.second]) > distance(pts_[f.first], pts_[f.second]);
    });
    for (auto [p, q] : long_edges) {
      // The edge may have been flipped away by an earlier insertion.
      bool still_there = false;
      for (const Tri& t : tris_) {
        for (int k = 0; k < 3 && !still_there; ++k)
          still_there = t.v[next3(k)] == p && t.v[prev3(k)] == q;
        if (still_there) break;
      }
      if (!still_there) continue;
      pts_.push_back(0.5 * (pts_[p] + pts_[q]));
      insert(static_cast<int>(pts_.size()) - 1);
    }
  }
}

}  // namespace

Triangulation constrained_delaunay(std::span<const Point> boundary,
                                   std::span<const Point> interior, double max_edge) {
  if (boundary.size() < 3) throw InputError("triangulation: boundary needs at least 3 points");
  std::vector<Point> pts(boundary.begin(), boundary.end());
  pts.insert(pts.end(), interior.begin(), interior.end());
  Builder builder(std::move(pts));
  builder.ear_clip(static_cast<int>(boundary.size()));
  builder.make_delaunay();
  const int nb = static_cast<int>(boundary.size());
  for (int i = 0; i < static_cast<int>(interior.size()); ++i) builder.insert(nb + i);
  if (max_edge > 0.0) builder.refine(max_edge);
  return std::move(builder).result();
}

}  // namespace plap
