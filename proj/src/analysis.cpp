#include "plap/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>

#include "plap/kernels.hpp"

namespace plap {

std::string to_string(Region r) {
  switch (r) {
    case Region::Positive: return "u>0";
    case Region::Negative: return "u<0";
    case Region::Zero: return "u=0";
    case Region::Boundary: return "boundary";
  }
  return "?";
}

std::optional<LocalFit> fit_quadratic(std::span<const double> u, const Mesh& mesh, int vertex) {
  std::vector<int> ring;
  for (int a : mesh.neighbors_of(vertex)) {
    ring.push_back(a);
    for (int b : mesh.neighbors_of(a))
      if (b != vertex) ring.push_back(b);
  }
  std::sort(ring.begin(), ring.end());
  ring.erase(std::unique(ring.begin(), ring.end()), ring.end());

  const int unknowns = mesh.dim == 1 ? 2 : 5;
  const std::size_t needed = mesh.dim == 1 ? 2 : 6;
  if (ring.size() < needed) return std::nullopt;

  const Point x0 = mesh.vertices[vertex];
  const double h = mesh.h;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(ring.size()), unknowns);
  Eigen::VectorXd b(static_cast<Eigen::Index>(ring.size()));
  for (std::size_t r = 0; r < ring.size(); ++r) {
    const Point d = (1.0 / h) * (mesh.vertices[ring[r]] - x0);
    const double w = 1.0 / (1.0 + dot(d, d));
    const auto i = static_cast<Eigen::Index>(r);
    if (mesh.dim == 1) {
      a(i, 0) = w * d.x;
      a(i, 1) = w * 0.5 * d.x * d.x;
    } else {
      a(i, 0) = w * d.x;
      a(i, 1) = w * d.y;
      a(i, 2) = w * 0.5 * d.x * d.x;
      a(i, 3) = w * d.x * d.y;
      a(i, 4) = w * 0.5 * d.y * d.y;
    }
    b(i) = w * (u[ring[r]] - u[vertex]);
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < unknowns) return std::nullopt;
  const Eigen::VectorXd c = qr.solve(b);
  LocalFit fit;
  if (mesh.dim == 1) {
    fit.gradient = {c(0) / h, 0.0};
    fit.hxx = c(1) / (h * h);
  } else {
    fit.gradient = {c(0) / h, c(1) / h};
    fit.hxx = c(2) / (h * h);
    fit.hxy = c(3) / (h * h);
    fit.hyy = c(4) / (h * h);
  }
  return fit;
}

namespace {

struct PointEval {
  bool skipped = true;
  bool boundary = false;
  double value = 0.0;
  LocalFit fit;
  std::vector<Point> normals;
};

// Violation at one point for a given zero band.
double violation(const PointEval& e, double lambda, double band, Region& region) {
  const double grad = norm(e.fit.gradient);
  const double minus_inf_lap = -e.fit.infinity_laplacian();
  const double u = e.value;
  if (!e.boundary) {
    if (u > band) {
      region = Region::Positive;
      return std::fabs(std::min(grad - lambda * u, minus_inf_lap));
    }
    if (u < -band) {
      region = Region::Negative;
      return std::fabs(std::max(lambda * std::fabs(u) - grad, minus_inf_lap));
    }
    region = Region::Zero;
    return std::fabs(minus_inf_lap);
  }
  region = Region::Boundary;
  double first_order = minus_inf_lap;
  if (u > band) first_order = grad - lambda * u;
  if (u < -band) first_order = lambda * std::fabs(u) - grad;
  double sub = std::numeric_limits<double>::infinity();
  double super = std::numeric_limits<double>::infinity();
  for (const Point& n : e.normals) {
    const double dn = dot(e.fit.gradient, n);
    sub = std::min(sub, std::max(0.0, std::min(first_order, dn)));
    super = std::min(super, std::max(0.0, -std::max(first_order, dn)));
  }
  return std::max(sub, super);
}

}  // namespace

ResidualReport infinity_residuals(const ScalarField& u, double lambda, const Mesh& mesh, double tol) {
  if (u.size() != mesh.num_vertices()) throw InputError("infinity_residuals: field does not match the mesh");
  if (!(lambda > 0)) throw InputError("infinity_residuals: lambda must be positive");
  const long n = static_cast<long>(mesh.num_vertices());
  std::vector<PointEval> evals(n);
#pragma omp parallel for schedule(dynamic, 64)
  for (long v = 0; v < n; ++v) {
    const auto fit = fit_quadratic(u.values, mesh, static_cast<int>(v));
    if (!fit) continue;
    evals[v].skipped = false;
    evals[v].fit = *fit;
    evals[v].value = u.values[v];
    evals[v].boundary = mesh.on_boundary[v] != 0;
    if (evals[v].boundary) evals[v].normals = mesh.boundary_normals(static_cast<int>(v));
  }

  ResidualReport rep;
  rep.lambda = lambda;
  rep.tolerance = tol;
  rep.zero_band = 1e-3 * u.max_abs();
  for (long v = 0; v < n; ++v) {
    if (evals[v].skipped) {
      ++rep.n_skipped;
      continue;
    }
    ++rep.n_points;
    Region region{};
    const double r = violation(evals[v], lambda, rep.zero_band, region);
    rep.points.push_back({mesh.vertices[v], region, r});
    if (region == Region::Boundary)
      rep.max_boundary_violation = std::max(rep.max_boundary_violation, r);
    else
      rep.max_interior_violation = std::max(rep.max_interior_violation, r);
    Region ignored{};
    rep.max_violation_half_band =
        std::max(rep.max_violation_half_band, violation(evals[v], lambda, 0.5 * rep.zero_band, ignored));
    rep.max_violation_double_band =
        std::max(rep.max_violation_double_band, violation(evals[v], lambda, 2.0 * rep.zero_band, ignored));
  }
  rep.pass = rep.n_points > 0 && rep.max_interior_violation <= tol && rep.max_boundary_violation <= tol;
  return rep;
}

FpResidual fp_residual(const ScalarField& u, double p, double lambda_p, const Mesh& mesh, double exclude) {
  if (!(p > 2.0)) throw InputError("fp_residual: requires p > 2 (use euler_residual for p = 2)");
  if (u.size() != mesh.num_vertices()) throw InputError("fp_residual: field does not match the mesh");
  FpResidual out;
  const double M = u.max_abs();
  if (M == 0.0) {
    out.inconclusive = true;
    return out;
  }
  Point lo = mesh.vertices[0], hi = lo;
  for (const Point& q : mesh.vertices) {
    lo = {std::min(lo.x, q.x), std::min(lo.y, q.y)};
    hi = {std::max(hi.x, q.x), std::max(hi.y, q.y)};
  }
  const double extent = distance(lo, hi);
  const double grad_floor = 1e-6 * M / extent;

  std::vector<Point> grads(mesh.num_cells());
  kernels::parallel::cell_gradients(mesh, u.values, grads);
  double gmax = 0.0;
  for (const Point& g : grads) gmax = std::max(gmax, norm(g));

  // log of the normalization lambda^p ||u||_p^(p-1), or a gradient scale when lambda = 0.
  const double log_scale = lambda_p > 0 ? p * std::log(lambda_p) + (p - 1.0) * std::log(p_norm(u, p, mesh))
                                        : (p - 1.0) * std::log(gmax) - std::log(extent);
  const double log_norm = lambda_p > 0 ? std::log(p_norm(u, p, mesh)) : 0.0;

  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const double val = u.values[v];
    if (mesh.on_boundary[v] || std::fabs(val) <= exclude * M || std::fabs(val) >= (1.0 - exclude) * M) {
      if (!mesh.on_boundary[v]) ++out.n_skipped;
      continue;
    }
    const auto fit = fit_quadratic(u.values, mesh, static_cast<int>(v));
    const double g = fit ? norm(fit->gradient) : 0.0;
    if (!fit || g < grad_floor) {
      ++out.n_skipped;
      continue;
    }
    const double lg = std::log(g);
    const double common = std::exp((p - 2.0) * lg - log_scale);
    double f = -(p - 2.0) * fit->infinity_laplacian() / (g * g) * common - fit->laplacian() * common;
    if (lambda_p > 0 && val != 0.0) {
      const double mass = std::exp((p - 1.0) * (std::log(std::fabs(val)) - log_norm));
      f -= val > 0 ? mass : -mass;
    }
    out.max_normalized = std::max(out.max_normalized, std::fabs(f));
    ++out.n_evaluated;
  }
  out.inconclusive = out.n_evaluated == 0;
  return out;
}

bool PropertyVerdicts::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& kv) { return kv.second.pass; });
}

namespace {

// Number of connected components of {sign * u > band} without a boundary vertex.
int interior_components(const Mesh& mesh, std::span<const double> u, double sign, double band) {
  const std::size_t n = mesh.num_vertices();
  std::vector<char> seen(n, 0);
  int closed = 0;
  std::vector<int> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s] || !(sign * u[s] > band)) continue;
    bool touches = false;
    stack.assign(1, static_cast<int>(s));
    seen[s] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      touches = touches || mesh.on_boundary[v];
      for (int w : mesh.neighbors_of(v))
        if (!seen[w] && sign * u[w] > band) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    if (!touches) ++closed;
  }
  return closed;
}

}  // namespace

PropertyVerdicts property_checks(const EigenResult& res, const Domain& domain, const Mesh& mesh) {
  const auto& u = res.u.values;
  PropertyVerdicts out;
  const auto [mn, mx] = std::minmax_element(u.begin(), u.end());
  out.argmax = static_cast<int>(mx - u.begin());
  out.argmin = static_cast<int>(mn - u.begin());
  const double umax = *mx, umin = *mn;
  const double amax = std::max(std::fabs(umax), std::fabs(umin));
  const double h = mesh.h;

  auto& v = out.verdicts;
  v["sign_change"] = {umin < 0 && umax > 0, true, amax > 0 ? std::min(umax, -umin) / amax : 0.0, 0.0};
  {
    const double asym = umax > 0 ? std::fabs(umax + umin) / umax : std::numeric_limits<double>::infinity();
    v["sup_inf_symmetry"] = {asym <= 0.05, true, asym, 0.05};
  }
  {
    const int on = (mesh.on_boundary[out.argmax] ? 1 : 0) + (mesh.on_boundary[out.argmin] ? 1 : 0);
    v["hotspot_on_boundary"] = {on == 2, true, static_cast<double>(on), 2.0};
  }

  const Point pmax = mesh.vertices[out.argmax], pmin = mesh.vertices[out.argmin];
  const DiameterResult diam = intrinsic_diameter(domain);
  Point seg_a = diam.first, seg_b = diam.second;  // from the max towards the min
  double offset = std::numeric_limits<double>::infinity();
  if (domain.kind() == DomainKind::Disk) {
    // Every antipodal pair realizes the diameter.
    const Point c = domain.center();
    const double r = domain.radius();
    offset = std::max({std::fabs(distance(pmax, c) - r), std::fabs(distance(pmin, c) - r),
                       0.5 * norm((pmax - c) + (pmin - c))});
    const Point dir = pmax - pmin;
    const Point axis = norm(dir) > 0 ? (1.0 / norm(dir)) * dir : Point{1.0, 0.0};
    seg_a = c + r * axis;
    seg_b = c - r * axis;
  } else {
    for (const auto& [a, b] : diam.maximal_pairs) {
      const double ab = std::max(distance(pmax, a), distance(pmin, b));
      const double ba = std::max(distance(pmax, b), distance(pmin, a));
      if (ab < offset) {
        offset = ab;
        seg_a = a;
        seg_b = b;
      }
      if (ba < offset) {
        offset = ba;
        seg_a = b;
        seg_b = a;
      }
    }
  }
  v["hotspot_at_diameter_endpoints"] = {offset <= 3.0 * h, true, offset, 3.0 * h};

  {
    const double band = 1e-3 * amax;
    const int closed = interior_components(mesh, u, 1.0, band) + interior_components(mesh, u, -1.0, band);
    v["no_closed_nodal_domain"] = {closed == 0, true, static_cast<double>(closed), 0.0};
  }

  {
    // Median slope of the interpolant along the diameter segment.
    Verdict cone{false, true, std::numeric_limits<double>::infinity(), 0.10};
    bool straight = domain.is_convex();
    if (!straight) straight = std::fabs(geodesic_distance(domain, seg_a, seg_b) - distance(seg_a, seg_b)) < 1e-12;
    if (straight) {
      const MeshLocator locator(mesh);
      const int samples = 200;
      std::vector<double> vals, ts;
      for (int k = 0; k <= samples; ++k) {
        const double t = static_cast<double>(k) / samples;
        const double val = locator.interpolate(u, seg_a + t * (seg_b - seg_a));
        if (std::isfinite(val)) {
          vals.push_back(val);
          ts.push_back(t);
        }
      }
      const double len = distance(seg_a, seg_b);
      std::vector<double> slopes;
      for (std::size_t k = 1; k < vals.size(); ++k)
        slopes.push_back(std::fabs(vals[k] - vals[k - 1]) / ((ts[k] - ts[k - 1]) * len));
      if (!slopes.empty()) {
        std::nth_element(slopes.begin(), slopes.begin() + slopes.size() / 2, slopes.end());
        const double median = slopes[slopes.size() / 2];
        const double target = res.lambda_p * amax;
        cone.measured = std::fabs(median - target) / target;
        cone.pass = cone.measured <= cone.threshold;
      }
    } else {
      cone.applicable = false;
    }
    v["cone_slope"] = cone;
  }
  return out;
}

DistanceCheck distance_inequality_check(const ScalarField& u, double lambda, const Mesh& mesh) {
  if (!(lambda > 0)) throw InputError("distance_inequality_check: lambda must be positive");
  DistanceCheck out;
  double umax = -std::numeric_limits<double>::infinity();
  for (double x : u.values) umax = std::max(umax, x);
  if (!(umax > 0)) return out;
  const double scale = (1.0 / lambda) / umax;
  std::vector<Point> pos, neg;
  std::vector<double> pos_val;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double val = scale * u.values[i];
    if (val >= 0) {
      pos.push_back(mesh.vertices[i]);
      pos_val.push_back(val);
    }
    if (val <= 0) neg.push_back(mesh.vertices[i]);
  }
  if (neg.empty()) return out;
  out.applicable = true;

  std::vector<Point> grads(mesh.num_cells());
  kernels::parallel::cell_gradients(mesh, u.values, grads);
  double gmax = 0.0;
  for (const Point& g : grads) gmax = std::max(gmax, norm(g));
  out.tolerance = 3.0 * mesh.h * scale * gmax;

  std::vector<double> dist(pos.size());
  kernels::parallel::min_distances(pos, neg, dist);
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pos.size(); ++i)
    out.worst_margin = std::min(out.worst_margin, dist[i] - pos_val[i] + out.tolerance);
  out.holds = out.worst_margin >= 0;
  return out;
}

}  // namespace plap
