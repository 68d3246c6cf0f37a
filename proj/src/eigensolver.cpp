#include "plap/eigensolver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <limits>
#include <numbers>
#include <random>

#include "plap/kernels.hpp"

namespace plap {

void SolverOptions::validate() const {
  if (max_iters <= 0) throw InputError("solver.max_iters must be positive");
  if (!(step0 > 0)) throw InputError("solver.step0 must be positive");
  if (!(backtrack > 0 && backtrack < 1)) throw InputError("solver.backtrack must lie in (0,1)");
  if (!(tol_rel > 0)) throw InputError("solver.tol_rel must be positive");
  if (restarts <= 0) throw InputError("solver.restarts must be positive");
  if (!(constraint_tol > 0)) throw InputError("solver.constraint_tol must be positive");
}

namespace {

constexpr double kShift = 0.05;        // lumped-mass shift in the preconditioner
constexpr double kWeightFloor = 1e-12;  // relative floor on |grad u|^(p-2), |u|^(p-2)
constexpr double kTipRounding = 1.5;    // certificate cone tip radius, in mesh widths

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

/// Unit-norm feasible point from an arbitrary field.
ScalarField make_feasible(const Mesh& mesh, std::span<const double> values, double p, double tol) {
  for (double v : values)
    if (!std::isfinite(v)) throw NumericalError("minimize_rayleigh: non-finite iterate");
  ScalarField f(mesh);
  std::copy(values.begin(), values.end(), f.values.begin());
  ScalarField out = project_constraint(f, p, mesh, tol).field;
  const double nrm = p_norm(out, p, mesh);
  if (!(nrm > 0) || !std::isfinite(nrm)) throw NumericalError("minimize_rayleigh: zero or non-finite norm");
  for (double& v : out.values) v /= nrm;
  return out;
}

class Preconditioner {
 public:
  explicit Preconditioner(const Mesh& mesh) : mesh_(mesh) {
    const int k = mesh.nodes_per_cell();
    triplets_.reserve(mesh.num_cells() * k * k + mesh.num_vertices());
    assemble(std::vector<double>(mesh.num_cells(), 1.0), std::vector<double>(mesh.num_vertices(), 1.0));
    solver_.analyzePattern(matrix_);
  }

  /// P = sum_c omega_c grad phi grad phi^T + diag(mass); false if singular.
  bool factorize(const std::vector<double>& cell_weight, const std::vector<double>& mass) {
    assemble(cell_weight, mass);
    solver_.factorize(matrix_);
    return solver_.info() == Eigen::Success;
  }

  std::vector<double> solve(const std::vector<double>& rhs) {
    const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    const Eigen::VectorXd x = solver_.solve(b);
    return {x.data(), x.data() + x.size()};
  }

 private:
  void assemble(const std::vector<double>& cell_weight, const std::vector<double>& mass) {
    triplets_.clear();
    const int k = mesh_.nodes_per_cell();
    for (std::size_t c = 0; c < mesh_.num_cells(); ++c) {
      const auto& cell = mesh_.cells[c];
      const auto& g = mesh_.basis_gradients[c];
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          triplets_.emplace_back(cell[a], cell[b], cell_weight[c] * dot(g[a], g[b]));
    }
    for (std::size_t i = 0; i < mesh_.num_vertices(); ++i) triplets_.emplace_back(i, i, mass[i]);
    const auto n = static_cast<Eigen::Index>(mesh_.num_vertices());
    matrix_.resize(n, n);
    matrix_.setFromTriplets(triplets_.begin(), triplets_.end());
  }

  const Mesh& mesh_;
  std::vector<Eigen::Triplet<double>> triplets_;
  Eigen::SparseMatrix<double> matrix_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
};

}  // namespace

EigenResult minimize_rayleigh(const Mesh& mesh, double p, const ScalarField& init, const SolverOptions& opts) {
  opts.validate();
  if (!(p > 1.0) || !std::isfinite(p)) throw InputError("minimize_rayleigh: p must be finite and > 1");
  if (init.size() != mesh.num_vertices()) throw InputError("minimize_rayleigh: init does not match the mesh");

  const std::size_t nv = mesh.num_vertices(), nc = mesh.num_cells();
  EigenResult res;
  res.p = p;
  res.u = make_feasible(mesh, init.values, p, opts.constraint_tol);
  double rayleigh = rayleigh_quotient(res.u, p, mesh);
  if (!std::isfinite(rayleigh)) throw NumericalError("minimize_rayleigh: non-finite initial Rayleigh value");
  res.initial_rayleigh = rayleigh;
  res.trace.push_back({0, rayleigh, 0.0, constraint_value(res.u, p, mesh)});

  Preconditioner precond(mesh);
  std::vector<Point> grads(nc);
  std::vector<double> flux(nv), direction(nv), trial(nv), cell_weight(nc), mass(nv), rhs(nv);
  double step = opts.step0;

  int it = 1;
  for (; it <= opts.max_iters; ++it) {
    const auto& u = res.u.values;
    kernels::parallel::cell_gradients(mesh, u, grads);
    const std::vector<double> mags = kernels::magnitudes(grads);
    const double G = max_abs(mags), M = max_abs(u);
    if (!(G > 0)) throw NumericalError("minimize_rayleigh: iterate became constant");
    const double energy = kernels::parallel::power_sum(mesh.cell_measures, mags, G, p);
    const double mass_sum = kernels::parallel::power_sum(mesh.vertex_weights, u, M, p);
    kernels::parallel::energy_gradient(mesh, grads, G, p, flux);

    // grad log R = K(u)u / E - W(u) / N, both factored by the maxima.
    for (std::size_t i = 0; i < nv; ++i) {
      const double r = std::fabs(u[i]) / M;
      const double wpow = r == 0.0 ? (p == 2.0 ? 1.0 : 0.0) : std::pow(r, p - 2.0);
      rhs[i] = flux[i] / (G * energy) - mesh.vertex_weights[i] * wpow * (u[i] / M) / (M * mass_sum);
      mass[i] = kShift * mesh.vertex_weights[i] * std::max(wpow, kWeightFloor) / (M * M * mass_sum);
    }
    for (std::size_t c = 0; c < nc; ++c) {
      const double r = mags[c] / G;
      const double gpow = r == 0.0 ? (p == 2.0 ? 1.0 : 0.0) : std::pow(r, p - 2.0);
      cell_weight[c] = mesh.cell_measures[c] * std::max(gpow, kWeightFloor) / (G * G * energy);
    }
    if (precond.factorize(cell_weight, mass)) {
      direction = precond.solve(rhs);
    } else {
      direction = rhs;
    }

    // Backtracking on the Rayleigh value of the projected, normalized trial.
    double s = std::min(1.0, step);
    bool accepted = false;
    double next_rayleigh = rayleigh;
    ScalarField next;
    while (s >= 1e-12) {
      for (std::size_t i = 0; i < nv; ++i) trial[i] = u[i] - s * direction[i];
      try {
        next = make_feasible(mesh, trial, p, opts.constraint_tol);
        next_rayleigh = rayleigh_quotient(next, p, mesh);
      } catch (const InputError&) {
        next_rayleigh = std::numeric_limits<double>::infinity();
      }
      if (std::isfinite(next_rayleigh) && next_rayleigh < rayleigh) {
        accepted = true;
        break;
      }
      s *= opts.backtrack;
    }
    if (!accepted) {
      res.converged = true;
      break;
    }
    const double decrease = (rayleigh - next_rayleigh) / rayleigh;
    res.u = std::move(next);
    rayleigh = next_rayleigh;
    res.trace.push_back({it, rayleigh, s, constraint_value(res.u, p, mesh)});
    step = std::min(1.0, s / opts.backtrack);
    if (decrease < opts.tol_rel) {
      res.converged = true;
      break;
    }
  }
  res.iterations = std::min(it, opts.max_iters);
  res.lambda_p = rayleigh;
  res.final_constraint = constraint_value(res.u, p, mesh);
  {
    std::vector<double> absu(nv);
    for (std::size_t i = 0; i < nv; ++i) absu[i] = std::fabs(res.u.values[i]);
    const double M = max_abs(absu);
    res.constraint_scale = std::pow(M, p - 1.0) * kernels::parallel::power_sum(mesh.vertex_weights, absu, M, p - 1.0);
  }
  res.euler_residual = euler_residual(res, mesh);
  return res;
}

double euler_residual(const EigenResult& res, const Mesh& mesh) {
  const double p = res.p;
  const auto& u = res.u.values;
  const std::size_t nv = mesh.num_vertices();
  std::vector<Point> grads(mesh.num_cells());
  kernels::parallel::cell_gradients(mesh, u, grads);
  const double G = max_abs(kernels::magnitudes(grads));
  const double M = max_abs(u);
  if (M == 0.0) return 0.0;

  std::vector<double> mass_term(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    const double r = std::fabs(u[i]) / M;
    mass_term[i] = mesh.vertex_weights[i] * (r == 0.0 ? 0.0 : std::pow(r, p - 2.0)) * (u[i] / M);
  }
  if (G == 0.0) return max_abs(mass_term) > 0 && res.lambda_p > 0 ? 1.0 : 0.0;

  // Both terms divided by G^(p-1): stiffness part is the factored flux,
  // the mass part picks up Lambda^p M^(p-1) / G^(p-1).
  std::vector<double> flux(nv);
  kernels::parallel::energy_gradient(mesh, grads, G, p, flux);
  const double ratio = std::exp(p * std::log(res.lambda_p) + (p - 1.0) * (std::log(M) - std::log(G)));
  double worst = 0.0, ref_flux = 0.0, ref_mass = 0.0;
  for (std::size_t i = 0; i < nv; ++i) {
    const double m = ratio * mass_term[i];
    worst = std::max(worst, std::fabs(flux[i] - m));
    ref_flux = std::max(ref_flux, std::fabs(flux[i]));
    ref_mass = std::max(ref_mass, std::fabs(m));
  }
  const double ref = std::max(ref_flux, ref_mass);
  return ref > 0 ? worst / ref : 0.0;
}

double payne_weinberger_bound(double p, double diam) {
  if (!(p > 1.0)) throw InputError("payne_weinberger_bound: p must exceed 1");
  if (!(diam > 0.0)) throw InputError("payne_weinberger_bound: diameter must be positive");
  return std::exp(std::log(p - 1.0) / p) * 2.0 * std::numbers::pi / (p * diam * std::sin(std::numbers::pi / p));
}

Extrapolation extrapolate_limit(std::span<const std::pair<double, double>> lambdas) {
  Extrapolation out;
  if (lambdas.empty()) throw InputError("extrapolate_limit: no data");
  out.last = lambdas.back().second;
  if (lambdas.size() < 3) {
    out.limit = out.last;
    out.flagged = true;
    return out;
  }
  const auto tail = lambdas.subspan(lambdas.size() - 3);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [p, lam] : tail) {
    const double x = 1.0 / p;
    sx += x;
    sy += lam;
    sxx += x * x;
    sxy += x * lam;
  }
  const double n = 3.0;
  const double det = n * sxx - sx * sx;
  if (!(std::fabs(det) > 0)) {
    out.limit = out.last;
    out.flagged = true;
    return out;
  }
  out.slope = (n * sxy - sx * sy) / det;
  out.limit = (sy - out.slope * sx) / n;
  return out;
}

double upper_bound_certificate(const Mesh& mesh, const Domain& domain, Point x0, double p) {
  ScalarField dist = geodesic_distance(domain, x0, mesh);
  if (mesh.dim == 2) {
    // Round the cone tip: the interpolated tip has cell gradients up to
    // 1/cos(angle/2), which dominate the p-norm at large p. phi(d) stays
    // 1-Lipschitz, so the field remains a Step-1 type test function.
    const double r = kTipRounding * mesh.h;
    for (double& d : dist.values)
      if (d < r) d = 0.5 * (r + d * d / r);
  }
  const Projection proj = project_constraint(dist, p, mesh);
  return rayleigh_quotient(proj.field, p, mesh);
}

ScalarField initial_guess(const Domain& domain, const Mesh& mesh, std::uint64_t seed) {
  const DiameterResult diam = intrinsic_diameter(domain);
  const Point axis = (1.0 / norm(diam.second - diam.first)) * (diam.second - diam.first);
  const Point center = domain.centroid();
  ScalarField f(mesh);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    f.values[i] = dot(mesh.vertices[i] - center, axis);
    lo = std::min(lo, f.values[i]);
    hi = std::max(hi, f.values[i]);
  }
  std::mt19937_64 gen(seed);
  const double amp = 0.01 * (hi - lo);
  for (double& v : f.values) v += amp * (2.0 * uniform01(gen) - 1.0);
  return f;
}

void normalize_sign(ScalarField& u, const Domain& domain, const Mesh& mesh) {
  const int v = mesh.nearest_vertex(intrinsic_diameter(domain).first);
  if (u.values[v] < 0)
    for (double& x : u.values) x = -x;
}

std::vector<double> default_p_schedule() { return {2, 4, 8, 16, 32, 64, 128}; }

SweepReport sweep_p(const Domain& domain, const Mesh& mesh, std::span<const double> p_schedule,
                    const SolverOptions& opts) {
  opts.validate();
  if (p_schedule.empty()) throw InputError("p_schedule: empty");
  if (!(p_schedule.front() >= 2.0)) throw InputError("p_schedule: first entry must be >= 2");
  for (std::size_t i = 1; i < p_schedule.size(); ++i)
    if (!(p_schedule[i] > p_schedule[i - 1])) throw InputError("p_schedule: must be strictly increasing");

  SweepReport rep;
  rep.diameter = intrinsic_diameter(domain).value;
  rep.lambda_inf_exact = 2.0 / rep.diameter;

  for (std::size_t k = 0; k < p_schedule.size(); ++k) {
    const double p = p_schedule[k];
    try {
      std::vector<EigenResult> candidates;
      double warm = std::numeric_limits<double>::quiet_NaN();
      if (k > 0) {
        const ScalarField start = make_feasible(mesh, rep.results.back().u.values, p, opts.constraint_tol);
        warm = rayleigh_quotient(start, p, mesh);
        candidates.push_back(minimize_rayleigh(mesh, p, start, opts));
      }
      const int fresh = k == 0 ? opts.restarts : opts.restarts - 1;
      for (int r = 0; r < fresh; ++r) {
        const std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(k == 0 ? r : r + 1);
        candidates.push_back(minimize_rayleigh(mesh, p, initial_guess(domain, mesh, seed), opts));
      }
      std::size_t best = 0;
      double lo = candidates[0].lambda_p, hi = lo;
      for (std::size_t c = 1; c < candidates.size(); ++c) {
        lo = std::min(lo, candidates[c].lambda_p);
        hi = std::max(hi, candidates[c].lambda_p);
        if (candidates[c].lambda_p < candidates[best].lambda_p) best = c;
      }
      EigenResult chosen = std::move(candidates[best]);
      normalize_sign(chosen.u, domain, mesh);
      rep.results.push_back(std::move(chosen));
      rep.warm_start_rayleigh.push_back(warm);
      rep.restart_spread.push_back((hi - lo) / lo);
      rep.pw_bounds.push_back(payne_weinberger_bound(p, rep.diameter));
    } catch (const NumericalError& e) {
      rep.complete = false;
      rep.failure = "p=" + std::to_string(p) + ": " + e.what();
      break;
    }
  }

  std::vector<std::pair<double, double>> pairs;
  for (const auto& r : rep.results) pairs.emplace_back(r.p, r.lambda_p);
  if (!pairs.empty()) {
    const Extrapolation ex = extrapolate_limit(pairs);
    rep.lambda_inf_estimate = ex.limit;
    rep.lambda_inf_last = ex.last;
    rep.extrapolation_flagged = ex.flagged;
  } else {
    rep.extrapolation_flagged = true;
  }

  bool pw = true, warm_ok = true, agree = true, feasible = true;
  for (std::size_t i = 0; i < rep.results.size(); ++i) {
    const auto& r = rep.results[i];
    pw = pw && r.lambda_p >= rep.pw_bounds[i] * (1.0 - 0.01);
    agree = agree && rep.restart_spread[i] <= 0.01;
    if (i > 0) {
      const double w = rep.warm_start_rayleigh[i], prev = rep.results[i - 1].lambda_p;
      warm_ok = warm_ok && std::isfinite(w) && w <= 3.0 * prev && w >= prev / 3.0;
    }
    const double nrm = p_norm(r.u, r.p, mesh);
    feasible = feasible && std::fabs(nrm - 1.0) <= 1e-9 &&
               std::fabs(r.final_constraint) <= 10.0 * opts.constraint_tol * r.constraint_scale;
  }
  rep.verdicts["complete"] = rep.complete;
  rep.verdicts["pw_holds"] = pw;
  rep.verdicts["extrapolation_sufficient"] = !rep.extrapolation_flagged;
  rep.verdicts["restarts_agree"] = agree;
  rep.verdicts["warm_start_continuity"] = warm_ok;
  rep.verdicts["feasible"] = feasible;
  return rep;
}

}  // namespace plap
