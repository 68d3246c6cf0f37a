#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "plap/discretize.hpp"
#include "plap/geometry.hpp"
#include "plap/mesh.hpp"

namespace plap {

struct SolverOptions {
  int max_iters = 5000;
  double step0 = 0.1;      ///< first trial step of the line search
  double backtrack = 0.5;  ///< step reduction factor on rejection
  double tol_rel = 1e-9;   ///< stop once the relative Rayleigh decrease drops below this
  std::uint64_t seed = 1;
  int restarts = 3;        ///< seeded starts compared by sweep_p at every p
  double constraint_tol = 1e-12;

  void validate() const;
};

struct TraceEntry {
  int iteration = 0;
  double rayleigh = 0.0;
  double step = 0.0;
  double constraint = 0.0;
};

struct EigenResult {
  double p = 2.0;
  double lambda_p = 0.0;  ///< Rayleigh value; estimates the eigenvalue Lambda_p
  ScalarField u;          ///< p_norm(u, p) == 1, constraint satisfied
  int iterations = 0;
  bool converged = false;
  double initial_rayleigh = 0.0;
  double final_constraint = 0.0;
  double constraint_scale = 0.0;
  double euler_residual = 0.0;
  std::vector<TraceEntry> trace;  ///< accepted iterates, Rayleigh nonincreasing
};

/// Projected, preconditioned gradient descent on the Rayleigh quotient.
/// Each step is f <- normalize(project_constraint(f - s * P^{-1} grad log R))
/// with backtracking on R, where P is the p-weighted stiffness matrix plus a
/// small lumped-mass shift (so a unit step is a shifted inverse iteration).
EigenResult minimize_rayleigh(const Mesh& mesh, double p, const ScalarField& init, const SolverOptions& opts);

/// Max over hat functions of the weak-form Euler residual
/// |sum_c |grad u|^(p-2) grad u . grad phi_i |c| - Lambda^p w_i |u_i|^(p-2) u_i|,
/// divided by the larger of the two terms' maxima.
double euler_residual(const EigenResult& res, const Mesh& mesh);

/// Payne-Weinberger lower bound (p-1)^(1/p) 2 pi / (p diam sin(pi/p)).
double payne_weinberger_bound(double p, double diam);

struct Extrapolation {
  double limit = 0.0;  ///< intercept of the fit Lambda_p ~ limit + slope/p
  double slope = 0.0;
  double last = 0.0;   ///< raw Lambda_p at the largest p
  bool flagged = false;  ///< fewer than three points; limit == last
};

/// Least-squares fit of Lambda_p = L + a/p on the last three entries.
Extrapolation extrapolate_limit(std::span<const std::pair<double, double>> lambdas);

/// Rayleigh value of the shifted distance field d(., x0) - c_p. The field
/// is feasible, so the value bounds the discrete Lambda_p from above.
/// In 2D the cone tip is rounded over 1.5h before interpolation.
double upper_bound_certificate(const Mesh& mesh, const Domain& domain, Point x0, double p);

/// Linear ramp along the diameter with a 1% seeded perturbation.
ScalarField initial_guess(const Domain& domain, const Mesh& mesh, std::uint64_t seed);

/// Flips the sign so the value nearest the lexicographically smallest
/// diameter endpoint is nonnegative.
void normalize_sign(ScalarField& u, const Domain& domain, const Mesh& mesh);

struct SweepReport {
  std::vector<EigenResult> results;
  std::vector<double> pw_bounds;
  std::vector<double> warm_start_rayleigh;  ///< NaN for the first p
  std::vector<double> restart_spread;       ///< relative spread of restart minima
  double diameter = 0.0;
  double lambda_inf_estimate = 0.0;
  double lambda_inf_last = 0.0;
  double lambda_inf_exact = 0.0;
  bool extrapolation_flagged = false;
  bool complete = true;
  std::string failure;
  std::map<std::string, bool> verdicts;
};

std::vector<double> default_p_schedule();

/// Sequential warm-started solves over an increasing p schedule.
SweepReport sweep_p(const Domain& domain, const Mesh& mesh, std::span<const double> p_schedule,
                    const SolverOptions& opts);

}  // namespace plap
