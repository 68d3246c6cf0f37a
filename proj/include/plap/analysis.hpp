#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plap/discretize.hpp"
#include "plap/eigensolver.hpp"
#include "plap/geometry.hpp"
#include "plap/mesh.hpp"

namespace plap {

/// Gradient and Hessian of a weighted least-squares quadratic fitted on the
/// 2-ring of a vertex. Exact for quadratic data.
struct LocalFit {
  Point gradient;
  double hxx = 0.0, hxy = 0.0, hyy = 0.0;

  double laplacian() const { return hxx + hyy; }
  double infinity_laplacian() const {
    return gradient.x * gradient.x * hxx + 2.0 * gradient.x * gradient.y * hxy + gradient.y * gradient.y * hyy;
  }
};

/// Empty when the neighbourhood is too small (fewer than 6 neighbours in
/// 2D, 2 in 1D) or the fit is rank deficient.
std::optional<LocalFit> fit_quadratic(std::span<const double> u, const Mesh& mesh, int vertex);

enum class Region { Positive, Negative, Zero, Boundary };
std::string to_string(Region r);

struct PointResidual {
  Point location;
  Region region = Region::Zero;
  double residual = 0.0;  ///< violation magnitude, 0 when satisfied exactly
};

struct ResidualReport {
  double lambda = 0.0;
  double tolerance = 0.0;
  double zero_band = 0.0;  ///< epsilon_0
  int n_points = 0;
  int n_skipped = 0;
  double max_interior_violation = 0.0;
  double max_boundary_violation = 0.0;
  /// Maximum violation when the zero band is halved / doubled.
  double max_violation_half_band = 0.0;
  double max_violation_double_band = 0.0;
  bool pass = false;
  std::vector<PointResidual> points;
};

/// Pointwise check of the limiting Neumann problem on local quadratic fits.
/// Interior: min(|Du| - lambda u, -D_inf u) in {u > eps0},
/// max(lambda |u| - |Du|, -D_inf u) in {u < -eps0}, -D_inf u in the band.
/// Boundary: the viscosity Neumann alternatives with the first-order part
/// of the operator, min(., du/dnu) <= tol for subsolutions and
/// max(., du/dnu) >= -tol for supersolutions (any adjacent normal at corners).
ResidualReport infinity_residuals(const ScalarField& u, double lambda, const Mesh& mesh, double tol);

struct FpResidual {
  double max_normalized = 0.0;
  int n_evaluated = 0;
  int n_skipped = 0;
  bool inconclusive = false;
};

/// Pointwise F_p = -(p-2)|Du|^(p-4) D_inf u - |Du|^(p-2) Lap u - lambda^p |u|^(p-2) u
/// at interior vertices, divided by lambda^p ||u||_p^(p-1). Points with
/// |Du| below 1e-6 max|u|/extent are skipped; `exclude` additionally skips
/// |u| <= exclude*max|u| and |u| >= (1-exclude)*max|u|. Requires p > 2.
FpResidual fp_residual(const ScalarField& u, double p, double lambda_p, const Mesh& mesh, double exclude = 0.0);

struct Verdict {
  bool pass = false;
  bool applicable = true;
  double measured = 0.0;
  double threshold = 0.0;
};

struct PropertyVerdicts {
  std::map<std::string, Verdict> verdicts;
  int argmax = -1;
  int argmin = -1;

  bool all_pass() const;
};

/// Qualitative checks on a computed eigenfunction: sign change, sup/inf
/// symmetry, boundary hot spots at diameter endpoints, no closed nodal
/// domain, and constant slope along the diameter.
PropertyVerdicts property_checks(const EigenResult& res, const Domain& domain, const Mesh& mesh);

struct DistanceCheck {
  bool applicable = false;
  bool holds = false;
  double worst_margin = 0.0;  ///< min over pairs of |x - x0| - u(x) + tol
  double tolerance = 0.0;
};

/// After rescaling u so max u = 1/lambda: |x - x0| >= u(x) - tol for every
/// vertex x with u >= 0 and x0 with u <= 0, tol = 3h max|Du|.
DistanceCheck distance_inequality_check(const ScalarField& u, double lambda, const Mesh& mesh);

}  // namespace plap
