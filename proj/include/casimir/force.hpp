#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "casimir/diagrams.hpp"
#include "casimir/mie.hpp"

namespace casimir::force {

using Eigen::Vector3d;

struct Sphere {
  int id = 0;
  Vector3d center = Vector3d::Zero();  // m
  mie::MaterialPair material;
};

struct Ensemble {
  std::vector<Sphere> spheres;
  double eps_background = 1.0;
  double temperature = 0.0;  // K

  /// Throws std::invalid_argument naming the offending pair on overlap, or
  /// on inconsistent backgrounds. Touching spheres pass.
  void validate() const;
  int index_of(int id) const;
  /// Pairs with |c_i - c_j| equal to R_i + R_j (to rounding).
  std::vector<std::pair<int, int>> touching_pairs() const;
};

/// Curvature weight of the target sphere's multipoles in the force
/// integrand, from the two stress-tensor contributions.
struct StressKernel {
  /// Surface-integral normalisation; this is the 4 pi in hbar c / (4 pi R).
  static constexpr double normalization = 0.07957747154594767;  // 1 / (4 pi)

  double eps_background = 1.0;

  /// L(L+1) (L(L+1) - (1 + eps_B) y^2 / 2)
  double W(int L, double y) const;
  /// W(L, y) / W(L, 0), the factor applied per multipole.
  double weight(int L, double y) const;
  /// y j_L(y) n_L(y) on the real axis.
  static double radial_product(int L, double y);
};

struct Options {
  int L_max = 3;
  mie::CouplingModel coupling = mie::CouplingModel::StaticLimit;
  /// Weight the target's multipoles by StressKernel::weight. When off the
  /// force is exactly minus the gradient of the potential.
  bool stress_kernel = true;
  int n_nodes = 40;          // Gauss-Laguerre nodes at T = 0
  int matsubara_l_max = 2;   // poles used at T > 0
  /// 0: CASIMIR_THREADS if set, else hardware concurrency.
  int threads = 0;
  /// Also evaluate at L_max - 1 to estimate the truncation error.
  bool estimate_convergence = true;
};

struct DiagramContribution {
  std::vector<int> cycle;  // sphere ids
  double loop_distance = 0.0;  // m
  Vector3d force = Vector3d::Zero();
  double potential = 0.0;
};

/// Force in units hbar c / (4 pi R^2) and potential in hbar c / (4 pi R),
/// R the radius of the first sphere in the ensemble.
struct ForceResult {
  Vector3d force = Vector3d::Zero();
  double potential = 0.0;
  std::vector<DiagramContribution> per_diagram;
  int L_max = 0;
  double temperature = 0.0;
  int spectral_nodes = 0;
  /// |F(L_max) - F(L_max - 1)| / |F(L_max)|; 0 when not estimated.
  double convergence_estimate = 0.0;
  std::vector<std::string> warnings;

  bool converged() const { return convergence_estimate <= 0.05; }
};

/// Simply-connected N-body force on one sphere, summed over both
/// orientations of every cycle through all spheres.
ForceResult force_on_sphere(const Ensemble& ensemble, int target_id, const Options& options = {});

/// Number of threads force_on_sphere would use for `requested`.
int resolve_threads(int requested);

/// Bilinear contraction of the loop operator at one imaginary wavenumber
/// kappa (1/m), with every e^{-kappa |d|} removed: Tr prod_e T_e A_e.
/// Exposed for tests; `couplings[i]` holds the per-L (TM, TE) values of
/// the sphere at cycle position i.
double loop_trace(const std::vector<Vector3d>& centers, const std::vector<int>& cycle,
                  const std::vector<std::vector<mie::Coupling>>& couplings, double kappa, int L_max);

// Two spheres -----------------------------------------------------------

struct SeriesCoefficient {
  int m = 0, n = 0;
  double u = 0.0;  // potential: U = -(hbar c / 4 pi) u a1_m a2_n / r^{2m+2n+3}
  double v = 0.0;  // force: (2m + 2n + 3) u
  double w = 0.0;  // curvature correction to the force, times R1^2 / r^2
};

struct SeriesResult {
  std::vector<SeriesCoefficient> coefficients;
  double potential = 0.0;  // hbar c / (4 pi R1)
  double force = 0.0;      // hbar c / (4 pi R1^2); along the 2 -> 1 axis, negative = attractive
  std::vector<std::string> warnings;
};

/// Coefficients of the static-coupling multipole series per (m, n), from
/// the X-integral, for a given background permittivity.
std::vector<SeriesCoefficient> series_coefficients(int max_order, double eps_background, int n_nodes = 40);

SeriesResult two_sphere_retarded_series(const mie::MaterialPair& mat1, const mie::MaterialPair& mat2, double r,
                                        int max_order, bool curvature = true);

struct ThermalResult {
  double force = 0.0;  // hbar c / (4 pi R1^2), negative = attractive
  std::vector<double> per_pole;
  std::vector<std::string> warnings;
};

ThermalResult two_sphere_finite_T(const mie::MaterialPair& mat1, const mie::MaterialPair& mat2, double r, double T,
                                  int l_max, int max_order, bool curvature = true);

// Three spheres ---------------------------------------------------------

/// Dipole-only simply-connected three-body potential (units hbar c / (4 pi R1))
/// evaluated with the imaginary-frequency dipole Green tensor, independent
/// of the vector-wave machinery.
double three_sphere_potential(const Ensemble& ensemble, int n_nodes = 40, int l_max = 2);

/// Its gradient with respect to the first sphere's centre, as a force
/// (units hbar c / (4 pi R1^2)).
Vector3d three_sphere_force(const Ensemble& ensemble, int n_nodes = 40, int l_max = 2);

struct ThreeSphereScan {
  std::vector<double> x, theta;
  Eigen::MatrixXd potential;  // rows: x, cols: theta; NaN where sphere 3 overlaps
};

/// Spheres 1 and 2 fixed on z a distance separation * R apart, sphere 3 at
/// distance x R from sphere 1 and polar angle theta in the xz plane.
ThreeSphereScan scan_three_spheres(const mie::MaterialPair& mat, double eps_background, double temperature,
                                   double separation, const std::vector<double>& x,
                                   const std::vector<double>& theta);

// Large N -----------------------------------------------------------------

/// Closed form -(-1)^N (e^{-N} / N!) lambda^N (R/s)^{3N+1}, in units
/// hbar c / (4 pi R).
double large_N_potential(int N, double lambda, double R, double s);

/// Integral form -(-1)^N (hbar c / (pi s)) int e^{-X} [a_S R^3/s^3 (1 + c X / N)]^N dX
/// with a_S = lambda / N, in the same units. c = 0 drops the correction.
double large_N_integral(int N, double lambda, double R, double s, double correction = 0.0, int n_nodes = 80);

}  // namespace casimir::force
