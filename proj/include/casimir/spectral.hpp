#pragma once

#include <cmath>
#include <vector>

namespace casimir::spectral {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double c = 299792458.0;         // m / s
inline constexpr double k_B = 1.380649e-23;      // J / K
}  // namespace constants

enum class Mode { ZeroTQuadrature, Matsubara };

/// One frequency sample in the dimensionless loop variable X = kappa D.
/// Sums are sum_i weight_i * e^{-X_i} * f(X_i) in Matsubara mode and
/// sum_i weight_i * f(X_i) in quadrature mode, where the Laguerre weight
/// already carries e^{-X}.
struct Node {
  double X = 0.0;
  double weight = 0.0;
};

struct SpectralContext {
  Mode mode = Mode::ZeroTQuadrature;
  std::vector<Node> nodes;
  double temperature = 0.0;     // K
  double loop_distance = 0.0;   // m; only meaningful for Matsubara grids
  double eps_background = 1.0;

  /// Sum of f over the grid, including the e^{-X} damping.
  template <class F>
  double integrate(F&& f) const;
};

/// Gauss-Laguerre rule for weight e^{-X} on (0, inf).
SpectralContext build_zero_T_grid(int n_nodes = 40);

/// Spacing of the thermal poles in X: pi sqrt(eps_B) k_B T D / (hbar c).
double matsubara_spacing(double T, double D, double eps_B);

/// Poles X_l = l * spacing, l = 1..l_max, each weighted by the spacing.
SpectralContext build_matsubara_grid(double T, double D, double eps_B, int l_max);

/// cot(hbar c X / (sqrt(eps_B) k_B T D)); 1 at T = 0. Throws
/// std::domain_error within 1e-8 of a pole.
double thermal_factor(double X, double T, double D, double eps_B = 1.0);

/// Gauss-Laguerre nodes and weights; exposed for tests.
void gauss_laguerre(int n, std::vector<double>& x, std::vector<double>& w);

template <class F>
double SpectralContext::integrate(F&& f) const {
  double sum = 0.0;
  if (mode == Mode::ZeroTQuadrature) {
    for (const Node& n : nodes) sum += n.weight * f(n.X);
  } else {
    for (const Node& n : nodes) sum += n.weight * std::exp(-n.X) * f(n.X);
  }
  return sum;
}

}  // namespace casimir::spectral
