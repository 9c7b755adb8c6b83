#include "casimir/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace casimir::spectral {

void gauss_laguerre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_laguerre: need at least one node");
  // Golub-Welsch for the starting values, then Newton polishing in long
  // double on L_n with the weights from L_{n+1}.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) = 2.0 * i + 1.0;
    if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = i + 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    long double z = es.eigenvalues()(i);
    long double p_n = 0.0L, p_prev = 0.0L;
    auto laguerre = [&](long double t) {
      long double a = 1.0L, b = 1.0L - t;
      for (int k = 1; k < n; ++k) {
        const long double c = ((2 * k + 1 - t) * b - k * a) / (k + 1);
        a = b;
        b = c;
      }
      p_prev = a;
      p_n = b;
    };
    for (int it = 0; it < 20; ++it) {
      laguerre(z);
      const long double dp = n * (p_n - p_prev) / z;  // x L_n' = n (L_n - L_{n-1})
      const long double dz = p_n / dp;
      z -= dz;
      if (std::fabs(dz) <= 1e-19L * z) break;
    }
    laguerre(z);
    // L_{n+1}(z) = ((2n+1-z) L_n - n L_{n-1})/(n+1) with L_n(z) = 0
    const long double p_next = -n * p_prev / (n + 1);
    x[i] = static_cast<double>(z);
    w[i] = static_cast<double>(z / ((n + 1.0L) * (n + 1.0L) * p_next * p_next));
  }
}

SpectralContext build_zero_T_grid(int n_nodes) {
  SpectralContext ctx;
  ctx.mode = Mode::ZeroTQuadrature;
  std::vector<double> x, w;
  gauss_laguerre(n_nodes, x, w);
  for (int i = 0; i < n_nodes; ++i) ctx.nodes.push_back({x[i], w[i]});
  return ctx;
}

double matsubara_spacing(double T, double D, double eps_B) {
  return std::numbers::pi * std::sqrt(eps_B) * constants::k_B * T * D / (constants::hbar * constants::c);
}

SpectralContext build_matsubara_grid(double T, double D, double eps_B, int l_max) {
  if (!(T > 0.0)) throw std::invalid_argument("build_matsubara_grid: temperature must be positive");
  if (!(D > 0.0)) throw std::invalid_argument("build_matsubara_grid: loop distance must be positive");
  if (!(eps_B > 0.0)) throw std::invalid_argument("build_matsubara_grid: eps_B must be positive");
  if (l_max < 1) throw std::invalid_argument("build_matsubara_grid: l_max must be >= 1");
  SpectralContext ctx;
  ctx.mode = Mode::Matsubara;
  ctx.temperature = T;
  ctx.loop_distance = D;
  ctx.eps_background = eps_B;
  const double dx = matsubara_spacing(T, D, eps_B);
  // The l = 0 pole is left out: with static couplings the integrand
  // vanishes there anyway.
  for (int l = 1; l <= l_max; ++l) ctx.nodes.push_back({l * dx, dx});
  return ctx;
}

double thermal_factor(double X, double T, double D, double eps_B) {
  if (!(X > 0.0)) throw std::invalid_argument("thermal_factor: X must be positive");
  if (T == 0.0) return 1.0;
  const double arg = constants::hbar * constants::c * X / (std::sqrt(eps_B) * constants::k_B * T * D);
  const double l = std::round(arg / std::numbers::pi);
  if (std::abs(arg - l * std::numbers::pi) < 1e-8) {
    throw std::domain_error("thermal_factor: argument on a Matsubara pole");
  }
  return 1.0 / std::tan(arg);
}

}  // namespace casimir::spectral
