#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace casimir::specfun {

using cplx = std::complex<double>;

/// Radial functions of a single order evaluated at one (complex) argument.
/// h_plus is assembled as j + i n, never evaluated separately.
struct RadialFunctionTriple {
  int order = 0;
  cplx x;
  cplx j, n, h_plus;
  cplx dj, dn, dh_plus;
};

cplx spherical_bessel_j(int L, cplx x);
cplx spherical_neumann_n(int L, cplx x);
cplx spherical_hankel_h1(int L, cplx x);

/// h_L(x) e^{-ix}: a polynomial in 1/x, bounded for large |x| on any ray
/// and free of the exponential that would otherwise overflow or underflow.
cplx spherical_hankel_h1_scaled(int L, cplx x);

RadialFunctionTriple radial_functions(int L, cplx x);

/// All orders 0..L_max in one pass.
std::vector<cplx> spherical_bessel_j_array(int L_max, cplx x);
std::vector<cplx> spherical_neumann_n_array(int L_max, cplx x);
std::vector<cplx> spherical_hankel_h1_scaled_array(int L_max, cplx x);

/// d/dx of f_L given the table f_0..f_{L_max}; valid for j, n, h and for the
/// scaled Hankel table only after removing the exponential.
std::vector<cplx> derivative_from_table(const std::vector<cplx>& f, cplx x);

double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3);

/// Integral over the unit sphere of Y_{L1 m1} Y_{L2 m2} Y_{L3 m3}
/// (orthonormal, Condon-Shortley phase, no conjugations).
double gaunt_coefficient(int L1, int m1, int L2, int m2, int L3, int m3);

/// Flat index of (L, m) in a table holding every order 0..L_max.
constexpr int lm_index(int L, int m) { return L * L + L + m; }

/// Orthonormal spherical harmonics Y_{L m} for L = 0..L_max at the direction
/// of a (not necessarily normalised, nonzero) vector. Pole-safe.
std::vector<cplx> spherical_harmonics(int L_max, const Eigen::Vector3d& direction);

cplx spherical_harmonic(int L, int m, double theta, double phi);

namespace detail {
// Exposed so the two evaluation paths can be compared at the switchover.
cplx bessel_j_series(int L, cplx x);
std::vector<cplx> bessel_j_miller(int L_max, cplx x);
bool use_series(int L, cplx x);
}  // namespace detail

}  // namespace casimir::specfun
