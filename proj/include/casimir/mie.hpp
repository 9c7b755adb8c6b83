#pragma once

#include <complex>

namespace casimir::mie {

using cplx = std::complex<double>;

/// A sphere of static permittivity eps_sphere and radius (m) embedded in a
/// background of permittivity eps_background.
struct MaterialPair {
  double eps_sphere = 1.0;
  double eps_background = 1.0;
  double radius = 1.0;

  /// Throws std::invalid_argument on non-positive or non-finite fields.
  void validate() const;
  /// Relative refractive index sqrt(eps_sphere / eps_background).
  double relative_index() const;
};

/// alpha_L = (e - 1)/(e + (L+1)/L) R^{2L+1} with e = eps_sphere/eps_background.
double static_polarizability(int L, const MaterialPair& mat);

/// (L+1) / (L (2L+1)!! (2L-1)!!); 2/3 for the dipole.
double leading_prefactor(int L);

// Reflection coefficients of the outgoing wave z_L = h+_L for an incident
// regular wave j_L, with kR the background size parameter. In the notation
// of Bohren and Huffman these are -a_L (TM) and -b_L (TE).

cplx mie_alpha(int L, const MaterialPair& mat, cplx kR);
cplx mie_beta(int L, const MaterialPair& mat, cplx kR);

/// First term of the small-argument expansion of mie_alpha:
/// i c_L (kR)^{2L+1} alpha_L / R^{2L+1}.
cplx mie_alpha_leading(int L, const MaterialPair& mat, cplx kR);

enum class CouplingModel {
  StaticLimit,  // leading small-argument term, TE channel dropped
  FullMie,      // exact coefficients in both channels
};

struct Coupling {
  double tm = 0.0;
  double te = 0.0;
};

/// Coefficients at imaginary background wavenumber k = i kappa, where both
/// are real. kappa_R = kappa * radius.
Coupling coupling_imaginary(int L, const MaterialPair& mat, double kappa_R, CouplingModel model);

}  // namespace casimir::mie
