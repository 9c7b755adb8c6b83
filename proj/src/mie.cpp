#include "casimir/mie.hpp"

#include <cmath>
#include <stdexcept>

#include "casimir/specfun.hpp"

namespace casimir::mie {

namespace {

constexpr cplx I{0.0, 1.0};

void check_order(int L) {
  if (L < 1) throw std::invalid_argument("mie: multipole order must be >= 1");
}

// psi = x j_L, xi = x h+_L (xi carried without its e^{ix}), and derivatives.
struct Riccati {
  cplx psi, dpsi, xi_s, dxi_s;
};

Riccati riccati(int L, cplx x) {
  const auto j = specfun::spherical_bessel_j_array(L + 1, x);
  const auto dj = specfun::derivative_from_table(j, x);
  const auto hs = specfun::spherical_hankel_h1_scaled_array(L + 1, x);
  const auto dhs = specfun::derivative_from_table(hs, x);  // (h e^{-ix})' + i h e^{-ix}
  Riccati r;
  r.psi = x * j[L];
  r.dpsi = j[L] + x * dj[L];
  r.xi_s = x * hs[L];
  r.dxi_s = hs[L] + x * dhs[L];
  return r;
}

// psi'(y)/psi(y)
cplx log_derivative(int L, cplx y) {
  const auto j = specfun::spherical_bessel_j_array(L + 1, y);
  const auto dj = specfun::derivative_from_table(j, y);
  return (j[L] + y * dj[L]) / (y * j[L]);
}

void check_argument(cplx kR) {
  if (kR == cplx(0.0)) {
    throw std::domain_error("mie: kR = 0 is singular, use static_polarizability");
  }
}

}  // namespace

void MaterialPair::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!ok(eps_sphere)) throw std::invalid_argument("MaterialPair: eps_sphere must be finite and positive");
  if (!ok(eps_background)) throw std::invalid_argument("MaterialPair: eps_background must be finite and positive");
  if (!ok(radius)) throw std::invalid_argument("MaterialPair: radius must be finite and positive");
}

double MaterialPair::relative_index() const { return std::sqrt(eps_sphere / eps_background); }

double static_polarizability(int L, const MaterialPair& mat) {
  check_order(L);
  mat.validate();
  const double e = mat.eps_sphere / mat.eps_background;
  return (e - 1.0) / (e + (L + 1.0) / L) * std::pow(mat.radius, 2 * L + 1);
}

double leading_prefactor(int L) {
  check_order(L);
  double dfact = 1.0;  // (2L+1)!! (2L-1)!!
  for (int k = 1; k <= 2 * L + 1; k += 2) dfact *= k;
  for (int k = 1; k <= 2 * L - 1; k += 2) dfact *= k;
  return (L + 1.0) / (L * dfact);
}

cplx mie_alpha(int L, const MaterialPair& mat, cplx kR) {
  check_order(L);
  mat.validate();
  check_argument(kR);
  if (mat.eps_sphere == mat.eps_background) return 0.0;
  const double m = mat.relative_index();
  const Riccati r = riccati(L, kR);
  const cplx D = log_derivative(L, m * kR);
  return std::exp(-I * kR) * (r.psi * D - m * r.dpsi) / (m * r.dxi_s - D * r.xi_s);
}

cplx mie_beta(int L, const MaterialPair& mat, cplx kR) {
  check_order(L);
  mat.validate();
  check_argument(kR);
  if (mat.eps_sphere == mat.eps_background) return 0.0;
  const double m = mat.relative_index();
  const Riccati r = riccati(L, kR);
  const cplx D = log_derivative(L, m * kR);
  return -std::exp(-I * kR) * (r.dpsi - m * r.psi * D) / (r.dxi_s - m * r.xi_s * D);
}

cplx mie_alpha_leading(int L, const MaterialPair& mat, cplx kR) {
  const double a = static_polarizability(L, mat) / std::pow(mat.radius, 2 * L + 1);
  return I * leading_prefactor(L) * std::pow(kR, 2 * L + 1) * a;
}

Coupling coupling_imaginary(int L, const MaterialPair& mat, double kappa_R, CouplingModel model) {
  Coupling c;
  if (model == CouplingModel::StaticLimit) {
    // i c_L (i kappa R)^{2L+1} = (-1)^{L+1} c_L (kappa R)^{2L+1}
    const double sign = (L % 2 == 1) ? 1.0 : -1.0;
    c.tm = sign * leading_prefactor(L) * std::pow(kappa_R, 2 * L + 1) * static_polarizability(L, mat) /
           std::pow(mat.radius, 2 * L + 1);
    return c;
  }
  const cplx kR(0.0, kappa_R);
  c.tm = mie_alpha(L, mat, kR).real();
  c.te = mie_beta(L, mat, kR).real();
  return c;
}

}  // namespace casimir::mie
