#include "casimir/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace casimir::specfun {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kMaxImag = 690.0;

void check_finite(cplx x, const char* who) {
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
    throw std::domain_error(std::string(who) + ": non-finite argument");
  }
  if (std::abs(x.imag()) > kMaxImag) {
    throw std::overflow_error(std::string(who) + ": |Im x| too large, result overflows");
  }
}

void check_nonzero(cplx x, const char* who) {
  if (x == cplx(0.0, 0.0)) {
    throw std::domain_error(std::string(who) + ": singular at x = 0");
  }
}

void check_order(int L, const char* who) {
  if (L < 0) throw std::invalid_argument(std::string(who) + ": negative order");
}

// Long-double factorials; exact through 25!, relative error ~1e-19 beyond.
const std::array<long double, 200>& factorial_table() {
  static const std::array<long double, 200> table = [] {
    std::array<long double, 200> t{};
    t[0] = 1.0L;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<long double>(i);
    return t;
  }();
  return table;
}

long double fact(int n) { return factorial_table().at(static_cast<std::size_t>(n)); }

}  // namespace

namespace detail {

bool use_series(int L, cplx x) {
  const double ax = std::abs(x);
  return ax < 1.0 || ax < 0.5 * L;
}

cplx bessel_j_series(int L, cplx x) {
  cplx prefactor = 1.0;
  for (int k = 1; k <= L; ++k) prefactor *= x / static_cast<double>(2 * k + 1);
  const cplx z2 = -0.5 * x * x;
  cplx term = 1.0;
  cplx sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= z2 / static_cast<double>(k * (2 * L + 2 * k + 1));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return prefactor * sum;
}

std::vector<cplx> bessel_j_miller(int L_max, cplx x) {
  const double ax = std::abs(x);
  const int start = std::max(L_max, static_cast<int>(ax)) + 30 + static_cast<int>(4.0 * std::cbrt(ax + 1.0));
  std::vector<cplx> f(static_cast<std::size_t>(start) + 2, cplx(0.0));
  f[start + 1] = 0.0;
  f[start] = 1e-30;
  for (int n = start; n >= 1; --n) {
    f[n - 1] = static_cast<double>(2 * n + 1) / x * f[n] - f[n + 1];
    if (std::abs(f[n - 1]) > 1e250) {
      for (int k = n - 1; k <= start; ++k) f[k] *= 1e-250;
    }
  }
  const cplx j0 = std::sin(x) / x;
  const cplx j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  const cplx scale = std::abs(j0) >= std::abs(j1) ? j0 / f[0] : j1 / f[1];
  std::vector<cplx> out(static_cast<std::size_t>(L_max) + 1);
  for (int n = 0; n <= L_max; ++n) out[n] = f[n] * scale;
  return out;
}

}  // namespace detail

std::vector<cplx> spherical_bessel_j_array(int L_max, cplx x) {
  check_order(L_max, "spherical_bessel_j");
  check_finite(x, "spherical_bessel_j");
  std::vector<cplx> out(static_cast<std::size_t>(L_max) + 1);
  if (x == cplx(0.0)) {
    out[0] = 1.0;
    return out;
  }
  // The downward pass is only needed when some order lies outside the
  // series region.
  bool all_series = true;
  for (int L = 0; L <= L_max; ++L) all_series = all_series && detail::use_series(L, x);
  if (!all_series) out = detail::bessel_j_miller(L_max, x);
  for (int L = 0; L <= L_max; ++L) {
    if (detail::use_series(L, x)) out[L] = detail::bessel_j_series(L, x);
  }
  return out;
}

std::vector<cplx> spherical_neumann_n_array(int L_max, cplx x) {
  check_order(L_max, "spherical_neumann_n");
  check_finite(x, "spherical_neumann_n");
  check_nonzero(x, "spherical_neumann_n");
  std::vector<cplx> out(static_cast<std::size_t>(L_max) + 1);
  out[0] = -std::cos(x) / x;
  if (L_max >= 1) out[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
  for (int L = 1; L < L_max; ++L) {
    out[L + 1] = static_cast<double>(2 * L + 1) / x * out[L] - out[L - 1];
  }
  return out;
}

std::vector<cplx> spherical_hankel_h1_scaled_array(int L_max, cplx x) {
  check_order(L_max, "spherical_hankel_h1_scaled");
  check_nonzero(x, "spherical_hankel_h1_scaled");
  std::vector<cplx> out(static_cast<std::size_t>(L_max) + 1);
  out[0] = -I / x;
  if (L_max >= 1) out[1] = -(x + I) / (x * x);
  for (int L = 1; L < L_max; ++L) {
    out[L + 1] = static_cast<double>(2 * L + 1) / x * out[L] - out[L - 1];
  }
  return out;
}

std::vector<cplx> derivative_from_table(const std::vector<cplx>& f, cplx x) {
  // f_0' = -f_1; f_L' = f_{L-1} - (L+1) f_L / x. The last entry needs f_{L+1},
  // so the result is one order shorter than the table.
  if (f.size() < 2) throw std::invalid_argument("derivative_from_table: need at least two orders");
  std::vector<cplx> d(f.size() - 1);
  d[0] = -f[1];
  for (std::size_t L = 1; L < d.size(); ++L) {
    d[L] = f[L - 1] - static_cast<double>(L + 1) * f[L] / x;
  }
  return d;
}

cplx spherical_bessel_j(int L, cplx x) {
  check_order(L, "spherical_bessel_j");
  check_finite(x, "spherical_bessel_j");
  if (detail::use_series(L, x)) return detail::bessel_j_series(L, x);
  return spherical_bessel_j_array(L, x)[L];
}

cplx spherical_neumann_n(int L, cplx x) { return spherical_neumann_n_array(L, x)[L]; }

cplx spherical_hankel_h1(int L, cplx x) {
  return spherical_bessel_j(L, x) + I * spherical_neumann_n(L, x);
}

cplx spherical_hankel_h1_scaled(int L, cplx x) { return spherical_hankel_h1_scaled_array(L, x)[L]; }

RadialFunctionTriple radial_functions(int L, cplx x) {
  check_nonzero(x, "radial_functions");
  const auto j = spherical_bessel_j_array(L + 1, x);
  const auto n = spherical_neumann_n_array(L + 1, x);
  const auto dj = derivative_from_table(j, x);
  const auto dn = derivative_from_table(n, x);
  RadialFunctionTriple r;
  r.order = L;
  r.x = x;
  r.j = j[L];
  r.n = n[L];
  r.h_plus = r.j + I * r.n;
  r.dj = dj[L];
  r.dn = dn[L];
  r.dh_plus = r.dj + I * r.dn;
  return r;
}

double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (m1 + m2 + m3 != 0) return 0.0;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
  if (j1 + j2 + j3 + 1 >= static_cast<int>(factorial_table().size())) {
    throw std::out_of_range("wigner_3j: angular momenta too large");
  }
  // Racah formula.
  const long double triangle = fact(j1 + j2 - j3) * fact(j1 - j2 + j3) * fact(-j1 + j2 + j3) / fact(j1 + j2 + j3 + 1);
  const long double norm = std::sqrt(triangle * fact(j1 + m1) * fact(j1 - m1) * fact(j2 + m2) * fact(j2 - m2) *
                                     fact(j3 + m3) * fact(j3 - m3));
  const int k_min = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  const int k_max = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  long double sum = 0.0L;
  for (int k = k_min; k <= k_max; ++k) {
    const long double denom = fact(k) * fact(j1 + j2 - j3 - k) * fact(j1 - m1 - k) * fact(j2 + m2 - k) *
                              fact(j3 - j2 + m1 + k) * fact(j3 - j1 - m2 + k);
    sum += ((k % 2 == 0) ? 1.0L : -1.0L) / denom;
  }
  const int phase = j1 - j2 - m3;
  const long double sign = (phase % 2 == 0) ? 1.0L : -1.0L;
  return static_cast<double>(sign * norm * sum);
}

double gaunt_coefficient(int L1, int m1, int L2, int m2, int L3, int m3) {
  if (std::abs(m1) > L1 || std::abs(m2) > L2 || std::abs(m3) > L3) {
    throw std::invalid_argument("gaunt_coefficient: |m| > L");
  }
  if (m1 + m2 + m3 != 0) return 0.0;
  if ((L1 + L2 + L3) % 2 != 0) return 0.0;
  if (L3 < std::abs(L1 - L2) || L3 > L1 + L2) return 0.0;
  const double pref = std::sqrt((2.0 * L1 + 1) * (2.0 * L2 + 1) * (2.0 * L3 + 1) / (4.0 * std::numbers::pi));
  return pref * wigner_3j(L1, L2, L3, 0, 0, 0) * wigner_3j(L1, L2, L3, m1, m2, m3);
}

std::vector<cplx> spherical_harmonics(int L_max, const Eigen::Vector3d& direction) {
  check_order(L_max, "spherical_harmonics");
  const double len = direction.norm();
  if (!(len > 0.0)) throw std::domain_error("spherical_harmonics: zero direction");
  const Eigen::Vector3d u = direction / len;
  const double z = u.z();
  // sin^m(theta) e^{i m phi} = (x + i y)^m for a unit vector.
  const cplx w(u.x(), u.y());

  const int n = (L_max + 1) * (L_max + 1);
  std::vector<cplx> Y(static_cast<std::size_t>(n));
  // q[l] holds the normalised Legendre factor with sin^m removed.
  std::vector<double> q(static_cast<std::size_t>(L_max) + 1);
  double qmm = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  cplx wm = 1.0;
  for (int m = 0; m <= L_max; ++m) {
    if (m > 0) {
      qmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m));
      wm *= w;
    }
    q[m] = qmm;
    if (m + 1 <= L_max) q[m + 1] = std::sqrt(2.0 * m + 3.0) * z * qmm;
    for (int l = m + 2; l <= L_max; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
      const double b = std::sqrt(((l - 1.0) * (l - 1.0) - static_cast<double>(m) * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      q[l] = a * (z * q[l - 1] - b * q[l - 2]);
    }
    for (int l = m; l <= L_max; ++l) {
      const cplx y = q[l] * wm;
      Y[lm_index(l, m)] = y;
      if (m > 0) Y[lm_index(l, -m)] = ((m % 2 == 0) ? 1.0 : -1.0) * std::conj(y);
    }
  }
  return Y;
}

cplx spherical_harmonic(int L, int m, double theta, double phi) {
  if (std::abs(m) > L) throw std::invalid_argument("spherical_harmonic: |m| > L");
  const Eigen::Vector3d u(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
  return spherical_harmonics(L, u)[lm_index(L, m)];
}

}  // namespace casimir::specfun
