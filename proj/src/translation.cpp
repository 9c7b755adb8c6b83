#include "casimir/translation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "casimir/specfun.hpp"

namespace casimir::translation {

namespace {

constexpr cplx I{0.0, 1.0};
using specfun::lm_index;

// Eigen's cross() conjugates its first complex operand; this one does not.
Vector3cd cross(const Vector3cd& a, const Vector3cd& b) {
  return Vector3cd(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0));
}

cplx ipow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return 1.0;
    case 1: return I;
    case 2: return -1.0;
    default: return -I;
  }
}

double ladder_up(int L, int m) { return std::sqrt(static_cast<double>((L - m) * (L + m + 1))); }
double ladder_down(int L, int m) { return std::sqrt(static_cast<double>((L + m) * (L - m + 1))); }

// Radial table z_0..z_{n} and its derivative (with respect to the argument),
// optionally multiplied by e^{-ix}. Outgoing functions always come from the
// scaled Hankel recurrence, which does not cancel on the imaginary axis.
struct RadialTable {
  std::vector<cplx> value;
  std::vector<cplx> deriv;
};

RadialTable radial_table(int n, cplx x, RadialKind kind, bool scaled) {
  RadialTable t;
  std::vector<cplx> f;
  std::vector<cplx> df;
  if (kind == RadialKind::Outgoing) {
    f = specfun::spherical_hankel_h1_scaled_array(n + 1, x);
    df = specfun::derivative_from_table(f, x);  // = z' e^{-ix}
    f.pop_back();
    if (scaled) {
      for (std::size_t i = 0; i < f.size(); ++i) df[i] -= I * f[i];
    } else {
      const cplx e = std::exp(I * x);
      for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] *= e;
        df[i] *= e;
      }
    }
  } else {
    f = specfun::spherical_bessel_j_array(n + 1, x);
    df = specfun::derivative_from_table(f, x);
    f.pop_back();
    if (scaled) {
      const cplx e = std::exp(-I * x);
      for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] *= e;
        df[i] = df[i] * e - I * f[i];
      }
    }
  }
  t.value = std::move(f);
  t.deriv = std::move(df);
  return t;
}

// Cartesian components of L Y_{lm} given the harmonic table.
Vector3cd angular_momentum_on_harmonic(const std::vector<cplx>& Y, int l, int m) {
  const cplx up = (m < l) ? ladder_up(l, m) * Y[lm_index(l, m + 1)] : cplx(0.0);
  const cplx down = (m > -l) ? ladder_down(l, m) * Y[lm_index(l, m - 1)] : cplx(0.0);
  Vector3cd v;
  v << 0.5 * (up + down), (up - down) / (2.0 * I), static_cast<double>(m) * Y[lm_index(l, m)];
  return v;
}

void check_separation(const Vector3d& d) {
  if (!(d.norm() > 0.0)) throw std::domain_error("translation: zero separation is singular");
}

}  // namespace

TranslationBasis::TranslationBasis(int L_max) : L_max_(L_max) {
  if (L_max < 1) throw std::invalid_argument("TranslationBasis: L_max must be >= 1");
  const int n = size();
  for (int lr = 1; lr <= L_max; ++lr) {
    for (int mr = -lr; mr <= lr; ++mr) {
      for (int lc = 1; lc <= L_max; ++lc) {
        for (int mc = -lc; mc <= lc; ++mc) {
          const int mu = mc - mr;
          for (int lambda = std::abs(lr - lc); lambda <= lr + lc; lambda += 2) {
            if (std::abs(mu) > lambda) continue;
            const double g = specfun::gaunt_coefficient(lc, mc, lr, -mr, lambda, -mu);
            if (g == 0.0) continue;
            const double sign = (mc % 2 == 0) ? 1.0 : -1.0;
            terms_.push_back({mode_index(lr, mr), mode_index(lc, mc), lambda, mu,
                              4.0 * std::numbers::pi * ipow(lr + lambda - lc) * sign * g});
          }
        }
      }
    }
  }
  Lz_ = MatrixXcd::Zero(n, n);
  Lplus_ = MatrixXcd::Zero(n, n);
  Lminus_ = MatrixXcd::Zero(n, n);
  for (int l = 1; l <= L_max; ++l) {
    for (int m = -l; m <= l; ++m) {
      Lz_(mode_index(l, m), mode_index(l, m)) = static_cast<double>(m);
      if (m < l) Lplus_(mode_index(l, m + 1), mode_index(l, m)) = ladder_up(l, m);
      if (m > -l) Lminus_(mode_index(l, m - 1), mode_index(l, m)) = ladder_down(l, m);
    }
  }
}

MatrixXcd TranslationBasis::scalar(cplx k, const Vector3d& d, RadialKind kind, bool scaled) const {
  check_separation(d);
  const double dist = d.norm();
  const auto radial = radial_table(2 * L_max_, k * dist, kind, scaled);
  const auto Y = specfun::spherical_harmonics(2 * L_max_, -d);
  MatrixXcd S = MatrixXcd::Zero(size(), size());
  for (const auto& t : terms_) {
    S(t.row, t.col) += t.weight * radial.value[t.lambda] * Y[lm_index(t.lambda, t.mu)];
  }
  return S;
}

std::array<MatrixXcd, 3> TranslationBasis::scalar_gradient(cplx k, const Vector3d& d, RadialKind kind,
                                                           bool scaled) const {
  check_separation(d);
  const double dist = d.norm();
  const auto radial = radial_table(2 * L_max_, k * dist, kind, scaled);
  const int lam_max = 2 * L_max_;
  const auto Y = specfun::spherical_harmonics(lam_max, -d);
  const Vector3d a_hat = -d / dist;

  // grad_d F = -[a_hat k z' Y - (i z / |a|) a_hat x (L Y)], a = -d.
  std::vector<Vector3cd> grad(static_cast<std::size_t>((lam_max + 1) * (lam_max + 1)));
  for (int lam = 0; lam <= lam_max; ++lam) {
    for (int mu = -lam; mu <= lam; ++mu) {
      const Vector3cd LY = angular_momentum_on_harmonic(Y, lam, mu);
      const Vector3cd ac = a_hat.cast<cplx>();
      const Vector3cd ac_x_LY = cross(ac, LY);
      grad[lm_index(lam, mu)] = -(ac * (k * radial.deriv[lam] * Y[lm_index(lam, mu)]) -
                                  (I * radial.value[lam] / dist) * ac_x_LY);
    }
  }
  std::array<MatrixXcd, 3> dS;
  for (auto& m : dS) m = MatrixXcd::Zero(size(), size());
  for (const auto& t : terms_) {
    const Vector3cd& g = grad[lm_index(t.lambda, t.mu)];
    for (int q = 0; q < 3; ++q) dS[q](t.row, t.col) += t.weight * g(q);
  }
  return dS;
}

MatrixXcd TranslationBasis::vector_A(const MatrixXcd& S) const {
  MatrixXcd A = Lz_ * S * Lz_ + 0.5 * (Lplus_ * S * Lminus_ + Lminus_ * S * Lplus_);
  for (int r = 0; r < size(); ++r) {
    for (int c = 0; c < size(); ++c) {
      const int lr = static_cast<int>(std::sqrt(r + 1.0 + 1e-9));
      const int lc = static_cast<int>(std::sqrt(c + 1.0 + 1e-9));
      A(r, c) /= std::sqrt(static_cast<double>(lr * (lr + 1) * lc * (lc + 1)));
    }
  }
  return A;
}

MatrixXcd TranslationBasis::vector_B(cplx k, const Vector3d& d, const MatrixXcd& S) const {
  const cplx dplus(d.x(), d.y());
  const cplx dminus(d.x(), -d.y());
  const MatrixXcd dL = d.z() * Lz_ + 0.5 * (dminus * Lplus_ + dplus * Lminus_);
  MatrixXcd B = (k / I) * (dL * S);
  for (int r = 0; r < size(); ++r) {
    for (int c = 0; c < size(); ++c) {
      const int lr = static_cast<int>(std::sqrt(r + 1.0 + 1e-9));
      const int lc = static_cast<int>(std::sqrt(c + 1.0 + 1e-9));
      B(r, c) /= std::sqrt(static_cast<double>(lr * (lr + 1) * lc * (lc + 1)));
    }
  }
  return B;
}

TranslationOperator TranslationBasis::direct(cplx k, const Vector3d& d, RadialKind kind, bool scaled) const {
  const MatrixXcd S = scalar(k, d, kind, scaled);
  TranslationOperator op;
  op.L_max = L_max_;
  op.k = k;
  op.separation = d;
  op.kind = kind;
  op.scaled = scaled;
  op.A = vector_A(S);
  op.B = vector_B(k, d, S);
  return op;
}

std::array<TranslationOperator, 3> TranslationBasis::gradient(cplx k, const Vector3d& d, RadialKind kind,
                                                              bool scaled) const {
  const MatrixXcd S = scalar(k, d, kind, scaled);
  const auto dS = scalar_gradient(k, d, kind, scaled);
  std::array<TranslationOperator, 3> out;
  for (int q = 0; q < 3; ++q) {
    auto& op = out[q];
    op.L_max = L_max_;
    op.k = k;
    op.separation = d;
    op.kind = kind;
    op.scaled = scaled;
    op.A = vector_A(dS[q]);
    // B = (k/i) N^{-1} (d.L) S N^{-1}; product rule in d.
    op.B = vector_B(k, d, dS[q]) + vector_B(k, Vector3d::Unit(q), S);
  }
  return out;
}

TranslationOperator TranslationBasis::axial(cplx kd, RadialKind kind, bool scaled) const {
  if (kd == cplx(0.0)) throw std::domain_error("axial_translation: kd = 0 is singular");
  const auto radial = radial_table(2 * L_max_, kd, kind, scaled);
  MatrixXcd S = MatrixXcd::Zero(size(), size());
  // Only mu = 0 harmonics survive along the axis; the wave centre sits at +z,
  // so the expansion direction is -z where Y_{lambda 0} = (-1)^lambda Y_{lambda 0}(z).
  for (const auto& t : terms_) {
    if (t.mu != 0) continue;
    const double y = std::sqrt((2.0 * t.lambda + 1.0) / (4.0 * std::numbers::pi)) * ((t.lambda % 2) ? -1.0 : 1.0);
    S(t.row, t.col) += t.weight * radial.value[t.lambda] * y;
  }
  TranslationOperator op;
  op.L_max = L_max_;
  op.k = kd;
  op.separation = Vector3d::UnitZ();
  op.kind = kind;
  op.scaled = scaled;
  op.A = vector_A(S);
  op.B = vector_B(kd, Vector3d::UnitZ(), S);
  return op;
}

TranslationOperator axial_translation(int L_max, cplx kd, RadialKind kind, bool scaled) {
  return TranslationBasis(L_max).axial(kd, kind, scaled);
}

MatrixXcd wigner_rotation(int L_max, double alpha, double beta, double gamma) {
  const int n = mode_count(L_max);
  MatrixXcd D = MatrixXcd::Zero(n, n);
  const double c = std::cos(0.5 * beta);
  const double s = std::sin(0.5 * beta);
  auto lf = [](int v) { return std::lgamma(v + 1.0); };
  for (int l = 1; l <= L_max; ++l) {
    for (int mp = -l; mp <= l; ++mp) {
      for (int m = -l; m <= l; ++m) {
        double d = 0.0;
        const int s_min = std::max(0, m - mp);
        const int s_max = std::min(l + m, l - mp);
        for (int k = s_min; k <= s_max; ++k) {
          const double log_mag = 0.5 * (lf(l + mp) + lf(l - mp) + lf(l + m) + lf(l - m)) -
                                 (lf(l + m - k) + lf(k) + lf(mp - m + k) + lf(l - mp - k));
          const int pc = 2 * l + m - mp - 2 * k;
          const int ps = mp - m + 2 * k;
          const double term = std::exp(log_mag) * std::pow(c, pc) * std::pow(s, ps);
          d += ((mp - m + k) % 2 == 0) ? term : -term;
        }
        D(mode_index(l, mp), mode_index(l, m)) = std::exp(-I * static_cast<double>(mp) * alpha) * d *
                                                 std::exp(-I * static_cast<double>(m) * gamma);
      }
    }
  }
  return D;
}

TranslationOperator general_translation(int L_max, cplx k, const Vector3d& separation, RadialKind kind,
                                        bool scaled) {
  check_separation(separation);
  const double dist = separation.norm();
  const Vector3d u = separation / dist;
  const double beta = std::acos(std::clamp(u.z(), -1.0, 1.0));
  const double alpha = (u.x() == 0.0 && u.y() == 0.0) ? 0.0 : std::atan2(u.y(), u.x());
  TranslationOperator op = TranslationBasis(L_max).axial(k * dist, kind, scaled);
  op.k = k;
  op.separation = separation;
  if (alpha != 0.0 || beta != 0.0) {
    const MatrixXcd D = wigner_rotation(L_max, alpha, beta, 0.0);
    op.A = D * op.A * D.adjoint();
    op.B = D * op.B * D.adjoint();
  }
  return op;
}

TranslationOperator direct_translation(int L_max, cplx k, const Vector3d& separation, RadialKind kind,
                                       bool scaled) {
  return TranslationBasis(L_max).direct(k, separation, kind, scaled);
}

std::array<TranslationOperator, 3> translation_gradient(int L_max, cplx k, const Vector3d& separation,
                                                        RadialKind kind, bool scaled) {
  return TranslationBasis(L_max).gradient(k, separation, kind, scaled);
}

VectorWave vector_wave(RadialKind kind, int L, int m, cplx k, const Vector3d& position) {
  if (L < 1 || std::abs(m) > L) throw std::invalid_argument("vector_wave: need L >= 1 and |m| <= L");
  const double r = position.norm();
  if (!(r > 0.0)) throw std::domain_error("vector_wave: evaluation at the origin");
  const auto radial = radial_table(L, k * r, kind, false);
  const auto Y = specfun::spherical_harmonics(L, position);
  const double norm = std::sqrt(static_cast<double>(L * (L + 1)));
  const Vector3cd X = angular_momentum_on_harmonic(Y, L, m) / norm;
  const Vector3cd rhat = (position / r).cast<cplx>();
  const cplx z = radial.value[L];
  const cplx dz = radial.deriv[L];
  VectorWave w;
  w.M = z * X;
  w.N = (I * norm * z / r * Y[lm_index(L, m)] * rhat + (z / r + k * dz) * cross(rhat, X)) / k;
  return w;
}

}  // namespace casimir::translation
