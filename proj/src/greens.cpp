#include "casimir/greens.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace casimir::greens {

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

struct Rule {
  std::vector<double> x, w;
};

const Rule& rule(int n) {
  static const Rule r12 = [] {
    Rule r;
    gauss_legendre(12, r.x, r.w);
    return r;
  }();
  static const Rule r16 = [] {
    Rule r;
    gauss_legendre(16, r.x, r.w);
    return r;
  }();
  return n == 12 ? r12 : r16;
}

// Composite Gauss-Legendre of f over [a, b] split into `panels` equal parts.
template <class F>
cplx integrate(F&& f, double a, double b, int panels, const Rule& r) {
  cplx sum = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < r.x.size(); ++i) sum += r.w[i] * f(mid + 0.5 * h * r.x[i]);
  }
  return sum * (0.5 * h);
}

int panels_for(double length, double width) { return std::max(1, static_cast<int>(std::ceil(length / width))); }

// grad grad f(|r|) from the radial derivatives f' and f''.
Matrix3cd hessian(cplx f1, cplx f2, double r, const Vector3d& rhat) {
  const Eigen::Matrix3d P = rhat * rhat.transpose();
  return f2 * P.cast<cplx>() + (f1 / r) * (Eigen::Matrix3d::Identity() - P).cast<cplx>();
}

// (delta + grad grad / k^2)^2 applied to the radial scalar composition. Its
// radial derivatives follow from differentiating the lower limit, where the
// window is flat.
Matrix3cd tensor_from_scalar(cplx I0, double d, cplx k, const Vector3d& rhat) {
  const cplx e = std::exp(I * k * d) / (8 * pi);
  const cplx I1 = -e, I2 = -I * k * e, I3 = k * k * e, I4 = I * k * k * k * e;
  // h = laplacian of the composition
  const cplx h1 = I3 + 2.0 * I2 / d - 2.0 * I1 / (d * d);
  const cplx h2 = I4 + 2.0 * I3 / d - 4.0 * I2 / (d * d) + 4.0 * I1 / (d * d * d);
  return I0 * Matrix3cd::Identity() + (2.0 / (k * k)) * hessian(I1, I2, d, rhat) +
         hessian(h1, h2, d, rhat) / (k * k * k * k);
}

void check_points(const Vector3d& x, const Vector3d& y, cplx k) {
  if ((x - y).norm() == 0.0) throw std::invalid_argument("free Green tensor is singular at x = y");
  if (k == 0.0) throw std::invalid_argument("free Green tensor needs k != 0");
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * z * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

cplx scalar_green(double r, cplx k) { return std::exp(I * k * r) / (4 * pi * r); }

Matrix3cd free_green_tensor(const Vector3d& x, const Vector3d& y, cplx k) {
  check_points(x, y, k);
  const Vector3d d = x - y;
  const double r = d.norm();
  const Vector3d rhat = d / r;
  const cplx u = k * r, g = scalar_green(r, k);
  const cplx transverse = 1.0 + I / u - 1.0 / (u * u);
  const cplx longitudinal = -1.0 - 3.0 * I / u + 3.0 / (u * u);
  return g * (transverse * Matrix3cd::Identity() + longitudinal * (rhat * rhat.transpose()).cast<cplx>());
}

GreenTensorSample sample(const Vector3d& x, const Vector3d& y, cplx k) {
  return GreenTensorSample{x, y, k, free_green_tensor(x, y, k)};
}

Matrix3cd free_green_tensor_dk(const Vector3d& x, const Vector3d& y, cplx k) {
  check_points(x, y, k);
  const Vector3d d = x - y;
  const double r = d.norm();
  const Vector3d rhat = d / r;
  const cplx u = k * r, g = scalar_green(r, k);
  const cplx A = 1.0 + I / u - 1.0 / (u * u), dA = -I / (u * u) + 2.0 / (u * u * u);
  const cplx B = -1.0 - 3.0 * I / u + 3.0 / (u * u), dB = 3.0 * I / (u * u) - 6.0 / (u * u * u);
  return g * r *
         ((I * A + dA) * Matrix3cd::Identity() + (I * B + dB) * (rhat * rhat.transpose()).cast<cplx>());
}

double window(double s, double radius) {
  const double t = (s - radius) / radius;
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return b / (a + b);
}

cplx composed_scalar(double d, cplx k, double radius) {
  if (!(d > 0.0) || !(d < radius)) throw std::invalid_argument("composed_scalar: need 0 < d < radius");
  // In s = |x-z| + |z-y|, t = |x-z| - |z-y| the volume element is
  // 2 pi rho1 rho2 / d ds dt / 2; the t integral over [-d, d] is exact.
  const double width = 0.5 / std::abs(k);
  auto f = [&](double s) { return std::exp(I * k * s) * window(s, radius); };
  const cplx sum = integrate(f, d, radius, panels_for(radius - d, width), rule(16)) +
                   integrate(f, radius, 2 * radius, panels_for(radius, width), rule(16));
  return sum / (8 * pi);
}

cplx composed_scalar_direct(double d, cplx k, double radius) {
  if (!(d > 0.0) || !(d < radius)) throw std::invalid_argument("composed_scalar_direct: need 0 < d < radius");
  const double kk = std::abs(k);
  const double sqrt2 = std::sqrt(2.0);
  // Polar angle through mu = 1 - v^2 about the x -> y axis, graded near
  // v = 0 where the second singularity sits when |x - z| = d.
  std::vector<std::pair<double, double>> v_panels;
  double lo = 1e-10;
  v_panels.emplace_back(0.0, lo);
  while (lo < 0.05) {
    v_panels.emplace_back(lo, 2 * lo);
    lo *= 2;
  }
  auto angular = [&](double rho1) {
    auto f = [&](double v) {
      const double rho2 = std::sqrt((rho1 - d) * (rho1 - d) + 2 * rho1 * d * v * v);
      return 2 * v * std::exp(I * k * rho2) * window(rho1 + rho2, radius) / rho2;
    };
    cplx sum = 0.0;
    for (const auto& [a, b] : v_panels) sum += integrate(f, a, b, 1, rule(12));
    const int n = panels_for(kk * (rho1 + d), 0.25) + 8;
    return sum + integrate(f, lo, sqrt2, n, rule(12));
  };
  auto radial = [&](double rho1) { return rho1 * std::exp(I * k * rho1) * angular(rho1); };
  const double top = radius + d;
  const double width = 0.25 / kk;
  const cplx sum = integrate(radial, 0.0, d, panels_for(d, width), rule(12)) +
                   integrate(radial, d, top, panels_for(top - d, width), rule(12));
  return sum / (8 * pi);
}

CompositionResult composition_check(const Vector3d& x, const Vector3d& y, double k, double radius,
                                    const CompositionOptions& options) {
  if (!(k > 0.0)) throw std::invalid_argument("composition_check: need real k > 0");
  check_points(x, y, k);
  const double d = (x - y).norm();
  const Vector3d rhat = (x - y) / d;
  auto at = [&](double eta, cplx& s, Matrix3cd& t) {
    const cplx kd = k * cplx(1.0, eta);
    s = composed_scalar(d, kd, radius);
    t = tensor_from_scalar(s, d, kd, rhat);
  };
  CompositionResult r;
  at(options.eta, r.scalar_lhs, r.tensor_lhs);
  if (options.extrapolate) {
    cplx s;
    Matrix3cd t;
    at(0.5 * options.eta, s, t);
    r.scalar_lhs = 2.0 * s - r.scalar_lhs;
    r.tensor_lhs = 2.0 * t - r.tensor_lhs;
  }
  r.scalar_rhs = I * std::exp(I * k * d) / (8 * pi * k);
  r.tensor_rhs = free_green_tensor_dk(x, y, k) / (2 * k);
  r.scalar_residual = std::abs(r.scalar_lhs - r.scalar_rhs) / std::abs(r.scalar_rhs);
  r.tensor_residual = (r.tensor_lhs - r.tensor_rhs).norm() / r.tensor_rhs.norm();
  return r;
}

CompositionConvergence composition_convergence(const Vector3d& x, const Vector3d& y, double k, double radius,
                                               int doublings, const CompositionOptions& options) {
  CompositionConvergence c;
  c.converged = true;
  for (int j = 0; j <= doublings; ++j) {
    const double R = radius * std::pow(2.0, j);
    const auto r = composition_check(x, y, k, R, options);
    c.radius.push_back(R);
    c.residual.push_back(std::max(r.scalar_residual, r.tensor_residual));
    if (j > 0 && !(c.residual[j] < c.residual[j - 1])) c.converged = false;
  }
  return c;
}

}  // namespace casimir::greens
