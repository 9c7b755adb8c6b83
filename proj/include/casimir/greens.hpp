#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace casimir::greens {

using cplx = std::complex<double>;
using Eigen::Matrix3cd;
using Eigen::Vector3d;

struct GreenTensorSample {
  Vector3d x = Vector3d::Zero();  // m
  Vector3d y = Vector3d::Zero();  // m
  cplx k = 0.0;                   // 1/m
  Matrix3cd value = Matrix3cd::Zero();
};

/// e^{ikr} / (4 pi r)
cplx scalar_green(double r, cplx k);

/// (delta + grad grad / k^2) e^{ik|x-y|} / (4 pi |x-y|), in transverse and
/// longitudinal form. Throws std::invalid_argument at x = y or k = 0.
Matrix3cd free_green_tensor(const Vector3d& x, const Vector3d& y, cplx k);
GreenTensorSample sample(const Vector3d& x, const Vector3d& y, cplx k);

/// d/dk of free_green_tensor.
Matrix3cd free_green_tensor_dk(const Vector3d& x, const Vector3d& y, cplx k);

/// Smooth cutoff in s = |x - z| + |z - y|: 1 for s <= R, 0 for s >= 2R and
/// infinitely differentiable in between. The support lies within distance
/// R of the midpoint of x and y.
double window(double s, double radius);

/// int d^3z g(x - z) g(z - y) w(|x - z| + |z - y|) with |x - y| = d,
/// reduced analytically to one integral over s. Needs d < radius.
cplx composed_scalar(double d, cplx k, double radius);

/// The same integral by direct quadrature in spherical coordinates about x.
cplx composed_scalar_direct(double d, cplx k, double radius);

struct CompositionOptions {
  double eta = 1e-4;  // k -> k (1 + i eta)
  /// Combine eta and eta / 2 to cancel the O(eta) error.
  bool extrapolate = true;
};

/// Left side int d^3z G(x, z) G(y, z)^T against (1 / 2k) dG(x, y)/dk.
struct CompositionResult {
  cplx scalar_lhs = 0.0, scalar_rhs = 0.0;
  Matrix3cd tensor_lhs = Matrix3cd::Zero(), tensor_rhs = Matrix3cd::Zero();
  double scalar_residual = 0.0;  // relative
  double tensor_residual = 0.0;  // relative, Frobenius norm
};

CompositionResult composition_check(const Vector3d& x, const Vector3d& y, double k, double radius,
                                    const CompositionOptions& options = {});

struct CompositionConvergence {
  std::vector<double> radius;
  std::vector<double> residual;  // max of scalar and tensor
  /// False when the residual fails to drop as the radius doubles.
  bool converged = false;
};

CompositionConvergence composition_convergence(const Vector3d& x, const Vector3d& y, double k, double radius,
                                               int doublings, const CompositionOptions& options = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace casimir::greens
