#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace casimir::translation {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::Vector3cd;
using Eigen::Vector3d;

/// Radial dependence of a vector wave: regular (j_L) or outgoing (h+_L).
enum class RadialKind { Regular, Outgoing };

// Conventions, used everywhere in the library:
//
//   X_{Lm}  = L Y_{Lm} / sqrt(L(L+1)),  L = -i r x grad,  Y orthonormal with
//             the Condon-Shortley phase
//   M_{Lm}  = z_L(k r) X_{Lm}
//   N_{Lm}  = curl M_{Lm} / k
//
// A translation operator re-expands a wave centred at `separation` (relative
// to the evaluation origin) in regular waves about the origin:
//
//   M_{Lm}(r - d) = sum A(L'm', Lm) M1_{L'm'}(r) + B(L'm', Lm) N1_{L'm'}(r)
//   N_{Lm}(r - d) = sum A(L'm', Lm) N1_{L'm'}(r) + B(L'm', Lm) M1_{L'm'}(r)
//
// so coefficients about the origin are A c (+ B c) of coefficients about d.
// Rows and columns run over L = 1..L_max, m = -L..L (see mode_index).

constexpr int mode_index(int L, int m) { return L * L + L + m - 1; }
constexpr int mode_count(int L_max) { return L_max * (L_max + 2); }

struct TranslationOperator {
  int L_max = 0;
  cplx k;
  Vector3d separation = Vector3d::Zero();
  RadialKind kind = RadialKind::Outgoing;
  /// When set, entries carry an extra factor e^{-i k |d|} so that outgoing
  /// operators at imaginary k stay polynomial in 1/(k d).
  bool scaled = false;
  MatrixXcd A;
  MatrixXcd B;
};

/// Precomputed angular tables for one truncation order. Immutable and
/// shareable once constructed.
class TranslationBasis {
 public:
  explicit TranslationBasis(int L_max);

  int L_max() const { return L_max_; }
  int size() const { return mode_count(L_max_); }

  /// Scalar addition-theorem matrix S(L'm', Lm) for a wave centred at d.
  MatrixXcd scalar(cplx k, const Vector3d& d, RadialKind kind, bool scaled) const;
  /// d S / d d_q for q = x, y, z.
  std::array<MatrixXcd, 3> scalar_gradient(cplx k, const Vector3d& d, RadialKind kind, bool scaled) const;

  /// Vector coefficients assembled from the scalar ones.
  TranslationOperator direct(cplx k, const Vector3d& d, RadialKind kind, bool scaled) const;
  std::array<TranslationOperator, 3> gradient(cplx k, const Vector3d& d, RadialKind kind, bool scaled) const;

  /// m-diagonal operator for a translation along +z, from the axial scalar
  /// coefficients only.
  TranslationOperator axial(cplx kd, RadialKind kind, bool scaled) const;

 private:
  struct Term {
    int row, col, lambda, mu;
    cplx weight;  // 4 pi i^{L'+lambda-L} * Gaunt integral
  };
  int L_max_;
  std::vector<Term> terms_;
  MatrixXcd Lz_, Lplus_, Lminus_;  // angular momentum in the mode basis

  MatrixXcd vector_A(const MatrixXcd& S) const;
  MatrixXcd vector_B(cplx k, const Vector3d& d, const MatrixXcd& S) const;
};

/// Translation along +z by k d (entries depend on k and d through kd only).
TranslationOperator axial_translation(int L_max, cplx kd, RadialKind kind = RadialKind::Outgoing,
                                      bool scaled = false);

/// Arbitrary separation: rotate z onto the separation, translate axially,
/// rotate back.
TranslationOperator general_translation(int L_max, cplx k, const Vector3d& separation,
                                        RadialKind kind = RadialKind::Outgoing, bool scaled = false);

/// Same operator from the full Gaunt sum; independent of the rotation route.
TranslationOperator direct_translation(int L_max, cplx k, const Vector3d& separation,
                                       RadialKind kind = RadialKind::Outgoing, bool scaled = false);

/// d/d(separation_q) of every entry of A and B.
std::array<TranslationOperator, 3> translation_gradient(int L_max, cplx k, const Vector3d& separation,
                                                        RadialKind kind = RadialKind::Outgoing,
                                                        bool scaled = false);

/// Block-diagonal Wigner rotation matrix D(alpha, beta, gamma) on the mode
/// basis, defined by Y_{Lm}(R^{-1} u) = sum_m' Y_{Lm'}(u) D_{m'm}.
MatrixXcd wigner_rotation(int L_max, double alpha, double beta, double gamma);

/// Values of M_{Lm} and N_{Lm} at a point.
struct VectorWave {
  Vector3cd M;
  Vector3cd N;
};
VectorWave vector_wave(RadialKind kind, int L, int m, cplx k, const Vector3d& position);

}  // namespace casimir::translation
