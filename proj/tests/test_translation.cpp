#include <doctest.h>

#include <cmath>

#include "casimir/specfun.hpp"
#include "casimir/translation.hpp"

using namespace casimir::translation;

namespace {

constexpr cplx I{0.0, 1.0};

double rel_norm(const MatrixXcd& a, const MatrixXcd& b) { return (a - b).norm() / b.norm(); }

// Re-expands the wave (L, m) centred at d in regular waves about the origin
// and compares with the wave evaluated directly.
double field_error(const TranslationOperator& op, RadialKind kind, int L, int m, const Vector3d& r) {
  const auto exact = vector_wave(kind, L, m, op.k, r - op.separation);
  Vector3cd M = Vector3cd::Zero(), N = Vector3cd::Zero();
  for (int l = 1; l <= op.L_max; ++l) {
    for (int mm = -l; mm <= l; ++mm) {
      const auto w = vector_wave(RadialKind::Regular, l, mm, op.k, r);
      const int row = mode_index(l, mm), col = mode_index(L, m);
      M += op.A(row, col) * w.M + op.B(row, col) * w.N;
      N += op.A(row, col) * w.N + op.B(row, col) * w.M;
    }
  }
  return std::max((M - exact.M).norm() / exact.M.norm(), (N - exact.N).norm() / exact.N.norm());
}

}  // namespace

TEST_CASE("vector waves: N is curl M / k") {
  const cplx k = 1.3;
  const Vector3d p(0.3, 0.4, -0.5);
  const double h = 1e-5;
  for (auto kind : {RadialKind::Regular, RadialKind::Outgoing}) {
    for (int L = 1; L <= 3; ++L) {
      for (int m = -L; m <= L; ++m) {
        auto D = [&](int i, int j) {
          const Vector3d e = Vector3d::Unit(j) * h;
          return (vector_wave(kind, L, m, k, p + e).M(i) - vector_wave(kind, L, m, k, p - e).M(i)) / (2 * h);
        };
        const Vector3cd curl(D(2, 1) - D(1, 2), D(0, 2) - D(2, 0), D(1, 0) - D(0, 1));
        const Vector3cd N = vector_wave(kind, L, m, k, p).N;
        CHECK((curl / k - N).norm() < 1e-7 * N.norm());
      }
    }
  }
}

TEST_CASE("re-expansion reproduces the translated field") {
  const cplx k = 1.3;
  const Vector3d d = Vector3d(0.2, -0.3, 0.5).normalized() * (0.5 / 1.3);  // k|d| = 0.5
  const Vector3d r(0.05, 0.1, -0.07);
  const auto regular = direct_translation(10, k, d, RadialKind::Regular);
  const auto outgoing = direct_translation(30, k, d, RadialKind::Outgoing);
  for (int L = 1; L <= 2; ++L) {
    for (int m = -L; m <= L; ++m) {
      CHECK(field_error(regular, RadialKind::Regular, L, m, r) < 1e-8);
      CHECK(field_error(outgoing, RadialKind::Outgoing, L, m, r) < 1e-8);
    }
  }
}

TEST_CASE("regular translation round trip") {
  // Translating by d then by -d is the identity on the low orders.
  const cplx k = 1.0;
  const Vector3d d = Vector3d(1.0, 2.0, -0.5).normalized() * 0.5;
  const int L_max = 10;
  const auto fwd = direct_translation(L_max, k, d, RadialKind::Regular);
  const auto back = direct_translation(L_max, k, -d, RadialKind::Regular);
  const MatrixXcd A = back.A * fwd.A + back.B * fwd.B;
  const MatrixXcd B = back.A * fwd.B + back.B * fwd.A;
  const int low = mode_count(3);
  CHECK((A.topLeftCorner(low, low) - MatrixXcd::Identity(low, low)).norm() < 1e-8);
  CHECK(B.topLeftCorner(low, low).norm() < 1e-8);
}

TEST_CASE("axial operator: m diagonal, B vanishes for m = 0, parity") {
  const int L_max = 6;
  for (auto kind : {RadialKind::Regular, RadialKind::Outgoing}) {
    const auto up = axial_translation(L_max, 1.7, kind);
    const auto down = direct_translation(L_max, 1.0, Vector3d(0, 0, -1.7), kind);
    const auto plus = direct_translation(L_max, 1.0, Vector3d(0, 0, 1.7), kind);
    CHECK(rel_norm(up.A, plus.A) < 1e-13);
    CHECK(rel_norm(up.B, plus.B) < 1e-13);
    for (int l = 1; l <= L_max; ++l) {
      for (int lp = 1; lp <= L_max; ++lp) {
        CHECK(up.B(mode_index(lp, 0), mode_index(l, 0)) == cplx(0.0));
        for (int m = -std::min(l, lp); m <= std::min(l, lp); ++m) {
          const int i = mode_index(lp, m), j = mode_index(l, m);
          const double s = ((l + lp) % 2 == 0) ? 1.0 : -1.0;
          CHECK(std::abs(down.A(i, j) - s * up.A(i, j)) <= 1e-12 * std::abs(up.A(i, j)) + 1e-300);
          CHECK(std::abs(down.B(i, j) + s * up.B(i, j)) <= 1e-12 * std::abs(up.B(i, j)) + 1e-300);
        }
        for (int m = -lp; m <= lp; ++m) {
          for (int mm = -l; mm <= l; ++mm) {
            if (m != mm) CHECK(std::abs(up.A(mode_index(lp, m), mode_index(l, mm))) < 1e-14);
          }
        }
      }
    }
  }
}

TEST_CASE("regular translations compose along z") {
  const int L_max = 18;
  const auto a = axial_translation(L_max, 0.3, RadialKind::Regular);
  const auto b = axial_translation(L_max, 0.4, RadialKind::Regular);
  const auto ab = axial_translation(L_max, 0.7, RadialKind::Regular);
  const MatrixXcd A = a.A * b.A + a.B * b.B;
  const MatrixXcd B = a.A * b.B + a.B * b.A;
  const int low = mode_count(4);
  CHECK(rel_norm(A.topLeftCorner(low, low), ab.A.topLeftCorner(low, low)) < 1e-10);
  CHECK((B - ab.B).topLeftCorner(low, low).norm() < 1e-10 * ab.B.topLeftCorner(low, low).norm());
}

TEST_CASE("rotation route equals direct Gaunt sum") {
  for (const Vector3d& d : {Vector3d(0.2, -0.3, 0.5), Vector3d(-1.0, 0.0, 0.0), Vector3d(0.0, 0.0, -2.0),
                            Vector3d(0.4, 0.9, 0.0)}) {
    for (cplx k : {cplx(1.3), cplx(0.0, 2.0)}) {
      for (bool scaled : {false, true}) {
        const auto g = general_translation(5, k, d, RadialKind::Outgoing, scaled);
        const auto dd = direct_translation(5, k, d, RadialKind::Outgoing, scaled);
        CHECK(rel_norm(g.A, dd.A) < 1e-12);
        CHECK(rel_norm(g.B, dd.B) < 1e-12);
      }
    }
  }
}

TEST_CASE("scaled operator carries e^{-ik|d|}") {
  const Vector3d d(0.3, -0.2, 0.6);
  const cplx k(0.0, 3.0);
  const auto plain = direct_translation(4, k, d);
  const auto scaled = direct_translation(4, k, d, RadialKind::Outgoing, true);
  const cplx f = std::exp(-I * k * d.norm());
  CHECK(rel_norm(scaled.A, f * plain.A) < 1e-13);
  CHECK(rel_norm(scaled.B, f * plain.B) < 1e-13);
}

TEST_CASE("gradient matches central differences") {
  const Vector3d d(0.7, -0.4, 1.1);
  const double h = 1e-6 * d.norm();
  for (cplx k : {cplx(1.1), cplx(0.0, 1.5)}) {
    for (bool scaled : {false, true}) {
      const auto grad = translation_gradient(4, k, d, RadialKind::Outgoing, scaled);
      for (int q = 0; q < 3; ++q) {
        const Vector3d e = Vector3d::Unit(q) * h;
        const auto p = direct_translation(4, k, d + e, RadialKind::Outgoing, scaled);
        const auto m = direct_translation(4, k, d - e, RadialKind::Outgoing, scaled);
        const MatrixXcd fdA = (p.A - m.A) / (2 * h);
        const MatrixXcd fdB = (p.B - m.B) / (2 * h);
        CHECK(rel_norm(grad[q].A, fdA) < 1e-6);
        CHECK(rel_norm(grad[q].B, fdB) < 1e-6);
      }
    }
  }
}

TEST_CASE("dipole block at kd = 1 against closed forms") {
  using casimir::specfun::spherical_hankel_h1;
  const auto op = axial_translation(1, 1.0, RadialKind::Outgoing);
  const cplx h0 = spherical_hankel_h1(0, 1.0), h1 = spherical_hankel_h1(1, 1.0), h2 = spherical_hankel_h1(2, 1.0);
  const int z = mode_index(1, 0), p = mode_index(1, 1), n = mode_index(1, -1);
  CHECK(std::abs(op.A(z, z) - (h0 + h2)) < 1e-13);
  CHECK(std::abs(op.A(p, p) - (h0 - 0.5 * h2)) < 1e-13);
  CHECK(std::abs(op.A(n, n) - (h0 - 0.5 * h2)) < 1e-13);
  CHECK(std::abs(op.B(p, p) + 1.5 * I * h1) < 1e-13);
  CHECK(std::abs(op.B(n, n) - 1.5 * I * h1) < 1e-13);
  // frozen value of the first entry
  CHECK(std::abs(op.A(z, z) - cplx(0.90350603681927, -4.14531987202811)) < 1e-12);
}
