#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "casimir/force.hpp"
#include "casimir/spectral.hpp"
#include "casimir/translation.hpp"

using namespace casimir;
using namespace casimir::force;
using Eigen::Vector3d;

namespace {

const mie::MaterialPair polystyrene{2.6, 1.0, 1e-6};

Ensemble pair(double x, const mie::MaterialPair& a = polystyrene, const mie::MaterialPair& b = polystyrene,
              double T = 0.0) {
  Ensemble e;
  e.eps_background = a.eps_background;
  e.temperature = T;
  e.spheres = {Sphere{1, Vector3d(0, 0, x * a.radius), a}, Sphere{2, Vector3d::Zero(), b}};
  return e;
}

Ensemble triple(const Vector3d& c3) {
  Ensemble e;
  e.spheres = {Sphere{1, Vector3d::Zero(), polystyrene}, Sphere{2, Vector3d(0, 0, 10e-6), polystyrene},
               Sphere{3, c3, polystyrene}};
  return e;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("dipole-dipole coefficient") {
  const auto c = series_coefficients(1, 1.0);
  REQUIRE(c.size() == 1);
  // int_0^inf e^{-2u} 2 (3 + 6u + 5u^2 + 2u^3 + u^4) du = 23/2, times 2.
  CHECK(std::abs(c[0].u - 23.0) < 1e-12);
  CHECK(std::abs(c[0].v - 161.0) < 1e-11);
  // A dielectric background rescales by 1/sqrt(eps_B) only.
  CHECK(std::abs(series_coefficients(1, 2.2)[0].u - 23.0 / std::sqrt(2.2)) < 1e-12);
}

TEST_CASE("loop trace: dipole closed form and reversal") {
  const double kappa = 0.7;
  const std::vector<Vector3d> c{Vector3d(0.1, 0.2, 0.0), Vector3d(1.0, -2.0, 2.5), Vector3d(-1.5, 0.5, 1.0)};
  const double a1 = 0.3, a2 = 0.2, a3 = 0.45;
  // Dipole plus smaller higher multipoles for the three-body checks.
  auto coupling = [&](double a) {
    return std::vector<mie::Coupling>{
        {2.0 / 3.0 * a * std::pow(kappa, 3), 0.0}, {-0.1 * a * std::pow(kappa, 5), 0.0}, {0.01 * a, 0.0}};
  };
  const double r = (c[1] - c[0]).norm(), u = kappa * r;
  const double P = 3 + 6 * u + 5 * u * u + 2 * std::pow(u, 3) + std::pow(u, 4);
  const double two = loop_trace(c, {0, 1, 0}, {coupling(a1), coupling(a2)}, kappa, 1);
  CHECK(rel(two, a1 * a2 * 2 * P / std::pow(r, 6)) < 1e-12);

  const double fwd = loop_trace(c, {0, 1, 2, 0}, {coupling(a1), coupling(a2), coupling(a3)}, kappa, 3);
  const double back = loop_trace(c, {0, 2, 1, 0}, {coupling(a1), coupling(a3), coupling(a2)}, kappa, 3);
  CHECK(std::abs(fwd - back) < 1e-12 * std::abs(fwd));
  CHECK(loop_trace(c, {0, 1, 2, 0}, {coupling(a1), coupling(0.0), coupling(a3)}, kappa, 3) == 0.0);
}

TEST_CASE("two spheres: attraction, Newton's third law, series agreement") {
  Options opt;
  opt.L_max = 3;
  const auto e = pair(10.0);
  const auto f1 = force_on_sphere(e, 1, opt);
  const auto f2 = force_on_sphere(e, 2, opt);
  CHECK(f1.force.z() < 0.0);
  CHECK(f1.potential < 0.0);
  CHECK((f1.force + f2.force).norm() < 1e-10 * f1.force.norm());
  CHECK(std::abs(f1.force.x()) + std::abs(f1.force.y()) < 1e-14 * f1.force.norm());
  CHECK(f1.converged());
  REQUIRE(f1.per_diagram.size() == 1);
  CHECK(f1.per_diagram[0].cycle == std::vector<int>{1, 2, 1});
  CHECK(std::abs(f1.per_diagram[0].loop_distance - 20e-6) < 1e-18);

  const auto s = two_sphere_retarded_series(polystyrene, polystyrene, 10e-6, 3);
  CHECK(rel(s.force, f1.force.z()) < 1e-10);
  CHECK(rel(s.potential, f1.potential) < 1e-10);
}

TEST_CASE("index-matched spheres feel nothing") {
  const mie::MaterialPair matched{1.0, 1.0, 1e-6};
  const auto r = force_on_sphere(pair(6.0, matched, matched), 1);
  CHECK(r.force == Vector3d::Zero());
  CHECK(r.potential == 0.0);
  const auto s = two_sphere_retarded_series(matched, polystyrene, 6e-6, 3);
  CHECK(s.force == 0.0);
  Options full;
  full.coupling = mie::CouplingModel::FullMie;
  CHECK(force_on_sphere(pair(6.0, matched, matched), 1, full).force == Vector3d::Zero());
}

TEST_CASE("force is minus the gradient of the potential") {
  Options opt;
  opt.L_max = 3;
  opt.stress_kernel = false;
  opt.estimate_convergence = false;
  for (double x : {4.0, 10.0, 25.0}) {
    const double h = 1e-4 * x;
    const double vp = force_on_sphere(pair(x + h), 1, opt).potential;
    const double vm = force_on_sphere(pair(x - h), 1, opt).potential;
    const double fz = force_on_sphere(pair(x), 1, opt).force.z();
    CHECK(rel(-(vp - vm) / (2 * h), fz) < 1e-4);
  }
  // Full Mie couplings and three bodies go through the same gradient.
  opt.coupling = mie::CouplingModel::FullMie;
  opt.L_max = 2;
  const Vector3d c3(4e-6, 1e-6, 5e-6);
  const auto base = force_on_sphere(triple(c3), 3, opt);
  for (int q = 0; q < 3; ++q) {
    const double h = 1e-4;  // units of R
    auto shifted = [&](double s) {
      Vector3d c = c3;
      c(q) += s * 1e-6;
      return force_on_sphere(triple(c), 3, opt).potential;
    };
    const double fd = -(shifted(h) - shifted(-h)) / (2 * h);
    CHECK(std::abs(fd - base.force(q)) < 1e-4 * base.force.norm());
  }
}

TEST_CASE("curvature weight lowers the force magnitude by O(R^2/r^2)") {
  StressKernel k{2.2};
  CHECK(k.W(2, 0.0) == 36.0);
  CHECK(std::abs(k.weight(1, 0.4) - (1 - 0.5 * 3.2 * 0.16 / 2)) < 1e-15);
  CHECK(std::abs(StressKernel::radial_product(0, 1.0) + std::sin(1.0) * std::cos(1.0)) < 1e-14);
  CHECK(std::abs(StressKernel::normalization - 1.0 / (4 * std::numbers::pi)) < 1e-17);
  Options on, off;
  off.stress_kernel = false;
  const double a = force_on_sphere(pair(10.0), 1, on).force.z();
  const double b = force_on_sphere(pair(10.0), 1, off).force.z();
  CHECK(std::abs(a) < std::abs(b));
  CHECK(std::abs(a / b - 1.0) < 0.1);
  const auto c = series_coefficients(1, 1.0)[0];
  CHECK(rel(c.v + c.w / 100.0, c.v * a / b) < 1e-3);
}

TEST_CASE("leading-order scaling and truncation convergence") {
  Options opt;
  opt.L_max = 3;
  const double f40 = force_on_sphere(pair(40.0), 1, opt).force.z();
  const double f80 = force_on_sphere(pair(80.0), 1, opt).force.z();
  CHECK(std::abs(f80 / f40 / std::pow(2.0, -8) - 1.0) < 0.01);

  for (double x : {5.0, 10.0, 20.0}) {
    std::vector<double> f;
    for (int L = 1; L <= 4; ++L) {
      Options o;
      o.L_max = L;
      o.estimate_convergence = false;
      f.push_back(force_on_sphere(pair(x), 1, o).force.z());
    }
    double previous = 1e300;
    for (int L = 1; L < 4; ++L) {
      const double change = std::abs(f[L] - f[L - 1]) / std::abs(f[L]);
      CHECK(change < previous);
      previous = change;
    }
  }
}

TEST_CASE("three spheres: pipeline equals the dipole Green-tensor evaluator") {
  Options opt;
  opt.L_max = 1;
  opt.stress_kernel = false;
  for (const Vector3d& c3 : {Vector3d(4e-6, 1e-6, 5e-6), Vector3d(-7e-6, 0.0, 2e-6), Vector3d(0.0, 3e-6, 14e-6)}) {
    const auto e = triple(c3);
    const auto r = force_on_sphere(e, 1, opt);
    CHECK(rel(r.potential, three_sphere_potential(e)) < 1e-10);
    CHECK((r.force - three_sphere_force(e)).norm() < 1e-10 * r.force.norm());
    // Both orientations of the cycle contribute equally.
    REQUIRE(r.per_diagram.size() == 2);
    CHECK((r.per_diagram[0].force - r.per_diagram[1].force).norm() < 1e-12 * r.force.norm());
    CHECK(std::abs(r.per_diagram[0].potential - r.per_diagram[1].potential) < 1e-12 * std::abs(r.potential));
  }
  // Mirror symmetry of the scan.
  const auto scan = scan_three_spheres(polystyrene, 1.0, 0.0, 10.0, {3.0, 6.0}, {-0.7, 0.7, 0.0});
  for (int i = 0; i < 2; ++i) CHECK(scan.potential(i, 0) == scan.potential(i, 1));
  // x = 1.5 overlaps sphere 1.
  const auto bad = scan_three_spheres(polystyrene, 1.0, 0.0, 10.0, {1.5}, {0.3});
  CHECK(std::isnan(bad.potential(0, 0)));
}

TEST_CASE("rotating the whole ensemble rotates the force") {
  Options opt;
  opt.L_max = 2;
  const auto e = triple(Vector3d(4e-6, 1e-6, 5e-6));
  const auto r = force_on_sphere(e, 2, opt);
  const Eigen::Matrix3d R =
      Eigen::AngleAxisd(0.7, Vector3d(1, 2, -1).normalized()).toRotationMatrix();
  Ensemble rot = e;
  for (auto& s : rot.spheres) s.center = R * s.center + Vector3d(3e-6, -1e-6, 2e-6);
  const auto rr = force_on_sphere(rot, 2, opt);
  CHECK(std::abs(rr.force.norm() - r.force.norm()) < 1e-9 * r.force.norm());
  CHECK((rr.force - R * r.force).norm() < 1e-9 * r.force.norm());
  CHECK(std::abs(rr.potential - r.potential) < 1e-9 * std::abs(r.potential));
}

TEST_CASE("finite temperature") {
  const mie::MaterialPair silicone{2.6, 2.2, 1e-6};
  const auto t = two_sphere_finite_T(silicone, silicone, 20e-6, 293.0, 2, 3);
  CHECK(t.force < 0.0);
  REQUIRE(t.per_pole.size() == 2);

  // Cold limit: poles dense enough that the sum is a Riemann sum of the T = 0 integral.
  const double r = 10e-6;
  const double scale = spectral::constants::k_B * 2 * r * std::sqrt(2.2) / (spectral::constants::hbar * spectral::constants::c);
  const double T = 0.005 / scale;
  const auto cold = two_sphere_finite_T(silicone, silicone, r, T, 3000, 2);
  const auto zero = two_sphere_retarded_series(silicone, silicone, r, 2);
  CHECK(rel(cold.force, zero.force) < 0.01);

  // Per-pole weights factor as e^{-2 r sqrt(eps_B) k_B T l pi / (hbar c)}.
  const auto g1 = spectral::build_matsubara_grid(293.0, 2 * 20e-6, 2.2, 2);
  const auto g2 = spectral::build_matsubara_grid(293.0, 2 * 27e-6, 2.2, 2);
  for (int l = 1; l <= 2; ++l) {
    const double expect = std::exp(-2 * (27e-6 - 20e-6) * std::sqrt(2.2) * spectral::constants::k_B * 293.0 * l *
                                   std::numbers::pi / (spectral::constants::hbar * spectral::constants::c));
    CHECK(rel(std::exp(-g2.nodes[l - 1].X) / std::exp(-g1.nodes[l - 1].X), expect) < 1e-10);
  }
}

TEST_CASE("axial TE/TM cross terms cancel") {
  // Tr(t A t B) over the m-diagonal axial blocks: A is even in m, B odd.
  const auto op = translation::axial_translation(4, translation::cplx(0.0, 3.0), translation::RadialKind::Outgoing, true);
  Eigen::VectorXd t(op.A.rows());
  for (int L = 1; L <= 4; ++L)
    for (int m = -L; m <= L; ++m) t(translation::mode_index(L, m)) = 1.0 / (L + 0.5);
  const auto cross = (t.asDiagonal() * op.A * t.asDiagonal() * op.B).trace();
  const auto direct = (t.asDiagonal() * op.A * t.asDiagonal() * op.A).trace();
  CHECK(std::abs(cross) < 1e-12 * std::abs(direct));
}

TEST_CASE("validation") {
  CHECK_THROWS_WITH_AS(force_on_sphere(pair(1.5), 1), "ensemble: spheres 1 and 2 overlap", std::invalid_argument);
  const auto touching = force_on_sphere(pair(2.0), 1);
  CHECK(!touching.warnings.empty());
  CHECK_THROWS_AS(force_on_sphere(pair(10.0), 7), std::invalid_argument);
  Ensemble one;
  one.spheres = {Sphere{1, Vector3d::Zero(), polystyrene}};
  CHECK_THROWS_AS(force_on_sphere(one, 1), std::invalid_argument);
  auto mixed = pair(5.0, polystyrene, mie::MaterialPair{2.6, 2.2, 1e-6});
  CHECK_THROWS_AS(force_on_sphere(mixed, 1), std::invalid_argument);
}

TEST_CASE("results do not depend on the thread count") {
  const auto e = triple(Vector3d(4e-6, 1e-6, 5e-6));
  Options a, b;
  a.threads = 1;
  b.threads = 5;
  const auto ra = force_on_sphere(e, 1, a);
  const auto rb = force_on_sphere(e, 1, b);
  CHECK(ra.force == rb.force);
  CHECK(ra.potential == rb.potential);
}

TEST_CASE("large N") {
  const double R = 1.0, s = 3.0;
  for (int N = 3; N <= 12; ++N) {
    const double v = large_N_potential(N, 0.8, R, s);
    CHECK((v > 0) == (N % 2 == 1));
    const double ratio = std::abs(large_N_potential(N + 1, 0.8, R, s) / v);
    CHECK(rel(ratio, 0.8 * std::exp(-1.0) * std::pow(R / s, 3) / (N + 1)) < 1e-12);
    CHECK((large_N_integral(N, 0.8, R, s) > 0) == (N % 2 == 1));
  }
  CHECK(large_N_potential(5, 0.0, R, s) == 0.0);
  // Without the correction the integral is just the constant bracket.
  CHECK(rel(large_N_integral(4, 0.8, R, s), -4.0 / 3.0 * std::pow(0.2 / 27.0, 4)) < 1e-12);
  CHECK_THROWS_AS(large_N_potential(2, 1.0, R, s), std::invalid_argument);
  CHECK_THROWS_AS(large_N_potential(5, 1.0, R, 1.5), std::invalid_argument);
}
