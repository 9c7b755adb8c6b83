#include "casimir/force.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "casimir/specfun.hpp"
#include "casimir/spectral.hpp"
#include "casimir/translation.hpp"

namespace casimir::force {

namespace {

using translation::cplx;
using translation::RadialKind;
using translation::TranslationBasis;
using Eigen::MatrixXcd;
using Eigen::VectorXd;

// Bases are immutable once built; share one per truncation order.
std::shared_ptr<const TranslationBasis> basis_for(int L_max) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const TranslationBasis>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[L_max];
  if (!slot) slot = std::make_shared<const TranslationBasis>(L_max);
  return slot;
}

// Per-mode coupling vector, TE modes first then TM.
VectorXd coupling_vector(const std::vector<mie::Coupling>& c, int L_max, bool with_te) {
  const int n = translation::mode_count(L_max);
  VectorXd t = VectorXd::Zero(with_te ? 2 * n : n);
  for (int L = 1; L <= L_max; ++L) {
    for (int m = -L; m <= L; ++m) {
      const int i = translation::mode_index(L, m);
      if (with_te) {
        t(i) = c[L - 1].te;
        t(n + i) = c[L - 1].tm;
      } else {
        t(i) = c[L - 1].tm;
      }
    }
  }
  return t;
}

MatrixXcd assemble(const MatrixXcd& A, const MatrixXcd& B, bool with_te) {
  if (!with_te) return A;
  const int n = static_cast<int>(A.rows());
  MatrixXcd U(2 * n, 2 * n);
  U << A, B, B, A;
  return U;
}

struct LoopValue {
  double trace = 0.0;             // energy integrand, exponentials removed
  double trace_weighted = 0.0;    // same with the target's stress weights
  Vector3d gradient = Vector3d::Zero();  // d/d(target centre) of trace_weighted
};

// Tr prod_e T_e U_e for the cycle at imaginary wavenumber kappa, and the
// gradient with respect to the first sphere of the cycle.
LoopValue evaluate_loop(const TranslationBasis& basis, const std::vector<Vector3d>& centers,
                        const std::vector<int>& cycle, const std::vector<VectorXd>& t,
                        const VectorXd& t_target_weighted, double kappa, bool with_te, bool want_gradient) {
  const int N = static_cast<int>(cycle.size()) - 1;
  const cplx k(0.0, kappa);
  std::vector<MatrixXcd> K(static_cast<std::size_t>(N));
  std::vector<MatrixXcd> U(static_cast<std::size_t>(N));
  std::array<MatrixXcd, 3> dU_first, dU_last;
  for (int e = 0; e < N; ++e) {
    const Vector3d d = centers[cycle[e + 1]] - centers[cycle[e]];
    const auto op = basis.direct(k, d, RadialKind::Outgoing, true);
    U[e] = assemble(op.A, op.B, with_te);
    K[e] = t[e].asDiagonal() * U[e];
    if (want_gradient && (e == 0 || e == N - 1)) {
      const auto g = basis.gradient(k, d, RadialKind::Outgoing, true);
      for (int q = 0; q < 3; ++q) {
        const MatrixXcd dq = assemble(g[q].A, g[q].B, with_te);
        if (e == 0) dU_first[q] = dq;
        if (e == N - 1) dU_last[q] = dq;
      }
    }
  }
  const int dim = static_cast<int>(K[0].rows());
  // middle = K_1 ... K_{N-2}
  MatrixXcd middle = MatrixXcd::Identity(dim, dim);
  for (int e = 1; e < N - 1; ++e) middle = middle * K[e];

  LoopValue out;
  const MatrixXcd K0w = t_target_weighted.asDiagonal() * U[0];
  const MatrixXcd tail = middle * K[N - 1];
  out.trace = (K[0] * tail).trace().real();
  out.trace_weighted = (K0w * tail).trace().real();
  if (want_gradient) {
    const MatrixXcd head = K0w * middle;
    const MatrixXcd t_last = t[N - 1].asDiagonal();
    for (int q = 0; q < 3; ++q) {
      // First edge runs target -> next, so moving the target shrinks d.
      const double first = -(t_target_weighted.asDiagonal() * dU_first[q] * tail).trace().real();
      const double last = (head * t_last * dU_last[q]).trace().real();
      out.gradient(q) = first + last;
    }
  }
  return out;
}

struct Node {
  double kappa;   // 1/R1
  double weight;  // includes e^{-kappa D}
};

std::vector<Node> spectral_nodes(double D, double temperature, double eps_B, double R1_m, const Options& opt) {
  std::vector<Node> nodes;
  if (temperature > 0.0) {
    const double dk = spectral::matsubara_spacing(temperature, R1_m, eps_B);  // per R1
    for (int l = 1; l <= opt.matsubara_l_max; ++l) {
      nodes.push_back({l * dk, dk * std::exp(-l * dk * D)});
    }
  } else {
    const auto grid = spectral::build_zero_T_grid(opt.n_nodes);
    for (const auto& n : grid.nodes) nodes.push_back({n.X / D, n.weight / D});
  }
  return nodes;
}

template <class F>
void parallel_for(int n_tasks, int threads, F&& body) {
  threads = std::max(1, std::min(threads, n_tasks));
  if (threads == 1) {
    for (int i = 0; i < n_tasks; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < n_tasks; i += threads) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct Evaluation {
  Vector3d force = Vector3d::Zero();
  double potential = 0.0;
  std::vector<DiagramContribution> per_diagram;
  std::vector<Vector3d> per_node;  // summed over diagrams, in node order
  int nodes = 0;
};

Evaluation evaluate(const Ensemble& ens, int target_index, const Options& opt, int L_max) {
  const double R1 = ens.spheres.front().material.radius;
  const int N = static_cast<int>(ens.spheres.size());
  std::vector<Vector3d> centers;
  for (const auto& s : ens.spheres) centers.push_back(s.center / R1);
  const bool with_te = opt.coupling == mie::CouplingModel::FullMie;
  const auto basis = basis_for(L_max);
  const StressKernel kernel{ens.eps_background};

  const auto diagrams = diagrams::enumerate_simply_connected(centers, target_index);
  std::vector<std::vector<Node>> nodes;
  for (const auto& d : diagrams) {
    nodes.push_back(spectral_nodes(d.loop_distance, ens.temperature, ens.eps_background, R1, opt));
  }
  struct Task {
    int diagram, node;
  };
  std::vector<Task> tasks;
  for (int d = 0; d < static_cast<int>(diagrams.size()); ++d) {
    for (int i = 0; i < static_cast<int>(nodes[d].size()); ++i) tasks.push_back({d, i});
  }
  struct Partial {
    double potential = 0.0;
    Vector3d force = Vector3d::Zero();
  };
  std::vector<Partial> partial(tasks.size());
  const double pref = 2.0 / std::sqrt(ens.eps_background);

  parallel_for(static_cast<int>(tasks.size()), resolve_threads(opt.threads), [&](int i) {
    const auto& diagram = diagrams[tasks[i].diagram];
    const Node node = nodes[tasks[i].diagram][tasks[i].node];
    std::vector<VectorXd> t;
    for (int e = 0; e < N; ++e) {
      const auto& mat = ens.spheres[diagram.cycle[e]].material;
      std::vector<mie::Coupling> c;
      for (int L = 1; L <= L_max; ++L) {
        c.push_back(mie::coupling_imaginary(L, mat, node.kappa * mat.radius / R1, opt.coupling));
      }
      t.push_back(coupling_vector(c, L_max, with_te));
    }
    VectorXd tw = t[0];
    if (opt.stress_kernel) {
      const double y = node.kappa * ens.spheres[target_index].material.radius / R1;
      const int n = translation::mode_count(L_max);
      for (int L = 1; L <= L_max; ++L) {
        for (int m = -L; m <= L; ++m) {
          const int idx = translation::mode_index(L, m);
          tw(idx) *= kernel.weight(L, y);
          if (with_te) tw(n + idx) *= kernel.weight(L, y);
        }
      }
    }
    const LoopValue v = evaluate_loop(*basis, centers, diagram.cycle, t, tw, node.kappa, with_te, true);
    // d D / d(target): both target edges lengthen as it moves away.
    const Vector3d d_first = centers[diagram.cycle[1]] - centers[diagram.cycle[0]];
    const Vector3d d_last = centers[diagram.cycle[0]] - centers[diagram.cycle[N - 1]];
    const Vector3d dD = -d_first.normalized() + d_last.normalized();
    partial[i].potential = -pref * node.weight * v.trace;
    partial[i].force = pref * node.weight * (v.gradient - node.kappa * dD * v.trace_weighted);
  });

  Evaluation out;
  out.per_diagram.resize(diagrams.size());
  for (std::size_t d = 0; d < diagrams.size(); ++d) {
    for (int idx : diagrams[d].cycle) out.per_diagram[d].cycle.push_back(ens.spheres[idx].id);
    out.per_diagram[d].loop_distance = diagrams[d].loop_distance * R1;
  }
  out.nodes = nodes.empty() ? 0 : static_cast<int>(nodes.front().size());
  out.per_node.assign(static_cast<std::size_t>(out.nodes), Vector3d::Zero());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].node < out.nodes) out.per_node[tasks[i].node] += partial[i].force;
    auto& c = out.per_diagram[tasks[i].diagram];
    c.potential += partial[i].potential;
    c.force += partial[i].force;
  }
  for (const auto& c : out.per_diagram) {
    out.potential += c.potential;
    out.force += c.force;
  }
  return out;
}

std::string pair_name(const Ensemble& e, int i, int j) {
  std::ostringstream s;
  s << "spheres " << e.spheres[i].id << " and " << e.spheres[j].id;
  return s.str();
}

// e^{kappa r} times the imaginary-frequency dipole Green tensor (with the
// sign flipped so the static limit is (I - 3 u u^T)/r^3), and its gradient.
Eigen::Matrix3d dipole_tensor(const Vector3d& d, double kappa) {
  const double r = d.norm(), x = kappa * r;
  const Vector3d u = d / r;
  return ((x * x + x + 1) * Eigen::Matrix3d::Identity() - (x * x + 3 * x + 3) * u * u.transpose()) / (r * r * r);
}

std::array<Eigen::Matrix3d, 3> dipole_tensor_gradient(const Vector3d& d, double kappa) {
  const double r = d.norm(), x = kappa * r;
  const Vector3d u = d / r;
  const double a = x * x + x + 1, b = x * x + 3 * x + 3;
  const double r3 = r * r * r;
  const double da = (2 * x + 1) * kappa / r3 - 3 * a / (r3 * r);
  const double db = (2 * x + 3) * kappa / r3 - 3 * b / (r3 * r);
  std::array<Eigen::Matrix3d, 3> g;
  for (int k = 0; k < 3; ++k) {
    const Vector3d du = (Vector3d::Unit(k) - u * u(k)) / r;
    g[k] = da * u(k) * Eigen::Matrix3d::Identity() - db * u(k) * u * u.transpose() -
           (b / r3) * (du * u.transpose() + u * du.transpose());
  }
  return g;
}

struct DipoleRing {
  double potential = 0.0;
  Vector3d force = Vector3d::Zero();
};

DipoleRing dipole_ring(const Ensemble& ens, int n_nodes, int l_max) {
  if (ens.spheres.size() != 3) throw std::invalid_argument("three_sphere_potential: need exactly three spheres");
  ens.validate();
  const double R1 = ens.spheres.front().material.radius;
  std::vector<Vector3d> c;
  std::array<double, 3> alpha{};
  for (int i = 0; i < 3; ++i) {
    c.push_back(ens.spheres[i].center / R1);
    alpha[i] = mie::static_polarizability(1, ens.spheres[i].material) / (R1 * R1 * R1);
  }
  Options opt;
  opt.n_nodes = n_nodes;
  opt.matsubara_l_max = l_max;
  const double D = (c[1] - c[0]).norm() + (c[2] - c[1]).norm() + (c[0] - c[2]).norm();
  const auto nodes = spectral_nodes(D, ens.temperature, ens.eps_background, R1, opt);
  const double pref = 2.0 / std::sqrt(ens.eps_background);
  const double coupling = -alpha[0] * alpha[1] * alpha[2];  // (-1)^3 prod alpha
  const Vector3d dD = -(c[1] - c[0]).normalized() + (c[0] - c[2]).normalized();
  DipoleRing out;
  for (const auto& node : nodes) {
    double g = 0.0;
    Vector3d grad = Vector3d::Zero();
    for (const auto& cyc : {std::array<int, 4>{0, 1, 2, 0}, std::array<int, 4>{0, 2, 1, 0}}) {
      std::array<Eigen::Matrix3d, 3> G;
      for (int e = 0; e < 3; ++e) G[e] = dipole_tensor(c[cyc[e + 1]] - c[cyc[e]], node.kappa);
      g += (G[0] * G[1] * G[2]).trace();
      const auto g0 = dipole_tensor_gradient(c[cyc[1]] - c[cyc[0]], node.kappa);
      const auto g2 = dipole_tensor_gradient(c[cyc[0]] - c[cyc[2]], node.kappa);
      for (int q = 0; q < 3; ++q) grad(q) += -(g0[q] * G[1] * G[2]).trace() + (G[0] * G[1] * g2[q]).trace();
    }
    out.potential += -pref * node.weight * coupling * g;
    out.force += pref * node.weight * coupling * (grad - node.kappa * dD * g);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

void Ensemble::validate() const {
  if (spheres.size() < 2) throw std::invalid_argument("ensemble: need at least two spheres");
  if (!(eps_background > 0.0) || !std::isfinite(eps_background)) {
    throw std::invalid_argument("ensemble: eps_background must be positive");
  }
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw std::invalid_argument("ensemble: temperature must be >= 0");
  }
  for (std::size_t i = 0; i < spheres.size(); ++i) {
    spheres[i].material.validate();
    if (spheres[i].material.eps_background != eps_background) {
      throw std::invalid_argument("ensemble: sphere " + std::to_string(spheres[i].id) +
                                  " has a different background permittivity");
    }
    if (!spheres[i].center.allFinite()) {
      throw std::invalid_argument("ensemble: sphere " + std::to_string(spheres[i].id) + " has a non-finite centre");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (spheres[i].id == spheres[j].id) {
        throw std::invalid_argument("ensemble: duplicate sphere id " + std::to_string(spheres[i].id));
      }
      const double dist = (spheres[i].center - spheres[j].center).norm();
      const double contact = spheres[i].material.radius + spheres[j].material.radius;
      if (dist < contact * (1.0 - 1e-12)) {
        throw std::invalid_argument("ensemble: " + pair_name(*this, static_cast<int>(j), static_cast<int>(i)) +
                                    " overlap");
      }
    }
  }
}

int Ensemble::index_of(int id) const {
  for (std::size_t i = 0; i < spheres.size(); ++i) {
    if (spheres[i].id == id) return static_cast<int>(i);
  }
  throw std::invalid_argument("ensemble: no sphere with id " + std::to_string(id));
}

std::vector<std::pair<int, int>> Ensemble::touching_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < spheres.size(); ++i) {
    for (std::size_t j = i + 1; j < spheres.size(); ++j) {
      const double dist = (spheres[i].center - spheres[j].center).norm();
      const double contact = spheres[i].material.radius + spheres[j].material.radius;
      if (std::abs(dist - contact) <= 1e-12 * contact) out.emplace_back(spheres[i].id, spheres[j].id);
    }
  }
  return out;
}

double StressKernel::W(int L, double y) const {
  const double l2 = L * (L + 1.0);
  return l2 * (l2 - 0.5 * (1.0 + eps_background) * y * y);
}

double StressKernel::weight(int L, double y) const {
  const double l2 = L * (L + 1.0);
  return W(L, y) / (l2 * l2);
}

double StressKernel::radial_product(int L, double y) {
  return y * specfun::spherical_bessel_j(L, y).real() * specfun::spherical_neumann_n(L, y).real();
}

int resolve_threads(int requested) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  int n = requested > 0 ? requested : hw;
  if (const char* env = std::getenv("CASIMIR_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min<long>(n, cap);
  }
  return std::max(1, n);
}

double loop_trace(const std::vector<Vector3d>& centers, const std::vector<int>& cycle,
                  const std::vector<std::vector<mie::Coupling>>& couplings, double kappa, int L_max) {
  if (cycle.size() != couplings.size() + 1) throw std::invalid_argument("loop_trace: one coupling set per cycle position");
  for (const auto& s : couplings) {
    if (static_cast<int>(s.size()) < L_max) throw std::invalid_argument("loop_trace: couplings shorter than L_max");
  }
  bool with_te = false;
  for (const auto& s : couplings)
    for (const auto& c : s) with_te = with_te || c.te != 0.0;
  std::vector<VectorXd> t;
  for (const auto& c : couplings) t.push_back(coupling_vector(c, L_max, with_te));
  return evaluate_loop(*basis_for(L_max), centers, cycle, t, t[0], kappa, with_te, false).trace;
}

ForceResult force_on_sphere(const Ensemble& ensemble, int target_id, const Options& options) {
  ensemble.validate();
  if (options.L_max < 1) throw std::invalid_argument("force_on_sphere: L_max must be >= 1");
  if (options.n_nodes < 1 || options.matsubara_l_max < 1) {
    throw std::invalid_argument("force_on_sphere: spectral grid must have at least one node");
  }
  const int target = ensemble.index_of(target_id);
  const Evaluation main = evaluate(ensemble, target, options, options.L_max);

  ForceResult r;
  r.force = main.force;
  r.potential = main.potential;
  r.per_diagram = main.per_diagram;
  r.L_max = options.L_max;
  r.temperature = ensemble.temperature;
  r.spectral_nodes = main.nodes;
  if (options.estimate_convergence && options.L_max >= 2) {
    const Evaluation lower = evaluate(ensemble, target, options, options.L_max - 1);
    const double scale = main.force.norm();
    if (scale > 0.0) {
      r.convergence_estimate = (main.force - lower.force).norm() / scale;
    } else if (main.potential != 0.0) {
      r.convergence_estimate = std::abs(main.potential - lower.potential) / std::abs(main.potential);
    }
  }
  for (const auto& [a, b] : ensemble.touching_pairs()) {
    r.warnings.push_back("spheres " + std::to_string(a) + " and " + std::to_string(b) +
                         " touch; multipole series convergence is not guaranteed");
  }
  if (!r.converged()) {
    std::ostringstream s;
    s << "truncation: force changes by " << 100.0 * r.convergence_estimate << "% between L_max = "
      << options.L_max - 1 << " and " << options.L_max;
    r.warnings.push_back(s.str());
  }
  return r;
}

// ---------------------------------------------------------------------------

std::vector<SeriesCoefficient> series_coefficients(int max_order, double eps_background, int n_nodes) {
  if (max_order < 1) throw std::invalid_argument("series_coefficients: max_order must be >= 1");
  const auto grid = spectral::build_zero_T_grid(n_nodes);
  const std::vector<Vector3d> centers{Vector3d::Zero(), Vector3d(0, 0, 1)};
  const std::vector<int> cycle{0, 1, 0};
  std::vector<SeriesCoefficient> out;
  for (int m = 1; m <= max_order; ++m) {
    for (int n = 1; n <= max_order; ++n) {
      double I0 = 0.0, I2 = 0.0;
      for (const auto& node : grid.nodes) {
        // Unit polarizabilities at separation 1: X = 2 kappa.
        const double kappa = 0.5 * node.X;
        std::vector<std::vector<mie::Coupling>> c(2, std::vector<mie::Coupling>(static_cast<std::size_t>(max_order)));
        const double sm = (m % 2 == 1) ? 1.0 : -1.0, sn = (n % 2 == 1) ? 1.0 : -1.0;
        c[0][m - 1].tm = sm * mie::leading_prefactor(m) * std::pow(kappa, 2 * m + 1);
        c[1][n - 1].tm = sn * mie::leading_prefactor(n) * std::pow(kappa, 2 * n + 1);
        const double g = loop_trace(centers, cycle, c, kappa, std::max(m, n));
        I0 += 0.5 * node.weight * g;
        I2 += 0.5 * node.weight * kappa * kappa * g;
      }
      SeriesCoefficient s;
      s.m = m;
      s.n = n;
      s.u = 2.0 * I0 / std::sqrt(eps_background);
      s.v = (2 * m + 2 * n + 3) * s.u;
      s.w = -0.5 * (1.0 + eps_background) / (m * (m + 1.0)) * (2.0 / std::sqrt(eps_background)) *
            (2 * m + 2 * n + 5) * I2;
      out.push_back(s);
    }
  }
  return out;
}

SeriesResult two_sphere_retarded_series(const mie::MaterialPair& mat1, const mie::MaterialPair& mat2, double r,
                                        int max_order, bool curvature) {
  mat1.validate();
  mat2.validate();
  if (mat1.eps_background != mat2.eps_background) {
    throw std::invalid_argument("two_sphere_retarded_series: backgrounds differ");
  }
  if (r < (mat1.radius + mat2.radius) * (1.0 - 1e-12)) {
    throw std::invalid_argument("two_sphere_retarded_series: spheres overlap");
  }
  SeriesResult out;
  out.coefficients = series_coefficients(max_order, mat1.eps_background);
  const double R1 = mat1.radius;
  const double x = r / R1;
  std::vector<double> by_order(static_cast<std::size_t>(2 * max_order + 1), 0.0);
  for (const auto& c : out.coefficients) {
    const double a1 = mie::static_polarizability(c.m, mat1) / std::pow(R1, 2 * c.m + 1);
    const double a2 = mie::static_polarizability(c.n, mat2) / std::pow(R1, 2 * c.n + 1);
    const int p = 2 * c.m + 2 * c.n + 3;
    out.potential += -c.u * a1 * a2 / std::pow(x, p);
    const double f = -a1 * a2 / std::pow(x, p + 1) * (c.v + (curvature ? c.w / (x * x) : 0.0));
    out.force += f;
    by_order[c.m + c.n] += std::abs(f);
  }
  for (int o = 3; o <= 2 * max_order; ++o) {
    if (by_order[o - 1] > 0.0 && by_order[o] > by_order[o - 1]) {
      out.warnings.push_back("series terms grow with multipole order; separation too small for this expansion");
      break;
    }
  }
  if (std::abs(r - (mat1.radius + mat2.radius)) <= 1e-12 * r) {
    out.warnings.push_back("spheres touch; multipole series convergence is not guaranteed");
  }
  return out;
}

ThermalResult two_sphere_finite_T(const mie::MaterialPair& mat1, const mie::MaterialPair& mat2, double r, double T,
                                  int l_max, int max_order, bool curvature) {
  if (!(T > 0.0)) throw std::invalid_argument("two_sphere_finite_T: temperature must be positive");
  if (l_max < 1) throw std::invalid_argument("two_sphere_finite_T: l_max must be >= 1");
  Ensemble e;
  e.eps_background = mat1.eps_background;
  e.temperature = T;
  e.spheres = {Sphere{1, Vector3d(0, 0, r), mat1}, Sphere{2, Vector3d::Zero(), mat2}};
  ThermalResult out;
  Options opt;
  opt.L_max = max_order;
  opt.stress_kernel = curvature;
  opt.estimate_convergence = false;
  opt.matsubara_l_max = l_max;
  e.validate();
  const Evaluation ev = evaluate(e, 0, opt, max_order);
  for (const auto& f : ev.per_node) out.per_pole.push_back(f.z());
  out.force = ev.force.z();
  if (std::abs(out.per_pole.back()) > 0.01 * std::abs(out.force)) {
    out.warnings.push_back("Matsubara sum: last pole exceeds 1% of the total; raise l_max");
  }
  return out;
}

double three_sphere_potential(const Ensemble& ensemble, int n_nodes, int l_max) {
  return dipole_ring(ensemble, n_nodes, l_max).potential;
}

Vector3d three_sphere_force(const Ensemble& ensemble, int n_nodes, int l_max) {
  return dipole_ring(ensemble, n_nodes, l_max).force;
}

ThreeSphereScan scan_three_spheres(const mie::MaterialPair& mat, double eps_background, double temperature,
                                   double separation, const std::vector<double>& x,
                                   const std::vector<double>& theta) {
  ThreeSphereScan out;
  out.x = x;
  out.theta = theta;
  out.potential.resize(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(theta.size()));
  const double R = mat.radius;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < theta.size(); ++j) {
      Ensemble e;
      e.eps_background = eps_background;
      e.temperature = temperature;
      const Vector3d c3 = x[i] * R * Vector3d(std::sin(theta[j]), 0.0, std::cos(theta[j]));
      e.spheres = {Sphere{1, Vector3d::Zero(), mat}, Sphere{2, Vector3d(0, 0, separation * R), mat},
                   Sphere{3, c3, mat}};
      double v = std::numeric_limits<double>::quiet_NaN();
      try {
        e.validate();
        v = three_sphere_potential(e);
      } catch (const std::invalid_argument&) {
      }
      out.potential(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

double large_N_potential(int N, double lambda, double R, double s) {
  if (N < 3) throw std::invalid_argument("large_N_potential: N must be >= 3");
  if (!(s > 2.0 * R)) throw std::invalid_argument("large_N_potential: need s > 2R");
  if (lambda == 0.0) return 0.0;
  const double sign = (N % 2 == 0) ? -1.0 : 1.0;  // -(-1)^N
  const double log_mag = -N - std::lgamma(N + 1.0) + N * std::log(std::abs(lambda)) + (3.0 * N + 1) * std::log(R / s);
  const double lambda_sign = (lambda < 0.0 && N % 2 == 1) ? -1.0 : 1.0;
  return sign * lambda_sign * 4.0 * std::numbers::pi * std::exp(log_mag);
}

double large_N_integral(int N, double lambda, double R, double s, double correction, int n_nodes) {
  if (N < 3) throw std::invalid_argument("large_N_integral: N must be >= 3");
  if (!(s > 2.0 * R)) throw std::invalid_argument("large_N_integral: need s > 2R");
  const double a = lambda / N * std::pow(R / s, 3);
  const auto grid = spectral::build_zero_T_grid(n_nodes);
  const double integral = grid.integrate([&](double X) { return std::pow(a * (1.0 + correction * X / N), N); });
  const double sign = (N % 2 == 0) ? -1.0 : 1.0;
  // (hbar c / (pi s)) / (hbar c / (4 pi R)) = 4 R / s
  return sign * 4.0 * R / s * integral;
}

}  // namespace casimir::force
