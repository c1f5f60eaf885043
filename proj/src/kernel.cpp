#include "qev/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace qev {

namespace {

void validate(const TransitionKernel& k) {
  if (k.half_width < 1) throw std::invalid_argument("kernel half width must be at least 1");
  if (2 * k.half_width + 1 > k.grid.n)
    throw std::invalid_argument("kernel support exceeds the grid");
  if (k.r0.size() != k.grid.n || k.r2.rows() != k.grid.n ||
      k.r2.cols() != k.eps_count())
    throw std::invalid_argument("kernel sample shapes do not match the grid");
  if (!(k.hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
}

Eigen::VectorXd trapezoid_weights(int count, double dx) {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(count, dx);
  w(0) = dx / 2.0;
  w(count - 1) = dx / 2.0;
  return w;
}

}  // namespace

KernelMoments moments(const TransitionKernel& k) {
  validate(k);
  const int m = k.eps_count();
  const Eigen::VectorXd w = trapezoid_weights(m, k.grid.dx);
  const double h2 = k.hbar * k.hbar;
  Eigen::VectorXd P(k.grid.n), Q(k.grid.n);
  for (int i = 0; i < k.grid.n; ++i) {
    double s0 = 0.0, s2 = 0.0;
    for (int j = 0; j < m; ++j) {
      const double e = k.eps(j);
      s0 += w(j) * k.r2(i, j);
      s2 += w(j) * k.r2(i, j) * e * e;
    }
    P(i) = k.r0(i) + h2 * s0;
    Q(i) = 0.5 * h2 * s2;
  }
  return {std::move(P), std::move(Q)};
}

ParticleDynamics to_dynamics(const TransitionKernel& k) {
  const KernelMoments mom = moments(k);
  double qmin = mom.Q.minCoeff();
  double qmax = mom.Q.maxCoeff();
  if (qmax >= 0.0) throw std::domain_error("kernel is not particle-like");
  const double qmean = mom.Q.mean();
  if ((qmax - qmin) > 1e-9 * std::abs(qmean))
    throw std::domain_error("mass not constant");
  return {-k.hbar * k.hbar / (2.0 * qmean), mom.P};
}

TransitionKernel synthesize_kernel(const Grid1D& grid, double mass,
                                   const Eigen::VectorXd& potential,
                                   double hbar, int half_width) {
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  if (half_width < 1) throw std::invalid_argument("kernel half width must be at least 1");
  if (2 * half_width + 1 > grid.n)
    throw std::invalid_argument("kernel support exceeds the grid");
  if (potential.size() != grid.n)
    throw std::invalid_argument("potential samples do not match the grid");

  const int m = 2 * half_width + 1;
  const Eigen::VectorXd w = trapezoid_weights(m, grid.dx);
  Eigen::VectorXd bump(m);
  for (int j = 0; j < m; ++j) {
    const double t = static_cast<double>(j - half_width) / half_width;
    const double q = 1.0 - t * t;
    bump(j) = q * q;
  }
  double s0 = 0.0, s2 = 0.0;
  for (int j = 0; j < m; ++j) {
    const double e = (j - half_width) * grid.dx;
    s0 += w(j) * bump(j);
    s2 += w(j) * bump(j) * e * e;
  }
  const double amp = 1.0 / (mass * s2);
  const double h2 = hbar * hbar;

  TransitionKernel k{grid, half_width, hbar, Eigen::VectorXd(grid.n),
                     Eigen::MatrixXd(grid.n, m)};
  for (int i = 0; i < grid.n; ++i) {
    k.r0(i) = potential(i) + h2 * amp * s0;
    for (int j = 0; j < m; ++j) k.r2(i, j) = -amp * bump(j);
  }
  return k;
}

Eigen::VectorXd apply_kernel(const TransitionKernel& k,
                             const Eigen::VectorXd& f) {
  const int n = k.grid.n;
  if (f.size() != n) throw std::invalid_argument("dimension mismatch");
  const int m = k.eps_count();
  const int J = k.half_width;
  const Eigen::VectorXd w = trapezoid_weights(m, k.grid.dx);
  const double h2 = k.hbar * k.hbar;
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
      const int idx = ((i + j - J) % n + n) % n;
      acc += w(j) * k.r2(i, j) * f(idx);
    }
    out(i) = k.r0(i) * f(i) + h2 * acc;
  }
  return out;
}

void integral_step(const TransitionKernel& k, double dt, Eigen::VectorXd& u,
                   Eigen::VectorXd& v) {
  const double half = dt / (2.0 * k.hbar);
  u += half * apply_kernel(k, v);
  v -= (dt / k.hbar) * apply_kernel(k, u);
  u += half * apply_kernel(k, v);
}

namespace {

Eigen::VectorXd local_generator(const ParticleDynamics& dyn, const Grid1D& grid,
                                double hbar, const Eigen::VectorXd& f) {
  const int n = grid.n;
  const double c = -hbar * hbar / (2.0 * dyn.mass * grid.dx * grid.dx);
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    const double lap = f((i + 1) % n) - 2.0 * f(i) + f((i - 1 + n) % n);
    out(i) = c * lap + dyn.potential(i) * f(i);
  }
  return out;
}

}  // namespace

void pde_step(const ParticleDynamics& dyn, const Grid1D& grid, double hbar,
              double dt, Eigen::VectorXd& u, Eigen::VectorXd& v) {
  if (dyn.potential.size() != grid.n)
    throw std::invalid_argument("potential samples do not match the grid");
  const double half = dt / (2.0 * hbar);
  u += half * local_generator(dyn, grid, hbar, v);
  v -= (dt / hbar) * local_generator(dyn, grid, hbar, u);
  u += half * local_generator(dyn, grid, hbar, v);
}

double max_stable_dt_pde(double mass, double hbar,
                         const std::vector<double>& dxs,
                         double stability_factor) {
  if (dxs.empty()) throw std::invalid_argument("need at least one grid spacing");
  double inv = 0.0;
  for (double d : dxs) {
    if (!(d > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    inv += 1.0 / (d * d);
  }
  return stability_factor * (mass / hbar) / inv;
}

double max_stable_dt_integral(const TransitionKernel& k) {
  validate(k);
  const int m = k.eps_count();
  const Eigen::VectorXd w = trapezoid_weights(m, k.grid.dx);
  const double h2 = k.hbar * k.hbar;
  double worst = 0.0;
  for (int i = 0; i < k.grid.n; ++i) {
    double row = std::abs(k.r0(i));
    for (int j = 0; j < m; ++j) row += h2 * w(j) * std::abs(k.r2(i, j));
    worst = std::max(worst, row);
  }
  if (!(worst > 0.0)) throw std::domain_error("kernel is identically zero");
  return 0.5 * k.hbar / worst;
}

double consistency_deviation(const TransitionKernel& k,
                             const WaveFunction& psi0, double dt, int steps) {
  if (!psi0.grid.compatible(k.grid))
    throw std::invalid_argument("grid mismatch");
  if (steps < 1) throw std::invalid_argument("need at least one step");
  const ParticleDynamics dyn = to_dynamics(k);
  Eigen::VectorXd ui = psi0.samples.real(), vi = psi0.samples.imag();
  Eigen::VectorXd up = ui, vp = vi;
  for (int s = 0; s < steps; ++s) {
    integral_step(k, dt, ui, vi);
    pde_step(dyn, k.grid, k.hbar, dt, up, vp);
  }
  double dev = 0.0;
  for (int i = 0; i < k.grid.n; ++i)
    dev = std::max(dev, std::hypot(ui(i) - up(i), vi(i) - vp(i)));
  return dev;
}

}  // namespace qev
