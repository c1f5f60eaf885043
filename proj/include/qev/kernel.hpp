#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qev/operators.hpp"

namespace qev {

// Discrete short-time transition kernel
//   phi(x, eps) = r0(x) delta(eps) + hbar^2 r2(x, eps)
// sampled on a periodic spatial grid. The displacement grid is tied to the
// spatial one: eps_j = (j - half_width) * dx for j = 0 .. 2*half_width.
struct TransitionKernel {
  Grid1D grid;
  int half_width = 0;
  double hbar = 1.0;
  Eigen::VectorXd r0;  // n entries, the local (delta) part
  Eigen::MatrixXd r2;  // n rows, 2*half_width+1 columns, the spread part

  double eps(int j) const { return (j - half_width) * grid.dx; }
  int eps_count() const { return 2 * half_width + 1; }
};

// Displacement moments of the kernel:
//   P_i = r0_i + hbar^2 Int r2(x_i, eps) deps
//   Q_i = (hbar^2 / 2) Int r2(x_i, eps) eps^2 deps
// with the integrals done by the trapezoid rule on the eps grid.
struct KernelMoments {
  Eigen::VectorXd P;
  Eigen::VectorXd Q;
};

// Effective point-particle data extracted from a kernel.
struct ParticleDynamics {
  double mass = 0.0;
  Eigen::VectorXd potential;  // R(x) samples on the kernel grid
};

KernelMoments moments(const TransitionKernel& k);

// mass = -hbar^2 / (2 mean(Q)), potential = P. Throws if any Q_i >= 0
// ("kernel is not particle-like") or if Q varies across the grid beyond a
// 1e-9 relative spread ("mass not constant").
ParticleDynamics to_dynamics(const TransitionKernel& k);

// Build a kernel whose trapezoid moments reproduce the requested dynamics
// exactly: P = potential, Q = -hbar^2 / (2 mass) at every grid point.
TransitionKernel synthesize_kernel(const Grid1D& grid, double mass,
                                   const Eigen::VectorXd& potential,
                                   double hbar, int half_width);

// K[f]_i = r0_i f_i + hbar^2 sum_j w_j r2(i, j) f_{(i + j - J) mod n}
// with trapezoid weights w_j on the eps grid.
Eigen::VectorXd apply_kernel(const TransitionKernel& k,
                             const Eigen::VectorXd& f);

// One symmetric split step of i hbar dpsi/dt = K psi on psi = u + i v:
//   u += (dt / 2 hbar) K[v];  v -= (dt / hbar) K[u];  u += (dt / 2 hbar) K[v]
void integral_step(const TransitionKernel& k, double dt, Eigen::VectorXd& u,
                   Eigen::VectorXd& v);

// Same splitting applied to the local generator
//   H[f] = -(hbar^2 / 2 mass) lap f + potential f
// with the three-point periodic Laplacian.
void pde_step(const ParticleDynamics& dyn, const Grid1D& grid, double hbar,
              double dt, Eigen::VectorXd& u, Eigen::VectorXd& v);

// Largest stable step for the split PDE scheme:
//   dt_max = stability_factor * (mass / hbar) / sum_d (1 / dx_d^2)
double max_stable_dt_pde(double mass, double hbar,
                         const std::vector<double>& dxs,
                         double stability_factor = 0.25);

// Largest stable step for the integral scheme: 0.5 * hbar / norm_inf(K) with
// norm_inf(K) = max_i (|r0_i| + hbar^2 sum_j w_j |r2(i, j)|).
double max_stable_dt_integral(const TransitionKernel& k);

// Evolve psi0 with both schemes using the same dt and step count; return the
// maximum pointwise magnitude of the difference of the final states.
double consistency_deviation(const TransitionKernel& k,
                             const WaveFunction& psi0, double dt, int steps);

}  // namespace qev
