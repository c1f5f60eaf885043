#pragma once

#include <Eigen/Dense>

#include "qev/operators.hpp"
#include "qev/schrod.hpp"

namespace qev {

// Time-sliced propagator on a periodic grid. `kernel` is the continuum
// normalized density K(x_i, x_j); it acts on states as sum_j K psi_j dx.
// The dimensionless one-application transfer matrix is kernel * dx.
struct PropagatorMatrix {
  Grid1D grid;
  Eigen::MatrixXcd kernel;
  double t1 = 0.0;
  double t2 = 0.0;
  // Set when hbar dt / (mass dx^2) < 1 for the slice step: position space
  // no longer resolves the single-slice phase structure.
  bool resolution_warning = false;

  WaveFunction apply(const WaveFunction& psi) const;
};

// Dimensionless free-step circulant built by a direct Fourier sum over the
// grid momenta k_m = 2 pi m / L, m in [-n/2, n/2).
Eigen::MatrixXcd free_transfer(const Grid1D& grid, double mass, double hbar,
                               double dt);

// One Strang slice D * free * D with D = diag(exp(-i R_i dt / 2 hbar)).
Eigen::MatrixXcd slice_transfer(const Grid1D& grid, const Potential& R,
                                double mass, double hbar, double dt);

// Compose `slices` equal slices over [t1, t2] by binary exponentiation.
PropagatorMatrix propagator(const Potential& R, double mass, double hbar,
                            double t1, double t2, int slices);

// Closed-form reference kernels sampled on the grid.
PropagatorMatrix free_particle_kernel(const Grid1D& grid, double mass,
                                      double hbar, double t1, double t2);
// Valid for 0 < omega (t2 - t1) < pi; throws at focal times.
PropagatorMatrix harmonic_kernel(const Grid1D& grid, double mass, double omega,
                                 double hbar, double t1, double t2);

// Apply K to psi0 and return the maximum pointwise magnitude of the
// difference from the final state of `run`. The grids must match and the
// elapsed times must agree to 1e-12.
double compare(const PropagatorMatrix& K, const WaveFunction& psi0,
               const EvolveResult& run);

// max entry of |T_dagger T - I| for the dimensionless transfer kernel * dx.
double unitarity_defect(const PropagatorMatrix& K);

// Composition defect: the transfer matrix over [0, 2 t_half] built from
// `slices` slices, against the square of the one over [0, t_half] with the
// same slice count (so half the step). Max entry of the difference.
double semigroup_defect(const Potential& R, double mass, double hbar,
                        double t_half, int slices);

// Deterministic discrete least-action path between fixed endpoints.
struct ActionResult {
  Eigen::VectorXd times;      // n_knots uniform instants, endpoints included
  Eigen::VectorXd path;       // positions at the knots
  double action = 0.0;        // kinetic minus trapezoid potential term
  double el_residual = 0.0;   // max |mass d2x/dt2 + R'(x)| at interior knots
  int iterations = 0;
};

// Damped Newton descent from the straight line, tridiagonal solve per step.
ActionResult least_action_path(const Potential& R, double mass, double x1,
                               double x2, double t1, double t2, int n_knots);

// Closed-form actions for the reference systems.
double free_action(double mass, double x1, double x2, double elapsed);
double harmonic_action(double mass, double omega, double x1, double x2,
                       double elapsed);

}  // namespace qev
