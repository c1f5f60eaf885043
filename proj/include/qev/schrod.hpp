#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "qev/operators.hpp"

namespace qev {

// Real potential R(x). The callable is the source of truth; the samples cache
// its values on the grid. Built from a function or from bare samples (which
// are completed to a callable by linear interpolation).
struct Potential {
  Grid1D grid;
  Eigen::VectorXd samples;
  std::function<double(double)> fn;

  double value(double x) const { return fn(x); }
  // Central difference with a fixed small step.
  double deriv(double x) const;
};

Potential potential_from_function(const Grid1D& grid,
                                  std::function<double(double)> fn);
Potential potential_from_samples(const Grid1D& grid,
                                 const Eigen::VectorXd& samples);

// Box potential: zero on [x_left, x_right], a large finite wall elsewhere.
// The wall height scales as 1e6 * hbar^2 / (mass * dx^2) so that leakage is
// negligible at any resolution.
Potential hard_wall(const Grid1D& grid, double x_left, double x_right,
                    double mass, double hbar);

struct EvolConfig {
  double hbar = 1.0;
  double mass = 1.0;
  double dt = 0.0;
  long steps = 0;
  double stability_factor = 0.25;
  long log_every = 1;
};

struct LogRow {
  double t = 0.0;
  double norm = 0.0;
  double mean_x = 0.0;
  double mean_p = 0.0;
  double energy = 0.0;
};

struct EvolveResult {
  WaveFunction final;
  std::vector<LogRow> log;
};

// Split-step (kick-drift-kick on real and imaginary parts) evolution under
// H = -(hbar^2 / 2 mass) lap + R. Checks for NaN every step, aborts if the
// norm drifts from 1 by more than 1e-5, and logs observables every
// `log_every` steps (plus the initial and final instants).
EvolveResult evolve(const WaveFunction& psi0, const Potential& R,
                    const EvolConfig& cfg);

struct StationaryStates {
  Grid1D grid;
  Eigen::VectorXd energies;       // ascending
  Eigen::MatrixXcd states;        // column k: samples of psi_k, unit norm in the dx product
  WaveFunction state(int k) const;
};

// Dense diagonalization of H = -(hbar^2 / 2 mass) lap + diag(R). The
// Laplacian wraps on periodic grids and is Dirichlet on vanishing ones.
StationaryStates stationary(const Potential& R, double mass, double hbar);

// Largest violation of d<p>/dt = -R'(<x>) over the interior log rows,
// using centered differences in time. Needs at least 3 rows.
double ehrenfest_residual(const EvolveResult& run, const Potential& R);

// Three-dimensional periodic box with C-order flattening.
struct Grid3D {
  Grid1D gx, gy, gz;
  long size() const {
    return static_cast<long>(gx.n) * gy.n * gz.n;
  }
  long index(int ix, int iy, int iz) const {
    return (static_cast<long>(ix) * gy.n + iy) * gz.n + iz;
  }
  double volume_element() const { return gx.dx * gy.dx * gz.dx; }
};

struct WaveFunction3D {
  Grid3D grid;
  Eigen::VectorXcd samples;
  double norm() const;
  WaveFunction3D normalized() const;
};

struct Potential3D {
  Grid3D grid;
  Eigen::VectorXd samples;
};

Potential3D potential3d_from_function(
    const Grid3D& grid, const std::function<double(double, double, double)>& fn);

// Tensor product of three one-dimensional states.
WaveFunction3D product_state(const Grid3D& grid, const WaveFunction& fx,
                             const WaveFunction& fy, const WaveFunction& fz);

struct LogRow3D {
  double t = 0.0;
  double norm = 0.0;
};

struct EvolveResult3D {
  WaveFunction3D final;
  std::vector<LogRow3D> log;
};

// Same splitting as the 1D scheme with the dimension-wise 7-point Laplacian.
EvolveResult3D evolve3d(const WaveFunction3D& psi0, const Potential3D& R,
                        const EvolConfig& cfg);

// How far the state is from a product over the axes: the largest ratio
// sigma_2 / sigma_1 over the three single-axis unfoldings of the sample
// tensor. Zero for an exact product state.
double product_deviation(const WaveFunction3D& psi);

}  // namespace qev
