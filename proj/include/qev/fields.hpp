#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qev/operators.hpp"
#include "qev/pathint.hpp"

namespace qev {

enum class FieldKind { klein_gordon, maxwell, proca };

// One quantized mode: a wave vector, its frequency, and (for vector fields)
// one member of the deterministic polarization frame.
struct Mode {
  Eigen::Vector3d k = Eigen::Vector3d::Zero();
  double omega = 0.0;
  int polarization_index = -1;  // -1 for scalar modes
  Eigen::Vector3d polarization = Eigen::Vector3d::Zero();
};

// Dispersion: omega = sqrt(k^2 + mass^2) for klein_gordon and proca,
// omega = |k| for maxwell. Scalar fields get one mode per wave vector;
// maxwell gets the two transverse polarizations, proca those plus the
// longitudinal one (and the fixed cartesian frame at k = 0). Throws
// "maxwell field is massless" for a massive maxwell request and
// "infrared mode excluded" when a mode would have omega = 0.
std::vector<Mode> build_modes(FieldKind kind, double mass,
                              const std::vector<Eigen::Vector3d>& wave_vectors);

// Deterministic transverse frame for a nonzero wave vector: reference axis z
// (or x when k is nearly parallel to z), e1 = normalize(ref x khat),
// e2 = khat x e1. Transverse to k by construction.
void polarization_frame(const Eigen::Vector3d& k, Eigen::Vector3d& e1,
                        Eigen::Vector3d& e2);

// (cutoff+1)^2 lowering matrix with entries A(n-1, n) = sqrt(2 omega n).
Eigen::MatrixXcd ladder(double omega, int cutoff);

// (1/4)(Adag A + A Adag), assembled from the matrix quadratures
// b = (A + Adag) / (2 omega) and p = (A - Adag) / (2i) as
// (1/2) p^2 + (1/2) omega^2 b^2. Spectrum (n + 1/2) omega below the cutoff.
Eigen::MatrixXcd single_mode_hamiltonian(double omega, int cutoff);

struct CcrReport {
  double max_ccr_deviation = 0.0;  // worst |[phi, pi] - prediction| entry
  double max_phi_phi = 0.0;        // worst |[phi, phi]| entry
  double max_pi_pi = 0.0;          // worst |[pi, pi]| entry
  bool incomplete_basis = false;   // mode set does not resolve the lattice delta
};

// Dense truncated-Fock assembly of a free field on a small lattice.
struct FieldAssembly {
  FieldKind kind = FieldKind::klein_gordon;
  std::vector<Mode> modes;
  int cutoff = 0;
  double box_length = 0.0;
  std::vector<double> sites;  // positions along the lattice axis
  double delta_x = 0.0;
  long dim = 0;  // (cutoff+1)^modes

  // Field components site-major: entry site * components() + component.
  std::vector<Eigen::MatrixXcd> phi;
  std::vector<Eigen::MatrixXcd> pi;  // i [H, phi]
  Eigen::MatrixXcd hamiltonian;

  int components() const { return kind == FieldKind::klein_gordon ? 1 : 3; }
  const Eigen::MatrixXcd& phi_at(int site, int comp = 0) const;
  const Eigen::MatrixXcd& pi_at(int site, int comp = 0) const;
};

// Guards: 1..3 modes (counting polarizations separately), cutoff 3..6.
// box_length = 0 derives n_sites * delta_x and needs more than one site.
FieldAssembly assemble_field(FieldKind kind, const std::vector<Mode>& modes,
                             int cutoff, int n_sites, double delta_x,
                             double box_length = 0.0);

// Equal-time commutators measured on the sub-cutoff block (all per-mode
// occupations at most cutoff - 3) against the mode-sum prediction
//   [phi_a(x_i), pi_b(x_j)] = i sum_k (pol_ab) cos(k (x_i - x_j)) / L,
// which equals i delta_ij / delta_x for a complete scalar mode set.
CcrReport ccr_report(const FieldAssembly& f);

// <vacuum| sum_a phi_a(x_0)^2 |vacuum>; equals sum_m 1 / (2 omega_m L).
double vacuum_phi_squared(const FieldAssembly& f);

// Worst entry of pi - (5-point time derivative of the evolved phi) at t = 0
// on the sub-cutoff block.
double pi_heisenberg_deviation(const FieldAssembly& f, double dt = 1e-3);

// Second-difference residual of dda/dt2 + omega^2 a = 0 for the evolved
// single-mode lowering operator, on the sub-cutoff block, over a short
// uniform time grid.
double heisenberg_residual(double omega, int cutoff, double dt = 1e-3);

// Sliced propagator for one mode amplitude: mass 2, potential omega^2 a^2.
PropagatorMatrix mode_propagator(double omega, int slices, const Grid1D& grid,
                                 double t_total, double hbar = 1.0);

// Oscillator eigenfunction samples psi_n(points) for n = 0..levels-1 by the
// stable three-term recurrence in xi = sqrt(omega) x. Row n holds level n,
// so the result is levels x points.
Eigen::MatrixXd oscillator_eigenfunctions(double omega, int levels,
                                          const Eigen::VectorXd& points);

// max |sum_n psi_n(a_i) psi_n(a_j) da - delta_ij| on the bulk window
// |a| <= 3 / sqrt(omega) with step 0.25 / sqrt(omega). Decreases with levels.
double completeness_deviation(double omega, int levels);

}  // namespace qev
