#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qev {

using Complex = std::complex<double>;

enum class Boundary { periodic, vanishing };

struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  int n = 0;
  double dx = 0.0;
  Boundary boundary = Boundary::periodic;

  Grid1D() = default;
  Grid1D(double x_min_, double x_max_, int n_, Boundary b = Boundary::periodic);

  double x(int i) const { return x_min + i * dx; }
  double length() const { return x_max - x_min; }
  bool compatible(const Grid1D& o) const;
};

struct WaveFunction {
  Grid1D grid;
  Eigen::VectorXcd samples;

  double norm() const;
  WaveFunction normalized() const;
};

// Normalized Gaussian packet centered at x0 with width sigma and carrier
// wavenumber k0 (mean momentum hbar*k0 in the continuum limit).
WaveFunction gaussian_packet(const Grid1D& g, double x0, double sigma, double k0);

struct HermitianOp {
  Eigen::MatrixXcd matrix;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const { return matrix * v; }
};

struct Spectrum {
  Eigen::VectorXd eigenvalues;    // ascending
  Eigen::MatrixXcd eigenvectors;  // columns, orthonormal in the producer's inner product
};

// Riemann inner product sum_k a_k conj(b_k) dx. Conjugation is on the second
// argument.
Complex inner(const WaveFunction& a, const WaveFunction& b);

// Orthonormalizes with respect to inner(). A residual below 1e-10 marks a
// dependent input and raises an error naming the offending index.
std::vector<WaveFunction> gram_schmidt(const std::vector<WaveFunction>& fns);

// H = sum_k vals_k |f_k><f_k| dx for orthonormal f_k.
HermitianOp op_from_eigensystem(const Eigen::VectorXd& vals,
                                const std::vector<WaveFunction>& fns);

// Central antisymmetric difference -i hbar (psi_{j+1} - psi_{j-1}) / (2 dx)
// on a periodic grid; rejects vanishing boundaries where the stencil is not
// Hermitian.
HermitianOp momentum_op(const Grid1D& grid, double hbar = 1.0);

// Multiplication by the grid coordinate.
HermitianOp position_op(const Grid1D& grid);

// <psi|H|psi> for a normalized psi, with the dx weight of inner(); asserts a
// negligible imaginary part and returns the real part.
double expectation(const HermitianOp& H, const WaveFunction& psi);

struct UncertaintyBound {
  double dA;
  double dB;
  double bound;  // 0.5 |<psi|[A,B]|psi>|
};

UncertaintyBound commutator_uncertainty(const HermitianOp& A, const HermitianOp& B,
                                        const WaveFunction& psi);

struct PeriodicGenerator {
  HermitianOp op;
  Spectrum spectrum;
  Grid1D grid;  // angle grid the generator was built on
};

// -i scale d/dtheta on a periodic angle grid with n points covering the given
// period. The spectrum is the discrete ladder {0, +-s, +-2s, ...} with
// s = 2 pi scale / period, up to second-order grid error.
PeriodicGenerator periodic_generator(int n, double period, double scale);

// Eigendecomposition with deterministic ordering: ascending eigenvalues,
// near-degenerate clusters (gap < 1e-9) re-orthonormalized, and each vector's
// phase fixed so its largest-magnitude component is real positive.
Spectrum spectrum_of(const Eigen::MatrixXcd& H);

}  // namespace qev
