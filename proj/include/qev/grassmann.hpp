#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace qev {

// Element of the finite Grassmann algebra on n generators. Basis monomials
// are indexed by bitmask with the generators in ascending index order; the
// element is the dense coefficient vector over all 2^n monomials.
struct GElement {
  int n_gen = 0;
  Eigen::VectorXcd coeffs;

  static GElement zero(int n_gen);
  static GElement one(int n_gen);
  static GElement generator(int n_gen, int g);
};

GElement operator+(const GElement& a, const GElement& b);
GElement operator-(const GElement& a, const GElement& b);
GElement operator*(const std::complex<double>& s, const GElement& a);

// Graded product; the sign is the parity of the generator crossings needed
// to merge the two monomials, and any repeated generator kills the term.
GElement gmul(const GElement& a, const GElement& b);

// Left Berezin derivative: drop the generator with the sign of commuting it
// to the front; monomials without it vanish.
GElement berezin_diff(const GElement& a, int g);
// The Berezin integral over one generator coincides with the left derivative.
GElement berezin_int(const GElement& a, int g);

// Linear operators on the 2^n coefficient space.
using GOperator = Eigen::MatrixXcd;

GOperator left_multiply_op(int n_gen, int g);  // f -> theta_g f
GOperator berezin_diff_op(int n_gen, int g);   // f -> d f / d theta_g
GElement apply(const GOperator& op, const GElement& a);

// Coefficients of the general two-generator quadratic Hamiltonian.
struct ThetaCoefficients {
  std::complex<double> c00{0.0, 0.0};  // d/db* d/db
  std::complex<double> c11{0.0, 0.0};  // d/db*
  std::complex<double> c12{0.0, 0.0};  // d/db
  std::complex<double> c20{0.0, 0.0};  // identity
  std::complex<double> c30{0.0, 0.0};  // (b + b*)
  std::complex<double> c40{0.0, 0.0};  // b b*
};

// H = c00 d_b* d_b + c11 d_b* + c12 d_b + c20 + c30 (b + b*) + c40 b b*
// on the two-generator algebra {b = gen 0, b* = gen 1}.
GOperator hamiltonian_from_theta(const ThetaCoefficients& c, int n_gen);

// Fermionic ladder operators of one mode, with the conjugates defined by
// the closed formulas (not the matrix adjoint):
//   F = d_q + omega theta_p     F_dag = d_p + omega theta_q
//   E = -d_p + omega theta_q    E_dag = d_q - omega theta_p
struct FermionMode {
  double omega = 0.0;
  GOperator F, F_dag, E, E_dag;
};

struct FermiOscillator {
  GOperator hamiltonian;  // d_b* d_b + omega^2 b b*
  FermionMode mode;
  GElement vacuum;        // 1 + omega b b*, annihilated by F
};

FermiOscillator fermi_oscillator(double omega);

// Ladder operators of one labeled mode living in an algebra of
// 2 * n_labels generators (particle generator 2*label, starred 2*label+1).
FermionMode fermion_mode(int n_labels, int label, double omega);

struct DiracModeResult {
  std::vector<double> omegas;
  GOperator hamiltonian;      // sum over labels of (F_dag F - E E_dag)
  Eigen::VectorXd spectrum;   // sorted real eigenvalues
  bool spectrum_indefinite = false;  // has a negative eigenvalue
};

// One mode per entry of `omegas`; at most 6 labels (12 generators).
DiracModeResult dirac_mode_hamiltonian(const std::vector<double>& omegas);

// Eigenvalues of a (generally non-Hermitian) operator whose spectrum must be
// real: throws if any eigenvalue has imaginary part above 1e-9.
Eigen::VectorXd real_spectrum_of(const GOperator& op);

// Positive metric W = (V V_dag)^{-1} from the eigenbasis of op; when the
// spectrum is real, W op = op_dag W, exhibiting Hermiticity under the
// W-weighted inner product.
Eigen::MatrixXcd symmetrizing_metric(const GOperator& op);

}  // namespace qev
