#include "qev/grassmann.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace qev {

namespace {

constexpr int kMaxGenerators = 12;

void check_gen_count(int n_gen) {
  if (n_gen < 1 || n_gen > kMaxGenerators)
    throw std::invalid_argument("algebra supports 1 to 12 generators");
}

void check_index(int n_gen, int g) {
  check_gen_count(n_gen);
  if (g < 0 || g >= n_gen)
    throw std::invalid_argument("generator index out of range");
}

void check_same(const GElement& a, const GElement& b) {
  if (a.n_gen != b.n_gen) throw std::invalid_argument("algebra mismatch");
}

long dim_of(int n_gen) { return 1L << n_gen; }

// Crossing parity for merging monomial m1 (left) with m2 (right): each
// generator of m2 passes every generator of m1 with a larger index.
int merge_sign(unsigned m1, unsigned m2) {
  int crossings = 0;
  for (unsigned rest = m2; rest;) {
    const int i = std::countr_zero(rest);
    rest &= rest - 1;
    crossings += std::popcount(m1 >> (i + 1));
  }
  return (crossings % 2 == 0) ? 1 : -1;
}

}  // namespace

GElement GElement::zero(int n_gen) {
  check_gen_count(n_gen);
  return {n_gen, Eigen::VectorXcd::Zero(dim_of(n_gen))};
}

GElement GElement::one(int n_gen) {
  GElement e = zero(n_gen);
  e.coeffs(0) = 1.0;
  return e;
}

GElement GElement::generator(int n_gen, int g) {
  check_index(n_gen, g);
  GElement e = zero(n_gen);
  e.coeffs(1L << g) = 1.0;
  return e;
}

GElement operator+(const GElement& a, const GElement& b) {
  check_same(a, b);
  return {a.n_gen, a.coeffs + b.coeffs};
}

GElement operator-(const GElement& a, const GElement& b) {
  check_same(a, b);
  return {a.n_gen, a.coeffs - b.coeffs};
}

GElement operator*(const std::complex<double>& s, const GElement& a) {
  return {a.n_gen, s * a.coeffs};
}

GElement gmul(const GElement& a, const GElement& b) {
  check_same(a, b);
  GElement out = GElement::zero(a.n_gen);
  const long dim = a.coeffs.size();
  for (long m1 = 0; m1 < dim; ++m1) {
    if (a.coeffs(m1) == 0.0) continue;
    for (long m2 = 0; m2 < dim; ++m2) {
      if (b.coeffs(m2) == 0.0) continue;
      if (m1 & m2) continue;  // repeated generator
      const double sign = merge_sign(static_cast<unsigned>(m1),
                                     static_cast<unsigned>(m2));
      out.coeffs(m1 | m2) += sign * a.coeffs(m1) * b.coeffs(m2);
    }
  }
  return out;
}

GElement berezin_diff(const GElement& a, int g) {
  check_index(a.n_gen, g);
  GElement out = GElement::zero(a.n_gen);
  const long bit = 1L << g;
  const long below = bit - 1;
  for (long m = 0; m < a.coeffs.size(); ++m) {
    if (!(m & bit) || a.coeffs(m) == 0.0) continue;
    const double sign =
        (std::popcount(static_cast<unsigned>(m & below)) % 2 == 0) ? 1.0
                                                                   : -1.0;
    out.coeffs(m & ~bit) += sign * a.coeffs(m);
  }
  return out;
}

GElement berezin_int(const GElement& a, int g) { return berezin_diff(a, g); }

GOperator left_multiply_op(int n_gen, int g) {
  check_index(n_gen, g);
  const long dim = dim_of(n_gen);
  const long bit = 1L << g;
  const long below = bit - 1;
  GOperator op = GOperator::Zero(dim, dim);
  for (long m = 0; m < dim; ++m) {
    if (m & bit) continue;
    const double sign =
        (std::popcount(static_cast<unsigned>(m & below)) % 2 == 0) ? 1.0
                                                                   : -1.0;
    op(m | bit, m) = sign;
  }
  return op;
}

GOperator berezin_diff_op(int n_gen, int g) {
  check_index(n_gen, g);
  const long dim = dim_of(n_gen);
  const long bit = 1L << g;
  const long below = bit - 1;
  GOperator op = GOperator::Zero(dim, dim);
  for (long m = 0; m < dim; ++m) {
    if (!(m & bit)) continue;
    const double sign =
        (std::popcount(static_cast<unsigned>(m & below)) % 2 == 0) ? 1.0
                                                                   : -1.0;
    op(m & ~bit, m) = sign;
  }
  return op;
}

GElement apply(const GOperator& op, const GElement& a) {
  if (op.cols() != a.coeffs.size())
    throw std::invalid_argument("dimension mismatch");
  return {a.n_gen, op * a.coeffs};
}

GOperator hamiltonian_from_theta(const ThetaCoefficients& c, int n_gen) {
  if (n_gen != 2)
    throw std::invalid_argument("theta hamiltonian needs the two-generator algebra");
  const GOperator d0 = berezin_diff_op(2, 0);
  const GOperator d1 = berezin_diff_op(2, 1);
  const GOperator l0 = left_multiply_op(2, 0);
  const GOperator l1 = left_multiply_op(2, 1);
  const GOperator id = GOperator::Identity(4, 4);
  return c.c00 * (d1 * d0) + c.c11 * d1 + c.c12 * d0 + c.c20 * id +
         c.c30 * (l0 + l1) + c.c40 * (l0 * l1);
}

FermionMode fermion_mode(int n_labels, int label, double omega) {
  if (n_labels < 1 || 2 * n_labels > kMaxGenerators)
    throw std::invalid_argument("at most 6 labels (12 generators)");
  if (label < 0 || label >= n_labels)
    throw std::invalid_argument("label out of range");
  if (omega < 0.0) throw std::invalid_argument("omega must be non-negative");
  const int n_gen = 2 * n_labels;
  const int p = 2 * label;      // d
  const int q = 2 * label + 1;  // d*
  const GOperator dp = berezin_diff_op(n_gen, p);
  const GOperator dq = berezin_diff_op(n_gen, q);
  const GOperator lp = left_multiply_op(n_gen, p);
  const GOperator lq = left_multiply_op(n_gen, q);
  FermionMode m;
  m.omega = omega;
  m.F = dq + omega * lp;
  m.F_dag = dp + omega * lq;
  m.E = -dp + omega * lq;
  m.E_dag = dq - omega * lp;
  return m;
}

FermiOscillator fermi_oscillator(double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  FermiOscillator osc;
  ThetaCoefficients c;
  c.c00 = 1.0;
  c.c40 = omega * omega;
  osc.hamiltonian = hamiltonian_from_theta(c, 2);
  osc.mode = fermion_mode(1, 0, omega);
  osc.vacuum = GElement::one(2);
  osc.vacuum.coeffs(3) = omega;  // 1 + omega b b*
  return osc;
}

DiracModeResult dirac_mode_hamiltonian(const std::vector<double>& omegas) {
  if (omegas.empty() || 2 * omegas.size() > kMaxGenerators)
    throw std::invalid_argument("at most 6 labels (12 generators)");
  const int n_labels = static_cast<int>(omegas.size());
  const long dim = dim_of(2 * n_labels);
  DiracModeResult res;
  res.omegas = omegas;
  res.hamiltonian = GOperator::Zero(dim, dim);
  for (int l = 0; l < n_labels; ++l) {
    const FermionMode m = fermion_mode(n_labels, l, omegas[l]);
    res.hamiltonian += m.F_dag * m.F - m.E * m.E_dag;
  }
  res.spectrum = real_spectrum_of(res.hamiltonian);
  const double scale = std::max(1.0, res.spectrum.cwiseAbs().maxCoeff());
  res.spectrum_indefinite = res.spectrum.minCoeff() < -1e-9 * scale;
  return res;
}

Eigen::VectorXd real_spectrum_of(const GOperator& op) {
  if (op.rows() != op.cols())
    throw std::invalid_argument("matrix must be square");
  Eigen::ComplexEigenSolver<GOperator> solver(op, false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  const Eigen::VectorXcd vals = solver.eigenvalues();
  const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  if (vals.imag().cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw std::runtime_error("spectrum is not real");
  Eigen::VectorXd out = vals.real();
  std::sort(out.data(), out.data() + out.size());
  return out;
}

Eigen::MatrixXcd symmetrizing_metric(const GOperator& op) {
  if (op.rows() != op.cols())
    throw std::invalid_argument("matrix must be square");
  Eigen::ComplexEigenSolver<GOperator> solver(op, true);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  const Eigen::MatrixXcd v = solver.eigenvectors();
  return (v * v.adjoint()).inverse();
}

}  // namespace qev
