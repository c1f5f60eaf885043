#include "qev/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qev {

namespace {
constexpr Complex kI{0.0, 1.0};
}

Grid1D::Grid1D(double x_min_, double x_max_, int n_, Boundary b)
    : x_min(x_min_), x_max(x_max_), n(n_), boundary(b) {
  if (n < 4) throw std::invalid_argument("grid needs at least 4 points");
  dx = (x_max - x_min) / n;
  if (!(dx > 0.0)) throw std::invalid_argument("grid spacing must be positive");
}

bool Grid1D::compatible(const Grid1D& o) const {
  return n == o.n && boundary == o.boundary &&
         std::abs(x_min - o.x_min) < 1e-12 && std::abs(x_max - o.x_max) < 1e-12;
}

double WaveFunction::norm() const {
  return std::sqrt(samples.squaredNorm() * grid.dx);
}

WaveFunction WaveFunction::normalized() const {
  const double nn = norm();
  if (!(nn > 0.0)) throw std::domain_error("cannot normalize a zero function");
  return {grid, samples / nn};
}

WaveFunction gaussian_packet(const Grid1D& g, double x0, double sigma, double k0) {
  if (!(sigma > 0.0)) throw std::invalid_argument("packet width must be positive");
  Eigen::VectorXcd s(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.x(i);
    const double arg = (x - x0) / (2.0 * sigma);
    s(i) = std::exp(Complex(-arg * arg, k0 * x));
  }
  WaveFunction w{g, s};
  return w.normalized();
}

Complex inner(const WaveFunction& a, const WaveFunction& b) {
  if (!a.grid.compatible(b.grid)) throw std::invalid_argument("grid mismatch");
  // sum a_k conj(b_k) dx
  return b.samples.dot(a.samples) * a.grid.dx;
}

std::vector<WaveFunction> gram_schmidt(const std::vector<WaveFunction>& fns) {
  std::vector<WaveFunction> out;
  out.reserve(fns.size());
  for (std::size_t i = 0; i < fns.size(); ++i) {
    WaveFunction v = fns[i];
    // two projection passes for numerical stability
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : out) {
        const Complex c = inner(v, e);
        v.samples -= c * e.samples;
      }
    }
    const double pivot = v.norm();
    if (pivot < 1e-10)
      throw std::invalid_argument("gram_schmidt: dependent input at index " +
                                  std::to_string(i));
    v.samples /= pivot;
    out.push_back(std::move(v));
  }
  return out;
}

HermitianOp op_from_eigensystem(const Eigen::VectorXd& vals,
                                const std::vector<WaveFunction>& fns) {
  if (static_cast<std::size_t>(vals.size()) != fns.size() || fns.empty())
    throw std::invalid_argument("eigenvalue and eigenfunction counts differ");
  const Grid1D& g = fns.front().grid;
  for (std::size_t i = 0; i < fns.size(); ++i)
    for (std::size_t j = i; j < fns.size(); ++j) {
      const Complex gij = inner(fns[i], fns[j]);
      const double target = (i == j) ? 1.0 : 0.0;
      if (std::abs(gij - target) > 1e-8)
        throw std::invalid_argument("eigenfunctions are not orthonormal");
    }
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(g.n, g.n);
  for (std::size_t k = 0; k < fns.size(); ++k)
    H.noalias() += vals(static_cast<Eigen::Index>(k)) * fns[k].samples *
                   fns[k].samples.adjoint() * g.dx;
  H = ((H + H.adjoint()) / 2.0).eval();
  return {std::move(H)};
}

HermitianOp momentum_op(const Grid1D& grid, double hbar) {
  if (grid.boundary != Boundary::periodic)
    throw std::invalid_argument("momentum operator requires a periodic grid");
  const int n = grid.n;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
  const Complex c = -kI * hbar / (2.0 * grid.dx);
  for (int j = 0; j < n; ++j) {
    H(j, (j + 1) % n) = c;
    H(j, (j - 1 + n) % n) = -c;
  }
  return {std::move(H)};
}

HermitianOp position_op(const Grid1D& grid) {
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(grid.n, grid.n);
  for (int j = 0; j < grid.n; ++j) H(j, j) = grid.x(j);
  return {std::move(H)};
}

namespace {

void require_normalized(const WaveFunction& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-6)
    throw std::invalid_argument("wave function is not normalized");
}

// <w, v> with the dx weight, conjugating the second argument
Complex weighted_dot(const Eigen::VectorXcd& w, const Eigen::VectorXcd& v, double dx) {
  return v.dot(w) * dx;
}

}  // namespace

double expectation(const HermitianOp& H, const WaveFunction& psi) {
  if (H.matrix.rows() != psi.samples.size())
    throw std::invalid_argument("dimension mismatch");
  require_normalized(psi);
  const Eigen::VectorXcd w = H.apply(psi.samples);
  const Complex val = weighted_dot(w, psi.samples, psi.grid.dx);
  if (std::abs(val.imag()) > 1e-10 * std::max(1.0, std::abs(val.real())))
    throw std::runtime_error("expectation has a non-negligible imaginary part");
  return val.real();
}

UncertaintyBound commutator_uncertainty(const HermitianOp& A, const HermitianOp& B,
                                        const WaveFunction& psi) {
  if (A.matrix.rows() != B.matrix.rows() ||
      A.matrix.rows() != psi.samples.size())
    throw std::invalid_argument("dimension mismatch");
  require_normalized(psi);
  const double dx = psi.grid.dx;
  const Eigen::VectorXcd av = A.apply(psi.samples);
  const Eigen::VectorXcd bv = B.apply(psi.samples);
  const double mean_a = weighted_dot(av, psi.samples, dx).real();
  const double mean_b = weighted_dot(bv, psi.samples, dx).real();
  const double mean_a2 = av.squaredNorm() * dx;
  const double mean_b2 = bv.squaredNorm() * dx;
  const double var_a = std::max(0.0, mean_a2 - mean_a * mean_a);
  const double var_b = std::max(0.0, mean_b2 - mean_b * mean_b);
  const Complex comm =
      weighted_dot(B.apply(av) - A.apply(bv), psi.samples, dx);
  return {std::sqrt(var_a), std::sqrt(var_b), 0.5 * std::abs(comm)};
}

PeriodicGenerator periodic_generator(int n, double period, double scale) {
  if (n < 4) throw std::invalid_argument("grid needs at least 4 points");
  if (!(period > 0.0)) throw std::invalid_argument("period must be positive");
  Grid1D g(0.0, period, n, Boundary::periodic);
  HermitianOp op = momentum_op(g, scale);
  Spectrum sp = spectrum_of(op.matrix);
  return {std::move(op), std::move(sp), g};
}

Spectrum spectrum_of(const Eigen::MatrixXcd& H) {
  if (H.rows() != H.cols()) throw std::invalid_argument("matrix must be square");
  if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  Eigen::VectorXd vals = solver.eigenvalues();
  Eigen::MatrixXcd vecs = solver.eigenvectors();

  const Eigen::Index n = vals.size();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && vals(end) - vals(end - 1) < 1e-9) ++end;
    if (end - start > 1) {
      // re-orthonormalize the degenerate cluster deterministically
      Eigen::MatrixXcd block = vecs.middleCols(start, end - start);
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(block);
      Eigen::MatrixXcd q = qr.householderQ() *
                           Eigen::MatrixXcd::Identity(n, end - start);
      vecs.middleCols(start, end - start) = q;
    }
    start = end;
  }

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = std::abs(vecs(i, k));
      if (m > best + 1e-15) {
        best = m;
        imax = i;
      }
    }
    const Complex c = vecs(imax, k);
    if (std::abs(c) > 0.0) vecs.col(k) *= std::conj(c) / std::abs(c);
  }
  return {std::move(vals), std::move(vecs)};
}

}  // namespace qev
