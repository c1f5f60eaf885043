#include "qev/pathint.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qev {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr Complex kI{0.0, 1.0};

void check_params(double mass, double hbar) {
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
}

Eigen::MatrixXcd matrix_power(Eigen::MatrixXcd base, long e) {
  Eigen::MatrixXcd out =
      Eigen::MatrixXcd::Identity(base.rows(), base.cols());
  while (e > 0) {
    if (e & 1) out = (out * base).eval();
    e >>= 1;
    if (e) base = (base * base).eval();
  }
  return out;
}

}  // namespace

WaveFunction PropagatorMatrix::apply(const WaveFunction& psi) const {
  if (!psi.grid.compatible(grid))
    throw std::invalid_argument("grid mismatch");
  return {grid, kernel * psi.samples * grid.dx};
}

Eigen::MatrixXcd free_transfer(const Grid1D& grid, double mass, double hbar,
                               double dt) {
  check_params(mass, hbar);
  if (grid.boundary != Boundary::periodic)
    throw std::invalid_argument("sliced propagation requires a periodic grid");
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const int n = grid.n;
  const double length = grid.length();

  // Circulant column c(d) = (1/n) sum_m exp(i k_m d dx) exp(-i hbar k_m^2 dt / 2 mass)
  Eigen::VectorXcd c(n);
  for (int d = 0; d < n; ++d) {
    Complex acc{0.0, 0.0};
    for (int m = 0; m < n; ++m) {
      const int mm = (m <= (n - 1) / 2) ? m : m - n;
      const double k = 2.0 * kPi * mm / length;
      const double phase = k * d * grid.dx - hbar * k * k * dt / (2.0 * mass);
      acc += std::exp(kI * phase);
    }
    c(d) = acc / static_cast<double>(n);
  }
  Eigen::MatrixXcd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = c(((i - j) % n + n) % n);
  return out;
}

Eigen::MatrixXcd slice_transfer(const Grid1D& grid, const Potential& R,
                                double mass, double hbar, double dt) {
  if (!grid.compatible(R.grid)) throw std::invalid_argument("grid mismatch");
  Eigen::MatrixXcd out = free_transfer(grid, mass, hbar, dt);
  Eigen::VectorXcd d(grid.n);
  for (int i = 0; i < grid.n; ++i)
    d(i) = std::exp(-kI * R.samples(i) * dt / (2.0 * hbar));
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j) out(i, j) *= d(i) * d(j);
  return out;
}

PropagatorMatrix propagator(const Potential& R, double mass, double hbar,
                            double t1, double t2, int slices) {
  check_params(mass, hbar);
  if (slices < 1) throw std::invalid_argument("need at least one slice");
  if (!(t2 > t1)) throw std::invalid_argument("empty propagation interval");
  const Grid1D& g = R.grid;
  const double dt = (t2 - t1) / slices;
  Eigen::MatrixXcd total =
      matrix_power(slice_transfer(g, R, mass, hbar, dt), slices);
  PropagatorMatrix out{g, total / g.dx, t1, t2,
                       hbar * dt / (mass * g.dx * g.dx) < 1.0};
  return out;
}

PropagatorMatrix free_particle_kernel(const Grid1D& grid, double mass,
                                      double hbar, double t1, double t2) {
  check_params(mass, hbar);
  if (!(t2 > t1)) throw std::invalid_argument("empty propagation interval");
  const double elapsed = t2 - t1;
  const int n = grid.n;
  const Complex pref = std::sqrt(mass / (2.0 * kPi * hbar * elapsed)) *
                       std::exp(-kI * (kPi / 4.0));
  Eigen::MatrixXcd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double d = grid.x(i) - grid.x(j);
      K(i, j) = pref * std::exp(kI * mass * d * d / (2.0 * hbar * elapsed));
    }
  return {grid, std::move(K), t1, t2,
          hbar * elapsed / (mass * grid.dx * grid.dx) < 1.0};
}

PropagatorMatrix harmonic_kernel(const Grid1D& grid, double mass, double omega,
                                 double hbar, double t1, double t2) {
  check_params(mass, hbar);
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  if (!(t2 > t1)) throw std::invalid_argument("empty propagation interval");
  const double elapsed = t2 - t1;
  const double wt = omega * elapsed;
  if (!(wt < kPi) || std::sin(wt) < 1e-12)
    throw std::domain_error("harmonic kernel at or past a focal time");
  const double s = std::sin(wt);
  const double co = std::cos(wt);
  const int n = grid.n;
  const Complex pref = std::sqrt(mass * omega / (2.0 * kPi * hbar * s)) *
                       std::exp(-kI * (kPi / 4.0));
  const double a = mass * omega / (2.0 * hbar * s);
  Eigen::MatrixXcd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double xi = grid.x(i), xj = grid.x(j);
      K(i, j) = pref * std::exp(kI * a * ((xi * xi + xj * xj) * co - 2.0 * xi * xj));
    }
  return {grid, std::move(K), t1, t2,
          hbar * elapsed / (mass * grid.dx * grid.dx) < 1.0};
}

double compare(const PropagatorMatrix& K, const WaveFunction& psi0,
               const EvolveResult& run) {
  if (!K.grid.compatible(psi0.grid) || !K.grid.compatible(run.final.grid))
    throw std::invalid_argument("grid mismatch");
  if (run.log.empty()) throw std::invalid_argument("evolution log is empty");
  if (std::abs((K.t2 - K.t1) - run.log.back().t) > 1e-12)
    throw std::invalid_argument("propagation intervals differ");
  const WaveFunction prop = K.apply(psi0);
  return (prop.samples - run.final.samples).cwiseAbs().maxCoeff();
}

double unitarity_defect(const PropagatorMatrix& K) {
  const Eigen::MatrixXcd T = K.kernel * K.grid.dx;
  const Eigen::MatrixXcd G = T.adjoint() * T;
  return (G - Eigen::MatrixXcd::Identity(G.rows(), G.cols()))
      .cwiseAbs()
      .maxCoeff();
}

double semigroup_defect(const Potential& R, double mass, double hbar,
                        double t_half, int slices) {
  const double dx = R.grid.dx;
  const Eigen::MatrixXcd full =
      propagator(R, mass, hbar, 0.0, 2.0 * t_half, slices).kernel * dx;
  const Eigen::MatrixXcd half =
      propagator(R, mass, hbar, 0.0, t_half, slices).kernel * dx;
  return (full - half * half).cwiseAbs().maxCoeff();
}

namespace {

// Gradient of the discrete action with respect to the interior knots.
Eigen::VectorXd action_gradient(const Potential& R, double mass, double dt,
                                const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd g(n - 2);
  for (int k = 1; k + 1 < n; ++k)
    g(k - 1) = -mass * (x(k + 1) - 2.0 * x(k) + x(k - 1)) / dt -
               dt * R.deriv(x(k));
  return g;
}

// Solve the tridiagonal system (diag d, off-diagonals e) in place.
Eigen::VectorXd thomas_solve(Eigen::VectorXd d, const double e,
                             Eigen::VectorXd rhs) {
  const int n = static_cast<int>(d.size());
  for (int k = 1; k < n; ++k) {
    const double w = e / d(k - 1);
    d(k) -= w * e;
    rhs(k) -= w * rhs(k - 1);
  }
  Eigen::VectorXd out(n);
  out(n - 1) = rhs(n - 1) / d(n - 1);
  for (int k = n - 2; k >= 0; --k) out(k) = (rhs(k) - e * out(k + 1)) / d(k);
  return out;
}

double second_deriv(const Potential& R, double x) {
  const double h = 1e-5;
  return (R.fn(x + h) - 2.0 * R.fn(x) + R.fn(x - h)) / (h * h);
}

}  // namespace

ActionResult least_action_path(const Potential& R, double mass, double x1,
                               double x2, double t1, double t2, int n_knots) {
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
  if (n_knots < 3) throw std::invalid_argument("need at least 3 knots");
  if (!(t2 > t1)) throw std::invalid_argument("empty time interval");
  const int n = n_knots;
  const double dt = (t2 - t1) / (n - 1);

  ActionResult res;
  res.times.resize(n);
  res.path.resize(n);
  for (int k = 0; k < n; ++k) {
    res.times(k) = t1 + k * dt;
    const double frac = static_cast<double>(k) / (n - 1);
    res.path(k) = x1 + frac * (x2 - x1);
  }

  const double scale =
      1e-12 * (1.0 + 2.0 * mass / dt) *
      std::max(1.0, std::max(std::abs(x1), std::abs(x2)) + std::abs(x2 - x1));
  double prev_gnorm = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < 200; ++it) {
    const Eigen::VectorXd g = action_gradient(R, mass, dt, res.path);
    const double gnorm = g.cwiseAbs().maxCoeff();
    if (gnorm <= scale) break;
    if (it > 2 && gnorm >= 0.99 * prev_gnorm) break;  // roundoff plateau
    prev_gnorm = gnorm;

    Eigen::VectorXd diag(n - 2);
    for (int k = 1; k + 1 < n; ++k)
      diag(k - 1) = 2.0 * mass / dt - dt * second_deriv(R, res.path(k));
    const Eigen::VectorXd delta = thomas_solve(diag, -mass / dt, -g);

    double lambda = 1.0;
    Eigen::VectorXd trial = res.path;
    for (int halvings = 0; halvings < 12; ++halvings) {
      trial.segment(1, n - 2) = res.path.segment(1, n - 2) + lambda * delta;
      const double trial_norm =
          action_gradient(R, mass, dt, trial).cwiseAbs().maxCoeff();
      if (trial_norm < gnorm || lambda < 1e-3) break;
      lambda /= 2.0;
    }
    res.path = trial;
  }
  if (it >= 200) {
    const double gnorm =
        action_gradient(R, mass, dt, res.path).cwiseAbs().maxCoeff();
    if (gnorm > 1e-6 * (1.0 + 2.0 * mass / dt))
      throw std::runtime_error("least action search did not converge");
  }
  res.iterations = it;

  double kinetic = 0.0;
  for (int k = 0; k + 1 < n; ++k) {
    const double dxk = res.path(k + 1) - res.path(k);
    kinetic += 0.5 * mass * dxk * dxk / dt;
  }
  double pot = 0.5 * (R.fn(res.path(0)) + R.fn(res.path(n - 1)));
  for (int k = 1; k + 1 < n; ++k) pot += R.fn(res.path(k));
  res.action = kinetic - dt * pot;

  double worst = 0.0;
  for (int k = 1; k + 1 < n; ++k) {
    const double acc =
        (res.path(k + 1) - 2.0 * res.path(k) + res.path(k - 1)) / (dt * dt);
    worst = std::max(worst, std::abs(mass * acc + R.deriv(res.path(k))));
  }
  res.el_residual = worst;
  return res;
}

double free_action(double mass, double x1, double x2, double elapsed) {
  if (!(elapsed > 0.0)) throw std::invalid_argument("empty time interval");
  const double d = x2 - x1;
  return 0.5 * mass * d * d / elapsed;
}

double harmonic_action(double mass, double omega, double x1, double x2,
                       double elapsed) {
  if (!(elapsed > 0.0)) throw std::invalid_argument("empty time interval");
  const double s = std::sin(omega * elapsed);
  if (std::abs(s) < 1e-12)
    throw std::domain_error("harmonic action at a focal time");
  return mass * omega / (2.0 * s) *
         ((x1 * x1 + x2 * x2) * std::cos(omega * elapsed) - 2.0 * x1 * x2);
}

}  // namespace qev
