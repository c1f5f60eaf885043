#include "qev/schrod.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qev/kernel.hpp"

namespace qev {

double Potential::deriv(double x) const {
  const double h = 1e-6;
  return (fn(x + h) - fn(x - h)) / (2.0 * h);
}

Potential potential_from_function(const Grid1D& grid,
                                  std::function<double(double)> fn) {
  if (!fn) throw std::invalid_argument("potential callable is empty");
  Eigen::VectorXd s(grid.n);
  for (int i = 0; i < grid.n; ++i) s(i) = fn(grid.x(i));
  return {grid, std::move(s), std::move(fn)};
}

Potential potential_from_samples(const Grid1D& grid,
                                 const Eigen::VectorXd& samples) {
  if (samples.size() != grid.n)
    throw std::invalid_argument("potential samples do not match the grid");
  Eigen::VectorXd copy = samples;
  const Grid1D g = grid;
  auto fn = [g, copy](double x) {
    const double t = (x - g.x_min) / g.dx;
    if (g.boundary == Boundary::periodic) {
      double tp = std::fmod(t, static_cast<double>(g.n));
      if (tp < 0.0) tp += g.n;
      const int i0 = static_cast<int>(tp) % g.n;
      const int i1 = (i0 + 1) % g.n;
      const double frac = tp - std::floor(tp);
      return (1.0 - frac) * copy(i0) + frac * copy(i1);
    }
    if (t <= 0.0) return copy(0);
    if (t >= g.n - 1) return copy(g.n - 1);
    const int i0 = static_cast<int>(t);
    const double frac = t - i0;
    return (1.0 - frac) * copy(i0) + frac * copy(i0 + 1);
  };
  return {grid, samples, std::move(fn)};
}

Potential hard_wall(const Grid1D& grid, double x_left, double x_right,
                    double mass, double hbar) {
  if (!(x_left < x_right)) throw std::invalid_argument("empty well");
  const double wall = 1e6 * hbar * hbar / (mass * grid.dx * grid.dx);
  auto fn = [x_left, x_right, wall](double x) {
    return (x >= x_left && x <= x_right) ? 0.0 : wall;
  };
  return potential_from_function(grid, fn);
}

namespace {

void validate_config(const EvolConfig& cfg) {
  if (!(cfg.hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  if (!(cfg.mass > 0.0)) throw std::invalid_argument("mass must be positive");
  if (cfg.steps < 0) throw std::invalid_argument("steps must be non-negative");
  if (cfg.steps > 0 && !(cfg.dt > 0.0))
    throw std::invalid_argument("time step must be positive");
  if (cfg.log_every < 1) throw std::invalid_argument("log_every must be at least 1");
  if (!(cfg.stability_factor > 0.0))
    throw std::invalid_argument("stability factor must be positive");
}

// H f = -(hbar^2 / 2 mass) lap f + R f, honoring the grid boundary.
Eigen::VectorXd apply_h(const Grid1D& g, const Eigen::VectorXd& R, double hbar,
                        double mass, const Eigen::VectorXd& f) {
  const int n = g.n;
  const double c = -hbar * hbar / (2.0 * mass * g.dx * g.dx);
  Eigen::VectorXd out(n);
  if (g.boundary == Boundary::periodic) {
    for (int i = 0; i < n; ++i) {
      const double lap = f((i + 1) % n) - 2.0 * f(i) + f((i - 1 + n) % n);
      out(i) = c * lap + R(i) * f(i);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const double fp = (i + 1 < n) ? f(i + 1) : 0.0;
      const double fm = (i > 0) ? f(i - 1) : 0.0;
      out(i) = c * (fp - 2.0 * f(i) + fm) + R(i) * f(i);
    }
  }
  return out;
}

LogRow observables(const Grid1D& g, const Eigen::VectorXd& R, double hbar,
                   double mass, double t, const Eigen::VectorXd& u,
                   const Eigen::VectorXd& v) {
  const int n = g.n;
  const double dx = g.dx;
  LogRow row;
  row.t = t;
  double nrm2 = 0.0, mx = 0.0, mp = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dens = u(i) * u(i) + v(i) * v(i);
    nrm2 += dens;
    mx += g.x(i) * dens;
    double up, vp, um, vm;
    if (g.boundary == Boundary::periodic) {
      up = u((i + 1) % n);
      vp = v((i + 1) % n);
      um = u((i - 1 + n) % n);
      vm = v((i - 1 + n) % n);
    } else {
      up = (i + 1 < n) ? u(i + 1) : 0.0;
      vp = (i + 1 < n) ? v(i + 1) : 0.0;
      um = (i > 0) ? u(i - 1) : 0.0;
      vm = (i > 0) ? v(i - 1) : 0.0;
    }
    // Im[conj(psi_i) (psi_{i+1} - psi_{i-1})]
    mp += u(i) * (vp - vm) - v(i) * (up - um);
  }
  row.norm = std::sqrt(nrm2 * dx);
  row.mean_x = mx * dx;
  row.mean_p = hbar * mp / 2.0;
  const Eigen::VectorXd hu = apply_h(g, R, hbar, mass, u);
  const Eigen::VectorXd hv = apply_h(g, R, hbar, mass, v);
  double e = 0.0;
  for (int i = 0; i < n; ++i) e += u(i) * hu(i) + v(i) * hv(i);
  row.energy = e * dx;
  return row;
}

}  // namespace

EvolveResult evolve(const WaveFunction& psi0, const Potential& R,
                    const EvolConfig& cfg) {
  validate_config(cfg);
  if (!psi0.grid.compatible(R.grid)) throw std::invalid_argument("grid mismatch");
  const Grid1D& g = psi0.grid;
  const double dt_max =
      max_stable_dt_pde(cfg.mass, cfg.hbar, {g.dx}, cfg.stability_factor);
  if (cfg.steps > 0 && cfg.dt > dt_max)
    throw std::invalid_argument("time step exceeds the stability bound");

  Eigen::VectorXd u = psi0.samples.real();
  Eigen::VectorXd v = psi0.samples.imag();
  EvolveResult result;
  result.log.push_back(observables(g, R.samples, cfg.hbar, cfg.mass, 0.0, u, v));

  const double half = cfg.dt / (2.0 * cfg.hbar);
  for (long s = 1; s <= cfg.steps; ++s) {
    u += half * apply_h(g, R.samples, cfg.hbar, cfg.mass, v);
    v -= (cfg.dt / cfg.hbar) * apply_h(g, R.samples, cfg.hbar, cfg.mass, u);
    u += half * apply_h(g, R.samples, cfg.hbar, cfg.mass, v);
    if (!u.allFinite() || !v.allFinite())
      throw std::runtime_error("NaN detected at step " + std::to_string(s));
    const double nrm = std::sqrt((u.squaredNorm() + v.squaredNorm()) * g.dx);
    if (std::abs(nrm - 1.0) > 1e-5)
      throw std::runtime_error("norm drift exceeded tolerance at step " +
                               std::to_string(s));
    if (s % cfg.log_every == 0 || s == cfg.steps)
      result.log.push_back(
          observables(g, R.samples, cfg.hbar, cfg.mass, s * cfg.dt, u, v));
  }

  Eigen::VectorXcd out(g.n);
  for (int i = 0; i < g.n; ++i) out(i) = Complex(u(i), v(i));
  result.final = WaveFunction{g, std::move(out)};
  return result;
}

WaveFunction StationaryStates::state(int k) const {
  if (k < 0 || k >= energies.size())
    throw std::out_of_range("no such stationary state");
  return {grid, states.col(k)};
}

StationaryStates stationary(const Potential& R, double mass, double hbar) {
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  const Grid1D& g = R.grid;
  const int n = g.n;
  const double c = -hbar * hbar / (2.0 * mass * g.dx * g.dx);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    H(i, i) = -2.0 * c + R.samples(i);
    if (g.boundary == Boundary::periodic) {
      H(i, (i + 1) % n) += c;
      H(i, (i - 1 + n) % n) += c;
    } else {
      if (i + 1 < n) H(i, i + 1) += c;
      if (i > 0) H(i, i - 1) += c;
    }
  }
  Spectrum sp = spectrum_of(H);
  StationaryStates out{g, std::move(sp.eigenvalues), std::move(sp.eigenvectors)};
  out.states /= std::sqrt(g.dx);
  return out;
}

double ehrenfest_residual(const EvolveResult& run, const Potential& R) {
  const auto& rows = run.log;
  if (rows.size() < 3)
    throw std::invalid_argument("need at least 3 log samples");
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
    const double dpdt = (rows[k + 1].mean_p - rows[k - 1].mean_p) /
                        (rows[k + 1].t - rows[k - 1].t);
    worst = std::max(worst, std::abs(dpdt + R.deriv(rows[k].mean_x)));
  }
  return worst;
}

double WaveFunction3D::norm() const {
  return std::sqrt(samples.squaredNorm() * grid.volume_element());
}

WaveFunction3D WaveFunction3D::normalized() const {
  const double nn = norm();
  if (!(nn > 0.0)) throw std::domain_error("cannot normalize a zero function");
  return {grid, samples / nn};
}

Potential3D potential3d_from_function(
    const Grid3D& grid,
    const std::function<double(double, double, double)>& fn) {
  if (!fn) throw std::invalid_argument("potential callable is empty");
  Eigen::VectorXd s(grid.size());
  for (int ix = 0; ix < grid.gx.n; ++ix)
    for (int iy = 0; iy < grid.gy.n; ++iy)
      for (int iz = 0; iz < grid.gz.n; ++iz)
        s(grid.index(ix, iy, iz)) =
            fn(grid.gx.x(ix), grid.gy.x(iy), grid.gz.x(iz));
  return {grid, std::move(s)};
}

WaveFunction3D product_state(const Grid3D& grid, const WaveFunction& fx,
                             const WaveFunction& fy, const WaveFunction& fz) {
  if (fx.samples.size() != grid.gx.n || fy.samples.size() != grid.gy.n ||
      fz.samples.size() != grid.gz.n)
    throw std::invalid_argument("factor sizes do not match the grid");
  Eigen::VectorXcd s(grid.size());
  for (int ix = 0; ix < grid.gx.n; ++ix)
    for (int iy = 0; iy < grid.gy.n; ++iy)
      for (int iz = 0; iz < grid.gz.n; ++iz)
        s(grid.index(ix, iy, iz)) =
            fx.samples(ix) * fy.samples(iy) * fz.samples(iz);
  return {grid, std::move(s)};
}

namespace {

Eigen::VectorXd apply_h3(const Grid3D& g, const Eigen::VectorXd& R, double hbar,
                         double mass, const Eigen::VectorXd& f) {
  const int nx = g.gx.n, ny = g.gy.n, nz = g.gz.n;
  const double cx = -hbar * hbar / (2.0 * mass * g.gx.dx * g.gx.dx);
  const double cy = -hbar * hbar / (2.0 * mass * g.gy.dx * g.gy.dx);
  const double cz = -hbar * hbar / (2.0 * mass * g.gz.dx * g.gz.dx);
  Eigen::VectorXd out(f.size());
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy)
      for (int iz = 0; iz < nz; ++iz) {
        const long i = g.index(ix, iy, iz);
        const double lx = f(g.index((ix + 1) % nx, iy, iz)) - 2.0 * f(i) +
                          f(g.index((ix - 1 + nx) % nx, iy, iz));
        const double ly = f(g.index(ix, (iy + 1) % ny, iz)) - 2.0 * f(i) +
                          f(g.index(ix, (iy - 1 + ny) % ny, iz));
        const double lz = f(g.index(ix, iy, (iz + 1) % nz)) - 2.0 * f(i) +
                          f(g.index(ix, iy, (iz - 1 + nz) % nz));
        out(i) = cx * lx + cy * ly + cz * lz + R(i) * f(i);
      }
  return out;
}

}  // namespace

EvolveResult3D evolve3d(const WaveFunction3D& psi0, const Potential3D& R,
                        const EvolConfig& cfg) {
  validate_config(cfg);
  const Grid3D& g = psi0.grid;
  if (g.gx.boundary != Boundary::periodic ||
      g.gy.boundary != Boundary::periodic ||
      g.gz.boundary != Boundary::periodic)
    throw std::invalid_argument("3d evolution requires periodic grids");
  if (R.samples.size() != g.size())
    throw std::invalid_argument("potential samples do not match the grid");
  const double dt_max = max_stable_dt_pde(
      cfg.mass, cfg.hbar, {g.gx.dx, g.gy.dx, g.gz.dx}, cfg.stability_factor);
  if (cfg.steps > 0 && cfg.dt > dt_max)
    throw std::invalid_argument("time step exceeds the stability bound");

  Eigen::VectorXd u = psi0.samples.real();
  Eigen::VectorXd v = psi0.samples.imag();
  const double dv = g.volume_element();
  EvolveResult3D result;
  result.log.push_back({0.0, std::sqrt((u.squaredNorm() + v.squaredNorm()) * dv)});

  const double half = cfg.dt / (2.0 * cfg.hbar);
  for (long s = 1; s <= cfg.steps; ++s) {
    u += half * apply_h3(g, R.samples, cfg.hbar, cfg.mass, v);
    v -= (cfg.dt / cfg.hbar) * apply_h3(g, R.samples, cfg.hbar, cfg.mass, u);
    u += half * apply_h3(g, R.samples, cfg.hbar, cfg.mass, v);
    if (!u.allFinite() || !v.allFinite())
      throw std::runtime_error("NaN detected at step " + std::to_string(s));
    const double nrm = std::sqrt((u.squaredNorm() + v.squaredNorm()) * dv);
    if (std::abs(nrm - 1.0) > 1e-5)
      throw std::runtime_error("norm drift exceeded tolerance at step " +
                               std::to_string(s));
    if (s % cfg.log_every == 0 || s == cfg.steps)
      result.log.push_back({s * cfg.dt, nrm});
  }

  Eigen::VectorXcd out(g.size());
  for (long i = 0; i < g.size(); ++i) out(i) = Complex(u(i), v(i));
  result.final = WaveFunction3D{g, std::move(out)};
  return result;
}

double product_deviation(const WaveFunction3D& psi) {
  const Grid3D& g = psi.grid;
  const int nx = g.gx.n, ny = g.gy.n, nz = g.gz.n;
  if (!(psi.samples.cwiseAbs().maxCoeff() > 0.0))
    throw std::domain_error("zero state has no product structure");

  auto ratio = [](const Eigen::MatrixXcd& A) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    const auto& s = svd.singularValues();
    if (s.size() < 2 || !(s(0) > 0.0)) return 0.0;
    return s(1) / s(0);
  };

  Eigen::MatrixXcd ax(nx, static_cast<long>(ny) * nz);
  Eigen::MatrixXcd ay(ny, static_cast<long>(nx) * nz);
  Eigen::MatrixXcd az(nz, static_cast<long>(nx) * ny);
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy)
      for (int iz = 0; iz < nz; ++iz) {
        const Complex val = psi.samples(g.index(ix, iy, iz));
        ax(ix, static_cast<long>(iy) * nz + iz) = val;
        ay(iy, static_cast<long>(ix) * nz + iz) = val;
        az(iz, static_cast<long>(ix) * ny + iy) = val;
      }
  return std::max({ratio(ax), ratio(ay), ratio(az)});
}

}  // namespace qev
