#include "qev/fields.hpp"

#include <cmath>
#include <stdexcept>

#include "qev/schrod.hpp"

namespace qev {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr Complex kI{0.0, 1.0};

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// I_(left) x op x I_(right) for mode `which` of `count` factors.
Eigen::MatrixXcd embed(const Eigen::MatrixXcd& op, int which, int count) {
  const Eigen::Index d = op.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int m = 0; m < count; ++m) {
    if (m == which)
      out = kron(out, op);
    else
      out = kron(out, Eigen::MatrixXcd::Identity(d, d));
  }
  return out;
}

// Multi-indices whose every per-mode occupation is at most cutoff - margin.
std::vector<long> sub_block(int n_modes, int cutoff, int margin) {
  const int base = cutoff + 1;
  const int occ_max = cutoff - margin;
  if (occ_max < 0) throw std::invalid_argument("cutoff too small for the requested block");
  long dim = 1;
  for (int m = 0; m < n_modes; ++m) dim *= base;
  std::vector<long> idx;
  for (long i = 0; i < dim; ++i) {
    long rest = i;
    bool keep = true;
    for (int m = 0; m < n_modes; ++m) {
      if (rest % base > occ_max) {
        keep = false;
        break;
      }
      rest /= base;
    }
    if (keep) idx.push_back(i);
  }
  return idx;
}

double block_max(const Eigen::MatrixXcd& m, const std::vector<long>& idx) {
  double worst = 0.0;
  for (long r : idx)
    for (long c : idx) worst = std::max(worst, std::abs(m(r, c)));
  return worst;
}

}  // namespace

void polarization_frame(const Eigen::Vector3d& k, Eigen::Vector3d& e1,
                        Eigen::Vector3d& e2) {
  const double kn = k.norm();
  if (!(kn > 0.0)) throw std::invalid_argument("polarization frame needs a nonzero wave vector");
  const Eigen::Vector3d khat = k / kn;
  const Eigen::Vector3d ref = (std::abs(khat.z()) < 0.9)
                                  ? Eigen::Vector3d::UnitZ()
                                  : Eigen::Vector3d::UnitX();
  e1 = ref.cross(khat).normalized();
  e2 = khat.cross(e1);
}

std::vector<Mode> build_modes(FieldKind kind, double mass,
                              const std::vector<Eigen::Vector3d>& wave_vectors) {
  if (kind == FieldKind::maxwell && mass != 0.0)
    throw std::invalid_argument("maxwell field is massless");
  if (kind == FieldKind::proca && !(mass > 0.0))
    throw std::invalid_argument("proca field requires positive mass");
  if (mass < 0.0) throw std::invalid_argument("mass must be non-negative");

  std::vector<Mode> out;
  for (const auto& k : wave_vectors) {
    const double k2 = k.squaredNorm();
    const double omega = (kind == FieldKind::maxwell)
                             ? std::sqrt(k2)
                             : std::sqrt(k2 + mass * mass);
    if (!(omega > 0.0)) throw std::domain_error("infrared mode excluded");

    if (kind == FieldKind::klein_gordon) {
      out.push_back({k, omega, -1, Eigen::Vector3d::Zero()});
      continue;
    }
    if (k.norm() > 0.0) {
      Eigen::Vector3d e1, e2;
      polarization_frame(k, e1, e2);
      out.push_back({k, omega, 0, e1});
      out.push_back({k, omega, 1, e2});
      if (kind == FieldKind::proca)
        out.push_back({k, omega, 2, k.normalized()});
    } else {
      // massive field at rest: fixed cartesian frame
      out.push_back({k, omega, 0, Eigen::Vector3d::UnitX()});
      out.push_back({k, omega, 1, Eigen::Vector3d::UnitY()});
      out.push_back({k, omega, 2, Eigen::Vector3d::UnitZ()});
    }
  }
  return out;
}

Eigen::MatrixXcd ladder(double omega, int cutoff) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  if (cutoff < 1) throw std::invalid_argument("cutoff must be at least 1");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(2.0 * omega * n);
  return a;
}

Eigen::MatrixXcd single_mode_hamiltonian(double omega, int cutoff) {
  const Eigen::MatrixXcd a = ladder(omega, cutoff);
  const Eigen::MatrixXcd ad = a.adjoint();
  const Eigen::MatrixXcd b = (a + ad) / (2.0 * omega);
  const Eigen::MatrixXcd p = (a - ad) / (2.0 * kI);
  Eigen::MatrixXcd h = 0.5 * p * p + 0.5 * omega * omega * b * b;
  return ((h + h.adjoint()) / 2.0).eval();
}

const Eigen::MatrixXcd& FieldAssembly::phi_at(int site, int comp) const {
  const long i = static_cast<long>(site) * components() + comp;
  if (site < 0 || comp < 0 || comp >= components() ||
      i >= static_cast<long>(phi.size()))
    throw std::out_of_range("no such field component");
  return phi[i];
}

const Eigen::MatrixXcd& FieldAssembly::pi_at(int site, int comp) const {
  const long i = static_cast<long>(site) * components() + comp;
  if (site < 0 || comp < 0 || comp >= components() ||
      i >= static_cast<long>(pi.size()))
    throw std::out_of_range("no such field component");
  return pi[i];
}

FieldAssembly assemble_field(FieldKind kind, const std::vector<Mode>& modes,
                             int cutoff, int n_sites, double delta_x,
                             double box_length) {
  if (modes.empty() || modes.size() > 3)
    throw std::invalid_argument("dense assembly supports 1 to 3 modes");
  if (cutoff < 3 || cutoff > 6)
    throw std::invalid_argument("cutoff must be between 3 and 6");
  if (n_sites < 1) throw std::invalid_argument("need at least one site");
  if (!(delta_x > 0.0)) throw std::invalid_argument("site spacing must be positive");
  if (box_length == 0.0) {
    if (n_sites < 2)
      throw std::invalid_argument("box length required for a single site");
    box_length = n_sites * delta_x;
  }
  if (!(box_length > 0.0)) throw std::invalid_argument("box length must be positive");

  FieldAssembly f;
  f.kind = kind;
  f.modes = modes;
  f.cutoff = cutoff;
  f.box_length = box_length;
  f.delta_x = delta_x;
  for (int s = 0; s < n_sites; ++s) f.sites.push_back(s * delta_x);
  const int m_count = static_cast<int>(modes.size());
  f.dim = 1;
  for (int m = 0; m < m_count; ++m) f.dim *= cutoff + 1;

  f.hamiltonian = Eigen::MatrixXcd::Zero(f.dim, f.dim);
  std::vector<Eigen::MatrixXcd> lowering;
  for (int m = 0; m < m_count; ++m) {
    lowering.push_back(embed(ladder(modes[m].omega, cutoff), m, m_count));
    f.hamiltonian +=
        embed(single_mode_hamiltonian(modes[m].omega, cutoff), m, m_count);
  }

  const int ncomp = f.components();
  for (int s = 0; s < n_sites; ++s)
    for (int c = 0; c < ncomp; ++c) {
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(f.dim, f.dim);
      for (int m = 0; m < m_count; ++m) {
        const Mode& mode = modes[m];
        const double weight =
            (kind == FieldKind::klein_gordon) ? 1.0 : mode.polarization(c);
        if (weight == 0.0) continue;
        const double gamma =
            1.0 / (2.0 * mode.omega * std::sqrt(box_length));
        const double kx = mode.k.x() * f.sites[s];
        acc += gamma * weight *
               (std::exp(-kI * kx) * lowering[m] +
                std::exp(kI * kx) * lowering[m].adjoint());
      }
      f.phi.push_back(((acc + acc.adjoint()) / 2.0).eval());
    }

  for (const auto& ph : f.phi)
    f.pi.push_back(kI * (f.hamiltonian * ph - ph * f.hamiltonian));
  return f;
}

CcrReport ccr_report(const FieldAssembly& f) {
  const int m_count = static_cast<int>(f.modes.size());
  const std::vector<long> idx = sub_block(m_count, f.cutoff, 3);
  const int n_sites = static_cast<int>(f.sites.size());
  const int ncomp = f.components();

  // distinct wave vectors resolve the lattice delta?
  std::vector<Eigen::Vector3d> distinct;
  for (const auto& m : f.modes) {
    bool seen = false;
    for (const auto& d : distinct)
      if ((d - m.k).norm() < 1e-12) {
        seen = true;
        break;
      }
    if (!seen) distinct.push_back(m.k);
  }
  bool incomplete = distinct.size() != static_cast<std::size_t>(n_sites);
  if (!incomplete) {
    for (int i = 0; i < n_sites && !incomplete; ++i)
      for (int j = 0; j < n_sites && !incomplete; ++j) {
        Complex s{0.0, 0.0};
        for (const auto& k : distinct)
          s += std::exp(kI * (k.x() * (f.sites[i] - f.sites[j])));
        s /= static_cast<double>(n_sites);
        if (std::abs(s - ((i == j) ? 1.0 : 0.0)) > 1e-12) incomplete = true;
      }
  }

  CcrReport rep;
  rep.incomplete_basis = incomplete;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(f.dim, f.dim);
  for (int i = 0; i < n_sites; ++i)
    for (int j = 0; j < n_sites; ++j)
      for (int a = 0; a < ncomp; ++a)
        for (int b = 0; b < ncomp; ++b) {
          // mode-sum prediction for [phi_a(x_i), pi_b(x_j)]
          double pred = 0.0;
          for (const auto& m : f.modes) {
            const double wa =
                (f.kind == FieldKind::klein_gordon) ? 1.0 : m.polarization(a);
            const double wb =
                (f.kind == FieldKind::klein_gordon) ? 1.0 : m.polarization(b);
            pred += wa * wb *
                    std::cos(m.k.x() * (f.sites[i] - f.sites[j])) /
                    f.box_length;
          }
          const Eigen::MatrixXcd& pa = f.phi_at(i, a);
          const Eigen::MatrixXcd& pb = f.pi_at(j, b);
          const Eigen::MatrixXcd comm = pa * pb - pb * pa;
          rep.max_ccr_deviation = std::max(
              rep.max_ccr_deviation, block_max(comm - kI * pred * id, idx));
          const Eigen::MatrixXcd& qa = f.phi_at(i, a);
          const Eigen::MatrixXcd& qb = f.phi_at(j, b);
          rep.max_phi_phi =
              std::max(rep.max_phi_phi, block_max(qa * qb - qb * qa, idx));
          const Eigen::MatrixXcd& ra = f.pi_at(i, a);
          const Eigen::MatrixXcd& rb = f.pi_at(j, b);
          rep.max_pi_pi =
              std::max(rep.max_pi_pi, block_max(ra * rb - rb * ra, idx));
        }
  return rep;
}

double vacuum_phi_squared(const FieldAssembly& f) {
  double acc = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    const Eigen::MatrixXcd& ph = f.phi_at(0, c);
    acc += (ph * ph)(0, 0).real();
  }
  return acc;
}

namespace {

struct EvolvedFrame {
  Eigen::MatrixXcd vecs;
  Eigen::VectorXd vals;
  Eigen::MatrixXcd at(const Eigen::MatrixXcd& op, double t) const {
    const Eigen::VectorXcd phase =
        (kI * t * vals.cast<Complex>().array()).exp();
    const Eigen::MatrixXcd u = vecs * phase.asDiagonal() * vecs.adjoint();
    return u * op * u.adjoint();
  }
};

EvolvedFrame eigenframe(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  return {solver.eigenvectors(), solver.eigenvalues()};
}

}  // namespace

double pi_heisenberg_deviation(const FieldAssembly& f, double dt) {
  const EvolvedFrame frame = eigenframe(f.hamiltonian);
  const std::vector<long> idx =
      sub_block(static_cast<int>(f.modes.size()), f.cutoff, 3);
  double worst = 0.0;
  for (std::size_t c = 0; c < f.phi.size(); ++c) {
    const Eigen::MatrixXcd d =
        (-frame.at(f.phi[c], 2.0 * dt) + 8.0 * frame.at(f.phi[c], dt) -
         8.0 * frame.at(f.phi[c], -dt) + frame.at(f.phi[c], -2.0 * dt)) /
        (12.0 * dt);
    worst = std::max(worst, block_max(d - f.pi[c], idx));
  }
  return worst;
}

double heisenberg_residual(double omega, int cutoff, double dt) {
  if (cutoff < 4) throw std::invalid_argument("cutoff too small for the residual block");
  const Eigen::MatrixXcd a = ladder(omega, cutoff);
  const EvolvedFrame frame = eigenframe(single_mode_hamiltonian(omega, cutoff));
  const std::vector<long> idx = sub_block(1, cutoff, 3);
  double worst = 0.0;
  for (double t : {0.0, 0.05, 0.1, 0.15, 0.2}) {
    const Eigen::MatrixXcd second =
        (frame.at(a, t + dt) - 2.0 * frame.at(a, t) + frame.at(a, t - dt)) /
        (dt * dt);
    worst = std::max(
        worst, block_max(second + omega * omega * frame.at(a, t), idx));
  }
  return worst;
}

PropagatorMatrix mode_propagator(double omega, int slices, const Grid1D& grid,
                                 double t_total, double hbar) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  const Potential R = potential_from_function(
      grid, [omega](double a) { return omega * omega * a * a; });
  return propagator(R, 2.0, hbar, 0.0, t_total, slices);
}

Eigen::MatrixXd oscillator_eigenfunctions(double omega, int levels,
                                          const Eigen::VectorXd& points) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  if (levels < 1) throw std::invalid_argument("need at least one level");
  const Eigen::Index np = points.size();
  Eigen::MatrixXd psi(levels, np);
  const double root = std::sqrt(omega);
  const double norm0 = std::pow(omega / kPi, 0.25);
  for (Eigen::Index i = 0; i < np; ++i) {
    const double xi = root * points(i);
    psi(0, i) = norm0 * std::exp(-xi * xi / 2.0);
    if (levels > 1) psi(1, i) = std::sqrt(2.0) * xi * psi(0, i);
    for (int n = 2; n < levels; ++n)
      psi(n, i) = std::sqrt(2.0 / n) * xi * psi(n - 1, i) -
                  std::sqrt((n - 1.0) / n) * psi(n - 2, i);
  }
  return psi;
}

double completeness_deviation(double omega, int levels) {
  const double root = std::sqrt(omega);
  const double da = 0.25 / root;
  const int np = 25;  // window [-3, 3] / sqrt(omega)
  Eigen::VectorXd points(np);
  for (int i = 0; i < np; ++i) points(i) = -3.0 / root + i * da;
  const Eigen::MatrixXd psi = oscillator_eigenfunctions(omega, levels, points);
  const Eigen::MatrixXd c = psi.transpose() * psi * da;
  return (c - Eigen::MatrixXd::Identity(np, np)).cwiseAbs().maxCoeff();
}

}  // namespace qev
