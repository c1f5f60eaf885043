#include "qev/gprob.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace qev {

Amplitude chain(const Amplitude& c21, const Amplitude& c32) {
  return {c21.u * c32.u - c21.v * c32.v, c21.v * c32.u + c21.u * c32.v};
}

Amplitude alt_sum(const Amplitude& ca, const Amplitude& cb) {
  return {ca.u + cb.u, ca.v + cb.v};
}

double GState::norm_squared() const {
  double s = 0.0;
  for (const auto& [label, a] : amplitudes) s += a.u * a.u + a.v * a.v;
  return s;
}

GState normalize(const GState& state) {
  const double n2 = state.norm_squared();
  if (!(n2 > 0.0)) throw std::domain_error("degenerate state");
  const double inv = 1.0 / std::sqrt(n2);
  GState out = state;
  for (auto& [label, a] : out.amplitudes) {
    a.u *= inv;
    a.v *= inv;
  }
  return out;
}

namespace {

void require_normalized(const GState& state) {
  if (std::abs(state.norm_squared() - 1.0) > 1e-9)
    throw std::invalid_argument("state is not normalized");
}

}  // namespace

DensityMatrix density(const GState& state) {
  require_normalized(state);
  DensityMatrix dm;
  const auto k = static_cast<Eigen::Index>(state.amplitudes.size());
  Eigen::VectorXcd psi(k);
  Eigen::Index i = 0;
  for (const auto& [label, a] : state.amplitudes) {
    dm.labels.push_back(label);
    psi(i++) = to_complex(a);
  }
  dm.entries = psi * psi.adjoint();
  return dm;
}

bool exact_testing(const DensityMatrix& dm, double tol) {
  const Eigen::Index k = dm.entries.rows();
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      if (i != j && std::abs(dm.entries(i, j)) >= tol) return false;
  return true;
}

double ClassicalSpace::probability(const std::vector<std::string>& union_of) const {
  std::set<std::string> seen;
  double p = 0.0;
  for (const auto& label : union_of) {
    if (!seen.insert(label).second)
      throw std::invalid_argument("union members must be disjoint");
    auto it = measure.find(label);
    if (it == measure.end())
      throw std::invalid_argument("unknown event label: " + label);
    p += it->second;
  }
  return p;
}

ClassicalSpace born(const GState& state) {
  require_normalized(state);
  ClassicalSpace cs;
  for (const auto& [label, a] : state.amplitudes) {
    cs.events.push_back(label);
    cs.measure[label] = a.u * a.u + a.v * a.v;
  }
  return cs;
}

double PairSpace::norm_squared() const {
  return amps.squaredNorm();
}

ClassicalSpace classical_from_pairs(const PairSpace& ps) {
  if (std::abs(ps.norm_squared() - 1.0) > 1e-9)
    throw std::invalid_argument("pair amplitudes are not normalized");
  ClassicalSpace cs;
  for (Eigen::Index i = 0; i < ps.amps.rows(); ++i) {
    const std::string label = "a" + std::to_string(i);
    cs.events.push_back(label);
    // P(a_i) = sum_j psi(<a_i|b_j>) psi(<b_j|a_i>) with the reversed pair
    // equal to the conjugate, so each term is |amps(i, j)|^2.
    cs.measure[label] = ps.amps.row(i).squaredNorm();
  }
  return cs;
}

}  // namespace qev
