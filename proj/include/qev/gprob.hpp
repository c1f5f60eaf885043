#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qev {

// Event amplitude with a no-ordering ("stay together") component u and an
// ordering ("transition") component v. Components are unconstrained reals
// during arithmetic; unit norm is enforced only on whole states.
struct Amplitude {
  double u = 0.0;
  double v = 0.0;
};

inline std::complex<double> to_complex(const Amplitude& a) {
  return {a.u, a.v};
}

inline Amplitude from_complex(std::complex<double> c) {
  return {c.real(), c.imag()};
}

// Composition over an intermediate state: <3|1> = <3|2><2|1>.
Amplitude chain(const Amplitude& c21, const Amplitude& c32);

// Superposition of alternatives: <2|a or b> = <2|a> + <2|b>.
Amplitude alt_sum(const Amplitude& ca, const Amplitude& cb);

// Directed pair of elementary states. Reversing the direction keeps u and
// negates v.
struct EventPair {
  std::string from_label;
  std::string to_label;
  Amplitude amp;

  EventPair swapped() const {
    return {to_label, from_label, Amplitude{amp.u, -amp.v}};
  }
};

// Amplitude assignment over elementary-state labels. Labels are opaque ids;
// the map keeps them in a deterministic (sorted) order.
struct GState {
  std::map<std::string, Amplitude> amplitudes;

  double norm_squared() const;
};

// Rescales so that the squared amplitudes sum to one. Zero-norm input is an
// error ("degenerate state").
GState normalize(const GState& state);

struct DensityMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXcd entries;  // entries(i, j) = psi(a_i) * conj(psi(a_j))
};

// Outer product of a normalized state with itself.
DensityMatrix density(const GState& state);

// True iff every off-diagonal magnitude is below tol. Under this condition
// the squared amplitudes behave as classical probabilities.
bool exact_testing(const DensityMatrix& dm, double tol = 1e-9);

struct ClassicalSpace {
  std::vector<std::string> events;
  std::map<std::string, double> measure;

  // Probability of a disjoint union of labels; additive by construction.
  double probability(const std::vector<std::string>& union_of) const;
};

// Squared-amplitude measure of a normalized state.
ClassicalSpace born(const GState& state);

// Amplitudes over ordered pairs (a_i, b_j). The reversed orientation is the
// complex conjugate and is not stored separately.
struct PairSpace {
  Eigen::MatrixXcd amps;  // rows index a, columns index b

  double norm_squared() const;
};

// Unites pairs over the b index: P(a_i) = sum_j |amps(i, j)|^2. Requires
// global normalization within 1e-9.
ClassicalSpace classical_from_pairs(const PairSpace& ps);

}  // namespace qev
