#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "qev/gprob.hpp"

using namespace qev;

TEST_CASE("chain multiplies amplitudes as complex numbers") {
  Amplitude i1{0.0, 1.0};
  Amplitude r = chain(i1, i1);
  CHECK(r.u == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(r.v == doctest::Approx(0.0).epsilon(1e-15));

  Amplitude a{0.6, 0.8};
  Amplitude b{0.6, -0.8};
  Amplitude p = chain(a, b);
  CHECK(p.u == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.v == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("chain is associative and multiplicative in magnitude") {
  std::mt19937_64 rng(7u);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    Amplitude a{unif(rng), unif(rng)};
    Amplitude b{unif(rng), unif(rng)};
    Amplitude c{unif(rng), unif(rng)};
    auto lhs = to_complex(chain(chain(a, b), c));
    auto rhs = to_complex(chain(a, chain(b, c)));
    CHECK(std::abs(lhs - rhs) <= 1e-14);
    double m1 = std::abs(to_complex(chain(a, b)));
    double m2 = std::abs(to_complex(a)) * std::abs(to_complex(b));
    CHECK(std::abs(m1 - m2) <= 1e-14);
  }
}

TEST_CASE("alt_sum adds componentwise") {
  Amplitude s = alt_sum(Amplitude{1.0, 2.0}, Amplitude{3.0, -1.0});
  CHECK(s.u == 4.0);
  CHECK(s.v == 1.0);
}

TEST_CASE("swapping an event pair conjugates its amplitude") {
  EventPair p{"a", "b", Amplitude{0.3, -0.7}};
  EventPair q = p.swapped();
  CHECK(q.from_label == "b");
  CHECK(q.to_label == "a");
  CHECK(q.amp.u == 0.3);
  CHECK(q.amp.v == 0.7);
  EventPair r = q.swapped();
  CHECK(r.amp.u == p.amp.u);
  CHECK(r.amp.v == p.amp.v);
}

TEST_CASE("normalize scales a two-event state to unit norm") {
  GState g;
  g.amplitudes["a"] = Amplitude{1.0, 0.0};
  g.amplitudes["b"] = Amplitude{0.0, 1.0};
  GState n = normalize(g);
  double inv = 1.0 / std::sqrt(2.0);
  CHECK(n.amplitudes.at("a").u == doctest::Approx(inv).epsilon(1e-15));
  CHECK(n.amplitudes.at("a").v == doctest::Approx(0.0));
  CHECK(n.amplitudes.at("b").v == doctest::Approx(inv).epsilon(1e-15));
  CHECK(n.norm_squared() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("normalize rejects the zero state") {
  GState g;
  g.amplitudes["a"] = Amplitude{0.0, 0.0};
  CHECK_THROWS_WITH(normalize(g), "degenerate state");
}

TEST_CASE("density matrix is the rank-one projector of the state") {
  GState g;
  g.amplitudes["a"] = Amplitude{1.0, 0.0};
  g.amplitudes["b"] = Amplitude{0.0, 1.0};
  DensityMatrix dm = density(normalize(g));
  REQUIRE(dm.labels.size() == 2);
  CHECK(dm.entries(0, 0).real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(dm.entries(1, 1).real() == doctest::Approx(0.5).epsilon(1e-15));
  // <a| rho |b> = amp_a conj(amp_b) = (1/sqrt2)(conj(i/sqrt2)) = -i/2
  CHECK(dm.entries(0, 1).imag() == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(std::abs(dm.entries(0, 1) - std::conj(dm.entries(1, 0))) <= 1e-15);
}

TEST_CASE("exact testing detects superpositions") {
  GState pure;
  pure.amplitudes["a"] = Amplitude{1.0, 0.0};
  CHECK(exact_testing(density(normalize(pure))));

  GState mixed;
  mixed.amplitudes["a"] = Amplitude{1.0, 0.0};
  mixed.amplitudes["b"] = Amplitude{1.0, 0.0};
  CHECK_FALSE(exact_testing(density(normalize(mixed))));
}

TEST_CASE("born measure squares magnitudes and sums to one") {
  GState g;
  g.amplitudes["a"] = Amplitude{0.6, 0.0};
  g.amplitudes["b"] = Amplitude{0.0, 0.8};
  ClassicalSpace cs = born(normalize(g));
  CHECK(cs.measure.at("a") == doctest::Approx(0.36).epsilon(1e-14));
  CHECK(cs.measure.at("b") == doctest::Approx(0.64).epsilon(1e-14));
  CHECK(cs.probability({"a", "b"}) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("probability of a union requires disjoint members") {
  GState g;
  g.amplitudes["a"] = Amplitude{1.0, 0.0};
  g.amplitudes["b"] = Amplitude{1.0, 0.0};
  ClassicalSpace cs = born(normalize(g));
  CHECK_THROWS_WITH(cs.probability({"a", "a"}), "union members must be disjoint");
}

TEST_CASE("pair spaces reduce to row probabilities") {
  PairSpace ps;
  ps.amps.resize(2, 2);
  ps.amps << std::complex<double>(0.5, 0.0), std::complex<double>(0.5, 0.0),
      std::complex<double>(0.0, 0.5), std::complex<double>(0.5, 0.0);
  ClassicalSpace cs = classical_from_pairs(ps);
  CHECK(cs.measure.at("a0") == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cs.measure.at("a1") == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cs.probability({"a0", "a1"}) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("pair spaces must carry unit total weight") {
  PairSpace ps;
  ps.amps.resize(2, 2);
  ps.amps.setConstant(std::complex<double>(1.0, 0.0));
  CHECK_THROWS_WITH(classical_from_pairs(ps),
                    "pair amplitudes are not normalized");
}

TEST_CASE("random pair spaces yield additive probability measures") {
  std::mt19937_64 rng(11u);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    int rows = 2 + t % 3;
    int cols = 2 + (t / 3) % 3;
    PairSpace ps;
    ps.amps.resize(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        ps.amps(r, c) = std::complex<double>(unif(rng), unif(rng));
    ps.amps /= std::sqrt(ps.norm_squared());
    ClassicalSpace cs = classical_from_pairs(ps);
    double sum = 0.0;
    for (const auto& kv : cs.measure) {
      CHECK(kv.second >= 0.0);
      sum += kv.second;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    double p01 = cs.probability({"a0", "a1"});
    CHECK(p01 == doctest::Approx(cs.measure.at("a0") + cs.measure.at("a1"))
                     .epsilon(1e-12));
  }
}
