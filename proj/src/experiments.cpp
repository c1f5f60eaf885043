#include "qev/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "json.hpp"
#include "qev/fields.hpp"
#include "qev/gprob.hpp"
#include "qev/grassmann.hpp"
#include "qev/kernel.hpp"
#include "qev/operators.hpp"
#include "qev/pathint.hpp"
#include "qev/schrod.hpp"

namespace qev {

namespace {

constexpr double kPi = std::numbers::pi;

ParamSpec make_param(const char* name, ParamKind kind, const char* doc) {
  ParamSpec p;
  p.name = name;
  p.kind = kind;
  p.doc = doc;
  return p;
}

ParamSpec int_param(const char* name, const char* doc, long long def, double mn) {
  ParamSpec p = make_param(name, ParamKind::integer, doc);
  p.def_int = def;
  p.has_min = true;
  p.min_value = mn;
  return p;
}

ParamSpec int_param_range(const char* name, const char* doc, long long def,
                          double mn, double mx) {
  ParamSpec p = int_param(name, doc, def, mn);
  p.has_max = true;
  p.max_value = mx;
  return p;
}

ParamSpec int_required(const char* name, const char* doc, double mn) {
  ParamSpec p = make_param(name, ParamKind::integer, doc);
  p.required = true;
  p.has_min = true;
  p.min_value = mn;
  return p;
}

ParamSpec real_param(const char* name, const char* doc, double def) {
  ParamSpec p = make_param(name, ParamKind::real, doc);
  p.def_real = def;
  return p;
}

ParamSpec real_param_min(const char* name, const char* doc, double def, double mn) {
  ParamSpec p = real_param(name, doc, def);
  p.has_min = true;
  p.min_value = mn;
  return p;
}

std::vector<ExperimentSpec> build_catalog() {
  std::vector<ExperimentSpec> cat;

  cat.push_back({"gprob-born",
                 "Random-ensemble checks of the complex event algebra and the Born measure",
                 {
                     int_required("seed", "RNG seed for the random ensembles", 0),
                     int_param("triples", "random amplitude triples for the chain checks", 1000, 1),
                     int_param("states", "random states for the Born sum checks", 1000, 1),
                     int_param("pair_spaces", "random pair spaces for the measure checks", 100, 1),
                 }});

  cat.push_back({"uncertainty",
                 "Position-momentum uncertainty products for Gaussian and random states",
                 {
                     int_required("seed", "RNG seed for the random states", 0),
                     int_param("n", "grid points", 512, 8),
                     real_param_min("box_length", "periodic box length", 40.0, 1e-6),
                     real_param_min("hbar", "reduced action scale", 1.0, 1e-12),
                     real_param_min("mass", "particle mass", 1.0, 1e-12),
                     int_param("random_states", "random states for the bound check", 500, 1),
                     real_param_min("sigma_min", "smallest Gaussian width", 0.8, 1e-6),
                     real_param_min("sigma_max", "largest Gaussian width", 3.0, 1e-6),
                     int_param("sigma_count", "Gaussian widths in the sweep", 12, 2),
                 }});

  cat.push_back({"kernel-consistency",
                 "Integral-kernel evolution against the local equation over a width ladder",
                 {
                     int_param("n", "grid points", 512, 16),
                     real_param_min("box_length", "periodic box length", 8.0 * kPi, 1e-6),
                     real_param_min("mass", "target mass of the synthesized kernel", 1.0, 1e-12),
                     real_param_min("hbar", "reduced action scale", 1.0, 1e-12),
                     real_param("potential_offset", "constant potential level", 0.7),
                     real_param_min("total_time", "evolution time", 0.05, 1e-9),
                 }});

  cat.push_back({"packet-spread",
                 "Free Gaussian spreading law, norm conservation, and time-reversal return",
                 {
                     int_param("n", "grid points", 512, 8),
                     real_param_min("box_length", "periodic box length", 40.0, 1e-6),
                     real_param_min("sigma0", "initial packet width", 1.0, 1e-6),
                     real_param_min("mass", "particle mass", 1.0, 1e-12),
                     real_param_min("hbar", "reduced action scale", 1.0, 1e-12),
                     int_param("steps", "leapfrog steps to the doubling time", 10000, 10),
                 }});

  cat.push_back({"stationary-states",
                 "Dense eigen-solve of the harmonic trap and a hard-wall box",
                 {
                     int_param("n", "grid points", 512, 16),
                     real_param_min("box_length", "box length", 40.0, 1e-6),
                     real_param_min("omega", "trap frequency", 1.0, 1e-12),
                     real_param_min("mass", "particle mass", 1.0, 1e-12),
                     real_param_min("hbar", "reduced action scale", 1.0, 1e-12),
                     real_param_min("well_width", "hard-wall well width", 10.0, 1e-6),
                     int_param_range("levels", "levels to compare", 6, 2, 32),
                 }});

  cat.push_back({"ehrenfest",
                 "Expectation-value dynamics against the classical force",
                 {
                     int_param("n", "grid points", 1024, 16),
                     real_param_min("box_length", "box length", 24.0, 1e-6),
                     real_param_min("omega", "harmonic frequency", 1.0, 1e-12),
                     real_param("slope", "linear potential slope", 0.2),
                     real_param("x0", "initial packet center", 1.0),
                     real_param_min("sigma", "initial packet width", 1.0, 1e-6),
                     real_param_min("mass", "particle mass", 1.0, 1e-12),
                     real_param_min("hbar", "reduced action scale", 1.0, 1e-12),
                     int_param("steps", "leapfrog steps over one harmonic period", 50000, 100),
                     int_param("log_every", "log cadence in steps", 50, 1),
                     real_param_min("linear_time", "evolution time for the linear case", 2.0, 1e-9),
                 }});

  cat.push_back({"propagator-compare",
                 "Sliced propagators against closed-form kernels plus the semigroup defect",
                 {
                     int_param("n", "grid points", 512, 16),
                     real_param_min("box_length", "periodic box length", 8.0 * kPi, 1e-6),
                     real_param_min("omega", "harmonic frequency", 1.0, 1e-12),
                     real_param_min("mass", "particle mass", 1.0, 1e-12),
                     real_param_min("hbar", "reduced action scale", 1.0, 1e-12),
                     real_param_min("total_time", "propagation time", 1.0, 1e-9),
                     real_param_min("sigma", "initial packet width", 1.0, 1e-6),
                     int_param("semigroup_n", "grid points for the semigroup check", 256, 16),
                     real_param_min("semigroup_box", "box length for the semigroup check", 30.0, 1e-6),
                     real_param_min("semigroup_time", "half interval for the semigroup check", 1.0, 1e-9),
                 }});

  cat.push_back({"least-action",
                 "Discrete least-action paths against closed-form actions",
                 {
                     int_param("knots", "path knots including endpoints", 4001, 16),
                     real_param_min("mass", "particle mass", 1.0, 1e-12),
                     real_param_min("omega", "harmonic frequency", 1.0, 1e-12),
                     real_param("slope", "linear potential slope", 0.8),
                     real_param("x1", "start position", 0.3),
                     real_param("x2", "end position", -0.4),
                     real_param_min("total_time", "elapsed time", 1.0, 1e-9),
                 }});

  cat.push_back({"kg-modes",
                 "Scalar field modes: dispersion, ladder commutators, oscillator spectra",
                 {
                     real_param_min("mass", "field mass", 1.0, 1e-12),
                     real_param_min("box_length", "periodization length", 2.0 * kPi, 1e-6),
                     int_param_range("j_max", "largest mode index", 2, 0, 64),
                     int_param_range("cutoff", "Fock truncation level", 20, 8, 64),
                 }});

  cat.push_back({"maxwell-modes",
                 "Massless vector modes: transverse frames and oscillator spectra",
                 {
                     real_param_min("box_length", "periodization length", 2.0 * kPi, 1e-6),
                     int_param_range("cutoff", "Fock truncation level", 20, 8, 64),
                 }});

  cat.push_back({"proca-modes",
                 "Massive vector modes: full polarization frames and spectra",
                 {
                     real_param_min("mass", "field mass", 0.75, 1e-12),
                     real_param_min("box_length", "periodization length", 2.0 * kPi, 1e-6),
                     int_param_range("cutoff", "Fock truncation level", 20, 8, 64),
                 }});

  cat.push_back({"field-ccr",
                 "Lattice equal-time commutators for a three-site scalar field",
                 {
                     real_param_min("spacing", "lattice spacing", 1.0, 1e-6),
                     real_param_min("mass", "field mass", 1.0, 1e-12),
                     int_param_range("cutoff", "per-mode Fock truncation", 4, 3, 6),
                     real_param_min("dt", "stencil step for the time derivative of the field", 1e-3, 1e-12),
                 }});

  cat.push_back({"fermi-oscillator",
                 "Fermionic oscillator: ladder algebra, spectra, equations of motion",
                 {
                     real_param_min("omega", "oscillator frequency", 1.5, 1e-12),
                 }});

  cat.push_back({"dirac-modes",
                 "Two-mode Dirac-type Hamiltonian: spectra and tensor-sum structure",
                 {
                     real_param_min("omega1", "first mode frequency", 1.0, 1e-12),
                     real_param_min("omega2", "second mode frequency", 0.7, 1e-12),
                 }});

  return cat;
}

const ExperimentSpec* find_spec(const std::string& name) {
  for (const auto& s : experiment_catalog()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

void check(std::vector<Assertion>& as, const std::string& metric, double value,
           double threshold, const std::string& relation) {
  Assertion a;
  a.metric = metric;
  a.value = value;
  a.threshold = threshold;
  a.relation = relation;
  a.pass = relation == ">=" ? value >= threshold : value <= threshold;
  as.push_back(a);
}

std::string fmt_int(long long v) { return std::to_string(v); }

using Row = std::vector<std::string>;

// ---------------------------------------------------------------------------
// gprob-born

void run_gprob_born(const ExperimentConfig& cfg, std::vector<DataTable>& tables,
                    std::vector<Assertion>& as) {
  std::mt19937_64 rng(static_cast<unsigned long long>(cfg.integer("seed")));
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const long long n_triples = cfg.integer("triples");
  const long long n_states = cfg.integer("states");
  const long long n_spaces = cfg.integer("pair_spaces");

  double assoc_max = 0.0;
  double mult_max = 0.0;
  for (long long i = 0; i < n_triples; ++i) {
    Amplitude a{unif(rng), unif(rng)};
    Amplitude b{unif(rng), unif(rng)};
    Amplitude c{unif(rng), unif(rng)};
    auto left = to_complex(chain(chain(a, b), c));
    auto right = to_complex(chain(a, chain(b, c)));
    assoc_max = std::max(assoc_max, std::abs(left - right));
    double prod_mag = std::abs(to_complex(chain(a, b)));
    double mag_prod = std::abs(to_complex(a)) * std::abs(to_complex(b));
    mult_max = std::max(mult_max, std::abs(prod_mag - mag_prod));
  }

  double born_dev_max = 0.0;
  double born_add_max = 0.0;
  for (long long i = 0; i < n_states; ++i) {
    int labels = 2 + static_cast<int>(i % 5);
    GState g;
    double norm2 = 0.0;
    do {
      g.amplitudes.clear();
      for (int k = 0; k < labels; ++k) {
        Amplitude amp{unif(rng), unif(rng)};
        g.amplitudes["s" + std::to_string(k)] = amp;
      }
      norm2 = g.norm_squared();
    } while (norm2 < 1e-12);
    ClassicalSpace cs = born(normalize(g));
    double sum = 0.0;
    for (const auto& kv : cs.measure) sum += kv.second;
    born_dev_max = std::max(born_dev_max, std::abs(sum - 1.0));
    double p01 = cs.probability({"s0", "s1"});
    born_add_max = std::max(
        born_add_max,
        std::abs(p01 - (cs.measure.at("s0") + cs.measure.at("s1"))));
  }

  double pair_dev_max = 0.0;
  double min_prob = 1e300;
  for (long long i = 0; i < n_spaces; ++i) {
    int rows = 2 + static_cast<int>(i % 3);
    int cols = 2 + static_cast<int>((i / 3) % 3);
    PairSpace ps;
    double norm2 = 0.0;
    do {
      ps.amps.resize(rows, cols);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
          ps.amps(r, c) = std::complex<double>(unif(rng), unif(rng));
      norm2 = ps.norm_squared();
    } while (norm2 < 1e-12);
    ps.amps /= std::sqrt(norm2);
    ClassicalSpace cs = classical_from_pairs(ps);
    double sum = 0.0;
    for (const auto& kv : cs.measure) {
      sum += kv.second;
      min_prob = std::min(min_prob, kv.second);
    }
    pair_dev_max = std::max(pair_dev_max, std::abs(sum - 1.0));
    double p01 = cs.probability({"a0", "a1"});
    pair_dev_max = std::max(
        pair_dev_max,
        std::abs(p01 - (cs.measure.at("a0") + cs.measure.at("a1"))));
  }

  check(as, "chain_associativity_max", assoc_max, 1e-14, "<=");
  check(as, "magnitude_multiplicativity_max", mult_max, 1e-14, "<=");
  check(as, "born_sum_deviation_max", born_dev_max, 1e-12, "<=");
  check(as, "born_additivity_deviation_max", born_add_max, 1e-12, "<=");
  check(as, "pair_measure_deviation_max", pair_dev_max, 1e-12, "<=");
  check(as, "min_probability", min_prob, 0.0, ">=");

  DataTable t;
  t.metric = "summary";
  t.description = "ensemble maxima of the event-algebra deviations, dimensionless";
  t.columns = {"metric", "value"};
  t.rows = {
      Row{"triples", fmt_int(n_triples)},
      Row{"states", fmt_int(n_states)},
      Row{"pair_spaces", fmt_int(n_spaces)},
      Row{"chain_associativity_max", format_double(assoc_max)},
      Row{"magnitude_multiplicativity_max", format_double(mult_max)},
      Row{"born_sum_deviation_max", format_double(born_dev_max)},
      Row{"born_additivity_deviation_max", format_double(born_add_max)},
      Row{"pair_measure_deviation_max", format_double(pair_dev_max)},
      Row{"min_probability", format_double(min_prob)},
  };
  tables.push_back(std::move(t));
}

// ---------------------------------------------------------------------------
// uncertainty

void run_uncertainty(const ExperimentConfig& cfg, std::vector<DataTable>& tables,
                     std::vector<Assertion>& as) {
  const int n = static_cast<int>(cfg.integer("n"));
  const double box = cfg.real("box_length");
  const double hbar = cfg.real("hbar");
  const long long n_random = cfg.integer("random_states");
  const long long n_sigma = cfg.integer("sigma_count");
  const double smin = cfg.real("sigma_min");
  const double smax = cfg.real("sigma_max");
  std::mt19937_64 rng(static_cast<unsigned long long>(cfg.integer("seed")));
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  Grid1D grid(-box / 2.0, box / 2.0, n, Boundary::periodic);
  HermitianOp X = position_op(grid);
  HermitianOp P = momentum_op(grid, hbar);

  DataTable tg;
  tg.metric = "gaussians";
  tg.description =
      "Gaussian widths: sigma and deltas in box units, products in units of the action scale";
  tg.columns = {"sigma", "delta_x", "delta_p", "product", "robertson_bound", "half_hbar"};

  double gauss_margin_min = 1e300;
  double gauss_rel_max = 0.0;
  for (long long i = 0; i < n_sigma; ++i) {
    double sigma = smin + (smax - smin) * static_cast<double>(i) /
                              static_cast<double>(n_sigma - 1);
    WaveFunction psi = gaussian_packet(grid, 0.0, sigma, 0.5);
    UncertaintyBound ub = commutator_uncertainty(X, P, psi);
    double product = ub.dA * ub.dB;
    gauss_margin_min = std::min(gauss_margin_min, product - ub.bound);
    gauss_rel_max = std::max(gauss_rel_max,
                             std::abs(product - 0.5 * hbar) / (0.5 * hbar));
    tg.rows.push_back(Row{format_double(sigma), format_double(ub.dA),
                          format_double(ub.dB), format_double(product),
                          format_double(ub.bound), format_double(0.5 * hbar)});
  }

  DataTable tr;
  tr.metric = "random";
  tr.description =
      "random normalized states: deltas in box units, products in units of the action scale";
  tr.columns = {"state", "delta_x", "delta_p", "product", "robertson_bound"};

  double rand_product_min = 1e300;
  double rand_margin_min = 1e300;
  for (long long r = 0; r < n_random; ++r) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = std::complex<double>(unif(rng), unif(rng));
    WaveFunction psi{grid, v};
    psi = psi.normalized();
    UncertaintyBound ub = commutator_uncertainty(X, P, psi);
    double product = ub.dA * ub.dB;
    rand_product_min = std::min(rand_product_min, product);
    rand_margin_min = std::min(rand_margin_min, product - ub.bound);
    tr.rows.push_back(Row{fmt_int(r), format_double(ub.dA), format_double(ub.dB),
                          format_double(product), format_double(ub.bound)});
  }

  check(as, "gaussian_bound_margin_min", gauss_margin_min, -1e-9, ">=");
  check(as, "gaussian_half_hbar_rel_dev_max", gauss_rel_max, 0.01, "<=");
  check(as, "random_product_min", rand_product_min, 0.5 * hbar - 1e-9, ">=");
  check(as, "random_bound_margin_min", rand_margin_min, -1e-9, ">=");

  tables.push_back(std::move(tg));
  tables.push_back(std::move(tr));
}

// ---------------------------------------------------------------------------
// kernel-consistency

void run_kernel_consistency(const ExperimentConfig& cfg,
                            std::vector<DataTable>& tables,
                            std::vector<Assertion>& as) {
  const int n = static_cast<int>(cfg.integer("n"));
  const double box = cfg.real("box_length");
  const double mass = cfg.real("mass");
  const double hbar = cfg.real("hbar");
  const double offset = cfg.real("potential_offset");
  const double total_time = cfg.real("total_time");

  Grid1D grid(-box / 2.0, box / 2.0, n, Boundary::periodic);
  Eigen::VectorXd rv = Eigen::VectorXd::Constant(n, offset);
  WaveFunction psi0 = gaussian_packet(grid, 0.0, 1.0, 0.5);

  const std::vector<int> widths = {16, 12, 8, 4};
  TransitionKernel tightest = synthesize_kernel(grid, mass, rv, hbar, widths.back());
  double dt_bound = max_stable_dt_integral(tightest);
  long steps = static_cast<long>(std::ceil(total_time / dt_bound));
  double dt = total_time / static_cast<double>(steps);

  DataTable tl;
  tl.metric = "ladder";
  tl.description =
      "consistency deviation (max pointwise state difference) per kernel half width";
  tl.columns = {"half_width", "width", "deviation", "mass_recovered"};

  std::vector<double> devs;
  std::vector<double> ws;
  double mass_err_max = 0.0;
  double pot_err_max = 0.0;
  for (int J : widths) {
    TransitionKernel k = synthesize_kernel(grid, mass, rv, hbar, J);
    ParticleDynamics dyn = to_dynamics(k);
    mass_err_max = std::max(mass_err_max, std::abs(dyn.mass - mass) / mass);
    pot_err_max = std::max(pot_err_max, (dyn.potential - rv).cwiseAbs().maxCoeff());
    double dev = consistency_deviation(k, psi0, dt, static_cast<int>(steps));
    devs.push_back(dev);
    ws.push_back(J * grid.dx);
    tl.rows.push_back(Row{fmt_int(J), format_double(J * grid.dx),
                          format_double(dev), format_double(dyn.mass)});
  }

  double lw_mean = 0.0, le_mean = 0.0;
  for (size_t i = 0; i < ws.size(); ++i) {
    lw_mean += std::log(ws[i]);
    le_mean += std::log(devs[i]);
  }
  lw_mean /= static_cast<double>(ws.size());
  le_mean /= static_cast<double>(ws.size());
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < ws.size(); ++i) {
    double dw = std::log(ws[i]) - lw_mean;
    num += dw * (std::log(devs[i]) - le_mean);
    den += dw * dw;
  }
  double order = num / den;

  double ratio_max = 0.0;
  for (size_t i = 1; i < devs.size(); ++i)
    ratio_max = std::max(ratio_max, devs[i] / devs[i - 1]);

  check(as, "mass_roundtrip_rel_error_max", mass_err_max, 1e-10, "<=");
  check(as, "potential_roundtrip_error_max", pot_err_max, 1e-10, "<=");
  check(as, "consistency_order", order, 2.0, ">=");
  check(as, "deviation_decrease_ratio_max", ratio_max, 0.95, "<=");

  DataTable ts;
  ts.metric = "summary";
  ts.description = "width-ladder fit and round-trip errors, dimensionless";
  ts.columns = {"metric", "value"};
  ts.rows = {
      Row{"steps", fmt_int(steps)},
      Row{"dt", format_double(dt)},
      Row{"consistency_order", format_double(order)},
      Row{"mass_roundtrip_rel_error_max", format_double(mass_err_max)},
      Row{"potential_roundtrip_error_max", format_double(pot_err_max)},
      Row{"deviation_decrease_ratio_max", format_double(ratio_max)},
  };
  tables.push_back(std::move(tl));
  tables.push_back(std::move(ts));
}

// ---------------------------------------------------------------------------
// packet-spread

double packet_width(const WaveFunction& psi) {
  double mx = 0.0, mx2 = 0.0;
  for (int i = 0; i < psi.grid.n; ++i) {
    double p = std::norm(psi.samples(i)) * psi.grid.dx;
    double x = psi.grid.x(i);
    mx += x * p;
    mx2 += x * x * p;
  }
  return std::sqrt(std::max(0.0, mx2 - mx * mx));
}

void run_packet_spread(const ExperimentConfig& cfg, std::vector<DataTable>& tables,
                       std::vector<Assertion>& as) {
  const int n = static_cast<int>(cfg.integer("n"));
  const double box = cfg.real("box_length");
  const double sigma0 = cfg.real("sigma0");
  const double mass = cfg.real("mass");
  const double hbar = cfg.real("hbar");
  const long long steps = cfg.integer("steps");

  Grid1D grid(-box / 2.0, box / 2.0, n, Boundary::periodic);
  Potential zero = potential_from_function(grid, [](double) { return 0.0; });
  WaveFunction psi0 = gaussian_packet(grid, 0.0, sigma0, 0.0);

  const double t_double = 2.0 * std::sqrt(3.0) * mass * sigma0 * sigma0 / hbar;
  const double dt = t_double / static_cast<double>(steps);
  const long seg = std::max(1LL, steps / 10);
  const int segments = 10;

  DataTable tw;
  tw.metric = "width";
  tw.description = "packet width against the free spreading law, box units";
  tw.columns = {"t", "width", "predicted"};

  auto predicted = [&](double t) {
    double s = hbar * t / (2.0 * mass * sigma0 * sigma0);
    return sigma0 * std::sqrt(1.0 + s * s);
  };

  tw.rows.push_back(Row{format_double(0.0), format_double(packet_width(psi0)),
                        format_double(predicted(0.0))});

  EvolConfig ec;
  ec.hbar = hbar;
  ec.mass = mass;
  ec.dt = dt;
  ec.steps = seg;
  ec.log_every = std::max(1L, seg / 10);

  WaveFunction psi = psi0;
  double norm_drift = 0.0;
  double t = 0.0;
  for (int s = 0; s < segments; ++s) {
    EvolveResult r = evolve(psi, zero, ec);
    psi = r.final;
    t += dt * static_cast<double>(seg);
    for (const auto& row : r.log)
      norm_drift = std::max(norm_drift, std::abs(row.norm - 1.0));
    tw.rows.push_back(Row{format_double(t), format_double(packet_width(psi)),
                          format_double(predicted(t))});
  }

  double width_rel_err =
      std::abs(packet_width(psi) - predicted(t)) / predicted(t);

  EvolConfig back = ec;
  back.steps = seg * segments;
  WaveFunction rev{grid, psi.samples.conjugate()};
  EvolveResult rr = evolve(rev, zero, back);
  for (const auto& row : rr.log)
    norm_drift = std::max(norm_drift, std::abs(row.norm - 1.0));
  double reversal_err =
      (rr.final.samples.conjugate() - psi0.samples).cwiseAbs().maxCoeff();

  check(as, "norm_drift_max", norm_drift, 1e-6, "<=");
  check(as, "width_rel_error", width_rel_err, 0.01, "<=");
  check(as, "time_reversal_error", reversal_err, 1e-8, "<=");

  DataTable ts;
  ts.metric = "summary";
  ts.description = "spreading and reversibility deviations, dimensionless";
  ts.columns = {"metric", "value"};
  ts.rows = {
      Row{"doubling_time", format_double(t_double)},
      Row{"dt", format_double(dt)},
      Row{"norm_drift_max", format_double(norm_drift)},
      Row{"width_rel_error", format_double(width_rel_err)},
      Row{"time_reversal_error", format_double(reversal_err)},
  };
  tables.push_back(std::move(tw));
  tables.push_back(std::move(ts));
}

// ---------------------------------------------------------------------------
// stationary-states

void run_stationary_states(const ExperimentConfig& cfg,
                           std::vector<DataTable>& tables,
                           std::vector<Assertion>& as) {
  const int n = static_cast<int>(cfg.integer("n"));
  const double box = cfg.real("box_length");
  const double omega = cfg.real("omega");
  const double mass = cfg.real("mass");
  const double hbar = cfg.real("hbar");
  const double well = cfg.real("well_width");
  const int levels = std::min(static_cast<int>(cfg.integer("levels")), n / 2);

  Grid1D grid(-box / 2.0, box / 2.0, n, Boundary::vanishing);

  Potential harm = potential_from_function(
      grid, [=](double x) { return 0.5 * mass * omega * omega * x * x; });
  StationaryStates sh = stationary(harm, mass, hbar);

  DataTable th;
  th.metric = "harmonic";
  th.description = "harmonic trap levels, energies in units of the action scale times frequency";
  th.columns = {"level", "energy", "expected"};
  double spacing_dev = 0.0;
  for (int k = 0; k < levels; ++k) {
    th.rows.push_back(Row{fmt_int(k), format_double(sh.energies(k)),
                          format_double(hbar * omega * (k + 0.5))});
    if (k + 1 < levels) {
      double gap = sh.energies(k + 1) - sh.energies(k);
      spacing_dev = std::max(spacing_dev,
                             std::abs(gap - hbar * omega) / (hbar * omega));
    }
  }
  double ground_dev = std::abs(sh.energies(0) - 0.5 * hbar * omega) /
                      (0.5 * hbar * omega);

  double ortho_dev = 0.0;
  for (int i = 0; i < levels; ++i) {
    WaveFunction wi = sh.state(i);
    for (int j = 0; j <= i; ++j) {
      std::complex<double> g = inner(wi, sh.state(j));
      double target = i == j ? 1.0 : 0.0;
      ortho_dev = std::max(ortho_dev, std::abs(g - target));
    }
  }

  Potential wall = hard_wall(grid, -well / 2.0, well / 2.0, mass, hbar);
  StationaryStates sw = stationary(wall, mass, hbar);

  DataTable tb;
  tb.metric = "well";
  tb.description = "hard-wall box levels and their square-law ratios, dimensionless";
  tb.columns = {"level", "energy", "ratio_to_ground", "square_law"};
  double square_dev = 0.0;
  for (int k = 0; k < levels; ++k) {
    double ratio = sw.energies(k) / sw.energies(0);
    double law = static_cast<double>((k + 1) * (k + 1));
    square_dev = std::max(square_dev, std::abs(ratio - law) / law);
    tb.rows.push_back(Row{fmt_int(k), format_double(sw.energies(k)),
                          format_double(ratio), format_double(law)});
  }

  check(as, "harmonic_spacing_rel_dev_max", spacing_dev, 0.01, "<=");
  check(as, "harmonic_ground_rel_dev", ground_dev, 0.01, "<=");
  check(as, "orthonormality_dev_max", ortho_dev, 1e-8, "<=");
  check(as, "well_square_law_rel_dev_max", square_dev, 0.01, "<=");

  tables.push_back(std::move(th));
  tables.push_back(std::move(tb));
}

// ---------------------------------------------------------------------------
// ehrenfest

void run_ehrenfest(const ExperimentConfig& cfg, std::vector<DataTable>& tables,
                   std::vector<Assertion>& as) {
  const int n = static_cast<int>(cfg.integer("n"));
  const double box = cfg.real("box_length");
  const double omega = cfg.real("omega");
  const double slope = cfg.real("slope");
  const double x0 = cfg.real("x0");
  const double sigma = cfg.real("sigma");
  const double mass = cfg.real("mass");
  const double hbar = cfg.real("hbar");
  const long long steps = cfg.integer("steps");
  const long long log_every = cfg.integer("log_every");
  const double linear_time = cfg.real("linear_time");

  Grid1D grid(-box / 2.0, box / 2.0, n, Boundary::vanishing);
  WaveFunction psi0 = gaussian_packet(grid, x0, sigma, 0.0);

  Potential harm = potential_from_function(
      grid, [=](double x) { return 0.5 * mass * omega * omega * x * x; });
  const double period = 2.0 * kPi / omega;
  EvolConfig ec;
  ec.hbar = hbar;
  ec.mass = mass;
  ec.dt = period / static_cast<double>(steps);
  ec.steps = steps;
  ec.log_every = log_every;
  EvolveResult rh = evolve(psi0, harm, ec);
  double res_h = ehrenfest_residual(rh, harm);

  Potential lin =
      potential_from_function(grid, [=](double x) { return slope * x; });
  EvolConfig el = ec;
  el.steps = static_cast<long>(std::ceil(linear_time / ec.dt));
  el.dt = linear_time / static_cast<double>(el.steps);
  EvolveResult rl = evolve(psi0, lin, el);
  double res_l = ehrenfest_residual(rl, lin);

  double norm_drift = 0.0;
  for (const auto& row : rh.log)
    norm_drift = std::max(norm_drift, std::abs(row.norm - 1.0));
  for (const auto& row : rl.log)
    norm_drift = std::max(norm_drift, std::abs(row.norm - 1.0));

  check(as, "harmonic_residual", res_h, 1e-3, "<=");
  check(as, "linear_residual", res_l, 1e-3, "<=");
  check(as, "norm_drift_max", norm_drift, 1e-6, "<=");

  DataTable tt;
  tt.metric = "trajectory";
  tt.description =
      "harmonic-case expectation values: time, position, momentum in natural units";
  tt.columns = {"t", "mean_x", "mean_p"};
  for (const auto& row : rh.log)
    tt.rows.push_back(Row{format_double(row.t), format_double(row.mean_x),
                          format_double(row.mean_p)});

  DataTable ts;
  ts.metric = "summary";
  ts.description = "largest force-law residuals, natural units";
  ts.columns = {"metric", "value"};
  ts.rows = {
      Row{"harmonic_residual", format_double(res_h)},
      Row{"linear_residual", format_double(res_l)},
      Row{"norm_drift_max", format_double(norm_drift)},
  };
  tables.push_back(std::move(tt));
  tables.push_back(std::move(ts));
}

// ---------------------------------------------------------------------------
// propagator-compare

void run_propagator_compare(const ExperimentConfig& cfg,
                            std::vector<DataTable>& tables,
                            std::vector<Assertion>& as) {
  const int n = static_cast<int>(cfg.integer("n"));
  const double box = cfg.real("box_length");
  const double omega = cfg.real("omega");
  const double mass = cfg.real("mass");
  const double hbar = cfg.real("hbar");
  const double total_time = cfg.real("total_time");
  const double sigma = cfg.real("sigma");

  Grid1D grid(-box / 2.0, box / 2.0, n, Boundary::periodic);
  Potential harm = potential_from_function(
      grid, [=](double x) { return 0.5 * mass * omega * omega * x * x; });
  Potential zero = potential_from_function(grid, [](double) { return 0.0; });
  WaveFunction psi0 = gaussian_packet(grid, 0.5, sigma, 1.0);

  PropagatorMatrix ref_h = harmonic_kernel(grid, mass, omega, hbar, 0.0, total_time);
  WaveFunction psi_ref_h = ref_h.apply(psi0);
  double scale_h = psi_ref_h.samples.cwiseAbs().maxCoeff();

  DataTable tc;
  tc.metric = "convergence";
  tc.description =
      "harmonic propagator against the closed-form kernel per slice count, dimensionless";
  tc.columns = {"slices", "rel_error", "unitarity_defect"};

  const std::vector<int> slice_ladder = {64, 128, 256};
  std::vector<double> herr;
  double unit_max = 0.0;
  for (int s : slice_ladder) {
    PropagatorMatrix K = propagator(harm, mass, hbar, 0.0, total_time, s);
    double e = (K.apply(psi0).samples - psi_ref_h.samples).cwiseAbs().maxCoeff() /
               scale_h;
    double u = unitarity_defect(K);
    unit_max = std::max(unit_max, u);
    herr.push_back(e);
    tc.rows.push_back(Row{fmt_int(s), format_double(e), format_double(u)});
  }
  double hratio_max = 0.0;
  for (size_t i = 1; i < herr.size(); ++i)
    hratio_max = std::max(hratio_max, herr[i] / herr[i - 1]);

  PropagatorMatrix ref_f = free_particle_kernel(grid, mass, hbar, 0.0, total_time);
  WaveFunction psi_ref_f = ref_f.apply(psi0);
  double scale_f = psi_ref_f.samples.cwiseAbs().maxCoeff();
  PropagatorMatrix Kf = propagator(zero, mass, hbar, 0.0, total_time, 256);
  double free_err =
      (Kf.apply(psi0).samples - psi_ref_f.samples).cwiseAbs().maxCoeff() / scale_f;
  unit_max = std::max(unit_max, unitarity_defect(Kf));

  DataTable tf;
  tf.metric = "free";
  tf.description = "free propagator against the closed-form kernel, dimensionless";
  tf.columns = {"slices", "rel_error"};
  tf.rows.push_back(Row{fmt_int(256), format_double(free_err)});

  const int sgn = static_cast<int>(cfg.integer("semigroup_n"));
  const double sgbox = cfg.real("semigroup_box");
  const double sgt = cfg.real("semigroup_time");
  Grid1D sgrid(-sgbox / 2.0, sgbox / 2.0, sgn, Boundary::periodic);
  Potential sgharm = potential_from_function(
      sgrid, [=](double x) { return 0.5 * mass * omega * omega * x * x; });

  DataTable tsg;
  tsg.metric = "semigroup";
  tsg.description =
      "composition defect of the sliced harmonic propagator per slice count, dimensionless";
  tsg.columns = {"slices", "defect"};
  std::vector<double> defects;
  for (int s : {32, 64, 128}) {
    double d = semigroup_defect(sgharm, mass, hbar, sgt, s);
    defects.push_back(d);
    tsg.rows.push_back(Row{fmt_int(s), format_double(d)});
  }
  double sg_ratio_max = 0.0;
  for (size_t i = 1; i < defects.size(); ++i)
    sg_ratio_max = std::max(sg_ratio_max, defects[i] / defects[i - 1]);

  check(as, "free_rel_error", free_err, 1e-3, "<=");
  check(as, "harmonic_rel_error_final", herr.back(), 1e-4, "<=");
  check(as, "harmonic_error_decrease_ratio_max", hratio_max, 0.5, "<=");
  // Each slice transfer is exactly unitary, so the defect is the roundoff
  // accumulated across the composition; it scales with n and the slice count.
  check(as, "unitarity_defect_max", unit_max, 1e-11, "<=");
  check(as, "semigroup_decrease_ratio_max", sg_ratio_max, 0.9, "<=");

  tables.push_back(std::move(tc));
  tables.push_back(std::move(tf));
  tables.push_back(std::move(tsg));
}

// ---------------------------------------------------------------------------
// least-action

void run_least_action(const ExperimentConfig& cfg, std::vector<DataTable>& tables,
                      std::vector<Assertion>& as) {
  const int knots = static_cast<int>(cfg.integer("knots"));
  const double mass = cfg.real("mass");
  const double omega = cfg.real("omega");
  const double slope = cfg.real("slope");
  const double x1 = cfg.real("x1");
  const double x2 = cfg.real("x2");
  const double T = cfg.real("total_time");

  Grid1D dummy(-2.0, 2.0, 16, Boundary::vanishing);
  Potential zero = potential_from_function(dummy, [](double) { return 0.0; });
  Potential harm = potential_from_function(
      dummy, [=](double x) { return 0.5 * mass * omega * omega * x * x; });
  Potential ramp =
      potential_from_function(dummy, [=](double x) { return slope * x; });

  struct Case {
    const char* name;
    const Potential* R;
    double reference;
  };
  const double d = x2 - x1;
  std::vector<Case> cases = {
      {"free", &zero, free_action(mass, x1, x2, T)},
      {"harmonic", &harm, harmonic_action(mass, omega, x1, x2, T)},
      {"ballistic", &ramp,
       mass * d * d / (2.0 * T) - slope * (x1 + x2) * T / 2.0 -
           slope * slope * T * T * T / (24.0 * mass)},
  };

  DataTable ts;
  ts.metric = "summary";
  ts.description = "discrete actions against closed forms, natural units";
  ts.columns = {"case", "action", "reference", "abs_error", "el_residual", "iterations"};

  DataTable tp;
  tp.metric = "paths";
  tp.description = "least-action paths at the knots, positions in box units";
  tp.columns = {"t", "free", "harmonic", "ballistic"};

  std::vector<ActionResult> results;
  double action_err_max = 0.0;
  double el_max = 0.0;
  for (const auto& c : cases) {
    ActionResult r = least_action_path(*c.R, mass, x1, x2, 0.0, T, knots);
    double err = std::abs(r.action - c.reference);
    action_err_max = std::max(action_err_max, err);
    el_max = std::max(el_max, r.el_residual);
    ts.rows.push_back(Row{c.name, format_double(r.action),
                          format_double(c.reference), format_double(err),
                          format_double(r.el_residual), fmt_int(r.iterations)});
    results.push_back(std::move(r));
  }
  for (int i = 0; i < knots; ++i) {
    tp.rows.push_back(Row{format_double(results[0].times(i)),
                          format_double(results[0].path(i)),
                          format_double(results[1].path(i)),
                          format_double(results[2].path(i))});
  }

  check(as, "action_abs_error_max", action_err_max, 1e-6, "<=");
  check(as, "el_residual_max", el_max, 1e-6, "<=");

  tables.push_back(std::move(ts));
  tables.push_back(std::move(tp));
}

// ---------------------------------------------------------------------------
// mode experiments (scalar, massless vector, massive vector)

double ladder_commutator_dev(double omega, int cutoff) {
  Eigen::MatrixXcd A = ladder(omega, cutoff);
  Eigen::MatrixXcd C = A * A.adjoint() - A.adjoint() * A;
  C.diagonal().array() -= 2.0 * omega;
  return C.topLeftCorner(cutoff, cutoff).cwiseAbs().maxCoeff();
}

double mode_spectrum_dev(double omega, int cutoff, int levels,
                         DataTable* table, const std::string& tag) {
  Spectrum sp = spectrum_of(single_mode_hamiltonian(omega, cutoff));
  double dev = 0.0;
  for (int k = 0; k < levels; ++k) {
    double expected = (k + 0.5) * omega;
    dev = std::max(dev, std::abs(sp.eigenvalues(k) - expected));
    if (table)
      table->rows.push_back(Row{tag, fmt_int(k), format_double(sp.eigenvalues(k)),
                                format_double(expected)});
  }
  return dev;
}

void run_kg_modes(const ExperimentConfig& cfg, std::vector<DataTable>& tables,
                  std::vector<Assertion>& as) {
  const double mass = cfg.real("mass");
  const double L = cfg.real("box_length");
  const int j_max = static_cast<int>(cfg.integer("j_max"));
  const int cutoff = static_cast<int>(cfg.integer("cutoff"));

  std::vector<Eigen::Vector3d> ks;
  for (int j = -j_max; j <= j_max; ++j)
    ks.push_back(Eigen::Vector3d(2.0 * kPi * j / L, 0.0, 0.0));
  std::vector<Mode> modes = build_modes(FieldKind::klein_gordon, mass, ks);

  DataTable td;
  td.metric = "dispersion";
  td.description = "scalar dispersion per mode index, natural units";
  td.columns = {"j", "kx", "omega", "expected"};

  DataTable tsp;
  tsp.metric = "spectrum";
  tsp.description =
      "single-mode oscillator levels per mode index, energies in natural units";
  tsp.columns = {"j", "level", "energy", "expected"};

  DataTable tcm;
  tcm.metric = "commutator";
  tcm.description =
      "worst ladder commutator deviation from twice the frequency, sub-cutoff block";
  tcm.columns = {"j", "omega", "max_deviation"};

  double disp_dev = 0.0;
  double comm_max = 0.0;
  double spec_max = 0.0;
  double ground_err = 0.0;
  for (size_t m = 0; m < modes.size(); ++m) {
    int j = -j_max + static_cast<int>(m);
    double k = modes[m].k.x();
    double expected = std::sqrt(k * k + mass * mass);
    disp_dev = std::max(disp_dev, std::abs(modes[m].omega - expected));
    td.rows.push_back(Row{fmt_int(j), format_double(k),
                          format_double(modes[m].omega), format_double(expected)});

    double cd = ladder_commutator_dev(modes[m].omega, cutoff);
    comm_max = std::max(comm_max, cd);
    tcm.rows.push_back(
        Row{fmt_int(j), format_double(modes[m].omega), format_double(cd)});

    Spectrum sp = spectrum_of(single_mode_hamiltonian(modes[m].omega, cutoff));
    for (int lev = 0; lev <= 5; ++lev) {
      double exp_e = (lev + 0.5) * modes[m].omega;
      spec_max = std::max(spec_max, std::abs(sp.eigenvalues(lev) - exp_e));
      tsp.rows.push_back(Row{fmt_int(j), fmt_int(lev),
                             format_double(sp.eigenvalues(lev)),
                             format_double(exp_e)});
    }
    if (j == 0)
      ground_err = std::abs(sp.eigenvalues(0) - 0.5 * modes[m].omega);
  }

  check(as, "dispersion_dev_max", disp_dev, 1e-12, "<=");
  check(as, "ladder_commutator_max", comm_max, 1e-12, "<=");
  check(as, "spectrum_deviation_max", spec_max, 1e-6, "<=");
  check(as, "ground_energy_error", ground_err, 1e-6, "<=");

  tables.push_back(std::move(td));
  tables.push_back(std::move(tsp));
  tables.push_back(std::move(tcm));
}

std::vector<Eigen::Vector3d> vector_field_wavevectors(double L, bool with_zero) {
  std::vector<Eigen::Vector3d> ks = {
      Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0),
      Eigen::Vector3d(1, 1, 0), Eigen::Vector3d(0, 0, 2)};
  for (auto& k : ks) k *= 2.0 * kPi / L;
  if (with_zero) ks.insert(ks.begin(), Eigen::Vector3d::Zero());
  return ks;
}

void run_maxwell_modes(const ExperimentConfig& cfg, std::vector<DataTable>& tables,
                       std::vector<Assertion>& as) {
  const double L = cfg.real("box_length");
  const int cutoff = static_cast<int>(cfg.integer("cutoff"));

  std::vector<Eigen::Vector3d> ks = vector_field_wavevectors(L, false);
  std::vector<Mode> modes = build_modes(FieldKind::maxwell, 0.0, ks);

  DataTable tp;
  tp.metric = "polarizations";
  tp.description =
      "transverse frame per mode: wave vector, frequency, polarization, overlap with k";
  tp.columns = {"kx", "ky", "kz", "omega", "pol", "ex", "ey", "ez", "k_dot_e"};

  double trans_max = 0.0;
  double comm_max = 0.0;
  for (const auto& m : modes) {
    double kd = std::abs(m.k.dot(m.polarization));
    trans_max = std::max(trans_max, kd);
    comm_max = std::max(comm_max, ladder_commutator_dev(m.omega, cutoff));
    tp.rows.push_back(Row{format_double(m.k.x()), format_double(m.k.y()),
                          format_double(m.k.z()), format_double(m.omega),
                          fmt_int(m.polarization_index),
                          format_double(m.polarization.x()),
                          format_double(m.polarization.y()),
                          format_double(m.polarization.z()), format_double(kd)});
  }

  double frame_dev = 0.0;
  for (const auto& k : ks) {
    Eigen::Vector3d e1, e2;
    polarization_frame(k, e1, e2);
    frame_dev = std::max(frame_dev, std::abs(e1.dot(e1) - 1.0));
    frame_dev = std::max(frame_dev, std::abs(e2.dot(e2) - 1.0));
    frame_dev = std::max(frame_dev, std::abs(e1.dot(e2)));
  }

  DataTable tsp;
  tsp.metric = "spectrum";
  tsp.description =
      "single-mode oscillator levels per wave vector and polarization, natural units";
  tsp.columns = {"mode", "level", "energy", "expected"};
  double spec_max = 0.0;
  for (size_t m = 0; m < modes.size(); ++m) {
    spec_max = std::max(
        spec_max, mode_spectrum_dev(modes[m].omega, cutoff, 6, &tsp,
                                    fmt_int(static_cast<long long>(m))));
  }

  check(as, "transversality_max", trans_max, 0.0, "<=");
  check(as, "frame_orthonormality_dev_max", frame_dev, 1e-15, "<=");
  check(as, "ladder_commutator_max", comm_max, 1e-12, "<=");
  check(as, "spectrum_deviation_max", spec_max, 1e-6, "<=");

  tables.push_back(std::move(tp));
  tables.push_back(std::move(tsp));
}

void run_proca_modes(const ExperimentConfig& cfg, std::vector<DataTable>& tables,
                     std::vector<Assertion>& as) {
  const double mass = cfg.real("mass");
  const double L = cfg.real("box_length");
  const int cutoff = static_cast<int>(cfg.integer("cutoff"));

  std::vector<Eigen::Vector3d> ks = vector_field_wavevectors(L, true);
  std::vector<Mode> modes = build_modes(FieldKind::proca, mass, ks);

  DataTable td;
  td.metric = "dispersion";
  td.description = "massive vector dispersion per wave vector, natural units";
  td.columns = {"kx", "ky", "kz", "omega", "expected"};
  double disp_dev = 0.0;
  for (const auto& k : ks) {
    double expected = std::sqrt(k.squaredNorm() + mass * mass);
    double om = 0.0;
    for (const auto& m : modes)
      if ((m.k - k).norm() == 0.0) om = m.omega;
    disp_dev = std::max(disp_dev, std::abs(om - expected));
    td.rows.push_back(Row{format_double(k.x()), format_double(k.y()),
                          format_double(k.z()), format_double(om),
                          format_double(expected)});
  }

  DataTable tcp;
  tcp.metric = "completeness";
  tcp.description =
      "polarization frame completeness per wave vector: worst entry of the frame sum minus identity";
  tcp.columns = {"kx", "ky", "kz", "completeness_dev"};
  double frame_dev = 0.0;
  double long_align_min = 1.0;
  for (const auto& k : ks) {
    Eigen::Matrix3d S = Eigen::Matrix3d::Zero();
    for (const auto& m : modes)
      if ((m.k - k).norm() == 0.0)
        S += m.polarization * m.polarization.transpose();
    double dev = (S - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    frame_dev = std::max(frame_dev, dev);
    tcp.rows.push_back(Row{format_double(k.x()), format_double(k.y()),
                           format_double(k.z()), format_double(dev)});
    if (k.norm() > 0.0) {
      for (const auto& m : modes)
        if ((m.k - k).norm() == 0.0 && m.polarization_index == 2)
          long_align_min = std::min(
              long_align_min, std::abs(m.polarization.dot(k.normalized())));
    }
  }

  double comm_max = 0.0;
  DataTable tsp;
  tsp.metric = "spectrum";
  tsp.description =
      "single-mode oscillator levels per wave vector and polarization, natural units";
  tsp.columns = {"mode", "level", "energy", "expected"};
  double spec_max = 0.0;
  for (size_t m = 0; m < modes.size(); ++m) {
    comm_max = std::max(comm_max, ladder_commutator_dev(modes[m].omega, cutoff));
    spec_max = std::max(
        spec_max, mode_spectrum_dev(modes[m].omega, cutoff, 6, &tsp,
                                    fmt_int(static_cast<long long>(m))));
  }

  check(as, "dispersion_dev_max", disp_dev, 1e-12, "<=");
  check(as, "frame_completeness_dev_max", frame_dev, 1e-14, "<=");
  check(as, "longitudinal_alignment_min", long_align_min, 1.0 - 1e-12, ">=");
  check(as, "ladder_commutator_max", comm_max, 1e-12, "<=");
  check(as, "spectrum_deviation_max", spec_max, 1e-6, "<=");

  tables.push_back(std::move(td));
  tables.push_back(std::move(tcp));
  tables.push_back(std::move(tsp));
}

// ---------------------------------------------------------------------------
// field-ccr

void run_field_ccr(const ExperimentConfig& cfg, std::vector<DataTable>& tables,
                   std::vector<Assertion>& as) {
  const double spacing = cfg.real("spacing");
  const double mass = cfg.real("mass");
  const int cutoff = static_cast<int>(cfg.integer("cutoff"));
  const double dt = cfg.real("dt");

  const int sites = 3;
  const double L = sites * spacing;
  std::vector<Eigen::Vector3d> ks;
  for (int j = -1; j <= 1; ++j)
    ks.push_back(Eigen::Vector3d(2.0 * kPi * j / L, 0.0, 0.0));
  std::vector<Mode> modes = build_modes(FieldKind::klein_gordon, mass, ks);

  FieldAssembly f = assemble_field(FieldKind::klein_gordon, modes, cutoff,
                                   sites, spacing);
  CcrReport rep = ccr_report(f);

  double vac = vacuum_phi_squared(f);
  double vac_expected = 0.0;
  for (const auto& m : modes) vac_expected += 1.0 / (2.0 * m.omega * L);
  double vac_err = std::abs(vac - vac_expected);

  double pi_dev = pi_heisenberg_deviation(f, dt);
  double heis = heisenberg_residual(mass, 12, dt);

  check(as, "ccr_deviation_max", rep.max_ccr_deviation, 1e-8, "<=");
  check(as, "phi_phi_commutator_max", rep.max_phi_phi, 1e-10, "<=");
  check(as, "pi_pi_commutator_max", rep.max_pi_pi, 1e-10, "<=");
  check(as, "basis_incomplete_flag", rep.incomplete_basis ? 1.0 : 0.0, 0.0, "<=");
  check(as, "vacuum_phi_squared_error", vac_err, 1e-12, "<=");
  check(as, "pi_derivative_deviation", pi_dev, 1e-10, "<=");
  check(as, "heisenberg_residual", heis, 1e-6, "<=");

  DataTable tm;
  tm.metric = "modes";
  tm.description = "lattice mode set, wave numbers and frequencies in natural units";
  tm.columns = {"kx", "omega"};
  for (const auto& m : modes)
    tm.rows.push_back(Row{format_double(m.k.x()), format_double(m.omega)});

  DataTable ts;
  ts.metric = "summary";
  ts.description = "equal-time commutator deviations on the sub-cutoff block, dimensionless";
  ts.columns = {"metric", "value"};
  ts.rows = {
      Row{"ccr_deviation_max", format_double(rep.max_ccr_deviation)},
      Row{"phi_phi_commutator_max", format_double(rep.max_phi_phi)},
      Row{"pi_pi_commutator_max", format_double(rep.max_pi_pi)},
      Row{"basis_incomplete_flag", format_double(rep.incomplete_basis ? 1.0 : 0.0)},
      Row{"vacuum_phi_squared", format_double(vac)},
      Row{"vacuum_phi_squared_expected", format_double(vac_expected)},
      Row{"pi_derivative_deviation", format_double(pi_dev)},
      Row{"heisenberg_residual", format_double(heis)},
  };
  tables.push_back(std::move(tm));
  tables.push_back(std::move(ts));
}

// ---------------------------------------------------------------------------
// fermi-oscillator

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::MatrixXcd anti(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return a * b + b * a;
}

void run_fermi_oscillator(const ExperimentConfig& cfg,
                          std::vector<DataTable>& tables,
                          std::vector<Assertion>& as) {
  const double omega = cfg.real("omega");
  FermiOscillator osc = fermi_oscillator(omega);
  const FermionMode& m = osc.mode;
  const long dim = m.F.rows();
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);

  double nilpotency = std::max({max_abs(m.F * m.F), max_abs(m.F_dag * m.F_dag),
                                max_abs(m.E * m.E), max_abs(m.E_dag * m.E_dag)});
  double pair_dev = std::max(max_abs(anti(m.F_dag, m.F) - 2.0 * omega * id),
                             max_abs(anti(m.E_dag, m.E) - 2.0 * omega * id));
  double mixed_dev =
      std::max({max_abs(anti(m.F, m.E)), max_abs(anti(m.F, m.E_dag)),
                max_abs(anti(m.F_dag, m.E)), max_abs(anti(m.F_dag, m.E_dag))});

  Eigen::VectorXd num_spec = real_spectrum_of(m.F_dag * m.F);
  Eigen::VectorXd num_expected(4);
  num_expected << 0.0, 0.0, 2.0 * omega, 2.0 * omega;
  double num_err = (num_spec - num_expected).cwiseAbs().maxCoeff();

  Eigen::VectorXd h_spec = real_spectrum_of(osc.hamiltonian);
  Eigen::VectorXd h_expected(4);
  h_expected << -omega, 0.0, 0.0, omega;
  double h_err = (h_spec - h_expected).cwiseAbs().maxCoeff();

  ThetaCoefficients tc;
  tc.c00 = 1.0;
  tc.c40 = omega * omega;
  double theta_err = max_abs(hamiltonian_from_theta(tc, 2) - osc.hamiltonian);

  GElement fv = qev::apply(m.F, osc.vacuum);
  double vac_err = fv.coeffs.cwiseAbs().maxCoeff();

  GOperator L0 = left_multiply_op(2, 0);
  Eigen::MatrixXcd hl = osc.hamiltonian * L0 - L0 * osc.hamiltonian;
  Eigen::MatrixXcd hhl = osc.hamiltonian * hl - hl * osc.hamiltonian;
  double eom_err = max_abs(hhl - omega * omega * L0);

  Eigen::MatrixXcd W = symmetrizing_metric(osc.hamiltonian);
  double grading_err =
      max_abs(W * osc.hamiltonian - osc.hamiltonian.adjoint() * W);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(osc.hamiltonian);
  Eigen::MatrixXcd V = es.eigenvectors();
  Eigen::MatrixXcd Ft = V.inverse() * m.F * V;
  double fmax = max_abs(Ft);
  double bohr_err = 0.0;
  for (long i = 0; i < dim; ++i) {
    for (long j = 0; j < dim; ++j) {
      if (std::abs(Ft(i, j)) > 1e-8 * fmax) {
        double gap =
            std::abs(es.eigenvalues()(i).real() - es.eigenvalues()(j).real());
        bohr_err = std::max(bohr_err, std::abs(gap - omega));
      }
    }
  }

  check(as, "nilpotency_max", nilpotency, 0.0, "<=");
  check(as, "pair_anticommutator_error", pair_dev, 1e-14, "<=");
  check(as, "mixed_anticommutator_max", mixed_dev, 1e-14, "<=");
  check(as, "number_spectrum_error", num_err, 1e-12, "<=");
  check(as, "hamiltonian_spectrum_error", h_err, 1e-12, "<=");
  check(as, "theta_construction_error", theta_err, 0.0, "<=");
  check(as, "vacuum_annihilation", vac_err, 0.0, "<=");
  check(as, "eom_error", eom_err, 1e-12, "<=");
  check(as, "grading_hermiticity", grading_err, 1e-12, "<=");
  check(as, "bohr_frequency_error", bohr_err, 1e-10, "<=");

  DataTable tsp;
  tsp.metric = "spectrum";
  tsp.description =
      "sorted eigenvalues of the oscillator and of the number-like product, natural units";
  tsp.columns = {"index", "hamiltonian", "number_product"};
  for (int i = 0; i < 4; ++i)
    tsp.rows.push_back(
        Row{fmt_int(i), format_double(h_spec(i)), format_double(num_spec(i))});

  DataTable tch;
  tch.metric = "checks";
  tch.description = "algebraic deviations of the fermionic ladder, dimensionless";
  tch.columns = {"metric", "value"};
  tch.rows = {
      Row{"nilpotency_max", format_double(nilpotency)},
      Row{"pair_anticommutator_error", format_double(pair_dev)},
      Row{"mixed_anticommutator_max", format_double(mixed_dev)},
      Row{"number_spectrum_error", format_double(num_err)},
      Row{"hamiltonian_spectrum_error", format_double(h_err)},
      Row{"theta_construction_error", format_double(theta_err)},
      Row{"vacuum_annihilation", format_double(vac_err)},
      Row{"eom_error", format_double(eom_err)},
      Row{"grading_hermiticity", format_double(grading_err)},
      Row{"bohr_frequency_error", format_double(bohr_err)},
  };
  tables.push_back(std::move(tsp));
  tables.push_back(std::move(tch));
}

// ---------------------------------------------------------------------------
// dirac-modes

void run_dirac_modes(const ExperimentConfig& cfg, std::vector<DataTable>& tables,
                     std::vector<Assertion>& as) {
  const double w1 = cfg.real("omega1");
  const double w2 = cfg.real("omega2");

  auto single_expected = [](double w) {
    Eigen::VectorXd e(4);
    e << -2.0 * w, 0.0, 0.0, 2.0 * w;
    return e;
  };

  DiracModeResult d1 = dirac_mode_hamiltonian({w1});
  DiracModeResult d2 = dirac_mode_hamiltonian({w2});
  double single_err =
      std::max((d1.spectrum - single_expected(w1)).cwiseAbs().maxCoeff(),
               (d2.spectrum - single_expected(w2)).cwiseAbs().maxCoeff());

  DiracModeResult dp = dirac_mode_hamiltonian({w1, w2});
  std::vector<double> sums;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      sums.push_back(single_expected(w1)(i) + single_expected(w2)(j));
  std::sort(sums.begin(), sums.end());
  double tensor_err = 0.0;
  for (size_t i = 0; i < sums.size(); ++i)
    tensor_err = std::max(tensor_err,
                          std::abs(dp.spectrum(static_cast<long>(i)) - sums[i]));

  FermionMode ma = fermion_mode(2, 0, w1);
  FermionMode mb = fermion_mode(2, 1, w2);
  long dim = ma.F.rows();
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  double same_dev = std::max(max_abs(anti(ma.F_dag, ma.F) - 2.0 * w1 * id),
                             max_abs(anti(mb.F_dag, mb.F) - 2.0 * w2 * id));
  double cross_dev =
      std::max({max_abs(anti(ma.F_dag, mb.F)), max_abs(anti(ma.F, mb.F)),
                max_abs(anti(ma.F_dag, mb.E)), max_abs(anti(ma.E, mb.E))});

  check(as, "single_label_spectrum_error", single_err, 1e-12, "<=");
  check(as, "tensor_sum_error", tensor_err, 1e-12, "<=");
  check(as, "same_label_anticommutator_error", same_dev, 1e-12, "<=");
  check(as, "cross_label_anticommutator_max", cross_dev, 1e-12, "<=");
  check(as, "indefinite_flag_single", (d1.spectrum_indefinite && d2.spectrum_indefinite) ? 1.0 : 0.0, 1.0, ">=");
  check(as, "indefinite_flag_pair", dp.spectrum_indefinite ? 1.0 : 0.0, 1.0, ">=");

  DataTable tsp;
  tsp.metric = "spectrum";
  tsp.description =
      "sorted eigenvalues of the mode Hamiltonians against the expected values, natural units";
  tsp.columns = {"case", "index", "eigenvalue", "expected"};
  for (int i = 0; i < 4; ++i)
    tsp.rows.push_back(Row{"single1", fmt_int(i), format_double(d1.spectrum(i)),
                           format_double(single_expected(w1)(i))});
  for (int i = 0; i < 4; ++i)
    tsp.rows.push_back(Row{"single2", fmt_int(i), format_double(d2.spectrum(i)),
                           format_double(single_expected(w2)(i))});
  for (size_t i = 0; i < sums.size(); ++i)
    tsp.rows.push_back(Row{"pair", fmt_int(static_cast<long long>(i)),
                           format_double(dp.spectrum(static_cast<long>(i))),
                           format_double(sums[i])});
  tables.push_back(std::move(tsp));
}

// ---------------------------------------------------------------------------
// rendering and dispatch

std::string render_csv(const DataTable& t) {
  std::string out = "# " + t.description + "\n";
  for (size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ",";
    out += t.columns[c];
  }
  out += "\n";
  for (const auto& row : t.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += ",";
      out += row[c];
    }
    out += "\n";
  }
  return out;
}

bool numeric_token(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(v);
}

std::string json_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  out += "\"";
  return out;
}

std::string render_json(const DataTable& t) {
  std::string out = "{\n  \"metric\": " + json_quote(t.metric) +
                    ",\n  \"description\": " + json_quote(t.description) +
                    ",\n  \"columns\": [";
  for (size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ", ";
    out += json_quote(t.columns[c]);
  }
  out += "],\n  \"rows\": [\n";
  for (size_t r = 0; r < t.rows.size(); ++r) {
    out += "    [";
    for (size_t c = 0; c < t.rows[r].size(); ++c) {
      if (c) out += ", ";
      const std::string& cell = t.rows[r][c];
      out += numeric_token(cell) ? cell : json_quote(cell);
    }
    out += r + 1 < t.rows.size() ? "],\n" : "]\n";
  }
  out += "  ]\n}\n";
  return out;
}

}  // namespace

const std::vector<ExperimentSpec>& experiment_catalog() {
  static const std::vector<ExperimentSpec> cat = build_catalog();
  return cat;
}

long long ExperimentConfig::integer(const std::string& name) const {
  return ints.at(name);
}

double ExperimentConfig::real(const std::string& name) const {
  return reals.at(name);
}

const std::string& ExperimentConfig::text(const std::string& name) const {
  return texts.at(name);
}

bool RunReport::all_passed() const {
  for (const auto& a : assertions)
    if (!a.pass) return false;
  return true;
}

std::vector<std::string> RunReport::failed_metrics() const {
  std::vector<std::string> out;
  for (const auto& a : assertions)
    if (!a.pass) out.push_back(a.metric);
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ExperimentConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
  }
  if (!j.is_object())
    throw ConfigError("configuration root must be a JSON object");

  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key != "experiment" && key != "parameters" && key != "output_dir" &&
        key != "format")
      throw ConfigError("unknown top-level key '" + key + "'");
  }

  if (!j.contains("experiment"))
    throw ConfigError("missing required key 'experiment'");
  if (!j["experiment"].is_string())
    throw ConfigError("key 'experiment' must be a string");
  const std::string name = j["experiment"].get<std::string>();
  const ExperimentSpec* spec = find_spec(name);
  if (!spec) throw ConfigError("unknown experiment '" + name + "'");

  ExperimentConfig cfg;
  cfg.experiment = name;
  for (const auto& p : spec->params) {
    switch (p.kind) {
      case ParamKind::integer:
        cfg.ints[p.name] = p.def_int;
        break;
      case ParamKind::real:
        cfg.reals[p.name] = p.def_real;
        break;
      case ParamKind::text:
        cfg.texts[p.name] = p.def_text;
        break;
    }
  }

  std::set<std::string> provided;
  if (j.contains("parameters")) {
    if (!j["parameters"].is_object())
      throw ConfigError("key 'parameters' must be an object");
    for (const auto& item : j["parameters"].items()) {
      const std::string& key = item.key();
      const ParamSpec* ps = nullptr;
      for (const auto& p : spec->params)
        if (p.name == key) ps = &p;
      if (!ps)
        throw ConfigError("unknown parameter '" + key + "' for experiment '" +
                          name + "'");
      const auto& val = item.value();
      double numeric = 0.0;
      switch (ps->kind) {
        case ParamKind::integer: {
          if (!val.is_number_integer())
            throw ConfigError("parameter '" + key + "' expects an integer");
          long long v = val.get<long long>();
          cfg.ints[key] = v;
          numeric = static_cast<double>(v);
          break;
        }
        case ParamKind::real: {
          if (!val.is_number())
            throw ConfigError("parameter '" + key + "' expects a real number");
          double v = val.get<double>();
          cfg.reals[key] = v;
          numeric = v;
          break;
        }
        case ParamKind::text: {
          if (!val.is_string())
            throw ConfigError("parameter '" + key + "' expects a string");
          cfg.texts[key] = val.get<std::string>();
          break;
        }
      }
      if (ps->kind != ParamKind::text) {
        if (ps->has_min && numeric < ps->min_value)
          throw ConfigError("parameter '" + key + "' must be at least " +
                            format_double(ps->min_value));
        if (ps->has_max && numeric > ps->max_value)
          throw ConfigError("parameter '" + key + "' must be at most " +
                            format_double(ps->max_value));
      }
      provided.insert(key);
    }
  }

  for (const auto& p : spec->params) {
    if (p.required && provided.find(p.name) == provided.end())
      throw ConfigError("missing required parameter '" + p.name +
                        "' for experiment '" + name + "'");
  }

  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string())
      throw ConfigError("key 'output_dir' must be a string");
    cfg.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("format")) {
    if (!j["format"].is_string())
      throw ConfigError("key 'format' must be a string");
    cfg.format = j["format"].get<std::string>();
    if (cfg.format != "csv" && cfg.format != "json")
      throw ConfigError("format must be \"csv\" or \"json\"");
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("cannot read configuration file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentSpec* spec = find_spec(cfg.experiment);
  if (!spec) throw ConfigError("unknown experiment '" + cfg.experiment + "'");

  RunReport rep;
  rep.experiment = cfg.experiment;
  for (const auto& p : spec->params) {
    std::string rendered;
    switch (p.kind) {
      case ParamKind::integer:
        rendered = fmt_int(cfg.ints.at(p.name));
        break;
      case ParamKind::real:
        rendered = format_double(cfg.reals.at(p.name));
        break;
      case ParamKind::text:
        rendered = cfg.texts.at(p.name);
        break;
    }
    rep.parameter_echo.emplace_back(p.name, rendered);
  }

  std::vector<DataTable> tables;
  if (cfg.experiment == "gprob-born") {
    run_gprob_born(cfg, tables, rep.assertions);
  } else if (cfg.experiment == "uncertainty") {
    run_uncertainty(cfg, tables, rep.assertions);
  } else if (cfg.experiment == "kernel-consistency") {
    run_kernel_consistency(cfg, tables, rep.assertions);
  } else if (cfg.experiment == "packet-spread") {
    run_packet_spread(cfg, tables, rep.assertions);
  } else if (cfg.experiment == "stationary-states") {
    run_stationary_states(cfg, tables, rep.assertions);
  } else if (cfg.experiment == "ehrenfest") {
    run_ehrenfest(cfg, tables, rep.assertions);
  } else if (cfg.experiment == "propagator-compare") {
    run_propagator_compare(cfg, tables, rep.assertions);
  } else if (cfg.experiment == "least-action") {
    run_least_action(cfg, tables, rep.assertions);
  } else if (cfg.experiment == "kg-modes") {
    run_kg_modes(cfg, tables, rep.assertions);
  } else if (cfg.experiment == "maxwell-modes") {
    run_maxwell_modes(cfg, tables, rep.assertions);
  } else if (cfg.experiment == "proca-modes") {
    run_proca_modes(cfg, tables, rep.assertions);
  } else if (cfg.experiment == "field-ccr") {
    run_field_ccr(cfg, tables, rep.assertions);
  } else if (cfg.experiment == "fermi-oscillator") {
    run_fermi_oscillator(cfg, tables, rep.assertions);
  } else if (cfg.experiment == "dirac-modes") {
    run_dirac_modes(cfg, tables, rep.assertions);
  }

  namespace fs = std::filesystem;
  fs::path dir(cfg.output_dir.empty() ? "." : cfg.output_dir);
  fs::create_directories(dir);
  const std::string ext = cfg.format == "json" ? ".json" : ".csv";
  for (const auto& t : tables) {
    fs::path file = dir / (cfg.experiment + "-" + t.metric + ext);
    std::ofstream out(file, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot write output file '" + file.string() + "'");
    out << (cfg.format == "json" ? render_json(t) : render_csv(t));
    if (!out.good())
      throw std::runtime_error("failed while writing '" + file.string() + "'");
    rep.files.push_back(file.string());
  }

  const auto t1 = std::chrono::steady_clock::now();
  rep.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  return rep;
}

}  // namespace qev
