// Acceptance gate: one criterion per numbered block, each printing a single
// [PASS] line on success. Any violated requirement prints [FAIL] with the
// offending file and line and exits nonzero. Criteria 1 to 7 drive the
// library directly; criterion 8 drives the installed command-line tool.
//
// Usage: acceptance <cli-binary> <configs-dir>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qev/fields.hpp"
#include "qev/gprob.hpp"
#include "qev/grassmann.hpp"
#include "qev/kernel.hpp"
#include "qev/operators.hpp"
#include "qev/pathint.hpp"
#include "qev/schrod.hpp"

#define REQUIRE(cond, msg)                                                      \
    do {                                                                        \
        if (!(cond)) {                                                          \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg \
                      << "\n";                                                  \
            std::exit(1);                                                       \
        }                                                                       \
    } while (0)

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void pass(const std::string& name, Clock::time_point t0, double budget) {
    double sec = seconds_since(t0);
    REQUIRE(sec < budget,
            name << " exceeded its runtime budget: " << sec << " s >= " << budget << " s");
    std::cout << "[PASS] " << name << " (" << sec << " s)\n";
}

double packet_width(const qev::WaveFunction& psi) {
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < psi.grid.n; ++i) {
        double p = std::norm(psi.samples(i)) * psi.grid.dx;
        double x = psi.grid.x(i);
        m1 += x * p;
        m2 += x * x * p;
    }
    return std::sqrt(m2 - m1 * m1);
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------- criterion 1

void criterion_event_algebra() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> u(-2.0, 2.0);

    double assoc_max = 0.0, mult_max = 0.0;
    for (int i = 0; i < 1000; ++i) {
        qev::Amplitude a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
        auto left = qev::to_complex(qev::chain(qev::chain(a, b), c));
        auto right = qev::to_complex(qev::chain(a, qev::chain(b, c)));
        assoc_max = std::max(assoc_max, std::abs(left - right));
        double mag = std::abs(qev::to_complex(qev::chain(a, b)));
        double prod = std::abs(qev::to_complex(a)) * std::abs(qev::to_complex(b));
        mult_max = std::max(mult_max, std::abs(mag - prod));
    }
    REQUIRE(assoc_max <= 1e-14, "chain associativity deviation " << assoc_max);
    REQUIRE(mult_max <= 1e-14, "magnitude multiplicativity deviation " << mult_max);

    for (int trial = 0; trial < 100; ++trial) {
        qev::GState st;
        int labels = 3 + trial % 6;
        for (int j = 0; j < labels; ++j)
            st.amplitudes["s" + std::to_string(j)] = qev::Amplitude{u(rng), u(rng)};
        qev::ClassicalSpace cs = qev::born(qev::normalize(st));
        double total = 0.0;
        for (const auto& kv : cs.measure) {
            REQUIRE(kv.second >= 0.0, "negative born weight");
            total += kv.second;
        }
        REQUIRE(std::abs(total - 1.0) <= 1e-12, "born sum deviates by " << total - 1.0);
        double pair = cs.probability({cs.events[0], cs.events[1]});
        double sum = cs.measure.at(cs.events[0]) + cs.measure.at(cs.events[1]);
        REQUIRE(std::abs(pair - sum) <= 1e-12, "born additivity violated");
    }

    for (int trial = 0; trial < 100; ++trial) {
        qev::PairSpace ps;
        ps.amps = Eigen::MatrixXcd(3, 4);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 4; ++j) ps.amps(i, j) = {u(rng), u(rng)};
        ps.amps /= std::sqrt(ps.norm_squared());
        qev::ClassicalSpace cs = qev::classical_from_pairs(ps);
        double total = 0.0;
        for (const auto& kv : cs.measure) {
            REQUIRE(kv.second >= 0.0, "negative pair-union weight");
            total += kv.second;
        }
        REQUIRE(std::abs(total - 1.0) <= 1e-12, "pair measure total " << total);
        double unioned = cs.probability({"a0", "a2"});
        double sum = cs.measure.at("a0") + cs.measure.at("a2");
        REQUIRE(std::abs(unioned - sum) <= 1e-12, "pair measure not additive");
    }

    pass("event algebra: chaining, born measures, pair-space measures", t0, 1.0);
}

// ---------------------------------------------------------------- criterion 2

void criterion_operator_suite() {
    auto t0 = Clock::now();

    // Plane-wave momentum error halves in second order under dx halving.
    const double kwave = 2.0;
    auto plane_error = [&](int n) {
        qev::Grid1D g(-M_PI, M_PI, n, qev::Boundary::periodic);
        qev::WaveFunction psi;
        psi.grid = g;
        psi.samples = Eigen::VectorXcd(n);
        for (int i = 0; i < n; ++i)
            psi.samples(i) = std::exp(std::complex<double>(0.0, kwave * g.x(i)));
        psi.samples /= std::sqrt(g.length());
        double p = qev::expectation(qev::momentum_op(g), psi);
        return std::abs(p - kwave);
    };
    double ratio = plane_error(64) / plane_error(128);
    REQUIRE(ratio > 3.2 && ratio < 4.8,
            "momentum convergence ratio " << ratio << " outside 4 +- 20%");

    // Gaussians saturate the uncertainty product at hbar/2 within 1%.
    qev::Grid1D gg(-20.0, 20.0, 512, qev::Boundary::periodic);
    qev::HermitianOp X = qev::position_op(gg);
    qev::HermitianOp P = qev::momentum_op(gg);
    for (double sigma : {1.2, 1.5, 2.0, 2.5}) {
        qev::WaveFunction psi = qev::gaussian_packet(gg, 0.0, sigma, 0.5);
        qev::UncertaintyBound ub = qev::commutator_uncertainty(X, P, psi);
        double product = ub.dA * ub.dB;
        REQUIRE(std::abs(product - 0.5) <= 0.005,
                "gaussian sigma " << sigma << " product " << product);
    }

    // 500 random states respect the lower bound hbar/2 - 1e-9.
    qev::Grid1D gr(-20.0, 20.0, 256, qev::Boundary::periodic);
    qev::HermitianOp Xr = qev::position_op(gr);
    qev::HermitianOp Pr = qev::momentum_op(gr);
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int s = 0; s < 500; ++s) {
        qev::WaveFunction psi;
        psi.grid = gr;
        psi.samples = Eigen::VectorXcd(gr.n);
        for (int i = 0; i < gr.n; ++i) psi.samples(i) = {u(rng), u(rng)};
        psi = psi.normalized();
        qev::UncertaintyBound ub = qev::commutator_uncertainty(Xr, Pr, psi);
        REQUIRE(ub.dA * ub.dB >= 0.5 - 1e-9,
                "random state " << s << " product " << ub.dA * ub.dB);
    }

    // Periodic generator spectrum is the integer ladder up to grid error.
    qev::PeriodicGenerator gen = qev::periodic_generator(64, 2.0 * M_PI, 1.0);
    const double dtheta = 2.0 * M_PI / 64.0;
    for (int m = 0; m <= 3; ++m) {
        for (double target : {double(m), double(-m)}) {
            double lattice = (m == 0) ? 0.0 : std::sin(target * dtheta) / dtheta;
            double best = 1e300;
            for (int i = 0; i < gen.spectrum.eigenvalues.size(); ++i)
                best = std::min(best,
                                std::abs(gen.spectrum.eigenvalues(i) - lattice));
            REQUIRE(best <= 1e-9, "ladder point " << target << " missing");
            double grid_error = std::pow(std::abs(target), 3) * dtheta * dtheta / 6.0;
            REQUIRE(std::abs(lattice - target) <= grid_error * 1.2 + 1e-9,
                    "ladder point " << target << " beyond grid error");
        }
    }

    pass("operator suite: momentum convergence, uncertainty floor, generator ladder",
         t0, 5.0);
}

// ---------------------------------------------------------------- criterion 3

void criterion_kernel_roundtrip() {
    auto t0 = Clock::now();
    qev::Grid1D g(-4.0 * M_PI, 4.0 * M_PI, 512, qev::Boundary::periodic);

    // Synthesis followed by moment extraction recovers the mass exactly.
    const double mass = 1.7, hbar = 0.8;
    Eigen::VectorXd pot(g.n);
    for (int i = 0; i < g.n; ++i) pot(i) = 0.3 * std::sin(g.x(i)) + 0.7;
    qev::TransitionKernel k = qev::synthesize_kernel(g, mass, pot, hbar, 6);
    qev::ParticleDynamics dyn = qev::to_dynamics(k);
    REQUIRE(std::abs(dyn.mass - mass) / mass <= 1e-10,
            "mass round trip error " << std::abs(dyn.mass - mass) / mass);
    REQUIRE((dyn.potential - pot).cwiseAbs().maxCoeff() <= 1e-10,
            "potential round trip error");

    // Integral-versus-PDE deviation decreases with kernel width at order >= 2.
    Eigen::VectorXd flat = Eigen::VectorXd::Constant(g.n, 0.7);
    qev::WaveFunction psi0 = qev::gaussian_packet(g, 0.0, 1.0, 0.5);
    std::vector<int> widths = {16, 12, 8, 4};
    qev::TransitionKernel narrow = qev::synthesize_kernel(g, 1.0, flat, 1.0, 4);
    double dt = qev::max_stable_dt_integral(narrow);
    int steps = static_cast<int>(std::ceil(0.05 / dt));
    std::vector<double> devs;
    for (int J : widths) {
        qev::TransitionKernel kj = qev::synthesize_kernel(g, 1.0, flat, 1.0, J);
        devs.push_back(qev::consistency_deviation(kj, psi0, dt, steps));
    }
    // Least-squares slope of log(dev) against log(width).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < widths.size(); ++i) {
        double x = std::log(widths[i] * g.dx), y = std::log(devs[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double n = static_cast<double>(widths.size());
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    REQUIRE(slope >= 2.0, "consistency order " << slope << " below 2");

    pass("kernel extraction: mass round trip, integral-PDE consistency order",
         t0, 30.0);
}

// ---------------------------------------------------------------- criterion 4

void criterion_schrodinger() {
    auto t0 = Clock::now();

    // Free-packet width law and norm conservation over ten thousand steps.
    {
        qev::Grid1D g(-20.0, 20.0, 512, qev::Boundary::periodic);
        qev::Potential zero = qev::potential_from_function(g, [](double) { return 0.0; });
        qev::WaveFunction psi0 = qev::gaussian_packet(g, 0.0, 1.0, 0.0);
        const double doubling = 2.0 * std::sqrt(3.0);  // sigma(t) = 2 sigma0
        qev::EvolConfig cfg;
        cfg.dt = doubling / 10000.0;
        cfg.steps = 10000;
        cfg.log_every = 1000;
        qev::EvolveResult run = qev::evolve(psi0, zero, cfg);
        for (const auto& row : run.log)
            REQUIRE(std::abs(row.norm - 1.0) < 1e-6,
                    "norm drift " << row.norm - 1.0 << " at t " << row.t);
        double width = packet_width(run.final);
        REQUIRE(std::abs(width - 2.0) / 2.0 <= 0.01,
                "width " << width << " at the doubling time");
    }

    // Harmonic level spacing within 1%.
    {
        qev::Grid1D g(-15.0, 15.0, 300, qev::Boundary::vanishing);
        qev::Potential well =
            qev::potential_from_function(g, [](double x) { return 0.5 * x * x; });
        qev::StationaryStates ss = qev::stationary(well, 1.0, 1.0);
        REQUIRE(std::abs(ss.energies(0) - 0.5) <= 0.005, "ground level " << ss.energies(0));
        for (int k = 0; k + 1 < 7; ++k) {
            double gap = ss.energies(k + 1) - ss.energies(k);
            REQUIRE(std::abs(gap - 1.0) <= 0.01,
                    "level spacing " << gap << " at k " << k);
        }
    }

    // Ehrenfest residual under a quadratic potential over one period. The
    // residual floor scales as dx^2, hence the tight box.
    {
        qev::Grid1D g(-12.0, 12.0, 1024, qev::Boundary::vanishing);
        qev::Potential well =
            qev::potential_from_function(g, [](double x) { return 0.5 * x * x; });
        qev::WaveFunction psi0 = qev::gaussian_packet(g, 1.0, 1.0, 0.0);
        qev::EvolConfig cfg;
        cfg.dt = 2.0 * M_PI / 50000.0;
        cfg.steps = 50000;
        cfg.log_every = 50;
        qev::EvolveResult run = qev::evolve(psi0, well, cfg);
        double residual = qev::ehrenfest_residual(run, well);
        REQUIRE(residual < 1e-3, "ehrenfest residual " << residual);
    }

    // Complex conjugation reverses the evolution to 1e-8.
    {
        qev::Grid1D g(-10.0, 10.0, 256, qev::Boundary::periodic);
        qev::Potential well =
            qev::potential_from_function(g, [](double x) { return 0.5 * x * x; });
        qev::WaveFunction psi0 = qev::gaussian_packet(g, 1.0, 1.0, 0.0);
        qev::EvolConfig cfg;
        cfg.dt = 2e-4;
        cfg.steps = 5000;
        cfg.log_every = 1000;
        qev::EvolveResult fwd = qev::evolve(psi0, well, cfg);
        qev::WaveFunction mirrored = fwd.final;
        mirrored.samples = mirrored.samples.conjugate();
        qev::EvolveResult back = qev::evolve(mirrored, well, cfg);
        double err =
            (back.final.samples.conjugate() - psi0.samples).cwiseAbs().maxCoeff();
        REQUIRE(err < 1e-8, "time reversal error " << err);
    }

    pass("schrodinger evolution: norms, width law, spectra, ehrenfest, reversal",
         t0, 30.0);
}

// ---------------------------------------------------------------- criterion 5

void criterion_path_integral() {
    auto t0 = Clock::now();

    // Sliced free propagator against the closed-form kernel.
    {
        qev::Grid1D g(-4.0 * M_PI, 4.0 * M_PI, 512, qev::Boundary::periodic);
        qev::Potential zero = qev::potential_from_function(g, [](double) { return 0.0; });
        qev::WaveFunction psi0 = qev::gaussian_packet(g, 0.5, 1.0, 1.0);
        qev::PropagatorMatrix sliced = qev::propagator(zero, 1.0, 1.0, 0.0, 1.0, 256);
        qev::PropagatorMatrix exact = qev::free_particle_kernel(g, 1.0, 1.0, 0.0, 1.0);
        qev::WaveFunction a = sliced.apply(psi0);
        qev::WaveFunction b = exact.apply(psi0);
        double scale = b.samples.cwiseAbs().maxCoeff();
        double err = (a.samples - b.samples).cwiseAbs().maxCoeff() / scale;
        REQUIRE(err < 1e-3, "free propagator relative error " << err);
    }

    // Composition defect shrinks as the slicing refines.
    {
        qev::Grid1D g(-15.0, 15.0, 512, qev::Boundary::periodic);
        qev::Potential well =
            qev::potential_from_function(g, [](double x) { return 0.5 * x * x; });
        double d32 = qev::semigroup_defect(well, 1.0, 1.0, 0.5, 32);
        double d64 = qev::semigroup_defect(well, 1.0, 1.0, 0.5, 64);
        double d128 = qev::semigroup_defect(well, 1.0, 1.0, 0.5, 128);
        REQUIRE(d64 < d32 && d128 < d64,
                "semigroup defects " << d32 << " " << d64 << " " << d128
                                     << " not decreasing");
    }

    // Discrete least action reproduces the harmonic closed form.
    {
        qev::Grid1D g(-2.0, 2.0, 16, qev::Boundary::vanishing);
        qev::Potential well =
            qev::potential_from_function(g, [](double x) { return 0.5 * x * x; });
        qev::ActionResult res =
            qev::least_action_path(well, 1.0, 0.3, -0.4, 0.0, 1.0, 4001);
        double ref = qev::harmonic_action(1.0, 1.0, 0.3, -0.4, 1.0);
        REQUIRE(std::abs(res.action - ref) <= 1e-6,
                "harmonic action error " << std::abs(res.action - ref));
        REQUIRE(res.el_residual <= 1e-6, "euler-lagrange residual " << res.el_residual);
    }

    pass("path integral: free kernel, semigroup refinement, least action", t0, 60.0);
}

// ---------------------------------------------------------------- criterion 6

void criterion_bosonic_fields() {
    auto t0 = Clock::now();
    using Eigen::Vector3d;

    // Ladder commutator normalization 2 omega for every field kind.
    std::vector<std::vector<qev::Mode>> families;
    families.push_back(qev::build_modes(
        qev::FieldKind::klein_gordon, 1.0,
        {Vector3d(-1, 0, 0), Vector3d(0, 0, 0), Vector3d(1, 0, 0)}));
    families.push_back(qev::build_modes(
        qev::FieldKind::maxwell, 0.0,
        {Vector3d(1, 0, 0), Vector3d(0, 1, 0), Vector3d(0, 0, 2)}));
    families.push_back(qev::build_modes(
        qev::FieldKind::proca, 0.75,
        {Vector3d(1, 0, 0), Vector3d(0, 1, 0), Vector3d(0, 0, 2), Vector3d(0, 0, 0)}));
    const int cutoff = 12;
    for (const auto& family : families) {
        for (const auto& m : family) {
            Eigen::MatrixXcd A = qev::ladder(m.omega, cutoff);
            Eigen::MatrixXcd C = A * A.adjoint() - A.adjoint() * A;
            C -= 2.0 * m.omega *
                 Eigen::MatrixXcd::Identity(cutoff + 1, cutoff + 1);
            REQUIRE(max_abs(C.topLeftCorner(cutoff, cutoff)) <= 1e-12,
                    "ladder commutator deviates at omega " << m.omega);
        }
    }

    // Maxwell transversality holds exactly in floating point.
    for (const auto& m : families[1])
        REQUIRE(m.k.dot(m.polarization) == 0.0, "maxwell mode not transverse");

    // Single-mode spectrum is (n + 1/2) omega below the cutoff.
    {
        Eigen::MatrixXcd H = qev::single_mode_hamiltonian(1.0, 20);
        qev::Spectrum spec = qev::spectrum_of(H);
        for (int level = 0; level <= 5; ++level)
            REQUIRE(std::abs(spec.eigenvalues(level) - (level + 0.5)) <= 1e-6,
                    "oscillator level " << level << " off by "
                                        << spec.eigenvalues(level) - (level + 0.5));
    }

    // Equal-time commutators on a three-site lattice with a full mode set.
    {
        const double dx = 1.0;
        const double L = 3.0 * dx;
        std::vector<Vector3d> ks;
        for (int j = -1; j <= 1; ++j)
            ks.push_back(Vector3d(2.0 * M_PI * j / L, 0.0, 0.0));
        auto modes = qev::build_modes(qev::FieldKind::klein_gordon, 1.0, ks);
        qev::FieldAssembly f =
            qev::assemble_field(qev::FieldKind::klein_gordon, modes, 4, 3, dx);
        qev::CcrReport rep = qev::ccr_report(f);
        REQUIRE(!rep.incomplete_basis, "three-mode basis flagged incomplete");
        REQUIRE(rep.max_ccr_deviation <= 1e-8,
                "field-momentum commutator deviation " << rep.max_ccr_deviation);
        REQUIRE(rep.max_phi_phi <= 1e-10, "field-field commutator nonzero");
        REQUIRE(rep.max_pi_pi <= 1e-10, "momentum-momentum commutator nonzero");
    }

    // Heisenberg second derivative closes the oscillator equation of motion.
    {
        double residual = qev::heisenberg_residual(1.0, 12);
        REQUIRE(residual < 1e-6, "heisenberg residual " << residual);
    }

    pass("bosonic fields: ladders, spectra, lattice commutators, mode motion",
         t0, 60.0);
}

// ---------------------------------------------------------------- criterion 7

void criterion_grassmann() {
    auto t0 = Clock::now();
    const double omega = 1.5;
    qev::FermiOscillator osc = qev::fermi_oscillator(omega);
    const qev::FermionMode& m = osc.mode;
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(4, 4);

    REQUIRE(max_abs(m.F * m.F) == 0.0, "F squared is nonzero");
    REQUIRE(max_abs(m.F_dag * m.F_dag) == 0.0, "F dagger squared is nonzero");
    REQUIRE(max_abs(m.F * m.E + m.E * m.F) <= 1e-14, "mixed anticommutator nonzero");
    REQUIRE(max_abs(m.F_dag * m.F + m.F * m.F_dag - 2.0 * omega * id) <= 1e-14,
            "F anticommutator misses 2 omega");

    Eigen::VectorXd nspec = qev::real_spectrum_of(m.F_dag * m.F);
    Eigen::VectorXd nref(4);
    nref << 0.0, 0.0, 2.0 * omega, 2.0 * omega;
    REQUIRE((nspec - nref).cwiseAbs().maxCoeff() <= 1e-12,
            "number spectrum misses {0, 2 omega}");

    qev::DiracModeResult pair = qev::dirac_mode_hamiltonian({1.0, 0.7});
    std::vector<double> sums;
    for (double a : {-2.0, 0.0, 0.0, 2.0})
        for (double b : {-1.4, 0.0, 0.0, 1.4}) sums.push_back(a + b);
    std::sort(sums.begin(), sums.end());
    for (int i = 0; i < 16; ++i)
        REQUIRE(std::abs(pair.spectrum(i) - sums[static_cast<size_t>(i)]) <= 1e-12,
                "pair spectrum entry " << i << " off the tensor sum");

    qev::GOperator L0 = qev::left_multiply_op(2, 0);
    Eigen::MatrixXcd inner = osc.hamiltonian * L0 - L0 * osc.hamiltonian;
    Eigen::MatrixXcd outer = osc.hamiltonian * inner - inner * osc.hamiltonian;
    REQUIRE(max_abs(outer - omega * omega * L0) <= 1e-12,
            "operator equation of motion violated");

    pass("grassmann sector: exact algebra, spectra, tensor sums, mode motion",
         t0, 5.0);
}

// ---------------------------------------------------------------- criterion 8

struct CmdResult {
    int status = -1;
    std::string output;
    double seconds = 0.0;
};

CmdResult run_cmd(const std::string& cmd) {
    CmdResult r;
    auto t0 = Clock::now();
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr, "popen failed for: " << cmd);
    char buf[4096];
    while (fgets(buf, sizeof buf, pipe) != nullptr) r.output += buf;
    int rc = pclose(pipe);
    r.seconds = seconds_since(t0);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

std::string quoted(const std::string& s) { return "'" + s + "'"; }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_cli(const std::string& cli, const std::string& configs) {
    namespace fs = std::filesystem;
    auto t0 = Clock::now();

    const std::vector<std::string> names = {
        "gprob-born",      "uncertainty",       "kernel-consistency",
        "packet-spread",   "stationary-states", "ehrenfest",
        "propagator-compare", "least-action",   "kg-modes",
        "maxwell-modes",   "proca-modes",       "field-ccr",
        "fermi-oscillator", "dirac-modes"};

    fs::path base = fs::temp_directory_path() / "qev_acceptance";
    fs::remove_all(base);
    fs::path run_a = base / "a";
    fs::path run_b = base / "b";
    fs::path mut = base / "mut";
    fs::create_directories(mut);

    // Every experiment runs green at defaults, twice, each under a minute.
    for (const auto& name : names) {
        fs::path cfg = fs::path(configs) / (name + ".json");
        REQUIRE(fs::exists(cfg), "missing config " << cfg.string());
        for (const fs::path& out : {run_a / name, run_b / name}) {
            CmdResult r = run_cmd(quoted(cli) + " run --config " + quoted(cfg.string()) +
                                  " --out " + quoted(out.string()) + " 2>&1");
            REQUIRE(r.status == 0,
                    name << " exited " << r.status << "\n" << r.output);
            REQUIRE(r.seconds < 60.0, name << " took " << r.seconds << " s");
        }
    }

    // Byte-identical artifacts across the two runs.
    int compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(run_a)) {
        if (!entry.is_regular_file()) continue;
        fs::path rel = fs::relative(entry.path(), run_a);
        fs::path twin = run_b / rel;
        REQUIRE(fs::exists(twin), "second run missing " << rel.string());
        REQUIRE(slurp(entry.path()) == slurp(twin),
                "artifact differs between runs: " << rel.string());
        ++compared;
    }
    REQUIRE(compared >= static_cast<int>(names.size()),
            "only " << compared << " artifacts written");

    // The published ground level of the default mode scan is 0.5.
    {
        std::ifstream in(run_a / "kg-modes" / "kg-modes-spectrum.csv");
        REQUIRE(in.good(), "kg-modes spectrum artifact missing");
        std::string line;
        bool found = false;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::stringstream ss(line);
            std::string j, level, energy;
            std::getline(ss, j, ',');
            std::getline(ss, level, ',');
            std::getline(ss, energy, ',');
            if (j == "0" && level == "0") {
                double e = std::strtod(energy.c_str(), nullptr);
                REQUIRE(std::abs(e - 0.5) <= 1e-6, "ground level " << e);
                found = true;
            }
        }
        REQUIRE(found, "ground level row absent from the spectrum artifact");
    }

    // Validate accepts the stock config and rejects all ten mutations.
    {
        fs::path good = fs::path(configs) / "uncertainty.json";
        CmdResult r = run_cmd(quoted(cli) + " validate --config " +
                              quoted(good.string()) + " 2>&1");
        REQUIRE(r.status == 0, "validate rejected a stock config\n" << r.output);
        REQUIRE(r.output.find("ok") != std::string::npos, "validate did not say ok");
    }
    const std::vector<std::string> mutations = {
        R"({"experiment":"uncertainty","parameters":{"seed":1},"flavor":"blue"})",
        R"({"experiment":"uncertainty","parameters":{"seed":1,"bogus":2}})",
        R"({"experiment":"time-travel"})",
        R"({"parameters":{"seed":1}})",
        R"({"experiment":"uncertainty","parameters":{"seed":1,"n":"512"}})",
        R"({"experiment":"field-ccr","parameters":{"dt":"small"}})",
        R"({"experiment":"gprob-born","parameters":{"triples":10}})",
        R"({"experiment":"gprob-born","parameters":{)",
        R"({"experiment":"uncertainty","parameters":{"seed":1},"format":"xml"})",
        R"({"experiment":"uncertainty","parameters":{"seed":1,"n":3}})"};
    int caught = 0;
    for (size_t i = 0; i < mutations.size(); ++i) {
        fs::path p = mut / ("mutation_" + std::to_string(i) + ".json");
        std::ofstream(p) << mutations[i];
        CmdResult r = run_cmd(quoted(cli) + " validate --config " +
                              quoted(p.string()) + " 2>&1");
        if (r.status == 2) ++caught;
    }
    REQUIRE(caught == 10, "validate caught " << caught << "/10 mutations");

    fs::remove_all(base);
    pass("command line: green defaults, determinism, artifact values, validation",
         t0, 900.0);
}

}  // namespace

int main(int argc, char** argv) {
    REQUIRE(argc >= 3, "usage: acceptance <cli-binary> <configs-dir>");

    criterion_event_algebra();
    criterion_operator_suite();
    criterion_kernel_roundtrip();
    criterion_schrodinger();
    criterion_path_integral();
    criterion_bosonic_fields();
    criterion_grassmann();
    criterion_cli(argv[1], argv[2]);

    std::cout << "all acceptance criteria hold\n";
    return 0;
}
