// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "bjj/analytics.hpp"
#include "bjj/config.hpp"
#include "bjj/criteria.hpp"
#include "bjj/dynamics.hpp"
#include "bjj/krylov.hpp"
#include "bjj/model.hpp"
#include "bjj/noise.hpp"
#include "bjj/run.hpp"
#include "bjj/schemes.hpp"
#include "bjj/sweep.hpp"

using namespace bjj;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

int hardware_threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

GlobalSchemeConfig global_config(int n, double j, double ec_self, double ec_ab, double t_max) {
    GlobalSchemeConfig c;
    c.params = {n, n, j, ec_self, ec_self, ec_ab};
    c.t_max = t_max;
    return c;
}

// ---------------------------------------------------------------------------

Outcome coherent_baseline() {
    double worst = 0.0;
    for (int n : {2, 10, 100}) {
        const auto psi = coherent_spin_state(TwoSpinBasis(n, n), M_PI / 2, 0.0, M_PI / 2, 0.0);
        const auto r = epr_l_criterion(psi);
        worst = std::max({worst, std::abs(r.epr_l_value - 0.25), std::abs(r.epsilon)});
    }
    return {worst < 1e-9, "max deviation " + fmt("%.2e", worst)};
}

Outcome harmonic_limit() {
    bool ok = true;
    std::string detail;
    for (double e : {0.001, 0.005}) {
        const ModelParams p{100, 100, 1.0, e, e, e};
        const auto gs = ground_state(build_exact_hamiltonian(p, TwoSpinBasis(100, 100)));
        const double exact = epr_l_criterion(gs.state).product_np;
        const auto h = harmonic_prediction(harmonic_coefficients(p));
        const double predicted = 1.0 / (4.0 * h.s_product);
        const double rel = std::abs(exact - predicted) / predicted;
        ok = ok && rel < 0.10;
        detail += "E=" + fmt("%g", e) + ": exact " + fmt("%.5f", exact) + " vs " + fmt("%.5f", predicted) + " (" +
                  fmt("%.2f%%", 100 * rel) + "), s_product " + fmt("%.4f", h.s_product) + ", s_ratio " +
                  fmt("%.4f", h.s_ratio) + "; ";
    }
    return {ok, detail};
}

Outcome separability_floor() {
    double lowest = 1.0, lowest_eps = 1.0;
    for (int n : {10, 20})
        for (double e : {0.05, 0.2, 1.0}) {
            const auto rows = run_global_scheme(global_config(n, 1.0, e, 0.0, 20.0)).rows;
            for (const auto& r : rows) {
                if (!r.defined) continue;
                lowest = std::min({lowest, r.report.epr_l_value, r.report.product_np});
                lowest_eps = std::min(lowest_eps, r.report.epsilon);
            }
        }
    return {lowest >= 0.25 - 1e-6 && lowest_eps >= -1e-6,
            "min criterion " + fmt("%.9f", lowest) + ", min epsilon " + fmt("%.2e", lowest_eps)};
}

Outcome entanglement_generation() {
    const auto rows = run_global_scheme(global_config(10, 1.0, 0.1, 0.1, 30.0)).rows;
    const auto [best, when] = minimum_over_time(rows, Objective::epr_l);
    return {best < 0.25 && when < 30.0, "min " + fmt("%.4f", best) + " at t=" + fmt("%.2f", when)};
}

Outcome sudden_beats_slow() {
    bool ok = true;
    std::string detail;
    for (double e : {0.1, 0.3}) {
        auto sudden = global_config(10, 1.0, e, e, 30.0);
        auto slow = sudden;
        slow.ramp.kind = RampKind::linear;
        slow.ramp.duration = 5.0;
        const double a = minimum_over_time(run_global_scheme(sudden).rows, Objective::epr_l).first;
        const double b = minimum_over_time(run_global_scheme(slow).rows, Objective::epr_l).first;
        ok = ok && a <= b;
        detail += "E=" + fmt("%g", e) + ": sudden " + fmt("%.4f", a) + " slow " + fmt("%.4f", b) + "; ";
    }
    return {ok, detail};
}

Outcome optimal_charging_energy() {
    SweepSpec s;
    s.axis = SweepAxis::ec_all;
    s.grid = {0.0, 0.1, 0.3, 1.0, 2.0, 5.0};
    s.base = global_config(10, 1.0, 0.0, 0.0, 30.0);
    s.base.threads = hardware_threads();
    const auto r = run_sweep(s);
    std::string detail = "objective:";
    for (const auto& p : r.points) detail += " " + fmt("%g", p.value) + "->" + fmt("%.4f", p.objective);
    if (!r.argmin) return {false, detail};
    const auto i = *r.argmin;
    const bool interior = i > 0 && i + 1 < r.points.size();
    return {interior && r.points[i].objective < 0.25, detail + "; argmin " + fmt("%g", r.points[i].value)};
}

Outcome one_axis_twisting() {
    const double chi = 0.1;
    double worst = 0.0;
    for (int n : {2, 10, 50}) {
        // J = 0, single species: H = chi Jz_A^2, species B is a spectator
        const ModelParams p{n, 1, 0.0, chi, 0.0, 0.0};
        const auto psi0 = coherent_spin_state(TwoSpinBasis(n, 1), M_PI / 2, 0.0, M_PI / 2, 0.0);
        const auto traj = evolve(psi0, p, RampSchedule::sudden(0.0), 0.01, 10.0, 50);
        const auto jx = spin_operators(psi0.basis(), Species::A).jx;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const double expected = 0.5 * n * std::pow(std::cos(chi * traj.times[i]), n - 1);
            worst = std::max(worst, std::abs(traj.samples[i].expectation(jx) - expected));
        }
    }
    return {worst < 1e-6, "max |<Jx> - (N/2)cos^(N-1)(chi t)| = " + fmt("%.2e", worst)};
}

double linear_fit_r2(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy * sxy / (sxx * syy);
}

Outcome dephasing_signature() {
    const ModelParams p{10, 10, 1.0, 0.01, 0.01, 0.01};
    const auto psi0 = coherent_spin_state(TwoSpinBasis(10, 10), M_PI / 2, 0.0, M_PI / 2, 0.0);
    const NoiseModel noise{0.0, 0.002, 500, 7};
    const auto grid = TimeGrid::make(0.01, 30.0, 20);
    const auto r = evolve_dephased(psi0, p, RampSchedule::sudden(1.0), noise, grid,
                                   {Quantity::var_n_plus, Quantity::var_phi_minus}, hardware_threads());
    const auto& n_plus = r.series(Quantity::var_n_plus);
    const auto& phi_minus = r.series(Quantity::var_phi_minus);
    const double r2 = linear_fit_r2(r.times, n_plus);
    const double growth = n_plus.back() - n_plus.front();
    double drift = 0.0;
    for (double v : phi_minus) drift = std::max(drift, std::abs(v - phi_minus.front()));
    const bool ok = growth > 0.0 && r2 > 0.95 && drift < 0.1 * growth;
    return {ok, "var(n+) growth " + fmt("%.4f", growth) + " R^2 " + fmt("%.4f", r2) + ", max |change var(phi-)| " +
                    fmt("%.2e", drift) + " (" + fmt("%.2f%%", 100 * drift / growth) + " of growth)"};
}

SparseMatrix random_hermitian(int dim, double density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::bernoulli_distribution keep(density);
    std::vector<Eigen::Triplet<cplx>> t;
    for (int i = 0; i < dim; ++i) {
        t.emplace_back(i, i, u(rng));
        for (int j = i + 1; j < dim; ++j)
            if (keep(rng)) {
                const cplx z(u(rng), u(rng));
                t.emplace_back(i, j, z);
                t.emplace_back(j, i, std::conj(z));
            }
    }
    SparseMatrix m(dim, dim);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

Outcome propagator_fidelity() {
    double worst = 0.0, drift = 0.0;
    KrylovWorkspace ws;
    for (int dim : {10, 40, 70, 100})
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const SparseMatrix h = random_hermitian(dim, 0.1, seed * 1000 + dim);
            std::mt19937_64 rng(seed);
            std::normal_distribution<double> g;
            Vector v(dim);
            for (auto& x : v) x = cplx(g(rng), g(rng));
            v.normalize();
            const double dt = 0.1;
            LinearOperator op;
            op.base = &h;
            const Eigen::MatrixXcd u = (Eigen::MatrixXcd(h) * cplx(0.0, -dt)).exp();
            worst = std::max(worst, (ws.apply_exponential(op, v, dt).state - u * v).norm());
            Vector psi = v;
            for (int k = 0; k < 1000; ++k) psi = ws.apply_exponential(op, psi, dt).state;
            drift = std::max(drift, std::abs(psi.norm() - 1.0));
        }
    return {worst < 1e-10 && drift < 1e-9,
            "max step error " + fmt("%.2e", worst) + ", max norm drift over 1000 steps " + fmt("%.2e", drift)};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> csv_outputs(const RunConfig& c) {
    std::filesystem::remove_all(c.output);
    std::vector<std::string> out;
    for (const auto& f : run(c).files)
        if (f.extension() == ".csv") out.push_back(slurp(f));
    return out;
}

std::string data_only(const std::string& csv) {
    std::istringstream in(csv);
    std::string out;
    for (std::string line; std::getline(in, line);)
        if (line.empty() || line[0] != '#') out += line + '\n';
    return out;
}

Outcome determinism() {
    const auto dir = std::filesystem::temp_directory_path() / "bjj_acceptance_determinism";
    auto sweep = parse_config(
        "sweep.axis = ec_all\nsweep.grid = 0.05, 0.1, 0.2, 0.4\nsweep.per_point_csv = true\n"
        "model.n_atoms = 6\nmodel.tunneling_j = 1\nevolution.t_max = 5\nrun.sample_stride = 10\n"
        "noise.diffusion_rate = 0.005\nnoise.trajectories = 8\nrun.seed = 3\nrun.threads = 4\n");
    sweep.output = dir.string();
    const auto a = csv_outputs(sweep);
    const auto b = csv_outputs(sweep);
    auto single = sweep;
    single.set_threads(1);
    const auto c = csv_outputs(single);
    std::filesystem::remove_all(dir);

    bool identical = a == b && !a.empty();
    bool thread_free = a.size() == c.size();
    for (std::size_t i = 0; thread_free && i < a.size(); ++i) thread_free = data_only(a[i]) == data_only(c[i]);
    return {identical && thread_free, std::to_string(a.size()) + " csv files; repeat run byte-identical: " +
                                          (identical ? "yes" : "no") + ", 4 vs 1 threads identical data: " +
                                          (thread_free ? "yes" : "no")};
}

Outcome criteria_equivalence() {
    // species asymmetry keeps the two criteria from coinciding identically
    GlobalSchemeConfig c;
    c.params = {20, 20, 1.0, 0.02, 0.03, 0.02};
    c.t_max = 10.0;
    c.sample_stride = 5;
    const auto rows = run_global_scheme(c).rows;
    double worst = 0.0;
    std::size_t used = 0;
    for (const auto& r : rows) {
        if (!r.defined || 1.0 - std::abs(r.report.mean_lx) / 20.0 >= 0.01) continue;
        ++used;
        worst = std::max(worst, std::abs(r.report.product_np - r.report.epr_l_value) / r.report.epr_l_value);
    }
    return {used > 10 && worst < 0.05,
            std::to_string(used) + " samples in regime, max relative difference " + fmt("%.3e", worst)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC1 coherent-state baseline", coherent_baseline},
        {"AC2 harmonic-limit oracle", harmonic_limit},
        {"AC3 separability floor", separability_floor},
        {"AC4 entanglement generation", entanglement_generation},
        {"AC5 sudden beats slow", sudden_beats_slow},
        {"AC6 optimal charging energy", optimal_charging_energy},
        {"AC7 one-axis twisting closed form", one_axis_twisting},
        {"AC8 dephasing signature", dephasing_signature},
        {"AC9 propagator fidelity", propagator_fidelity},
        {"AC10 determinism", determinism},
        {"AC11 criteria equivalence regime", criteria_equivalence},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << " [" << fmt("%.1f", secs) << " s] " << o.detail
                  << std::endl;
    }
    std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
              << std::endl;
    return failures ? 1 : 0;
}
