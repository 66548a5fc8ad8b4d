#include <doctest.h>

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "bjj/criteria.hpp"
#include "bjj/dynamics.hpp"
#include "bjj/errors.hpp"

using namespace bjj;

TEST_CASE("ramp schedules") {
    const auto s = RampSchedule::sudden(2.0);
    CHECK(s.ramp_duration() == 0.0);
    CHECK(s.j_of_t(0.0) == 2.0);
    CHECK(s.j_of_t(5.0) == 2.0);

    const auto l = RampSchedule::linear(10.0, 1.0, 5.0);
    CHECK(l.j_of_t(0.0) == 10.0);
    CHECK(l.j_of_t(2.5) == doctest::Approx(5.5));
    CHECK(l.j_of_t(5.0) == 1.0);
    CHECK(l.j_of_t(100.0) == 1.0);
    CHECK(l.max_abs_j() == 10.0);

    const auto p = RampSchedule::piecewise({{0.0, 3.0}, {1.0, 1.0}, {2.0, 2.0}});
    CHECK(p.j_of_t(0.5) == doctest::Approx(2.0));
    CHECK(p.j_of_t(1.5) == doctest::Approx(1.5));
    CHECK(p.j_of_t(9.0) == 2.0);

    CHECK_THROWS_AS(RampSchedule::linear(1.0, 2.0, 0.0), InvalidParameter);
    CHECK_THROWS_AS(RampSchedule::piecewise({{0.5, 1.0}, {1.0, 1.0}}), InvalidParameter);
    CHECK_THROWS_AS(RampSchedule::piecewise({{0.0, 1.0}, {0.0, 1.0}}), InvalidParameter);
    CHECK_THROWS_AS(RampSchedule::sudden(-1.0), InvalidParameter);
}

TEST_CASE("default dt and time grid") {
    CHECK(default_dt({10, 10, 1.0, 0.0, 0.0, 0.0}, RampSchedule::sudden(1.0)) == doctest::Approx(0.01));
    CHECK(default_dt({10, 10, 1.0, 0.5, 0.2, 0.1}, RampSchedule::sudden(1.0)) == doctest::Approx(0.002));
    CHECK(default_dt({10, 10, 1.0, 0.0, 0.0, 0.0}, RampSchedule::linear(20.0, 1.0, 1.0)) ==
          doctest::Approx(0.0005));

    const auto g = TimeGrid::make(0.3, 1.0, 2);
    CHECK(g.n_steps == 4);
    CHECK(g.dt == doctest::Approx(0.25));
    CHECK(g.sample_steps() == std::vector<std::size_t>{0, 2, 4});
    CHECK(TimeGrid::make(0.1, 1.0, 3).sample_steps() == std::vector<std::size_t>{0, 3, 6, 9, 10});
    CHECK(TimeGrid::make(0.1, 0.0).n_steps == 0);
    CHECK_THROWS_AS(TimeGrid::make(0.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(TimeGrid::make(0.1, 0.05), InvalidParameter);
}

TEST_CASE("ground states") {
    SUBCASE("noninteracting: product of x-polarised coherent states") {
        const TwoSpinBasis b(2, 2);
        const auto gs = ground_state(build_exact_hamiltonian({2, 2, 1.0, 0.0, 0.0, 0.0}, b));
        CHECK(gs.energy == doctest::Approx(-4.0).epsilon(1e-12));
        const auto coherent = coherent_spin_state(b, M_PI / 2.0, 0.0, M_PI / 2.0, 0.0);
        CHECK(std::norm(gs.state.overlap(coherent)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("J = 0: m_a = m_b = 0") {
        const TwoSpinBasis b(4, 4);
        const auto gs = ground_state(build_exact_hamiltonian({4, 4, 0.0, 0.5, 0.5, 0.0}, b));
        CHECK(gs.energy == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(std::abs(gs.state.amplitudes()(static_cast<Eigen::Index>(b.index(2, 2)))) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("N = 6 against the dense spectrum") {
        const auto h = build_exact_hamiltonian({6, 6, 1.0, 0.3, 0.3, 0.3}, TwoSpinBasis(6, 6));
        const auto gs = ground_state(h);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h.dense(), Eigen::EigenvaluesOnly);
        CHECK(std::abs(gs.energy - eig.eigenvalues()(0)) < 1e-9);
        CHECK((h.apply(gs.state.amplitudes()) - gs.energy * gs.state.amplitudes()).norm() < 1e-8);
    }
}

TEST_CASE("propagator step") {
    const TwoSpinBasis b(3, 2);
    const auto psi = coherent_spin_state(b, 1.0, 0.3, 2.0, -0.4);
    SUBCASE("zero Hamiltonian is the identity") {
        const auto out = propagator_step(HermitianOperator::zero(b), psi, 0.7);
        CHECK((out.amplitudes() - psi.amplitudes()).norm() < 1e-15);
    }
    SUBCASE("diagonal Hamiltonian multiplies phases exactly") {
        const auto h = build_exact_hamiltonian({3, 2, 0.0, 0.4, 0.9, 0.2}, b);
        const auto out = propagator_step(h, psi, 0.7);
        for (std::size_t i = 0; i < b.dimension(); ++i) {
            const auto k = static_cast<Eigen::Index>(i);
            const cplx expected = std::polar(1.0, -0.7 * h.entry(i, i).real()) * psi.amplitudes()(k);
            CHECK(std::abs(out.amplitudes()(k) - expected) < 1e-15);
        }
    }
    SUBCASE("general Hamiltonian matches the dense exponential") {
        const auto h = build_exact_hamiltonian({3, 2, 1.0, 0.4, 0.9, 0.2}, b);
        const auto out = propagator_step(h, psi, 0.3);
        const Vector ref = (h.dense() * cplx(0.0, -0.3)).exp() * psi.amplitudes();
        CHECK((out.amplitudes() - ref).norm() < 1e-10);
        CHECK(std::abs(out.norm() - 1.0) < 1e-10);
    }
}

TEST_CASE("evolution") {
    const ModelParams p{4, 4, 1.0, 0.2, 0.3, 0.1};
    const TwoSpinBasis b(4, 4);
    const auto psi0 = coherent_spin_state(b, M_PI / 2.0, 0.0, M_PI / 2.0, 0.0);
    const auto h = build_exact_hamiltonian(p, b);

    SUBCASE("t_max = 0 returns the input") {
        const auto traj = evolve(psi0, p, RampSchedule::sudden(1.0), 0.01, 0.0);
        REQUIRE(traj.size() == 1);
        CHECK((traj.samples[0].amplitudes() - psi0.amplitudes()).norm() == 0.0);
    }
    SUBCASE("constant H matches the dense exponential at t = 5/J") {
        const auto traj = evolve(psi0, p, RampSchedule::sudden(1.0), 0.01, 5.0, 500);
        const Vector ref = (h.dense() * cplx(0.0, -5.0)).exp() * psi0.amplitudes();
        CHECK((traj.samples.back().amplitudes() - ref).norm() < 1e-8);
        CHECK(traj.times.back() == doctest::Approx(5.0));
    }
    SUBCASE("norm and energy conservation, time grid uniform") {
        const auto traj = evolve(psi0, p, RampSchedule::sudden(1.0), 0.01, 20.0, 100);
        const double e0 = psi0.expectation(h);
        for (std::size_t k = 0; k < traj.size(); ++k) {
            CHECK(std::abs(traj.samples[k].norm() - 1.0) < 1e-9);
            CHECK(std::abs(traj.samples[k].expectation(h) - e0) < 1e-8 * std::abs(e0));
            if (k > 0) CHECK(traj.times[k] - traj.times[k - 1] == doctest::Approx(1.0));
        }
    }
    SUBCASE("forward then backward returns to the start") {
        const auto fwd = evolve(psi0, p, RampSchedule::sudden(1.0), 0.01, 3.0, 300).samples.back();
        const Vector back = (h.dense() * cplx(0.0, 3.0)).exp() * fwd.amplitudes();
        CHECK(std::norm(psi0.amplitudes().dot(back)) > 1.0 - 1e-8);
    }
    SUBCASE("time-dependent ramp matches a fine piecewise-constant oracle") {
        const auto ramp = RampSchedule::linear(3.0, 1.0, 1.0);
        const auto traj = evolve(psi0, p, ramp, 0.001, 1.0, 1000);
        Vector ref = psi0.amplitudes();
        const auto terms = build_hamiltonian_terms(p, b);
        const int steps = 4000;
        for (int k = 0; k < steps; ++k) {
            const double t = (k + 0.5) / steps;
            ref = (terms.at(ramp.j_of_t(t)).dense() * cplx(0.0, -1.0 / steps)).exp() * ref;
        }
        CHECK((traj.samples.back().amplitudes() - ref).norm() < 1e-5);
    }
    SUBCASE("short linear ramps converge to the sudden result") {
        const auto sudden = evolve(psi0, p, RampSchedule::sudden(1.0), 0.001, 2.0, 2000).samples.back();
        double previous = 0.0;
        for (double duration : {0.5, 0.1, 0.02}) {
            const auto ramped =
                evolve(psi0, p, RampSchedule::linear(5.0, 1.0, duration), 0.001, 2.0, 2000).samples.back();
            const double fidelity = std::norm(ramped.overlap(sudden));
            CHECK(fidelity > previous);
            previous = fidelity;
        }
        CHECK(previous > 0.99);
    }
}

TEST_CASE("one-axis twisting closed form") {
    // H = chi Jz^2 on species A; <Jx>(t) = (N/2) cos^(N-1)(chi t)
    for (int n : {2, 10, 50}) {
        const double chi = 0.3;
        const TwoSpinBasis b(n, 1);
        const auto psi0 = coherent_spin_state(b, M_PI / 2.0, 0.0, M_PI / 2.0, 0.0);
        const auto jx = spin_operators(b, Species::A).jx;
        const auto traj = evolve(psi0, {n, 1, 0.0, chi, 0.0, 0.0}, RampSchedule::sudden(0.0), 0.01, 6.0, 10);
        for (std::size_t k = 0; k < traj.size(); ++k) {
            const double exact = 0.5 * n * std::pow(std::cos(chi * traj.times[k]), n - 1);
            CHECK(std::abs(traj.samples[k].expectation(jx) - exact) < 1e-6);
        }
    }
}

TEST_CASE("norm drift over 1000 steps with time-dependent J") {
    const ModelParams p{8, 8, 1.0, 0.4, 0.4, 0.2};
    const TwoSpinBasis b(8, 8);
    const auto traj = evolve(coherent_spin_state(b, M_PI / 2.0, 0.0, M_PI / 2.0, 0.0), p,
                             RampSchedule::linear(5.0, 1.0, 10.0), 0.01, 10.0, 1000);
    CHECK(std::abs(traj.samples.back().norm() - 1.0) < 1e-9);
}
