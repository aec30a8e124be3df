#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "softarm/dynamics.hpp"
#include "softarm/errors.hpp"
#include "softarm/kinematics.hpp"
#include "support/test_models.hpp"

using namespace softarm;
using test_models::TestRng;

namespace {

RobotModel free_floating_model() {
    RobotModel m = test_models::default_model();
    m.gravity.setZero();
    m.stiffness_per_segment = 0.0;
    m.damping_per_segment = 0.0;
    return m;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("coriolis vanishes at zero velocity") {
    const RobotModel model = test_models::default_model();
    TestRng rng(3);
    const Configuration q = test_models::random_configuration(model, rng);
    const auto terms = assemble_terms(model, q, ConfigurationRates::zero(2));
    CHECK(terms.coriolis.norm() == 0.0);
}

TEST_CASE("gravity vector carries the full weight on the prismatic coordinate") {
    const RobotModel model = test_models::default_model();
    TestRng rng(5);
    // holds at any configuration: every mass moves 1:1 with the base
    for (int i = 0; i < 10; ++i) {
        const Configuration q = test_models::random_configuration(model, rng);
        const Eigen::VectorXd g = gravity_vector(model, q);
        CHECK(g[0] == doctest::Approx(model.total_mass() * 9.81).epsilon(1e-12));
    }
    // straight pose: bend entries vanish by symmetry
    const Eigen::VectorXd g0 = gravity_vector(model, Configuration::zero(2));
    for (int i = 1; i < model.dof(); ++i) CHECK(std::abs(g0[i]) < 1e-12);
}

TEST_CASE("gravity vector is the gradient of the potential") {
    const RobotModel model = test_models::default_model();
    TestRng rng(7);
    const double h = 1e-6;
    for (int trial = 0; trial < 10; ++trial) {
        const Configuration q = test_models::random_configuration(model, rng);
        const Eigen::VectorXd g = gravity_vector(model, q);
        const Eigen::VectorXd qv = q.to_vector();
        for (int i = 0; i < model.dof(); ++i) {
            Eigen::VectorXd qp = qv, qm = qv;
            qp[i] += h;
            qm[i] -= h;
            const double fd = (potential_energy(model, Configuration::from_vector(qp, 2)) -
                               potential_energy(model, Configuration::from_vector(qm, 2))) /
                              (2.0 * h);
            CHECK(std::abs(g[i] - fd) < 1e-8);
        }
    }
}

TEST_CASE("inertia matrix is symmetric positive definite") {
    const RobotModel model = test_models::default_model();
    TestRng rng(11);
    for (int i = 0; i < 100; ++i) {
        const Configuration q = test_models::random_configuration(model, rng, 1.0);
        const Eigen::MatrixXd b = inertia_matrix(model, q);
        CHECK((b - b.transpose()).norm() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigs(b, Eigen::EigenvaluesOnly);
        CHECK(eigs.eigenvalues().minCoeff() > 0.0);
    }
    // prismatic diagonal entry is exactly the carried mass
    const Eigen::MatrixXd b0 = inertia_matrix(model, Configuration::zero(2));
    CHECK(b0(0, 0) == doctest::Approx(model.total_mass()).epsilon(1e-12));
}

TEST_CASE("stiffness and damping are diagonal with a free prismatic row") {
    const RobotModel model = test_models::default_model();
    const auto terms =
        assemble_terms(model, Configuration::zero(2), ConfigurationRates::zero(2));
    CHECK(terms.stiffness(0, 0) == 0.0);
    CHECK(terms.damping(0, 0) == 0.0);
    for (int i = 0; i < model.dof(); ++i)
        for (int j = 0; j < model.dof(); ++j) {
            if (i == j) continue;
            CHECK(terms.stiffness(i, j) == 0.0);
            CHECK(terms.damping(i, j) == 0.0);
        }
    for (int i = 1; i < model.dof(); ++i) {
        CHECK(terms.stiffness(i, i) == model.stiffness_per_segment);
        CHECK(terms.damping(i, i) == model.damping_per_segment);
    }
}

TEST_CASE("Bdot - 2C is skew along the velocity (power balance)") {
    const RobotModel model = test_models::default_model();
    TestRng rng(13);
    const double h = 1e-6;
    for (int trial = 0; trial < 25; ++trial) {
        const Configuration q = test_models::random_configuration(model, rng);
        const ConfigurationRates qd = test_models::random_rates(model, rng);
        const auto terms = assemble_terms(model, q, qd);
        const Eigen::VectorXd qv = q.to_vector(), qdv = qd.to_vector();
        const Eigen::MatrixXd bdot =
            (inertia_matrix(model, Configuration::from_vector(qv + h * qdv, 2)) -
             inertia_matrix(model, Configuration::from_vector(qv - h * qdv, 2))) /
            (2.0 * h);
        const double residual = qdv.dot(bdot * qdv) - 2.0 * qdv.dot(terms.coriolis);
        CHECK(std::abs(residual) < 1e-8);
    }
}

TEST_CASE("forward dynamics at equilibrium forcing gives zero acceleration") {
    const RobotModel model = test_models::default_model();
    TestRng rng(17);
    SimState state;
    state.q = test_models::random_configuration(model, rng);
    state.qd = test_models::random_rates(model, rng);
    const auto terms = assemble_terms(model, state.q, state.qd);
    const Eigen::VectorXd tau = terms.stiffness * state.q.to_vector() +
                                terms.damping * state.qd.to_vector() + terms.coriolis +
                                terms.gravity;
    const Eigen::VectorXd qdd = forward_dynamics(model, state, tau).to_vector();
    CHECK(qdd.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("free fall of the whole chain") {
    const RobotModel model = test_models::default_model();
    SimState state;
    state.q = Configuration::zero(2);
    state.q.prismatic_ext = 0.04;
    state.qd = ConfigurationRates::zero(2);
    const Eigen::VectorXd qdd =
        forward_dynamics(model, state, Eigen::VectorXd::Zero(model.dof())).to_vector();
    CHECK(qdd[0] == doctest::Approx(-9.81).epsilon(1e-9));
    for (int i = 1; i < model.dof(); ++i) CHECK(std::abs(qdd[i]) < 1e-9);
}

TEST_CASE("an external tip force enters through the Jacobian transpose") {
    const RobotModel model = test_models::default_model();
    TestRng rng(19);
    SimState state;
    state.q = test_models::random_configuration(model, rng);
    state.qd = ConfigurationRates::zero(2);
    const auto terms = assemble_terms(model, state.q, state.qd);
    const Eigen::VectorXd tau = Eigen::VectorXd::Zero(model.dof());
    const Eigen::Vector3d f(0.2, -0.1, 0.5);

    const Eigen::VectorXd with_f = forward_dynamics(model, state, tau, f).to_vector();
    const Eigen::VectorXd without_f = forward_dynamics(model, state, tau).to_vector();
    const Eigen::VectorXd expected =
        terms.inertia.ldlt().solve(Eigen::VectorXd(terms.jacobian.transpose() * f));
    CHECK((with_f - without_f - expected).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("ill-conditioned inertia raises a numerical error") {
    RobotModel model = test_models::default_model();
    model.shaft_mass = 1e12;
    model.segment_masses = {1e-9, 1e-9};
    SimState state;
    state.q = Configuration::zero(2);
    state.qd = ConfigurationRates::zero(2);
    CHECK_THROWS_AS(forward_dynamics(model, state, Eigen::VectorXd::Zero(model.dof())),
                    numerical_error);
}

TEST_CASE("step: rest state with no force stays put") {
    const RobotModel model = free_floating_model();
    SimState state;
    state.q = Configuration::zero(2);
    state.q.prismatic_ext = 0.04;
    state.qd = ConfigurationRates::zero(2);
    const StepResult result = step(model, state, Eigen::VectorXd::Zero(model.dof()), 1e-3);
    CHECK((result.state.q.to_vector() - state.q.to_vector()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(result.state.qd.to_vector().cwiseAbs().maxCoeff() < 1e-15);
    CHECK(!result.limit_event);
}

TEST_CASE("step: constant prismatic force gives the ballistic closed form") {
    const RobotModel model = free_floating_model();
    const double force = 0.2;  // N
    Eigen::VectorXd tau = Eigen::VectorXd::Zero(model.dof());
    tau[0] = force;
    SimState state;
    state.q = Configuration::zero(2);
    state.qd = ConfigurationRates::zero(2);
    for (int i = 0; i < 500; ++i) state = step(model, state, tau, 1e-3).state;
    const double expected = 0.5 * (force / model.total_mass()) * 0.25;
    CHECK(std::abs(state.q.prismatic_ext - expected) < 1e-6);
    CHECK(std::abs(state.t - 0.5) < 1e-12);
}

TEST_CASE("step: kinetic energy is conserved without gravity, stiffness or damping") {
    const RobotModel model = free_floating_model();
    SimState state;
    state.q = Configuration::zero(2);
    state.q.prismatic_ext = 0.04;
    state.q.segments[0] = Eigen::Vector2d(0.2, -0.1);
    state.q.segments[1] = Eigen::Vector2d(-0.1, 0.15);
    state.qd = ConfigurationRates::zero(2);
    state.qd.prismatic_rate = 0.01;
    state.qd.segment_rates[0] = Eigen::Vector2d(0.5, 0.3);
    state.qd.segment_rates[1] = Eigen::Vector2d(-0.4, 0.2);

    const double e0 = kinetic_energy(model, state);
    bool limit = false;
    for (int i = 0; i < 1000; ++i) {
        const StepResult result = step(model, state, Eigen::VectorXd::Zero(model.dof()), 1e-3);
        state = result.state;
        limit = limit || result.limit_event;
    }
    REQUIRE(!limit);
    const double e1 = kinetic_energy(model, state);
    CHECK(std::abs(e1 - e0) / e0 < 1e-3);
}

TEST_CASE("step: halving dt shrinks the trajectory change like a 4th-order method") {
    RobotModel model = free_floating_model();
    model.stiffness_per_segment = 0.1;  // undamped bend oscillation
    SimState init;
    init.q = Configuration::zero(2);
    init.q.prismatic_ext = 0.04;
    init.q.segments[0] = Eigen::Vector2d(0.6, 0.0);
    init.q.segments[1] = Eigen::Vector2d(-0.3, 0.4);
    init.qd = ConfigurationRates::zero(2);

    const auto integrate = [&](double dt) {
        SimState s = init;
        const int n = static_cast<int>(std::lround(1.0 / dt));
        const Eigen::VectorXd tau = Eigen::VectorXd::Zero(model.dof());
        for (int i = 0; i < n; ++i) s = step(model, s, tau, dt).state;
        return s.q.to_vector();
    };
    const Eigen::VectorXd coarse = integrate(2e-3);
    const Eigen::VectorXd mid = integrate(1e-3);
    const Eigen::VectorXd fine = integrate(0.5e-3);
    const double e_coarse = (coarse - mid).norm();
    const double e_fine = (mid - fine).norm();
    REQUIRE(e_fine > 0.0);
    const double order_ratio = e_coarse / e_fine;  // ~16 for a 4th-order scheme
    CHECK(order_ratio > 8.0);
    CHECK(order_ratio < 32.0);
}

TEST_CASE("step rejects bad timesteps and non-finite states") {
    const RobotModel model = test_models::default_model();
    SimState state;
    state.q = Configuration::zero(2);
    state.qd = ConfigurationRates::zero(2);
    CHECK_THROWS_AS(step(model, state, Eigen::VectorXd::Zero(5), 0.0), std::domain_error);
    CHECK_THROWS_AS(step(model, state, Eigen::VectorXd::Zero(5), 0.02), std::domain_error);
    Eigen::VectorXd bad = Eigen::VectorXd::Zero(5);
    bad[0] = std::nan("");
    CHECK_THROWS_AS(step(model, state, bad, 1e-3), simulation_error);
}

TEST_CASE("step clamps joint limits and zeroes the velocity component") {
    const RobotModel model = test_models::default_model();
    Eigen::VectorXd tau = Eigen::VectorXd::Zero(model.dof());
    tau[0] = 200.0;  // far beyond what the stroke can absorb
    SimState state;
    state.q = Configuration::zero(2);
    state.q.prismatic_ext = 0.079;
    state.qd = ConfigurationRates::zero(2);
    bool limit = false;
    for (int i = 0; i < 50 && !limit; ++i) {
        const StepResult result = step(model, state, tau, 1e-3);
        state = result.state;
        limit = result.limit_event;
    }
    CHECK(limit);
    CHECK(state.q.prismatic_ext == model.stroke_max);
    CHECK(state.qd.prismatic_rate == 0.0);
}

TEST_CASE("lumped mass density: inertia converges and the carried mass is exact") {
    RobotModel coarse = test_models::default_model();
    coarse.lumped_masses_per_segment = 4;
    RobotModel fine = coarse;
    fine.lumped_masses_per_segment = 16;
    TestRng rng(31);
    const Configuration q = test_models::random_configuration(coarse, rng);
    const Eigen::MatrixXd bc = inertia_matrix(coarse, q);
    const Eigen::MatrixXd bf = inertia_matrix(fine, q);
    CHECK(bc(0, 0) == doctest::Approx(coarse.total_mass()).epsilon(1e-12));
    CHECK(bf(0, 0) == doctest::Approx(fine.total_mass()).epsilon(1e-12));
    CHECK((bc - bf).norm() / bf.norm() < 0.05);
}

}  // TEST_SUITE
