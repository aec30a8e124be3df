#include <doctest.h>

#include <cmath>

#include "softarm/errors.hpp"
#include "softarm/kinematics.hpp"
#include "support/oracles.hpp"
#include "support/test_models.hpp"

using namespace softarm;
using test_models::TestRng;

TEST_SUITE("kinematics") {

TEST_CASE("segment_transform zero bend is a pure z translation") {
    const Pose pose = segment_transform(0.0, 0.0, 0.125);
    CHECK(pose.position.isApprox(Eigen::Vector3d(0, 0, 0.125), 1e-15));
    CHECK((pose.orientation - Eigen::Matrix3d::Identity()).norm() == doctest::Approx(0.0));
}

TEST_CASE("segment_transform quarter-circle closed form") {
    const Pose pose = segment_transform(M_PI / 2.0, 0.0, 0.1);
    const double coord = 0.2 / M_PI;
    CHECK(pose.position.x() == doctest::Approx(coord).epsilon(1e-12));
    CHECK(pose.position.y() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pose.position.z() == doctest::Approx(coord).epsilon(1e-12));
    // tip tangent now points along +x
    CHECK(pose.orientation.col(2).isApprox(Eigen::Vector3d(1, 0, 0), 1e-12));
}

TEST_CASE("segment_transform matches the integrated arc centerline") {
    const Pose pose = segment_transform(0.3, -0.4, 0.12);
    const Eigen::Vector3d oracle = oracles::integrate_arc_tip(0.3, -0.4, 0.12);
    CHECK((pose.position - oracle).norm() < 1e-9);

    TestRng rng(41);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double px = rng.uniform(-2.0, 2.0);
        const double py = rng.uniform(-2.0, 2.0);
        const double len = rng.uniform(0.02, 0.3);
        const Pose p = segment_transform(px, py, len);
        worst = std::max(worst, (p.position - oracles::integrate_arc_tip(px, py, len)).norm());
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("segment_transform is continuous across the series switch") {
    TestRng rng(7);
    for (int i = 0; i < 50; ++i) {
        const double beta = rng.uniform(0.0, 2.0 * M_PI);
        const double eps_theta = 1e-4;
        const double below = eps_theta * (1.0 - 1e-6);
        const double above = eps_theta * (1.0 + 1e-6);
        const Pose a = segment_transform(below * std::cos(beta), below * std::sin(beta), 0.1);
        const Pose b = segment_transform(above * std::cos(beta), above * std::sin(beta), 0.1);
        CHECK((a.position - b.position).norm() < 1e-9);
        CHECK((a.orientation - b.orientation).norm() < 1e-9);
    }
}

TEST_CASE("segment_transform rejects bad input") {
    CHECK_THROWS_AS(segment_transform(std::nan(""), 0.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(segment_transform(0.0, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(segment_transform(0.0, 0.0, -0.1), std::domain_error);
}

TEST_CASE("forward_kinematics straight poses") {
    const RobotModel model = test_models::long_arm_model();
    Configuration q = Configuration::zero(2);
    auto poses = forward_kinematics(model, q);
    REQUIRE(poses.size() == 2);
    CHECK(poses.back().position.isApprox(Eigen::Vector3d(0, 0, 0.25), 1e-14));

    q.prismatic_ext = 0.08;
    poses = forward_kinematics(model, q);
    CHECK(poses.back().position.isApprox(Eigen::Vector3d(0, 0, 0.33), 1e-14));
    CHECK(poses.front().position.isApprox(Eigen::Vector3d(0, 0, 0.205), 1e-14));
}

TEST_CASE("forward_kinematics matches hand-composed segment transforms") {
    const RobotModel model = test_models::default_model();
    TestRng rng(11);
    for (int i = 0; i < 200; ++i) {
        const Configuration q = test_models::random_configuration(model, rng);
        const auto poses = forward_kinematics(model, q);
        CHECK((poses.back().position - oracles::compose_tip(model, q)).norm() < 1e-12);
    }
}

TEST_CASE("forward_kinematics rejects shape mismatches") {
    const RobotModel model = test_models::default_model();
    CHECK_THROWS_AS(forward_kinematics(model, Configuration::zero(3)), std::domain_error);
}

TEST_CASE("tip reach never exceeds prismatic plus arc lengths") {
    const RobotModel model = test_models::default_model();
    TestRng rng(13);
    for (int i = 0; i < 100000; ++i) {
        const Configuration q = test_models::random_configuration(model, rng, 1.0);
        const auto poses = forward_kinematics(model, q);
        CHECK(poses.back().position.norm() <=
              q.prismatic_ext + model.total_length() + 1e-12);
    }
}

TEST_CASE("rotations stay orthonormal under composition") {
    const RobotModel model = test_models::default_model();
    TestRng rng(17);
    for (int i = 0; i < 500; ++i) {
        const Configuration q = test_models::random_configuration(model, rng, 1.0);
        const auto poses = forward_kinematics(model, q);
        for (const Pose& p : poses) {
            CHECK((p.orientation.transpose() * p.orientation - Eigen::Matrix3d::Identity())
                      .norm() < 1e-10);
            CHECK(p.orientation.determinant() == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("tip_jacobian at the straight pose") {
    const RobotModel model = test_models::default_model();
    const Configuration q = Configuration::zero(2);
    const Eigen::Matrix3Xd jac = tip_jacobian(model, q);
    CHECK(jac.col(0).isApprox(Eigen::Vector3d(0, 0, 1), 0.0));  // exact
    for (int i = 1; i < model.dof(); ++i) CHECK(std::abs(jac(2, i)) < 1e-14);
}

TEST_CASE("tip_jacobian matches central finite differences") {
    const RobotModel model = test_models::default_model();
    TestRng rng(19);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Configuration q = test_models::random_configuration(model, rng);
        const Eigen::Matrix3Xd jac = tip_jacobian(model, q);
        worst = std::max(worst,
                         (jac - oracles::fd_tip_jacobian(model, q)).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("jacobian_time_derivative") {
    const RobotModel model = test_models::default_model();
    TestRng rng(23);
    const Configuration q = test_models::random_configuration(model, rng);

    SUBCASE("zero rates give a zero matrix") {
        const auto jdot = jacobian_time_derivative(model, q, ConfigurationRates::zero(2));
        CHECK(jdot.norm() == 0.0);
    }
    SUBCASE("prismatic-only rates give a zero matrix") {
        ConfigurationRates qd = ConfigurationRates::zero(2);
        qd.prismatic_rate = 0.3;
        const auto jdot =
            jacobian_time_derivative(model, Configuration::zero(2), qd);
        CHECK(jdot.cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("matches the symmetric difference of tip_jacobian") {
        for (int i = 0; i < 20; ++i) {
            const Configuration qr = test_models::random_configuration(model, rng);
            const ConfigurationRates qd = test_models::random_rates(model, rng);
            const auto jdot = jacobian_time_derivative(model, qr, qd);
            const double h = 1e-6;
            const Eigen::VectorXd qv = qr.to_vector(), qdv = qd.to_vector();
            const auto jp =
                tip_jacobian(model, Configuration::from_vector(qv + h * qdv, 2));
            const auto jm =
                tip_jacobian(model, Configuration::from_vector(qv - h * qdv, 2));
            CHECK((jdot - (jp - jm) / (2.0 * h)).cwiseAbs().maxCoeff() < 1e-5);
        }
    }
}

TEST_CASE("station kinematics interpolate the arc") {
    const RobotModel model = test_models::default_model();
    TestRng rng(29);
    const Configuration q = test_models::random_configuration(model, rng);
    const KinematicChain chain = build_chain(model, q);

    // fraction 1 on the last segment is the tip
    CHECK((station_position(chain, 1, 1.0) - chain.tip()).norm() < 1e-15);
    // a mid-arc station must sit between the segment end points lengthwise
    const Eigen::Vector3d mid = station_position(chain, 0, 0.5);
    CHECK((mid - chain.segments[0].base_origin).norm() <= 0.5 * model.segment_lengths[0] + 1e-12);

    // station Jacobians also agree with finite differences
    for (double frac : {0.25, 0.7, 1.0}) {
        const Eigen::Matrix3Xd jac = station_jacobian(chain, 1, frac);
        const double h = 1e-6;
        const Eigen::VectorXd qv = q.to_vector();
        for (int i = 0; i < model.dof(); ++i) {
            Eigen::VectorXd qp = qv, qm = qv;
            qp[i] += h;
            qm[i] -= h;
            const auto cp = build_chain(model, Configuration::from_vector(qp, 2));
            const auto cm = build_chain(model, Configuration::from_vector(qm, 2));
            const Eigen::Vector3d fd =
                (station_position(cp, 1, frac) - station_position(cm, 1, frac)) / (2.0 * h);
            CHECK((jac.col(i) - fd).norm() < 1e-6);
        }
    }
}

}  // TEST_SUITE
