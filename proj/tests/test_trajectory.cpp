#include <doctest.h>

#include <cmath>

#include "softarm/errors.hpp"
#include "softarm/trajectory.hpp"
#include "support/test_models.hpp"

using namespace softarm;

namespace {

Scenario defaulted(ScenarioKind kind, const RobotModel& model) {
    Scenario sc;
    sc.kind = kind;
    apply_default_geometry(sc, model);
    return sc;
}

}  // namespace

TEST_SUITE("trajectory") {

TEST_CASE("equal line endpoints give a constant reference with zero rates") {
    const RobotModel model = test_models::default_model();
    Scenario sc;
    sc.kind = ScenarioKind::track_line;
    sc.duration = 4.0;
    sc.line_from = sc.line_to = Eigen::Vector3d(0.02, 0.0, 0.07);
    const Trajectory traj = generate_trajectory(sc, model);
    for (double t : {0.0, 1.3, 4.0}) {
        const TaskReference ref = traj.at(t);
        CHECK((ref.position - sc.line_from).norm() < 1e-15);
        CHECK(ref.velocity.norm() == 0.0);
        CHECK(ref.acceleration.norm() == 0.0);
    }
}

TEST_CASE("helix advances by one pitch per revolution") {
    const RobotModel model = test_models::default_model();
    Scenario sc = defaulted(ScenarioKind::track_helix, model);
    sc.duration = 25.0;
    sc.rate_hz = 0.1;
    sc.pitch = 0.01;
    sc.radius = 0.02;
    const Trajectory traj = generate_trajectory(sc, model);
    const double t0 = 5.0;  // past the spin-up
    const TaskReference a = traj.at(t0);
    const TaskReference b = traj.at(t0 + 10.0);  // one revolution at 0.1 Hz
    CHECK(std::abs(a.position.x() - b.position.x()) < 1e-12);
    CHECK(std::abs(a.position.y() - b.position.y()) < 1e-12);
    CHECK(b.position.z() - a.position.z() == doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("analytic derivatives match numeric differentiation") {
    const RobotModel model = test_models::default_model();
    for (ScenarioKind kind : {ScenarioKind::track_helix, ScenarioKind::track_circle,
                              ScenarioKind::track_line, ScenarioKind::pick_place}) {
        Scenario sc = defaulted(kind, model);
        sc.duration = 8.0;
        sc.radius = 0.03;
        sc.incline = 20.0 * M_PI / 180.0;
        const Trajectory traj = generate_trajectory(sc, model);
        const double h = 1e-6;
        for (double frac : {0.07, 0.22, 0.41, 0.63, 0.88}) {
            const double t = frac * traj.duration();
            const TaskReference mid = traj.at(t);
            const TaskReference plus = traj.at(t + h);
            const TaskReference minus = traj.at(t - h);
            const Eigen::Vector3d v_fd = (plus.position - minus.position) / (2.0 * h);
            const Eigen::Vector3d a_fd = (plus.velocity - minus.velocity) / (2.0 * h);
            CHECK((v_fd - mid.velocity).norm() < 1e-6);
            CHECK((a_fd - mid.acceleration).norm() < 1e-5);
        }
    }
}

TEST_CASE("references outside the reach bound are rejected") {
    const RobotModel model = test_models::default_model();  // reach 0.08 (+0.08 stroke)
    Scenario sc;
    sc.kind = ScenarioKind::track_line;
    sc.duration = 5.0;
    sc.line_from = Eigen::Vector3d(0.0, 0.0, 0.07);
    sc.line_to = Eigen::Vector3d(0.0, 0.0, 0.15);  // spans the stroke

    sc.prismatic_enabled = true;
    CHECK_NOTHROW(generate_trajectory(sc, model));
    sc.prismatic_enabled = false;
    CHECK_THROWS_AS(generate_trajectory(sc, model), validation_error);
}

TEST_CASE("pick script records gripper transitions and derives its duration") {
    const RobotModel model = test_models::default_model();
    Scenario sc;
    sc.kind = ScenarioKind::pick_place;
    const Trajectory traj = generate_trajectory(sc, model);
    const auto wps = default_pick_waypoints(model);
    double expected = 0.0;
    for (const auto& wp : wps) expected += wp.move_duration + wp.dwell;
    CHECK(traj.duration() == doctest::Approx(expected));
    REQUIRE(traj.gripper_events().size() == 2);
    CHECK(traj.gripper_events()[0].closed);
    CHECK(!traj.gripper_events()[1].closed);
    CHECK(traj.gripper_events()[0].t < traj.gripper_events()[1].t);

    // starts at the straight tip and ends at the home waypoint
    CHECK((traj.at(0.0).position - Eigen::Vector3d(0, 0, model.total_length())).norm() <
          1e-12);
    CHECK((traj.at(traj.duration()).position - wps.back().position).norm() < 1e-12);
}

TEST_CASE("scenario validation errors") {
    const RobotModel model = test_models::default_model();
    Scenario sc;
    sc.kind = ScenarioKind::hold;
    sc.duration = -1.0;
    CHECK_THROWS_AS(generate_trajectory(sc, model), validation_error);
    sc.kind = ScenarioKind::workspace;
    sc.duration = 1.0;
    CHECK_THROWS_AS(generate_trajectory(sc, model), validation_error);
}

}  // TEST_SUITE
