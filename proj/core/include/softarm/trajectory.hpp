#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "softarm/control.hpp"
#include "softarm/types.hpp"

namespace softarm {

enum class ScenarioKind { hold, track_helix, track_circle, track_line, pick_place, workspace };

struct Waypoint {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    double move_duration = 2.0;  // s, quintic rest-to-rest move to `position`
    double dwell = 0.0;          // s, hold after arriving
    bool gripper_closed = false; // state after arriving
};

struct GripperEvent {
    double t = 0.0;
    bool closed = false;
};

struct Scenario {
    ScenarioKind kind = ScenarioKind::hold;
    double duration = 10.0;  // s; pick_place derives it from the waypoints
    std::uint64_t seed = 0;
    bool prismatic_enabled = true;

    // circle / helix
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double radius = 0.05;    // m
    double pitch = 0.04;     // m per revolution (helix)
    double rate_hz = 0.1;    // revolutions per second
    double incline = 0.0;    // rad, circle tilt about the x axis
    double ramp_time = 2.0;  // s, smooth spin-up of the angular rate

    // line
    Eigen::Vector3d line_from = Eigen::Vector3d::Zero();
    Eigen::Vector3d line_to = Eigen::Vector3d::Zero();

    // hold
    Eigen::Vector3d hold_point = Eigen::Vector3d::Zero();

    // pick_place
    std::vector<Waypoint> waypoints;

    // workspace
    int samples = 200000;
    int threads = 0;
};

/// Time-parameterized task-space reference with analytic derivatives.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(double duration, std::function<TaskReference(double)> eval,
               std::vector<GripperEvent> gripper = {})
        : duration_(duration), eval_(std::move(eval)), gripper_(std::move(gripper)) {}

    double duration() const { return duration_; }
    TaskReference at(double t) const { return eval_(t); }
    const std::vector<GripperEvent>& gripper_events() const { return gripper_; }

private:
    double duration_ = 0.0;
    std::function<TaskReference(double)> eval_;
    std::vector<GripperEvent> gripper_;
};

/// Fills geometry defaults that depend on the robot (trajectory anchor
/// points relative to the straight-pose tip). Only touches fields still at
/// their sentinel defaults.
void apply_default_geometry(Scenario& scenario, const RobotModel& model);

/// Builds the reference for a scenario and validates that every sampled
/// point stays within the reach bound total_length (+ stroke_max when the
/// prismatic joint is enabled); throws validation_error otherwise.
Trajectory generate_trajectory(const Scenario& scenario, const RobotModel& model);

/// Default pick-and-place waypoint script, scaled to the robot.
std::vector<Waypoint> default_pick_waypoints(const RobotModel& model);

}  // namespace softarm
