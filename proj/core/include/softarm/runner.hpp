#pragma once

#include <string>
#include <vector>

#include "softarm/actuation.hpp"
#include "softarm/control.hpp"
#include "softarm/dynamics.hpp"
#include "softarm/trajectory.hpp"

namespace softarm {

struct RunRecord {
    double t = 0.0;
    Eigen::VectorXd q;
    Eigen::VectorXd qd;
    Eigen::Vector3d tip = Eigen::Vector3d::Zero();
    Eigen::Vector3d ref = Eigen::Vector3d::Zero();
    PressureCommand command;
    bool saturated = false;
    bool limit_event = false;
};

struct RunSummary {
    double mean_tip_error = 0.0;  // m
    double rms_tip_error = 0.0;   // m
    double max_pressure = 0.0;    // Pa
    int saturation_count = 0;
    int limit_event_count = 0;
};

struct RunLog {
    std::vector<RunRecord> rows;  // one per control tick, uniform timestep
    RunSummary summary;
    std::vector<GripperEvent> gripper_events;
    double control_dt = 0.01;
    std::string scenario_name;
    std::uint64_t seed = 0;
};

/// Closed-loop simulation: the plant integrates at plant_rate_hz while the
/// controller updates the pressure command at control_rate_hz; the command
/// is held between updates. Deterministic given (model, h, gains, scenario).
/// Throws validation_error for unrunnable scenarios and simulation_error
/// (with the last valid state) on divergence.
RunLog run_scenario(const RobotModel& model, const HysteresisModel& h,
                    const ControllerGains& gains, const Scenario& scenario);

/// Recomputes the summary from logged rows; emit/report paths use this so a
/// summary can always be reproduced from run.csv alone.
RunSummary summarize(const std::vector<RunRecord>& rows);

}  // namespace softarm
