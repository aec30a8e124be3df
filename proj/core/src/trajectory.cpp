#include "softarm/trajectory.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "softarm/errors.hpp"

namespace softarm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Quintic smoothstep and integrals/derivatives used by the generators.
double smoothstep(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double smoothstep_d(double u) { return u * u * (30.0 + u * (-60.0 + 30.0 * u)); }
double smoothstep_dd(double u) { return u * (60.0 + u * (-180.0 + 120.0 * u)); }
double smoothstep_integral(double u) {  // int_0^u smoothstep
    return u * u * u * u * (2.5 + u * (-3.0 + u));
}

// Angle profile with a smooth spin-up: rest at t = 0, constant rate `omega`
// after `ramp`; C2 everywhere.
void phase(double t, double omega, double ramp, double& a, double& ad, double& add) {
    if (ramp <= 0.0 || t >= ramp) {
        a = omega * (t - 0.5 * ramp);
        ad = omega;
        add = 0.0;
        return;
    }
    const double u = t / ramp;
    a = omega * ramp * smoothstep_integral(u);
    ad = omega * smoothstep(u);
    add = omega * smoothstep_d(u) / ramp;
}

// Rest-to-rest quintic between two points over [0, T].
TaskReference quintic_point(const Eigen::Vector3d& from, const Eigen::Vector3d& to, double T,
                            double t) {
    TaskReference ref;
    if (T <= 0.0 || t >= T) {
        ref.position = to;
        return ref;
    }
    if (t <= 0.0) {
        ref.position = from;
        return ref;
    }
    const double u = t / T;
    const Eigen::Vector3d d = to - from;
    ref.position = from + smoothstep(u) * d;
    ref.velocity = (smoothstep_d(u) / T) * d;
    ref.acceleration = (smoothstep_dd(u) / (T * T)) * d;
    return ref;
}

Trajectory make_hold(const Scenario& sc) {
    const Eigen::Vector3d point = sc.hold_point;
    return Trajectory(sc.duration, [point](double) {
        TaskReference ref;
        ref.position = point;
        return ref;
    });
}

Trajectory make_circle(const Scenario& sc, bool helix) {
    const double omega = kTwoPi * sc.rate_hz;
    const double ramp = std::min(sc.ramp_time, sc.duration);
    const Eigen::Vector3d center = sc.center;
    const double radius = sc.radius;
    const double pitch_per_rad = helix ? sc.pitch / kTwoPi : 0.0;

    // Circle plane tilted about the x axis by the incline angle.
    const Eigen::Matrix3d tilt =
        Eigen::AngleAxisd(helix ? 0.0 : sc.incline, Eigen::Vector3d::UnitX()).toRotationMatrix();
    const Eigen::Vector3d u_axis = tilt * Eigen::Vector3d::UnitX();
    const Eigen::Vector3d v_axis = tilt * Eigen::Vector3d::UnitY();
    const Eigen::Vector3d w_axis = Eigen::Vector3d::UnitZ();

    return Trajectory(sc.duration, [=](double t) {
        double a, ad, add;
        phase(t, omega, ramp, a, ad, add);
        const double c = std::cos(a), s = std::sin(a);
        TaskReference ref;
        ref.position = center + radius * (c * u_axis + s * v_axis) + pitch_per_rad * a * w_axis;
        ref.velocity = radius * (-s * u_axis + c * v_axis) * ad + pitch_per_rad * ad * w_axis;
        ref.acceleration = radius * ((-c * u_axis - s * v_axis) * ad * ad +
                                     (-s * u_axis + c * v_axis) * add) +
                           pitch_per_rad * add * w_axis;
        return ref;
    });
}

Trajectory make_line(const Scenario& sc) {
    const Eigen::Vector3d from = sc.line_from, to = sc.line_to;
    const double T = sc.duration;
    return Trajectory(T, [=](double t) { return quintic_point(from, to, T, t); });
}

Trajectory make_pick(const Scenario& sc, const RobotModel& model) {
    std::vector<Waypoint> wps = sc.waypoints;
    if (wps.empty()) wps = default_pick_waypoints(model);

    struct Leg {
        double t0, t1;  // move window
        double t2;      // dwell end
        Eigen::Vector3d from, to;
    };
    std::vector<Leg> legs;
    std::vector<GripperEvent> events;
    Eigen::Vector3d cursor(0.0, 0.0, model.total_length());  // straight-pose tip
    double t = 0.0;
    bool grip = false;
    for (const Waypoint& wp : wps) {
        if (wp.move_duration <= 0.0)
            throw validation_error("pick_place: waypoint move_duration must be > 0");
        Leg leg;
        leg.t0 = t;
        leg.t1 = t + wp.move_duration;
        leg.t2 = leg.t1 + std::max(0.0, wp.dwell);
        leg.from = cursor;
        leg.to = wp.position;
        legs.push_back(leg);
        if (wp.gripper_closed != grip) {
            grip = wp.gripper_closed;
            events.push_back({leg.t1, grip});
        }
        cursor = wp.position;
        t = leg.t2;
    }
    const double total = t;

    return Trajectory(total,
                      [legs](double tq) {
                          for (const Leg& leg : legs) {
                              if (tq <= leg.t2 || &leg == &legs.back()) {
                                  return quintic_point(leg.from, leg.to, leg.t1 - leg.t0,
                                                       tq - leg.t0);
                              }
                          }
                          TaskReference ref;
                          ref.position = legs.back().to;
                          return ref;
                      },
                      std::move(events));
}

}  // namespace

std::vector<Waypoint> default_pick_waypoints(const RobotModel& model) {
    const double reach = model.total_length();
    const double lateral = 0.5 * reach;
    const double low = 0.55 * reach;
    const double high = reach + 0.5 * model.stroke_max;
    return {
        {{lateral, 0.0, reach}, 2.0, 0.0, false},
        {{lateral, 0.0, low}, 1.5, 0.5, true},    // descend and grasp
        {{lateral, 0.0, high}, 1.5, 0.0, true},   // lift
        {{-lateral, 0.0, high}, 2.0, 0.0, true},  // traverse
        {{-lateral, 0.0, low}, 1.5, 0.5, false},  // descend and release
        {{0.0, 0.0, reach}, 2.0, 0.0, false},     // home
    };
}

void apply_default_geometry(Scenario& scenario, const RobotModel& model) {
    const double tip_z = model.total_length();
    const Eigen::Vector3d straight_tip(0.0, 0.0, tip_z);
    const auto zero = [](const Eigen::Vector3d& v) { return v.isZero(0.0); };

    switch (scenario.kind) {
        case ScenarioKind::hold:
            if (zero(scenario.hold_point)) scenario.hold_point = straight_tip;
            break;
        case ScenarioKind::track_helix:
        case ScenarioKind::track_circle:
            if (zero(scenario.center)) scenario.center = straight_tip;
            break;
        case ScenarioKind::track_line:
            if (zero(scenario.line_from) && zero(scenario.line_to)) {
                // 0.12 m diagonal spanning the prismatic stroke
                const double rise = std::sqrt(0.12 * 0.12 - 0.08 * 0.08);
                scenario.line_from = Eigen::Vector3d(-0.04, 0.0, 0.7 * tip_z);
                scenario.line_to = Eigen::Vector3d(0.04, 0.0, 0.7 * tip_z + rise);
            }
            break;
        default:
            break;
    }
}

Trajectory generate_trajectory(const Scenario& scenario, const RobotModel& model) {
    if (!(scenario.duration > 0.0) && scenario.kind != ScenarioKind::pick_place)
        throw validation_error("scenario duration must be positive");

    Trajectory traj;
    switch (scenario.kind) {
        case ScenarioKind::hold:
            traj = make_hold(scenario);
            break;
        case ScenarioKind::track_helix:
            traj = make_circle(scenario, true);
            break;
        case ScenarioKind::track_circle:
            traj = make_circle(scenario, false);
            break;
        case ScenarioKind::track_line:
            traj = make_line(scenario);
            break;
        case ScenarioKind::pick_place:
            traj = make_pick(scenario, model);
            break;
        case ScenarioKind::workspace:
            throw validation_error("workspace scenarios sample kinematics; nothing to track");
    }

    const double reach =
        model.total_length() + (scenario.prismatic_enabled ? model.stroke_max : 0.0);
    constexpr double dt = 1e-3;
    const int steps = static_cast<int>(std::ceil(traj.duration() / dt));
    for (int i = 0; i <= steps; ++i) {
        const double t = std::min(traj.duration(), i * dt);
        const TaskReference ref = traj.at(t);
        if (!ref.position.allFinite())
            throw validation_error("reference trajectory is non-finite");
        if (ref.position.norm() > reach + 1e-9) {
            std::ostringstream msg;
            msg << "reference point (" << ref.position.transpose() << ") at t=" << t
                << " lies outside the reachable sphere of radius " << reach
                << (scenario.prismatic_enabled ? "" : " (prismatic joint disabled)");
            throw validation_error(msg.str());
        }
    }
    return traj;
}

}  // namespace softarm
