#pragma once

#include "softarm/actuation.hpp"
#include "softarm/dynamics.hpp"
#include "softarm/types.hpp"

namespace softarm {

struct ControllerGains {
    double kp = 100.0;               // 1/s^2
    double kd = 20.0;                // 1/s
    double accel_saturation = 5.0;   // m/s^2, per feedback term
    double pinv_damping = 1e-3;      // dimensionless, relative to sigma_max
    double control_rate_hz = 100.0;  // command update rate
    double plant_rate_hz = 1000.0;   // integration rate
};

struct TaskReference {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();      // m
    Eigen::Vector3d velocity = Eigen::Vector3d::Zero();      // m/s
    Eigen::Vector3d acceleration = Eigen::Vector3d::Zero();  // m/s^2
};

/// Task-space PD with feedforward. Each feedback term (proportional and
/// derivative) is norm-clamped at accel_saturation before being added to the
/// feedforward acceleration.
Eigen::Vector3d pd_reference(const ControllerGains& gains, const TaskReference& ref,
                             const Eigen::Vector3d& position, const Eigen::Vector3d& velocity);

/// Damped right pseudoinverse J^T (J J^T + (lambda*sigma_max)^2 I)^-1.
/// Throws numerical_error when lambda = 0 and J J^T is singular.
Eigen::MatrixXd damped_pinv(const Eigen::MatrixXd& j, double lambda);

/// Task-to-joint acceleration resolution with nullspace velocity damping:
///   qdd_ref = J+ (xdd_ref - Jdot qd) + (I - J+ J) * (-kd * qd)
Eigen::VectorXd inverse_dynamics_projection(const DynamicsTerms& terms,
                                            const Eigen::Vector3d& xdd_ref,
                                            const ConfigurationRates& qd,
                                            const ControllerGains& gains);

/// Signed pressure-equivalents (one per coordinate) realizing the force
/// B qdd_ref + K q + D qd + c + g, with the prismatic gravity contribution
/// excluded: the arbitration's static-pressure feedback stands in for it.
/// Bend entries are torques divided by chamber_gain*moment_arm; the
/// prismatic entry divides by the muscle gain when pulling up and by the
/// piston area when pushing down, so the downstream allocation reproduces
/// the requested force exactly.
Eigen::VectorXd invert_for_pressure(const RobotModel& model, const DynamicsTerms& terms,
                                    const Configuration& q, const ConfigurationRates& qd,
                                    const Eigen::VectorXd& qdd_ref);

struct ControlResult {
    PressureCommand command;
    bool saturated = false;
};

/// One full control tick: PD reference, joint-space resolution, pressure
/// inversion, chamber allocation and prismatic arbitration. All emitted
/// pressures are finite and clamped to [0, p_max].
ControlResult control_step(const RobotModel& model, const HysteresisModel& h,
                           const ControllerGains& gains, const TaskReference& ref,
                           const SimState& state);

}  // namespace softarm
