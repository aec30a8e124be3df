#pragma once

#include <functional>

#include "softarm/types.hpp"

namespace softarm {

/// Equation-of-motion terms at a given state, assembled from lumped point
/// masses placed at equal arc fractions along each segment:
///   B qdd + K q + D qd + c + g = tau
struct DynamicsTerms {
    Eigen::MatrixXd inertia;        // B, symmetric positive definite
    Eigen::MatrixXd stiffness;      // K, diagonal, zero prismatic row
    Eigen::MatrixXd damping;        // D, diagonal, zero prismatic row
    Eigen::VectorXd coriolis;       // c(q, qd)
    Eigen::VectorXd gravity;        // g(q)
    Eigen::Matrix3Xd jacobian;      // tip Jacobian J
    Eigen::Matrix3Xd jacobian_dot;  // dJ/dt along qd
};

struct SimState {
    Configuration q;
    ConfigurationRates qd;
    double t = 0.0;
};

struct StepResult {
    SimState state;
    bool limit_event = false;  // a joint limit clamped position and zeroed velocity
};

/// Inertia matrix alone (no velocity terms); cheaper than assemble_terms
/// and reused by its Christoffel finite differences.
Eigen::MatrixXd inertia_matrix(const RobotModel& model, const Configuration& q);

Eigen::VectorXd gravity_vector(const RobotModel& model, const Configuration& q);

/// Gravitational potential of the lumped masses; gravity_vector is its
/// exact gradient, which the tests check by finite differences.
double potential_energy(const RobotModel& model, const Configuration& q);

double kinetic_energy(const RobotModel& model, const SimState& state);

DynamicsTerms assemble_terms(const RobotModel& model, const Configuration& q,
                             const ConfigurationRates& qd);

/// Solves B qdd = tau + J^T f - K q - D qd - c - g, where f is an external
/// task-space force at the tip (zero in every shipped scenario). Throws
/// numerical_error with diagnostics if B is not positive definite or its
/// condition number exceeds 1e12.
ConfigurationRates forward_dynamics(const RobotModel& model, const SimState& state,
                                    const Eigen::VectorXd& generalized_force,
                                    const Eigen::Vector3d& task_force = Eigen::Vector3d::Zero());

using ForceFunction = std::function<Eigen::VectorXd(const SimState&)>;

/// One classic 4th-order Runge-Kutta step of (q, qd). The force callback is
/// evaluated at every stage state. Joint limits (prismatic stroke, per-axis
/// bend limit) are enforced afterwards by clamping the position and zeroing
/// the offending velocity component; any clamp is reported as a limit event.
/// Throws simulation_error if the state stops being finite.
StepResult step_with_force(const RobotModel& model, const SimState& state,
                           const ForceFunction& force, double dt);

/// Same with a force held constant across the step.
StepResult step(const RobotModel& model, const SimState& state,
                const Eigen::VectorXd& generalized_force, double dt);

}  // namespace softarm
