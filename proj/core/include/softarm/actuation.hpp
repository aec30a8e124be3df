#pragma once

#include <vector>

#include "softarm/hysteresis.hpp"
#include "softarm/types.hpp"

namespace softarm {

/// Full pressure input to the plant: three chamber pressures per segment,
/// one muscle (PAM) pressure and one piston pressure, all in [0, p_max].
/// While the piston pushes, the muscles are held at the static pressure so
/// the arm keeps carrying its own weight; exclusivity therefore applies to
/// the muscle *overpressure* (pam - p_s) and the piston pressure.
struct PressureCommand {
    std::vector<double> chambers;  // 3 per segment, segment-major
    double pam = 0.0;
    double piston = 0.0;

    Eigen::VectorXd to_vector() const;  // [chambers..., pam, piston]
};

/// Piston acceleration of the prismatic coordinate: pushes downward
/// (negative extension rate), magnitude piston_area * p / total_mass.
/// Friction is neglected (lubricated shaft).
double piston_accel(const RobotModel& model, double piston_pressure);

/// Muscle acceleration of the prismatic coordinate: proportional to the
/// overpressure beyond the velocity-resolved static pressure, positive
/// (contraction, upward) when pam_pressure exceeds it. The lever arms
/// multiply contraction by lever_ratio at the cost of force.
double pam_accel(const RobotModel& model, const HysteresisModel& h, double ext, double ext_rate,
                 double pam_pressure);

/// dof x (3*segments + 2) map from flattened pressures to generalized
/// forces. Chamber j of a segment acts at 120 deg spacing: its torque
/// contribution is chamber_gain * moment_arm * (cos(2*pi*j/3), sin(2*pi*j/3)).
/// The prismatic row carries +pam_force_gain on the pam column and
/// -piston_area on the piston column.
Eigen::MatrixXd actuation_matrix(const RobotModel& model, const Configuration& q,
                                 const ConfigurationRates& qd);

/// Generalized force the plant feels under a pressure command. Equals
/// actuation_matrix * pressures plus the prismatic offset
/// -pam_force_gain * p_s(q, qd) + weight, i.e. the measured static curve
/// stands in for gravity on the prismatic coordinate: at pam = p_s the
/// prismatic coordinate is in exact equilibrium.
Eigen::VectorXd generalized_force(const RobotModel& model, const HysteresisModel& h,
                                  const Configuration& q, const ConfigurationRates& qd,
                                  const PressureCommand& cmd);

struct ChamberAllocation {
    Eigen::Vector3d pressures = Eigen::Vector3d::Zero();
    bool saturated = false;
};

/// Non-negative chamber pressures realizing a bend torque pair: the
/// least-norm signed solution shifted by a common offset so the minimum
/// pressure is zero (a common shift adds no torque), then clamped to
/// [0, p_max] with a saturation flag.
ChamberAllocation allocate_chambers(const Eigen::Vector2d& torque_xy, const RobotModel& model);

struct PrismaticSplit {
    double pam = 0.0;
    double piston = 0.0;
    bool saturated = false;
};

/// Signed prismatic pressure -> (pam, piston): positive demands go to the
/// muscles on top of the static pressure, negative demands to the piston
/// while the muscles hold the static pressure, zero holds position.
PrismaticSplit arbitrate_prismatic(double signed_pressure, const HysteresisModel& h,
                                   const RobotModel& model, double ext, double ext_rate);

}  // namespace softarm
