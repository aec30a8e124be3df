#pragma once

#include <vector>

#include "softarm/types.hpp"

namespace softarm {

/// Transform across one constant-curvature segment.
///
/// The segment leaves its base frame along +z and bends by
/// theta = hypot(phi_x, phi_y) in the plane at angle atan2(phi_y, phi_x)
/// from the x-z plane. Near theta = 0 the closed form is evaluated by
/// series expansion so the map stays smooth through the straight pose.
Pose segment_transform(double phi_x, double phi_y, double length);

/// Per-segment tip poses. The base is first translated by prismatic_ext
/// along +z, then segment transforms are composed in order; the last pose
/// is the manipulator tip.
std::vector<Pose> forward_kinematics(const RobotModel& model, const Configuration& q);

/// 3 x dof positional Jacobian of the tip: column i is d(tip)/dq_i.
/// Column 0 (prismatic) is exactly (0, 0, 1).
Eigen::Matrix3Xd tip_jacobian(const RobotModel& model, const Configuration& q);

/// dJ/dt along the given configuration rates, computed as a symmetric
/// directional difference of tip_jacobian.
Eigen::Matrix3Xd jacobian_time_derivative(const RobotModel& model, const Configuration& q,
                                          const ConfigurationRates& qd);

/// Cached forward-kinematics pass with enough per-segment data to evaluate
/// positions and analytic Jacobians of arbitrary points on the arc. Used by
/// the dynamics assembly, which needs a Jacobian per lumped mass.
struct SegmentFrame {
    double phi_x = 0.0, phi_y = 0.0, length = 0.0;
    Eigen::Vector3d base_origin = Eigen::Vector3d::Zero();   // world, segment start
    Eigen::Matrix3d base_rot = Eigen::Matrix3d::Identity();  // world, segment start
    Eigen::Vector3d tip_origin = Eigen::Vector3d::Zero();    // world, segment end
    Eigen::Matrix3d tip_rot = Eigen::Matrix3d::Identity();   // world, segment end
    // World-frame partials of the segment's own tip position.
    Eigen::Vector3d dtip_dx = Eigen::Vector3d::Zero();
    Eigen::Vector3d dtip_dy = Eigen::Vector3d::Zero();
    // World-frame rotational influence vectors: a unit change of phi_x
    // (resp. phi_y) rotates everything downstream of the segment by
    // omega_x (resp. omega_y) about the segment tip.
    Eigen::Vector3d omega_x = Eigen::Vector3d::Zero();
    Eigen::Vector3d omega_y = Eigen::Vector3d::Zero();
};

struct KinematicChain {
    Eigen::Vector3d base = Eigen::Vector3d::Zero();  // (0, 0, prismatic_ext)
    std::vector<SegmentFrame> segments;

    int dof() const { return 1 + 2 * static_cast<int>(segments.size()); }
    const Eigen::Vector3d& tip() const { return segments.back().tip_origin; }
};

KinematicChain build_chain(const RobotModel& model, const Configuration& q);

/// Position of the point at arc-length fraction `fraction` in (0, 1] along
/// segment `segment`; fraction 0 with segment 0 is the chain base.
Eigen::Vector3d station_position(const KinematicChain& chain, int segment, double fraction);

/// 3 x dof positional Jacobian of an arc station.
Eigen::Matrix3Xd station_jacobian(const KinematicChain& chain, int segment, double fraction);

}  // namespace softarm
