#pragma once

#include <Eigen/Dense>
#include <vector>

namespace softarm {

/// Generalized coordinates of the arm-plus-prismatic chain.
///
/// Vector order everywhere in the library is
///   [prismatic_ext, seg0_phi_x, seg0_phi_y, seg1_phi_x, seg1_phi_y, ...]
/// where (phi_x, phi_y) are the bend-angle components of a constant-curvature
/// segment: total bend theta = hypot(phi_x, phi_y), bending plane
/// beta = atan2(phi_y, phi_x).
struct Configuration {
    double prismatic_ext = 0.0;                  // m, along +z
    std::vector<Eigen::Vector2d> segments;       // (phi_x, phi_y) per segment, rad

    int segment_count() const { return static_cast<int>(segments.size()); }
    int dof() const { return 1 + 2 * segment_count(); }

    Eigen::VectorXd to_vector() const;
    static Configuration from_vector(const Eigen::VectorXd& v, int segment_count);
    static Configuration zero(int segment_count);
};

/// Time derivatives of a Configuration (also used for accelerations).
struct ConfigurationRates {
    double prismatic_rate = 0.0;                 // m/s
    std::vector<Eigen::Vector2d> segment_rates;  // rad/s

    int segment_count() const { return static_cast<int>(segment_rates.size()); }
    int dof() const { return 1 + 2 * segment_count(); }

    Eigen::VectorXd to_vector() const;
    static ConfigurationRates from_vector(const Eigen::VectorXd& v, int segment_count);
    static ConfigurationRates zero(int segment_count);
};

struct Pose {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    Eigen::Matrix3d orientation = Eigen::Matrix3d::Identity();
};

/// Immutable geometric/inertial/actuator parameter set, normally loaded from
/// a config file. validate() throws config_error naming the offending field.
struct RobotModel {
    std::vector<double> segment_lengths;   // m
    std::vector<double> segment_masses;    // kg
    int lumped_masses_per_segment = 5;     // point masses per segment arc
    double shaft_mass = 0.0;               // kg, inner shaft + base platform
    double payload_mass = 0.0;             // kg, carried at the tip
    double piston_area = 0.0;              // m^2
    int pam_count = 0;                     // number of artificial muscles
    int lever_count = 0;                   // number of lever arms
    double lever_ratio = 0.0;              // contraction multiplier, > 1
    double pam_area = 0.0;                 // m^2, effective muscle area
    double stroke_max = 0.0;               // m, prismatic travel
    double chamber_moment_arm = 0.0;       // m
    double chamber_gain = 0.0;             // N/Pa, chamber pressure-to-force
    double stiffness_per_segment = 0.0;    // N*m/rad, per bend coordinate
    double damping_per_segment = 0.0;      // N*m*s/rad, per bend coordinate
    double pressure_limit = 0.0;           // Pa
    double bend_limit = 0.0;               // rad, per bend component
    Eigen::Vector3d gravity = Eigen::Vector3d::Zero();  // m/s^2

    int segment_count() const { return static_cast<int>(segment_lengths.size()); }
    int dof() const { return 1 + 2 * segment_count(); }
    int chamber_count() const { return 3 * segment_count(); }
    int pressure_dof() const { return chamber_count() + 2; }  // chambers + pam + piston

    double total_length() const;
    /// Combined mass carried by the prismatic joint: shaft + segments + payload.
    double total_mass() const;
    /// Net muscle force per Pa of overpressure: pam_count*lever_ratio*pam_area/lever_count.
    double pam_force_gain() const;

    void validate() const;
};

/// Throws std::domain_error if q does not match the model's segment count
/// or contains non-finite entries.
void check_shape(const RobotModel& model, const Configuration& q);
void check_shape(const RobotModel& model, const ConfigurationRates& qd);

}  // namespace softarm
