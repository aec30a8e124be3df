#include "softarm/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "softarm/errors.hpp"

namespace softarm {

Eigen::VectorXd Configuration::to_vector() const {
    Eigen::VectorXd v(dof());
    v[0] = prismatic_ext;
    for (int s = 0; s < segment_count(); ++s) {
        v[1 + 2 * s] = segments[s].x();
        v[2 + 2 * s] = segments[s].y();
    }
    return v;
}

Configuration Configuration::from_vector(const Eigen::VectorXd& v, int segment_count) {
    if (v.size() != 1 + 2 * segment_count)
        throw std::domain_error("Configuration::from_vector: size mismatch");
    Configuration q;
    q.prismatic_ext = v[0];
    q.segments.resize(segment_count);
    for (int s = 0; s < segment_count; ++s)
        q.segments[s] = Eigen::Vector2d(v[1 + 2 * s], v[2 + 2 * s]);
    return q;
}

Configuration Configuration::zero(int segment_count) {
    Configuration q;
    q.segments.assign(segment_count, Eigen::Vector2d::Zero());
    return q;
}

Eigen::VectorXd ConfigurationRates::to_vector() const {
    Eigen::VectorXd v(dof());
    v[0] = prismatic_rate;
    for (int s = 0; s < segment_count(); ++s) {
        v[1 + 2 * s] = segment_rates[s].x();
        v[2 + 2 * s] = segment_rates[s].y();
    }
    return v;
}

ConfigurationRates ConfigurationRates::from_vector(const Eigen::VectorXd& v, int segment_count) {
    if (v.size() != 1 + 2 * segment_count)
        throw std::domain_error("ConfigurationRates::from_vector: size mismatch");
    ConfigurationRates qd;
    qd.prismatic_rate = v[0];
    qd.segment_rates.resize(segment_count);
    for (int s = 0; s < segment_count; ++s)
        qd.segment_rates[s] = Eigen::Vector2d(v[1 + 2 * s], v[2 + 2 * s]);
    return qd;
}

ConfigurationRates ConfigurationRates::zero(int segment_count) {
    ConfigurationRates qd;
    qd.segment_rates.assign(segment_count, Eigen::Vector2d::Zero());
    return qd;
}

double RobotModel::total_length() const {
    double sum = 0.0;
    for (double l : segment_lengths) sum += l;
    return sum;
}

double RobotModel::total_mass() const {
    double sum = shaft_mass + payload_mass;
    for (double m : segment_masses) sum += m;
    return sum;
}

double RobotModel::pam_force_gain() const {
    return pam_count * lever_ratio * pam_area / lever_count;
}

namespace {

void require(bool ok, const char* field, const char* what) {
    if (!ok) throw config_error(std::string(field) + ": " + what);
}

}  // namespace

void RobotModel::validate() const {
    require(!segment_lengths.empty(), "segment_lengths", "at least one segment required");
    require(segment_lengths.size() == segment_masses.size(), "segment_masses",
            "must match segment_lengths in count");
    for (double l : segment_lengths)
        require(std::isfinite(l) && l > 0.0, "segment_lengths", "entries must be positive");
    for (double m : segment_masses)
        require(std::isfinite(m) && m > 0.0, "segment_masses", "entries must be positive");
    require(lumped_masses_per_segment >= 1, "lumped_masses_per_segment", "must be >= 1");
    require(std::isfinite(shaft_mass) && shaft_mass > 0.0, "shaft_mass_kg", "must be positive");
    require(std::isfinite(payload_mass) && payload_mass >= 0.0, "payload_mass_kg",
            "must be non-negative");
    require(std::isfinite(piston_area) && piston_area > 0.0, "piston_area_m2", "must be positive");
    require(pam_count >= 1, "pam_count", "must be >= 1");
    require(lever_count >= 1, "lever_count", "must be >= 1");
    require(std::isfinite(lever_ratio) && lever_ratio > 1.0, "lever_ratio", "must be > 1");
    require(std::isfinite(pam_area) && pam_area > 0.0, "pam_area_m2", "must be positive");
    require(std::isfinite(stroke_max) && stroke_max > 0.0, "stroke_max_m", "must be positive");
    require(std::isfinite(chamber_moment_arm) && chamber_moment_arm > 0.0,
            "chamber_moment_arm_m", "must be positive");
    require(std::isfinite(chamber_gain) && chamber_gain > 0.0, "chamber_gain_n_per_pa",
            "must be positive");
    require(std::isfinite(stiffness_per_segment) && stiffness_per_segment >= 0.0,
            "stiffness_per_segment_nm_per_rad", "must be non-negative");
    require(std::isfinite(damping_per_segment) && damping_per_segment >= 0.0,
            "damping_per_segment_nms_per_rad", "must be non-negative");
    require(std::isfinite(pressure_limit) && pressure_limit > 0.0, "pressure_max_pa",
            "must be positive");
    require(pressure_limit <= 2.0e5, "pressure_max_pa", "valve array supplies at most 2 bar");
    require(std::isfinite(bend_limit) && bend_limit > 0.0, "bend_limit_rad", "must be positive");
    require(gravity.allFinite(), "gravity_mps2", "must be finite");
}

void check_shape(const RobotModel& model, const Configuration& q) {
    if (q.segment_count() != model.segment_count())
        throw std::domain_error("configuration segment count does not match model");
    if (!std::isfinite(q.prismatic_ext))
        throw std::domain_error("configuration contains non-finite prismatic extension");
    for (const auto& s : q.segments)
        if (!s.allFinite()) throw std::domain_error("configuration contains non-finite bend");
}

void check_shape(const RobotModel& model, const ConfigurationRates& qd) {
    if (qd.segment_count() != model.segment_count())
        throw std::domain_error("rates segment count does not match model");
    if (!std::isfinite(qd.prismatic_rate))
        throw std::domain_error("rates contain non-finite prismatic entry");
    for (const auto& s : qd.segment_rates)
        if (!s.allFinite()) throw std::domain_error("rates contain non-finite bend entry");
}

}  // namespace softarm
