#include "softarm/actuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace softarm {

namespace {

// 120-degree chamber directions, shared by the actuation matrix and the
// allocator so they stay exact inverses of each other.
void chamber_direction(int j, double& cx, double& sx) {
    const double angle = 2.0 * std::numbers::pi * j / 3.0;
    cx = std::cos(angle);
    sx = std::sin(angle);
}

}  // namespace

Eigen::VectorXd PressureCommand::to_vector() const {
    Eigen::VectorXd v(static_cast<int>(chambers.size()) + 2);
    for (size_t i = 0; i < chambers.size(); ++i) v[static_cast<int>(i)] = chambers[i];
    v[v.size() - 2] = pam;
    v[v.size() - 1] = piston;
    return v;
}

double piston_accel(const RobotModel& model, double piston_pressure) {
    if (!std::isfinite(piston_pressure) || piston_pressure < 0.0)
        throw std::domain_error("piston_accel: pressure must be finite and >= 0");
    return -model.piston_area * piston_pressure / model.total_mass();
}

double pam_accel(const RobotModel& model, const HysteresisModel& h, double ext, double ext_rate,
                 double pam_pressure) {
    if (!std::isfinite(pam_pressure) || pam_pressure < 0.0)
        throw std::domain_error("pam_accel: pressure must be finite and >= 0");
    const double overpressure = pam_pressure - static_pressure(h, ext, ext_rate);
    return model.pam_force_gain() * overpressure / model.total_mass();
}

Eigen::MatrixXd actuation_matrix(const RobotModel& model, const Configuration& q,
                                 const ConfigurationRates& qd) {
    check_shape(model, q);
    check_shape(model, qd);
    const int n = model.dof();
    const int m = model.pressure_dof();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, m);
    const double torque_gain = model.chamber_gain * model.chamber_moment_arm;
    for (int s = 0; s < model.segment_count(); ++s) {
        for (int j = 0; j < 3; ++j) {
            double cx, sx;
            chamber_direction(j, cx, sx);
            a(1 + 2 * s, 3 * s + j) = torque_gain * cx;
            a(2 + 2 * s, 3 * s + j) = torque_gain * sx;
        }
    }
    a(0, m - 2) = model.pam_force_gain();
    a(0, m - 1) = -model.piston_area;
    return a;
}

Eigen::VectorXd generalized_force(const RobotModel& model, const HysteresisModel& h,
                                  const Configuration& q, const ConfigurationRates& qd,
                                  const PressureCommand& cmd) {
    if (static_cast<int>(cmd.chambers.size()) != model.chamber_count())
        throw std::domain_error("generalized_force: chamber count mismatch");
    const Eigen::MatrixXd a = actuation_matrix(model, q, qd);
    Eigen::VectorXd tau = a * cmd.to_vector();
    const double p_s = static_pressure(h, q.prismatic_ext, qd.prismatic_rate);
    const double weight = -model.total_mass() * model.gravity.z();
    tau[0] += -model.pam_force_gain() * p_s + weight;
    return tau;
}

ChamberAllocation allocate_chambers(const Eigen::Vector2d& torque_xy, const RobotModel& model) {
    if (!torque_xy.allFinite())
        throw std::domain_error("allocate_chambers: non-finite torque request");
    const double torque_gain = model.chamber_gain * model.chamber_moment_arm;

    // Least-norm signed solution of the 2x3 chamber block: rows are
    // orthogonal with squared norm 3/2 * torque_gain^2.
    Eigen::Vector3d p;
    for (int j = 0; j < 3; ++j) {
        double cx, sx;
        chamber_direction(j, cx, sx);
        p[j] = (2.0 / (3.0 * torque_gain)) * (cx * torque_xy.x() + sx * torque_xy.y());
    }
    p.array() -= p.minCoeff();  // common offset is torque-free

    ChamberAllocation out;
    for (int j = 0; j < 3; ++j) {
        const double clamped = std::clamp(p[j], 0.0, model.pressure_limit);
        if (clamped != p[j]) out.saturated = true;
        out.pressures[j] = clamped;
    }
    return out;
}

PrismaticSplit arbitrate_prismatic(double signed_pressure, const HysteresisModel& h,
                                   const RobotModel& model, double ext, double ext_rate) {
    if (!std::isfinite(signed_pressure))
        throw std::domain_error("arbitrate_prismatic: non-finite input");
    const double p_s = static_pressure(h, ext, ext_rate);
    const double p_max = model.pressure_limit;

    PrismaticSplit split;
    if (signed_pressure > 0.0) {
        const double want = p_s + signed_pressure;
        split.pam = std::clamp(want, 0.0, p_max);
        split.piston = 0.0;
        split.saturated = want > p_max;
    } else if (signed_pressure < 0.0) {
        const double want = -signed_pressure;
        split.piston = std::clamp(want, 0.0, p_max);
        split.pam = std::clamp(p_s, 0.0, p_max);
        split.saturated = want > p_max || p_s > p_max;
    } else {
        split.pam = std::clamp(p_s, 0.0, p_max);
        split.piston = 0.0;
        split.saturated = p_s > p_max;
    }
    return split;
}

}  // namespace softarm
