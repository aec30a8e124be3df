#include "softarm/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace softarm {

namespace {

// Series switch for theta^2; at theta = 1e-4 rad the 4th-order series keeps
// relative error below 1e-12 while avoiding cancellation in (1 - cos).
constexpr double kThetaSqEps = 1e-8;

// Scalar shape functions of the arc, all smooth through theta = 0:
//   f = (1 - cos t)/t^2            g = d(f)/dt / t = (t sin t - 2(1-cos t))/t^4
//   s = sin t / t                  h = d(s)/dt / t = (t cos t - sin t)/t^3
// Position of the segment tip is L * (phi_x f, phi_y f, s), and its partials
// reduce to f, g, s, h combinations (see station_jacobian).
struct ArcShape {
    double f, g, s, h;
};

ArcShape arc_shape(double theta_sq) {
    ArcShape a;
    if (theta_sq < kThetaSqEps) {
        const double t2 = theta_sq, t4 = t2 * t2;
        a.f = 0.5 - t2 / 24.0 + t4 / 720.0;
        a.g = -1.0 / 12.0 + t2 / 180.0 - t4 / 6720.0;
        a.s = 1.0 - t2 / 6.0 + t4 / 120.0;
        a.h = -1.0 / 3.0 + t2 / 30.0 - t4 / 840.0;
    } else {
        const double t = std::sqrt(theta_sq);
        const double st = std::sin(t), ct = std::cos(t);
        a.f = (1.0 - ct) / theta_sq;
        a.g = (t * st - 2.0 * (1.0 - ct)) / (theta_sq * theta_sq);
        a.s = st / t;
        a.h = (t * ct - st) / (theta_sq * t);
    }
    return a;
}

// Rotation across the arc: exp of the rotation vector w = (-phi_y, phi_x, 0).
// Built from the quaternion so the result is orthonormal by construction.
Eigen::Matrix3d arc_rotation(double phi_x, double phi_y) {
    const double theta_sq = phi_x * phi_x + phi_y * phi_y;
    double half_sinc;  // sin(theta/2)/theta
    double half_cos;
    if (theta_sq < kThetaSqEps) {
        const double t2 = theta_sq;
        half_sinc = 0.5 - t2 / 48.0 + t2 * t2 / 3840.0;
        half_cos = 1.0 - t2 / 8.0 + t2 * t2 / 384.0;
    } else {
        const double t = std::sqrt(theta_sq);
        half_sinc = std::sin(0.5 * t) / t;
        half_cos = std::cos(0.5 * t);
    }
    Eigen::Quaterniond quat(half_cos, -phi_y * half_sinc, phi_x * half_sinc, 0.0);
    return quat.toRotationMatrix();
}

Eigen::Matrix3d skew(const Eigen::Vector3d& w) {
    Eigen::Matrix3d m;
    m << 0.0, -w.z(), w.y(), w.z(), 0.0, -w.x(), -w.y(), w.x(), 0.0;
    return m;
}

// Left Jacobian of SO(3) for the rotation vector w: maps a rate of w to the
// world angular velocity of exp(w^).
Eigen::Matrix3d so3_left_jacobian(const Eigen::Vector3d& w) {
    const double theta_sq = w.squaredNorm();
    double c1;  // (1 - cos t)/t^2
    double c2;  // (t - sin t)/t^3
    if (theta_sq < kThetaSqEps) {
        const double t2 = theta_sq;
        c1 = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
        c2 = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
    } else {
        const double t = std::sqrt(theta_sq);
        c1 = (1.0 - std::cos(t)) / theta_sq;
        c2 = (t - std::sin(t)) / (theta_sq * t);
    }
    const Eigen::Matrix3d w_hat = skew(w);
    return Eigen::Matrix3d::Identity() + c1 * w_hat + c2 * w_hat * w_hat;
}

// Tip position of an arc in its own base frame.
Eigen::Vector3d arc_position(double phi_x, double phi_y, double length) {
    const ArcShape a = arc_shape(phi_x * phi_x + phi_y * phi_y);
    return length * Eigen::Vector3d(phi_x * a.f, phi_y * a.f, a.s);
}

// Partials of arc_position with respect to (phi_x, phi_y), base frame.
void arc_position_partials(double phi_x, double phi_y, double length, Eigen::Vector3d& dpx,
                           Eigen::Vector3d& dpy) {
    const ArcShape a = arc_shape(phi_x * phi_x + phi_y * phi_y);
    dpx = length * Eigen::Vector3d(a.f + phi_x * phi_x * a.g, phi_x * phi_y * a.g, phi_x * a.h);
    dpy = length * Eigen::Vector3d(phi_x * phi_y * a.g, a.f + phi_y * phi_y * a.g, phi_y * a.h);
}

void require_finite_inputs(double phi_x, double phi_y, double length) {
    if (!std::isfinite(phi_x) || !std::isfinite(phi_y) || !std::isfinite(length))
        throw std::domain_error("segment_transform: non-finite input");
    if (length <= 0.0) throw std::domain_error("segment_transform: length must be positive");
}

}  // namespace

Pose segment_transform(double phi_x, double phi_y, double length) {
    require_finite_inputs(phi_x, phi_y, length);
    Pose pose;
    pose.position = arc_position(phi_x, phi_y, length);
    pose.orientation = arc_rotation(phi_x, phi_y);
    return pose;
}

KinematicChain build_chain(const RobotModel& model, const Configuration& q) {
    check_shape(model, q);
    KinematicChain chain;
    chain.base = Eigen::Vector3d(0.0, 0.0, q.prismatic_ext);
    chain.segments.resize(model.segment_count());

    Eigen::Vector3d origin = chain.base;
    Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
    for (int s = 0; s < model.segment_count(); ++s) {
        SegmentFrame& f = chain.segments[s];
        f.phi_x = q.segments[s].x();
        f.phi_y = q.segments[s].y();
        f.length = model.segment_lengths[s];
        f.base_origin = origin;
        f.base_rot = rot;

        const Eigen::Vector3d local_tip = arc_position(f.phi_x, f.phi_y, f.length);
        const Eigen::Matrix3d local_rot = arc_rotation(f.phi_x, f.phi_y);
        f.tip_origin = origin + rot * local_tip;
        f.tip_rot = rot * local_rot;

        Eigen::Vector3d dpx, dpy;
        arc_position_partials(f.phi_x, f.phi_y, f.length, dpx, dpy);
        f.dtip_dx = rot * dpx;
        f.dtip_dy = rot * dpy;

        const Eigen::Vector3d w(-f.phi_y, f.phi_x, 0.0);
        const Eigen::Matrix3d influence = rot * so3_left_jacobian(w);
        f.omega_x = influence.col(1);   // d(w)/d(phi_x) = +e_y
        f.omega_y = -influence.col(0);  // d(w)/d(phi_y) = -e_x

        origin = f.tip_origin;
        rot = f.tip_rot;
    }
    return chain;
}

std::vector<Pose> forward_kinematics(const RobotModel& model, const Configuration& q) {
    const KinematicChain chain = build_chain(model, q);
    std::vector<Pose> poses(chain.segments.size());
    for (size_t s = 0; s < chain.segments.size(); ++s) {
        poses[s].position = chain.segments[s].tip_origin;
        poses[s].orientation = chain.segments[s].tip_rot;
    }
    return poses;
}

Eigen::Vector3d station_position(const KinematicChain& chain, int segment, double fraction) {
    const SegmentFrame& f = chain.segments.at(segment);
    if (fraction <= 0.0) return f.base_origin;
    const Eigen::Vector3d local =
        arc_position(fraction * f.phi_x, fraction * f.phi_y, fraction * f.length);
    return f.base_origin + f.base_rot * local;
}

Eigen::Matrix3Xd station_jacobian(const KinematicChain& chain, int segment, double fraction) {
    const int n = chain.dof();
    Eigen::Matrix3Xd jac = Eigen::Matrix3Xd::Zero(3, n);
    jac.col(0) = Eigen::Vector3d::UnitZ();  // prismatic column, exact

    const Eigen::Vector3d point = station_position(chain, segment, fraction);

    // Upstream segments rotate and translate the station rigidly.
    for (int j = 0; j < segment; ++j) {
        const SegmentFrame& f = chain.segments[j];
        const Eigen::Vector3d lever = point - f.tip_origin;
        jac.col(1 + 2 * j) = f.dtip_dx + f.omega_x.cross(lever);
        jac.col(2 + 2 * j) = f.dtip_dy + f.omega_y.cross(lever);
    }

    // The station's own segment: the sub-arc up to `fraction` has the same
    // curvature, so its position is arc_position(fraction*phi, fraction*L)
    // and the partial with respect to phi picks up a factor of fraction.
    if (fraction > 0.0) {
        const SegmentFrame& f = chain.segments[segment];
        Eigen::Vector3d dpx, dpy;
        arc_position_partials(fraction * f.phi_x, fraction * f.phi_y, fraction * f.length, dpx,
                              dpy);
        jac.col(1 + 2 * segment) = f.base_rot * (fraction * dpx);
        jac.col(2 + 2 * segment) = f.base_rot * (fraction * dpy);
    }
    return jac;
}

Eigen::Matrix3Xd tip_jacobian(const RobotModel& model, const Configuration& q) {
    const KinematicChain chain = build_chain(model, q);
    return station_jacobian(chain, model.segment_count() - 1, 1.0);
}

Eigen::Matrix3Xd jacobian_time_derivative(const RobotModel& model, const Configuration& q,
                                          const ConfigurationRates& qd) {
    check_shape(model, q);
    check_shape(model, qd);
    constexpr double h = 1e-6;
    const int n_seg = model.segment_count();
    const Eigen::VectorXd qv = q.to_vector();
    const Eigen::VectorXd qdv = qd.to_vector();
    const Configuration q_plus = Configuration::from_vector(qv + h * qdv, n_seg);
    const Configuration q_minus = Configuration::from_vector(qv - h * qdv, n_seg);
    return (tip_jacobian(model, q_plus) - tip_jacobian(model, q_minus)) / (2.0 * h);
}

}  // namespace softarm
