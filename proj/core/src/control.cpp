#include "softarm/control.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

#include "softarm/errors.hpp"
#include "softarm/kinematics.hpp"

namespace softarm {

namespace {

Eigen::Vector3d norm_clamped(const Eigen::Vector3d& v, double max_norm) {
    const double n = v.norm();
    if (n <= max_norm || n == 0.0) return v;
    return v * (max_norm / n);
}

}  // namespace

Eigen::Vector3d pd_reference(const ControllerGains& gains, const TaskReference& ref,
                             const Eigen::Vector3d& position, const Eigen::Vector3d& velocity) {
    if (!position.allFinite() || !velocity.allFinite() || !ref.position.allFinite() ||
        !ref.velocity.allFinite() || !ref.acceleration.allFinite())
        throw std::domain_error("pd_reference: non-finite input");
    const Eigen::Vector3d p_term =
        norm_clamped(gains.kp * (ref.position - position), gains.accel_saturation);
    const Eigen::Vector3d d_term =
        norm_clamped(gains.kd * (ref.velocity - velocity), gains.accel_saturation);
    return ref.acceleration + p_term + d_term;
}

Eigen::MatrixXd damped_pinv(const Eigen::MatrixXd& j, double lambda) {
    const Eigen::MatrixXd jjt = j * j.transpose();
    const double sigma_max_sq = jjt.norm();  // Frobenius bound, cheap and adequate
    const double mu = lambda * lambda * sigma_max_sq;
    Eigen::MatrixXd m = jjt;
    m.diagonal().array() += mu;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        (mu == 0.0 && std::abs(m.determinant()) < 1e-300)) {
        throw numerical_error(
            "damped_pinv: J*J^T is singular; use a positive pinv damping value");
    }
    return ldlt.solve(j).transpose();
}

Eigen::VectorXd inverse_dynamics_projection(const DynamicsTerms& terms,
                                            const Eigen::Vector3d& xdd_ref,
                                            const ConfigurationRates& qd,
                                            const ControllerGains& gains) {
    const Eigen::VectorXd qdv = qd.to_vector();
    if (terms.jacobian.cols() != qdv.size())
        throw std::domain_error("inverse_dynamics_projection: shape mismatch");
    const Eigen::MatrixXd j_pinv = damped_pinv(terms.jacobian, gains.pinv_damping);
    const Eigen::Vector3d task = xdd_ref - terms.jacobian_dot * qdv;
    const Eigen::VectorXd tau_null = -gains.kd * qdv;
    const Eigen::MatrixXd projector =
        Eigen::MatrixXd::Identity(qdv.size(), qdv.size()) - j_pinv * terms.jacobian;
    return j_pinv * task + projector * tau_null;
}

Eigen::VectorXd invert_for_pressure(const RobotModel& model, const DynamicsTerms& terms,
                                    const Configuration& q, const ConfigurationRates& qd,
                                    const Eigen::VectorXd& qdd_ref) {
    const int n = model.dof();
    if (qdd_ref.size() != n) throw std::domain_error("invert_for_pressure: shape mismatch");
    const Eigen::VectorXd qv = q.to_vector();
    const Eigen::VectorXd qdv = qd.to_vector();

    Eigen::VectorXd force = terms.inertia * qdd_ref + terms.stiffness * qv +
                            terms.damping * qdv + terms.coriolis + terms.gravity;
    // The prismatic gravity share is handled by the static-pressure feedback
    // applied in arbitration, not by the pressure inversion.
    force[0] -= terms.gravity[0];

    // The actuation matrix is block-diagonal with fixed full-rank blocks
    // whose singular values are all equal, so its pseudoinverse reduces to
    // exact per-block gain division; damping would only rescale the command
    // uniformly, and the resulting torque bias (amplified by B^-1) is large
    // enough to break the inverse-dynamics round trip.
    const double torque_gain = model.chamber_gain * model.chamber_moment_arm;

    Eigen::VectorXd pressures(n);
    for (int i = 1; i < n; ++i) pressures[i] = force[i] / torque_gain;
    if (force[0] >= 0.0)
        pressures[0] = force[0] / model.pam_force_gain();
    else
        pressures[0] = force[0] / model.piston_area;
    return pressures;
}

ControlResult control_step(const RobotModel& model, const HysteresisModel& h,
                           const ControllerGains& gains, const TaskReference& ref,
                           const SimState& state) {
    const DynamicsTerms terms = assemble_terms(model, state.q, state.qd);
    const KinematicChain chain = build_chain(model, state.q);
    const Eigen::VectorXd qdv = state.qd.to_vector();

    const Eigen::Vector3d tip = chain.tip();
    const Eigen::Vector3d tip_velocity = terms.jacobian * qdv;
    const Eigen::Vector3d xdd_ref = pd_reference(gains, ref, tip, tip_velocity);
    const Eigen::VectorXd qdd_ref = inverse_dynamics_projection(terms, xdd_ref, state.qd, gains);
    const Eigen::VectorXd signed_pressures =
        invert_for_pressure(model, terms, state.q, state.qd, qdd_ref);

    const double torque_gain = model.chamber_gain * model.chamber_moment_arm;
    ControlResult result;
    result.command.chambers.resize(model.chamber_count());
    for (int s = 0; s < model.segment_count(); ++s) {
        const Eigen::Vector2d torque(torque_gain * signed_pressures[1 + 2 * s],
                                     torque_gain * signed_pressures[2 + 2 * s]);
        const ChamberAllocation alloc = allocate_chambers(torque, model);
        for (int j = 0; j < 3; ++j) result.command.chambers[3 * s + j] = alloc.pressures[j];
        result.saturated = result.saturated || alloc.saturated;
    }
    const PrismaticSplit split = arbitrate_prismatic(signed_pressures[0], h, model,
                                                     state.q.prismatic_ext,
                                                     state.qd.prismatic_rate);
    result.command.pam = split.pam;
    result.command.piston = split.piston;
    result.saturated = result.saturated || split.saturated;

    if (!result.command.to_vector().allFinite())
        throw numerical_error("control_step: produced non-finite pressures");
    return result;
}

}  // namespace softarm
