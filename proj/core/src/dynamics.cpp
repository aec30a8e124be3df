#include "softarm/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "softarm/errors.hpp"
#include "softarm/kinematics.hpp"

namespace softarm {

namespace {

constexpr double kChristoffelStep = 1e-6;
constexpr double kMaxCondition = 1e12;
constexpr double kIntegratorMaxDt = 0.01;

struct MassStation {
    int segment;      // -1: base platform (shaft mass)
    double fraction;  // arc fraction within the segment
    double mass;      // kg
};

std::vector<MassStation> mass_stations(const RobotModel& model) {
    std::vector<MassStation> stations;
    const int per_segment = model.lumped_masses_per_segment;
    stations.reserve(model.segment_count() * per_segment + 2);
    stations.push_back({-1, 0.0, model.shaft_mass});
    for (int s = 0; s < model.segment_count(); ++s) {
        const double station_mass = model.segment_masses[s] / per_segment;
        for (int k = 0; k < per_segment; ++k)
            stations.push_back({s, (k + 0.5) / per_segment, station_mass});
    }
    if (model.payload_mass > 0.0)
        stations.push_back({model.segment_count() - 1, 1.0, model.payload_mass});
    return stations;
}

Eigen::Vector3d station_point(const KinematicChain& chain, const MassStation& st) {
    if (st.segment < 0) return chain.base;
    return station_position(chain, st.segment, st.fraction);
}

// The base platform moves only with the prismatic coordinate.
Eigen::Matrix3Xd base_jacobian(int dof) {
    Eigen::Matrix3Xd jac = Eigen::Matrix3Xd::Zero(3, dof);
    jac.col(0) = Eigen::Vector3d::UnitZ();
    return jac;
}

}  // namespace

Eigen::MatrixXd inertia_matrix(const RobotModel& model, const Configuration& q) {
    const KinematicChain chain = build_chain(model, q);
    const int n = model.dof();
    Eigen::MatrixXd inertia = Eigen::MatrixXd::Zero(n, n);
    for (const MassStation& st : mass_stations(model)) {
        const Eigen::Matrix3Xd jac =
            st.segment < 0 ? base_jacobian(n) : station_jacobian(chain, st.segment, st.fraction);
        inertia.noalias() += st.mass * jac.transpose() * jac;
    }
    // Symmetrize away accumulation round-off.
    return 0.5 * (inertia + inertia.transpose());
}

Eigen::VectorXd gravity_vector(const RobotModel& model, const Configuration& q) {
    const KinematicChain chain = build_chain(model, q);
    const int n = model.dof();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    for (const MassStation& st : mass_stations(model)) {
        const Eigen::Matrix3Xd jac =
            st.segment < 0 ? base_jacobian(n) : station_jacobian(chain, st.segment, st.fraction);
        g.noalias() -= st.mass * (jac.transpose() * model.gravity);
    }
    return g;
}

double potential_energy(const RobotModel& model, const Configuration& q) {
    const KinematicChain chain = build_chain(model, q);
    double v = 0.0;
    for (const MassStation& st : mass_stations(model))
        v -= st.mass * model.gravity.dot(station_point(chain, st));
    return v;
}

double kinetic_energy(const RobotModel& model, const SimState& state) {
    const Eigen::VectorXd qd = state.qd.to_vector();
    return 0.5 * qd.dot(inertia_matrix(model, state.q) * qd);
}

DynamicsTerms assemble_terms(const RobotModel& model, const Configuration& q,
                             const ConfigurationRates& qd) {
    check_shape(model, q);
    check_shape(model, qd);

    const int n = model.dof();
    const int n_seg = model.segment_count();
    DynamicsTerms terms;
    terms.inertia = inertia_matrix(model, q);
    terms.gravity = gravity_vector(model, q);
    terms.jacobian = tip_jacobian(model, q);
    terms.jacobian_dot = jacobian_time_derivative(model, q, qd);

    terms.stiffness = Eigen::MatrixXd::Zero(n, n);
    terms.damping = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        terms.stiffness(i, i) = model.stiffness_per_segment;
        terms.damping(i, i) = model.damping_per_segment;
    }

    // Coriolis/centrifugal vector from Christoffel symbols, with dB/dq_k by
    // central differences. Using the same derivative estimates for all three
    // Christoffel terms preserves the skew-symmetry of Bdot - 2C.
    const Eigen::VectorXd qv = q.to_vector();
    const Eigen::VectorXd qdv = qd.to_vector();
    std::vector<Eigen::MatrixXd> db(n);
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd qp = qv, qm = qv;
        qp[k] += kChristoffelStep;
        qm[k] -= kChristoffelStep;
        db[k] = (inertia_matrix(model, Configuration::from_vector(qp, n_seg)) -
                 inertia_matrix(model, Configuration::from_vector(qm, n_seg))) /
                (2.0 * kChristoffelStep);
    }
    terms.coriolis = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        double ci = 0.0;
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                const double gamma = 0.5 * (db[k](i, j) + db[j](i, k) - db[i](j, k));
                ci += gamma * qdv[j] * qdv[k];
            }
        }
        terms.coriolis[i] = ci;
    }
    return terms;
}

namespace {

Eigen::VectorXd solve_accel(const DynamicsTerms& terms, const SimState& state,
                            const Eigen::VectorXd& tau, const Eigen::Vector3d& task_force) {
    const Eigen::VectorXd qv = state.q.to_vector();
    const Eigen::VectorXd qdv = state.qd.to_vector();
    if (tau.size() != qv.size())
        throw std::domain_error("forward_dynamics: force vector size mismatch");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigs(terms.inertia,
                                                        Eigen::EigenvaluesOnly);
    const double lo = eigs.eigenvalues().minCoeff();
    const double hi = eigs.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > kMaxCondition) {
        std::ostringstream msg;
        msg << "forward_dynamics: inertia matrix ill-conditioned (min eig " << lo << ", max eig "
            << hi << ", cond " << (lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity())
            << ") at t=" << state.t;
        throw numerical_error(msg.str());
    }

    const Eigen::VectorXd rhs = tau + terms.jacobian.transpose() * task_force -
                                terms.stiffness * qv - terms.damping * qdv - terms.coriolis -
                                terms.gravity;
    return terms.inertia.ldlt().solve(rhs);
}

}  // namespace

ConfigurationRates forward_dynamics(const RobotModel& model, const SimState& state,
                                    const Eigen::VectorXd& generalized_force,
                                    const Eigen::Vector3d& task_force) {
    const DynamicsTerms terms = assemble_terms(model, state.q, state.qd);
    const Eigen::VectorXd qdd = solve_accel(terms, state, generalized_force, task_force);
    return ConfigurationRates::from_vector(qdd, model.segment_count());
}

StepResult step_with_force(const RobotModel& model, const SimState& state,
                           const ForceFunction& force, double dt) {
    if (!(dt > 0.0) || dt > kIntegratorMaxDt)
        throw std::domain_error("step: dt must lie in (0, 0.01] s");

    const int n_seg = model.segment_count();
    const auto accel = [&](const Eigen::VectorXd& qv, const Eigen::VectorXd& qdv,
                           double t) -> Eigen::VectorXd {
        if (!qv.allFinite() || !qdv.allFinite())
            throw simulation_error("step: state became non-finite during integration at t=" +
                                   std::to_string(t));
        SimState s;
        s.q = Configuration::from_vector(qv, n_seg);
        s.qd = ConfigurationRates::from_vector(qdv, n_seg);
        s.t = t;
        const Eigen::VectorXd tau = force(s);
        if (!tau.allFinite())
            throw simulation_error("step: non-finite generalized force at t=" +
                                   std::to_string(t));
        return forward_dynamics(model, s, tau).to_vector();
    };

    const Eigen::VectorXd q0 = state.q.to_vector();
    const Eigen::VectorXd v0 = state.qd.to_vector();
    const double t0 = state.t;

    const Eigen::VectorXd a1 = accel(q0, v0, t0);
    const Eigen::VectorXd q2 = q0 + 0.5 * dt * v0;
    const Eigen::VectorXd v2 = v0 + 0.5 * dt * a1;
    const Eigen::VectorXd a2 = accel(q2, v2, t0 + 0.5 * dt);
    const Eigen::VectorXd q3 = q0 + 0.5 * dt * v2;
    const Eigen::VectorXd v3 = v0 + 0.5 * dt * a2;
    const Eigen::VectorXd a3 = accel(q3, v3, t0 + 0.5 * dt);
    const Eigen::VectorXd q4 = q0 + dt * v3;
    const Eigen::VectorXd v4 = v0 + dt * a3;
    const Eigen::VectorXd a4 = accel(q4, v4, t0 + dt);

    Eigen::VectorXd q_next = q0 + (dt / 6.0) * (v0 + 2.0 * v2 + 2.0 * v3 + v4);
    Eigen::VectorXd v_next = v0 + (dt / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);

    if (!q_next.allFinite() || !v_next.allFinite()) {
        std::ostringstream msg;
        msg << "step: state became non-finite at t=" << t0 + dt
            << "; last valid state q=[" << q0.transpose() << "], qd=[" << v0.transpose() << "]";
        throw simulation_error(msg.str());
    }

    bool limit_event = false;
    const auto clamp_coord = [&](int i, double lo, double hi) {
        if (q_next[i] < lo) {
            q_next[i] = lo;
            if (v_next[i] < 0.0) v_next[i] = 0.0;
            limit_event = true;
        } else if (q_next[i] > hi) {
            q_next[i] = hi;
            if (v_next[i] > 0.0) v_next[i] = 0.0;
            limit_event = true;
        }
    };
    clamp_coord(0, 0.0, model.stroke_max);
    for (int i = 1; i < model.dof(); ++i) clamp_coord(i, -model.bend_limit, model.bend_limit);

    StepResult result;
    result.state.q = Configuration::from_vector(q_next, n_seg);
    result.state.qd = ConfigurationRates::from_vector(v_next, n_seg);
    result.state.t = t0 + dt;
    result.limit_event = limit_event;
    return result;
}

StepResult step(const RobotModel& model, const SimState& state,
                const Eigen::VectorXd& generalized_force, double dt) {
    return step_with_force(
        model, state, [&](const SimState&) { return generalized_force; }, dt);
}

}  // namespace softarm
