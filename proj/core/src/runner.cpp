#include "softarm/runner.hpp"

#include <cmath>
#include <sstream>

#include "softarm/errors.hpp"
#include "softarm/kinematics.hpp"

namespace softarm {

RunSummary summarize(const std::vector<RunRecord>& rows) {
    RunSummary s;
    if (rows.empty()) return s;
    double sum = 0.0, sum_sq = 0.0;
    for (const RunRecord& r : rows) {
        const double err = (r.tip - r.ref).norm();
        sum += err;
        sum_sq += err * err;
        for (double p : r.command.chambers) s.max_pressure = std::max(s.max_pressure, p);
        s.max_pressure = std::max({s.max_pressure, r.command.pam, r.command.piston});
        if (r.saturated) ++s.saturation_count;
        if (r.limit_event) ++s.limit_event_count;
    }
    s.mean_tip_error = sum / rows.size();
    s.rms_tip_error = std::sqrt(sum_sq / rows.size());
    return s;
}

RunLog run_scenario(const RobotModel& model, const HysteresisModel& h,
                    const ControllerGains& gains, const Scenario& scenario) {
    if (scenario.kind == ScenarioKind::workspace)
        throw validation_error("run_scenario: workspace scenarios are sampled, not simulated");

    Scenario sc = scenario;
    apply_default_geometry(sc, model);
    const Trajectory traj = generate_trajectory(sc, model);

    const double control_dt = 1.0 / gains.control_rate_hz;
    if (traj.duration() < control_dt)
        throw validation_error("scenario duration is below one control tick");
    const int substeps =
        std::max(1, static_cast<int>(std::lround(gains.plant_rate_hz / gains.control_rate_hz)));
    const double plant_dt = control_dt / substeps;
    const int ticks = static_cast<int>(std::lround(traj.duration() / control_dt));

    RunLog log;
    log.control_dt = control_dt;
    log.seed = sc.seed;
    log.gripper_events = traj.gripper_events();
    log.rows.reserve(ticks + 1);

    SimState state;
    state.q = Configuration::zero(model.segment_count());
    state.qd = ConfigurationRates::zero(model.segment_count());
    state.t = 0.0;

    for (int k = 0; k <= ticks; ++k) {
        const double t = k * control_dt;
        const TaskReference ref = traj.at(std::min(t, traj.duration()));

        ControlResult control;
        try {
            control = control_step(model, h, gains, ref, state);
        } catch (const numerical_error& err) {
            std::ostringstream msg;
            msg << "controller failed at t=" << t << ": " << err.what()
                << "; last valid state q=[" << state.q.to_vector().transpose() << "]";
            throw simulation_error(msg.str());
        }

        RunRecord row;
        row.t = t;
        row.q = state.q.to_vector();
        row.qd = state.qd.to_vector();
        row.tip = build_chain(model, state.q).tip();
        row.ref = ref.position;
        row.command = control.command;
        row.saturated = control.saturated;

        if (k < ticks) {
            const PressureCommand held = control.command;
            const auto force = [&](const SimState& s) {
                return generalized_force(model, h, s.q, s.qd, held);
            };
            bool limit = false;
            try {
                for (int i = 0; i < substeps; ++i) {
                    const StepResult result = step_with_force(model, state, force, plant_dt);
                    state = result.state;
                    limit = limit || result.limit_event;
                }
            } catch (const numerical_error& err) {
                std::ostringstream msg;
                msg << "plant integration failed after t=" << t << ": " << err.what()
                    << "; last valid state q=[" << state.q.to_vector().transpose() << "]";
                throw simulation_error(msg.str());
            }
            row.limit_event = limit;
        }
        log.rows.push_back(std::move(row));
    }

    log.summary = summarize(log.rows);
    log.scenario_name = [&] {
        switch (sc.kind) {
            case ScenarioKind::hold: return "hold";
            case ScenarioKind::track_helix: return "track_helix";
            case ScenarioKind::track_circle: return "track_circle";
            case ScenarioKind::track_line: return "track_line";
            case ScenarioKind::pick_place: return "pick_place";
            case ScenarioKind::workspace: return "workspace";
        }
        return "unknown";
    }();
    return log;
}

}  // namespace softarm
